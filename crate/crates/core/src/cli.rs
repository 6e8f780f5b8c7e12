//! The `superweil` command line. Results go to stdout as one line of JSON;
//! failures print `error: ...` to stderr and exit with 1 (domain errors) or
//! 2 (usage errors: syntax, malformed input, unresolved names).

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::algebra::{Monomial, SuperWeilAlgebra};
use crate::apoints::{APoint, DomainMorphism};
use crate::calculus::{transitivity_point, Distribution, TangentVector};
use crate::error::{Error, Result};
use crate::json::scalar_list;
use crate::nattrans::{check_comes_from_morphism, TruncatedFormalSeries};
use crate::notation::{parse_algebra, Assignment};
use crate::scalar::{Rational, Scalar};
use crate::selftest;
use crate::superfunc::{Expr, Section, SuperDomain};
use crate::workspace::{parse_dims, MorphismEntry, PointEntry, SectionEntry, Workspace};

#[derive(Parser, Debug)]
#[command(name = "superweil", version, about = "Super Weil algebras and A-points of superdomains")]
pub struct Cli {
    /// Scalar field: exact rationals, doubles, or rationals unless a
    /// transcendental function appears.
    #[arg(long, global = true, value_enum, default_value_t = ScalarMode::Auto)]
    pub scalar: ScalarMode,

    /// Workspace file used by `define`, `show` and `@name` references.
    #[arg(long, global = true, default_value = "superweil.json")]
    pub workspace: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ScalarMode {
    Auto,
    Rational,
    Float,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Ast,
    Taylor,
}

/// Twice the largest height the property battery generates.
pub const DEFAULT_ORDER: u32 = 12;

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Describe an algebra such as "grassmann:2" or "quot:trunc:1,1,3;t1^2".
    Algebra { spec: String },
    /// Evaluate a section at an A-point.
    Eval {
        #[arg(long)]
        algebra: Option<String>,
        /// "x1=2, th1=z1" or @name
        #[arg(long)]
        point: String,
        /// expression or @name
        #[arg(long)]
        section: String,
        /// "p|q" or a domain name; inferred from the inputs if absent
        #[arg(long)]
        domain: Option<String>,
        #[arg(long, value_enum, default_value_t = Method::Ast)]
        method: Method,
    },
    /// Value and directional derivatives of a section through the super dual numbers.
    Tangent {
        #[arg(long)]
        base: String,
        #[arg(long = "vE")]
        v_even: String,
        #[arg(long = "vO", default_value = "")]
        v_odd: String,
        #[arg(long)]
        section: String,
    },
    /// Pair a point-supported distribution with a section.
    Dist {
        #[arg(long)]
        base: String,
        #[arg(long, short = 'k')]
        order: u32,
        /// "x1theta1=1, 1=-2": partial names with coefficients
        #[arg(long)]
        coeffs: String,
        #[arg(long)]
        section: String,
        #[arg(long)]
        domain: Option<String>,
    },
    /// Truncated series of a superdomain morphism.
    Series {
        /// @name of a defined morphism
        #[arg(long, conflicts_with_all = ["source", "even", "odd"])]
        morphism: Option<String>,
        #[arg(long)]
        source: Option<String>,
        /// even pullbacks separated by ';'
        #[arg(long, default_value = "")]
        even: String,
        /// odd pullbacks separated by ';'
        #[arg(long, default_value = "")]
        odd: String,
        /// truncation order; the default covers every algebra of height ≤ 6
        #[arg(long, short = 'N', default_value_t = DEFAULT_ORDER)]
        order: u32,
    },
    /// Check the derivative recursion of a series at sample points.
    CheckNat {
        /// inline JSON, @name or a file path
        #[arg(long)]
        series: String,
        /// "0.5; -1, 2": points separated by ';'
        #[arg(long)]
        points: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Compare direct evaluation over A ⊗ B0 with the iterated one.
    CheckTrans {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b0: String,
        /// coordinates in the generators of A ⊗ B0 (A's first)
        #[arg(long)]
        point: String,
        #[arg(long)]
        section: String,
    },
    /// Run the property battery and print a pass/fail table.
    Selftest {
        /// defaults to $SUPERWEIL_SEED, then a fixed seed
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// multiplier on the number of cases per suite
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Add a named entry to the workspace.
    Define {
        #[command(subcommand)]
        what: Define,
    },
    /// Print one workspace entry, or the whole workspace.
    Show { name: Option<String> },
}

#[derive(Subcommand, Debug)]
pub enum Define {
    Algebra {
        name: String,
        spec: String,
    },
    Domain {
        name: String,
        #[arg(long)]
        dims: String,
        /// comma-separated lower bounds ("-inf" allowed)
        #[arg(long)]
        lower: Option<String>,
        #[arg(long)]
        upper: Option<String>,
    },
    Section {
        name: String,
        #[arg(long)]
        domain: String,
        expr: String,
    },
    Point {
        name: String,
        #[arg(long)]
        domain: String,
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        assign: String,
    },
    Morphism {
        name: String,
        #[arg(long)]
        source: String,
        #[arg(long)]
        target: String,
        #[arg(long, default_value = "")]
        even: String,
        #[arg(long, default_value = "")]
        odd: String,
    },
    Series {
        name: String,
        #[arg(long)]
        morphism: String,
        /// truncation order; the default covers every algebra of height ≤ 6
        #[arg(long, short = 'N', default_value_t = DEFAULT_ORDER)]
        order: u32,
    },
}

/// Entry point of the binary.
pub fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            print!("{out}");
            ExitCode::from(out_code(&cli, &out))
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn out_code(cli: &Cli, out: &str) -> u8 {
    match cli.command {
        Command::Selftest { .. } if out.contains("FAIL") => 1,
        _ => 0,
    }
}

pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Syntax { .. } | Error::Malformed(_) | Error::Unresolved(_) => 2,
        _ => 1,
    }
}

/// Runs a parsed command and returns what it prints.
pub fn run(cli: &Cli) -> Result<String> {
    let ctx = Ctx {
        mode: cli.scalar,
        path: cli.workspace.clone(),
    };
    let v = match &cli.command {
        Command::Algebra { spec } => {
            let a = ctx.algebra(spec)?;
            let mut v = a.to_json();
            v["height"] = json!(a.height());
            v["width"] = json!(a.width());
            v
        }
        Command::Eval {
            algebra,
            point,
            section,
            domain,
            method,
        } => ctx.eval(algebra.as_deref(), point, section, domain.as_deref(), *method)?,
        Command::Tangent {
            base,
            v_even,
            v_odd,
            section,
        } => ctx.tangent(base, v_even, v_odd, section)?,
        Command::Dist {
            base,
            order,
            coeffs,
            section,
            domain,
        } => ctx.dist(base, *order, coeffs, section, domain.as_deref())?,
        Command::Series {
            morphism,
            source,
            even,
            odd,
            order,
        } => {
            let phi = match morphism {
                Some(m) => ctx.workspace()?.morphism(strip_ref(m))?,
                None => {
                    let src = source
                        .as_deref()
                        .ok_or_else(|| Error::Malformed("series needs --morphism or --source".into()))?;
                    inline_morphism(&ctx.workspace_if_named(src)?, src, None, even, odd)?
                }
            };
            TruncatedFormalSeries::from_morphism(&phi, *order)?.to_json()
        }
        Command::CheckNat { series, points, tol } => {
            let f = ctx.series(series)?;
            let pts = parse_points(points)?;
            check_comes_from_morphism(&f, &pts, *tol)?.to_json()
        }
        Command::CheckTrans { a, b0, point, section } => ctx.check_trans(a, b0, point, section)?,
        Command::Selftest { seed, jobs, scale } => {
            let seed = match seed {
                Some(s) => *s,
                None => match std::env::var("SUPERWEIL_SEED") {
                    Ok(s) => s
                        .trim()
                        .parse()
                        .map_err(|_| Error::Malformed(format!("SUPERWEIL_SEED={s:?} is not an integer")))?,
                    Err(_) => selftest::DEFAULT_SEED,
                },
            };
            let res = selftest::run(seed, *jobs, *scale);
            let passed = res.iter().filter(|r| r.passed()).count();
            return Ok(format!(
                "seed {seed}\n{}{passed}/{} suites passed\n",
                selftest::table(&res),
                res.len()
            ));
        }
        Command::Define { what } => ctx.define(what)?,
        Command::Show { name } => {
            let w = ctx.workspace()?;
            match name {
                None => serde_json::to_value(&w)?,
                Some(n) => w.entry(strip_ref(n)).ok_or_else(|| Error::Unresolved(format!("no entry named {n:?}")))?,
            }
        }
    };
    Ok(format!("{}\n", serde_json::to_string(&v)?))
}

fn strip_ref(s: &str) -> &str {
    s.strip_prefix('@').unwrap_or(s)
}

fn reference(s: &str) -> Option<&str> {
    s.trim().strip_prefix('@')
}

fn parse_points(text: &str) -> Result<Vec<Vec<f64>>> {
    text.split(';').filter(|p| !p.trim().is_empty()).map(scalar_list::<f64>).collect()
}

fn split_exprs(text: &str) -> Vec<&str> {
    text.split(';').map(str::trim).filter(|s| !s.is_empty()).collect()
}

fn inline_morphism(
    w: &Workspace,
    source: &str,
    target: Option<&str>,
    even: &str,
    odd: &str,
) -> Result<DomainMorphism> {
    let (even, odd) = (split_exprs(even), split_exprs(odd));
    let src = w.domain(strip_ref(source))?;
    let tgt = match target {
        Some(t) => w.domain(strip_ref(t))?,
        None => SuperDomain::full(even.len(), odd.len()),
    };
    DomainMorphism::parse(&src, &tgt, &even, &odd)
}

struct Ctx {
    mode: ScalarMode,
    path: PathBuf,
}

/// A section and, for named sections, its domain.
struct SectionIn {
    expr: Expr,
    domain: Option<SuperDomain>,
}

impl Ctx {
    fn workspace(&self) -> Result<Workspace> {
        Workspace::load(&self.path)
    }

    fn workspace_if_named(&self, s: &str) -> Result<Workspace> {
        if reference(s).is_some() || parse_dims(s).is_none() {
            self.workspace()
        } else {
            Ok(Workspace::default())
        }
    }

    fn float(&self, transcendental: bool) -> bool {
        match self.mode {
            ScalarMode::Auto => transcendental,
            ScalarMode::Rational => false,
            ScalarMode::Float => true,
        }
    }

    fn algebra(&self, spec: &str) -> Result<SuperWeilAlgebra> {
        match reference(spec) {
            Some(name) => self.workspace()?.algebra(name),
            None => parse_algebra(spec),
        }
    }

    fn section_in(&self, text: &str) -> Result<SectionIn> {
        match reference(text) {
            Some(name) => {
                let s = self.workspace()?.section(name)?;
                Ok(SectionIn {
                    expr: s.expr().clone(),
                    domain: Some(s.domain().clone()),
                })
            }
            None => Ok(SectionIn {
                expr: crate::superfunc::parse(text)?,
                domain: None,
            }),
        }
    }

    fn domain_ref(&self, text: &str) -> Result<SuperDomain> {
        self.workspace_if_named(text)?.domain(strip_ref(text))
    }

    fn series(&self, text: &str) -> Result<TruncatedFormalSeries> {
        if let Some(name) = reference(text) {
            return self.workspace()?.series(name);
        }
        let t = text.trim();
        let v: Value = if t.starts_with('{') {
            serde_json::from_str(t)?
        } else {
            let body = std::fs::read_to_string(t).map_err(|e| Error::Malformed(format!("{t}: {e}")))?;
            serde_json::from_str(&body)?
        };
        TruncatedFormalSeries::from_json(&v)
    }

    /// Domain: explicit, else the section's, else the point's, else the
    /// full `K^{p|q}` spanned by every coordinate mentioned.
    fn pick_domain(
        &self,
        explicit: Option<&str>,
        section: &SectionIn,
        point_domain: Option<&SuperDomain>,
        assign: Option<&Assignment>,
    ) -> Result<SuperDomain> {
        if let Some(d) = explicit {
            return self.domain_ref(d);
        }
        if let Some(d) = section.domain.as_ref().or(point_domain) {
            return Ok(d.clone());
        }
        let (mut p, mut q) = (section.expr.even_vars(), section.expr.odd_vars());
        if let Some(a) = assign {
            p = p.max(a.even_dim());
            q = q.max(a.odd_dim());
        }
        Ok(SuperDomain::full(p, q))
    }

    fn eval(
        &self,
        algebra: Option<&str>,
        point: &str,
        section: &str,
        domain: Option<&str>,
        method: Method,
    ) -> Result<Value> {
        let s = self.section_in(section)?;
        let (alg, assign, point_domain) = match reference(point) {
            Some(name) => {
                let w = self.workspace()?;
                let e = w.points.get(name).ok_or_else(|| Error::Unresolved(format!("no point named {name:?}")))?;
                if algebra.is_some() {
                    return Err(Error::Malformed("--algebra conflicts with a named point".into()));
                }
                (w.algebra(&e.algebra)?, Assignment::parse(&e.assign)?, Some(w.domain(&e.domain)?))
            }
            None => {
                let a = algebra.ok_or_else(|| Error::Malformed("eval needs --algebra for an inline point".into()))?;
                (self.algebra(a)?, Assignment::parse(point)?, None)
            }
        };
        let u = self.pick_domain(domain, &s, point_domain.as_ref(), Some(&assign))?;
        let sec = Section::new(&u, s.expr.clone())?;
        fn go<S: Scalar>(u: &SuperDomain, alg: &SuperWeilAlgebra, a: &Assignment, s: &Section, m: Method) -> Result<Value> {
            let x: APoint<S> = a.to_point(u, alg)?;
            let v = match m {
                Method::Ast => x.eval_ast(s)?,
                Method::Taylor => x.eval_taylor(s)?,
            };
            Ok(v.to_json())
        }
        if self.float(sec.expr().is_transcendental() || assign.is_transcendental()) {
            go::<f64>(&u, &alg, &assign, &sec, method)
        } else {
            go::<Rational>(&u, &alg, &assign, &sec, method)
        }
    }

    fn tangent(&self, base: &str, v_even: &str, v_odd: &str, section: &str) -> Result<Value> {
        let s = self.section_in(section)?;
        fn go<S: Scalar>(base: &str, ve: &str, vo: &str, s: &SectionIn) -> Result<Value> {
            let base: Vec<S> = scalar_list(base)?;
            let ve: Vec<S> = scalar_list(ve)?;
            let mut vo: Vec<S> = scalar_list(vo)?;
            let u = match &s.domain {
                Some(d) => d.clone(),
                None => SuperDomain::full(base.len(), s.expr.odd_vars().max(vo.len())),
            };
            vo.resize(u.odd_dim().max(vo.len()), S::zero());
            let sec = Section::new(&u, s.expr.clone())?;
            let t = TangentVector::new(&u, base, ve, vo)?.apply(&u, &sec)?;
            let mut out = json!({"value": t.value.to_json(), "d": t.d_even.to_json()});
            if u.odd_dim() > 0 {
                out["d_odd"] = t.d_odd.to_json();
            }
            Ok(out)
        }
        if self.float(s.expr.is_transcendental()) {
            go::<f64>(base, v_even, v_odd, &s)
        } else {
            go::<Rational>(base, v_even, v_odd, &s)
        }
    }

    fn dist(&self, base: &str, order: u32, coeffs: &str, section: &str, domain: Option<&str>) -> Result<Value> {
        let s = self.section_in(section)?;
        fn go<S: Scalar>(u: &SuperDomain, base: &str, order: u32, coeffs: &str, s: &Section) -> Result<Value> {
            let base: Vec<S> = scalar_list(base)?;
            let mut map = BTreeMap::new();
            for part in coeffs.split(',').filter(|p| !p.trim().is_empty()) {
                let (k, v) = part
                    .split_once('=')
                    .ok_or_else(|| Error::Malformed(format!("expected partial=coefficient in {:?}", part.trim())))?;
                let m = Monomial::parse_with(k.trim(), u.even_dim(), u.odd_dim(), "x", "theta")
                    .ok_or_else(|| Error::Malformed(format!("{:?} is not a partial on {u}", k.trim())))?;
                let c: Vec<S> = scalar_list(v)?;
                let [c] = <[S; 1]>::try_from(c).map_err(|_| Error::Malformed(format!("bad coefficient {v:?}")))?;
                map.insert((m.nu().to_vec(), m.odd_mask()), c);
            }
            let d = Distribution::new(u, base, order, map)?;
            Ok(json!({"value": d.pair(u, s)?.to_json()}))
        }
        let p = scalar_list::<f64>(base)?.len();
        let u = match (domain, &s.domain) {
            (Some(d), _) => self.domain_ref(d)?,
            (None, Some(d)) => d.clone(),
            (None, None) => {
                let q = coeffs
                    .split(',')
                    .filter_map(|c| c.split_once('='))
                    .filter_map(|(k, _)| k.trim().rfind("theta").map(|i| k.trim()[i + 5..].parse::<usize>().unwrap_or(0)))
                    .max()
                    .unwrap_or(0);
                SuperDomain::full(p, s.expr.odd_vars().max(q))
            }
        };
        let sec = Section::new(&u, s.expr.clone())?;
        if self.float(sec.expr().is_transcendental()) {
            go::<f64>(&u, base, order, coeffs, &sec)
        } else {
            go::<Rational>(&u, base, order, coeffs, &sec)
        }
    }

    fn check_trans(&self, a: &str, b0: &str, point: &str, section: &str) -> Result<Value> {
        let (a, b0) = (self.algebra(a)?, self.algebra(b0)?);
        let s = self.section_in(section)?;
        let assign = Assignment::parse(point)?;
        let u = self.pick_domain(None, &s, None, Some(&assign))?;
        let sec = Section::new(&u, s.expr.clone())?;
        fn go<S: Scalar>(u: &SuperDomain, a: &SuperWeilAlgebra, b0: &SuperWeilAlgebra, asg: &Assignment, s: &Section) -> Result<Value> {
            if b0.odd_generators() > 0 {
                return Err(Error::NotPurelyEven);
            }
            let t = a.tensor(b0)?;
            let x: APoint<S> = asg.to_point(u, &t.algebra)?;
            let tp = transitivity_point(u, a, b0, x.even_values().to_vec(), x.odd_values().to_vec())?;
            let c = tp.check(s)?;
            Ok(json!({
                "direct": c.direct.to_json(),
                "iterated": c.iterated.to_json(),
                "residual": c.residual,
            }))
        }
        if self.float(sec.expr().is_transcendental() || assign.is_transcendental()) {
            go::<f64>(&u, &a, &b0, &assign, &sec)
        } else {
            go::<Rational>(&u, &a, &b0, &assign, &sec)
        }
    }

    fn define(&self, what: &Define) -> Result<Value> {
        let mut w = self.workspace()?;
        let (kind, name) = match what {
            Define::Algebra { name, .. } => ("algebra", name),
            Define::Domain { name, .. } => ("domain", name),
            Define::Section { name, .. } => ("section", name),
            Define::Point { name, .. } => ("point", name),
            Define::Morphism { name, .. } => ("morphism", name),
            Define::Series { name, .. } => ("series", name),
        };
        if name.is_empty() || name.starts_with('@') || parse_dims(name).is_some() {
            return Err(Error::Malformed(format!("{name:?} cannot be used as a name")));
        }
        if w.contains(name) {
            return Err(Error::Malformed(format!("{name:?} is already defined")));
        }
        match what {
            Define::Algebra { spec, .. } => {
                parse_algebra(spec)?;
                w.algebras.insert(name.clone(), spec.clone());
            }
            Define::Domain { dims, lower, upper, .. } => {
                let (p, q) = parse_dims(dims).ok_or_else(|| Error::Malformed(format!("--dims {dims:?} is not p|q")))?;
                let bound = |b: &Option<String>, inf: f64| -> Result<Vec<f64>> {
                    match b {
                        None => Ok(vec![inf; p]),
                        Some(t) => scalar_list::<f64>(t),
                    }
                };
                let d = SuperDomain::boxed(q, bound(lower, f64::NEG_INFINITY)?, bound(upper, f64::INFINITY)?)?;
                if d.even_dim() != p {
                    return Err(Error::Dimension(format!("bounds do not have {p} entries")));
                }
                w.domains.insert(name.clone(), d.to_json());
            }
            Define::Section { domain, expr, .. } => {
                w.sections.insert(name.clone(), SectionEntry { domain: strip_ref(domain).into(), expr: expr.clone() });
            }
            Define::Point { domain, algebra, assign, .. } => {
                w.points.insert(
                    name.clone(),
                    PointEntry { domain: strip_ref(domain).into(), algebra: strip_ref(algebra).into(), assign: assign.clone() },
                );
            }
            Define::Morphism { source, target, even, odd, .. } => {
                w.morphisms.insert(
                    name.clone(),
                    MorphismEntry {
                        source: strip_ref(source).into(),
                        target: strip_ref(target).into(),
                        even: split_exprs(even).into_iter().map(String::from).collect(),
                        odd: split_exprs(odd).into_iter().map(String::from).collect(),
                    },
                );
            }
            Define::Series { morphism, order, .. } => {
                let f = TruncatedFormalSeries::from_morphism(&w.morphism(strip_ref(morphism))?, *order)?;
                w.series.insert(name.clone(), f.to_json());
            }
        }
        w.validate()?;
        w.save(&self.path)?;
        Ok(json!({"defined": name, "kind": kind}))
    }
}
