//! A named registry of algebras, domains, sections, points, morphisms and
//! series, stored as a versioned JSON file. Entries keep their textual
//! forms; everything is re-parsed on use, so load/save is the identity.
//!
//! Domain references are either a defined name or a literal `p|q` for the
//! full `K^{p|q}`.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::algebra::SuperWeilAlgebra;
use crate::apoints::{APoint, DomainMorphism};
use crate::error::{Error, Result};
use crate::nattrans::TruncatedFormalSeries;
use crate::notation::{parse_algebra, Assignment};
use crate::scalar::Scalar;
use crate::superfunc::{Section, SuperDomain};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SectionEntry {
    pub domain: String,
    pub expr: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointEntry {
    pub domain: String,
    pub algebra: String,
    pub assign: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MorphismEntry {
    pub source: String,
    pub target: String,
    pub even: Vec<String>,
    pub odd: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Workspace {
    pub schema: u32,
    #[serde(default)]
    pub algebras: BTreeMap<String, String>,
    #[serde(default)]
    pub domains: BTreeMap<String, Value>,
    #[serde(default)]
    pub sections: BTreeMap<String, SectionEntry>,
    #[serde(default)]
    pub points: BTreeMap<String, PointEntry>,
    #[serde(default)]
    pub morphisms: BTreeMap<String, MorphismEntry>,
    #[serde(default)]
    pub series: BTreeMap<String, Value>,
}

impl Default for Workspace {
    fn default() -> Self {
        Workspace {
            schema: SCHEMA,
            algebras: BTreeMap::new(),
            domains: BTreeMap::new(),
            sections: BTreeMap::new(),
            points: BTreeMap::new(),
            morphisms: BTreeMap::new(),
            series: BTreeMap::new(),
        }
    }
}

fn unresolved(kind: &str, name: &str) -> Error {
    Error::Unresolved(format!("no {kind} named {name:?}"))
}

impl Workspace {
    /// Loads `path`, or an empty workspace if the file does not exist.
    pub fn load(path: &Path) -> Result<Workspace> {
        if !path.exists() {
            return Ok(Workspace::default());
        }
        let text = std::fs::read_to_string(path).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))?;
        Workspace::from_json_str(&text)
    }

    pub fn from_json_str(text: &str) -> Result<Workspace> {
        let w: Workspace = serde_json::from_str(text)?;
        if w.schema != SCHEMA {
            return Err(Error::Malformed(format!("workspace schema {} (expected {SCHEMA})", w.schema)));
        }
        w.validate()?;
        Ok(w)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("workspace serializes") + "\n"
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json_string()).map_err(|e| Error::Malformed(format!("{}: {e}", path.display())))
    }

    /// Every entry parses and every cross-reference resolves.
    pub fn validate(&self) -> Result<()> {
        for name in self.algebras.keys() {
            self.algebra(name)?;
        }
        for name in self.domains.keys() {
            self.domain(name)?;
        }
        for name in self.sections.keys() {
            self.section(name)?;
        }
        for name in self.points.keys() {
            self.point::<f64>(name)?;
        }
        for name in self.morphisms.keys() {
            self.morphism(name)?;
        }
        for name in self.series.keys() {
            self.series(name)?;
        }
        Ok(())
    }

    pub fn contains(&self, name: &str) -> bool {
        self.algebras.contains_key(name)
            || self.domains.contains_key(name)
            || self.sections.contains_key(name)
            || self.points.contains_key(name)
            || self.morphisms.contains_key(name)
            || self.series.contains_key(name)
    }

    /// The JSON of whatever entry is called `name`.
    pub fn entry(&self, name: &str) -> Option<Value> {
        let tagged = |kind: &str, v: Value| Some(serde_json::json!({"kind": kind, "name": name, "value": v}));
        if let Some(a) = self.algebras.get(name) {
            return tagged("algebra", Value::String(a.clone()));
        }
        if let Some(d) = self.domains.get(name) {
            return tagged("domain", d.clone());
        }
        if let Some(s) = self.sections.get(name) {
            return tagged("section", serde_json::to_value(s).ok()?);
        }
        if let Some(p) = self.points.get(name) {
            return tagged("point", serde_json::to_value(p).ok()?);
        }
        if let Some(m) = self.morphisms.get(name) {
            return tagged("morphism", serde_json::to_value(m).ok()?);
        }
        self.series.get(name).and_then(|s| tagged("series", s.clone()))
    }

    pub fn algebra(&self, name: &str) -> Result<SuperWeilAlgebra> {
        parse_algebra(self.algebras.get(name).ok_or_else(|| unresolved("algebra", name))?)
    }

    pub fn domain(&self, reference: &str) -> Result<SuperDomain> {
        if let Some(v) = self.domains.get(reference) {
            return SuperDomain::from_json(v);
        }
        parse_dims(reference).map(|(p, q)| SuperDomain::full(p, q)).ok_or_else(|| unresolved("domain", reference))
    }

    pub fn section(&self, name: &str) -> Result<Section> {
        let e = self.sections.get(name).ok_or_else(|| unresolved("section", name))?;
        Section::parse(&self.domain(&e.domain)?, &e.expr)
    }

    pub fn point<S: Scalar>(&self, name: &str) -> Result<APoint<S>> {
        let e = self.points.get(name).ok_or_else(|| unresolved("point", name))?;
        Assignment::parse(&e.assign)?.to_point(&self.domain(&e.domain)?, &self.algebra(&e.algebra)?)
    }

    pub fn morphism(&self, name: &str) -> Result<DomainMorphism> {
        let e = self.morphisms.get(name).ok_or_else(|| unresolved("morphism", name))?;
        let even: Vec<&str> = e.even.iter().map(String::as_str).collect();
        let odd: Vec<&str> = e.odd.iter().map(String::as_str).collect();
        DomainMorphism::parse(&self.domain(&e.source)?, &self.domain(&e.target)?, &even, &odd)
    }

    pub fn series(&self, name: &str) -> Result<TruncatedFormalSeries> {
        TruncatedFormalSeries::from_json(self.series.get(name).ok_or_else(|| unresolved("series", name))?)
    }
}

/// `"p|q"` → `(p, q)`.
pub fn parse_dims(text: &str) -> Option<(usize, usize)> {
    let (p, q) = text.split_once('|')?;
    Some((p.trim().parse().ok()?, q.trim().parse().ok()?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Workspace {
        let mut w = Workspace::default();
        w.algebras.insert("G".into(), "grassmann:2".into());
        w.domains.insert("U".into(), SuperDomain::boxed(2, vec![0.0], vec![5.0]).unwrap().to_json());
        w.sections.insert("s".into(), SectionEntry { domain: "U".into(), expr: "x1 + theta1*theta2".into() });
        w.points.insert(
            "x".into(),
            PointEntry { domain: "U".into(), algebra: "G".into(), assign: "x1=2, th1=z1, th2=z2".into() },
        );
        w.morphisms.insert(
            "phi".into(),
            MorphismEntry { source: "U".into(), target: "1|0".into(), even: vec!["x1^2".into()], odd: vec![] },
        );
        let f = TruncatedFormalSeries::from_morphism(&w.morphism("phi").unwrap(), 2).unwrap();
        w.series.insert("F".into(), f.to_json());
        w
    }

    #[test]
    fn save_load_identity() {
        let w = sample();
        w.validate().unwrap();
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("ws.json");
        w.save(&path).unwrap();
        let back = Workspace::load(&path).unwrap();
        assert_eq!(back, w);
        assert_eq!(back.to_json_string(), std::fs::read_to_string(&path).unwrap());
    }

    #[test]
    fn references_resolve() {
        let w = sample();
        let x = w.point::<crate::scalar::Rational>("x").unwrap();
        let v = x.eval_ast(&w.section("s").unwrap()).unwrap();
        assert_eq!(v.to_json().to_string(), r#"{"1":"2","z1z2":"1"}"#);
        assert_eq!(w.entry("G").unwrap()["kind"], "algebra");
        assert!(w.entry("nope").is_none());
    }

    #[test]
    fn dangling_references_rejected() {
        let mut w = sample();
        w.points.get_mut("x").unwrap().algebra = "H".into();
        assert!(matches!(w.validate(), Err(Error::Unresolved(_))));
        let text = sample().to_json_string().replace("\"schema\": 1", "\"schema\": 2");
        assert!(Workspace::from_json_str(&text).is_err());
    }

    #[test]
    fn missing_file_is_empty() {
        let dir = tempfile::tempdir().unwrap();
        assert_eq!(Workspace::load(&dir.path().join("none.json")).unwrap(), Workspace::default());
    }
}
