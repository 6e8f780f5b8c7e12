//! C ABI for `superweil`.
//!
//! Objects are opaque handles created by `sw_*_parse` / `sw_*_new` and
//! released with the matching `sw_*_free`. Every fallible call returns a
//! `SwStatus`; on failure `sw_last_error` gives a message for the calling
//! thread. Strings returned through `char **` are owned by the caller and
//! released with `sw_string_free`. Panics never cross the boundary.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use superweil::algebra::SuperWeilAlgebra;
use superweil::apoints::APoint;
use superweil::calculus::TangentVector;
use superweil::error::Error;
use superweil::notation::{parse_algebra, Assignment};
use superweil::scalar::{rational_to_string, Rational};
use superweil::superfunc::{parse_expr, Section, SuperDomain};

/// Result of every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Syntax = 3,
    Malformed = 4,
    Dimension = 5,
    Parity = 6,
    OutsideRegion = 7,
    FunctionDomain = 8,
    NeedsFloat = 9,
    AlgebraMismatch = 10,
    BufferTooSmall = 11,
    Other = 12,
    Panic = 13,
}

/// An algebra presentation.
pub struct SwAlgebra(SuperWeilAlgebra);

/// A section on a full superdomain `K^{p|q}`.
pub struct SwSection(Section);

/// Coordinate assignments of an A-point, evaluated exactly or in doubles
/// on demand.
pub struct SwPoint {
    domain: SuperDomain,
    algebra: SuperWeilAlgebra,
    assign: Assignment,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: impl Into<String>) {
    let s = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = s);
}

fn status_of(e: &Error) -> SwStatus {
    match e {
        Error::Syntax { .. } => SwStatus::Syntax,
        Error::Malformed(_) | Error::Unresolved(_) => SwStatus::Malformed,
        Error::Dimension(_) | Error::CoordinateOutOfRange(_) => SwStatus::Dimension,
        Error::Parity(_) | Error::AnalyticOnOdd(_) | Error::NotHomogeneous => SwStatus::Parity,
        Error::OutsideRegion(_) | Error::InvalidRegion(_) => SwStatus::OutsideRegion,
        Error::FunctionDomain { .. } => SwStatus::FunctionDomain,
        Error::NeedsFloat(_) => SwStatus::NeedsFloat,
        Error::AlgebraMismatch(_) | Error::MismatchedAmbients(_) => SwStatus::AlgebraMismatch,
        _ => SwStatus::Other,
    }
}

/// Runs `f`, mapping errors and panics to a status.
fn guard(f: impl FnOnce() -> Result<(), SwStatus>) -> SwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SwStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("internal panic");
            SwStatus::Panic
        }
    }
}

trait OrStatus<T> {
    fn or_status(self) -> Result<T, SwStatus>;
}

impl<T> OrStatus<T> for Result<T, Error> {
    fn or_status(self) -> Result<T, SwStatus> {
        self.map_err(|e| {
            set_error(e.to_string());
            status_of(&e)
        })
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, SwStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(SwStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        SwStatus::InvalidUtf8
    })
}

unsafe fn obj<'a, T>(p: *const T) -> Result<&'a T, SwStatus> {
    p.as_ref().ok_or_else(|| {
        set_error("null handle");
        SwStatus::NullPointer
    })
}

unsafe fn out<T>(p: *mut T, v: T) -> Result<(), SwStatus> {
    if p.is_null() {
        set_error("null output pointer");
        return Err(SwStatus::NullPointer);
    }
    p.write(v);
    Ok(())
}

unsafe fn slice<'a>(p: *const f64, n: usize) -> Result<&'a [f64], SwStatus> {
    if n == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        set_error("null array");
        return Err(SwStatus::NullPointer);
    }
    Ok(std::slice::from_raw_parts(p, n))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

/// Message of the last failed call on this thread (empty if none). Valid
/// until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn sw_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must come from this library and not be freed twice.
#[no_mangle]
pub unsafe extern "C" fn sw_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parses an algebra in the algebra notation (`"grassmann:2"`,
/// `"quot:trunc:1,1,3;t1^2"`, `"tensor:dual,dual"`, ...).
///
/// # Safety
/// `spec` is a NUL-terminated string; `out_alg` is writable.
#[no_mangle]
pub unsafe extern "C" fn sw_algebra_parse(spec: *const c_char, out_alg: *mut *mut SwAlgebra) -> SwStatus {
    guard(|| {
        let a = parse_algebra(text(spec)?).or_status()?;
        out(out_alg, Box::into_raw(Box::new(SwAlgebra(a))))
    })
}

/// # Safety
/// `a` comes from `sw_algebra_parse` and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sw_algebra_free(a: *mut SwAlgebra) {
    if !a.is_null() {
        drop(Box::from_raw(a));
    }
}

/// Dimension of the algebra (0 for a null handle).
///
/// # Safety
/// `a` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sw_algebra_dim(a: *const SwAlgebra) -> usize {
    a.as_ref().map_or(0, |a| a.0.dim())
}

/// Height of the algebra (0 for a null handle).
///
/// # Safety
/// `a` is null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn sw_algebra_height(a: *const SwAlgebra) -> usize {
    a.as_ref().map_or(0, |a| a.0.height())
}

/// The algebra as JSON (presentation and basis names).
///
/// # Safety
/// `a` is a live handle; `json` is writable.
#[no_mangle]
pub unsafe extern "C" fn sw_algebra_to_json(a: *const SwAlgebra, json: *mut *mut c_char) -> SwStatus {
    guard(|| {
        let a = obj(a)?;
        out(json, c_string(a.0.to_json().to_string()))
    })
}

/// Parses a section on the full domain `K^{p|q}`.
///
/// # Safety
/// `expr` is a NUL-terminated string; `out_sec` is writable.
#[no_mangle]
pub unsafe extern "C" fn sw_section_parse(expr: *const c_char, p: usize, q: usize, out_sec: *mut *mut SwSection) -> SwStatus {
    guard(|| {
        let e = parse_expr(text(expr)?, p, q).or_status()?;
        let s = Section::new(&SuperDomain::full(p, q), e).or_status()?;
        out(out_sec, Box::into_raw(Box::new(SwSection(s))))
    })
}

/// # Safety
/// `s` comes from `sw_section_parse` and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sw_section_free(s: *mut SwSection) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// An A-point of `K^{p|q}` over `alg` from assignments such as
/// `"x1=2, th1=z1, th2=z2"`. The algebra handle may be freed afterwards.
///
/// # Safety
/// Pointers are live / NUL-terminated / writable as appropriate.
#[no_mangle]
pub unsafe extern "C" fn sw_point_parse(
    alg: *const SwAlgebra,
    assignment: *const c_char,
    p: usize,
    q: usize,
    out_pt: *mut *mut SwPoint,
) -> SwStatus {
    guard(|| {
        let a = obj(alg)?;
        let assign = Assignment::parse(text(assignment)?).or_status()?;
        let domain = SuperDomain::full(p, q);
        // validate once in doubles so later calls only fail on evaluation
        assign.to_point::<f64>(&domain, &a.0).or_status()?;
        let pt = SwPoint {
            domain,
            algebra: a.0.clone(),
            assign,
        };
        out(out_pt, Box::into_raw(Box::new(pt)))
    })
}

/// # Safety
/// `x` comes from `sw_point_parse` and is not used afterwards.
#[no_mangle]
pub unsafe extern "C" fn sw_point_free(x: *mut SwPoint) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// Evaluates `s` at `x` in doubles, writing the coefficients in basis
/// order into `coeffs[0..len]`; `len` must be at least the algebra
/// dimension.
///
/// # Safety
/// Handles are live; `coeffs` has room for `len` doubles.
#[no_mangle]
pub unsafe extern "C" fn sw_eval_f64(x: *const SwPoint, s: *const SwSection, coeffs: *mut f64, len: usize) -> SwStatus {
    guard(|| {
        let (x, s) = (obj(x)?, obj(s)?);
        let pt: APoint<f64> = x.assign.to_point(&x.domain, &x.algebra).or_status()?;
        let v = pt.eval_ast(&s.0).or_status()?;
        let c = v.coeffs();
        if coeffs.is_null() {
            set_error("null coefficient buffer");
            return Err(SwStatus::NullPointer);
        }
        if len < c.len() {
            set_error(format!("buffer of {len} for an algebra of dimension {}", c.len()));
            return Err(SwStatus::BufferTooSmall);
        }
        std::slice::from_raw_parts_mut(coeffs, c.len()).copy_from_slice(c);
        Ok(())
    })
}

/// Evaluates `s` at `x` and returns the element as JSON: exact rationals
/// when `exact` is nonzero (fails with `NeedsFloat` on transcendental
/// sections), doubles otherwise.
///
/// # Safety
/// Handles are live; `json` is writable.
#[no_mangle]
pub unsafe extern "C" fn sw_eval_json(x: *const SwPoint, s: *const SwSection, exact: i32, json: *mut *mut c_char) -> SwStatus {
    guard(|| {
        let (x, s) = (obj(x)?, obj(s)?);
        let v = if exact != 0 {
            let pt: APoint<Rational> = x.assign.to_point(&x.domain, &x.algebra).or_status()?;
            pt.eval_ast(&s.0).or_status()?.to_json()
        } else {
            let pt: APoint<f64> = x.assign.to_point(&x.domain, &x.algebra).or_status()?;
            pt.eval_ast(&s.0).or_status()?.to_json()
        };
        out(json, c_string(v.to_string()))
    })
}

/// Value and directional derivatives of a section at `base` along
/// `(v_even, v_odd)`: `out3 = {s(base), Σ a_i ∂s/∂x_i, Σ b_j ∂s/∂θ_j}`.
/// Array lengths are the section's `p` and `q`.
///
/// # Safety
/// `s` is live; arrays hold `p`, `p`, `q` and 3 doubles.
#[no_mangle]
pub unsafe extern "C" fn sw_tangent(
    s: *const SwSection,
    base: *const f64,
    v_even: *const f64,
    v_odd: *const f64,
    out3: *mut f64,
) -> SwStatus {
    guard(|| {
        let s = obj(s)?;
        let u = s.0.domain();
        let (p, q) = (u.even_dim(), u.odd_dim());
        let tv = TangentVector::new(
            u,
            slice(base, p)?.to_vec(),
            slice(v_even, p)?.to_vec(),
            slice(v_odd, q)?.to_vec(),
        )
        .or_status()?;
        let t = tv.apply(u, &s.0).or_status()?;
        if out3.is_null() {
            set_error("null output array");
            return Err(SwStatus::NullPointer);
        }
        std::slice::from_raw_parts_mut(out3, 3).copy_from_slice(&[t.value, t.d_even, t.d_odd]);
        Ok(())
    })
}

/// Exact coefficient `index` of `s` at `x` as `"n"` or `"n/d"`.
///
/// # Safety
/// Handles are live; `value` is writable.
#[no_mangle]
pub unsafe extern "C" fn sw_eval_coefficient(x: *const SwPoint, s: *const SwSection, index: usize, value: *mut *mut c_char) -> SwStatus {
    guard(|| {
        let (x, s) = (obj(x)?, obj(s)?);
        let pt: APoint<Rational> = x.assign.to_point(&x.domain, &x.algebra).or_status()?;
        let v = pt.eval_ast(&s.0).or_status()?;
        let c = v.coeffs().get(index).ok_or_else(|| {
            set_error(format!("index {index} outside the basis"));
            SwStatus::Dimension
        })?;
        out(value, c_string(rational_to_string(c)))
    })
}
