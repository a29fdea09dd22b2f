//! C ABI over the `zeta3` crate.
//!
//! Every fallible function returns a [`Zeta3Status`] and writes its result
//! through an out-pointer. On failure, [`zeta3_last_error_message`] describes
//! the most recent error on the calling thread. Strings returned through
//! out-pointers are owned by the caller and released with [`zeta3_string_free`];
//! handles are released with their matching `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use num_bigint::BigInt;
use zeta3::certificate::{denominator_certificate, verify_certificate, Certificate};
use zeta3::cli::{certificate_from_str, certificate_to_json};
use zeta3::exactnum::format_rational;
use zeta3::legendre::{shifted_legendre, IntPolynomial};
use zeta3::linearforms::{jj_linear_form_with, SequenceRecord};
use zeta3::quadrature::{j_quadrature, jj_quadrature, jj_triple_quadrature, QuadratureResult};
use zeta3::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Zeta3Status {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    Domain = 3,
    SearchExhausted = 4,
    VerificationFailed = 5,
    Internal = 6,
}

/// Shifted Legendre polynomial.
pub struct Zeta3Polynomial {
    inner: IntPolynomial,
}

/// The record (A_n, B_n, d_n) with an enclosure of u_n.
pub struct Zeta3Record {
    inner: SequenceRecord,
}

pub struct Zeta3Certificate {
    inner: Certificate,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Zeta3Quadrature {
    pub value: f64,
    pub error_estimate: f64,
    pub evaluations: u64,
    pub level: u32,
}

impl From<QuadratureResult> for Zeta3Quadrature {
    fn from(q: QuadratureResult) -> Self {
        Self {
            value: q.value,
            error_estimate: q.error_estimate,
            evaluations: q.evaluations,
            level: q.level,
        }
    }
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: Zeta3Status, msg: impl Into<String>) -> Zeta3Status {
    set_error(msg);
    status
}

fn status_of(e: &Error) -> Zeta3Status {
    match e {
        Error::Domain(_) => Zeta3Status::Domain,
        Error::Parse(_) => Zeta3Status::InvalidArgument,
        Error::SearchExhausted(_) => Zeta3Status::SearchExhausted,
        Error::Invariant(_) => Zeta3Status::Internal,
    }
}

/// Runs `body`, turning errors and panics into a status code.
fn guard(body: impl FnOnce() -> Result<(), Zeta3Status>) -> Zeta3Status {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => Zeta3Status::Ok,
        Ok(Err(status)) => status,
        Err(_) => fail(Zeta3Status::Internal, "panic inside zeta3"),
    }
}

fn lib<T>(r: zeta3::Result<T>) -> Result<T, Zeta3Status> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn non_null<T>(p: *const T, name: &str) -> Result<(), Zeta3Status> {
    if p.is_null() {
        Err(fail(Zeta3Status::NullPointer, format!("{name} is null")))
    } else {
        Ok(())
    }
}

/// # Safety
/// `out` must be valid for writes.
unsafe fn write_string(out: *mut *mut c_char, s: String) -> Result<(), Zeta3Status> {
    non_null(out, "out")?;
    let c = CString::new(s).map_err(|_| fail(Zeta3Status::Internal, "string contains NUL"))?;
    *out = c.into_raw();
    Ok(())
}

/// # Safety
/// `p` must be null or a valid NUL-terminated string.
unsafe fn read_str<'a>(p: *const c_char, name: &str) -> Result<&'a str, Zeta3Status> {
    non_null(p, name)?;
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(Zeta3Status::InvalidArgument, format!("{name} is not UTF-8")))
}

/// Message for the last failure on this thread, or null. Valid until the
/// next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn zeta3_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version, statically allocated.
#[no_mangle]
pub extern "C" fn zeta3_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zeta3_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zeta3_legendre_new(n: u64, out: *mut *mut Zeta3Polynomial) -> Zeta3Status {
    guard(|| {
        non_null(out, "out")?;
        *out = Box::into_raw(Box::new(Zeta3Polynomial {
            inner: shifted_legendre(n),
        }));
        Ok(())
    })
}

/// # Safety
/// `p` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zeta3_polynomial_degree(p: *const Zeta3Polynomial, out: *mut u64) -> Zeta3Status {
    guard(|| {
        non_null(p, "polynomial")?;
        non_null(out, "out")?;
        let deg = (*p)
            .inner
            .degree()
            .ok_or_else(|| fail(Zeta3Status::Domain, "zero polynomial has no degree"))?;
        *out = deg as u64;
        Ok(())
    })
}

/// Coefficient of x^k as a decimal string.
///
/// # Safety
/// `p` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zeta3_polynomial_coefficient(
    p: *const Zeta3Polynomial,
    k: u64,
    out: *mut *mut c_char,
) -> Zeta3Status {
    guard(|| {
        non_null(p, "polynomial")?;
        let c = (*p)
            .inner
            .coeffs()
            .get(k as usize)
            .map(ToString::to_string)
            .unwrap_or_else(|| "0".to_owned());
        write_string(out, c)
    })
}

/// Space-separated coefficients in increasing degree.
///
/// # Safety
/// `p` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zeta3_polynomial_to_string(p: *const Zeta3Polynomial, out: *mut *mut c_char) -> Zeta3Status {
    guard(|| {
        non_null(p, "polynomial")?;
        write_string(out, (*p).inner.to_string())
    })
}

/// # Safety
/// `p` must be null or a handle from [`zeta3_legendre_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zeta3_polynomial_free(p: *mut Zeta3Polynomial) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// The n-th record with ζ(3) enclosed by `precision` series terms.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zeta3_record_new(n: u64, precision: u64, out: *mut *mut Zeta3Record) -> Zeta3Status {
    guard(|| {
        non_null(out, "out")?;
        let inner = lib(jj_linear_form_with(n, precision))?;
        *out = Box::into_raw(Box::new(Zeta3Record { inner }));
        Ok(())
    })
}

/// A_n, B_n and d_n as decimal strings. Any out-pointer may be null.
///
/// # Safety
/// `r` must be a live handle; non-null out-pointers valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zeta3_record_integers(
    r: *const Zeta3Record,
    a: *mut *mut c_char,
    b: *mut *mut c_char,
    d: *mut *mut c_char,
) -> Zeta3Status {
    guard(|| {
        non_null(r, "record")?;
        let rec = &(*r).inner;
        for (out, v) in [(a, &rec.a), (b, &rec.b), (d, &rec.d)] {
            if !out.is_null() {
                write_string(out, v.to_string())?;
            }
        }
        Ok(())
    })
}

/// Endpoints of the u_n enclosure as "num/den" strings.
///
/// # Safety
/// `r` must be a live handle; `lo` and `hi` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zeta3_record_u_enclosure(
    r: *const Zeta3Record,
    lo: *mut *mut c_char,
    hi: *mut *mut c_char,
) -> Zeta3Status {
    guard(|| {
        non_null(r, "record")?;
        non_null(lo, "lo")?;
        non_null(hi, "hi")?;
        let u = &(*r).inner.u_enclosure;
        write_string(lo, format_rational(u.lo()))?;
        write_string(hi, format_rational(u.hi()))
    })
}

/// # Safety
/// `r` must be null or a handle from [`zeta3_record_new`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zeta3_record_free(r: *mut Zeta3Record) {
    if !r.is_null() {
        drop(Box::from_raw(r));
    }
}

/// Searches for a certificate excluding denominators up to `q_max`, a
/// decimal string.
///
/// # Safety
/// `q_max` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zeta3_certificate_new(
    q_max: *const c_char,
    precision: u64,
    out: *mut *mut Zeta3Certificate,
) -> Zeta3Status {
    guard(|| {
        non_null(out, "out")?;
        let q: BigInt = read_str(q_max, "q_max")?
            .trim()
            .parse()
            .map_err(|_| fail(Zeta3Status::InvalidArgument, "q_max is not an integer"))?;
        let inner = lib(denominator_certificate(&q, precision))?;
        *out = Box::into_raw(Box::new(Zeta3Certificate { inner }));
        Ok(())
    })
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zeta3_certificate_from_json(
    json: *const c_char,
    out: *mut *mut Zeta3Certificate,
) -> Zeta3Status {
    guard(|| {
        non_null(out, "out")?;
        let inner = lib(certificate_from_str(read_str(json, "json")?))?;
        *out = Box::into_raw(Box::new(Zeta3Certificate { inner }));
        Ok(())
    })
}

/// # Safety
/// `c` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zeta3_certificate_to_json(c: *const Zeta3Certificate, out: *mut *mut c_char) -> Zeta3Status {
    guard(|| {
        non_null(c, "certificate")?;
        write_string(out, certificate_to_json(&(*c).inner).to_string())
    })
}

/// # Safety
/// `c` must be a live handle; `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zeta3_certificate_n(c: *const Zeta3Certificate, out: *mut u64) -> Zeta3Status {
    guard(|| {
        non_null(c, "certificate")?;
        non_null(out, "out")?;
        *out = (*c).inner.n;
        Ok(())
    })
}

/// Recomputes the certificate. Returns `Ok` when it holds and
/// `VerificationFailed` otherwise.
///
/// # Safety
/// `c` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn zeta3_certificate_verify(c: *const Zeta3Certificate) -> Zeta3Status {
    guard(|| {
        non_null(c, "certificate")?;
        if verify_certificate(&(*c).inner) {
            Ok(())
        } else {
            Err(fail(Zeta3Status::VerificationFailed, "certificate does not recompute"))
        }
    })
}

/// # Safety
/// `c` must be null or a certificate handle, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn zeta3_certificate_free(c: *mut Zeta3Certificate) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// J_rs by quadrature.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zeta3_j_quadrature(r: u32, s: u32, tol: f64, out: *mut Zeta3Quadrature) -> Zeta3Status {
    guard(|| {
        non_null(out, "out")?;
        *out = lib(j_quadrature(r, s, tol))?.into();
        Ok(())
    })
}

/// 𝔍_n as a double integral.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zeta3_jj_quadrature(n: u64, tol: f64, out: *mut Zeta3Quadrature) -> Zeta3Status {
    guard(|| {
        non_null(out, "out")?;
        *out = lib(jj_quadrature(n, tol))?.into();
        Ok(())
    })
}

/// 𝔍_n as a triple integral.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn zeta3_jj_triple_quadrature(n: u64, tol: f64, out: *mut Zeta3Quadrature) -> Zeta3Status {
    guard(|| {
        non_null(out, "out")?;
        *out = lib(jj_triple_quadrature(n, tol))?.into();
        Ok(())
    })
}
