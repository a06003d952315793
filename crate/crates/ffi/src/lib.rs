//! C interface to the `cubal` engine.
//!
//! Models and morphisms cross the boundary as opaque handles that the caller
//! frees with the matching `*_free` function. Every fallible call returns a
//! [`CubalStatus`]; the message for the last failure on the calling thread is
//! available from [`cubal_last_error`].

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use cubal::colimits::{coequalise, iso_check, DoubleMorphism, QuotientStatus};
use cubal::format::{parse_model, parse_morphism, write_model};
use cubal::DoubleGC;
use libc::c_char;

/// Result codes. Zero is success.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CubalStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    ParseError = 3,
    /// The model or morphism was read but fails at least one axiom.
    AxiomViolation = 4,
    BudgetExceeded = 5,
    InputMismatch = 6,
    Panic = 7,
}

/// A finite double groupoid with connections.
pub struct CubalModel {
    inner: Arc<DoubleGC>,
}

/// A morphism between two models.
pub struct CubalMorphism {
    inner: DoubleMorphism,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: CubalStatus, msg: impl Into<String>) -> CubalStatus {
    set_error(msg);
    status
}

fn guarded(f: impl FnOnce() -> CubalStatus) -> CubalStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => fail(CubalStatus::Panic, "internal panic"),
    }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, CubalStatus> {
    if p.is_null() {
        return Err(fail(CubalStatus::NullArgument, "null string argument"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(CubalStatus::InvalidUtf8, "argument is not UTF-8"))
}

macro_rules! tri {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

macro_rules! nonnull {
    ($($p:ident),+) => {
        $(if $p.is_null() {
            return fail(CubalStatus::NullArgument, concat!("`", stringify!($p), "` is null"));
        })+
    };
}

/// Message for the last failed call on this thread, or null. The pointer
/// stays valid until the next call into this library from the same thread.
#[no_mangle]
pub extern "C" fn cubal_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(std::ptr::null(), |s| s.as_ptr()))
}

/// Parses a model document into `*out`.
///
/// # Safety
/// `src` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cubal_model_parse(src: *const c_char, out: *mut *mut CubalModel) -> CubalStatus {
    guarded(|| {
        nonnull!(out);
        let s = tri!(text(src));
        match parse_model(s) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(CubalModel { inner: Arc::new(d) }));
                CubalStatus::Ok
            }
            Err(e) => fail(CubalStatus::ParseError, e.to_string()),
        }
    })
}

/// Builds a model from a generator spec such as `square:Z2` or `sphere:3`.
///
/// # Safety
/// `spec` must be a NUL-terminated string and `out` a writable pointer.
#[no_mangle]
pub unsafe extern "C" fn cubal_model_generate(spec: *const c_char, out: *mut *mut CubalModel) -> CubalStatus {
    guarded(|| {
        nonnull!(out);
        let s = tri!(text(spec));
        let mut parts = s.split(':');
        let g = parts.next().unwrap_or("");
        let params: Vec<&str> = parts.collect();
        match cubal::cli::generate(g, &params) {
            Ok(d) => {
                *out = Box::into_raw(Box::new(CubalModel { inner: Arc::new(d) }));
                CubalStatus::Ok
            }
            Err(e) => fail(CubalStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `m` must be null or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn cubal_model_free(m: *mut CubalModel) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Writes the numbers of objects, edges and squares.
///
/// # Safety
/// `m` must be a live handle; the output pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn cubal_model_counts(
    m: *const CubalModel,
    objects: *mut usize,
    edges: *mut usize,
    squares: *mut usize,
) -> CubalStatus {
    guarded(|| {
        nonnull!(m, objects, edges, squares);
        let d = &(*m).inner;
        *objects = d.num_objects();
        *edges = d.num_edges();
        *squares = d.num_squares();
        CubalStatus::Ok
    })
}

/// Renders the model in the text format. Free the result with
/// [`cubal_string_free`].
///
/// # Safety
/// `m` must be a live handle.
#[no_mangle]
pub unsafe extern "C" fn cubal_model_write(m: *const CubalModel) -> *mut c_char {
    if m.is_null() {
        set_error("`m` is null");
        return std::ptr::null_mut();
    }
    CString::new(write_model(&(*m).inner)).map_or(std::ptr::null_mut(), CString::into_raw)
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cubal_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Checks every axiom. Writes the number of violations to `violations` and
/// returns `AxiomViolation` when it is nonzero.
///
/// # Safety
/// `m` must be a live handle; `violations` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cubal_validate(m: *const CubalModel, violations: *mut usize) -> CubalStatus {
    guarded(|| {
        nonnull!(m, violations);
        let r = cubal::validate(&(*m).inner);
        *violations = r.violations.len();
        match r.violations.first() {
            None => CubalStatus::Ok,
            Some(v) => fail(CubalStatus::AxiomViolation, format!("{} {}", v.axiom, v.witness.join(" "))),
        }
    })
}

/// Checks the thin-structure axioms; `failures` receives the failure count.
///
/// # Safety
/// `m` must be a live handle; `failures` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cubal_check_thin(m: *const CubalModel, failures: *mut usize) -> CubalStatus {
    guarded(|| {
        nonnull!(m, failures);
        let r = cubal::thin::check_thin_axioms(&(*m).inner);
        *failures = r.failures();
        if r.is_ok() {
            CubalStatus::Ok
        } else {
            fail(CubalStatus::AxiomViolation, format!("{} thin-structure failures", r.failures()))
        }
    })
}

/// Writes whether the two models are isomorphic.
///
/// # Safety
/// Both handles must be live; `iso` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cubal_isomorphic(a: *const CubalModel, b: *const CubalModel, iso: *mut bool) -> CubalStatus {
    guarded(|| {
        nonnull!(a, b, iso);
        *iso = iso_check(&(*a).inner, &(*b).inner).is_some();
        CubalStatus::Ok
    })
}

/// Parses a morphism document between two models.
///
/// # Safety
/// `src` and `tgt` must be live handles, `doc` a NUL-terminated string and
/// `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cubal_morphism_parse(
    doc: *const c_char,
    src: *const CubalModel,
    tgt: *const CubalModel,
    out: *mut *mut CubalMorphism,
) -> CubalStatus {
    guarded(|| {
        nonnull!(src, tgt, out);
        let s = tri!(text(doc));
        match parse_morphism(s, &(*src).inner, &(*tgt).inner) {
            Ok(f) => {
                if !f.is_valid() {
                    return fail(CubalStatus::AxiomViolation, "the maps do not preserve the structure");
                }
                *out = Box::into_raw(Box::new(CubalMorphism { inner: f }));
                CubalStatus::Ok
            }
            Err(e) => fail(CubalStatus::ParseError, e.to_string()),
        }
    })
}

/// # Safety
/// `f` must be null or a live morphism handle.
#[no_mangle]
pub unsafe extern "C" fn cubal_morphism_free(f: *mut CubalMorphism) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Coequaliser of two parallel morphisms. On success `*out` receives the
/// quotient; `BudgetExceeded` leaves it untouched.
///
/// # Safety
/// `a` and `b` must be live handles and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cubal_coequalise(
    a: *const CubalMorphism,
    b: *const CubalMorphism,
    budget: usize,
    out: *mut *mut CubalModel,
) -> CubalStatus {
    guarded(|| {
        nonnull!(a, b, out);
        if budget == 0 {
            return fail(CubalStatus::InputMismatch, "budget must be positive");
        }
        match coequalise(&(*a).inner, &(*b).inner, budget) {
            Ok(q) if q.status == QuotientStatus::BudgetExceeded => {
                fail(CubalStatus::BudgetExceeded, format!("more than {budget} live elements"))
            }
            Ok(q) => {
                let obj = q.object.expect("finite quotients carry an object");
                *out = Box::into_raw(Box::new(CubalModel { inner: obj }));
                CubalStatus::Ok
            }
            Err(e) => fail(CubalStatus::InputMismatch, e.to_string()),
        }
    })
}
