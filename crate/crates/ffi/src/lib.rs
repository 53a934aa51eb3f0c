//! C ABI over `tfactor`.
//!
//! Objects cross the boundary as opaque handles owned by the caller and
//! released with the matching `*_free`. Every fallible call returns a
//! [`TfStatus`]; on failure a message is kept per thread and can be read
//! with [`tf_last_error`]. Results are written through out-pointers, which
//! are left untouched on failure.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use tfactor::complexes::{ChainMap, Complex};
use tfactor::document::Document;
use tfactor::factorization::{factor, in_e, in_m, normality_report};
use tfactor::postnikov::postnikov_tower;
use tfactor::suite::{run_suite, SuiteConfig};
use tfactor::tstructure::TStructure;
use tfactor::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TfStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    /// Malformed JSON or unsupported format version.
    Parse = 3,
    /// Well-formed input that breaks a structural law.
    Validation = 4,
    NotFound = 5,
    /// Objects over different categories, or a buffer of the wrong length.
    Mismatch = 6,
    Config = 7,
    Panic = 8,
}

impl From<&Error> for TfStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Syntax { .. } | Error::UnsupportedVersion(_) => TfStatus::Parse,
            Error::Unresolved { .. } => TfStatus::NotFound,
            Error::BaseMismatch => TfStatus::Mismatch,
            Error::Config(_) => TfStatus::Config,
            _ => TfStatus::Validation,
        }
    }
}

/// A parsed document: category plus named reps, complexes and maps.
pub struct TfDocument(Document);

/// A bounded complex.
pub struct TfComplex(Complex);

/// A chain map between bounded complexes.
pub struct TfChainMap(ChainMap);

/// The six normality conditions for one object.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TfNormality {
    pub k_in_torsion: bool,
    pub q_in_torsion_free: bool,
    pub normal: bool,
    pub q_is_reflection: bool,
    pub k_is_coreflection: bool,
    pub fiber_sequence: bool,
}

/// Boundedness window `[a, b)` and stage count of a Postnikov tower.
/// `has_window` is false for quasi-isomorphisms, whose tower is empty.
#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TfTowerShape {
    pub has_window: bool,
    pub a: i32,
    pub b: i32,
    pub stages: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

struct Failure(TfStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(TfStatus::from(&e), e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn set_error(message: &str) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn guard(body: impl FnOnce() -> Outcome) -> TfStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => TfStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_error(&message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".to_string());
            set_error(&format!("panic: {message}"));
            TfStatus::Panic
        }
    }
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref()
        .ok_or_else(|| Failure(TfStatus::NullPointer, format!("{what} is null")))
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(Failure(TfStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|e| Failure(TfStatus::InvalidUtf8, format!("{what}: {e}")))
}

unsafe fn write<T>(out: *mut T, value: T) -> Outcome {
    if out.is_null() {
        return Err(Failure(TfStatus::NullPointer, "output pointer is null".into()));
    }
    out.write(value);
    Ok(())
}

fn owned_string(s: String) -> *mut c_char {
    CString::new(s).map_or(ptr::null_mut(), CString::into_raw)
}

/// Message of the most recent failure on this thread, or null. The pointer
/// stays valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn tf_last_error() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn tf_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn tf_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_document_parse(json: *const c_char, out: *mut *mut TfDocument) -> TfStatus {
    guard(|| {
        let doc = Document::parse(text(json, "json")?)?;
        write(out, Box::into_raw(Box::new(TfDocument(doc))))
    })
}

/// # Safety
/// `doc` must be null or a live handle from [`tf_document_parse`].
#[no_mangle]
pub unsafe extern "C" fn tf_document_free(doc: *mut TfDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Canonical JSON for `doc`; free with [`tf_string_free`].
///
/// # Safety
/// `doc` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_document_to_json(doc: *const TfDocument, out: *mut *mut c_char) -> TfStatus {
    guard(|| {
        let doc = deref(doc, "document")?;
        write(out, owned_string(doc.0.to_json()))
    })
}

/// # Safety
/// `doc` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_document_prime(doc: *const TfDocument, out: *mut u32) -> TfStatus {
    guard(|| write(out, deref(doc, "document")?.0.category().field().p()))
}

/// Copies the named complex into a new handle.
///
/// # Safety
/// `doc` must be a live handle, `name` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_document_complex(
    doc: *const TfDocument,
    name: *const c_char,
    out: *mut *mut TfComplex,
) -> TfStatus {
    guard(|| {
        let x = deref(doc, "document")?.0.complex(text(name, "name")?)?.clone();
        write(out, Box::into_raw(Box::new(TfComplex(x))))
    })
}

/// Copies the named map into a new handle.
///
/// # Safety
/// `doc` must be a live handle, `name` NUL-terminated, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tf_document_map(
    doc: *const TfDocument,
    name: *const c_char,
    out: *mut *mut TfChainMap,
) -> TfStatus {
    guard(|| {
        let f = deref(doc, "document")?.0.map(text(name, "name")?)?.clone();
        write(out, Box::into_raw(Box::new(TfChainMap(f))))
    })
}

/// # Safety
/// `x` must be null or a live complex handle.
#[no_mangle]
pub unsafe extern "C" fn tf_complex_free(x: *mut TfComplex) {
    if !x.is_null() {
        drop(Box::from_raw(x));
    }
}

/// # Safety
/// `f` must be null or a live map handle.
#[no_mangle]
pub unsafe extern "C" fn tf_chain_map_free(f: *mut TfChainMap) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of quiver vertices, the length expected by
/// [`tf_complex_homology_dims`].
///
/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_complex_vertex_count(x: *const TfComplex, out: *mut usize) -> TfStatus {
    guard(|| write(out, deref(x, "complex")?.0.category().vertex_count()))
}

/// Dimension vector of `H_n`, one entry per vertex. `len` must equal the
/// vertex count.
///
/// # Safety
/// `x` must be a live handle; `out` must point to `len` writable entries.
#[no_mangle]
pub unsafe extern "C" fn tf_complex_homology_dims(
    x: *const TfComplex,
    n: i32,
    out: *mut usize,
    len: usize,
) -> TfStatus {
    guard(|| {
        let dims = deref(x, "complex")?.0.homology_dims(n);
        if out.is_null() {
            return Err(Failure(TfStatus::NullPointer, "output pointer is null".into()));
        }
        if len != dims.len() {
            return Err(Failure(
                TfStatus::Mismatch,
                format!("buffer holds {len} entries, quiver has {} vertices", dims.len()),
            ));
        }
        ptr::copy_nonoverlapping(dims.as_ptr(), out, len);
        Ok(())
    })
}

/// Whether `H_k(x) = 0` for all `k ≥ n`.
///
/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_complex_in_aisle(x: *const TfComplex, n: i32, out: *mut bool) -> TfStatus {
    guard(|| write(out, TStructure::new(n).in_aisle(&deref(x, "complex")?.0)))
}

/// Whether `H_k(x) = 0` for all `k < n`.
///
/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_complex_in_coaisle(x: *const TfComplex, n: i32, out: *mut bool) -> TfStatus {
    guard(|| write(out, TStructure::new(n).in_coaisle(&deref(x, "complex")?.0)))
}

/// # Safety
/// `x` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_normality(x: *const TfComplex, n: i32, out: *mut TfNormality) -> TfStatus {
    guard(|| {
        let r = normality_report(&deref(x, "complex")?.0, &TStructure::new(n));
        write(
            out,
            TfNormality {
                k_in_torsion: r.k_in_torsion,
                q_in_torsion_free: r.q_in_torsion_free,
                normal: r.normal,
                q_is_reflection: r.q_is_reflection,
                k_is_coreflection: r.k_is_coreflection,
                fiber_sequence: r.fiber_sequence,
            },
        )
    })
}

/// Copies the source complex of `f` into a new handle.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_chain_map_source(f: *const TfChainMap, out: *mut *mut TfComplex) -> TfStatus {
    guard(|| {
        let x = deref(f, "map")?.0.source().clone();
        write(out, Box::into_raw(Box::new(TfComplex(x))))
    })
}

/// Copies the target complex of `f` into a new handle.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_chain_map_target(f: *const TfChainMap, out: *mut *mut TfComplex) -> TfStatus {
    guard(|| {
        let y = deref(f, "map")?.0.target().clone();
        write(out, Box::into_raw(Box::new(TfComplex(y))))
    })
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_chain_map_is_quasi_iso(f: *const TfChainMap, out: *mut bool) -> TfStatus {
    guard(|| write(out, deref(f, "map")?.0.is_quasi_iso()))
}

/// Membership in the left class `E` for the t-structure at `n`.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_chain_map_in_e(f: *const TfChainMap, n: i32, out: *mut bool) -> TfStatus {
    guard(|| write(out, in_e(&deref(f, "map")?.0, &TStructure::new(n))))
}

/// Membership in the right class `M` for the t-structure at `n`.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_chain_map_in_m(f: *const TfChainMap, n: i32, out: *mut bool) -> TfStatus {
    guard(|| write(out, in_m(&deref(f, "map")?.0, &TStructure::new(n))))
}

/// Composite `g∘f`.
///
/// # Safety
/// `g` and `f` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_chain_map_compose(
    g: *const TfChainMap,
    f: *const TfChainMap,
    out: *mut *mut TfChainMap,
) -> TfStatus {
    guard(|| {
        let gf = deref(g, "g")?.0.try_compose(&deref(f, "f")?.0)?;
        write(out, Box::into_raw(Box::new(TfChainMap(gf))))
    })
}

/// # Safety
/// `f` and `g` must be live handles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_chain_map_equal(f: *const TfChainMap, g: *const TfChainMap, out: *mut bool) -> TfStatus {
    guard(|| write(out, deref(f, "f")?.0 == deref(g, "g")?.0))
}

/// Factors `f = m∘e` with `e ∈ E` and `m ∈ M` for the t-structure at `n`.
///
/// # Safety
/// `f` must be a live handle; `e_out` and `m_out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_factor(
    f: *const TfChainMap,
    n: i32,
    e_out: *mut *mut TfChainMap,
    m_out: *mut *mut TfChainMap,
) -> TfStatus {
    guard(|| {
        let f = deref(f, "map")?;
        if e_out.is_null() || m_out.is_null() {
            return Err(Failure(TfStatus::NullPointer, "output pointer is null".into()));
        }
        let fact = factor(&f.0, &TStructure::new(n));
        write(e_out, Box::into_raw(Box::new(TfChainMap(fact.e))))?;
        write(m_out, Box::into_raw(Box::new(TfChainMap(fact.m))))
    })
}

/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_postnikov_shape(f: *const TfChainMap, out: *mut TfTowerShape) -> TfStatus {
    guard(|| {
        let tower = postnikov_tower(&deref(f, "map")?.0);
        let shape = match tower.window {
            Some(w) => TfTowerShape {
                has_window: true,
                a: w.a,
                b: w.b,
                stages: tower.len(),
            },
            None => TfTowerShape::default(),
        };
        write(out, shape)
    })
}

/// Runs the property suite on a JSON configuration (an empty string means
/// defaults) and writes the JSON report to `report_out`, to be freed with
/// [`tf_string_free`]. Failing properties are not an error; read `passed`.
///
/// # Safety
/// `config` must be NUL-terminated; the out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn tf_run_suite(
    config: *const c_char,
    report_out: *mut *mut c_char,
    passed: *mut bool,
) -> TfStatus {
    guard(|| {
        let text = text(config, "config")?;
        let config = if text.trim().is_empty() {
            SuiteConfig::default()
        } else {
            SuiteConfig::from_json(text)?
        };
        if report_out.is_null() || passed.is_null() {
            return Err(Failure(TfStatus::NullPointer, "output pointer is null".into()));
        }
        let report = run_suite(&config)?;
        write(passed, report.passed)?;
        write(report_out, owned_string(report.to_json()))
    })
}
