//! C ABI over the document-level commands. Callers parse a JSON document
//! into an opaque handle, run commands against it, and receive JSON reports
//! as C strings they must release with `bredon_string_free`.
//!
//! Status codes mirror the CLI: 0 success, 1 a comparison in the report
//! failed, 2 the input was rejected, 3 a pointer/encoding problem on the
//! caller's side, 4 an internal panic (a bug; please report it).

use bredon::report::{cmd_cohomology, cmd_eilenberg, cmd_serre, cmd_validate, Report};
use bredon::schema::RingTag;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

pub const BREDON_OK: i32 = 0;
pub const BREDON_REPORT_FAILED: i32 = 1;
pub const BREDON_BAD_INPUT: i32 = 2;
pub const BREDON_BAD_POINTER: i32 = 3;
pub const BREDON_PANIC: i32 = 4;

/// Opaque handle around the raw document text.
pub struct BredonDocument {
    text: String,
}

unsafe fn read_str<'a>(ptr: *const c_char) -> Option<&'a str> {
    if ptr.is_null() {
        return None;
    }
    CStr::from_ptr(ptr).to_str().ok()
}

unsafe fn read_ring(ptr: *const c_char) -> Result<Option<RingTag>, ()> {
    if ptr.is_null() {
        return Ok(None);
    }
    match read_str(ptr) {
        Some(s) => RingTag::parse(s).map(Some).map_err(|_| ()),
        None => Err(()),
    }
}

fn write_out(out: *mut *mut c_char, text: String) {
    if out.is_null() {
        return;
    }
    // interior NULs cannot appear in serde_json output of valid UTF-8
    let c = CString::new(text).unwrap_or_else(|_| CString::new("{}").unwrap());
    unsafe { *out = c.into_raw() };
}

fn finish(out: *mut *mut c_char, result: Result<Report, String>) -> i32 {
    match result {
        Ok(report) => {
            let ok = report.ok;
            write_out(out, report.to_json());
            if ok {
                BREDON_OK
            } else {
                BREDON_REPORT_FAILED
            }
        }
        Err(msg) => {
            write_out(out, format!("{{\"error\":{}}}", serde_json::to_string(&msg).unwrap()));
            BREDON_BAD_INPUT
        }
    }
}

fn guarded(out: *mut *mut c_char, f: impl FnOnce() -> i32) -> i32 {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(code) => code,
        Err(_) => {
            write_out(out, "{\"error\":\"internal panic\"}".into());
            BREDON_PANIC
        }
    }
}

/// Parse a JSON document. On success stores a new handle in `out_doc`.
///
/// # Safety
/// `text` must be a NUL-terminated UTF-8 string; `out_doc` must be valid.
#[no_mangle]
pub unsafe extern "C" fn bredon_document_parse(
    text: *const c_char,
    out_doc: *mut *mut BredonDocument,
) -> i32 {
    if out_doc.is_null() {
        return BREDON_BAD_POINTER;
    }
    let Some(text) = read_str(text) else { return BREDON_BAD_POINTER };
    match bredon::schema::parse_document(text) {
        Ok(_) => {
            let handle = Box::new(BredonDocument { text: text.to_string() });
            *out_doc = Box::into_raw(handle);
            BREDON_OK
        }
        Err(_) => BREDON_BAD_INPUT,
    }
}

/// Release a handle returned by `bredon_document_parse`.
///
/// # Safety
/// `doc` must be a handle from `bredon_document_parse`, released once.
#[no_mangle]
pub unsafe extern "C" fn bredon_document_free(doc: *mut BredonDocument) {
    if !doc.is_null() {
        drop(Box::from_raw(doc));
    }
}

/// Release a string returned through any `out_json` parameter.
///
/// # Safety
/// `s` must be a string produced by this library, released once.
#[no_mangle]
pub unsafe extern "C" fn bredon_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Well-definedness checks plus a seeded random probe. `ring` may be NULL to
/// use the document's ring tag, or "Z", "Q", "Fp:<p>".
///
/// # Safety
/// `doc` must be a live handle; `ring` NULL or NUL-terminated UTF-8;
/// `out_json` NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn bredon_validate(
    doc: *const BredonDocument,
    ring: *const c_char,
    seed: u64,
    out_json: *mut *mut c_char,
) -> i32 {
    let Some(doc) = doc.as_ref() else { return BREDON_BAD_POINTER };
    let Ok(tag) = read_ring(ring) else { return BREDON_BAD_INPUT };
    guarded(out_json, || {
        finish(out_json, cmd_validate(&doc.text, tag, seed).map_err(|e| e.to_string()))
    })
}

/// Cohomology in degrees `deg_lo..=deg_hi` (inclusive, like the CLI's
/// `--degrees` flag).
///
/// # Safety
/// Same contracts as `bredon_validate`.
#[no_mangle]
pub unsafe extern "C" fn bredon_cohomology(
    doc: *const BredonDocument,
    ring: *const c_char,
    deg_lo: usize,
    deg_hi: usize,
    out_json: *mut *mut c_char,
) -> i32 {
    let Some(doc) = doc.as_ref() else { return BREDON_BAD_POINTER };
    let Ok(tag) = read_ring(ring) else { return BREDON_BAD_INPUT };
    guarded(out_json, || {
        let range = Some((deg_lo, deg_hi));
        finish(out_json, cmd_cohomology(&doc.text, range, tag).map_err(|e| e.to_string()))
    })
}

/// Compare the compatible-cochain pipeline with the invariant-cochain
/// pipeline on the universal covers.
///
/// # Safety
/// Same contracts as `bredon_validate`.
#[no_mangle]
pub unsafe extern "C" fn bredon_eilenberg(
    doc: *const BredonDocument,
    ring: *const c_char,
    out_json: *mut *mut c_char,
) -> i32 {
    let Some(doc) = doc.as_ref() else { return BREDON_BAD_POINTER };
    let Ok(tag) = read_ring(ring) else { return BREDON_BAD_INPUT };
    guarded(out_json, || {
        finish(out_json, cmd_eilenberg(&doc.text, tag).map_err(|e| e.to_string()))
    })
}

/// Spectral sequence of the document's fibration block, pages 2..=rmax.
/// Requires field coefficients.
///
/// # Safety
/// Same contracts as `bredon_validate`.
#[no_mangle]
pub unsafe extern "C" fn bredon_serre(
    doc: *const BredonDocument,
    ring: *const c_char,
    rmax: usize,
    out_json: *mut *mut c_char,
) -> i32 {
    let Some(doc) = doc.as_ref() else { return BREDON_BAD_POINTER };
    let Ok(tag) = read_ring(ring) else { return BREDON_BAD_INPUT };
    guarded(out_json, || {
        finish(out_json, cmd_serre(&doc.text, tag, rmax).map_err(|e| e.to_string()))
    })
}
