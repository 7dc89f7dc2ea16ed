//! C interface to `ehresmann`.
//!
//! Structures cross the boundary as JSON documents in the same format the
//! command line tool reads. Semigroups are held behind an opaque handle.
//! Every function returns an [`EhStatus`]; on `EH_STATUS_INPUT` and worse the
//! message is available from [`eh_last_error`] on the same thread.
//!
//! Strings returned through `char **` arguments are owned by the caller and
//! must be released with [`eh_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use ehresmann::io;
use ehresmann::relation::DEFAULT_CLOSURE_CAP;
use ehresmann::{corpus, Error, OpTableSemigroup, Report, Side, Verdict};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EhStatus {
    Pass = 0,
    Fail = 1,
    Input = 2,
    Inconclusive = 3,
    Null = 4,
    Panic = 5,
}

impl From<Verdict> for EhStatus {
    fn from(v: Verdict) -> Self {
        match v {
            Verdict::Pass => EhStatus::Pass,
            Verdict::Fail => EhStatus::Fail,
            Verdict::Inconclusive => EhStatus::Inconclusive,
        }
    }
}

/// Opaque semigroup handle.
pub struct EhSemigroup(OpTableSemigroup);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn clear_error() {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
}

enum Fault {
    Null(&'static str),
    Err(Error),
}

impl From<Error> for Fault {
    fn from(e: Error) -> Self {
        Fault::Err(e)
    }
}

fn guard(f: impl FnOnce() -> Result<EhStatus, Fault>) -> EhStatus {
    clear_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(s)) => s,
        Ok(Err(Fault::Null(what))) => {
            set_error(format!("{what} is null"));
            EhStatus::Null
        }
        Ok(Err(Fault::Err(e))) => {
            set_error(e.to_string());
            EhStatus::Input
        }
        Err(p) => {
            let msg = p
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| p.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_error(format!("internal error: {msg}"));
            EhStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &'static str) -> Result<&'a str, Fault> {
    if p.is_null() {
        return Err(Fault::Null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Fault::Err(Error::Input(format!("{what} is not UTF-8"))))
}

unsafe fn handle<'a>(s: *const EhSemigroup) -> Result<&'a OpTableSemigroup, Fault> {
    s.as_ref().map(|h| &h.0).ok_or(Fault::Null("semigroup"))
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> Result<(), Fault> {
    if out.is_null() {
        return Err(Fault::Null("output pointer"));
    }
    let c = CString::new(s).map_err(|_| Fault::Err(Error::Input("string contains NUL".into())))?;
    *out = c.into_raw();
    Ok(())
}

unsafe fn put<T>(out: *mut T, v: T) -> Result<(), Fault> {
    if out.is_null() {
        return Err(Fault::Null("output pointer"));
    }
    *out = v;
    Ok(())
}

fn element(s: &OpTableSemigroup, a: usize) -> Result<usize, Fault> {
    if a < s.len() {
        Ok(a)
    } else {
        Err(Fault::Err(Error::OutOfRange {
            what: "element",
            index: a,
            size: s.len(),
        }))
    }
}

fn report_json(rep: &Report) -> String {
    serde_json::to_string(rep).expect("serializable")
}

/// Message for the last failing call on this thread, or null. The pointer
/// stays valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn eh_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn eh_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Loads a `semigroup` or `relgen` document.
///
/// # Safety
/// `json` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eh_semigroup_from_json(json: *const c_char, out: *mut *mut EhSemigroup) -> EhStatus {
    guard(|| {
        let text = read_str(json, "json")?;
        let s = io::load_semigroup(&io::parse(text)?, DEFAULT_CLOSURE_CAP)?;
        put(out, Box::into_raw(Box::new(EhSemigroup(s))))?;
        Ok(EhStatus::Pass)
    })
}

/// # Safety
/// `s` must be null or a handle from [`eh_semigroup_from_json`], not yet freed.
#[no_mangle]
pub unsafe extern "C" fn eh_semigroup_free(s: *mut EhSemigroup) {
    if !s.is_null() {
        drop(Box::from_raw(s));
    }
}

/// Number of elements, or 0 for a null handle.
///
/// # Safety
/// `s` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn eh_semigroup_size(s: *const EhSemigroup) -> usize {
    s.as_ref().map_or(0, |h| h.0.len())
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eh_semigroup_mul(s: *const EhSemigroup, a: usize, b: usize, out: *mut usize) -> EhStatus {
    guard(|| {
        let s = handle(s)?;
        let v = s.mul(element(s, a)?, element(s, b)?);
        put(out, v)?;
        Ok(EhStatus::Pass)
    })
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eh_semigroup_plus(s: *const EhSemigroup, a: usize, out: *mut usize) -> EhStatus {
    guard(|| {
        let s = handle(s)?;
        put(out, s.plus(element(s, a)?))?;
        Ok(EhStatus::Pass)
    })
}

/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eh_semigroup_star(s: *const EhSemigroup, a: usize, out: *mut usize) -> EhStatus {
    guard(|| {
        let s = handle(s)?;
        put(out, s.star(element(s, a)?))?;
        Ok(EhStatus::Pass)
    })
}

/// Checks the Ehresmann axioms. `restriction` adds ample identities:
/// 0 none, 1 left, 2 right, 3 both. The JSON report is written to `report`
/// when it is not null.
///
/// # Safety
/// `s` must be a live handle; `report` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn eh_semigroup_verify(
    s: *const EhSemigroup,
    restriction: u32,
    report: *mut *mut c_char,
) -> EhStatus {
    guard(|| {
        let s = handle(s)?;
        let side = match restriction {
            0 => None,
            1 => Some(Side::Left),
            2 => Some(Side::Right),
            3 => Some(Side::Both),
            k => return Err(Fault::Err(Error::Input(format!("restriction must be 0..=3, got {k}")))),
        };
        let mut rep = s.verify_ehresmann();
        if let Some(side) = side {
            rep.absorb("", s.verify_restriction(side));
        }
        if !report.is_null() {
            put_string(report, report_json(&rep))?;
        }
        Ok(rep.verdict().into())
    })
}

/// Sigma classes as a JSON array of arrays of element indices.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eh_semigroup_sigma(s: *const EhSemigroup, out: *mut *mut c_char) -> EhStatus {
    guard(|| {
        let s = handle(s)?;
        put_string(out, serde_json::to_string(&s.sigma().classes()).expect("serializable"))?;
        Ok(EhStatus::Pass)
    })
}

/// The semigroup as a `semigroup` document.
///
/// # Safety
/// `s` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn eh_semigroup_to_json(s: *const EhSemigroup, out: *mut *mut c_char) -> EhStatus {
    guard(|| {
        let s = handle(s)?;
        put_string(out, io::to_string(&io::Document::Semigroup(io::semigroup_doc(s))))?;
        Ok(EhStatus::Pass)
    })
}

/// Verifies any document the command line `verify` accepts.
///
/// # Safety
/// `json` must be a NUL-terminated string; `report` must be null or writable.
#[no_mangle]
pub unsafe extern "C" fn eh_verify_json(json: *const c_char, report: *mut *mut c_char) -> EhStatus {
    guard(|| {
        let doc = io::parse(read_str(json, "json")?)?;
        let rep = match &doc {
            io::Document::Semigroup(_) | io::Document::Relgen(_) => {
                io::load_semigroup(&doc, DEFAULT_CLOSURE_CAP)?.verify_ehresmann()
            }
            io::Document::Resgraph(d) => io::resgraph_from_doc(d)?.check_axioms(3),
            io::Document::Premorphism(d) => {
                ehresmann::actions::premorphism_to_graph(&io::premorphism_from_doc(d)?)?.check_axioms(3)
            }
            io::Document::Corpus(_) => corpus::run_corpus(&corpus::from_doc(&doc)?, DEFAULT_CLOSURE_CAP),
        };
        if !report.is_null() {
            put_string(report, report_json(&rep))?;
        }
        Ok(rep.verdict().into())
    })
}
