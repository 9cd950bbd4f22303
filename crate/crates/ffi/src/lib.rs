//! C ABI over the `openbook` crate.
//!
//! Books are opaque handles created by `ob_book_from_*` and released with
//! `ob_book_free`. Reports come back as JSON strings owned by the caller and released
//! with `ob_string_free`. Every call returns an `ObStatus`; on failure the message is
//! available from `ob_last_error` on the same thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use openbook::classify::classify_book;
use openbook::moves::{parse_script, run_script};
use openbook::twist::{book_connected_sum, double_branched_cover, open_book_homology, OpenBook};
use openbook::{exit, parse_obk, Error};

/// Status codes. Values 2–5 match the command-line exit codes.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ObStatus {
    Ok = 0,
    Failure = 1,
    Syntax = 2,
    Validation = 3,
    IllegalMove = 4,
    Unsupported = 5,
    NullPointer = 6,
    InvalidUtf8 = 7,
    Panic = 8,
}

/// Opaque open book handle.
pub struct ObBook {
    inner: OpenBook,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let s = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(s).ok());
}

fn status_of(e: &Error) -> ObStatus {
    match e.exit_code() {
        exit::SYNTAX => ObStatus::Syntax,
        exit::VALIDATION => ObStatus::Validation,
        exit::ILLEGAL_MOVE => ObStatus::IllegalMove,
        exit::UNSUPPORTED => ObStatus::Unsupported,
        _ => ObStatus::Failure,
    }
}

fn fail(e: Error) -> ObStatus {
    set_error(e.to_string());
    status_of(&e)
}

/// Runs `f`, mapping panics to `ObStatus::Panic`.
fn guard(f: impl FnOnce() -> ObStatus) -> ObStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(s) => s,
        Err(_) => {
            set_error("internal panic");
            ObStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char) -> Result<&'a str, ObStatus> {
    if p.is_null() {
        set_error("null pointer argument");
        return Err(ObStatus::NullPointer);
    }
    CStr::from_ptr(p).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8");
        ObStatus::InvalidUtf8
    })
}

unsafe fn book_ref<'a>(b: *const ObBook) -> Result<&'a OpenBook, ObStatus> {
    if b.is_null() {
        set_error("null book handle");
        return Err(ObStatus::NullPointer);
    }
    Ok(&(*b).inner)
}

unsafe fn put_book(out: *mut *mut ObBook, b: OpenBook) -> ObStatus {
    *out = Box::into_raw(Box::new(ObBook { inner: b }));
    ObStatus::Ok
}

unsafe fn put_string(out: *mut *mut c_char, s: String) -> ObStatus {
    match CString::new(s) {
        Ok(c) => {
            *out = c.into_raw();
            ObStatus::Ok
        }
        Err(_) => {
            set_error("output contains a NUL byte");
            ObStatus::Failure
        }
    }
}

macro_rules! try_status {
    ($e:expr) => {
        match $e {
            Ok(v) => v,
            Err(s) => return s,
        }
    };
}

fn check_out<T>(out: *mut *mut T) -> Result<(), ObStatus> {
    if out.is_null() {
        set_error("null output pointer");
        Err(ObStatus::NullPointer)
    } else {
        Ok(())
    }
}

/// Parses `.obk` text into a new book.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ob_book_from_obk(text: *const c_char, out: *mut *mut ObBook) -> ObStatus {
    guard(|| {
        try_status!(check_out(out));
        *out = ptr::null_mut();
        let text = try_status!(read_str(text));
        let book = parse_obk(text).map_err(Error::from).and_then(|f| f.to_open_book());
        match book {
            Ok(b) => put_book(out, b),
            Err(e) => fail(e),
        }
    })
}

/// Parses a JSON book (`{"page": …, "monodromy": […]}`) or a bare JSON page.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ob_book_from_json(text: *const c_char, out: *mut *mut ObBook) -> ObStatus {
    guard(|| {
        try_status!(check_out(out));
        *out = ptr::null_mut();
        let text = try_status!(read_str(text));
        let v: serde_json::Value = match serde_json::from_str(text) {
            Ok(v) => v,
            Err(e) => return fail(Error::Syntax(e.to_string())),
        };
        let parsed = if v.get("page").is_some() {
            serde_json::from_value::<OpenBook>(v)
        } else {
            serde_json::from_value(v).map(OpenBook::trivial)
        };
        match parsed {
            Ok(b) => put_book(out, b),
            Err(e) => fail(Error::Invalid(e.to_string())),
        }
    })
}

/// Releases a book. Null is ignored.
///
/// # Safety
/// `book` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ob_book_free(book: *mut ObBook) {
    if !book.is_null() {
        drop(Box::from_raw(book));
    }
}

/// Number of 2-handles (attaching circles) of the page, or 0 for a null handle.
///
/// # Safety
/// `book` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn ob_book_circle_count(book: *const ObBook) -> usize {
    book_ref(book).map_or(0, |b| b.page().circle_count())
}

/// Serializes the book as JSON.
///
/// # Safety
/// `book` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ob_book_to_json(book: *const ObBook, out: *mut *mut c_char) -> ObStatus {
    guard(|| {
        try_status!(check_out(out));
        let b = try_status!(book_ref(book));
        match serde_json::to_string(b) {
            Ok(s) => put_string(out, s),
            Err(e) => fail(Error::Invalid(e.to_string())),
        }
    })
}

/// Homology report `{"H0": …, …, "H5": …, "spin": …, "chern_class_note": …}`.
///
/// # Safety
/// `book` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ob_book_homology_json(book: *const ObBook, out: *mut *mut c_char) -> ObStatus {
    guard(|| {
        try_status!(check_out(out));
        let b = try_status!(book_ref(book));
        match open_book_homology(b) {
            Ok(h) => put_string(out, serde_json::to_string(&h).unwrap_or_default()),
            Err(e) => fail(e.into()),
        }
    })
}

/// Classification report `{"kind", "m", "d", "diffeo_name", "contact_name"}`.
///
/// # Safety
/// `book` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ob_book_classify_json(book: *const ObBook, out: *mut *mut c_char) -> ObStatus {
    guard(|| {
        try_status!(check_out(out));
        let b = try_status!(book_ref(book));
        match classify_book(b) {
            Ok(c) => put_string(out, serde_json::to_string(&c).unwrap_or_default()),
            Err(e) => fail(e.into()),
        }
    })
}

/// Applies a move script (text or JSON) and returns the resulting book as a new handle.
///
/// # Safety
/// `book` must be a live handle, `script` NUL-terminated and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ob_book_apply_script(
    book: *const ObBook,
    script: *const c_char,
    out: *mut *mut ObBook,
) -> ObStatus {
    guard(|| {
        try_status!(check_out(out));
        *out = ptr::null_mut();
        let b = try_status!(book_ref(book));
        let text = try_status!(read_str(script));
        let moves = match parse_script(text) {
            Ok(m) => m,
            Err(e) => return fail(e.into()),
        };
        match run_script(b, &moves) {
            Ok((end, _)) => put_book(out, end),
            Err(e) => {
                set_error(e.to_string());
                status_of(&Error::Move(e.error))
            }
        }
    })
}

/// Double cover branched along the binding, as a new handle.
///
/// # Safety
/// `book` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ob_book_double_cover(book: *const ObBook, out: *mut *mut ObBook) -> ObStatus {
    guard(|| {
        try_status!(check_out(out));
        let b = try_status!(book_ref(book));
        put_book(out, double_branched_cover(b))
    })
}

/// Connected sum of two books, as a new handle.
///
/// # Safety
/// Both books must be live handles and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn ob_book_connected_sum(
    left: *const ObBook,
    right: *const ObBook,
    out: *mut *mut ObBook,
) -> ObStatus {
    guard(|| {
        try_status!(check_out(out));
        let a = try_status!(book_ref(left));
        let b = try_status!(book_ref(right));
        put_book(out, book_connected_sum(a, b))
    })
}

/// Copy of the last error message on this thread, or null. Free with `ob_string_free`.
#[no_mangle]
pub extern "C" fn ob_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null_mut(), |s| s.clone().into_raw()))
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn ob_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Library version, a static string.
#[no_mangle]
pub extern "C" fn ob_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}
