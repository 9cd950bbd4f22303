use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use openbook_ffi::*;

fn take(s: *mut c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { ob_string_free(s) };
    out
}

fn book(text: &str) -> Result<*mut ObBook, (ObStatus, String)> {
    let c = CString::new(text).unwrap();
    let mut out = ptr::null_mut();
    let st = unsafe { ob_book_from_obk(c.as_ptr(), &mut out) };
    if st == ObStatus::Ok {
        Ok(out)
    } else {
        assert!(out.is_null());
        Err((st, take(ob_last_error())))
    }
}

const SIGMA3: &str = "knot K1:\nl0\nknot K2:\nl1 x0 x0 x0 x0 x0 x0 r1 r0\ntwists: K2 K1 K2 K1\n";

#[test]
fn homology_through_handles() {
    let b = book(SIGMA3).unwrap();
    assert_eq!(unsafe { ob_book_circle_count(b) }, 2);
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ob_book_homology_json(b, &mut s) }, ObStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["H2"], "Z/3 + Z/3");
    assert_eq!(v["spin"], "yes");
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { ob_book_classify_json(b, &mut c) }, ObStatus::Ok);
    assert!(take(c).contains("M₃"));
    unsafe { ob_book_free(b) };
}

#[test]
fn error_codes_match_cli() {
    let (st, msg) = book("l0 q1").unwrap_err();
    assert_eq!(st, ObStatus::Syntax);
    assert!(msg.contains("unknown event"));
    let (st, _) = book("l0 r1").unwrap_err();
    assert_eq!(st, ObStatus::Validation);
    let fig8 = book("handles: g\nknot C:\nl0 h0:g+ r0\n").unwrap();
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ob_book_homology_json(fig8, &mut s) }, ObStatus::Unsupported);
    assert!(s.is_null());
    unsafe { ob_book_free(fig8) };
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ob_book_from_obk(ptr::null(), &mut out) }, ObStatus::NullPointer);
    assert_eq!(unsafe { ob_book_homology_json(ptr::null(), &mut s) }, ObStatus::NullPointer);
}

#[test]
fn scripts_covers_and_sums() {
    let u = book("knot U:\nl0 r0\n").unwrap();
    let script = CString::new("moveI U\nmoveI_inv U\naddsummand rot=1\n").unwrap();
    let mut next = ptr::null_mut();
    assert_eq!(unsafe { ob_book_apply_script(u, script.as_ptr(), &mut next) }, ObStatus::Ok);
    assert_eq!(unsafe { ob_book_circle_count(next) }, 2);
    let bad = CString::new("moveI_inv U\n").unwrap();
    let mut none = ptr::null_mut();
    assert_eq!(unsafe { ob_book_apply_script(u, bad.as_ptr(), &mut none) }, ObStatus::IllegalMove);
    let mut sum = ptr::null_mut();
    assert_eq!(unsafe { ob_book_connected_sum(u, next, &mut sum) }, ObStatus::Ok);
    assert_eq!(unsafe { ob_book_circle_count(sum) }, 3);
    let mut js = ptr::null_mut();
    assert_eq!(unsafe { ob_book_to_json(sum, &mut js) }, ObStatus::Ok);
    let json = CString::new(take(js)).unwrap();
    let mut again = ptr::null_mut();
    assert_eq!(unsafe { ob_book_from_json(json.as_ptr(), &mut again) }, ObStatus::Ok);
    assert_eq!(unsafe { ob_book_circle_count(again) }, 3);
    let half = book("knot K1:\nl0\nknot K2:\nl1 x0 x0 x0 x0 r1 r0\ntwists: K2 K1\n").unwrap();
    let mut cover = ptr::null_mut();
    assert_eq!(unsafe { ob_book_double_cover(half, &mut cover) }, ObStatus::Ok);
    let mut h = ptr::null_mut();
    assert_eq!(unsafe { ob_book_homology_json(cover, &mut h) }, ObStatus::Ok);
    assert!(take(h).contains("Z/2 + Z/2"));
    for b in [u, next, sum, again, half, cover] {
        unsafe { ob_book_free(b) };
    }
    unsafe { ob_book_free(ptr::null_mut()) };
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(ob_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/openbook.h")
}

#[test]
fn header_declares_the_api() {
    let h = std::fs::read_to_string(header()).unwrap();
    for name in [
        "ob_book_from_obk",
        "ob_book_from_json",
        "ob_book_free",
        "ob_book_homology_json",
        "ob_book_classify_json",
        "ob_book_apply_script",
        "ob_last_error",
        "ob_string_free",
        "OB_STATUS_ILLEGAL_MOVE",
        "typedef struct ObBook ObBook",
    ] {
        assert!(h.contains(name), "header lacks {name}");
    }
}

#[test]
fn c_program_links_against_static_library() {
    let Ok(cc) = Command::new("cc").arg("--version").output() else {
        eprintln!("no C compiler; skipping");
        return;
    };
    assert!(cc.status.success());
    // Integration tests live next to the freshly built library artifacts.
    let deps = std::env::current_exe().unwrap().parent().unwrap().to_path_buf();
    let lib = deps.join("libopenbook_ffi.a");
    if !lib.exists() {
        eprintln!("static library not built at {}; skipping", lib.display());
        return;
    }
    let dir = tempfile_dir();
    let src = dir.join("smoke.c");
    std::fs::write(
        &src,
        r#"#include <stdio.h>
#include <string.h>
#include "openbook.h"
int main(void) {
    ObBook *b = NULL;
    if (ob_book_from_obk("knot L:\nl0 r0\ntwists: L L\n", &b) != OB_STATUS_OK) return 1;
    char *h = NULL;
    if (ob_book_homology_json(b, &h) != OB_STATUS_OK) return 2;
    int ok = strstr(h, "\"H2\":\"Z\"") != NULL;
    ob_string_free(h);
    ob_book_free(b);
    if (ob_book_from_obk("l0 r1", &b) != OB_STATUS_VALIDATION) return 3;
    char *e = ob_last_error();
    if (e == NULL) return 4;
    ob_string_free(e);
    return ok ? 0 : 5;
}
"#,
    )
    .unwrap();
    let exe = dir.join("smoke");
    let out = Command::new("cc")
        .arg(&src)
        .arg("-I")
        .arg(header().parent().unwrap())
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let run = Command::new(&exe).status().unwrap();
    assert_eq!(run.code(), Some(0));
}

fn tempfile_dir() -> PathBuf {
    let d = std::env::temp_dir().join(format!("openbook-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}
