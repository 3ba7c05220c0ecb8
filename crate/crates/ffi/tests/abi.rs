use std::ffi::{CStr, CString};
use std::ptr;

use serde_json::Value;
use trialgebra_ffi::*;

fn take(s: *mut std::ffi::c_char) -> String {
    assert!(!s.is_null());
    let out = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_string();
    unsafe { tg_string_free(s) };
    out
}

fn last_error() -> String {
    let e = tg_last_error();
    assert!(!e.is_null());
    unsafe { CStr::from_ptr(e) }.to_string_lossy().into_owned()
}

fn handle(json: &str) -> *mut TgTriality {
    let c = CString::new(json).unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { tg_triality_from_json(c.as_ptr(), &mut t) }, TgStatus::Ok);
    t
}

const C5: &str = r#"{"construction":"abelian_doubling","base":{"family":"cyclic","n":5}}"#;
const C5C5: &str = r#"{"construction":"abelian_doubling","base":{"family":"elementary_abelian","p":5,"k":2}}"#;

#[test]
fn loop_of_c5_doubling() {
    let t = handle(C5);
    let mut order = 0;
    assert_eq!(unsafe { tg_triality_group_order(t, &mut order) }, TgStatus::Ok);
    assert_eq!(order, 25);
    let mut l = ptr::null_mut();
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { tg_extract_loop(t, &mut l, &mut rep) }, TgStatus::Ok);
    let rep: Value = serde_json::from_str(&take(rep)).unwrap();
    assert!(rep["checks"]
        .as_array()
        .unwrap()
        .iter()
        .any(|c| c["check"] == "moufang.left"));
    assert_eq!(unsafe { tg_loop_order(l, &mut order) }, TgStatus::Ok);
    assert_eq!(order, 5);
    // the loop is cyclic of order 5, so some element generates it
    let mut gen_ok = false;
    for x in 1..5 {
        let mut y = 0;
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..5 {
            let mut z = 0;
            assert_eq!(unsafe { tg_loop_mul(l, y, x, &mut z) }, TgStatus::Ok);
            y = z;
            seen.insert(y);
        }
        gen_ok |= seen.len() == 5 && y == 0;
    }
    assert!(gen_ok);
    let mut z = 0;
    assert_eq!(unsafe { tg_loop_mul(l, 9, 0, &mut z) }, TgStatus::InvalidInput);
    assert!(last_error().contains("9"));
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { tg_loop_to_json(l, &mut s) }, TgStatus::Ok);
    let v: Value = serde_json::from_str(&take(s)).unwrap();
    assert_eq!(v["order"], 5);
    unsafe {
        tg_loop_free(l);
        tg_triality_free(t);
    }
}

#[test]
fn pipeline_through_the_abi() {
    let t = handle(C5C5);
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { tg_run_pipeline(t, 5, 1, &mut rep) }, TgStatus::Ok);
    let v: Value = serde_json::from_str(&take(rep)).unwrap();
    assert_eq!(v["h_size"], 25);
    assert_eq!(v["loop_order"], 25);
    unsafe { tg_triality_free(t) };

    let ex = handle(r#"{"construction":"example_4","p":5,"sigma_sign":1}"#);
    let mut rep = ptr::null_mut();
    assert_eq!(unsafe { tg_run_pipeline(ex, 0, 0, &mut rep) }, TgStatus::Ok);
    assert!(take(rep).contains("rho_commutation.diagonal"));
    let mut l = ptr::null_mut();
    assert_eq!(
        unsafe { tg_extract_loop(ex, &mut l, ptr::null_mut()) },
        TgStatus::Unsupported
    );
    assert!(l.is_null());
    unsafe { tg_triality_free(ex) };
}

#[test]
fn error_codes() {
    let bad = CString::new("{\"order\": 2,").unwrap();
    let mut t = ptr::null_mut();
    assert_eq!(
        unsafe { tg_triality_from_json(bad.as_ptr(), &mut t) },
        TgStatus::InvalidInput
    );
    assert!(t.is_null());
    assert!(!last_error().is_empty());

    assert_eq!(
        unsafe { tg_triality_from_json(ptr::null(), &mut t) },
        TgStatus::NullPointer
    );
    let mut order = 0;
    assert_eq!(
        unsafe { tg_triality_group_order(ptr::null(), &mut order) },
        TgStatus::NullPointer
    );

    // sigma swapped on two elements is no automorphism
    let table: Vec<Vec<usize>> = (0..5).map(|i| (0..5).map(|j| (i + j) % 5).collect()).collect();
    let file =
        serde_json::json!({"order": 5, "table": table, "rho": [0, 1, 2, 3, 4], "sigma": [0, 2, 1, 3, 4]}).to_string();
    let c = CString::new(file).unwrap();
    let mut rep = ptr::null_mut();
    let st = unsafe { tg_check_triality_json(c.as_ptr(), &mut rep) };
    let v: Value = serde_json::from_str(&take(rep)).unwrap();
    assert_eq!(st, TgStatus::Fail, "{v}");
    let sig = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["check"] == "triality.sigma_automorphism")
        .unwrap();
    assert_eq!(sig["outcome"], "fail");

    let mut buf = [0usize; 8];
    assert_eq!(
        unsafe { tg_free_malcev_dims(2, 5, 7, buf.as_mut_ptr(), buf.len()) },
        TgStatus::CapExceeded
    );
    assert!(last_error().contains("degree"));
    assert_eq!(
        unsafe { tg_free_malcev_dims(2, 5, 5, buf.as_mut_ptr(), buf.len()) },
        TgStatus::Ok
    );
    assert_eq!(&buf[..5], &[2, 1, 2, 3, 6]);
    assert!(tg_last_error().is_null());
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(tg_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}

/// The generated header compiles as C and as C++.
#[test]
fn header_compiles() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = dir.join("include/trialgebra.h");
    assert!(header.exists());
    let tmp = tempfile::TempDir::new().unwrap();
    let src = tmp.path().join("use.c");
    std::fs::write(
        &src,
        "#include \"trialgebra.h\"\nint main(void) { TgTriality *t = 0; TgStatus s = tg_triality_from_json(\"{}\", &t); tg_triality_free(t); return s == TG_STATUS_OK; }\n",
    )
    .unwrap();
    for (cc, lang) in [("cc", "c"), ("c++", "c++")] {
        let Ok(out) = std::process::Command::new(cc)
            .args(["-fsyntax-only", "-Wall", "-Werror", "-x", lang, "-I"])
            .arg(dir.join("include"))
            .arg(&src)
            .output()
        else {
            eprintln!("{cc} not available, header compile skipped");
            continue;
        };
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
}
