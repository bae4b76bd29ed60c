use std::ffi::{CStr, CString};
use std::ptr;

use supergroup_ffi::*;

fn load(name: &str) -> *mut SgFixture {
    let source = CString::new(name).unwrap();
    let mut fx = ptr::null_mut();
    assert_eq!(unsafe { sg_fixture_load(source.as_ptr(), 0, &mut fx) }, SgStatus::Ok);
    assert!(!fx.is_null());
    fx
}

fn element(fx: *const SgFixture, json: &str) -> *mut SgElement {
    let json = CString::new(json).unwrap();
    let mut el = ptr::null_mut();
    let status = unsafe { sg_element_from_json(fx, json.as_ptr(), &mut el) };
    assert_eq!(status, SgStatus::Ok, "{}", last_error());
    el
}

fn last_error() -> String {
    let p = sg_last_error();
    if p.is_null() {
        String::new()
    } else {
        unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
    }
}

fn to_json(el: *const SgElement) -> serde_json::Value {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { sg_element_to_json(el, &mut s) }, SgStatus::Ok);
    let v = serde_json::from_str(unsafe { CStr::from_ptr(s) }.to_str().unwrap()).unwrap();
    unsafe { sg_string_free(s) };
    v
}

#[test]
fn dimensions_of_bundled_fixture() {
    let fx = load("osp12");
    let (mut e, mut o, mut m) = (0, 0, 0);
    assert_eq!(unsafe { sg_fixture_dims(fx, &mut e, &mut o, &mut m) }, SgStatus::Ok);
    assert_eq!((e, o, m), (3, 2, 2));
    unsafe { sg_fixture_free(fx) };
}

#[test]
fn element_times_inverse_is_identity() {
    let fx = load("osp12");
    let p = element(fx, r#"{"g": [["1","1"],["0","1"]], "a": ["t1", "t2"]}"#);
    let mut inv = ptr::null_mut();
    let mut prod = ptr::null_mut();
    let mut id = ptr::null_mut();
    unsafe {
        assert_eq!(sg_element_inv(fx, p, &mut inv), SgStatus::Ok);
        assert_eq!(sg_element_mul(fx, p, inv, &mut prod), SgStatus::Ok);
        assert_eq!(sg_element_identity(fx, &mut id), SgStatus::Ok);
        let mut eq = -1;
        assert_eq!(sg_element_equal(prod, id, &mut eq), SgStatus::Ok);
        assert_eq!(eq, 1);
        let mut eq2 = -1;
        assert_eq!(sg_element_equal(p, id, &mut eq2), SgStatus::Ok);
        assert_eq!(eq2, 0);
    }
    assert_eq!(to_json(prod), serde_json::json!({"g": [["1","0"],["0","1"]], "a": ["0","0"]}));
    unsafe {
        for el in [p, inv, prod, id] {
            sg_element_free(el);
        }
        sg_fixture_free(fx);
    }
}

#[test]
fn check_passes_and_counts_no_failures() {
    let fx = load("gl11");
    let mut failures = usize::MAX;
    assert_eq!(unsafe { sg_fixture_check(fx, 3, 5, &mut failures) }, SgStatus::Ok);
    assert_eq!(failures, 0);
    unsafe { sg_fixture_free(fx) };
}

#[test]
fn errors_carry_codes_and_messages() {
    let mut fx = ptr::null_mut();
    let bad = CString::new("no-such-fixture").unwrap();
    assert_eq!(unsafe { sg_fixture_load(bad.as_ptr(), 0, &mut fx) }, SgStatus::Parse);
    assert!(fx.is_null());
    assert!(last_error().contains("no-such-fixture"));

    assert_eq!(unsafe { sg_fixture_load(ptr::null(), 0, &mut fx) }, SgStatus::NullArgument);
    let name = CString::new("osp12").unwrap();
    assert_eq!(unsafe { sg_fixture_load(name.as_ptr(), 64, &mut fx) }, SgStatus::Precondition);

    let fx = load("osp12");
    let mut el = ptr::null_mut();
    let not_json = CString::new("{").unwrap();
    assert_eq!(unsafe { sg_element_from_json(fx, not_json.as_ptr(), &mut el) }, SgStatus::Parse);
    let off_group = CString::new(r#"{"g": [["2","0"],["0","1"]], "a": ["0","0"]}"#).unwrap();
    let status = unsafe { sg_element_from_json(fx, off_group.as_ptr(), &mut el) };
    assert_ne!(status, SgStatus::Ok);
    assert!(!last_error().is_empty());
    assert!(el.is_null());

    // a successful call clears the previous message
    let mut id = ptr::null_mut();
    assert_eq!(unsafe { sg_element_identity(fx, &mut id) }, SgStatus::Ok);
    assert!(sg_last_error().is_null());
    unsafe {
        sg_element_free(id);
        sg_fixture_free(fx);
        sg_element_free(ptr::null_mut());
        sg_fixture_free(ptr::null_mut());
    }
}

#[test]
fn generated_header_declares_every_entry_point() {
    let header = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/include/supergroup.h")).unwrap();
    for f in [
        "sg_last_error",
        "sg_fixture_load",
        "sg_fixture_free",
        "sg_fixture_dims",
        "sg_fixture_check",
        "sg_element_identity",
        "sg_element_from_json",
        "sg_element_to_json",
        "sg_element_mul",
        "sg_element_inv",
        "sg_element_equal",
        "sg_element_free",
        "sg_string_free",
    ] {
        assert!(header.contains(&format!("{f}(")), "{f} missing from header");
    }
    assert!(header.contains("typedef struct SgFixture SgFixture;"));
}

#[test]
fn header_compiles_as_c() {
    let header_dir = concat!(env!("CARGO_MANIFEST_DIR"), "/include");
    let dir = std::env::temp_dir().join(format!("sg-ffi-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use_header.c");
    std::fs::write(
        &src,
        "#include \"supergroup.h\"\nint main(void) { SgFixture *fx = 0; SgStatus s = sg_fixture_load(\"osp12\", 0, &fx); sg_fixture_free(fx); return s == SG_STATUS_OK ? 0 : 1; }\n",
    )
    .unwrap();
    let status = std::process::Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I", header_dir])
        .arg(&src)
        .status()
        .expect("a C compiler is available");
    assert!(status.success());
}
