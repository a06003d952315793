use std::ffi::{CStr, CString};
use std::ptr;

use cubal_ffi::*;

fn generate(spec: &str) -> *mut CubalModel {
    let spec = CString::new(spec).unwrap();
    let mut m = ptr::null_mut();
    assert_eq!(unsafe { cubal_model_generate(spec.as_ptr(), &mut m) }, CubalStatus::Ok);
    m
}

fn last_error() -> String {
    let p = cubal_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn data(name: &str) -> CString {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    CString::new(std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn counts_and_validation() {
    let m = generate("square:Z2");
    let (mut o, mut e, mut s, mut v, mut t) = (0, 0, 0, 99, 99);
    unsafe {
        assert_eq!(cubal_model_counts(m, &mut o, &mut e, &mut s), CubalStatus::Ok);
        assert_eq!((o, e, s), (1, 2, 8));
        assert_eq!(cubal_validate(m, &mut v), CubalStatus::Ok);
        assert_eq!(cubal_check_thin(m, &mut t), CubalStatus::Ok);
        assert_eq!((v, t), (0, 0));
        cubal_model_free(m);
    }
}

#[test]
fn text_round_trip_is_isomorphic() {
    let m = generate("square:ind2");
    unsafe {
        let text = cubal_model_write(m);
        assert!(!text.is_null());
        let mut back = ptr::null_mut();
        assert_eq!(cubal_model_parse(text, &mut back), CubalStatus::Ok);
        cubal_string_free(text);
        let mut iso = false;
        assert_eq!(cubal_isomorphic(m, back, &mut iso), CubalStatus::Ok);
        assert!(iso);
        cubal_model_free(back);
        cubal_model_free(m);
    }
}

#[test]
fn broken_model_reports_violations() {
    let text = data("zz2.dgc").into_string().unwrap().replacen("  * -> 0\n", "  * -> 1\n", 1);
    let text = CString::new(text).unwrap();
    let mut m = ptr::null_mut();
    unsafe {
        assert_eq!(cubal_model_parse(text.as_ptr(), &mut m), CubalStatus::Ok);
        let mut v = 0;
        assert_eq!(cubal_validate(m, &mut v), CubalStatus::AxiomViolation);
        assert!(v > 0);
        assert!(!last_error().is_empty());
        cubal_model_free(m);
    }
}

#[test]
fn bad_input_codes() {
    let mut m = ptr::null_mut();
    let junk = CString::new("objects\n  x\nwidgets\n").unwrap();
    unsafe {
        assert_eq!(cubal_model_parse(ptr::null(), &mut m), CubalStatus::NullArgument);
        assert_eq!(cubal_model_parse(junk.as_ptr(), ptr::null_mut()), CubalStatus::NullArgument);
        assert_eq!(cubal_model_parse(junk.as_ptr(), &mut m), CubalStatus::ParseError);
        assert!(last_error().contains("line 3"));
        assert!(m.is_null());
        let bytes = [0xffu8, 0];
        assert_eq!(cubal_model_parse(bytes.as_ptr().cast(), &mut m), CubalStatus::InvalidUtf8);
        let mut n = 0;
        assert_eq!(cubal_validate(ptr::null(), &mut n), CubalStatus::NullArgument);
        assert!(cubal_model_write(ptr::null()).is_null());
        cubal_model_free(ptr::null_mut());
        cubal_morphism_free(ptr::null_mut());
        cubal_string_free(ptr::null_mut());
    }
    // a later success clears the message
    let g = generate("square:Z3");
    assert!(cubal_last_error().is_null());
    unsafe { cubal_model_free(g) };
}

#[test]
fn interval_loop_hits_the_budget() {
    let (mut pt, mut iv) = (ptr::null_mut(), ptr::null_mut());
    let (mut f, mut g) = (ptr::null_mut(), ptr::null_mut());
    unsafe {
        assert_eq!(cubal_model_parse(data("point.dgc").as_ptr(), &mut pt), CubalStatus::Ok);
        assert_eq!(cubal_model_parse(data("interval.dgc").as_ptr(), &mut iv), CubalStatus::Ok);
        assert_eq!(cubal_morphism_parse(data("point_to_0.map").as_ptr(), pt, iv, &mut f), CubalStatus::Ok);
        assert_eq!(cubal_morphism_parse(data("point_to_1.map").as_ptr(), pt, iv, &mut g), CubalStatus::Ok);
        let mut q = ptr::null_mut();
        assert_eq!(cubal_coequalise(f, g, 300, &mut q), CubalStatus::BudgetExceeded);
        assert!(q.is_null());
        assert_eq!(cubal_coequalise(f, f, 300, &mut q), CubalStatus::Ok);
        let (mut o, mut e, mut s) = (0, 0, 0);
        assert_eq!(cubal_model_counts(q, &mut o, &mut e, &mut s), CubalStatus::Ok);
        // coequalising a map with itself changes nothing
        assert_eq!((o, e, s), (2, 4, 16));
        assert_eq!(cubal_coequalise(f, g, 0, &mut q), CubalStatus::InputMismatch);
        for m in [q, pt, iv] {
            cubal_model_free(m);
        }
        cubal_morphism_free(f);
        cubal_morphism_free(g);
    }
}
