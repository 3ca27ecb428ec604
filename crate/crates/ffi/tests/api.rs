//! Exercises the C ABI from Rust.

use std::ffi::{CStr, CString};
use std::ptr;

use hyperterm_ffi::*;

const BINOMIAL: &str = r#"{"k": 2, "generators": [{"num": "z1 + 1", "den": "z1 + 1 - z2"},
    {"num": "z1 - z2", "den": "z2 + 1"}], "seed": {"point": [0, 0], "value": "1"}}"#;
const ODD: &str = r#"{"k": 1, "generators": [{"num": "2*z1 + 1", "den": "1"}], "seed": {"point": [0], "value": "1"}}"#;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ht_last_error_message()) }.to_string_lossy().into_owned()
}

fn parse(json: &str) -> *mut HtSpec {
    let c = CString::new(json).unwrap();
    let mut spec = ptr::null_mut();
    assert_eq!(unsafe { ht_spec_parse(c.as_ptr(), &mut spec) }, HtStatus::Ok, "{}", last_error());
    spec
}

unsafe fn take(s: *mut std::ffi::c_char) -> String {
    let out = CStr::from_ptr(s).to_string_lossy().into_owned();
    ht_string_free(s);
    out
}

#[test]
fn binomial_round_trip() {
    unsafe {
        let spec = parse(BINOMIAL);
        let mut k = 0;
        assert_eq!(ht_spec_arity(spec, &mut k), HtStatus::Ok);
        assert_eq!(k, 2);
        let mut ok = false;
        assert_eq!(ht_check_compatibility(spec, &mut ok), HtStatus::Ok);
        assert!(ok);

        let mut s = ptr::null_mut();
        assert_eq!(ht_decompose_json(spec, &mut s), HtStatus::Ok);
        assert!(take(s).contains("\"chains\""));

        let mut ps = ptr::null_mut();
        assert_eq!(ht_structure_build(spec, &mut ps), HtStatus::Ok, "{}", last_error());
        assert_eq!(ht_structure_json(ps, &mut s), HtStatus::Ok);
        assert!(take(s).contains("\"pieces\""));
        assert_eq!(ht_factorial_json(ps, &mut s), HtStatus::Ok);
        take(s);
        assert_eq!(ht_pochhammer_json(ps, &mut s), HtStatus::Ok);
        take(s);

        let z = [4i64, 2];
        assert_eq!(ht_structure_eval(ps, z.as_ptr(), 2, &mut s), HtStatus::Ok, "{}", last_error());
        assert_eq!(take(s), "6");

        let (lo, hi) = ([-4i64, -4], [4i64, 4]);
        assert_eq!(ht_compare_json(spec, ps, lo.as_ptr(), hi.as_ptr(), 2, &mut s), HtStatus::Ok);
        let rep = take(s);
        assert!(rep.contains("\"checked\": 81") && rep.contains("\"mismatches\": []"), "{rep}");

        ht_structure_free(ps);
        ht_spec_free(spec);
    }
}

#[test]
fn odd_values_and_undefined_points() {
    unsafe {
        let spec = parse(ODD);
        let mut ps = ptr::null_mut();
        assert_eq!(ht_structure_build(spec, &mut ps), HtStatus::Ok);
        let mut s = ptr::null_mut();
        assert_eq!(ht_structure_eval(ps, [-2i64].as_ptr(), 1, &mut s), HtStatus::Ok);
        assert_eq!(take(s), "1/3");
        assert_eq!(ht_structure_eval(ps, [1i64, 2].as_ptr(), 2, &mut s), HtStatus::Dimension);
        assert!(s.is_null());
        assert!(last_error().contains("dimension"));
        ht_structure_free(ps);
        ht_spec_free(spec);

        // f(z + 1) = f(z)/z: z1 = 0 lies on H and the negative piece is not
        // reachable from a seed at 3.
        let spec = parse(r#"{"k": 1, "generators": [{"num": "1", "den": "z1"}], "seed": {"point": [3], "value": "1"}}"#);
        assert_eq!(ht_structure_build(spec, &mut ps), HtStatus::Ok, "{}", last_error());
        assert_eq!(ht_structure_eval(ps, [5i64].as_ptr(), 1, &mut s), HtStatus::Ok);
        assert_eq!(take(s), "1/12");
        assert_eq!(ht_structure_eval(ps, [0i64].as_ptr(), 1, &mut s), HtStatus::Undefined);
        assert!(last_error().contains("exceptional set"));
        assert_eq!(ht_structure_eval(ps, [-3i64].as_ptr(), 1, &mut s), HtStatus::Undefined);
        assert!(last_error().contains("not reachable"));
        ht_structure_free(ps);
        ht_spec_free(spec);
    }
}

#[test]
fn errors_map_to_status_codes() {
    unsafe {
        let mut spec = ptr::null_mut();
        assert_eq!(ht_spec_parse(ptr::null(), &mut spec), HtStatus::NullPointer);
        let bad = CString::new("{\"k\": 1, \"generators\": [{\"num\": \"z1 +\", \"den\": \"1\"}]}").unwrap();
        assert_eq!(ht_spec_parse(bad.as_ptr(), &mut spec), HtStatus::Parse);
        assert!(spec.is_null());
        assert!(last_error().contains("parse"));
        let bytes = b"{\xff}\0";
        assert_eq!(ht_spec_parse(bytes.as_ptr().cast(), &mut spec), HtStatus::InvalidUtf8);
        assert_eq!(ht_spec_parse(bad.as_ptr(), ptr::null_mut()), HtStatus::NullPointer);

        let incompatible = parse(r#"{"k": 2, "generators": [{"num": "z2", "den": "1"}, {"num": "1", "den": "1"}]}"#);
        let mut ok = true;
        assert_eq!(ht_check_compatibility(incompatible, &mut ok), HtStatus::Ok);
        assert!(!ok);
        let mut s = ptr::null_mut();
        assert_eq!(ht_decompose_json(incompatible, &mut s), HtStatus::Cocycle);
        ht_spec_free(incompatible);

        let irreducible =
            parse(r#"{"k": 1, "generators": [{"num": "z1^2 + 1", "den": "1"}], "seed": {"point": [0], "value": "1"}}"#);
        let mut ps = ptr::null_mut();
        assert_eq!(ht_structure_build(irreducible, &mut ps), HtStatus::Ok);
        assert_eq!(ht_pochhammer_json(ps, &mut s), HtStatus::Splitting);
        ht_structure_free(ps);
        ht_spec_free(irreducible);

        ht_spec_free(ptr::null_mut());
        ht_structure_free(ptr::null_mut());
        ht_string_free(ptr::null_mut());
    }
}

#[test]
fn success_clears_the_error_message() {
    unsafe {
        let mut spec = ptr::null_mut();
        assert_eq!(ht_spec_parse(ptr::null(), &mut spec), HtStatus::NullPointer);
        assert!(!last_error().is_empty());
        let spec = parse(ODD);
        assert!(last_error().is_empty());
        ht_spec_free(spec);
    }
}
