use std::ffi::{CStr, CString};
use std::ptr;

use thetacat_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(tc_last_error()) }.to_string_lossy().into_owned()
}

unsafe fn precat(name: &str, n: u32) -> *mut TcPrecat {
    let name = CString::new(name).unwrap();
    let json = tc_fixture(name.as_ptr());
    assert!(!json.is_null());
    let mut p = ptr::null_mut();
    assert_eq!(tc_precat_from_json(json, n, 0, &mut p), TcStatus::Ok, "{}", last_error());
    p
}

#[test]
fn arrow_end_to_end() {
    unsafe {
        let a = precat("arrow", 1);
        let mut is_cat = false;
        assert_eq!(tc_precat_is_ncategory(a, &mut is_cat), TcStatus::Ok);
        assert!(is_cat);
        let (mut levels, mut points) = (0, 0);
        assert_eq!(tc_precat_level_count(a, &mut levels), TcStatus::Ok);
        assert_eq!(levels, 4);
        assert_eq!(tc_precat_level_size(a, 0, &mut points), TcStatus::Ok);
        assert_eq!(points, 2);
        assert_eq!(tc_precat_level_size(a, 9, &mut points), TcStatus::Invalid);

        let mut r = ptr::null_mut();
        assert_eq!(tc_resolve(a, 0, false, &mut r), TcStatus::Ok);
        let (mut f0, mut f1) = (0, 0);
        assert_eq!(tc_resolution_cells(r, &mut f0, &mut f1), TcStatus::Ok);
        assert_eq!(f0, 3);
        let (mut maps, mut classes) = (0, 0);
        assert_eq!(tc_hom_classes(r, a, &mut maps, &mut classes), TcStatus::Ok);
        assert_eq!((maps, classes), (3, 3));
        tc_resolution_free(r);
        tc_precat_free(a);
    }
}

#[test]
fn retract_classes_through_the_abi() {
    unsafe {
        let (pt, re) = (precat("point", 1), precat("retract", 1));
        let mut r = ptr::null_mut();
        assert_eq!(tc_resolve(pt, 0, false, &mut r), TcStatus::Ok);
        let (mut maps, mut classes) = (0, 0);
        assert_eq!(tc_hom_classes(r, re, &mut maps, &mut classes), TcStatus::Ok);
        assert_eq!((maps, classes), (2, 1));
        tc_resolution_free(r);
        tc_precat_free(pt);
        tc_precat_free(re);
    }
}

#[test]
fn errors_are_reported() {
    unsafe {
        let mut p = ptr::null_mut();
        assert_eq!(tc_precat_from_json(ptr::null(), 1, 0, &mut p), TcStatus::NullPointer);
        assert!(last_error().contains("json"));
        let bad = CString::new("{\"v\": \"v1\"").unwrap();
        assert_eq!(tc_precat_from_json(bad.as_ptr(), 1, 0, &mut p), TcStatus::Invalid);
        assert!(p.is_null());
        let arrow = tc_fixture(CString::new("arrow").unwrap().as_ptr());
        assert_eq!(tc_precat_from_json(arrow, 7, 0, &mut p), TcStatus::Invalid);
        assert!(tc_fixture(CString::new("nope").unwrap().as_ptr()).is_null());
        let bytes = [0xffu8, 0];
        assert_eq!(tc_precat_from_json(bytes.as_ptr().cast(), 1, 0, &mut p), TcStatus::InvalidUtf8);

        // a source and target over different supports
        let (a1, a2) = (precat("arrow", 1), precat("arrow", 2));
        let mut r = ptr::null_mut();
        assert_eq!(tc_resolve(a1, 0, false, &mut r), TcStatus::Ok);
        let (mut maps, mut classes) = (0, 0);
        assert_eq!(tc_hom_classes(r, a2, &mut maps, &mut classes), TcStatus::Invalid);
        assert_eq!(tc_resolve(a1, 1, false, &mut ptr::null_mut()), TcStatus::PassLimit);
        tc_resolution_free(r);
        tc_precat_free(a1);
        tc_precat_free(a2);
        tc_precat_free(ptr::null_mut());
    }
}
