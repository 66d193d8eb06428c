use std::ffi::{CStr, CString};
use std::ptr;

use collatz_kit_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(ck_last_error()) }.to_str().unwrap().to_owned()
}

fn take_string(s: *mut std::ffi::c_char) -> String {
    let owned = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { ck_string_free(s) };
    owned
}

#[test]
fn step_and_odd_successor() {
    let mut out = 0u64;
    assert_eq!(unsafe { ck_step(27, &mut out) }, CkStatus::Ok);
    assert_eq!(out, 82);
    assert_eq!(unsafe { ck_step(82, &mut out) }, CkStatus::Ok);
    assert_eq!(out, 41);

    let (mut value, mut x) = (0u64, 0u32);
    assert_eq!(unsafe { ck_odd_successor(7, &mut value, &mut x) }, CkStatus::Ok);
    assert_eq!((value, x), (11, 1));
    assert_eq!(unsafe { ck_odd_successor(5, &mut value, &mut x) }, CkStatus::Ok);
    assert_eq!((value, x), (1, 4));
}

#[test]
fn error_codes() {
    let mut out = 0u64;
    assert_eq!(unsafe { ck_step(0, &mut out) }, CkStatus::InvalidArgument);
    assert!(!last_error().is_empty());
    assert_eq!(unsafe { ck_step(u64::MAX, &mut out) }, CkStatus::Overflow);
    assert_eq!(unsafe { ck_step(3, ptr::null_mut()) }, CkStatus::NullPointer);

    let mut x = 0u32;
    assert_eq!(
        unsafe { ck_odd_successor(8, &mut out, &mut x) },
        CkStatus::InvalidArgument
    );
    assert_eq!(unsafe { ck_step(3, &mut out) }, CkStatus::Ok);
    assert!(last_error().is_empty());
}

#[test]
fn predecessor_round_trip() {
    let (mut n1, mut exists) = (0u64, false);
    assert_eq!(unsafe { ck_predecessor(5, 3, &mut n1, &mut exists) }, CkStatus::Ok);
    assert!(exists);
    assert_eq!(n1, 13);
    assert_eq!(unsafe { ck_predecessor(5, 2, &mut n1, &mut exists) }, CkStatus::Ok);
    assert!(!exists);
    assert_eq!(unsafe { ck_predecessor(5, 65, &mut n1, &mut exists) }, CkStatus::Overflow);
    assert_eq!(
        unsafe { ck_predecessor(4, 2, &mut n1, &mut exists) },
        CkStatus::InvalidArgument
    );
}

#[test]
fn trajectory_handle() {
    let start = CString::new("27").unwrap();
    let mut handle = ptr::null_mut();
    assert_eq!(
        unsafe { ck_trajectory_new(start.as_ptr(), 1000, &mut handle) },
        CkStatus::Ok
    );
    let (mut len, mut done) = (0u64, false);
    assert_eq!(unsafe { ck_trajectory_len(handle, &mut len) }, CkStatus::Ok);
    assert_eq!(unsafe { ck_trajectory_terminated(handle, &mut done) }, CkStatus::Ok);
    assert_eq!(len, 111);
    assert!(done);

    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ck_trajectory_value(handle, 0, &mut s) }, CkStatus::Ok);
    assert_eq!(take_string(s), "27");
    assert_eq!(unsafe { ck_trajectory_value(handle, len, &mut s) }, CkStatus::Ok);
    assert_eq!(take_string(s), "1");
    assert_eq!(
        unsafe { ck_trajectory_value(handle, len + 1, &mut s) },
        CkStatus::IndexOutOfRange
    );
    unsafe { ck_trajectory_free(handle) };
    unsafe { ck_trajectory_free(ptr::null_mut()) };
}

#[test]
fn trajectory_handles_large_starts() {
    let start = CString::new("123456789012345678901234567890").unwrap();
    let mut handle = ptr::null_mut();
    assert_eq!(
        unsafe { ck_trajectory_new(start.as_ptr(), 5, &mut handle) },
        CkStatus::Ok
    );
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ck_trajectory_value(handle, 1, &mut s) }, CkStatus::Ok);
    assert_eq!(take_string(s), "61728394506172839450617283945");
    unsafe { ck_trajectory_free(handle) };

    let bad = CString::new("-3").unwrap();
    assert_eq!(
        unsafe { ck_trajectory_new(bad.as_ptr(), 5, &mut handle) },
        CkStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { ck_trajectory_new(ptr::null(), 5, &mut handle) },
        CkStatus::NullPointer
    );
}

#[test]
fn table_handle() {
    let mut table = ptr::null_mut();
    assert_eq!(
        unsafe { ck_table_new(CkSubset::OddPower, 3, 9, &mut table) },
        CkStatus::Ok
    );
    let (mut n1, mut x, mut gen) = (0u64, 0u32, false);
    let mut n2 = 0u64;
    assert_eq!(unsafe { ck_table_row_n2(table, 2, &mut n2) }, CkStatus::Ok);
    assert_eq!(n2, 17);
    assert_eq!(
        unsafe { ck_table_get(table, 0, 0, &mut n1, &mut x, &mut gen) },
        CkStatus::Ok
    );
    assert_eq!((n1, x, gen), (3, 1, false));
    assert_eq!(
        unsafe { ck_table_get(table, 2, 8, &mut n1, &mut x, &mut gen) },
        CkStatus::Ok
    );
    assert_eq!((n1, x, gen), (742741, 17, true));
    assert_eq!(
        unsafe { ck_table_get(table, 3, 0, &mut n1, &mut x, &mut gen) },
        CkStatus::IndexOutOfRange
    );
    unsafe { ck_table_free(table) };

    assert_eq!(
        unsafe { ck_table_new(CkSubset::EvenPower, 0, 9, &mut table) },
        CkStatus::InvalidArgument
    );
}

#[test]
fn totals_json() {
    let mut s = ptr::null_mut();
    assert_eq!(unsafe { ck_totals_json(2, &mut s) }, CkStatus::Ok);
    let json: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
    assert_eq!(json["N"], 5);
    assert_eq!(json["T"], 3);
    assert_eq!(json["identityHolds"], true);
    assert_eq!(unsafe { ck_totals_json(1, &mut s) }, CkStatus::InvalidArgument);
}

#[test]
fn range_step_struct() {
    let mut step = CkRangeStep::default();
    assert_eq!(unsafe { ck_range_step(19, &mut step) }, CkStatus::Ok);
    assert_eq!(
        step,
        CkRangeStep {
            n: 19,
            p: 10,
            odd_candidate: 29,
            even_candidate: 25,
            chosen: 25,
            growth: 6
        }
    );
    assert_eq!(unsafe { ck_range_step(20, &mut step) }, CkStatus::InvalidArgument);
}

#[test]
fn verify_forward_summary() {
    let mut summary = CkVerifySummary::default();
    assert_eq!(unsafe { ck_verify_forward(10_000, 100_000, 0, &mut summary) }, CkStatus::Ok);
    assert_eq!(summary.verified, 5000);
    assert_eq!(summary.failures, 0);
}

#[test]
fn header_declares_every_export() {
    let header = include_str!("../include/collatz_kit.h");
    for name in [
        "ck_last_error",
        "ck_string_free",
        "ck_step",
        "ck_odd_successor",
        "ck_predecessor",
        "ck_trajectory_new",
        "ck_trajectory_len",
        "ck_trajectory_terminated",
        "ck_trajectory_value",
        "ck_trajectory_free",
        "ck_table_new",
        "ck_table_get",
        "ck_table_row_n2",
        "ck_table_free",
        "ck_totals_json",
        "ck_range_step",
        "ck_verify_forward",
    ] {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct CkTrajectory CkTrajectory;"));
    assert!(header.contains("typedef struct CkTable CkTable;"));
}
