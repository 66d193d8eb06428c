//! C ABI over `collatz-kit`.
//!
//! Every function returns a [`CkStatus`]; results go through out-pointers.
//! On a non-`Ok` status, [`ck_last_error`] describes the failure for the
//! calling thread. Handles are opaque and must be released with their
//! matching `_free` function. Strings returned by the library are released
//! with [`ck_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use collatz_kit::collatz::{self, Trajectory};
use collatz_kit::inverse::{self, PredecessorTable, SubsetTag};
use collatz_kit::{counting, range, verify, Error, PosInt};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CkStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// The result does not fit the fixed-width output type.
    Overflow = 3,
    IndexOutOfRange = 4,
    Panic = 5,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CkSubset {
    EvenPower = 0,
    OddPower = 1,
}

/// One step of the range recurrence, in machine words.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CkRangeStep {
    pub n: u64,
    pub p: u64,
    pub odd_candidate: u64,
    pub even_candidate: u64,
    pub chosen: u64,
    pub growth: i64,
}

/// Outcome of a forward sweep.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CkVerifySummary {
    pub verified: u64,
    pub failures: u64,
    pub max_steps_used: u64,
}

pub struct CkTrajectory(Trajectory);

pub struct CkTable(PredecessorTable);

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_last_error(message: impl Into<Vec<u8>>) {
    let mut bytes = message.into();
    bytes.retain(|&b| b != 0);
    let message = CString::new(bytes).expect("interior nul removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = message);
}

struct Failure(CkStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(CkStatus::InvalidArgument, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(CkStatus::NullPointer, format!("{what} is null"))
}

fn overflow(what: &str) -> Failure {
    Failure(CkStatus::Overflow, format!("{what} does not fit in 64 bits"))
}

fn guard(body: impl FnOnce() -> Result<(), Failure>) -> CkStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_last_error("");
            CkStatus::Ok
        }
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(payload) => {
            let message = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(message);
            CkStatus::Panic
        }
    }
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn pos(n: u64) -> Result<PosInt, Failure> {
    Ok(PosInt::try_from(n)?)
}

fn word(n: &PosInt, what: &str) -> Result<u64, Failure> {
    n.to_u64().ok_or_else(|| overflow(what))
}

fn c_string(s: String) -> *mut c_char {
    CString::new(s).expect("no interior nul").into_raw()
}

/// Message for the last failed call on this thread; empty after a success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn ck_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is accepted.
///
/// # Safety
/// `s` must come from this library and not have been freed already.
#[no_mangle]
pub unsafe extern "C" fn ck_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// The Collatz successor of `n`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_step(n: u64, out: *mut u64) -> CkStatus {
    guard(|| {
        pos(n)?;
        let next = collatz::fast::step(n).ok_or_else(|| overflow("3n + 1"))?;
        write(out, next, "out")
    })
}

/// `(3n + 1) / 2^x` for odd `n`, with the exponent `x`.
///
/// # Safety
/// `out_value` and `out_x` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_odd_successor(n: u64, out_value: *mut u64, out_x: *mut u32) -> CkStatus {
    guard(|| {
        let (value, x) = collatz::odd_successor(&pos(n)?)?;
        let x = u32::try_from(x).map_err(|_| overflow("exponent"))?;
        write(out_value, word(&value, "odd successor")?, "out_value")?;
        write(out_x, x, "out_x")
    })
}

/// The odd predecessor `(2^x n2 - 1) / 3`. `*out_exists` is false when
/// `2^x n2 - 1` is not divisible by 3.
///
/// # Safety
/// `out_n1` and `out_exists` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_predecessor(
    n2: u64,
    x: u32,
    out_n1: *mut u64,
    out_exists: *mut bool,
) -> CkStatus {
    guard(|| {
        match inverse::predecessor_of(&pos(n2)?, x)? {
            Some(record) => {
                write(out_n1, word(&record.n1, "predecessor")?, "out_n1")?;
                write(out_exists, true, "out_exists")
            }
            None => {
                write(out_n1, 0, "out_n1")?;
                write(out_exists, false, "out_exists")
            }
        }
    })
}

/// Forward trajectory of the decimal number `start`, stopping at 1 or after
/// `max_steps` steps.
///
/// # Safety
/// `start` must be a nul-terminated string; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_trajectory_new(
    start: *const c_char,
    max_steps: u64,
    out: *mut *mut CkTrajectory,
) -> CkStatus {
    guard(|| {
        if start.is_null() {
            return Err(null("start"));
        }
        let text = CStr::from_ptr(start)
            .to_str()
            .map_err(|_| Failure(CkStatus::InvalidArgument, "start is not UTF-8".into()))?;
        let n: PosInt = text.parse()?;
        let handle = Box::new(CkTrajectory(collatz::trajectory(&n, max_steps)));
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(Box::into_raw(handle));
        Ok(())
    })
}

/// Number of steps taken.
///
/// # Safety
/// `t` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_trajectory_len(t: *const CkTrajectory, out: *mut u64) -> CkStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("trajectory"))?;
        write(out, t.0.len() as u64, "out")
    })
}

/// Whether the trajectory reached 1 within its budget.
///
/// # Safety
/// `t` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_trajectory_terminated(t: *const CkTrajectory, out: *mut bool) -> CkStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("trajectory"))?;
        write(out, t.0.terminated, "out")
    })
}

/// Value at `index`, where index 0 is the start and `len` the last value,
/// as a decimal string owned by the caller.
///
/// # Safety
/// `t` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_trajectory_value(
    t: *const CkTrajectory,
    index: u64,
    out: *mut *mut c_char,
) -> CkStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("trajectory"))?;
        let value = usize::try_from(index)
            .ok()
            .and_then(|i| t.0.values().nth(i))
            .ok_or_else(|| {
                Failure(
                    CkStatus::IndexOutOfRange,
                    format!("index {index} past trajectory of {} steps", t.0.len()),
                )
            })?;
        write(out, c_string(value.to_string()), "out")
    })
}

/// # Safety
/// `t` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn ck_trajectory_free(t: *mut CkTrajectory) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Predecessor table of one residue class.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_table_new(
    subset: CkSubset,
    rows: u32,
    cols: u32,
    out: *mut *mut CkTable,
) -> CkStatus {
    guard(|| {
        let tag = match subset {
            CkSubset::EvenPower => SubsetTag::EvenPowerClass,
            CkSubset::OddPower => SubsetTag::OddPowerClass,
        };
        let table = inverse::generate_table(tag, rows as usize, cols as usize)?;
        if out.is_null() {
            return Err(null("out"));
        }
        out.write(Box::into_raw(Box::new(CkTable(table))));
        Ok(())
    })
}

/// Cell `(row, col)`: the predecessor `n1`, its exponent, and whether it
/// has predecessors of its own.
///
/// # Safety
/// `t` must be a live handle; out-pointers must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_table_get(
    t: *const CkTable,
    row: u32,
    col: u32,
    out_n1: *mut u64,
    out_x: *mut u32,
    out_generates: *mut bool,
) -> CkStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("table"))?;
        let record = t
            .0
            .rows
            .get(row as usize)
            .and_then(|r| r.records.get(col as usize))
            .ok_or_else(|| Failure(CkStatus::IndexOutOfRange, format!("no cell ({row}, {col})")))?;
        write(out_n1, word(&record.n1, "table value")?, "out_n1")?;
        write(out_x, record.x, "out_x")?;
        write(out_generates, record.generates, "out_generates")
    })
}

/// The `n2` heading row `row`.
///
/// # Safety
/// `t` must be a live handle; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_table_row_n2(t: *const CkTable, row: u32, out: *mut u64) -> CkStatus {
    guard(|| {
        let t = t.as_ref().ok_or_else(|| null("table"))?;
        let r = t
            .0
            .rows
            .get(row as usize)
            .ok_or_else(|| Failure(CkStatus::IndexOutOfRange, format!("no row {row}")))?;
        write(out, word(&r.n2, "row value")?, "out")
    })
}

/// # Safety
/// `t` must be null or a handle not freed before.
#[no_mangle]
pub unsafe extern "C" fn ck_table_free(t: *mut CkTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// Closed-form totals for `N = (4^k - 1) / 3` as a JSON object owned by the
/// caller.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_totals_json(k: u64, out: *mut *mut c_char) -> CkStatus {
    guard(|| {
        let report = counting::totals(k)?;
        let json = serde_json::to_string(&report).expect("serializable");
        write(out, c_string(json), "out")
    })
}

/// One step of the range recurrence from the odd bound `n`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_range_step(n: u64, out: *mut CkRangeStep) -> CkStatus {
    guard(|| {
        let s = range::range_step(&pos(n)?)?;
        let step = CkRangeStep {
            n,
            p: s.p_n.try_into().map_err(|_| overflow("p"))?,
            odd_candidate: word(&s.odd_candidate, "odd candidate")?,
            even_candidate: word(&s.even_candidate, "even candidate")?,
            chosen: word(&s.chosen, "chosen")?,
            growth: s.growth.try_into().map_err(|_| overflow("growth"))?,
        };
        write(out, step, "out")
    })
}

/// Checks every odd start up to `bound`. `shards = 0` uses all cores.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn ck_verify_forward(
    bound: u64,
    max_steps: u64,
    shards: u32,
    out: *mut CkVerifySummary,
) -> CkStatus {
    guard(|| {
        let shards = match shards {
            0 => std::thread::available_parallelism().map_or(1, |n| n.get()),
            s => s as usize,
        };
        let report = verify::verify_forward(bound, max_steps, shards)?;
        let summary = CkVerifySummary {
            verified: report.verified,
            failures: report.failures.len() as u64,
            max_steps_used: report.max_steps_used,
        };
        write(out, summary, "out")
    })
}
