//! Brute-force oracles.
//!
//! Nothing in here relies on the closed forms of [`crate::counting`] or the
//! recurrence of [`crate::range`]; these routines walk the step rule or
//! enumerate records directly, and the rest of the crate is checked against
//! them.

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write as _;
use std::thread;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::collatz::{self, fast, DEFAULT_MAX_STEPS};
use crate::counting::{self, TotalsReport};
use crate::inverse::for_each_record_below;
use crate::range::odd_range_candidate;
use crate::{Error, PosInt, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub enum FailureReason {
    MaxStepsExceeded,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub start: u64,
    pub reason: FailureReason,
}

fn serialize_secs<S: Serializer>(d: &Duration, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_f64(d.as_secs_f64())
}

#[derive(Debug, Clone, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct VerifyReport {
    pub bound: u64,
    pub verified: u64,
    pub failures: Vec<Failure>,
    pub max_steps_used: u64,
    #[serde(rename = "wallTimeSecs", serialize_with = "serialize_secs")]
    pub wall_time: Duration,
    pub shards: usize,
}

impl VerifyReport {
    pub fn all_confirmed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Equality of everything that does not depend on how the run was
    /// scheduled (wall time and shard count).
    pub fn same_outcome(&self, other: &Self) -> bool {
        self.bound == other.bound
            && self.verified == other.verified
            && self.failures == other.failures
            && self.max_steps_used == other.max_steps_used
    }
}

enum Descent {
    /// Dropped below the start after this many steps.
    Below(u64),
    Exhausted,
    Overflow,
}

/// Walks an odd `start > 1` until the value drops below `start`.
fn descend_u64(start: u64, max_steps: u64) -> Descent {
    let mut v = start;
    let mut steps = 0u64;
    loop {
        let Some(lifted) = v.checked_mul(3).and_then(|t| t.checked_add(1)) else {
            return Descent::Overflow;
        };
        steps += 1;
        let x = lifted.trailing_zeros();
        let next = lifted >> x;
        if next >= start {
            steps += u64::from(x);
            if steps > max_steps {
                return Descent::Exhausted;
            }
            v = next;
            continue;
        }
        // count only the halvings needed to get under the start
        let mut h = 1u32;
        while lifted >> h >= start {
            h += 1;
        }
        steps += u64::from(h);
        return if steps > max_steps {
            Descent::Exhausted
        } else {
            Descent::Below(steps)
        };
    }
}

fn descend_big(start: u64, max_steps: u64) -> Descent {
    let bound = BigUint::from(start);
    let mut v = PosInt::try_from(start).expect("start is positive");
    let mut steps = 0u64;
    while steps < max_steps {
        v = collatz::step(&v);
        steps += 1;
        if *v < bound {
            return Descent::Below(steps);
        }
    }
    Descent::Exhausted
}

fn descend(start: u64, max_steps: u64) -> Option<u64> {
    if start == 1 {
        return Some(0);
    }
    match descend_u64(start, max_steps) {
        Descent::Below(steps) => Some(steps),
        Descent::Exhausted => None,
        Descent::Overflow => match descend_big(start, max_steps) {
            Descent::Below(steps) => Some(steps),
            _ => None,
        },
    }
}

#[derive(Default)]
struct ShardOutcome {
    confirmed: u64,
    max_steps_used: u64,
    failures: Vec<u64>,
}

/// Odd starts with index in `[lo, hi)`; the k-th odd start is `2k + 1`.
fn run_shard(lo: u64, hi: u64, max_steps: u64) -> ShardOutcome {
    let mut out = ShardOutcome::default();
    for k in lo..hi {
        let start = 2 * k + 1;
        match descend(start, max_steps) {
            Some(steps) => {
                out.confirmed += 1;
                out.max_steps_used = out.max_steps_used.max(steps);
            }
            None => out.failures.push(start),
        }
    }
    out
}

/// Confirms every odd start `<= bound` reaches 1.
///
/// A start is confirmed once its trajectory drops below it, given that all
/// smaller starts are confirmed. Odd starts are cut into `shards` contiguous
/// blocks and merged by ascending start, so the result does not depend on
/// the shard count. If some start fails, the induction stops there and every
/// larger start is re-checked by walking all the way to 1.
pub fn verify_forward(bound: u64, max_steps: u64, shards: usize) -> Result<VerifyReport> {
    if bound == 0 {
        return Err(Error::NotPositive("0".into()));
    }
    if max_steps == 0 {
        return Err(Error::NotPositive("0".into()));
    }
    let shards = shards.max(1);
    let clock = Instant::now();
    let odd_count = bound.div_ceil(2);
    let cuts: Vec<u64> = (0..=shards as u64)
        .map(|s| (u128::from(odd_count) * u128::from(s) / shards as u128) as u64)
        .collect();

    let outcomes: Vec<ShardOutcome> = thread::scope(|scope| {
        let handles: Vec<_> = cuts
            .windows(2)
            .map(|w| {
                let (lo, hi) = (w[0], w[1]);
                scope.spawn(move || run_shard(lo, hi, max_steps))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("verification shard panicked"))
            .collect()
    });

    let first_failure = outcomes.iter().flat_map(|o| o.failures.first()).min().copied();
    let (verified, max_steps_used, failures) = match first_failure {
        None => (
            outcomes.iter().map(|o| o.confirmed).sum(),
            outcomes.iter().map(|o| o.max_steps_used).max().unwrap_or(0),
            Vec::new(),
        ),
        Some(first) => recheck_after_failure(bound, max_steps, first),
    };
    Ok(VerifyReport {
        bound,
        verified,
        failures: failures
            .into_iter()
            .map(|start| Failure {
                start,
                reason: FailureReason::MaxStepsExceeded,
            })
            .collect(),
        max_steps_used,
        wall_time: clock.elapsed(),
        shards,
    })
}

/// Below `first` the descent argument stands; from `first` on every start
/// has to reach 1 on its own.
fn recheck_after_failure(bound: u64, max_steps: u64, first: u64) -> (u64, u64, Vec<u64>) {
    let mut verified = 0u64;
    let mut max_used = 0u64;
    let mut failures = Vec::new();
    for start in (1..=bound).step_by(2) {
        let steps = if start < first {
            descend(start, max_steps)
        } else {
            let summary =
                collatz::trajectory_summary(&PosInt::try_from(start).expect("positive"), max_steps);
            summary.terminated.then(|| summary.total_steps())
        };
        match steps {
            Some(s) => {
                verified += 1;
                max_used = max_used.max(s);
            }
            None => failures.push(start),
        }
    }
    (verified, max_used, failures)
}

/// A cycle of the step rule, rotated so its smallest member comes first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct CycleRecord {
    pub members: Vec<PosInt>,
}

impl CycleRecord {
    fn canonical(mut members: Vec<PosInt>) -> Self {
        let min_at = members
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.cmp(b.1))
            .map(|(i, _)| i)
            .unwrap_or(0);
        members.rotate_left(min_at);
        Self { members }
    }

    /// Product of the step factors once around the loop.
    pub fn chain_product(&self) -> BigRational {
        self.members
            .iter()
            .map(|m| collatz::Step::of(m.clone()).factor())
            .fold(BigRational::one(), |acc, f| acc * f)
    }

    /// Each member steps to the next and the last steps back to the first.
    pub fn is_closed(&self) -> bool {
        let distinct: HashSet<_> = self.members.iter().collect();
        distinct.len() == self.members.len()
            && self
                .members
                .iter()
                .zip(self.members.iter().cycle().skip(1))
                .all(|(a, b)| &collatz::step(a) == b)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CycleScan {
    pub bound: u64,
    pub cycles: Vec<CycleRecord>,
    /// Starts that neither dropped below themselves nor closed a loop
    /// within the step budget.
    pub unresolved: Vec<u64>,
}

enum Fate<T> {
    Descends,
    Cycle(Vec<T>),
    Unresolved,
    Overflow,
}

/// Brent's cycle search from `start`, cut short as soon as the walk drops
/// below `start` (everything below has been scanned already).
fn fate<T: Clone + Ord>(start: T, max_steps: u64, step: impl Fn(&T) -> Option<T>) -> Fate<T> {
    let mut power = 1u64;
    let mut lam = 1u64;
    let mut tortoise = start.clone();
    let Some(mut hare) = step(&start) else {
        return Fate::Overflow;
    };
    let mut steps = 1u64;
    loop {
        if hare < start {
            return Fate::Descends;
        }
        if hare == start || hare == tortoise {
            let mut members = vec![hare.clone()];
            let mut v = step(&hare).expect("cycle members were stepped already");
            while v != hare {
                members.push(v.clone());
                v = step(&v).expect("cycle members were stepped already");
            }
            return Fate::Cycle(members);
        }
        if steps >= max_steps {
            return Fate::Unresolved;
        }
        if power == lam {
            tortoise = hare.clone();
            power *= 2;
            lam = 0;
        }
        let Some(next) = step(&hare) else {
            return Fate::Overflow;
        };
        hare = next;
        lam += 1;
        steps += 1;
    }
}

/// Searches the trajectories of all odd starts `<= bound` for cycles.
/// Every cycle met on the way is reported, including any whose minimum
/// lies above `bound`.
pub fn cycle_scan(bound: u64, max_steps: u64) -> Result<CycleScan> {
    if bound == 0 {
        return Err(Error::NotPositive("0".into()));
    }
    let mut cycles = BTreeSet::new();
    let mut unresolved = Vec::new();
    for start in (1..=bound).step_by(2) {
        match fate(start, max_steps, |&v| fast::step(v)) {
            Fate::Descends => {}
            Fate::Unresolved => unresolved.push(start),
            Fate::Cycle(members) => {
                let members = members
                    .into_iter()
                    .map(|m| PosInt::try_from(m).expect("cycle members are positive"))
                    .collect();
                cycles.insert(CycleRecord::canonical(members));
            }
            Fate::Overflow => {
                let big = PosInt::try_from(start).expect("positive");
                match fate(big, max_steps, |v| Some(collatz::step(v))) {
                    Fate::Descends => {}
                    Fate::Cycle(members) => {
                        cycles.insert(CycleRecord::canonical(members));
                    }
                    Fate::Unresolved | Fate::Overflow => unresolved.push(start),
                }
            }
        }
    }
    Ok(CycleScan {
        bound,
        cycles: cycles.into_iter().collect(),
        unresolved,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableValue {
    pub value: PosInt,
    /// Odd and either inside `[1, N0]` or a `6i-1` number inside the next
    /// odd-power range. The repeated value that cuts a row is never bold.
    pub bold: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AssumptionRow {
    pub start: u64,
    pub values: Vec<TableValue>,
    /// The chain goes on through values shown in an earlier row.
    pub continues: bool,
    /// Odd numbers of `[1, N0]` first seen in this row.
    pub new_odds: Vec<u64>,
}

impl AssumptionRow {
    pub fn plain_values(&self) -> Vec<u64> {
        self.values
            .iter()
            .map(|v| v.value.to_u64().expect("table values fit in u64"))
            .collect()
    }

    fn chain_text(&self) -> String {
        let mut parts: Vec<String> = self
            .values
            .iter()
            .map(|v| {
                if v.bold {
                    format!("*{}*", v.value)
                } else {
                    v.value.to_string()
                }
            })
            .collect();
        if self.continues {
            parts.push("...".into());
        }
        parts.join(" -> ")
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AssumptionTable {
    pub n0: u64,
    pub next_odd_range: PosInt,
    pub rows: Vec<AssumptionRow>,
}

impl AssumptionTable {
    /// Two aligned columns, chain and new odds; bold values in asterisks.
    pub fn to_text(&self) -> String {
        let chains: Vec<String> = self.rows.iter().map(AssumptionRow::chain_text).collect();
        let width = chains.iter().map(|c| c.chars().count()).max().unwrap_or(0);
        let mut out = String::new();
        for (row, chain) in self.rows.iter().zip(chains) {
            let odds: Vec<String> = row.new_odds.iter().map(u64::to_string).collect();
            let pad = width - chain.chars().count();
            let _ = writeln!(out, "{chain}{}  | {}", " ".repeat(pad), odds.join(","));
        }
        out
    }
}

/// Forward trajectories of the odd starts `<= n0`, each cut at the first
/// value an earlier row (or the row itself) already showed.
///
/// Starts already shown are skipped. A chain that closes on its own start
/// (only 1 does) is written as the loop ending at the start.
pub fn reproduce_assumption_table(n0: u64) -> Result<AssumptionTable> {
    let n0_pos = PosInt::try_from(n0)?;
    let next_odd_range = odd_range_candidate(&n0_pos)?;
    let next_bound = next_odd_range.to_u64().map(u128::from).unwrap_or(u128::MAX);
    let bold = |v: &PosInt| -> bool {
        let Some(v) = v.to_u64() else { return false };
        v % 2 == 1 && (v <= n0 || (v % 6 == 5 && u128::from(v) <= next_bound))
    };

    let mut seen: HashSet<PosInt> = HashSet::new();
    let mut rows = Vec::new();
    for start in (1..=n0).step_by(2) {
        let start_pos = PosInt::try_from(start).expect("positive");
        if seen.contains(&start_pos) {
            continue;
        }
        seen.insert(start_pos.clone());
        let mut values = vec![start_pos.clone()];
        let continues = loop {
            if values.len() as u64 > DEFAULT_MAX_STEPS {
                return Err(Error::TooLarge {
                    name: "row length",
                    limit: DEFAULT_MAX_STEPS.to_string(),
                    got: values.len().to_string(),
                });
            }
            let next = collatz::step(values.last().expect("non-empty"));
            if next == start_pos {
                values.rotate_left(1);
                break false;
            }
            if !seen.insert(next.clone()) {
                values.push(next);
                break true;
            }
            values.push(next);
        };
        let shown = if continues { values.len() - 1 } else { values.len() };
        let mut new_odds: Vec<u64> = values[..shown]
            .iter()
            .filter_map(PosInt::to_u64)
            .filter(|v| v % 2 == 1 && *v <= n0)
            .collect();
        new_odds.sort_unstable();
        rows.push(AssumptionRow {
            start,
            values: values
                .into_iter()
                .enumerate()
                .map(|(i, value)| TableValue {
                    bold: i < shown && bold(&value),
                    value,
                })
                .collect(),
            continues,
            new_odds,
        });
    }
    Ok(AssumptionTable {
        n0,
        next_odd_range,
        rows,
    })
}

/// Counts of predecessor records with `n1 <= N`, split the way the totals
/// formula assembles them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct ClassBreakdown {
    /// Row `n2 = 1` without the self-iteration cell; expected `k - 1`.
    pub unit_row: u64,
    /// The number 1 itself.
    pub root: u64,
    /// Rows `n2 = 6i - 1`; expected `T_o`.
    pub odd_rows: u64,
    /// Rows `n2 = 6i + 1`, `i >= 1`; expected `T_e`.
    pub even_rows: u64,
    /// Rows `n2 ≡ 3 (mod 6)`; expected zero.
    pub multiple_of_three_rows: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TotalsCrossCheck {
    pub report: TotalsReport,
    pub breakdown: ClassBreakdown,
    pub largest_odd_row: Option<u64>,
    pub expected_largest_odd_row: Option<u64>,
    pub largest_even_row: Option<u64>,
    pub expected_largest_even_row: Option<u64>,
    /// Every odd number in `[3, N]` is produced by exactly one record.
    pub every_odd_once: bool,
    pub ok: bool,
}

/// Largest `k_N` accepted by [`cross_check_totals`] (N ≈ 9e7).
pub const MAX_CROSS_CHECK_K: u64 = 14;

/// For each `k` in `2..=k_max`: the closed-form totals with their brute
/// count, and a record-by-record enumeration compared class by class with
/// `(k - 1) + 1 + T_o + T_e` and with the row maxima `6 i_opow,max - 1` and
/// `6 i_epow,max + 1`.
pub fn cross_check_totals(k_max: u64) -> Result<Vec<TotalsCrossCheck>> {
    if k_max < 2 {
        return Err(Error::TooSmall {
            name: "k_N",
            min: "2".into(),
            got: k_max.to_string(),
        });
    }
    if k_max > MAX_CROSS_CHECK_K {
        return Err(Error::TooLarge {
            name: "k_N",
            limit: MAX_CROSS_CHECK_K.to_string(),
            got: k_max.to_string(),
        });
    }
    (2..=k_max).map(cross_check_one).collect()
}

fn cross_check_one(k: u64) -> Result<TotalsCrossCheck> {
    let report = counting::totals(k)?;
    let n = report.n.to_u64().expect("bounded by MAX_CROSS_CHECK_K");
    let p = BigUint::from(n.div_ceil(2));

    let mut breakdown = ClassBreakdown {
        root: 1,
        ..ClassBreakdown::default()
    };
    let mut hits = vec![0u8; (n / 2 + 1) as usize];
    let (mut largest_odd_row, mut largest_even_row) = (None::<u64>, None::<u64>);
    for_each_record_below(n, |n2, _x, n1| {
        let slot = &mut hits[(n1 / 2) as usize];
        *slot = slot.saturating_add(1);
        match n2 % 6 {
            _ if n2 == 1 => breakdown.unit_row += 1,
            5 => {
                breakdown.odd_rows += 1;
                largest_odd_row = largest_odd_row.max(Some(n2));
            }
            1 => {
                breakdown.even_rows += 1;
                largest_even_row = largest_even_row.max(Some(n2));
            }
            _ => breakdown.multiple_of_three_rows += 1,
        }
    });
    let every_odd_once = hits[0] == 0 && hits[1..].iter().all(|&h| h == 1);

    let to_u64 = |v: BigUint| v.to_u64().expect("row index fits");
    let i_o = to_u64(counting::i_opow_max(&p)?);
    let i_e = to_u64(counting::i_epow_max(&p)?);
    let expected_largest_odd_row = (i_o > 0).then(|| 6 * i_o - 1);
    let expected_largest_even_row = (i_e > 0).then(|| 6 * i_e + 1);

    let expect = |v: &BigUint| v.to_u64().expect("count fits");
    let ok = report.identity_holds
        && every_odd_once
        && breakdown.unit_row == k - 1
        && breakdown.odd_rows == expect(&report.t_o)
        && breakdown.even_rows == expect(&report.t_e)
        && breakdown.multiple_of_three_rows == 0
        && largest_odd_row == expected_largest_odd_row
        && largest_even_row == expected_largest_even_row;
    Ok(TotalsCrossCheck {
        report,
        breakdown,
        largest_odd_row,
        expected_largest_odd_row,
        largest_even_row,
        expected_largest_even_row,
        every_odd_once,
        ok,
    })
}
