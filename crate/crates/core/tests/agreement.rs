mod common;

use std::collections::HashSet;

use collatz_kit::collatz::{odd_successor, trajectory_summary};
use collatz_kit::counting::{n_of_k, totals};
use collatz_kit::inverse::{inverse_bfs, predecessor_of, uniqueness_check};
use collatz_kit::verify::{cycle_scan, verify_forward};
use collatz_kit::PosInt;
use common::{odd_peak, reaches_one};

fn p(n: u64) -> PosInt {
    PosInt::try_from(n).unwrap()
}

#[test]
fn forward_sweep_matches_direct_iteration() {
    let report = verify_forward(100_000, 100_000, 4).unwrap();
    let direct = (1..=100_000u64)
        .step_by(2)
        .filter(|&n| reaches_one(n, 100_000).is_some())
        .count() as u64;
    assert_eq!(report.verified, direct);
    assert!(report.all_confirmed());
}

#[test]
fn summary_step_counts_match_direct_iteration() {
    for n in 1..5000u64 {
        let s = trajectory_summary(&p(n), 10_000);
        assert_eq!(Some(s.total_steps()), reaches_one(n, 10_000), "n = {n}");
    }
}

#[test]
fn inverse_reach_is_decided_by_the_odd_peak() {
    for cap in [10_000u64, 100_000, 1_000_000] {
        let report = inverse_bfs(3000, cap, 60).unwrap();
        let expected: Vec<u64> = (1..=3000u64).step_by(2).filter(|&n| odd_peak(n) > cap).collect();
        assert_eq!(report.unreached, expected, "cap = {cap}");
    }
}

#[test]
fn inverse_reaches_everything_with_room() {
    let peak = (1..=10_000u64).step_by(2).map(odd_peak).max().unwrap();
    let report = inverse_bfs(10_000, 2 * peak, 60).unwrap();
    assert!(report.is_complete(), "unreached {:?}", report.unreached);
    assert!(report.self_iteration_skipped);
}

#[test]
fn predecessors_partition_the_odd_numbers() {
    // each odd n1 > 1 has one odd successor, hence exactly one record
    let bound = 20_001u64;
    let report = uniqueness_check(bound).unwrap();
    assert!(report.violations.is_empty());
    assert_eq!(report.records, (bound + 1) / 2 - 1);

    let mut seen = HashSet::new();
    for n1 in (3..=bound).step_by(2) {
        let (n2, x) = odd_successor(&p(n1)).unwrap();
        let record = predecessor_of(&n2, x as u32).unwrap().unwrap();
        assert_eq!(record.n1, p(n1));
        assert!(seen.insert((n2, x)));
    }
}

#[test]
fn totals_match_a_plain_count() {
    for k in 2..=10u64 {
        let n = n_of_k(k);
        let plain = (1..=u64::try_from(&n).unwrap()).filter(|v| v % 2 == 1).count() as u64;
        let report = totals(k).unwrap();
        assert_eq!(u64::try_from(&report.t).unwrap(), plain, "k = {k}");
    }
}

#[test]
fn cycle_scan_matches_direct_iteration() {
    let scan = cycle_scan(20_000, 100_000).unwrap();
    assert_eq!(scan.cycles.len(), 1);
    assert!(scan.unresolved.is_empty());
    assert!((1..=20_000u64).all(|n| reaches_one(n, 100_000).is_some()));
}
