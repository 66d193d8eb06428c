//! Forward Collatz dynamics over arbitrary-precision integers.
//!
//! The step rule is `n -> n / 2` for even `n` and `n -> 3n + 1` for odd `n`.
//! Each step carries a multiplicative factor (`1/2` or `(3n+1)/n`), and the
//! product of the factors along a chain telescopes to `last / first`.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::One;
use serde::Serialize;

use crate::{Error, PosInt, Result};

/// Step budget used when the caller does not supply one.
pub const DEFAULT_MAX_STEPS: u64 = 100_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Parity {
    Even,
    Odd,
}

/// One application of the step rule.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Step {
    pub from: PosInt,
    pub to: PosInt,
    pub parity: Parity,
}

impl Step {
    pub fn of(from: PosInt) -> Self {
        let parity = if from.is_odd() { Parity::Odd } else { Parity::Even };
        let to = step(&from);
        Self { from, to, parity }
    }

    /// `to / from` in lowest terms: exactly `1/2` for even steps and
    /// `(3n+1)/n` for odd steps.
    pub fn factor(&self) -> BigRational {
        ratio(&self.to, &self.from)
    }
}

fn ratio(numer: &BigUint, denom: &BigUint) -> BigRational {
    BigRational::new(BigInt::from(numer.clone()), BigInt::from(denom.clone()))
}

/// A forward chain `n_1 -> n_2 -> ... -> n_l`.
///
/// `even_steps` and `odd_steps` count steps, not elements: the last element
/// makes no step.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Trajectory {
    pub start: PosInt,
    pub steps: Vec<Step>,
    pub even_steps: u64,
    pub odd_steps: u64,
    /// Whether the chain reached 1.
    pub terminated: bool,
}

impl Trajectory {
    /// Builds a trajectory from explicit steps, checking that they chain.
    pub fn from_steps(steps: Vec<Step>) -> Result<Self> {
        let start = steps.first().ok_or(Error::EmptyTrajectory)?.from.clone();
        for (index, pair) in steps.windows(2).enumerate() {
            if pair[0].to != pair[1].from {
                return Err(Error::BrokenChain {
                    index: index + 1,
                    expected: pair[0].to.to_string(),
                    found: pair[1].from.to_string(),
                });
            }
        }
        let odd_steps = steps.iter().filter(|s| s.parity == Parity::Odd).count() as u64;
        let even_steps = steps.len() as u64 - odd_steps;
        let terminated = steps.last().is_some_and(|s| s.to.is_one());
        Ok(Self {
            start,
            steps,
            even_steps,
            odd_steps,
            terminated,
        })
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn last(&self) -> &PosInt {
        self.steps.last().map_or(&self.start, |s| &s.to)
    }

    /// All visited values, start included.
    pub fn values(&self) -> impl Iterator<Item = &PosInt> {
        std::iter::once(&self.start).chain(self.steps.iter().map(|s| &s.to))
    }

    pub fn peak(&self) -> &PosInt {
        self.values().max().expect("a trajectory always has a start")
    }
}

/// Counting-only view of a trajectory; nothing but the tallies is kept.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TrajectorySummary {
    pub start: PosInt,
    pub last: PosInt,
    pub even_steps: u64,
    pub odd_steps: u64,
    pub peak: PosInt,
    pub terminated: bool,
}

impl TrajectorySummary {
    pub fn total_steps(&self) -> u64 {
        self.even_steps + self.odd_steps
    }
}

/// One Collatz step.
pub fn step(n: &PosInt) -> PosInt {
    if n.is_odd() {
        PosInt::from_nonzero(n.as_biguint() * 3u32 + 1u32)
    } else {
        PosInt::from_nonzero(n.as_biguint() >> 1)
    }
}

/// 2-adic valuation: the exponent of the largest power of two dividing `n`.
pub fn v2(n: &PosInt) -> u64 {
    n.trailing_zeros().expect("positive integers have a lowest set bit")
}

/// The direct odd follower of an odd `n`: `(3n+1) / 2^x` with `x = v2(3n+1)`.
pub fn odd_successor(n: &PosInt) -> Result<(PosInt, u64)> {
    if !n.is_odd() {
        return Err(Error::NotOdd(n.to_string()));
    }
    let lifted = PosInt::from_nonzero(n.as_biguint() * 3u32 + 1u32);
    let x = v2(&lifted);
    Ok((PosInt::from_nonzero(lifted.into_biguint() >> x), x))
}

/// Iterates the step rule from `n` until 1 is reached or `max_steps` steps
/// have been taken, recording every step.
pub fn trajectory(n: &PosInt, max_steps: u64) -> Trajectory {
    let mut steps = Vec::new();
    let mut current = n.clone();
    while !current.is_one() && (steps.len() as u64) < max_steps {
        let s = Step::of(current);
        current = s.to.clone();
        steps.push(s);
    }
    let odd_steps = steps.iter().filter(|s| s.parity == Parity::Odd).count() as u64;
    Trajectory {
        start: n.clone(),
        even_steps: steps.len() as u64 - odd_steps,
        odd_steps,
        terminated: current.is_one(),
        steps,
    }
}

/// Same iteration as [`trajectory`] but keeps only counts and the peak.
pub fn trajectory_summary(n: &PosInt, max_steps: u64) -> TrajectorySummary {
    let mut current = n.clone();
    let mut peak = n.clone();
    let (mut even_steps, mut odd_steps) = (0u64, 0u64);
    while !current.is_one() && even_steps + odd_steps < max_steps {
        if current.is_odd() {
            odd_steps += 1;
        } else {
            even_steps += 1;
        }
        current = step(&current);
        if current > peak {
            peak = current.clone();
        }
    }
    TrajectorySummary {
        start: n.clone(),
        terminated: current.is_one(),
        last: current,
        even_steps,
        odd_steps,
        peak,
    }
}

/// Walks from `n` until it returns to `n`, giving the closed chain through
/// `n` if one is found within `max_steps` steps.
pub fn closed_chain(n: &PosInt, max_steps: u64) -> Option<Trajectory> {
    let mut steps = Vec::new();
    let mut current = n.clone();
    while (steps.len() as u64) < max_steps {
        let s = Step::of(current);
        current = s.to.clone();
        steps.push(s);
        if &current == n {
            return Trajectory::from_steps(steps).ok();
        }
    }
    None
}

/// Exact product of all step factors of a non-empty trajectory.
pub fn chain_product(t: &Trajectory) -> Result<BigRational> {
    if t.is_empty() {
        return Err(Error::EmptyTrajectory);
    }
    Ok(t
        .steps
        .iter()
        .fold(BigRational::one(), |acc, s| acc * s.factor()))
}

/// `last / first` of a trajectory, the value its chain product telescopes to.
pub fn telescoped_ratio(t: &Trajectory) -> BigRational {
    ratio(t.last(), &t.start)
}

/// Fixed-width fast path. Every function returns `None` instead of
/// overflowing; on overlap the results equal the arbitrary-precision path.
pub mod fast {
    #[inline]
    pub fn step(n: u64) -> Option<u64> {
        if n & 1 == 1 {
            n.checked_mul(3)?.checked_add(1)
        } else {
            Some(n >> 1)
        }
    }

    /// Odd follower of an odd `n` and the number of halvings taken.
    #[inline]
    pub fn odd_successor(n: u64) -> Option<(u64, u32)> {
        debug_assert!(n & 1 == 1);
        let lifted = n.checked_mul(3)?.checked_add(1)?;
        let x = lifted.trailing_zeros();
        Some((lifted >> x, x))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(n: u64) -> PosInt {
        PosInt::try_from(n).unwrap()
    }

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn step_examples() {
        assert_eq!(step(&p(22)), p(11));
        assert_eq!(step(&p(1)), p(4));
        assert_eq!(step(&p(27)), p(82));
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(v2(&p(40)), 3);
        assert_eq!(v2(&p(1)), 0);
        assert_eq!(v2(&p(52)), 2);
    }

    #[test]
    fn odd_successor_examples() {
        assert_eq!(odd_successor(&p(7)).unwrap(), (p(11), 1));
        assert_eq!(odd_successor(&p(1)).unwrap(), (p(1), 2));
        assert_eq!(odd_successor(&p(17)).unwrap(), (p(13), 2));
        assert_eq!(odd_successor(&p(8)), Err(Error::NotOdd("8".into())));
    }

    #[test]
    fn trajectory_of_nine() {
        let t = trajectory(&p(9), 100);
        assert!(t.terminated);
        let head: Vec<u64> = t.values().take(4).map(|v| v.to_u64().unwrap()).collect();
        assert_eq!(head, [9, 28, 14, 7]);
        assert_eq!(t.last(), &p(1));
        assert_eq!(t.even_steps + t.odd_steps, t.len() as u64);
    }

    #[test]
    fn trajectory_of_one_is_empty() {
        let t = trajectory(&p(1), 100);
        assert!(t.is_empty());
        assert!(t.terminated);
        assert_eq!(chain_product(&t), Err(Error::EmptyTrajectory));
    }

    #[test]
    fn trajectory_of_27() {
        // 111 steps, 41 of them odd, peaking at 9232.
        let t = trajectory(&p(27), 200);
        assert!(t.terminated);
        assert_eq!(t.len(), 111);
        assert_eq!(t.odd_steps, 41);
        assert_eq!(t.peak(), &p(9232));
        let s = trajectory_summary(&p(27), 200);
        assert_eq!(s.total_steps(), 111);
        assert_eq!(s.peak, p(9232));

        let short = trajectory(&p(27), 50);
        assert!(!short.terminated);
        assert_eq!(short.len(), 50);
    }

    #[test]
    fn chain_products() {
        let t = trajectory(&p(3), 2);
        assert_eq!(chain_product(&t).unwrap(), q(5, 3));

        let cycle = closed_chain(&p(1), 10).unwrap();
        assert_eq!(cycle.len(), 3);
        assert_eq!(chain_product(&cycle).unwrap(), q(1, 1));
        // closed-chain convention: one odd and two even numbers in the loop
        assert_eq!((cycle.odd_steps, cycle.even_steps), (1, 2));

        let t = trajectory(&p(7), 1000);
        assert_eq!(chain_product(&t).unwrap(), q(1, 7));
    }

    #[test]
    fn from_steps_rejects_gaps() {
        let steps = vec![Step::of(p(3)), Step::of(p(7))];
        assert!(matches!(
            Trajectory::from_steps(steps),
            Err(Error::BrokenChain { index: 1, .. })
        ));
        assert_eq!(Trajectory::from_steps(vec![]), Err(Error::EmptyTrajectory));
    }

    #[test]
    fn step_factors_are_exact() {
        let t = trajectory(&p(97), 1000);
        for s in &t.steps {
            match s.parity {
                Parity::Even => assert_eq!(s.factor(), q(1, 2)),
                Parity::Odd => {
                    let n = BigInt::from(s.from.as_biguint().clone());
                    assert_eq!(s.factor(), BigRational::new(&n * 3 + 1, n));
                }
            }
        }
    }

    #[test]
    fn odd_successor_matches_step_then_halving() {
        for n in (1..=1_000_000u64).step_by(2) {
            let (next, x) = fast::odd_successor(n).unwrap();
            let mut v = fast::step(n).unwrap();
            for _ in 0..x {
                assert_eq!(v & 1, 0);
                v = fast::step(v).unwrap();
            }
            assert_eq!(v, next);
            assert_eq!(next & 1, 1);
        }
    }

    #[test]
    fn fast_path_reports_overflow() {
        assert_eq!(fast::step(u64::MAX), None);
        assert_eq!(fast::odd_successor(u64::MAX / 3), None);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]

        #[test]
        fn chain_product_telescopes(n in 1u64..=1_000_000) {
            let t = trajectory(&p(n), DEFAULT_MAX_STEPS);
            prop_assert!(t.terminated);
            if !t.is_empty() {
                prop_assert_eq!(chain_product(&t).unwrap(), telescoped_ratio(&t));
            }
        }
    }

    proptest! {
        #[test]
        fn odd_steps_never_repeat(n in 1u64..=1_000_000) {
            let t = trajectory(&p(n), DEFAULT_MAX_STEPS);
            for pair in t.steps.windows(2) {
                prop_assert!(!(pair[0].parity == Parity::Odd && pair[1].parity == Parity::Odd));
            }
        }

        #[test]
        fn fast_path_agrees_with_bigint(n in 1u64..u64::MAX) {
            let big = step(&p(n));
            match fast::step(n) {
                Some(v) => prop_assert_eq!(p(v), big),
                None => prop_assert!(big.to_u64().is_none()),
            }
            if n & 1 == 1 {
                let (big_next, big_x) = odd_successor(&p(n)).unwrap();
                if let Some((next, x)) = fast::odd_successor(n) {
                    prop_assert_eq!(p(next), big_next);
                    prop_assert_eq!(u64::from(x), big_x);
                }
            }
        }

        #[test]
        fn summary_matches_full_trajectory(n in 1u64..=100_000, budget in 1u64..400) {
            let t = trajectory(&p(n), budget);
            let s = trajectory_summary(&p(n), budget);
            prop_assert_eq!(s.even_steps, t.even_steps);
            prop_assert_eq!(s.odd_steps, t.odd_steps);
            prop_assert_eq!(&s.peak, t.peak());
            prop_assert_eq!(&s.last, t.last());
            prop_assert_eq!(s.terminated, t.terminated);
        }
    }
}
