//! The range recurrence: from a verified range `[1, N]` with `N = 2p - 1`,
//! derive the next range from the two residue-class maxima.
//!
//! * odd-power candidate: `N_o = 6 floor(p/2) - 1`, i.e. `3p - 1` for even
//!   `p` and `3p - 4` for odd `p`;
//! * even-power candidate: `N_e = (4N - C) / 3` with `C = 3, 5, 1` for
//!   `p ≡ 2, 0, 1 (mod 3)`.
//!
//! The next range is the smaller of the two.

use std::cmp::Ordering;
use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::counting::i_opow_max;
use crate::{decimal, Error, PosInt, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OddCase {
    /// `N_o = 3p - 1`
    #[serde(rename = "pEven")]
    PEven,
    /// `N_o = 3p - 4`
    #[serde(rename = "pOdd")]
    POdd,
}

impl OddCase {
    /// The constant `A` in `N_o = 3p - A`.
    pub fn a(self) -> u32 {
        match self {
            Self::PEven => 1,
            Self::POdd => 4,
        }
    }
}

/// Branch of the even-power candidate, by `p mod 3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum EvenCase {
    /// `p ≡ 2 (mod 3)`: `N_e = (8p - 7) / 3 = (4N - 3) / 3`
    #[serde(rename = "pMod3Is2")]
    PMod3Two,
    /// `p ≡ 0 (mod 3)`: `N_e = (8p - 9) / 3 = (4N - 5) / 3`
    #[serde(rename = "pMod3Is0")]
    PMod3Zero,
    /// `p ≡ 1 (mod 3)`: `N_e = (8p - 5) / 3 = (4N - 1) / 3`
    #[serde(rename = "pMod3Is1")]
    PMod3One,
}

impl EvenCase {
    fn of(p: &BigUint) -> Self {
        match (p % 3u32).to_u32().expect("residue below 3") {
            2 => Self::PMod3Two,
            0 => Self::PMod3Zero,
            _ => Self::PMod3One,
        }
    }

    /// The constant `B` in `N_e = (8p - B) / 3`.
    pub fn b(self) -> u32 {
        match self {
            Self::PMod3Two => 7,
            Self::PMod3Zero => 9,
            Self::PMod3One => 5,
        }
    }

    /// The constant `C` in `N_e = (4N - C) / 3`.
    pub fn c(self) -> u32 {
        match self {
            Self::PMod3Two => 3,
            Self::PMod3Zero => 5,
            Self::PMod3One => 1,
        }
    }
}

/// Which candidate became the next range.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Choice {
    Odd,
    Even,
    /// Both candidates coincide.
    Equal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct RangeState {
    #[serde(rename = "N")]
    pub n: PosInt,
    #[serde(rename = "pN", serialize_with = "decimal::serialize")]
    pub p_n: BigUint,
    #[serde(rename = "No")]
    pub odd_candidate: PosInt,
    #[serde(rename = "NoCase")]
    pub odd_case: OddCase,
    #[serde(rename = "Ne")]
    pub even_candidate: PosInt,
    #[serde(rename = "NeCase")]
    pub even_case: EvenCase,
    /// `(p + B - 3A) / 3`, the closed form of `N_o - N_e`; display only.
    #[serde(rename = "deltaOe", serialize_with = "decimal::serialize")]
    pub delta_oe: BigInt,
    pub chosen: PosInt,
    pub choice: Choice,
    #[serde(serialize_with = "decimal::serialize")]
    pub growth: BigInt,
}

impl RangeState {
    pub fn stalls(&self) -> bool {
        self.growth <= BigInt::zero()
    }
}

impl fmt::Display for RangeState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "N={} p={} No={} Ne={} chosen={} growth={}",
            self.n, self.p_n, self.odd_candidate, self.even_candidate, self.chosen, self.growth
        )
    }
}

fn p_of(n: &PosInt) -> Result<BigUint> {
    if !n.is_odd() {
        return Err(Error::NotOdd(n.to_string()));
    }
    if n.as_biguint() < &BigUint::from(3u32) {
        return Err(Error::TooSmall {
            name: "N",
            min: "3".into(),
            got: n.to_string(),
        });
    }
    Ok((n.as_biguint() + 1u32) >> 1)
}

/// The odd-power candidate `6 floor(p/2) - 1`.
pub fn odd_range_candidate(n: &PosInt) -> Result<PosInt> {
    Ok(odd_candidate_with_case(&p_of(n)?).0)
}

fn odd_candidate_with_case(p: &BigUint) -> (PosInt, OddCase) {
    let (value, case) = if p.is_even() {
        (p * 3u32 - 1u32, OddCase::PEven)
    } else {
        (p * 3u32 - 4u32, OddCase::POdd)
    };
    debug_assert_eq!(
        value,
        i_opow_max(p).expect("p >= 2") * 6u32 - 1u32,
        "case form disagrees with floor form"
    );
    (PosInt::from_nonzero(value), case)
}

/// The even-power candidate `(4N - C) / 3`.
pub fn even_range_candidate(n: &PosInt) -> Result<PosInt> {
    let p = p_of(n)?;
    Ok(even_candidate_with_case(n, &p)?.0)
}

fn even_candidate_with_case(n: &PosInt, p: &BigUint) -> Result<(PosInt, EvenCase)> {
    let case = EvenCase::of(p);
    let (value, rem) = (n.as_biguint() * 4u32 - case.c()).div_rem(&BigUint::from(3u32));
    if !rem.is_zero() {
        return Err(Error::InexactDivision("even range candidate"));
    }
    Ok((PosInt::from_nonzero(value), case))
}

/// One step of the recurrence.
pub fn range_step(n: &PosInt) -> Result<RangeState> {
    let p = p_of(n)?;
    let (odd_candidate, odd_case) = odd_candidate_with_case(&p);
    let (even_candidate, even_case) = even_candidate_with_case(n, &p)?;
    let delta_oe = {
        let numer = BigInt::from(p.clone()) + even_case.b() - 3 * odd_case.a();
        let (q, r) = numer.div_rem(&BigInt::from(3));
        if !r.is_zero() {
            return Err(Error::InexactDivision("candidate difference"));
        }
        q
    };
    let (chosen, choice) = match odd_candidate.cmp(&even_candidate) {
        Ordering::Less => (odd_candidate.clone(), Choice::Odd),
        Ordering::Greater => (even_candidate.clone(), Choice::Even),
        Ordering::Equal => (even_candidate.clone(), Choice::Equal),
    };
    let growth = BigInt::from(chosen.as_biguint().clone()) - BigInt::from(n.as_biguint().clone());
    Ok(RangeState {
        n: n.clone(),
        p_n: p,
        odd_candidate,
        odd_case,
        even_candidate,
        even_case,
        delta_oe,
        chosen,
        choice,
        growth,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct IterationTrace {
    pub states: Vec<RangeState>,
    pub stalled: bool,
    pub stall_index: Option<usize>,
}

impl IterationTrace {
    /// One JSON object per state, newline separated.
    pub fn to_json_lines(&self) -> String {
        self.states
            .iter()
            .map(|s| serde_json::to_string(s).expect("serializable") + "\n")
            .collect()
    }
}

/// Applies [`range_step`] repeatedly, stopping after `max_iters` steps or at
/// the first step that does not grow the range. The stalled state is kept.
pub fn iterate_ranges(n0: &PosInt, max_iters: usize) -> Result<IterationTrace> {
    let mut states: Vec<RangeState> = Vec::new();
    let mut current = n0.clone();
    let mut stall_index = None;
    for index in 0..max_iters {
        let state = range_step(&current)?;
        let stalls = state.stalls();
        current = state.chosen.clone();
        states.push(state);
        if stalls {
            stall_index = Some(index);
            break;
        }
    }
    Ok(IterationTrace {
        stalled: stall_index.is_some(),
        stall_index,
        states,
    })
}
