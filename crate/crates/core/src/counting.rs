//! Closed forms for the odd numbers generated by the predecessor rows.
//!
//! For `N = (4^k - 1) / 3` the rows `6i-1` generate `T_o = (4^k - 3k - 1) / 9`
//! numbers up to `N`, the rows `6i+1` (without the row of 1) generate
//! `T_e = (4^k - 12k + 8) / 18`, and together with the `k - 1` entries of the
//! row of 1 plus the root 1 itself this accounts for every odd number in
//! `[1, N]`. Everything here is exact: a closed form whose division does not
//! come out even is reported as an error, never rounded.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::{decimal, Error, Result};

fn pow4(e: u64) -> BigInt {
    BigInt::one() << (2 * e)
}

fn exact_div(numer: BigInt, denom: u32, what: &'static str) -> Result<BigInt> {
    let (q, r) = numer.div_rem(&BigInt::from(denom));
    if r.is_zero() {
        Ok(q)
    } else {
        Err(Error::InexactDivision(what))
    }
}

fn require_p(p_n: &BigUint) -> Result<()> {
    if *p_n < BigUint::from(2u32) {
        return Err(Error::TooSmall {
            name: "p_N",
            min: "2".into(),
            got: p_n.to_string(),
        });
    }
    Ok(())
}

fn require_k(k_n: u64) -> Result<()> {
    if k_n < 2 {
        return Err(Error::TooSmall {
            name: "k_N",
            min: "2".into(),
            got: k_n.to_string(),
        });
    }
    Ok(())
}

/// `N = (4^k - 1) / 3`.
pub fn n_of_k(k_n: u64) -> BigUint {
    ((BigUint::one() << (2 * k_n)) - 1u32) / 3u32
}

/// `p` with `N = 2p - 1`.
pub fn p_of_k(k_n: u64) -> BigUint {
    (n_of_k(k_n) + 1u32) >> 1
}

/// Parameters of an odd bound `N` of the special family.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PowerParams {
    pub k_n: u64,
    #[serde(serialize_with = "decimal::serialize")]
    pub p_n: BigUint,
}

impl PowerParams {
    pub fn from_k(k_n: u64) -> Result<Self> {
        require_k(k_n)?;
        Ok(Self {
            k_n,
            p_n: p_of_k(k_n),
        })
    }

    /// Recovers `k` from `N` when `3N + 1` is an even power of two.
    pub fn from_n(n: &BigUint) -> Option<Self> {
        let lifted = n * 3u32 + 1u32;
        let bits = lifted.bits();
        let is_pow4 = lifted.count_ones() == 1 && (bits - 1) % 2 == 0;
        let k_n = (bits - 1) / 2;
        (is_pow4 && k_n >= 2).then(|| Self {
            k_n,
            p_n: (n + 1u32) >> 1,
        })
    }
}

/// Result of `x_j = x_i + log2(n2_i / n2_j)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PowerRelation {
    /// Floating value, for display.
    pub approx: f64,
    /// Set exactly when the ratio is a power of two, so `x_j` is an integer.
    pub exact: Option<i64>,
}

/// Exponent at which row `n2_j` would produce the same `n1` as `(n2_i, x_i)`.
pub fn power_relation(n2_i: &BigUint, x_i: u32, n2_j: &BigUint) -> Result<PowerRelation> {
    for n in [n2_i, n2_j] {
        if n.is_zero() || !n.bit(0) {
            return Err(Error::NotOdd(n.to_string()));
        }
    }
    let approx = f64::from(x_i) + log2_big(n2_i) - log2_big(n2_j);
    // The ratio of two odd numbers is a power of two only when they are equal.
    let g = n2_i.gcd(n2_j);
    let (a, b) = (n2_i / &g, n2_j / &g);
    let exact = match (power_of_two_exponent(&a), power_of_two_exponent(&b)) {
        (Some(ea), Some(eb)) => Some(i64::from(x_i) + ea as i64 - eb as i64),
        _ => None,
    };
    Ok(PowerRelation { approx, exact })
}

fn power_of_two_exponent(n: &BigUint) -> Option<u64> {
    (n.count_ones() == 1).then(|| n.bits() - 1)
}

fn log2_big(n: &BigUint) -> f64 {
    let bits = n.bits();
    if bits <= 1000 {
        n.to_f64().expect("finite").log2()
    } else {
        let shift = bits - 64;
        (n >> shift).to_f64().expect("finite").log2() + shift as f64
    }
}

/// `floor(p / 2)`: the largest `i` such that `6i - 1` reaches below
/// `N = 2p - 1` at exponent 1.
pub fn i_opow_max(p_n: &BigUint) -> Result<BigUint> {
    require_p(p_n)?;
    Ok(p_n >> 1)
}

/// Even/odd case split for [`i_opow_max`], kept separate as a cross-check.
pub fn i_opow_max_cases(p_n: &BigUint) -> Result<BigUint> {
    require_p(p_n)?;
    Ok(if p_n.is_even() {
        p_n / 2u32
    } else {
        (p_n - 1u32) / 2u32
    })
}

/// `floor((p - 1) / 4)`: the largest `i` such that `6i + 1` reaches below
/// `N = 2p - 1` at exponent 2.
pub fn i_epow_max(p_n: &BigUint) -> Result<BigUint> {
    require_p(p_n)?;
    Ok((p_n - 1u32) >> 2)
}

/// Four-way case split for [`i_epow_max`] on `p mod 4`.
pub fn i_epow_max_cases(p_n: &BigUint) -> Result<BigUint> {
    require_p(p_n)?;
    let offset = match (p_n % 4u32).to_u32().expect("residue below 4") {
        2 => 1u32, // p = 4s - 2
        3 => 2,    // p = 4s - 1
        0 => 3,    // p = 4s
        _ => 0,    // p = 4s + 1
    };
    let numer = p_n - 1u32 - offset;
    if !(&numer % 4u32).is_zero() {
        return Err(Error::InexactDivision("i_epow_max case split"));
    }
    Ok(numer / 4u32)
}

/// A floored quantity and its exact remainder in `[0, 1)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FloorRemainder {
    pub value: BigInt,
    pub remainder: BigRational,
}

impl FloorRemainder {
    pub fn of(q: &BigRational) -> Self {
        let value = q.floor().to_integer();
        let remainder = q - BigRational::from_integer(value.clone());
        Self { value, remainder }
    }
}

fn half() -> BigRational {
    BigRational::new(1.into(), 2.into())
}

/// `i_opow` for exponent index `f`: `((6p - 2) / 2^(2f-1) + 1) / 6`, floored.
pub fn i_opow_at(p_n: &BigUint, f: u64) -> Result<FloorRemainder> {
    require_p(p_n)?;
    if f == 0 {
        return Err(Error::TooSmall {
            name: "f",
            min: "1".into(),
            got: "0".into(),
        });
    }
    let top = BigInt::from(p_n.clone()) * 6 - 2;
    let q = (BigRational::new(top, BigInt::one() << (2 * f - 1)) + BigRational::one())
        / BigRational::from_integer(6.into());
    Ok(FloorRemainder::of(&q))
}

/// `i_epow` for exponent index `f`: `((6p - 2) / 4^f - 1) / 6`, floored.
pub fn i_epow_at(p_n: &BigUint, f: u64) -> Result<FloorRemainder> {
    require_p(p_n)?;
    if f == 0 {
        return Err(Error::TooSmall {
            name: "f",
            min: "1".into(),
            got: "0".into(),
        });
    }
    let top = BigInt::from(p_n.clone()) * 6 - 2;
    let q = (BigRational::new(top, pow4(f)) - BigRational::one())
        / BigRational::from_integer(6.into());
    Ok(FloorRemainder::of(&q))
}

/// Every `f` where the odd-power ratio `(6p - 2) / (6i - 1)` equals
/// `2^(2f-1)` exactly, with the matching `i`.
pub fn opow_integer_solutions(p_n: &BigUint) -> Result<Vec<(u64, BigUint)>> {
    require_p(p_n)?;
    let top = p_n * 6u32 - 2u32;
    let mut out = Vec::new();
    let mut f = 1u64;
    while 2 * f - 1 < top.bits() {
        let shift = 2 * f - 1;
        if top.trailing_zeros().unwrap_or(0) >= shift {
            let q = &top >> shift;
            if (&q % 6u32) == BigUint::from(5u32) {
                out.push((f, (q + 1u32) / 6u32));
            }
        }
        f += 1;
    }
    Ok(out)
}

/// Every `f` where `(6p - 2) / (6i + 1)` equals `4^f` exactly, `i >= 1`.
pub fn epow_integer_solutions(p_n: &BigUint) -> Result<Vec<(u64, BigUint)>> {
    require_p(p_n)?;
    let top = p_n * 6u32 - 2u32;
    let mut out = Vec::new();
    let mut f = 1u64;
    while 2 * f < top.bits() {
        if top.trailing_zeros().unwrap_or(0) >= 2 * f {
            let q = &top >> (2 * f);
            if (&q % 6u32) == BigUint::one() && q > BigUint::one() {
                out.push((f, (q - 1u32) / 6u32));
            }
        }
        f += 1;
    }
    Ok(out)
}

/// Remainder of a floored logarithm. Logarithms of rationals are integers
/// or irrational, so the remainder is either exact or only approximable.
#[derive(Debug, Clone, PartialEq)]
pub enum LogRemainder {
    Exact(BigRational),
    Irrational(f64),
}

impl LogRemainder {
    pub fn is_zero(&self) -> bool {
        matches!(self, Self::Exact(r) if r.is_zero())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LogFloor {
    pub value: i64,
    pub remainder: LogRemainder,
}

/// `floor(log2(a / b))` computed exactly, plus whether `a / b` is a power of two.
fn floor_log2_ratio(a: &BigUint, b: &BigUint) -> (i64, bool) {
    let mut m = a.bits() as i64 - b.bits() as i64;
    // 2^m <= a/b  <=>  b << m <= a  (shift whichever side is negative)
    let le = |m: i64| {
        if m >= 0 {
            (b << m as u64) <= *a
        } else {
            *b <= (a << (-m) as u64)
        }
    };
    if !le(m) {
        m -= 1;
    }
    debug_assert!(le(m) && !le(m + 1));
    let exact = if m >= 0 {
        (b << m as u64) == *a
    } else {
        *b == (a << (-m) as u64)
    };
    (m, exact)
}

fn ratio_log2(a: &BigUint, b: &BigUint) -> f64 {
    log2_big(a) - log2_big(b)
}

fn log_floor(a: &BigUint, b: &BigUint, shift_half: bool) -> LogFloor {
    // value = floor((log2 r + s) / 2) with s = 1 for the odd form, 0 for the even form
    let (m, exact) = floor_log2_ratio(a, b);
    let s = i64::from(shift_half);
    let value = (m + s).div_euclid(2);
    let remainder = if exact {
        let twice = (m + s).rem_euclid(2);
        LogRemainder::Exact(BigRational::new(twice.into(), 2.into()))
    } else {
        let real = (ratio_log2(a, b) + s as f64) / 2.0 - value as f64;
        LogRemainder::Irrational(real.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON))
    };
    LogFloor { value, remainder }
}

/// `k_j = floor(½ log2((6p - 2) / (6i - 1)) + ½)` for odd-power rows.
pub fn kj_odd(p_n: &BigUint, i_opow: &BigUint) -> Result<LogFloor> {
    require_p(p_n)?;
    if i_opow.is_zero() {
        return Err(Error::NotPositive("0".into()));
    }
    let a = p_n * 6u32 - 2u32;
    let b = i_opow * 6u32 - 1u32;
    Ok(log_floor(&a, &b, true))
}

/// `k_j = floor(½ log2((6p - 2) / (6i + 1)))` for even-power rows.
pub fn kj_even(p_n: &BigUint, i_epow: &BigUint) -> Result<LogFloor> {
    require_p(p_n)?;
    if i_epow.is_zero() {
        return Err(Error::NotPositive("0".into()));
    }
    let a = p_n * 6u32 - 2u32;
    let b = i_epow * 6u32 + 1u32;
    Ok(log_floor(&a, &b, false))
}

/// `sum_{i=a}^{b} 4^i` via `(4^(b+1) - 4^a) / 3`.
pub fn geom_sum(a: u64, b: u64) -> Result<BigUint> {
    if a > b {
        return Err(Error::EmptyRange { lower: a, upper: b });
    }
    let v = exact_div(pow4(b + 1) - pow4(a), 3, "geometric sum")?;
    Ok(v.to_biguint().expect("positive sum"))
}

/// `sum_{i=a}^{b} i 4^i` via
/// `4^(b+1)(b+1)/3 - (4/9)4^(b+1) - 4^a a/3 + (4/9)4^a`, brought over 9.
pub fn geom_weighted_sum(a: u64, b: u64) -> Result<BigUint> {
    if a > b {
        return Err(Error::EmptyRange { lower: a, upper: b });
    }
    let hi = pow4(b + 1);
    let lo = pow4(a);
    let numer = &hi * 3 * (b + 1) - &hi * 4 - &lo * 3 * a + &lo * 4;
    let v = exact_div(numer, 9, "weighted geometric sum")?;
    Ok(v.to_biguint().expect("non-negative sum"))
}

/// `T_o = (4^k - 3k - 1) / 9`.
pub fn total_odd_rows(k_n: u64) -> Result<BigUint> {
    require_k(k_n)?;
    let v = exact_div(pow4(k_n) - 3 * BigInt::from(k_n) - 1, 9, "T_o")?;
    Ok(v.to_biguint().expect("T_o >= 0"))
}

/// `T_e = (4^k - 12k + 8) / 18`.
pub fn total_even_rows(k_n: u64) -> Result<BigUint> {
    require_k(k_n)?;
    let v = exact_div(pow4(k_n) - 12 * BigInt::from(k_n) + 8, 18, "T_e")?;
    Ok(v.to_biguint().expect("T_e >= 0"))
}

/// Largest `k_N` for which [`totals`] will brute-force count (N ≈ 1.4e9).
pub const MAX_BRUTE_K: u64 = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct TotalsReport {
    #[serde(rename = "kN")]
    pub k_n: u64,
    #[serde(rename = "N", serialize_with = "decimal::serialize")]
    pub n: BigUint,
    #[serde(rename = "To", serialize_with = "decimal::serialize")]
    pub t_o: BigUint,
    #[serde(rename = "Te", serialize_with = "decimal::serialize")]
    pub t_e: BigUint,
    #[serde(rename = "T", serialize_with = "decimal::serialize")]
    pub t: BigUint,
    #[serde(serialize_with = "decimal::serialize")]
    pub brute_count: BigUint,
    pub identity_holds: bool,
}

/// Evaluates the closed forms for `N = (4^k - 1) / 3`, assembles
/// `T = (k - 1) + 1 + T_o + T_e`, and counts the odd numbers in `[1, N]`
/// one by one.
pub fn totals(k_n: u64) -> Result<TotalsReport> {
    require_k(k_n)?;
    if k_n > MAX_BRUTE_K {
        return Err(Error::TooLarge {
            name: "k_N",
            limit: MAX_BRUTE_K.to_string(),
            got: k_n.to_string(),
        });
    }
    let t_o = total_odd_rows(k_n)?;
    let t_e = total_even_rows(k_n)?;
    let t = BigUint::from(k_n - 1) + 1u32 + &t_o + &t_e;
    // (1/6) 4^k + 1/3 is the same total written in one piece
    let compact = exact_div(pow4(k_n) + 2, 6, "T")?;
    if BigInt::from(t.clone()) != compact {
        return Err(Error::InexactDivision("T assembly"));
    }
    let n = n_of_k(k_n);
    let bound = n.to_u64().expect("bounded by MAX_BRUTE_K");
    let brute = (1..=bound).filter(|m| m % 2 == 1).count() as u64;
    let brute_count = BigUint::from(brute);
    Ok(TotalsReport {
        k_n,
        n,
        identity_holds: t == brute_count,
        t_o,
        t_e,
        t,
        brute_count,
    })
}

/// `T_o` and `T_e` from the explicit row-by-row sums, evaluated term by term
/// in exact rationals.
pub fn totals_by_summation(k_n: u64) -> Result<(BigUint, BigUint)> {
    require_k(k_n)?;
    let sixth = |v: BigInt| BigRational::new(v, 6.into());
    let k = BigRational::from_integer(k_n.into());
    let pow2 = |e: u64| BigInt::one() << e;

    // i_opow reached with exponent index f, in the special family
    let i_odd = |f: u64| sixth(pow2(2 * f - 1) + 1) - half();
    let mut t_o = &k * i_odd(1);
    for i in 1..k_n {
        let weight = BigRational::from_integer((k_n - i).into());
        t_o += weight * (i_odd(i + 1) - i_odd(i));
    }

    // i_epow reached with exponent index f; f = 0 stands for the 4^0 term
    let i_even = |f: u64| sixth(pow2(2 * f) - 1) - half();
    let mut t_e = (&k - BigRational::one()) * i_even(1);
    for i in 2..k_n {
        let weight = BigRational::from_integer((k_n - i).into());
        t_e += weight * (i_even(i) - i_even(i - 1));
    }

    let to_uint = |v: BigRational, what: &'static str| -> Result<BigUint> {
        if !v.is_integer() || v.is_negative() {
            return Err(Error::InexactDivision(what));
        }
        Ok(v.to_integer().to_biguint().expect("non-negative"))
    };
    Ok((to_uint(t_o, "T_o summation")?, to_uint(t_e, "T_e summation")?))
}
