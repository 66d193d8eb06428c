//! The odd predecessor recurrence `n1 = (2^x n2 - 1) / 3`.
//!
//! Odd numbers split into three residue classes modulo 6. Multiples of three
//! (`6i+3`) have no odd predecessors. Numbers `6i+1` (and 1 itself) have
//! predecessors exactly for even `x`, numbers `6i-1` exactly for odd `x`.
//! A generated `n1` that is itself a multiple of three is a leaf.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigUint;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::{decimal, Error, PosInt, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SubsetTag {
    /// `n ≡ 3 (mod 6)`
    MultipleOfThree,
    /// `n ≡ 1 (mod 6)`, predecessors at even exponents
    EvenPowerClass,
    /// `n ≡ 5 (mod 6)`, predecessors at odd exponents
    OddPowerClass,
}

impl SubsetTag {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::MultipleOfThree => "multiple_of_three",
            Self::EvenPowerClass => "even_power",
            Self::OddPowerClass => "odd_power",
        }
    }

    /// Parity of the exponents `x` that admit predecessors, if any.
    fn first_exponent(self) -> Option<u32> {
        match self {
            Self::MultipleOfThree => None,
            Self::EvenPowerClass => Some(2),
            Self::OddPowerClass => Some(1),
        }
    }
}

impl fmt::Display for SubsetTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SubsetClass {
    pub tag: SubsetTag,
    /// The `i` of `6i+1` or `6i-1`; absent for 1 and for multiples of three.
    #[serde(serialize_with = "serialize_opt_decimal")]
    pub index: Option<BigUint>,
}

fn serialize_opt_decimal<S: serde::Serializer>(
    value: &Option<BigUint>,
    serializer: S,
) -> std::result::Result<S::Ok, S::Error> {
    match value {
        Some(v) => decimal::serialize(v, serializer),
        None => serializer.serialize_none(),
    }
}

/// Residue class of an odd number.
pub fn classify(n: &PosInt) -> Result<SubsetClass> {
    if !n.is_odd() {
        return Err(Error::NotOdd(n.to_string()));
    }
    let residue = (n.as_biguint() % 6u32).to_u32().expect("residue below 6");
    Ok(match residue {
        3 => SubsetClass {
            tag: SubsetTag::MultipleOfThree,
            index: None,
        },
        1 => SubsetClass {
            tag: SubsetTag::EvenPowerClass,
            index: Some(n.as_biguint() / 6u32).filter(|i| !i.is_zero()),
        },
        5 => SubsetClass {
            tag: SubsetTag::OddPowerClass,
            index: Some((n.as_biguint() + 1u32) / 6u32),
        },
        _ => unreachable!("odd residues mod 6 are 1, 3 and 5"),
    })
}

fn tag_of_u64(n: u64) -> SubsetTag {
    match n % 6 {
        1 => SubsetTag::EvenPowerClass,
        3 => SubsetTag::MultipleOfThree,
        5 => SubsetTag::OddPowerClass,
        _ => unreachable!("odd residues mod 6 are 1, 3 and 5"),
    }
}

/// One solution `(n2, x) -> n1` of the predecessor recurrence.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredecessorRecord {
    pub n2: PosInt,
    pub x: u32,
    pub n1: PosInt,
    pub n1_class: SubsetClass,
    /// False when `n1` is a multiple of three and so has no predecessors.
    pub generates: bool,
}

impl PredecessorRecord {
    /// The pair `(1, 2)` maps 1 onto itself (the 1 → 4 → 2 → 1 loop).
    pub fn is_self_iteration(&self) -> bool {
        self.n1 == self.n2
    }
}

/// The odd predecessor of `n2` at exponent `x`, when `2^x n2 ≡ 1 (mod 3)`.
///
/// The self-iteration pair `(1, 2)` is returned; callers expanding the tree
/// skip it via [`PredecessorRecord::is_self_iteration`].
pub fn predecessor_of(n2: &PosInt, x: u32) -> Result<Option<PredecessorRecord>> {
    if !n2.is_odd() {
        return Err(Error::NotOdd(n2.to_string()));
    }
    if x == 0 {
        return Err(Error::TooSmall {
            name: "x",
            min: "1".into(),
            got: "0".into(),
        });
    }
    let lifted = n2.as_biguint() << x;
    let (n1, rem) = (lifted - 1u32).div_rem(&BigUint::from(3u32));
    if !rem.is_zero() {
        return Ok(None);
    }
    let n1 = PosInt::from_nonzero(n1);
    let n1_class = classify(&n1)?;
    Ok(Some(PredecessorRecord {
        n2: n2.clone(),
        x,
        generates: n1_class.tag != SubsetTag::MultipleOfThree,
        n1,
        n1_class,
    }))
}

/// All predecessors of `n2` with `x <= x_max`, ascending in `x`, excluding
/// the self-iteration pair.
pub fn predecessors(n2: &PosInt, x_max: u32) -> Result<Vec<PredecessorRecord>> {
    let tag = classify(n2)?.tag;
    let Some(first) = tag.first_exponent() else {
        return Ok(Vec::new());
    };
    let mut out = Vec::new();
    for x in (first..=x_max).step_by(2) {
        let record = predecessor_of(n2, x)?.expect("exponent parity matches the class");
        if !record.is_self_iteration() {
            out.push(record);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub n2: PosInt,
    pub records: Vec<PredecessorRecord>,
}

/// Predecessor table for one residue class: rows by ascending `n2`,
/// columns by ascending admissible `x`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PredecessorTable {
    pub subset: SubsetTag,
    pub rows: Vec<TableRow>,
}

impl PredecessorTable {
    pub fn records(&self) -> impl Iterator<Item = &PredecessorRecord> {
        self.rows.iter().flat_map(|r| r.records.iter())
    }

    /// CSV with columns `n2,x,n1,class,generates`; `class` is the residue
    /// class of `n1`.
    pub fn to_csv(&self) -> String {
        let mut writer = csv::Writer::from_writer(Vec::new());
        writer
            .write_record(["n2", "x", "n1", "class", "generates"])
            .expect("writing to memory");
        for r in self.records() {
            writer
                .write_record([
                    r.n2.to_string(),
                    r.x.to_string(),
                    r.n1.to_string(),
                    r.n1_class.tag.to_string(),
                    r.generates.to_string(),
                ])
                .expect("writing to memory");
        }
        String::from_utf8(writer.into_inner().expect("flushing to memory")).expect("ascii output")
    }

    /// Grid layout: one line per row, leaves (non-generating cells) in brackets.
    pub fn to_text(&self) -> String {
        let mut cells: Vec<Vec<String>> = Vec::new();
        let mut header = vec!["n2 \\ x".to_string()];
        if let Some(row) = self.rows.first() {
            header.extend(row.records.iter().map(|r| r.x.to_string()));
        }
        cells.push(header);
        for row in &self.rows {
            let mut line = vec![row.n2.to_string()];
            line.extend(row.records.iter().map(|r| {
                if r.generates {
                    r.n1.to_string()
                } else {
                    format!("[{}]", r.n1)
                }
            }));
            cells.push(line);
        }
        let columns = cells.iter().map(Vec::len).max().unwrap_or(0);
        let widths: Vec<usize> = (0..columns)
            .map(|c| cells.iter().filter_map(|l| l.get(c)).map(String::len).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        for line in cells {
            let padded: Vec<String> = line
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:>w$}"))
                .collect();
            out.push_str(padded.join("  ").trim_end());
            out.push('\n');
        }
        out
    }
}

/// Rebuilds the predecessor table of a class. Rows are `n2 = 1, 7, 13, ...`
/// for the even-power class and `5, 11, 17, ...` for the odd-power class.
/// Unlike [`predecessors`], the self-iteration cell `(1, 2)` is kept so the
/// grid stays rectangular.
pub fn generate_table(class: SubsetTag, row_count: usize, col_count: usize) -> Result<PredecessorTable> {
    let first_x = class.first_exponent().ok_or(Error::MultipleOfThree)?;
    for (name, count) in [("rows", row_count), ("columns", col_count)] {
        if count == 0 {
            return Err(Error::TooSmall {
                name,
                min: "1".into(),
                got: "0".into(),
            });
        }
    }
    let first_n2: u64 = if class == SubsetTag::EvenPowerClass { 1 } else { 5 };
    let mut rows = Vec::with_capacity(row_count);
    for r in 0..row_count as u64 {
        let n2 = PosInt::from_nonzero(BigUint::from(first_n2) + BigUint::from(6u32) * r);
        let records = (0..col_count as u32)
            .map(|c| {
                predecessor_of(&n2, first_x + 2 * c)
                    .map(|rec| rec.expect("exponent parity matches the class"))
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(TableRow { n2, records });
    }
    Ok(PredecessorTable {
        subset: class,
        rows,
    })
}

/// Two distinct `(n2, x)` pairs producing the same `n1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Collision {
    pub n1: u64,
    pub first: (u64, u32),
    pub second: (u64, u32),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct UniquenessReport {
    pub bound: u64,
    pub records: u64,
    pub violations: Vec<Collision>,
}

/// Every `(n2, x)` whose predecessor satisfies `n1 <= bound`, self-iteration
/// excluded, in order of ascending `x` then ascending `n2`.
pub(crate) fn for_each_record_below(bound: u64, mut visit: impl FnMut(u64, u32, u64)) {
    let ceiling = 3 * u128::from(bound) + 1;
    let mut x = 1u32;
    while (1u128 << x) <= ceiling {
        let n2_max = (ceiling >> x) as u64;
        // 2^x n2 ≡ 1 (mod 3) fixes n2 mod 3, combined with oddness: n2 mod 6.
        let residue = if x % 2 == 0 { 1 } else { 5 };
        let mut n2 = residue;
        while n2 <= n2_max {
            let n1 = (((n2 as u128) << x) - 1) / 3;
            if !(n2 == 1 && x == 2) {
                visit(n2, x, n1 as u64);
            }
            n2 += 6;
        }
        x += 1;
    }
}

/// Enumerates every record with `n1 <= bound` and reports any `n1` reached
/// by two distinct `(n2, x)` pairs.
pub fn uniqueness_check(bound: u64) -> Result<UniquenessReport> {
    if bound == 0 {
        return Err(Error::NotPositive("0".into()));
    }
    let mut owner: Vec<Option<(u64, u32)>> = vec![None; (bound as usize + 1) / 2 + 1];
    let mut violations = Vec::new();
    let mut records = 0u64;
    for_each_record_below(bound, |n2, x, n1| {
        records += 1;
        let slot = &mut owner[(n1 / 2) as usize];
        match slot {
            Some(first) => violations.push(Collision {
                n1,
                first: *first,
                second: (n2, x),
            }),
            None => *slot = Some((n2, x)),
        }
    });
    Ok(UniquenessReport {
        bound,
        records,
        violations,
    })
}

/// Bitset over odd numbers.
struct OddSet {
    words: Vec<u64>,
}

impl OddSet {
    fn new(max: u64) -> Self {
        Self {
            words: vec![0; (max / 2 / 64 + 1) as usize],
        }
    }

    /// Returns true if `n` was not yet present.
    fn insert(&mut self, n: u64) -> bool {
        let bit = n / 2;
        let (w, b) = ((bit / 64) as usize, bit % 64);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    fn contains(&self, n: u64) -> bool {
        let bit = n / 2;
        self.words[(bit / 64) as usize] & (1 << (bit % 64)) != 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoverageReport {
    pub bound: u64,
    pub value_cap: u64,
    pub x_max: u32,
    pub reached: Vec<u64>,
    pub unreached: Vec<u64>,
    pub nodes_expanded: u64,
    /// The pair `(1, 2)` was seen and skipped.
    pub self_iteration_skipped: bool,
}

impl CoverageReport {
    pub fn is_complete(&self) -> bool {
        self.unreached.is_empty()
    }
}

/// Breadth-first expansion of the inverse tree from 1, never enqueueing a
/// value above `value_cap` and never using an exponent above `x_max`.
pub fn inverse_bfs(bound: u64, value_cap: u64, x_max: u32) -> Result<CoverageReport> {
    if bound == 0 {
        return Err(Error::NotPositive("0".into()));
    }
    if value_cap < bound {
        return Err(Error::TooSmall {
            name: "value cap",
            min: bound.to_string(),
            got: value_cap.to_string(),
        });
    }
    if x_max == 0 {
        return Err(Error::TooSmall {
            name: "x_max",
            min: "1".into(),
            got: "0".into(),
        });
    }
    let ceiling = 3 * u128::from(value_cap) + 1;
    let mut seen = OddSet::new(value_cap);
    let mut queue = VecDeque::from([1u64]);
    seen.insert(1);
    let mut nodes_expanded = 0u64;
    let mut self_iteration_skipped = false;

    while let Some(n2) = queue.pop_front() {
        nodes_expanded += 1;
        let Some(first) = tag_of_u64(n2).first_exponent() else {
            continue;
        };
        let headroom = 128 - (64 - n2.leading_zeros());
        for x in (first..=x_max.min(headroom - 1)).step_by(2) {
            let lifted = u128::from(n2) << x;
            if lifted > ceiling {
                break;
            }
            let n1 = ((lifted - 1) / 3) as u64;
            if n1 == n2 {
                self_iteration_skipped = true;
                continue;
            }
            if seen.insert(n1) {
                queue.push_back(n1);
            }
        }
    }

    let (reached, unreached) = (1..=bound).step_by(2).partition(|&n| seen.contains(n));
    Ok(CoverageReport {
        bound,
        value_cap,
        x_max,
        reached,
        unreached,
        nodes_expanded,
        self_iteration_skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collatz::{fast, odd_successor};
    use proptest::prelude::*;

    fn p(n: u64) -> PosInt {
        PosInt::try_from(n).unwrap()
    }

    fn n1s(records: &[PredecessorRecord]) -> Vec<(u32, u64)> {
        records.iter().map(|r| (r.x, r.n1.to_u64().unwrap())).collect()
    }

    #[test]
    fn classify_examples() {
        assert_eq!(classify(&p(9)).unwrap().tag, SubsetTag::MultipleOfThree);
        assert_eq!(classify(&p(9)).unwrap().index, None);
        let seven = classify(&p(7)).unwrap();
        assert_eq!((seven.tag, seven.index), (SubsetTag::EvenPowerClass, Some(1u32.into())));
        let five = classify(&p(5)).unwrap();
        assert_eq!((five.tag, five.index), (SubsetTag::OddPowerClass, Some(1u32.into())));
        let one = classify(&p(1)).unwrap();
        assert_eq!((one.tag, one.index), (SubsetTag::EvenPowerClass, None));
        assert!(classify(&p(4)).is_err());
    }

    #[test]
    fn predecessor_of_examples() {
        assert_eq!(predecessor_of(&p(1), 4).unwrap().unwrap().n1, p(5));
        assert_eq!(predecessor_of(&p(5), 3).unwrap().unwrap().n1, p(13));
        for x in 1..40 {
            assert_eq!(predecessor_of(&p(9), x).unwrap(), None);
        }
        let own = predecessor_of(&p(1), 2).unwrap().unwrap();
        assert!(own.is_self_iteration());
        assert!(predecessor_of(&p(2), 1).is_err());
        assert!(predecessor_of(&p(5), 0).is_err());
    }

    #[test]
    fn predecessors_examples() {
        assert_eq!(n1s(&predecessors(&p(5), 6).unwrap()), [(1, 3), (3, 13), (5, 53)]);
        assert!(predecessors(&p(3), 20).unwrap().is_empty());
        assert_eq!(n1s(&predecessors(&p(1), 6).unwrap()), [(4, 5), (6, 21)]);
    }

    #[test]
    fn single_cell_table() {
        let t = generate_table(SubsetTag::OddPowerClass, 1, 1).unwrap();
        assert_eq!(t.rows.len(), 1);
        let cell = &t.rows[0].records[0];
        assert_eq!((cell.n2.to_u64(), cell.x, cell.n1.to_u64()), (Some(5), 1, Some(3)));
        // 3 is a multiple of three: a leaf
        assert!(!cell.generates);
    }

    #[test]
    fn table_rejects_bad_arguments() {
        assert_eq!(
            generate_table(SubsetTag::MultipleOfThree, 2, 2),
            Err(Error::MultipleOfThree)
        );
        assert!(generate_table(SubsetTag::EvenPowerClass, 0, 2).is_err());
        assert!(generate_table(SubsetTag::EvenPowerClass, 2, 0).is_err());
    }

    #[test]
    fn table_rows_step_by_two() {
        let t = generate_table(SubsetTag::EvenPowerClass, 6, 7).unwrap();
        for row in &t.rows {
            for pair in row.records.windows(2) {
                assert_eq!(pair[1].x, pair[0].x + 2);
            }
        }
    }

    #[test]
    fn csv_export_has_expected_columns() {
        let t = generate_table(SubsetTag::OddPowerClass, 1, 2).unwrap();
        assert_eq!(
            t.to_csv(),
            "n2,x,n1,class,generates\n5,1,3,multiple_of_three,false\n5,3,13,even_power,true\n"
        );
    }

    /// Independent oracle: walk every odd n1 forward to its successor and
    /// count how many n1 map to each (n2, x).
    #[test]
    fn uniqueness_small_bounds() {
        for bound in [1u64, 2, 100, 1000] {
            let report = uniqueness_check(bound).unwrap();
            assert!(report.violations.is_empty(), "bound {bound}");
            let expected = (1..=bound).step_by(2).filter(|&n| n != 1).count() as u64;
            assert_eq!(report.records, expected, "bound {bound}");
        }
        assert_eq!(uniqueness_check(1).unwrap().records, 0);
    }

    #[test]
    fn bfs_examples() {
        let r = inverse_bfs(29, 10_000, 40).unwrap();
        assert!(r.is_complete());
        assert_eq!(r.reached, (1..=29).step_by(2).collect::<Vec<_>>());
        assert!(r.self_iteration_skipped);

        let r = inverse_bfs(1, 1, 1).unwrap();
        assert_eq!(r.reached, [1]);
        assert!(r.unreached.is_empty());

        let r = inverse_bfs(27, 10_000, 40).unwrap();
        assert!(r.reached.contains(&27));

        assert!(inverse_bfs(10, 5, 10).is_err());
        assert!(inverse_bfs(10, 10, 0).is_err());
    }

    #[test]
    fn bfs_reached_matches_forward_oracle() {
        // An odd n is reachable iff every odd value on its forward path to 1
        // stays under the cap and every halving run is at most x_max long.
        let (cap, x_max) = (5_000u64, 12u32);
        let report = inverse_bfs(1_001, cap, x_max).unwrap();
        for n in (1..=1_001u64).step_by(2) {
            let mut m = n;
            let mut ok = true;
            while m != 1 {
                let (next, x) = fast::odd_successor(m).unwrap();
                if next > cap || m > cap || x > x_max {
                    ok = false;
                    break;
                }
                m = next;
            }
            assert_eq!(report.reached.contains(&n), ok, "n = {n}");
        }
    }

    #[test]
    fn duality_small() {
        for n1 in (3..=10_001u64).step_by(2) {
            let (n2, x) = odd_successor(&p(n1)).unwrap();
            let rec = predecessor_of(&n2, x as u32).unwrap().unwrap();
            assert_eq!(rec.n1, p(n1));
        }
    }

    proptest! {
        #[test]
        fn parity_law(n2 in (0u64..500_000).prop_map(|k| 2 * k + 1), x in 1u32..64) {
            let rec = predecessor_of(&p(n2), x).unwrap();
            match n2 % 6 {
                3 => prop_assert!(rec.is_none()),
                1 => prop_assert_eq!(rec.is_some(), x % 2 == 0),
                _ => prop_assert_eq!(rec.is_some(), x % 2 == 1),
            }
            if let Some(r) = rec {
                prop_assert_eq!(r.generates, r.n1.as_biguint() % 3u32 != BigUint::zero());
                let lhs = r.n1.as_biguint() * 3u32 + 1u32;
                prop_assert_eq!(lhs, r.n2.as_biguint() << r.x);
                prop_assert!(r.n1.is_odd());
            }
        }

        #[test]
        fn record_generates_iff_it_has_predecessors(n2 in (0u64..100_000).prop_map(|k| 2 * k + 1), x in 1u32..30) {
            if let Some(r) = predecessor_of(&p(n2), x).unwrap() {
                let children = predecessors(&r.n1, 12).unwrap();
                prop_assert_eq!(r.generates, !children.is_empty());
            }
        }

        #[test]
        fn coverage_is_monotone(cap in 50u64..3_000, extra in 0u64..3_000, x_max in 1u32..20, dx in 0u32..10) {
            let small = inverse_bfs(49, cap, x_max).unwrap();
            let large = inverse_bfs(49, cap + extra, x_max + dx).unwrap();
            for n in &small.reached {
                prop_assert!(large.reached.contains(n));
            }
        }
    }
}
