#![allow(dead_code)]

//! Reference data transcribed by hand. Bracketed cells are the leaves
//! (multiples of three).

pub const EVEN_CLASS_TABLE: &str = "
1  | 1 5 [21] 85 341 [1365] 5461 21845 [87381]
7  | [9] 37 149 [597] 2389 9557 [38229] 152917 611669
13 | 17 [69] 277 1109 [4437] 17749 70997 [283989] 1135957
19 | 25 101 [405] 1621 6485 [25941] 103765 415061 [1660245]
";

pub const ODD_CLASS_TABLE: &str = "
5  | [3] 13 53 [213] 853 3413 [13653] 54613 218453
11 | 7 29 [117] 469 1877 [7509] 30037 120149 [480597]
17 | 11 [45] 181 725 [2901] 11605 46421 [185685] 742741
";

pub struct Cell {
    pub value: u64,
    pub leaf: bool,
}

pub fn parse_table(text: &str) -> Vec<(u64, Vec<Cell>)> {
    text.lines()
        .filter(|l| !l.trim().is_empty())
        .map(|line| {
            let (head, cells) = line.split_once('|').unwrap();
            let cells = cells
                .split_whitespace()
                .map(|c| {
                    let leaf = c.starts_with('[');
                    let value = c.trim_matches(|ch| ch == '[' || ch == ']').parse().unwrap();
                    Cell { value, leaf }
                })
                .collect();
            (head.trim().parse().unwrap(), cells)
        })
        .collect()
}

/// Forward chains from the odd starts up to 19, each cut at the first value
/// already seen in an earlier row. Starred values are the odd starts up to
/// 19 and the `6i-1` numbers up to 29; the cut value is never starred. The
/// last column lists the odd starts each row covers.
pub const START_19_ROWS: &str = "
4 -> 2 -> *1* | 1
*3* -> 10 -> *5* -> 16 -> 8 -> 4 -> ... | 3,5
*7* -> 22 -> *11* -> 34 -> *17* -> 52 -> 26 -> *13* -> 40 -> 20 -> 10 -> ... | 7,11,13,17
*9* -> 28 -> 14 -> 7 -> ... | 9
*15* -> 46 -> *23* -> 70 -> 35 -> 106 -> 53 -> 160 -> 80 -> 40 -> ... | 15
*19* -> 58 -> *29* -> 88 -> 44 -> 22 -> ... | 19
";

/// Direct forward iteration, counting steps to 1.
pub fn reaches_one(mut n: u64, max_steps: u64) -> Option<u64> {
    for steps in 0..=max_steps {
        if n == 1 {
            return Some(steps);
        }
        n = if n % 2 == 0 { n / 2 } else { 3 * n + 1 };
    }
    None
}

/// Largest odd value on the forward path from `n` to 1.
pub fn odd_peak(mut n: u64) -> u64 {
    let mut peak = n;
    while n != 1 {
        n = if n % 2 == 0 { n / 2 } else { 3 * n + 1 };
        if n % 2 == 1 {
            peak = peak.max(n);
        }
    }
    peak
}
