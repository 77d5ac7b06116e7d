//! Ground-truth partition numbers and the pentagonal-number identities
//! behind the third leading coefficient of the kernel numerators.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::report::VerificationReport;

/// Cost guard for [`partitions_enumerate`].
pub const MAX_ENUMERATION: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Euler,
    Enumeration,
}

/// `p_0 … p_N` as exact integers.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PartitionTable {
    #[serde(with = "crate::dyadic::bigint_vec")]
    pub values: Vec<BigInt>,
    pub provenance: Provenance,
}

impl PartitionTable {
    pub fn max_n(&self) -> usize {
        self.values.len() - 1
    }

    pub fn get(&self, n: usize) -> Option<&BigInt> {
        self.values.get(n)
    }

    /// `p_n` with `p_n = 0` for negative `n`.
    pub fn at(&self, n: i64) -> BigInt {
        if n < 0 {
            return BigInt::zero();
        }
        self.values
            .get(n as usize)
            .cloned()
            .unwrap_or_else(|| panic!("p_{n} beyond table of size {}", self.values.len()))
    }

    /// Builds a table by enumerating solutions for every `n ≤ max_n`.
    pub fn enumerated(max_n: u32) -> Result<PartitionTable> {
        let values = (0..=max_n)
            .map(|n| partitions_enumerate(n).map(BigInt::from))
            .collect::<Result<_>>()?;
        Ok(PartitionTable {
            values,
            provenance: Provenance::Enumeration,
        })
    }
}

/// Generalised pentagonal offsets `k(3k−1)/2` and `k(3k+1)/2` with the sign
/// `(−1)^{k+1}`, in increasing order, up to `limit`.
pub fn pentagonal_offsets(limit: usize) -> Vec<(usize, i64)> {
    let mut out = Vec::new();
    for k in 1usize.. {
        let sign = if k % 2 == 1 { 1 } else { -1 };
        let g1 = k * (3 * k - 1) / 2;
        if g1 > limit {
            break;
        }
        out.push((g1, sign));
        let g2 = k * (3 * k + 1) / 2;
        if g2 <= limit {
            out.push((g2, sign));
        }
    }
    out
}

/// `p_0 … p_max_n` from Euler's pentagonal recurrence.
pub fn partitions_euler(max_n: u32) -> PartitionTable {
    let max_n = max_n as usize;
    let offsets = pentagonal_offsets(max_n);
    let mut values: Vec<BigInt> = Vec::with_capacity(max_n + 1);
    values.push(BigInt::one());
    for n in 1..=max_n {
        let mut acc = BigInt::zero();
        for &(g, sign) in offsets.iter().take_while(|(g, _)| *g <= n) {
            if sign > 0 {
                acc += &values[n - g];
            } else {
                acc -= &values[n - g];
            }
        }
        values.push(acc);
    }
    PartitionTable {
        values,
        provenance: Provenance::Euler,
    }
}

/// Counts solutions of `n₁ + 2n₂ + … + n·n_n = n` by depth-first enumeration,
/// largest part first, never letting the running weight exceed `n`.
pub fn partitions_enumerate(n: u32) -> Result<u64> {
    if n > MAX_ENUMERATION {
        return Err(Error::TooLarge {
            what: "enumeration size",
            value: u64::from(n),
            max: u64::from(MAX_ENUMERATION),
        });
    }
    fn walk(remaining: u32, part: u32) -> u64 {
        if part == 1 {
            // n₁ is forced to the remainder
            return 1;
        }
        (0..=remaining / part)
            .map(|count| walk(remaining - count * part, part - 1))
            .sum()
    }
    Ok(if n == 0 { 1 } else { walk(n, n) })
}

/// Integer combination `Σ w_j p_j`, keyed by index.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCombination {
    pub terms: BTreeMap<usize, i64>,
}

impl LinearCombination {
    pub fn new() -> Self {
        LinearCombination::default()
    }

    /// From `(index, weight)` pairs; indices may repeat.
    pub fn from_pairs(pairs: &[(usize, i64)]) -> Self {
        let mut c = LinearCombination::new();
        for &(j, w) in pairs {
            c.add(j as i64, w);
        }
        c
    }

    /// Adds `w·p_j`; negative indices are dropped (`p_j = 0`).
    pub fn add(&mut self, j: i64, w: i64) {
        if j < 0 || w == 0 {
            return;
        }
        let e = self.terms.entry(j as usize).or_insert(0);
        *e += w;
        if *e == 0 {
            self.terms.remove(&(j as usize));
        }
    }

    pub fn add_combination(&mut self, other: &LinearCombination, scale: i64) {
        for (&j, &w) in &other.terms {
            self.add(j as i64, w * scale);
        }
    }

    pub fn max_index(&self) -> Option<usize> {
        self.terms.keys().next_back().copied()
    }

    pub fn evaluate(&self, table: &PartitionTable) -> BigInt {
        self.terms
            .iter()
            .map(|(&j, &w)| &table.values[j] * BigInt::from(w))
            .sum()
    }
}

impl fmt::Display for LinearCombination {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (&j, &w)) in self.terms.iter().rev().enumerate() {
            let sign = if w < 0 { "-" } else { "+" };
            match (i, w < 0) {
                (0, false) => {}
                (0, true) => write!(f, "-")?,
                _ => write!(f, " {sign} ")?,
            }
            if w.abs() != 1 {
                write!(f, "{}", w.abs())?;
            }
            write!(f, "p{j}")?;
        }
        Ok(())
    }
}

/// Euler-recurrence residual `Δ_n = p_n − Σ (−1)^{k+1}[p_{n−g}]`, which
/// vanishes for every `n ≥ 1`.
pub fn euler_residual(n: usize) -> LinearCombination {
    let mut c = LinearCombination::new();
    c.add(n as i64, 1);
    for (g, sign) in pentagonal_offsets(n) {
        c.add(n as i64 - g as i64, -sign);
    }
    c
}

/// `(Δ_k − Δ_{k−1}) + p_0`, the third leading coefficient for orders
/// `s = 2k−2` and `s = 2k−1`.
pub fn third_term_combination(k: usize) -> Result<LinearCombination> {
    if k < 2 {
        return Err(Error::InvalidArgument(format!(
            "third-term index must be >= 2, got {k}"
        )));
    }
    let mut c = euler_residual(k);
    c.add_combination(&euler_residual(k - 1), -1);
    c.add(0, 1);
    Ok(c)
}

/// Evaluates [`third_term_combination`] against the Euler table; expected 1.
pub fn third_term_coefficient(k: usize) -> Result<BigInt> {
    let c = third_term_combination(k)?;
    Ok(c.evaluate(&partitions_euler(k as u32)))
}

/// Third-term index for an order: `⌊s/2⌋ + 1`.
pub fn third_term_index(s: u32) -> usize {
    s as usize / 2 + 1
}

/// `(first order, last order, (index, weight) pairs)`.
pub type TableRow = (u32, u32, &'static [(usize, i64)]);

/// Reference rows for the third coefficient, one per pair of orders.
pub const THIRD_TERM_ROWS: [TableRow; 5] = [
    (3, 3, &[(2, 1), (1, -2), (0, 1)]),
    (4, 5, &[(3, 1), (2, -2), (0, 2)]),
    (6, 7, &[(4, 1), (3, -2), (1, 1), (0, 1)]),
    (8, 9, &[(5, 1), (4, -2), (2, 1), (0, 2)]),
    (10, 11, &[(6, 1), (5, -2), (3, 1), (1, 1)]),
];

/// Reference row covering order `s` (3 ≤ s ≤ 11).
pub fn third_term_row(s: u32) -> Option<LinearCombination> {
    THIRD_TERM_ROWS
        .iter()
        .find(|(lo, hi, _)| (*lo..=*hi).contains(&s))
        .map(|(_, _, pairs)| LinearCombination::from_pairs(pairs))
}

/// Evaluates the reference row for `s` and checks it equals 1; also checks the
/// row coincides term by term with `(Δ_k − Δ_{k−1}) + p_0`.
pub fn third_term_row_check(s: u32) -> Result<VerificationReport> {
    let row = third_term_row(s).ok_or_else(|| {
        Error::InvalidArgument(format!("reference rows cover 3 <= s <= 11, got s = {s}"))
    })?;
    let k = third_term_index(s);
    let table = partitions_euler(k as u32);
    let mut report = VerificationReport::new("third-term-row", format!("s={s}"));
    let value = row.evaluate(&table);
    report.check(format!("{row}"), None, 1, &value, value.is_one());
    let generated = third_term_combination(k)?;
    report.check(
        "row equals (Δ_k − Δ_{k−1}) + p0",
        None,
        &generated,
        &row,
        generated == row,
    );
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(t: &PartitionTable) -> Vec<i64> {
        t.values.iter().map(|v| i64::try_from(v).unwrap()).collect()
    }

    #[test]
    fn euler_first_values() {
        assert_eq!(
            small(&partitions_euler(10)),
            vec![1, 1, 2, 3, 5, 7, 11, 15, 22, 30, 42]
        );
        assert_eq!(small(&partitions_euler(0)), vec![1]);
    }

    #[test]
    fn enumeration_values() {
        assert_eq!(partitions_enumerate(5).unwrap(), 7);
        assert_eq!(partitions_enumerate(0).unwrap(), 1);
        assert_eq!(partitions_enumerate(1).unwrap(), 1);
        assert_eq!(
            BigInt::from(partitions_enumerate(13).unwrap()),
            partitions_euler(13).values[13]
        );
        assert!(matches!(
            partitions_enumerate(41),
            Err(Error::TooLarge { .. })
        ));
    }

    #[test]
    fn p20_regression() {
        // pinned from the enumeration oracle
        assert_eq!(partitions_enumerate(20).unwrap(), 627);
        assert_eq!(partitions_euler(20).values[20], BigInt::from(627));
    }

    #[test]
    fn residuals_vanish() {
        let t = partitions_euler(60);
        for n in 1..=60 {
            assert!(euler_residual(n).evaluate(&t).is_zero(), "n={n}");
        }
        assert!(euler_residual(0).evaluate(&t).is_one());
    }

    #[test]
    fn third_term_examples() {
        assert_eq!(
            third_term_combination(2).unwrap(),
            LinearCombination::from_pairs(&[(2, 1), (1, -2), (0, 1)])
        );
        assert_eq!(
            third_term_combination(5).unwrap(),
            LinearCombination::from_pairs(&[(5, 1), (4, -2), (2, 1), (0, 2)])
        );
        assert!(third_term_coefficient(25).unwrap().is_one());
        assert!(third_term_coefficient(1).is_err());
    }

    #[test]
    fn third_term_general_pattern() {
        // p_k − 2p_{k−1} + p_{k−3} + p_{k−5} − p_{k−6} + p_{k−7} − p_{k−8}
        //   − p_{k−12} + p_{k−13} − p_{k−15} + … , then + p_0
        let k = 40usize;
        let c = third_term_combination(k).unwrap();
        let expect = [
            (0, 1),
            (1, -2),
            (3, 1),
            (5, 1),
            (6, -1),
            (7, 1),
            (8, -1),
            (12, -1),
            (13, 1),
            (15, -1),
        ];
        for (d, w) in expect {
            assert_eq!(c.terms.get(&(k - d)).copied(), Some(w), "offset {d}");
        }
        assert_eq!(c.terms.get(&(k - 2)), None);
    }

    #[test]
    fn table_rows() {
        for s in 3..=11 {
            let r = third_term_row_check(s).unwrap();
            assert!(r.passed, "{r}");
        }
        assert_eq!(third_term_row(4).unwrap().to_string(), "p3 - 2p2 + 2p0");
        assert_eq!(
            third_term_row(10).unwrap().to_string(),
            "p6 - 2p5 + p3 + p1"
        );
        assert!(third_term_row_check(2).is_err());
        assert!(third_term_row_check(12).is_err());
    }

    #[test]
    fn third_term_index_matches_table() {
        for (lo, hi, pairs) in THIRD_TERM_ROWS {
            let k = pairs[0].0;
            assert_eq!(third_term_index(lo), k);
            assert_eq!(third_term_index(hi), k);
        }
    }

    #[test]
    fn pentagonal_offsets_prefix() {
        let g: Vec<usize> = pentagonal_offsets(40).into_iter().map(|(g, _)| g).collect();
        assert_eq!(g, vec![1, 2, 5, 7, 12, 15, 22, 26, 35, 40]);
    }
}
