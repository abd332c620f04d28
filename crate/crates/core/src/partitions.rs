//! Compositions, partitions, and the integer matrices with fixed margins
//! that index homomorphisms between permutation modules.
//!
//! Everything in the Rust API is 0-based. Serialized forms (JSON, CLI flags,
//! provenance strings) use 1-based indices where an index is printed.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A finite tuple of nonnegative integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Composition {
    parts: Vec<u32>,
}

impl Composition {
    pub fn new(parts: Vec<u32>) -> Self {
        Composition { parts }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of stored parts, including trailing zeros.
    pub fn num_parts(&self) -> usize {
        self.parts.len()
    }

    pub fn degree(&self) -> u32 {
        self.parts.iter().sum()
    }

    /// Index (1-based) of the last nonzero part, or 0 for the zero tuple.
    pub fn length(&self) -> usize {
        self.parts.iter().rposition(|&p| p != 0).map_or(0, |i| i + 1)
    }

    /// Part at 0-based position `i`; zero beyond the stored parts.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// The same tuple with trailing zeros removed.
    pub fn trimmed(&self) -> Composition {
        Composition::new(self.parts[..self.length()].to_vec())
    }

    /// Moves `k` units from part `j` to part `i` (0-based, `i < j`). The
    /// number of stored parts is unchanged.
    pub fn shifted(&self, i: usize, j: usize, k: u32) -> Result<Composition> {
        if i >= j || j >= self.parts.len() {
            return Err(Error::IndexRange(format!(
                "shift ({}, {}) on a composition with {} parts",
                i + 1,
                j + 1,
                self.parts.len()
            )));
        }
        if k == 0 || k > self.parts[j] {
            return Err(Error::IndexRange(format!(
                "shift amount {k} outside 1..={}",
                self.parts[j]
            )));
        }
        let mut parts = self.parts.clone();
        parts[i] += k;
        parts[j] -= k;
        Ok(Composition::new(parts))
    }

    pub fn is_weakly_decreasing(&self) -> bool {
        self.parts.windows(2).all(|w| w[0] >= w[1])
    }

    /// Parses a comma-separated list such as `3,1,1,1`.
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Composition::default());
        }
        s.split(',')
            .map(|t| t.trim().parse::<u32>())
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Composition::new)
            .map_err(|_| Error::Parse(s.to_string()))
    }
}

impl FromStr for Composition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Composition::parse(s)
    }
}

impl fmt::Display for Composition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for p in &self.parts {
            if !first {
                f.write_str(",")?;
            }
            write!(f, "{p}")?;
            first = false;
        }
        Ok(())
    }
}

impl From<Vec<u32>> for Composition {
    fn from(parts: Vec<u32>) -> Self {
        Composition::new(parts)
    }
}

/// A weakly decreasing composition, stored without trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Composition", into = "Composition")]
pub struct Partition(Composition);

impl Partition {
    pub fn new(parts: Vec<u32>) -> Result<Self> {
        let c = Composition::new(parts);
        if !c.is_weakly_decreasing() {
            return Err(Error::NotAPartition(c.parts));
        }
        Ok(Partition(c.trimmed()))
    }

    pub fn parts(&self) -> &[u32] {
        self.0.parts()
    }

    pub fn degree(&self) -> u32 {
        self.0.degree()
    }

    pub fn length(&self) -> usize {
        self.0.length()
    }

    pub fn part(&self, i: usize) -> u32 {
        self.0.part(i)
    }

    pub fn as_composition(&self) -> &Composition {
        &self.0
    }

    /// The conjugate partition: part `j` counts the parts of `self` that are
    /// at least `j + 1`.
    pub fn transpose(&self) -> Partition {
        let first = self.part(0);
        let parts = (1..=first)
            .map(|j| self.parts().iter().filter(|&&p| p >= j).count() as u32)
            .collect();
        Partition(Composition::new(parts))
    }

    pub fn parse(s: &str) -> Result<Self> {
        Partition::new(Composition::parse(s)?.parts)
    }

    /// True when some nonzero part is repeated.
    pub fn is_two_singular(&self) -> bool {
        self.parts().windows(2).any(|w| w[0] == w[1])
    }
}

impl TryFrom<Composition> for Partition {
    type Error = Error;

    fn try_from(c: Composition) -> Result<Self> {
        Partition::new(c.parts)
    }
}

impl From<Partition> for Composition {
    fn from(p: Partition) -> Self {
        p.0
    }
}

impl FromStr for Partition {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Partition::parse(s)
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// All partitions of `r`, in reverse lexicographic order starting at `(r)`.
pub fn partitions_of(r: u32) -> Vec<Partition> {
    fn go(remaining: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if remaining == 0 {
            out.push(Partition(Composition::new(prefix.clone())));
            return;
        }
        for p in (1..=remaining.min(max)).rev() {
            prefix.push(p);
            go(remaining - p, p, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(r, r, &mut Vec::new(), &mut out);
    out
}

/// A nonnegative integer matrix. As an element of `Tab(alpha, beta)` its row
/// sums are `alpha` and its column sums are `beta`; the margins are derived
/// from the entries rather than stored.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TabMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<u32>,
}

/// Direction of a four-cell unit exchange.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Axis {
    Row,
    Col,
}

impl TabMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<u32>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape(format!(
                "{} entries for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        Ok(TabMatrix { rows, cols, entries })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        TabMatrix {
            rows,
            cols,
            entries: vec![0; rows * cols],
        }
    }

    /// Builds a matrix from row vectors; all rows must have equal length.
    pub fn from_rows<R: AsRef<[u32]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            let r = r.as_ref();
            if r.len() != cols {
                return Err(Error::Shape("ragged rows".into()));
            }
            entries.extend_from_slice(r);
        }
        Ok(TabMatrix {
            rows: rows.len(),
            cols,
            entries,
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[u32] {
        &self.entries
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> u32 {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[u32] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> impl Iterator<Item = u32> + '_ {
        (0..self.rows).map(move |i| self.get(i, j))
    }

    pub fn to_rows(&self) -> Vec<Vec<u32>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn row_sums(&self) -> Composition {
        Composition::new((0..self.rows).map(|i| self.row(i).iter().sum()).collect())
    }

    pub fn col_sums(&self) -> Composition {
        Composition::new((0..self.cols).map(|j| self.column(j).sum()).collect())
    }

    pub fn degree(&self) -> u32 {
        self.entries.iter().sum()
    }

    /// Entrywise transpose; maps `Tab(alpha, beta)` onto `Tab(beta, alpha)`.
    pub fn transpose(&self) -> TabMatrix {
        let mut t = TabMatrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    /// True when the row sums match `alpha` and the column sums match `beta`,
    /// ignoring trailing zero parts on either side.
    pub fn has_margins(&self, alpha: &Composition, beta: &Composition) -> bool {
        self.row_sums().trimmed() == alpha.trimmed() && self.col_sums().trimmed() == beta.trimmed()
    }

    /// Adds the signed unit corrections `(row, col, delta)`, failing if any
    /// entry would become negative.
    pub(crate) fn adjusted(&self, deltas: &[(usize, usize, i64)]) -> Result<TabMatrix> {
        let mut out = self.clone();
        for &(i, j, d) in deltas {
            if i >= self.rows || j >= self.cols {
                return Err(Error::IndexRange(format!(
                    "cell ({}, {}) outside a {}x{} matrix",
                    i + 1,
                    j + 1,
                    self.rows,
                    self.cols
                )));
            }
            let idx = i * self.cols + j;
            let v = out.entries[idx] as i64 + d;
            // Later corrections may restore an intermediate negative value.
            out.entries[idx] = v.rem_euclid(1 << 32) as u32;
        }
        for &(i, j, _) in deltas {
            let mut total = self.get(i, j) as i64;
            for &(i2, j2, d2) in deltas {
                if (i2, j2) == (i, j) {
                    total += d2;
                }
            }
            if total < 0 {
                return Err(Error::NegativeEntry { row: i + 1, col: j + 1 });
            }
        }
        Ok(out)
    }
}

impl fmt::Display for TabMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for i in 0..self.rows {
            if i > 0 {
                f.write_str(",")?;
            }
            f.write_str("[")?;
            for (j, v) in self.row(i).iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{v}")?;
            }
            f.write_str("]")?;
        }
        f.write_str("]")
    }
}

#[derive(Serialize, Deserialize)]
struct TabMatrixRepr {
    alpha: Vec<u32>,
    beta: Vec<u32>,
    entries: Vec<Vec<u32>>,
}

impl Serialize for TabMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        TabMatrixRepr {
            alpha: self.row_sums().parts().to_vec(),
            beta: self.col_sums().parts().to_vec(),
            entries: self.to_rows(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TabMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let repr = TabMatrixRepr::deserialize(d)?;
        let m = TabMatrix::from_rows(&repr.entries).map_err(D::Error::custom)?;
        if m.row_sums().parts() != repr.alpha.as_slice() || m.col_sums().parts() != repr.beta.as_slice() {
            return Err(D::Error::custom("entries disagree with the stated margins"));
        }
        Ok(m)
    }
}

fn check_degrees(alpha: &Composition, beta: &Composition) -> Result<()> {
    if alpha.degree() != beta.degree() {
        return Err(Error::DegreeMismatch {
            left: alpha.degree(),
            right: beta.degree(),
        });
    }
    Ok(())
}

/// Every matrix in `Tab(alpha, beta)`, trimmed to `l(alpha) x l(beta)`, in
/// ascending lexicographic order of the row-major entry sequence.
pub fn enumerate_tables(alpha: &Composition, beta: &Composition) -> Result<Vec<TabMatrix>> {
    enumerate_tables_capped(alpha, beta, usize::MAX)
}

/// As [`enumerate_tables`], failing once more than `cap` tables are produced.
pub fn enumerate_tables_capped(
    alpha: &Composition,
    beta: &Composition,
    cap: usize,
) -> Result<Vec<TabMatrix>> {
    check_degrees(alpha, beta)?;
    let a = alpha.trimmed();
    let b = beta.trimmed();
    enumerate_shaped(a.parts(), b.parts(), cap)
}

/// Enumerates tables whose shape is exactly `row_margins.len() x
/// col_margins.len()`, zero margins included.
pub(crate) fn enumerate_shaped(
    row_margins: &[u32],
    col_margins: &[u32],
    cap: usize,
) -> Result<Vec<TabMatrix>> {
    let rs: u32 = row_margins.iter().sum();
    let cs: u32 = col_margins.iter().sum();
    if rs != cs {
        return Err(Error::DegreeMismatch { left: rs, right: cs });
    }
    let rows = row_margins.len();
    let cols = col_margins.len();
    let mut out = Vec::new();
    if rows == 0 || cols == 0 {
        if rs == 0 {
            out.push(TabMatrix::zeros(rows, cols));
        }
        return Ok(out);
    }
    let mut state = Backtrack {
        rows,
        cols,
        row_margins,
        col_left: col_margins.to_vec(),
        entries: vec![0; rows * cols],
        out: &mut out,
        cap,
        overflow: false,
    };
    state.fill(0, 0, row_margins[0]);
    if state.overflow {
        return Err(Error::CapExceeded(format!(
            "more than {cap} tables for margins {:?} / {:?}",
            row_margins, col_margins
        )));
    }
    Ok(out)
}

struct Backtrack<'a> {
    rows: usize,
    cols: usize,
    row_margins: &'a [u32],
    col_left: Vec<u32>,
    entries: Vec<u32>,
    out: &'a mut Vec<TabMatrix>,
    cap: usize,
    overflow: bool,
}

impl Backtrack<'_> {
    fn fill(&mut self, i: usize, j: usize, row_left: u32) {
        if self.overflow {
            return;
        }
        if i + 1 == self.rows {
            // The last row is forced by the column capacities.
            let base = i * self.cols;
            self.entries[base..base + self.cols].copy_from_slice(&self.col_left);
            if self.out.len() == self.cap {
                self.overflow = true;
                return;
            }
            self.out.push(TabMatrix {
                rows: self.rows,
                cols: self.cols,
                entries: self.entries.clone(),
            });
            return;
        }
        if j + 1 == self.cols {
            if row_left > self.col_left[j] {
                return;
            }
            self.place(i, j, row_left);
            let next = self.row_margins[i + 1];
            self.fill(i + 1, 0, next);
            self.unplace(i, j, row_left);
            return;
        }
        let rest: u32 = self.col_left[j + 1..].iter().sum();
        let lo = row_left.saturating_sub(rest);
        let hi = row_left.min(self.col_left[j]);
        for v in lo..=hi {
            self.place(i, j, v);
            self.fill(i, j + 1, row_left - v);
            self.unplace(i, j, v);
        }
    }

    #[inline]
    fn place(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.cols + j] = v;
        self.col_left[j] -= v;
    }

    #[inline]
    fn unplace(&mut self, i: usize, j: usize, v: u32) {
        self.entries[i * self.cols + j] = 0;
        self.col_left[j] += v;
    }
}

/// The four-cell exchange used by the row and column relations.
///
/// Row axis: `A + E_ik - E_il - E_jk + E_jl`.
/// Column axis: `A + E_ki - E_li - E_kj + E_lj`.
///
/// Indices are 0-based. Margins are preserved by construction.
pub fn unit_exchange(
    a: &TabMatrix,
    axis: Axis,
    i: usize,
    j: usize,
    k: usize,
    l: usize,
) -> Result<TabMatrix> {
    match axis {
        Axis::Row => a.adjusted(&[(i, k, 1), (i, l, -1), (j, k, -1), (j, l, 1)]),
        Axis::Col => a.adjusted(&[(k, i, 1), (l, i, -1), (k, j, -1), (l, j, 1)]),
    }
}

/// Which of the two structural total orders to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderMode {
    /// Rows compared bottom row first, each row read left to right.
    Row,
    /// Columns compared rightmost column first, each column read top to bottom.
    Col,
}

pub fn order_compare(a: &TabMatrix, b: &TabMatrix, mode: OrderMode) -> Result<Ordering> {
    if a.rows != b.rows || a.cols != b.cols {
        return Err(Error::Shape(format!(
            "{}x{} vs {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let ord = match mode {
        OrderMode::Row => (0..a.rows)
            .rev()
            .map(|i| a.row(i).cmp(b.row(i)))
            .find(|o| o.is_ne()),
        OrderMode::Col => (0..a.cols)
            .rev()
            .map(|j| a.column(j).cmp(b.column(j)))
            .find(|o| o.is_ne()),
    };
    Ok(ord.unwrap_or(Ordering::Equal))
}

/// The parameters `(a, m, b)` of the staircase-hook partition
/// `(a, m-1, ..., 2, 1^b)` together with its flattened margins.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StaircaseFamily {
    pub a: u32,
    pub m: u32,
    pub b: u32,
    pub lambda: Partition,
    pub lambda_t: Partition,
    /// `(b + m - 1, m - 1, ..., 2, a - m + 1)`: flattened rows.
    pub alpha: Composition,
    /// `(a, m - 1, ..., 2, b)`: flattened columns.
    pub beta: Composition,
    pub r: u32,
}

impl StaircaseFamily {
    pub fn new(a: u32, m: u32, b: u32) -> Result<Self> {
        if !(m >= 2 && a >= m && b >= 1) {
            return Err(Error::FamilyRange { a, m, b });
        }
        let a_t = b + m - 1;
        let b_t = a - m + 1;
        let middle: Vec<u32> = (2..m).rev().collect();
        let staircase = |head: u32, ones: u32| {
            let mut v = vec![head];
            v.extend(&middle);
            v.extend(std::iter::repeat_n(1, ones as usize));
            v
        };
        let flat = |head: u32, tail: u32| {
            let mut v = vec![head];
            v.extend(&middle);
            v.push(tail);
            Composition::new(v)
        };
        let lambda = Partition::new(staircase(a, b))?;
        let lambda_t = Partition::new(staircase(a_t, b_t))?;
        let r = lambda.degree();
        Ok(StaircaseFamily {
            a,
            m,
            b,
            lambda,
            lambda_t,
            alpha: flat(a_t, b_t),
            beta: flat(a, b),
            r,
        })
    }

    /// `a' = b + m - 1`.
    pub fn a_t(&self) -> u32 {
        self.b + self.m - 1
    }

    /// `b' = a - m + 1`.
    pub fn b_t(&self) -> u32 {
        self.a - self.m + 1
    }

    pub fn parity_holds(&self) -> bool {
        (self.a - self.m) % 2 == self.b % 2
    }

    /// The family of the conjugate partition, `(b + m - 1, m, a - m + 1)`.
    pub fn swapped(&self) -> StaircaseFamily {
        StaircaseFamily::new(self.a_t(), self.m, self.b_t())
            .expect("swap of a valid family is valid")
    }

    /// All families with `r <= max_r`, ordered by `(r, a, m, b)`.
    pub fn all_up_to(max_r: u32) -> Vec<StaircaseFamily> {
        let mut out = Vec::new();
        for m in 2..=max_r {
            for a in m..=max_r {
                for b in 1..=max_r {
                    let f = StaircaseFamily::new(a, m, b).expect("in range");
                    if f.r <= max_r {
                        out.push(f);
                    }
                }
            }
        }
        out.sort_by_key(|f| (f.r, f.a, f.m, f.b));
        out
    }
}

/// Alias for [`StaircaseFamily::new`].
pub fn staircase_family(a: u32, m: u32, b: u32) -> Result<StaircaseFamily> {
    StaircaseFamily::new(a, m, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn comp(s: &str) -> Composition {
        s.parse().unwrap()
    }

    fn tm(rows: &[&[u32]]) -> TabMatrix {
        TabMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn length_and_degree() {
        let c = comp("3,0,2,0,0");
        assert_eq!(c.degree(), 5);
        assert_eq!(c.length(), 3);
        assert_eq!(comp("0,0").length(), 0);
        assert_eq!(comp("").length(), 0);
    }

    #[test]
    fn shifted_tuple() {
        assert_eq!(comp("2,1").shifted(0, 1, 1).unwrap(), comp("3,0"));
        assert!(comp("2,1").shifted(0, 1, 2).is_err());
        assert!(comp("2,1").shifted(1, 0, 1).is_err());
    }

    #[test]
    fn transpose_examples() {
        let p = |s: &str| Partition::parse(s).unwrap();
        assert_eq!(p("1").transpose(), p("1"));
        assert_eq!(p("3,1,1,1").transpose(), p("4,1,1"));
        assert_eq!(p("5,2,1,1").transpose(), p("4,2,1,1,1"));
        assert!(Partition::parse("1,2").is_err());
    }

    #[test]
    fn partition_counts() {
        let counts: Vec<usize> = (1..=8).map(|r| partitions_of(r).len()).collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11, 15, 22]);
    }

    #[test]
    fn staircase_examples() {
        let f = staircase_family(3, 2, 3).unwrap();
        assert_eq!(f.lambda.parts(), &[3, 1, 1, 1]);
        assert_eq!(f.lambda_t.parts(), &[4, 1, 1]);
        assert_eq!(f.alpha, comp("4,2"));
        assert_eq!(f.beta, comp("3,3"));
        assert_eq!(f.r, 6);

        let f = staircase_family(2, 2, 1).unwrap();
        assert_eq!(f.lambda.parts(), &[2, 1]);
        assert_eq!(f.lambda_t.parts(), &[2, 1]);
        assert_eq!(f.alpha, comp("2,1"));
        assert_eq!(f.beta, comp("2,1"));
        assert_eq!(f.r, 3);

        let f = staircase_family(5, 3, 2).unwrap();
        assert_eq!(f.lambda.parts(), &[5, 2, 1, 1]);
        assert_eq!(f.lambda_t.parts(), &[4, 2, 1, 1, 1]);
        assert_eq!(f.alpha, comp("4,2,3"));
        assert_eq!(f.beta, comp("5,2,2"));
        assert_eq!(f.r, 9);

        assert!(staircase_family(1, 2, 1).is_err());
        assert!(staircase_family(3, 1, 1).is_err());
        assert!(staircase_family(3, 2, 0).is_err());
    }

    #[test]
    fn staircase_invariants() {
        for f in StaircaseFamily::all_up_to(12) {
            assert_eq!(f.lambda.transpose(), f.lambda_t);
            assert_eq!(f.alpha.degree(), f.r);
            assert_eq!(f.beta.degree(), f.r);
            assert_eq!(f.swapped().swapped(), f);
        }
    }

    #[test]
    fn enumerate_examples() {
        let t = enumerate_tables(&comp("1,1"), &comp("1,1")).unwrap();
        assert_eq!(t, vec![tm(&[&[0, 1], &[1, 0]]), tm(&[&[1, 0], &[0, 1]])]);

        let t = enumerate_tables(&comp("2,1"), &comp("2,1")).unwrap();
        assert_eq!(t, vec![tm(&[&[1, 1], &[1, 0]]), tm(&[&[2, 0], &[0, 1]])]);

        let t = enumerate_tables(&comp("4,2"), &comp("3,3")).unwrap();
        assert_eq!(t.len(), 3);
        assert!(t.contains(&tm(&[&[2, 2], &[1, 1]])));

        assert!(matches!(
            enumerate_tables(&comp("2"), &comp("1")),
            Err(Error::DegreeMismatch { .. })
        ));
        assert!(enumerate_tables_capped(&comp("1,1,1,1"), &comp("1,1,1,1"), 10).is_err());
    }

    #[test]
    fn enumerate_trims_zero_parts() {
        let t = enumerate_tables(&comp("3,0"), &comp("2,1,0")).unwrap();
        assert_eq!(t, vec![tm(&[&[2, 1]])]);
    }

    /// Exhaustive reference: all matrices with entries bounded by the row
    /// margin, filtered by margins.
    fn brute_force(alpha: &[u32], beta: &[u32]) -> Vec<TabMatrix> {
        let (r, c) = (alpha.len(), beta.len());
        let bound = alpha.iter().copied().max().unwrap_or(0) + 1;
        let cells = r * c;
        let mut out = Vec::new();
        let total = (bound as u64).pow(cells as u32);
        for code in 0..total {
            let mut x = code;
            let mut entries = vec![0u32; cells];
            for e in entries.iter_mut().rev() {
                *e = (x % bound as u64) as u32;
                x /= bound as u64;
            }
            let m = TabMatrix::new(r, c, entries).unwrap();
            if m.row_sums().parts() == alpha && m.col_sums().parts() == beta {
                out.push(m);
            }
        }
        out
    }

    #[test]
    fn enumerate_matches_brute_force() {
        for (a, b) in [
            (vec![2, 1], vec![2, 1]),
            (vec![3, 1], vec![2, 2]),
            (vec![2, 2, 1], vec![3, 1, 1]),
            (vec![4, 2], vec![3, 3]),
            (vec![1, 1, 1], vec![1, 1, 1]),
        ] {
            assert_eq!(enumerate_shaped(&a, &b, usize::MAX).unwrap(), brute_force(&a, &b));
        }
    }

    #[test]
    fn unit_exchange_examples() {
        let a = tm(&[&[1, 2], &[2, 1]]);
        assert_eq!(unit_exchange(&a, Axis::Row, 0, 1, 0, 0).unwrap(), a);
        assert_eq!(
            unit_exchange(&a, Axis::Row, 0, 1, 0, 1).unwrap(),
            tm(&[&[2, 1], &[1, 2]])
        );
        let a = tm(&[&[1, 3], &[2, 0]]);
        let b = unit_exchange(&a, Axis::Col, 0, 1, 0, 1).unwrap();
        assert_eq!(b, tm(&[&[2, 2], &[1, 1]]));
        assert_eq!(b.row_sums(), comp("4,2"));
        assert_eq!(b.col_sums(), comp("3,3"));
        assert!(matches!(
            unit_exchange(&a, Axis::Row, 1, 0, 0, 1),
            Err(Error::NegativeEntry { .. })
        ));
    }

    #[test]
    fn order_on_small_set() {
        let t = enumerate_tables(&comp("2,1"), &comp("2,1")).unwrap();
        for mode in [OrderMode::Row, OrderMode::Col] {
            assert_eq!(order_compare(&t[0], &t[0], mode).unwrap(), Ordering::Equal);
            let ab = order_compare(&t[0], &t[1], mode).unwrap();
            let ba = order_compare(&t[1], &t[0], mode).unwrap();
            assert_ne!(ab, Ordering::Equal);
            assert_eq!(ab, ba.reverse());
        }
        assert!(order_compare(&t[0], &TabMatrix::zeros(1, 2), OrderMode::Row).is_err());
    }

    #[test]
    fn orders_are_total_on_tab_sets() {
        let t = enumerate_tables(&comp("3,2,2"), &comp("3,3,1")).unwrap();
        for mode in [OrderMode::Row, OrderMode::Col] {
            let mut sorted = t.clone();
            sorted.sort_by(|x, y| order_compare(x, y, mode).unwrap());
            for w in sorted.windows(2) {
                assert_eq!(order_compare(&w[0], &w[1], mode).unwrap(), Ordering::Less);
            }
            for x in &t {
                for y in &t {
                    for z in &t {
                        let xy = order_compare(x, y, mode).unwrap();
                        let yz = order_compare(y, z, mode).unwrap();
                        if xy.is_lt() && yz.is_lt() {
                            assert!(order_compare(x, z, mode).unwrap().is_lt());
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn tab_matrix_json() {
        let a = tm(&[&[2, 2], &[1, 1]]);
        let s = serde_json::to_string(&a).unwrap();
        assert_eq!(s, r#"{"alpha":[4,2],"beta":[3,3],"entries":[[2,2],[1,1]]}"#);
        let back: TabMatrix = serde_json::from_str(&s).unwrap();
        assert_eq!(back, a);
        assert!(serde_json::from_str::<TabMatrix>(
            r#"{"alpha":[4,3],"beta":[3,3],"entries":[[2,2],[1,1]]}"#
        )
        .is_err());
    }

    fn small_margins() -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
        (prop::collection::vec(0u32..4, 1..4), prop::collection::vec(0u32..4, 1..4)).prop_filter_map(
            "equal degree",
            |(mut a, mut b)| {
                let (sa, sb): (u32, u32) = (a.iter().sum(), b.iter().sum());
                match sa.cmp(&sb) {
                    Ordering::Less => *a.last_mut().unwrap() += sb - sa,
                    Ordering::Greater => *b.last_mut().unwrap() += sa - sb,
                    Ordering::Equal => {}
                }
                if a.iter().sum::<u32>() > 8 {
                    None
                } else {
                    Some((a, b))
                }
            },
        )
    }

    proptest! {
        #[test]
        fn enumeration_is_sorted_and_margin_exact((a, b) in small_margins()) {
            let tabs = enumerate_shaped(&a, &b, usize::MAX).unwrap();
            for w in tabs.windows(2) {
                prop_assert!(w[0].entries() < w[1].entries());
            }
            for t in &tabs {
                prop_assert_eq!(t.row_sums(), Composition::new(a.clone()));
                prop_assert_eq!(t.col_sums(), Composition::new(b.clone()));
            }
            let transposed = enumerate_shaped(&b, &a, usize::MAX).unwrap();
            prop_assert_eq!(tabs.len(), transposed.len());
            let mut tt: Vec<_> = tabs.iter().map(|t| t.transpose()).collect();
            tt.sort();
            prop_assert_eq!(tt, transposed);
        }

        #[test]
        fn exchange_preserves_margins_and_inverts(
            (a, b) in small_margins(), pick in any::<prop::sample::Index>(),
            i in 0usize..4, j in 0usize..4, k in 0usize..4, l in 0usize..4,
        ) {
            let tabs = enumerate_shaped(&a, &b, usize::MAX).unwrap();
            prop_assume!(!tabs.is_empty());
            let t = pick.get(&tabs);
            for axis in [Axis::Row, Axis::Col] {
                let (n_ij, n_kl) = match axis {
                    Axis::Row => (t.rows(), t.cols()),
                    Axis::Col => (t.cols(), t.rows()),
                };
                if i >= n_ij || j >= n_ij || k >= n_kl || l >= n_kl {
                    continue;
                }
                if let Ok(e) = unit_exchange(t, axis, i, j, k, l) {
                    prop_assert_eq!(e.row_sums(), t.row_sums());
                    prop_assert_eq!(e.col_sums(), t.col_sums());
                    let back = unit_exchange(&e, axis, i, j, l, k).unwrap();
                    prop_assert_eq!(&back, t);
                }
            }
        }
    }
}
