//! GF(2) relation systems on the coefficients `h[A]` of a homomorphism
//! `h = sum h[A] rho[A]`, built without materializing permutation modules.
//!
//! Row relations come from `h . phi^(i,j,1) = 0` and column relations from
//! `psi^(i,j,1) . h = 0`. Both are generated one row per table `B` (or `D`)
//! of the shifted margins, which yields each relation exactly once.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::ser::{Serialize, SerializeStruct, Serializer};

use crate::error::{Error, Result};
use crate::gf2::{sparse_nullspace, Gf2Vector};
use crate::partitions::{enumerate_shaped, enumerate_tables_capped, unit_exchange, Axis, Composition, Partition, TabMatrix};
use crate::Caps;

/// A canonically ordered table list together with its inverse index.
#[derive(Clone, Debug)]
pub struct TableIndex {
    alpha: Composition,
    beta: Composition,
    tables: Vec<TabMatrix>,
    index: HashMap<TabMatrix, u32>,
}

impl TableIndex {
    pub fn new(alpha: &Composition, beta: &Composition, caps: &Caps) -> Result<Self> {
        let tables = enumerate_tables_capped(alpha, beta, caps.max_tables)?;
        let index = tables
            .iter()
            .enumerate()
            .map(|(i, t)| (t.clone(), i as u32))
            .collect();
        Ok(TableIndex {
            alpha: alpha.trimmed(),
            beta: beta.trimmed(),
            tables,
            index,
        })
    }

    pub fn alpha(&self) -> &Composition {
        &self.alpha
    }

    pub fn beta(&self) -> &Composition {
        &self.beta
    }

    pub fn tables(&self) -> &[TabMatrix] {
        &self.tables
    }

    pub fn len(&self) -> usize {
        self.tables.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tables.is_empty()
    }

    pub fn position(&self, t: &TabMatrix) -> Option<usize> {
        self.index.get(t).map(|&i| i as usize)
    }

    fn expect_position(&self, t: &TabMatrix) -> u32 {
        *self
            .index
            .get(t)
            .unwrap_or_else(|| panic!("relation target {t} outside Tab({}, {})", self.alpha, self.beta))
    }
}

/// Deliberate corruption of the relation generator, used only to check that
/// the self-test notices.
#[doc(hidden)]
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Mutation {
    #[default]
    None,
    /// Row relations keep the even coefficients instead of the odd ones.
    FlipRowParity,
}

/// One relation: the listed unknowns sum to zero.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Relation {
    pub columns: Vec<u32>,
    pub provenance: String,
}

fn r_rows(idx: &TableIndex, i: usize, j: usize, caps: &Caps, mutation: Mutation) -> Result<Vec<Relation>> {
    if i >= j {
        return Err(Error::IndexRange(format!("need i < j, got ({}, {})", i + 1, j + 1)));
    }
    if j >= idx.alpha.num_parts() || idx.alpha.part(j) == 0 {
        return Ok(Vec::new());
    }
    let shifted = idx.alpha.shifted(i, j, 1)?;
    let sources = enumerate_shaped(shifted.parts(), idx.beta.parts(), caps.max_tables)?;
    let keep = |v: u32| match mutation {
        Mutation::None => v % 2 == 1,
        Mutation::FlipRowParity => v > 0 && v.is_multiple_of(2),
    };
    Ok(sources
        .par_iter()
        .filter_map(|b| {
            let mut columns: Vec<u32> = (0..b.cols())
                .filter(|&l| keep(b.get(i, l)))
                .map(|l| {
                    let t = b
                        .adjusted(&[(i, l, -1), (j, l, 1)])
                        .expect("odd entry is positive");
                    idx.expect_position(&t)
                })
                .collect();
            if columns.is_empty() {
                return None;
            }
            columns.sort_unstable();
            Some(Relation {
                columns,
                provenance: format!("R({},{}) B={b}", i + 1, j + 1),
            })
        })
        .collect())
}

fn c_rows(idx: &TableIndex, i: usize, j: usize, caps: &Caps) -> Result<Vec<Relation>> {
    if i >= j {
        return Err(Error::IndexRange(format!("need i < j, got ({}, {})", i + 1, j + 1)));
    }
    if j >= idx.beta.num_parts() || idx.beta.part(j) == 0 {
        return Ok(Vec::new());
    }
    let shifted = idx.beta.shifted(i, j, 1)?;
    let sources = enumerate_shaped(idx.alpha.parts(), shifted.parts(), caps.max_tables)?;
    Ok(sources
        .par_iter()
        .filter_map(|d| {
            let mut columns: Vec<u32> = (0..d.rows())
                .filter(|&k| d.get(k, i) % 2 == 1)
                .map(|k| {
                    let t = d
                        .adjusted(&[(k, i, -1), (k, j, 1)])
                        .expect("odd entry is positive");
                    idx.expect_position(&t)
                })
                .collect();
            if columns.is_empty() {
                return None;
            }
            columns.sort_unstable();
            Some(Relation {
                columns,
                provenance: format!("C({},{}) D={d}", i + 1, j + 1),
            })
        })
        .collect())
}

/// Row relations for `h . phi^(i,j,1) = 0` over `Tab(alpha, beta)`
/// (0-based `i < j`). Empty when `j` is past the last part of `alpha`.
pub fn build_r_rows(alpha: &Composition, beta: &Composition, i: usize, j: usize) -> Result<Vec<Relation>> {
    let caps = Caps::default();
    let idx = TableIndex::new(alpha, beta, &caps)?;
    normalized(r_rows(&idx, i, j, &caps, Mutation::None)?)
}

/// Column relations for `psi^(i,j,1) . h = 0` over `Tab(alpha, beta)`.
pub fn build_c_rows(alpha: &Composition, beta: &Composition, i: usize, j: usize) -> Result<Vec<Relation>> {
    let caps = Caps::default();
    let idx = TableIndex::new(alpha, beta, &caps)?;
    normalized(c_rows(&idx, i, j, &caps)?)
}

/// Sorts rows and removes duplicates, keeping the least provenance tag.
fn normalized(mut rows: Vec<Relation>) -> Result<Vec<Relation>> {
    rows.sort();
    rows.dedup_by(|later, first| later.columns == first.columns);
    Ok(rows)
}

/// A sparse GF(2) system whose unknowns are indexed by a table list.
#[derive(Clone, Debug)]
pub struct RelationSystem {
    index: TableIndex,
    rows: Vec<Vec<u32>>,
    provenance: Vec<String>,
}

impl RelationSystem {
    /// The system with no relations over `Tab(alpha, beta)`.
    pub fn empty(alpha: &Composition, beta: &Composition, caps: &Caps) -> Result<Self> {
        Ok(RelationSystem {
            index: TableIndex::new(alpha, beta, caps)?,
            rows: Vec::new(),
            provenance: Vec::new(),
        })
    }

    pub fn index(&self) -> &TableIndex {
        &self.index
    }

    pub fn tables(&self) -> &[TabMatrix] {
        self.index.tables()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn provenance(&self) -> &[String] {
        &self.provenance
    }

    pub fn num_columns(&self) -> usize {
        self.index.len()
    }

    /// True when every relation vanishes on `x`.
    pub fn satisfied_by(&self, x: &Gf2Vector) -> bool {
        self.rows
            .iter()
            .all(|r| r.iter().filter(|&&c| x.get(c as usize)).count() % 2 == 0)
    }

    pub fn row_vectors(&self) -> impl Iterator<Item = Gf2Vector> + '_ {
        let n = self.num_columns();
        self.rows.iter().map(move |r| {
            let idx: Vec<usize> = r.iter().map(|&c| c as usize).collect();
            Gf2Vector::from_indices(n, &idx).expect("columns in range")
        })
    }
}

impl Serialize for RelationSystem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let tables: Vec<Vec<Vec<u32>>> = self.tables().iter().map(TabMatrix::to_rows).collect();
        let mut st = s.serialize_struct("RelationSystem", 5)?;
        st.serialize_field("alpha", self.index.alpha())?;
        st.serialize_field("beta", self.index.beta())?;
        st.serialize_field("tables", &tables)?;
        st.serialize_field("rows", &self.rows)?;
        st.serialize_field("provenance", &self.provenance)?;
        st.end()
    }
}

/// All row and column relations `(i, j, 1)`, `i < j`, over `Tab(alpha, beta)`.
pub fn relation_system(alpha: &Composition, beta: &Composition, caps: &Caps) -> Result<RelationSystem> {
    relation_system_with(alpha, beta, caps, Mutation::None)
}

#[doc(hidden)]
pub fn relation_system_with(
    alpha: &Composition,
    beta: &Composition,
    caps: &Caps,
    mutation: Mutation,
) -> Result<RelationSystem> {
    let index = TableIndex::new(alpha, beta, caps)?;
    let (la, lb) = (index.alpha.num_parts(), index.beta.num_parts());
    let r_pairs: Vec<(usize, usize)> = (0..la).flat_map(|i| (i + 1..la).map(move |j| (i, j))).collect();
    let c_pairs: Vec<(usize, usize)> = (0..lb).flat_map(|i| (i + 1..lb).map(move |j| (i, j))).collect();
    let mut all = Vec::new();
    for (i, j) in r_pairs {
        all.extend(r_rows(&index, i, j, caps, mutation)?);
    }
    for (i, j) in c_pairs {
        all.extend(c_rows(&index, i, j, caps)?);
    }
    let rows = normalized(all)?;
    let (rows, provenance) = rows.into_iter().map(|r| (r.columns, r.provenance)).unzip();
    Ok(RelationSystem {
        index,
        rows,
        provenance,
    })
}

/// The relevance system over `Tab(lambda', lambda)`.
pub fn relevance_system(lambda: &Partition, caps: &Caps) -> Result<RelationSystem> {
    relation_system(lambda.transpose().as_composition(), lambda.as_composition(), caps)
}

/// Solution space of a relation system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelevanceResult {
    pub dim: usize,
    /// Reduced row echelon basis of the solution space.
    pub basis: Vec<Gf2Vector>,
    /// Canonical indices of the tables in the support.
    pub support_indices: Vec<usize>,
    /// Tables with a nonzero coordinate in some solution.
    pub support: Vec<TabMatrix>,
}

pub fn solve_relevance(sys: &RelationSystem) -> RelevanceResult {
    let basis = sparse_nullspace(sys.num_columns(), &sys.rows);
    let mut seen = vec![false; sys.num_columns()];
    for v in &basis {
        for i in v.ones() {
            seen[i] = true;
        }
    }
    let support_indices: Vec<usize> = (0..seen.len()).filter(|&i| seen[i]).collect();
    let support = support_indices.iter().map(|&i| sys.tables()[i].clone()).collect();
    RelevanceResult {
        dim: basis.len(),
        basis,
        support_indices,
        support,
    }
}

/// Tables whose coefficients appear with coefficient 1 in
/// `R_{i,j}^k(A)`: `(a_ik + 1) h[A] = sum_{l != k} a_il h[A + E_ik - E_il - E_jk + E_jl]`.
/// `None` when `a_jk = 0`.
pub fn r_corollary_row(a: &TabMatrix, i: usize, j: usize, k: usize) -> Result<Option<Vec<TabMatrix>>> {
    corollary_row(a, Axis::Row, i, j, k)
}

/// Tables in `C_{i,j}^k(A)`:
/// `(a_ki + 1) h[A] = sum_{l != k} a_li h[A + E_ki - E_li - E_kj + E_lj]`.
/// `None` when `a_kj = 0`.
pub fn c_corollary_row(a: &TabMatrix, i: usize, j: usize, k: usize) -> Result<Option<Vec<TabMatrix>>> {
    corollary_row(a, Axis::Col, i, j, k)
}

fn corollary_row(a: &TabMatrix, axis: Axis, i: usize, j: usize, k: usize) -> Result<Option<Vec<TabMatrix>>> {
    let (lines, cross) = match axis {
        Axis::Row => (a.rows(), a.cols()),
        Axis::Col => (a.cols(), a.rows()),
    };
    if i >= j || j >= lines || k >= cross {
        return Err(Error::IndexRange(format!("({}, {}, {})", i + 1, j + 1, k + 1)));
    }
    let entry = |line: usize, c: usize| match axis {
        Axis::Row => a.get(line, c),
        Axis::Col => a.get(c, line),
    };
    if entry(j, k) == 0 {
        return Ok(None);
    }
    let mut out = Vec::new();
    if (entry(i, k) + 1) % 2 == 1 {
        out.push(a.clone());
    }
    for l in (0..cross).filter(|&l| l != k && entry(i, l) % 2 == 1) {
        out.push(unit_exchange(a, axis, i, j, k, l)?);
    }
    out.sort();
    Ok(Some(out))
}

/// `z_{j,k}(A) = sum_{i<j} a_ik + sum_{l<k} a_jl + j + k` mod 2 (the index
/// shift to 0-based leaves the parity of `j + k` unchanged).
pub fn z_coefficient(a: &TabMatrix, j: usize, k: usize) -> Result<bool> {
    if j >= a.rows() || k >= a.cols() {
        return Err(Error::IndexRange(format!("({}, {}) in a {}x{} table", j + 1, k + 1, a.rows(), a.cols())));
    }
    let above: u32 = (0..j).map(|i| a.get(i, k)).sum();
    let left: u32 = (0..k).map(|l| a.get(j, l)).sum();
    Ok((above + left + (j + k) as u32) % 2 == 1)
}

/// Tables in `Z_{j,k}(A)`: `A` itself when `z_{j,k}(A) = 1`, plus the
/// exchange `A + E_ik - E_il - E_jk + E_jl` for every `(i, l)` with
/// `i < j, l > k` or `i > j, l < k` and `a_il` odd. Requires `a_jk != 0`.
pub fn build_z_row(a: &TabMatrix, j: usize, k: usize) -> Result<Vec<TabMatrix>> {
    let z = z_coefficient(a, j, k)?;
    if a.get(j, k) == 0 {
        return Err(Error::IndexRange(format!("entry ({}, {}) is zero", j + 1, k + 1)));
    }
    let mut out = Vec::new();
    if z {
        out.push(a.clone());
    }
    for i in 0..a.rows() {
        for l in 0..a.cols() {
            let quadrant = (i < j && l > k) || (i > j && l < k);
            if quadrant && a.get(i, l) % 2 == 1 {
                out.push(unit_exchange(a, Axis::Row, i, j, k, l)?);
            }
        }
    }
    out.sort();
    Ok(out)
}

/// Coefficient vector of a table list (repeats cancel).
pub fn row_vector(idx: &TableIndex, tables: &[TabMatrix]) -> Result<Gf2Vector> {
    let cols = tables
        .iter()
        .map(|t| {
            idx.position(t)
                .ok_or_else(|| Error::Margin(format!("{t} is not in Tab({}, {})", idx.alpha, idx.beta)))
        })
        .collect::<Result<Vec<_>>>()?;
    Gf2Vector::from_indices(idx.len(), &cols)
}

/// Coordinates of `h'`, where `h'[A^T] = h[A]`: maps vectors over
/// `Tab(alpha, beta)` to vectors over `Tab(beta, alpha)`.
pub fn transpose_hom(source: &TableIndex, target: &TableIndex, x: &Gf2Vector) -> Result<Gf2Vector> {
    if target.alpha != source.beta || target.beta != source.alpha || x.len() != source.len() {
        return Err(Error::Shape("transpose between mismatched table sets".into()));
    }
    let mut out = Gf2Vector::zeros(target.len());
    for i in x.ones() {
        out.set(target.expect_position(&source.tables[i].transpose()) as usize, true);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::partitions_of;
    use rand::seq::SliceRandom;
    use rand::{rngs::StdRng, SeedableRng};
    use std::collections::BTreeSet;

    fn comp(s: &str) -> Composition {
        s.parse().unwrap()
    }

    fn part(s: &str) -> Partition {
        s.parse().unwrap()
    }

    fn tm(rows: &[&[u32]]) -> TabMatrix {
        TabMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn r_rows_past_the_end_are_empty() {
        assert!(build_r_rows(&comp("3"), &comp("2,1"), 0, 1).unwrap().is_empty());
        assert!(build_c_rows(&comp("2,1"), &comp("3"), 0, 1).unwrap().is_empty());
        assert!(build_r_rows(&comp("2,1"), &comp("2,1"), 1, 0).is_err());
    }

    #[test]
    fn r_rows_hook_21() {
        let caps = Caps::default();
        let idx = TableIndex::new(&comp("2,1"), &comp("2,1"), &caps).unwrap();
        let rows = build_r_rows(&comp("2,1"), &comp("2,1"), 0, 1).unwrap();
        // The only source is B = [[2,1],[0,0]]; b_12 = 1 is the odd entry.
        assert_eq!(rows.len(), 1);
        let target = idx.position(&tm(&[&[2, 0], &[0, 1]])).unwrap() as u32;
        assert_eq!(rows[0].columns, vec![target]);
        assert_eq!(rows[0].provenance, "R(1,2) B=[[2,1],[0,0]]");
    }

    fn corollary_set(alpha: &Composition, beta: &Composition, axis: Axis, i: usize, j: usize) -> BTreeSet<Vec<TabMatrix>> {
        let mut out = BTreeSet::new();
        for a in crate::partitions::enumerate_tables(alpha, beta).unwrap() {
            let cross = match axis {
                Axis::Row => a.cols(),
                Axis::Col => a.rows(),
            };
            for k in 0..cross {
                let row = match axis {
                    Axis::Row => r_corollary_row(&a, i, j, k),
                    Axis::Col => c_corollary_row(&a, i, j, k),
                };
                if let Some(row) = row.unwrap() {
                    if !row.is_empty() {
                        out.insert(row);
                    }
                }
            }
        }
        out
    }

    fn b_form_set(alpha: &Composition, beta: &Composition, axis: Axis, i: usize, j: usize) -> BTreeSet<Vec<TabMatrix>> {
        let idx = TableIndex::new(alpha, beta, &Caps::default()).unwrap();
        let rows = match axis {
            Axis::Row => build_r_rows(alpha, beta, i, j).unwrap(),
            Axis::Col => build_c_rows(alpha, beta, i, j).unwrap(),
        };
        rows.into_iter()
            .map(|r| {
                let mut t: Vec<TabMatrix> = r.columns.iter().map(|&c| idx.tables()[c as usize].clone()).collect();
                t.sort();
                t
            })
            .collect()
    }

    #[test]
    fn b_form_matches_corollary_form() {
        for r in 1..=6 {
            for lambda in partitions_of(r) {
                let lt = lambda.transpose();
                let (a, b) = (lt.as_composition(), lambda.as_composition());
                for i in 0..a.num_parts() {
                    for j in i + 1..a.num_parts() {
                        assert_eq!(b_form_set(a, b, Axis::Row, i, j), corollary_set(a, b, Axis::Row, i, j));
                    }
                }
                for i in 0..b.num_parts() {
                    for j in i + 1..b.num_parts() {
                        assert_eq!(b_form_set(a, b, Axis::Col, i, j), corollary_set(a, b, Axis::Col, i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn c_rows_are_transposed_r_rows() {
        for r in 1..=6 {
            for lambda in partitions_of(r) {
                let lt = lambda.transpose();
                let (a, b) = (lt.as_composition(), lambda.as_composition());
                for i in 0..b.num_parts() {
                    for j in i + 1..b.num_parts() {
                        let c: BTreeSet<Vec<TabMatrix>> = b_form_set(a, b, Axis::Col, i, j)
                            .into_iter()
                            .map(|row| {
                                let mut t: Vec<TabMatrix> = row.iter().map(TabMatrix::transpose).collect();
                                t.sort();
                                t
                            })
                            .collect();
                        assert_eq!(c, b_form_set(b, a, Axis::Row, i, j));
                    }
                }
            }
        }
    }

    #[test]
    fn small_relevance_dimensions() {
        let caps = Caps::default();
        for r in 1..=5 {
            let res = solve_relevance(&relevance_system(&part(&r.to_string()), &caps).unwrap());
            assert_eq!(res.dim, 1);
        }
        let res = solve_relevance(&relevance_system(&part("2,1"), &caps).unwrap());
        assert_eq!(res.dim, 1);
        assert_eq!(res.support, vec![tm(&[&[1, 1], &[1, 0]])]);
        let res = solve_relevance(&relevance_system(&part("3,1,1,1"), &caps).unwrap());
        assert_eq!(res.dim, 1);
    }

    #[test]
    fn empty_system_is_free() {
        let sys = RelationSystem::empty(&comp("2,2"), &comp("2,1,1"), &Caps::default()).unwrap();
        let res = solve_relevance(&sys);
        assert_eq!(res.dim, sys.num_columns());
    }

    #[test]
    fn z_coefficient_examples() {
        let a = tm(&[&[1, 3], &[2, 0]]);
        assert!(!z_coefficient(&a, 1, 0).unwrap());
        assert!(z_coefficient(&a, 1, 1).unwrap());
        assert!(z_coefficient(&a, 2, 0).is_err());
    }

    #[test]
    fn z_coefficient_complementary_form() {
        for t in crate::partitions::enumerate_tables(&comp("4,2,3"), &comp("5,2,2")).unwrap() {
            let (alpha, beta) = (t.row_sums(), t.col_sums());
            for j in 0..t.rows() {
                for k in 0..t.cols() {
                    let below: u32 = (j + 1..t.rows()).map(|i| t.get(i, k)).sum();
                    let right: u32 = (k + 1..t.cols()).map(|l| t.get(j, l)).sum();
                    let z = (below + right + alpha.part(j) + beta.part(k) + (j + k) as u32) % 2 == 1;
                    assert_eq!(z_coefficient(&t, j, k).unwrap(), z);
                }
            }
        }
    }

    #[test]
    fn z_row_requires_nonzero_entry() {
        let a = tm(&[&[1, 3], &[2, 0]]);
        assert!(build_z_row(&a, 1, 1).is_err());
        assert!(build_z_row(&a, 0, 0).is_ok());
    }

    #[test]
    fn z_row_is_sum_of_corollary_rows() {
        let idx = TableIndex::new(&comp("4,2,3"), &comp("5,2,2"), &Caps::default()).unwrap();
        for a in idx.tables() {
            for j in 0..a.rows() {
                for k in 0..a.cols() {
                    if a.get(j, k) == 0 {
                        continue;
                    }
                    let mut sum = Gf2Vector::zeros(idx.len());
                    for i in 0..j {
                        sum.xor_assign(&row_vector(&idx, &r_corollary_row(a, i, j, k).unwrap().unwrap()).unwrap());
                    }
                    for l in 0..k {
                        sum.xor_assign(&row_vector(&idx, &c_corollary_row(a, l, k, j).unwrap().unwrap()).unwrap());
                    }
                    assert_eq!(sum, row_vector(&idx, &build_z_row(a, j, k).unwrap()).unwrap());
                }
            }
        }
    }

    #[test]
    fn dedup_is_order_independent() {
        let caps = Caps::default();
        let idx = TableIndex::new(&comp("4,2,3"), &comp("5,2,2"), &caps).unwrap();
        let mut all = Vec::new();
        for (i, j) in [(0, 1), (0, 2), (1, 2)] {
            all.extend(r_rows(&idx, i, j, &caps, Mutation::None).unwrap());
            all.extend(c_rows(&idx, i, j, &caps).unwrap());
        }
        let reference = normalized(all.clone()).unwrap();
        let mut rng = StdRng::seed_from_u64(3);
        for _ in 0..5 {
            all.shuffle(&mut rng);
            assert_eq!(normalized(all.clone()).unwrap(), reference);
        }
    }

    #[test]
    fn transpose_hom_basics() {
        let caps = Caps::default();
        let s = TableIndex::new(&comp("4,2"), &comp("3,3"), &caps).unwrap();
        let t = TableIndex::new(&comp("3,3"), &comp("4,2"), &caps).unwrap();
        assert!(transpose_hom(&s, &t, &Gf2Vector::zeros(s.len())).unwrap().is_zero());
        for i in 0..s.len() {
            let e = Gf2Vector::from_indices(s.len(), &[i]).unwrap();
            let out = transpose_hom(&s, &t, &e).unwrap();
            let j = t.position(&s.tables()[i].transpose()).unwrap();
            assert_eq!(out, Gf2Vector::from_indices(t.len(), &[j]).unwrap());
            assert_eq!(transpose_hom(&t, &s, &out).unwrap(), e);
        }
    }

    #[test]
    fn relevance_is_transpose_symmetric() {
        let caps = Caps::default();
        for r in 1..=6 {
            for lambda in partitions_of(r) {
                let lt = lambda.transpose();
                let sys = relevance_system(&lambda, &caps).unwrap();
                let dual = relevance_system(&lt, &caps).unwrap();
                let res = solve_relevance(&sys);
                assert_eq!(res.dim, solve_relevance(&dual).dim);
                for v in &res.basis {
                    assert!(dual.satisfied_by(&transpose_hom(sys.index(), dual.index(), v).unwrap()));
                }
            }
        }
    }

    #[test]
    fn dump_json_shape() {
        let sys = relevance_system(&part("2,1"), &Caps::default()).unwrap();
        let v: serde_json::Value = serde_json::to_value(&sys).unwrap();
        assert_eq!(v["tables"], serde_json::json!([[[1, 1], [1, 0]], [[2, 0], [0, 1]]]));
        assert_eq!(v["rows"].as_array().unwrap().len(), sys.rows().len());
        assert_eq!(v["provenance"].as_array().unwrap().len(), sys.rows().len());
    }
}
