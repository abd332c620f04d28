//! Staircase-hook partitions `(a, m-1, ..., 2, 1^b)`: the flattened `m x m`
//! relation system, the distribution maps between flat and full tables, the
//! structural classifier and the theorem verifier.

use std::collections::BTreeMap;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gf2::{Echelon, Gf2Vector};
use crate::partitions::{order_compare, OrderMode, StaircaseFamily, TabMatrix};
use crate::relations::{build_z_row, relation_system, relevance_system, row_vector, solve_relevance, RelationSystem, RelevanceResult};
use crate::tabloids::{end_dimension_oracle, TabloidContext, TabloidMap};
use crate::Caps;

/// Distinct arrangements of a multiset given by per-value counts, in
/// lexicographic order.
fn arrangements(counts: &[u32]) -> Vec<Vec<usize>> {
    fn go(counts: &mut [u32], left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if left == 0 {
            out.push(cur.clone());
            return;
        }
        for v in 0..counts.len() {
            if counts[v] > 0 {
                counts[v] -= 1;
                cur.push(v);
                go(counts, left - 1, cur, out);
                cur.pop();
                counts[v] += 1;
            }
        }
    }
    let mut out = Vec::new();
    let total = counts.iter().sum::<u32>() as usize;
    go(&mut counts.to_vec(), total, &mut Vec::new(), &mut out);
    out
}

/// Tables `A` with `rho[B] . pi_alpha = sum rho[A]`: row `m` of `B` is
/// spread over `b'` unit rows.
pub fn pi_expand(b: &TabMatrix, family: &StaircaseFamily) -> Result<Vec<TabMatrix>> {
    if b.row_sums() != family.alpha {
        return Err(Error::Margin(format!("rows of {b} are not ({})", family.alpha)));
    }
    let m = family.m as usize;
    let last = b.row(m - 1).to_vec();
    let mut out: Vec<TabMatrix> = arrangements(&last)
        .into_iter()
        .map(|cols| {
            let mut rows: Vec<Vec<u32>> = (0..m - 1).map(|i| b.row(i).to_vec()).collect();
            for c in cols {
                let mut unit = vec![0; b.cols()];
                unit[c] = 1;
                rows.push(unit);
            }
            TabMatrix::from_rows(&rows).expect("rectangular")
        })
        .collect();
    out.sort();
    Ok(out)
}

/// Tables `A` with `iota_beta . rho[B] = sum rho[A]`: column `m` of `B` is
/// spread over `b` unit columns.
pub fn iota_expand(b: &TabMatrix, family: &StaircaseFamily) -> Result<Vec<TabMatrix>> {
    if b.col_sums() != family.beta {
        return Err(Error::Margin(format!("columns of {b} are not ({})", family.beta)));
    }
    let t = b.transpose();
    let mirrored = StaircaseFamily { alpha: family.beta.clone(), ..family.clone() };
    let mut out: Vec<TabMatrix> = pi_expand(&t, &mirrored)?.iter().map(TabMatrix::transpose).collect();
    out.sort();
    Ok(out)
}

/// The class `Omega(B)` of full tables over `(lambda', lambda)` that a flat
/// table expands to.
pub fn full_expansion(b: &TabMatrix, family: &StaircaseFamily) -> Result<Vec<TabMatrix>> {
    let mut out = Vec::new();
    for p in pi_expand(b, family)? {
        out.extend(iota_expand(&p, family)?);
    }
    out.sort();
    Ok(out)
}

/// `pi_alpha : M(lambda') -> M(alpha)`, merging the trailing singleton blocks.
pub fn pi_map(ctx: &TabloidContext, family: &StaircaseFamily) -> Result<TabloidMap> {
    let last = family.m as u8 - 1;
    TabloidMap::from_label_fn(ctx, family.lambda_t.as_composition(), &family.alpha, |labels| {
        vec![labels.iter().map(|&l| l.min(last)).collect()]
    })
}

/// `iota_beta : M(beta) -> M(lambda)`, splitting the last block into
/// singletons in every order.
pub fn iota_map(ctx: &TabloidContext, family: &StaircaseFamily) -> Result<TabloidMap> {
    let last = family.m as u8 - 1;
    let b = family.b as usize;
    TabloidMap::from_label_fn(ctx, &family.beta, family.lambda.as_composition(), |labels| {
        let members: Vec<usize> = (0..labels.len()).filter(|&e| labels[e] == last).collect();
        arrangements(&vec![1; b])
            .into_iter()
            .map(|order| {
                let mut out = labels.to_vec();
                for (e, slot) in members.iter().zip(order) {
                    out[*e] = last + slot as u8;
                }
                out
            })
            .collect()
    })
}

/// Relations `(i, j, 1)`, `i < j <= m`, on the flat tables `T = Tab(alpha, beta)`.
pub fn flat_relevance_system(family: &StaircaseFamily, caps: &Caps) -> Result<RelationSystem> {
    relation_system(&family.alpha, &family.beta, caps)
}

/// `A_0`: first row `(1, ..., 1, b)`, a staircase of ones, `a - m + 1` in the
/// bottom-left corner.
pub fn theorem_matrix(family: &StaircaseFamily) -> TabMatrix {
    let m = family.m as usize;
    let mut a = TabMatrix::zeros(m, m);
    for i in 0..m - 1 {
        for k in 0..m - i.max(1) {
            a.set(i, k, 1);
        }
    }
    a.set(0, m - 1, family.b);
    a.set(m - 1, 0, family.b_t());
    a
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WSequence {
    pub j: u32,
    pub columns: Vec<u32>,
}

/// Membership of a square table in the rim sets and their filtrations.
/// All indices are 1-based, as in the definitions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructureReport {
    pub in_tr: bool,
    pub in_tc: bool,
    /// Largest `i` with `A` in `TR_i`; `TR_1` stands for `TR` itself.
    pub tr_level: Option<u32>,
    pub tc_level: Option<u32>,
    pub k_a: Option<u32>,
    pub j_a: Option<u32>,
    pub w_seq: Vec<WSequence>,
}

impl StructureReport {
    /// `A` in `TR_{m-1}` and `TC_{m-1}`.
    pub fn in_top_filtration(&self, m: u32) -> bool {
        let top = m - 1;
        self.tr_level.is_some_and(|l| l >= top) && self.tc_level.is_some_and(|l| l >= top)
    }
}

struct Square<'a> {
    a: &'a TabMatrix,
    m: usize,
}

impl Square<'_> {
    fn at(&self, i: usize, k: usize) -> u32 {
        self.a.get(i - 1, k - 1)
    }

    fn tau(&self, i: usize) -> usize {
        self.m + 1 - i
    }

    fn in_tr(&self) -> bool {
        (1..self.m).all(|i| self.at(i, 1) == 1) && (2..=self.m).all(|k| self.at(self.m, k) == 0)
    }

    fn tr_level(&self) -> Option<usize> {
        if !self.in_tr() {
            return None;
        }
        let mut level = 1;
        for j in 2..self.m {
            let row = self.tau(j);
            let odd = (1..=self.m).filter(|&k| self.at(row, k) % 2 == 1).count();
            if odd != j {
                break;
            }
            level = j;
        }
        Some(level)
    }
}

/// Classifies an `m x m` table. Margins are not checked, so patterns that
/// are only partially specified can be classified too.
pub fn classify_structure(a: &TabMatrix) -> Result<StructureReport> {
    let m = a.rows();
    if m < 2 || a.cols() != m {
        return Err(Error::Shape(format!("expected a square table with m >= 2, got {}x{}", a.rows(), a.cols())));
    }
    let sq = Square { a, m };
    let t = a.transpose();
    let sq_t = Square { a: &t, m };
    let tr_level = sq.tr_level();
    let mut report = StructureReport {
        in_tr: tr_level.is_some(),
        in_tc: sq_t.in_tr(),
        tr_level: tr_level.map(|l| l as u32),
        tc_level: sq_t.tr_level().map(|l| l as u32),
        k_a: None,
        j_a: None,
        w_seq: Vec::new(),
    };
    let Some(i) = tr_level.filter(|&l| l >= 2) else {
        return Ok(report);
    };
    let in_k = |k: usize| (sq.tau(i)..=sq.tau(k)).all(|u| sq.at(u, k) == 1);
    let k_a = (2..=i + 1).find(|&k| k > i || !in_k(k)).expect("range ends past i");
    report.k_a = Some(k_a as u32);
    if k_a <= i {
        report.j_a = (k_a..=i).find(|&j| sq.at(sq.tau(j), k_a) == 0).map(|j| j as u32);
        report.w_seq = (k_a..=i)
            .map(|j| WSequence {
                j: j as u32,
                columns: (k_a..=m).rev().filter(|&w| sq.at(sq.tau(j), w) == 1).map(|w| w as u32).collect(),
            })
            .collect();
    }
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AuditStatus {
    Pass,
    Fail,
    Skipped,
}

impl AuditStatus {
    fn of(ok: bool) -> Self {
        if ok {
            AuditStatus::Pass
        } else {
            AuditStatus::Fail
        }
    }
}

pub const AUDIT_BOTTOM_RIGHT: &str = "bottom_right_vanishing";
pub const AUDIT_OUTSIDE_RIM: &str = "outside_rim";
pub const AUDIT_RIM: &str = "rim";
pub const AUDIT_TR_MINUS_TC: &str = "tr_minus_tc";
pub const AUDIT_FILTRATION: &str = "top_filtration";
pub const AUDIT_SUPPORT_NONEMPTY: &str = "support_nonempty";

/// The structural statements checked on the support of the solved flat
/// system. An empty support is itself reported as a failure, since the
/// identity always contributes.
pub fn structural_lemma_audit(family: &StaircaseFamily, rel: &RelevanceResult) -> Result<BTreeMap<String, AuditStatus>> {
    let m = family.m as usize;
    let mut out = BTreeMap::new();
    out.insert(AUDIT_SUPPORT_NONEMPTY.to_string(), AuditStatus::of(!rel.support.is_empty()));
    let reports = rel
        .support
        .iter()
        .map(classify_structure)
        .collect::<Result<Vec<_>>>()?;
    let nonempty = !rel.support.is_empty();
    let all = |f: &dyn Fn(&TabMatrix, &StructureReport) -> bool| {
        AuditStatus::of(nonempty && rel.support.iter().zip(&reports).all(|(a, r)| f(a, r)))
    };
    out.insert(AUDIT_BOTTOM_RIGHT.into(), all(&|a, _| a.get(m - 1, m - 1) == 0));
    out.insert(
        AUDIT_OUTSIDE_RIM.into(),
        all(&|a, _| {
            let inner = 1..m - 1;
            !(inner.clone().any(|j| a.get(j, m - 1) != 0) && inner.clone().any(|k| a.get(m - 1, k) != 0))
        }),
    );
    out.insert(AUDIT_RIM.into(), all(&|_, r| r.in_tr || r.in_tc));
    out.insert(AUDIT_TR_MINUS_TC.into(), all(&|_, r| !(r.in_tr && !r.in_tc)));
    out.insert(AUDIT_FILTRATION.into(), all(&|_, r| r.in_top_filtration(family.m)));
    Ok(out)
}

pub const CHECK_REL_DIM: &str = "rel_dim_one";
pub const CHECK_SUPPORT: &str = "support_is_theorem_matrix";
pub const CHECK_END_DIM: &str = "end_dim_one";

/// Outcome of analyzing one staircase family.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyReport {
    pub a: u32,
    pub m: u32,
    pub b: u32,
    pub r: u32,
    pub parity: bool,
    pub num_tables: usize,
    pub rel_dim: usize,
    pub end_dim: Option<usize>,
    pub support: Vec<Vec<Vec<u32>>>,
    pub audits: BTreeMap<String, AuditStatus>,
    pub elapsed_ms: u64,
}

impl FamilyReport {
    pub fn failures(&self) -> Vec<&str> {
        self.audits
            .iter()
            .filter(|(_, s)| **s == AuditStatus::Fail)
            .map(|(k, _)| k.as_str())
            .collect()
    }

    /// Turns the first failed check into an assertion error.
    pub fn ensure_passed(&self) -> Result<()> {
        match self.failures().first() {
            None => Ok(()),
            Some(name) => Err(Error::assertion(
                name,
                format!("family ({}, {}, {}): support {:?}", self.a, self.m, self.b, self.support),
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct AnalyzeOptions {
    /// Run the materialized End oracle when the bit budget admits it.
    pub oracle: bool,
}

impl Default for AnalyzeOptions {
    fn default() -> Self {
        AnalyzeOptions { oracle: true }
    }
}

/// Solves the flat system and records every check. For families outside
/// the parity condition the theorem checks and audits are skipped and the
/// numbers are only reported.
pub fn analyze_family(family: &StaircaseFamily, ctx: &TabloidContext, opts: AnalyzeOptions) -> Result<FamilyReport> {
    let start = Instant::now();
    let sys = flat_relevance_system(family, ctx.caps())?;
    let rel = solve_relevance(&sys);
    let end_dim = if opts.oracle {
        match end_dimension_oracle(ctx, &family.lambda) {
            Ok(d) => Some(d),
            Err(Error::CapExceeded(_)) => None,
            Err(e) => return Err(e),
        }
    } else {
        None
    };
    let parity = family.parity_holds();
    let mut audits = if parity {
        structural_lemma_audit(family, &rel)?
    } else {
        [AUDIT_SUPPORT_NONEMPTY, AUDIT_BOTTOM_RIGHT, AUDIT_OUTSIDE_RIM, AUDIT_RIM, AUDIT_TR_MINUS_TC, AUDIT_FILTRATION]
            .into_iter()
            .map(|k| (k.to_string(), AuditStatus::Skipped))
            .collect()
    };
    let skip_unless = |cond: bool| if parity { AuditStatus::of(cond) } else { AuditStatus::Skipped };
    audits.insert(CHECK_REL_DIM.into(), skip_unless(rel.dim == 1));
    audits.insert(CHECK_SUPPORT.into(), skip_unless(rel.support == [theorem_matrix(family)]));
    audits.insert(
        CHECK_END_DIM.into(),
        match end_dim {
            Some(d) => skip_unless(d == 1),
            None => AuditStatus::Skipped,
        },
    );
    Ok(FamilyReport {
        a: family.a,
        m: family.m,
        b: family.b,
        r: family.r,
        parity,
        num_tables: sys.num_columns(),
        rel_dim: rel.dim,
        end_dim,
        support: rel.support.iter().map(TabMatrix::to_rows).collect(),
        audits,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

/// Checks that `End(Sp(lambda))` is one-dimensional for a family with
/// `a - m = b (mod 2)`. Refuses other families; any failed check is an error.
pub fn verify_parity_theorem(family: &StaircaseFamily, ctx: &TabloidContext) -> Result<FamilyReport> {
    if !family.parity_holds() {
        return Err(Error::Parity {
            a: family.a,
            m: family.m,
            b: family.b,
        });
    }
    let report = analyze_family(family, ctx, AnalyzeOptions::default())?;
    report.ensure_passed()?;
    Ok(report)
}

/// Lifts a flat coefficient vector to `Tab(lambda', lambda)` by copying each
/// coefficient onto its expansion class.
pub fn lift_flat_solution(
    family: &StaircaseFamily,
    flat: &RelationSystem,
    full: &RelationSystem,
    x: &Gf2Vector,
) -> Result<Gf2Vector> {
    let mut out = Gf2Vector::zeros(full.num_columns());
    for i in x.ones() {
        for a in full_expansion(&flat.tables()[i], family)? {
            let pos = full
                .index()
                .position(&a)
                .ok_or_else(|| Error::Margin(format!("{a} is not a full table")))?;
            out.set(pos, true);
        }
    }
    Ok(out)
}

/// Checks that each flat solution lifts to a solution of the full system and
/// that both spaces have equal dimension.
pub fn check_lift(family: &StaircaseFamily, caps: &Caps) -> Result<usize> {
    let flat = flat_relevance_system(family, caps)?;
    let full = relevance_system(&family.lambda, caps)?;
    let flat_sol = solve_relevance(&flat);
    let full_dim = solve_relevance(&full).dim;
    if flat_sol.dim != full_dim {
        return Err(Error::assertion(
            "flattening_consistency",
            format!("flat dim {} vs full dim {full_dim} for {}", flat_sol.dim, family.lambda),
        ));
    }
    for v in &flat_sol.basis {
        if !full.satisfied_by(&lift_flat_solution(family, &flat, &full, v)?) {
            return Err(Error::assertion("lift", format!("lifted flat solution fails for {}", family.lambda)));
        }
    }
    Ok(full_dim)
}

/// Number of Z rows examined by [`z_row_audit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ZAudit {
    pub rows: usize,
}

/// Every Z row of the flat system lies in the span of the R and C rows, and
/// every other table it references precedes its generator in both orders.
pub fn z_row_audit(family: &StaircaseFamily, caps: &Caps) -> Result<ZAudit> {
    let sys = flat_relevance_system(family, caps)?;
    z_row_audit_on(&sys)
}

pub fn z_row_audit_on(sys: &RelationSystem) -> Result<ZAudit> {
    let mut span = Echelon::new(sys.num_columns());
    for v in sys.row_vectors() {
        span.insert(v);
    }
    let mut rows = 0;
    for a in sys.tables() {
        for j in 0..a.rows() {
            for k in 0..a.cols() {
                if a.get(j, k) == 0 {
                    continue;
                }
                let targets = build_z_row(a, j, k)?;
                rows += 1;
                let v = row_vector(sys.index(), &targets)?;
                if !span.contains(&v) {
                    return Err(Error::assertion("z_redundancy", format!("Z({},{}) of {a}", j + 1, k + 1)));
                }
                for t in targets.iter().filter(|t| *t != a) {
                    for mode in [OrderMode::Row, OrderMode::Col] {
                        if order_compare(t, a, mode)? != std::cmp::Ordering::Less {
                            return Err(Error::assertion(
                                "z_ordering",
                                format!("{t} does not precede {a} in {mode:?} order"),
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(ZAudit { rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::enumerate_tables;
    use crate::tabloids::rho;

    fn fam(a: u32, m: u32, b: u32) -> StaircaseFamily {
        StaircaseFamily::new(a, m, b).unwrap()
    }

    fn tm(rows: &[&[u32]]) -> TabMatrix {
        TabMatrix::from_rows(rows).unwrap()
    }

    #[test]
    fn distribute_example() {
        let f = fam(3, 2, 3);
        let b = tm(&[&[2, 2], &[1, 1]]);
        assert_eq!(
            pi_expand(&b, &f).unwrap(),
            vec![tm(&[&[2, 2], &[0, 1], &[1, 0]]), tm(&[&[2, 2], &[1, 0], &[0, 1]])]
        );
        let iota: Vec<Vec<u32>> = iota_expand(&b, &f).unwrap().iter().map(|t| t.row(0).to_vec()).collect();
        assert_eq!(iota, vec![vec![2, 0, 1, 1], vec![2, 1, 0, 1], vec![2, 1, 1, 0]]);
        assert_eq!(full_expansion(&b, &f).unwrap().len(), 6);
        assert!(pi_expand(&tm(&[&[3, 3]]), &f).is_err());
        assert!(iota_expand(&tm(&[&[4, 2]]), &f).is_err());
    }

    #[test]
    fn expansion_counts_are_multinomial() {
        let f = fam(4, 3, 3);
        for b in enumerate_tables(&f.alpha, &f.beta).unwrap() {
            let row = b.row(2);
            let fact = |n: u32| (1..=n as u64).product::<u64>();
            let expected = fact(row.iter().sum()) / row.iter().map(|&v| fact(v)).product::<u64>();
            assert_eq!(pi_expand(&b, &f).unwrap().len() as u64, expected);
        }
    }

    #[test]
    fn materialized_maps_match_expansions() {
        let ctx = TabloidContext::default();
        let f = fam(3, 2, 3);
        let pi = pi_map(&ctx, &f).unwrap();
        let iota = iota_map(&ctx, &f).unwrap();
        for b in enumerate_tables(&f.alpha, &f.beta).unwrap() {
            let rb = rho(&ctx, &b).unwrap();
            let lhs = iota.compose(&rb.compose(&pi).unwrap()).unwrap();
            let mut rhs = TabloidMap::zero(&ctx, f.lambda_t.as_composition(), f.lambda.as_composition()).unwrap();
            for a in full_expansion(&b, &f).unwrap() {
                rhs = rhs.add(&rho(&ctx, &a).unwrap()).unwrap();
            }
            assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn theorem_matrices() {
        assert_eq!(theorem_matrix(&fam(3, 2, 3)), tm(&[&[1, 3], &[2, 0]]));
        assert_eq!(theorem_matrix(&fam(5, 2, 2)), tm(&[&[1, 2], &[4, 0]]));
        for f in StaircaseFamily::all_up_to(14) {
            let a0 = theorem_matrix(&f);
            assert!(a0.has_margins(&f.alpha, &f.beta), "{a0}");
            assert!(classify_structure(&a0).unwrap().in_top_filtration(f.m));
        }
    }

    #[test]
    fn worked_classifier_example() {
        let mut rows = vec![vec![0u32; 9]; 9];
        for row in rows.iter_mut().take(3) {
            row[0] = 1;
        }
        rows[3] = vec![1, 1, 1, 1, 1, 2, 0, 0, 0];
        rows[4] = vec![1, 1, 1, 0, 1, 0, 1, 0, 0];
        rows[5] = vec![1, 1, 1, 0, 1, 0, 0, 0, 0];
        rows[6] = vec![1, 1, 1, 0, 0, 0, 0, 0, 0];
        rows[7] = vec![1, 1, 0, 0, 0, 0, 0, 0, 0];
        rows[8][0] = 3;
        let r = classify_structure(&TabMatrix::from_rows(&rows).unwrap()).unwrap();
        assert_eq!(r.tr_level, Some(5));
        assert_eq!(r.k_a, Some(4));
        assert_eq!(r.j_a, Some(4));
        let w5 = r.w_seq.iter().find(|w| w.j == 5).unwrap();
        assert_eq!(w5.columns, vec![7, 5]);
        for w in &r.w_seq {
            assert_eq!(w.columns.len() as u32, w.j - 4 + 1);
        }
        rows[8][1] = 1;
        assert!(!classify_structure(&TabMatrix::from_rows(&rows).unwrap()).unwrap().in_tr);
    }

    #[test]
    fn murphy_and_small_cases() {
        let caps = Caps::default();
        let rel = solve_relevance(&flat_relevance_system(&fam(2, 2, 1), &caps).unwrap());
        assert_eq!(rel.dim, 1);
        assert_eq!(rel.support, vec![tm(&[&[1, 1], &[1, 0]])]);
        let rel = solve_relevance(&flat_relevance_system(&fam(3, 2, 3), &caps).unwrap());
        assert_eq!(rel.support, vec![tm(&[&[1, 3], &[2, 0]])]);
    }

    #[test]
    fn verify_examples() {
        let ctx = TabloidContext::default();
        for (a, m, b) in [(3, 2, 3), (4, 3, 1), (5, 3, 2)] {
            let r = verify_parity_theorem(&fam(a, m, b), &ctx).unwrap();
            assert_eq!(r.rel_dim, 1);
            assert!(r.audits.values().all(|s| *s != AuditStatus::Fail));
        }
        assert!(matches!(verify_parity_theorem(&fam(4, 2, 1), &ctx), Err(Error::Parity { .. })));
    }

    #[test]
    fn empty_support_is_flagged() {
        let f = fam(3, 2, 3);
        let rel = RelevanceResult {
            dim: 0,
            basis: vec![],
            support_indices: vec![],
            support: vec![],
        };
        let audits = structural_lemma_audit(&f, &rel).unwrap();
        assert!(audits.values().all(|s| *s == AuditStatus::Fail));
    }

    #[test]
    fn flat_matches_full_up_to_8() {
        let caps = Caps::default();
        for f in StaircaseFamily::all_up_to(8) {
            check_lift(&f, &caps).unwrap();
        }
    }

    #[test]
    fn z_rows_small_families() {
        let caps = Caps::default();
        for f in StaircaseFamily::all_up_to(8).iter().filter(|f| f.parity_holds()) {
            assert!(z_row_audit(f, &caps).unwrap().rows > 0);
        }
    }
}
