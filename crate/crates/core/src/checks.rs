//! Invariant suite behind the `selftest` command. Each invariant compares two
//! independent computations and fails with a named assertion.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::partitions::{partitions_of, Partition, StaircaseFamily, TabMatrix};
use crate::relations::{relation_system_with, solve_relevance, Mutation};
use crate::staircase::{check_lift, verify_parity_theorem, z_row_audit, z_row_audit_on};
use crate::tabloids::{boundary_map, oracle_space, rho, BoundaryKind, OracleKind, TabloidContext, TabloidMap};
use crate::Caps;

pub const ORACLE_EQUIVALENCE: &str = "oracle_equivalence";
pub const COMPOSITION_CLOSED_FORM: &str = "composition_closed_form";
pub const ETA_DUALITY: &str = "eta_duality";
pub const Z_REDUNDANCY: &str = "z_redundancy";
pub const FLATTENING: &str = "flattening_consistency";
pub const PARITY_THEOREM: &str = "parity_theorem";

/// Largest degree the suite covers.
pub const SELFTEST_MAX_R: u32 = 6;

fn fail(name: &str, detail: String) -> Error {
    Error::assertion(name, detail)
}

/// The relation engine and the tabloid oracle give the same Rel space, and
/// the oracle's End space sits inside it with `1 <= dim End`.
pub fn check_oracle_equivalence(ctx: &TabloidContext, lambda: &Partition, mutation: Mutation) -> Result<()> {
    let caps = ctx.caps();
    let sys = relation_system_with(lambda.transpose().as_composition(), lambda.as_composition(), caps, mutation)?;
    let engine = solve_relevance(&sys);
    let rel = oracle_space(ctx, lambda, OracleKind::Rel)?;
    if rel.tables != sys.tables() || rel.basis != engine.basis {
        return Err(fail(
            ORACLE_EQUIVALENCE,
            format!("({lambda}): engine Rel dim {} vs oracle Rel dim {}", engine.dim, rel.dim()),
        ));
    }
    let end = oracle_space(ctx, lambda, OracleKind::End)?;
    if end.dim() == 0 || end.dim() > engine.dim {
        return Err(fail(
            ORACLE_EQUIVALENCE,
            format!("({lambda}): End dim {} outside 1..={}", end.dim(), engine.dim),
        ));
    }
    if let Some(v) = end.basis.iter().find(|v| !sys.satisfied_by(v)) {
        return Err(fail(ORACLE_EQUIVALENCE, format!("({lambda}): End element {} is not relevant", v.to_bit_string())));
    }
    Ok(())
}

fn weighted_sum(ctx: &TabloidContext, terms: Vec<(u32, TabMatrix)>, zero: TabloidMap) -> Result<TabloidMap> {
    let mut acc = zero;
    for (weight, t) in terms {
        if weight % 2 == 1 {
            acc = acc.add(&rho(ctx, &t)?)?;
        }
    }
    Ok(acc)
}

/// `rho[A] . phi^(i,j,1) = sum_l (a_il + 1) rho[A + E_il - E_jl]` and
/// `psi^(i,j,1) . rho[A] = sum_k (a_ki + 1) rho[A + E_ki - E_kj]`, as maps.
pub fn check_composition_closed_form(ctx: &TabloidContext, lambda: &Partition) -> Result<()> {
    let lt = lambda.transpose();
    let tables = crate::partitions::enumerate_tables(lt.as_composition(), lambda.as_composition())?;
    for a in &tables {
        let ra = rho(ctx, a)?;
        for i in 0..a.rows() {
            for j in i + 1..a.rows() {
                let phi = boundary_map(ctx, &lt, BoundaryKind::Phi, i, j, 1)?;
                let lhs = ra.compose(&phi)?;
                let terms = (0..a.cols())
                    .filter(|&l| a.get(j, l) != 0)
                    .map(|l| Ok((a.get(i, l) + 1, a.adjusted(&[(i, l, 1), (j, l, -1)])?)))
                    .collect::<Result<Vec<_>>>()?;
                let rhs = weighted_sum(ctx, terms, TabloidMap::zero(ctx, phi.domain(), ra.codomain())?)?;
                if lhs != rhs {
                    return Err(fail(COMPOSITION_CLOSED_FORM, format!("rho[{a}] . phi({},{},1)", i + 1, j + 1)));
                }
            }
        }
        for i in 0..a.cols() {
            for j in i + 1..a.cols() {
                let psi = boundary_map(ctx, lambda, BoundaryKind::Psi, i, j, 1)?;
                let lhs = psi.compose(&ra)?;
                let terms = (0..a.rows())
                    .filter(|&k| a.get(k, j) != 0)
                    .map(|k| Ok((a.get(k, i) + 1, a.adjusted(&[(k, i, 1), (k, j, -1)])?)))
                    .collect::<Result<Vec<_>>>()?;
                let rhs = weighted_sum(ctx, terms, TabloidMap::zero(ctx, ra.domain(), psi.codomain())?)?;
                if lhs != rhs {
                    return Err(fail(COMPOSITION_CLOSED_FORM, format!("psi({},{},1) . rho[{a}]", i + 1, j + 1)));
                }
            }
        }
    }
    Ok(())
}

/// Under the dual-basis identification the transpose of `rho[A]` is
/// `rho[A^T]`.
pub fn check_eta_duality(ctx: &TabloidContext, lambda: &Partition) -> Result<()> {
    let lt = lambda.transpose();
    for a in crate::partitions::enumerate_tables(lt.as_composition(), lambda.as_composition())? {
        if rho(ctx, &a)?.to_dense().transpose() != rho(ctx, &a.transpose())?.to_dense() {
            return Err(fail(ETA_DUALITY, format!("rho[{a}]")));
        }
    }
    Ok(())
}

/// Z rows of the relevance system lie in the R/C span and point downwards
/// in both orders.
pub fn check_z_redundancy(ctx: &TabloidContext, lambda: &Partition) -> Result<()> {
    let sys = relation_system_with(
        lambda.transpose().as_composition(),
        lambda.as_composition(),
        ctx.caps(),
        Mutation::None,
    )?;
    z_row_audit_on(&sys).map(|_| ()).map_err(|e| rename(e, Z_REDUNDANCY))
}

fn rename(e: Error, name: &str) -> Error {
    match e {
        Error::Assertion { detail, name: inner } => fail(name, format!("{inner}: {detail}")),
        other => other,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantOutcome {
    pub name: String,
    pub passed: bool,
    pub cases: usize,
    pub detail: Option<String>,
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SelftestReport {
    pub max_r: u32,
    pub invariants: Vec<InvariantOutcome>,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.invariants.iter().all(|o| o.passed)
    }

    pub fn first_failure(&self) -> Option<&InvariantOutcome> {
        self.invariants.iter().find(|o| !o.passed)
    }
}

fn run<T>(name: &str, cases: &[T], check: impl Fn(&T) -> Result<()>) -> Result<InvariantOutcome> {
    let start = Instant::now();
    let mut detail = None;
    for c in cases {
        match check(c) {
            Ok(()) => {}
            Err(Error::Assertion { name: n, detail: d }) => {
                detail = Some(if n == name { d } else { format!("{n}: {d}") });
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok(InvariantOutcome {
        name: name.to_string(),
        passed: detail.is_none(),
        cases: cases.len(),
        detail,
        elapsed_ms: start.elapsed().as_millis() as u64,
    })
}

enum ZCase {
    Full(Partition),
    Flat(StaircaseFamily),
}

/// Runs every invariant for all partitions of `r <= max_r` and all
/// staircase families of that size. `mutation` corrupts the relation engine
/// for fault-injection tests.
pub fn run_selftest(caps: &Caps, max_r: u32, mutation: Mutation) -> Result<SelftestReport> {
    let ctx = TabloidContext::new(*caps);
    let partitions: Vec<Partition> = (1..=max_r).flat_map(partitions_of).collect();
    let families = StaircaseFamily::all_up_to(max_r);
    let parity: Vec<StaircaseFamily> = families.iter().filter(|f| f.parity_holds()).cloned().collect();
    let z_cases: Vec<ZCase> = partitions
        .iter()
        .cloned()
        .map(ZCase::Full)
        .chain(parity.iter().cloned().map(ZCase::Flat))
        .collect();
    let invariants = vec![
        run(ORACLE_EQUIVALENCE, &partitions, |l| check_oracle_equivalence(&ctx, l, mutation))?,
        run(COMPOSITION_CLOSED_FORM, &partitions, |l| check_composition_closed_form(&ctx, l))?,
        run(ETA_DUALITY, &partitions, |l| check_eta_duality(&ctx, l))?,
        run(Z_REDUNDANCY, &z_cases, |case| match case {
            ZCase::Full(l) => check_z_redundancy(&ctx, l),
            ZCase::Flat(f) => z_row_audit(f, caps).map(|_| ()).map_err(|e| rename(e, Z_REDUNDANCY)),
        })?,
        run(FLATTENING, &families, |f| check_lift(f, caps).map(|_| ()).map_err(|e| rename(e, FLATTENING)))?,
        run(PARITY_THEOREM, &parity, |f| verify_parity_theorem(f, &ctx).map(|_| ()).map_err(|e| rename(e, PARITY_THEOREM)))?,
    ];
    Ok(SelftestReport { max_r, invariants })
}

/// One displayed example, recomputed.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ExampleOutcome {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

fn tables(rows: &[&[&[u32]]]) -> Vec<TabMatrix> {
    let mut out: Vec<TabMatrix> = rows.iter().map(|r| TabMatrix::from_rows(r).expect("literal table")).collect();
    out.sort();
    out
}

fn summed(ctx: &TabloidContext, ts: &[TabMatrix], zero: TabloidMap) -> Result<TabloidMap> {
    weighted_sum(ctx, ts.iter().map(|t| (1, t.clone())).collect(), zero)
}

/// The distribution example for `(3,1,1,1)` (lists and map identities) and
/// the classifier example on a 9 x 9 pattern.
pub fn paper_examples(ctx: &TabloidContext) -> Result<Vec<ExampleOutcome>> {
    let f = StaircaseFamily::new(3, 2, 3)?;
    let b = TabMatrix::from_rows(&[[2u32, 2], [1, 1]])?;
    let want_pi = tables(&[&[&[2, 2], &[1, 0], &[0, 1]], &[&[2, 2], &[0, 1], &[1, 0]]]);
    let want_iota = tables(&[
        &[&[2, 1, 1, 0], &[1, 0, 0, 1]],
        &[&[2, 1, 0, 1], &[1, 0, 1, 0]],
        &[&[2, 0, 1, 1], &[1, 1, 0, 0]],
    ]);
    let want_both = tables(&[
        &[&[2, 1, 1, 0], &[1, 0, 0, 0], &[0, 0, 0, 1]],
        &[&[2, 1, 0, 1], &[1, 0, 0, 0], &[0, 0, 1, 0]],
        &[&[2, 0, 1, 1], &[1, 0, 0, 0], &[0, 1, 0, 0]],
        &[&[2, 1, 1, 0], &[0, 0, 0, 1], &[1, 0, 0, 0]],
        &[&[2, 1, 0, 1], &[0, 0, 1, 0], &[1, 0, 0, 0]],
        &[&[2, 0, 1, 1], &[0, 1, 0, 0], &[1, 0, 0, 0]],
    ]);
    let pi = crate::staircase::pi_expand(&b, &f)?;
    let iota = crate::staircase::iota_expand(&b, &f)?;
    let both = crate::staircase::full_expansion(&b, &f)?;

    let pi_map = crate::staircase::pi_map(ctx, &f)?;
    let iota_map = crate::staircase::iota_map(ctx, &f)?;
    let rb = rho(ctx, &b)?;
    let left = rb.compose(&pi_map)?;
    let right = iota_map.compose(&rb)?;
    let whole = iota_map.compose(&left)?;
    let maps_ok = left == summed(ctx, &want_pi, TabloidMap::zero(ctx, left.domain(), left.codomain())?)?
        && right == summed(ctx, &want_iota, TabloidMap::zero(ctx, right.domain(), right.codomain())?)?
        && whole == summed(ctx, &want_both, TabloidMap::zero(ctx, whole.domain(), whole.codomain())?)?;

    let mut rows = vec![vec![0u32; 9]; 9];
    for row in rows.iter_mut().take(3) {
        row[0] = 1;
    }
    rows[3] = vec![1, 1, 1, 1, 1, 2, 0, 0, 0];
    rows[4] = vec![1, 1, 1, 0, 1, 0, 1, 0, 0];
    rows[5] = vec![1, 1, 1, 0, 1, 0, 0, 0, 0];
    rows[6] = vec![1, 1, 1, 0, 0, 0, 0, 0, 0];
    rows[7] = vec![1, 1, 0, 0, 0, 0, 0, 0, 0];
    rows[8][0] = 4;
    let report = crate::staircase::classify_structure(&TabMatrix::from_rows(&rows)?)?;
    let w5 = report.w_seq.iter().find(|w| w.j == 5).map(|w| w.columns.clone());

    Ok(vec![
        ExampleOutcome {
            name: "distribute_pi".into(),
            passed: pi == want_pi,
            detail: format!("{} expansions", pi.len()),
        },
        ExampleOutcome {
            name: "distribute_iota".into(),
            passed: iota == want_iota,
            detail: format!("{} expansions", iota.len()),
        },
        ExampleOutcome {
            name: "distribute_composite".into(),
            passed: both == want_both,
            detail: format!("{} expansions", both.len()),
        },
        ExampleOutcome {
            name: "distribute_maps".into(),
            passed: maps_ok,
            detail: "materialized identities on M(4,1,1) -> M(3,1,1,1)".into(),
        },
        ExampleOutcome {
            name: "classifier".into(),
            passed: report.k_a == Some(4) && report.j_a == Some(4) && w5.as_deref() == Some(&[7, 5][..]),
            detail: format!("k_A {:?}, j_A {:?}, w^5 {:?}", report.k_a, report.j_a, w5),
        },
    ])
}
