//! Permutation modules on tabloid bases and the homomorphisms between them.
//!
//! A tabloid of shape `alpha` is stored as a label vector: element `e` of
//! `{1..r}` carries the index of the block that contains it. Labels are
//! packed four bits per element into a `u64`, so `r <= 16` and at most 16
//! blocks are supported.
//!
//! Maps are held column-sparse: column `x` lists the codomain tabloids that
//! occur with coefficient 1 in the image of domain tabloid `x`. Matrix
//! convention: rows index the codomain, columns the domain, so `g . f`
//! corresponds to `G * F`.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{sparse_nullspace, Gf2Matrix, Gf2Vector};
use crate::partitions::{enumerate_tables_capped, Composition, Partition, TabMatrix};
use crate::Caps;

const MAX_ELEMENTS: usize = 16;
const MAX_BLOCKS: usize = 16;

/// An ordered sequence of disjoint blocks covering `{1..r}`; each block is
/// sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Tabloid {
    blocks: Vec<Vec<u32>>,
}

impl Tabloid {
    /// Validates that the blocks partition `{1..r}` and sorts each block.
    pub fn new(blocks: Vec<Vec<u32>>) -> Result<Self> {
        let r: usize = blocks.iter().map(Vec::len).sum();
        let mut seen = vec![false; r];
        for &e in blocks.iter().flatten() {
            let e = e as usize;
            if e == 0 || e > r || seen[e - 1] {
                return Err(Error::Shape(format!("blocks {blocks:?} do not partition 1..={r}")));
            }
            seen[e - 1] = true;
        }
        let blocks = blocks
            .into_iter()
            .map(|mut b| {
                b.sort_unstable();
                b
            })
            .collect();
        Ok(Tabloid { blocks })
    }

    pub fn blocks(&self) -> &[Vec<u32>] {
        &self.blocks
    }

    pub fn shape(&self) -> Composition {
        Composition::new(self.blocks.iter().map(|b| b.len() as u32).collect())
    }

    pub fn degree(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    /// Block index of each element, 0-based.
    pub fn labels(&self) -> Vec<u8> {
        let mut labels = vec![0u8; self.degree()];
        for (b, block) in self.blocks.iter().enumerate() {
            for &e in block {
                labels[e as usize - 1] = b as u8;
            }
        }
        labels
    }

    fn from_labels(labels: &[u8], num_blocks: usize) -> Tabloid {
        let mut blocks = vec![Vec::new(); num_blocks];
        for (e, &l) in labels.iter().enumerate() {
            blocks[l as usize].push(e as u32 + 1);
        }
        Tabloid { blocks }
    }
}

impl fmt::Display for Tabloid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, b) in self.blocks.iter().enumerate() {
            if i > 0 {
                f.write_str("|")?;
            }
            f.write_str("{")?;
            for (k, e) in b.iter().enumerate() {
                if k > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str("}")?;
        }
        f.write_str(")")
    }
}

#[inline]
fn pack(labels: &[u8]) -> u64 {
    labels
        .iter()
        .enumerate()
        .fold(0u64, |k, (e, &l)| k | (l as u64) << (4 * e))
}

#[inline]
fn unpack(key: u64, r: usize) -> Vec<u8> {
    (0..r).map(|e| (key >> (4 * e) & 0xf) as u8).collect()
}

fn multinomial(parts: &[u32]) -> u128 {
    let mut total = 0u32;
    let mut acc = 1u128;
    for &p in parts {
        for k in 1..=p {
            total += 1;
            acc = acc * total as u128 / k as u128;
        }
    }
    acc
}

/// Dimension of `M(alpha)`, the multinomial `r! / prod alpha_i!`.
pub fn module_dimension(alpha: &Composition) -> u128 {
    multinomial(alpha.parts())
}

/// The canonically ordered tabloid basis of `M(alpha)`.
#[derive(Debug)]
pub struct TabloidBasis {
    alpha: Composition,
    r: usize,
    keys: Vec<u64>,
    index: HashMap<u64, u32>,
}

impl TabloidBasis {
    /// Enumerates all tabloids of shape `alpha`, lexicographically ordered on
    /// the concatenation of their sorted blocks.
    pub fn new(alpha: &Composition, caps: &Caps) -> Result<Self> {
        let r = alpha.degree() as usize;
        let nb = alpha.num_parts();
        if r > MAX_ELEMENTS || nb > MAX_BLOCKS {
            return Err(Error::CapExceeded(format!(
                "tabloids of shape ({alpha}) need r <= {MAX_ELEMENTS} and at most {MAX_BLOCKS} blocks"
            )));
        }
        let dim = module_dimension(alpha);
        if dim.saturating_mul(dim) > caps.max_bits as u128 {
            return Err(Error::CapExceeded(format!(
                "dim M({alpha}) = {dim} exceeds the bit budget {}",
                caps.max_bits
            )));
        }
        let mut keys = Vec::with_capacity(dim as usize);
        let mut labels = vec![u8::MAX; r];
        fill_block(alpha.parts(), 0, alpha.part(0) as usize, 0, &mut labels, &mut keys);
        debug_assert_eq!(keys.len() as u128, dim);
        let index = keys.iter().enumerate().map(|(i, &k)| (k, i as u32)).collect();
        Ok(TabloidBasis {
            alpha: alpha.clone(),
            r,
            keys,
            index,
        })
    }

    pub fn alpha(&self) -> &Composition {
        &self.alpha
    }

    pub fn degree(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn unrank(&self, i: usize) -> Tabloid {
        Tabloid::from_labels(&self.labels(i), self.alpha.num_parts())
    }

    pub fn rank(&self, x: &Tabloid) -> Option<usize> {
        if x.shape() != self.alpha {
            return None;
        }
        self.index_of_labels(&x.labels())
    }

    pub fn labels(&self, i: usize) -> Vec<u8> {
        unpack(self.keys[i], self.r)
    }

    pub fn index_of_labels(&self, labels: &[u8]) -> Option<usize> {
        if labels.len() != self.r {
            return None;
        }
        self.index.get(&pack(labels)).map(|&i| i as usize)
    }

    fn index_of_key(&self, key: u64) -> usize {
        self.index[&key] as usize
    }

    pub fn elements(&self) -> impl Iterator<Item = Tabloid> + '_ {
        (0..self.len()).map(|i| self.unrank(i))
    }
}

fn fill_block(
    alpha: &[u32],
    block: usize,
    need: usize,
    min_elem: usize,
    labels: &mut [u8],
    out: &mut Vec<u64>,
) {
    if need == 0 {
        if block + 1 >= alpha.len() {
            out.push(pack(labels));
        } else {
            fill_block(alpha, block + 1, alpha[block + 1] as usize, 0, labels, out);
        }
        return;
    }
    let r = labels.len();
    for e in min_elem..r {
        if labels[e] == u8::MAX {
            labels[e] = block as u8;
            fill_block(alpha, block, need - 1, e + 1, labels, out);
            labels[e] = u8::MAX;
        }
    }
}

/// Checks that `g` (images of `1..=r`, 1-based) is a permutation of `{1..r}`.
fn check_permutation(g: &[u32], r: usize) -> Result<()> {
    if g.len() != r {
        return Err(Error::InvalidPermutation(format!("{g:?} has {} entries, need {r}", g.len())));
    }
    let mut seen = vec![false; r];
    for &x in g {
        let x = x as usize;
        if x == 0 || x > r || seen[x - 1] {
            return Err(Error::InvalidPermutation(format!("{g:?}")));
        }
        seen[x - 1] = true;
    }
    Ok(())
}

/// Place action: every entry `e` of `x` is replaced by `g(e)`.
pub fn sym_action(g: &[u32], x: &Tabloid) -> Result<Tabloid> {
    check_permutation(g, x.degree())?;
    Tabloid::new(
        x.blocks
            .iter()
            .map(|b| b.iter().map(|&e| g[e as usize - 1]).collect())
            .collect(),
    )
}

fn act_on_labels(g: &[u32], labels: &[u8]) -> Vec<u8> {
    let mut out = vec![0u8; labels.len()];
    for (e, &l) in labels.iter().enumerate() {
        out[g[e] as usize - 1] = l;
    }
    out
}

/// Shared cache of tabloid bases under a fixed set of caps.
pub struct TabloidContext {
    caps: Caps,
    bases: Mutex<HashMap<Composition, Arc<TabloidBasis>>>,
}

impl TabloidContext {
    pub fn new(caps: Caps) -> Self {
        TabloidContext {
            caps,
            bases: Mutex::new(HashMap::new()),
        }
    }

    pub fn caps(&self) -> &Caps {
        &self.caps
    }

    pub fn basis(&self, alpha: &Composition) -> Result<Arc<TabloidBasis>> {
        if let Some(b) = self.bases.lock().expect("basis cache poisoned").get(alpha) {
            return Ok(Arc::clone(b));
        }
        let b = Arc::new(TabloidBasis::new(alpha, &self.caps)?);
        self.bases
            .lock()
            .expect("basis cache poisoned")
            .entry(alpha.clone())
            .or_insert_with(|| Arc::clone(&b));
        Ok(b)
    }

    fn check_map_budget(&self, domain: &Composition, codomain: &Composition) -> Result<()> {
        let bits = module_dimension(domain).saturating_mul(module_dimension(codomain));
        if bits > self.caps.max_bits as u128 {
            return Err(Error::CapExceeded(format!(
                "M({domain}) -> M({codomain}) needs {bits} bits, budget {}",
                self.caps.max_bits
            )));
        }
        Ok(())
    }
}

impl Default for TabloidContext {
    fn default() -> Self {
        TabloidContext::new(Caps::default())
    }
}

/// A GF(2)-linear map between permutation modules, stored by columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TabloidMap {
    domain: Composition,
    codomain: Composition,
    rows: usize,
    columns: Vec<Vec<u32>>,
}

/// Sorts and cancels repeated indices in pairs.
fn reduce_mod2(v: &mut Vec<u32>) {
    v.sort_unstable();
    let mut out = 0;
    let mut i = 0;
    while i < v.len() {
        let mut j = i;
        while j < v.len() && v[j] == v[i] {
            j += 1;
        }
        if (j - i) % 2 == 1 {
            v[out] = v[i];
            out += 1;
        }
        i = j;
    }
    v.truncate(out);
}

impl TabloidMap {
    pub fn zero(ctx: &TabloidContext, domain: &Composition, codomain: &Composition) -> Result<Self> {
        let d = ctx.basis(domain)?;
        let c = ctx.basis(codomain)?;
        Ok(TabloidMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            rows: c.len(),
            columns: vec![Vec::new(); d.len()],
        })
    }

    pub fn identity(ctx: &TabloidContext, alpha: &Composition) -> Result<Self> {
        let b = ctx.basis(alpha)?;
        Ok(TabloidMap {
            domain: alpha.clone(),
            codomain: alpha.clone(),
            rows: b.len(),
            columns: (0..b.len() as u32).map(|i| vec![i]).collect(),
        })
    }

    /// Builds a map from a function giving the image of each domain tabloid
    /// as a list of codomain label vectors (summed mod 2).
    pub fn from_label_fn(
        ctx: &TabloidContext,
        domain: &Composition,
        codomain: &Composition,
        image: impl Fn(&[u8]) -> Vec<Vec<u8>> + Sync,
    ) -> Result<Self> {
        ctx.check_map_budget(domain, codomain)?;
        let d = ctx.basis(domain)?;
        let c = ctx.basis(codomain)?;
        let columns = (0..d.len())
            .into_par_iter()
            .map(|x| {
                let mut col: Vec<u32> = image(&d.labels(x))
                    .iter()
                    .map(|l| {
                        c.index_of_labels(l)
                            .unwrap_or_else(|| panic!("image label {l:?} is not a tabloid of shape ({codomain})"))
                            as u32
                    })
                    .collect();
                reduce_mod2(&mut col);
                col
            })
            .collect();
        Ok(TabloidMap {
            domain: domain.clone(),
            codomain: codomain.clone(),
            rows: c.len(),
            columns,
        })
    }

    pub fn domain(&self) -> &Composition {
        &self.domain
    }

    pub fn codomain(&self) -> &Composition {
        &self.codomain
    }

    pub fn domain_dim(&self) -> usize {
        self.columns.len()
    }

    pub fn codomain_dim(&self) -> usize {
        self.rows
    }

    pub fn column(&self, x: usize) -> &[u32] {
        &self.columns[x]
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn to_dense(&self) -> Gf2Matrix {
        let mut m = Gf2Matrix::zeros(self.rows, self.columns.len());
        for (x, col) in self.columns.iter().enumerate() {
            for &y in col {
                m.set(y as usize, x, true);
            }
        }
        m
    }

    /// `self . inner`: apply `inner` first.
    pub fn compose(&self, inner: &TabloidMap) -> Result<TabloidMap> {
        if inner.codomain != self.domain {
            return Err(Error::Shape(format!(
                "cannot compose M({}) -> M({}) after M({}) -> M({})",
                self.domain, self.codomain, inner.domain, inner.codomain
            )));
        }
        let columns = inner
            .columns
            .par_iter()
            .map(|mid| {
                let mut col: Vec<u32> = mid
                    .iter()
                    .flat_map(|&y| self.columns[y as usize].iter().copied())
                    .collect();
                reduce_mod2(&mut col);
                col
            })
            .collect();
        Ok(TabloidMap {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            rows: self.rows,
            columns,
        })
    }

    pub fn add(&self, other: &TabloidMap) -> Result<TabloidMap> {
        if self.domain != other.domain || self.codomain != other.codomain {
            return Err(Error::Shape("sum of maps between different modules".into()));
        }
        let columns = self
            .columns
            .iter()
            .zip(&other.columns)
            .map(|(a, b)| {
                let mut col: Vec<u32> = a.iter().chain(b).copied().collect();
                reduce_mod2(&mut col);
                col
            })
            .collect();
        Ok(TabloidMap {
            columns,
            ..self.clone()
        })
    }

    /// Nonzero entries as `(codomain index, domain index)` pairs.
    pub fn entries(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(x, col)| col.iter().map(move |&y| (y, x as u32)))
    }
}

/// `rho[A] : M(alpha) -> M(beta)` where `alpha`, `beta` are the row and
/// column sums of `A` (zero parts included).
///
/// The image of a tabloid `x` is the sum over every way of splitting each
/// block `x_i` into pieces of sizes `a_i1, ..., a_iC`, where output block
/// `j` collects the pieces `i -> j`.
pub fn rho(ctx: &TabloidContext, a: &TabMatrix) -> Result<TabloidMap> {
    let alpha = a.row_sums();
    let beta = a.col_sums();
    let (rows, cols) = (a.rows(), a.cols());
    let caps: Vec<u32> = a.entries().to_vec();
    TabloidMap::from_label_fn(ctx, &alpha, &beta, |labels| {
        let mut out = Vec::new();
        let mut cap = caps.clone();
        let mut target = vec![0u8; labels.len()];
        split(labels, 0, cols, &mut cap, &mut target, &mut out);
        debug_assert!(rows == 0 || labels.iter().all(|&l| (l as usize) < rows));
        out
    })
}

fn split(
    labels: &[u8],
    e: usize,
    cols: usize,
    cap: &mut [u32],
    target: &mut [u8],
    out: &mut Vec<Vec<u8>>,
) {
    if e == labels.len() {
        out.push(target.to_vec());
        return;
    }
    let i = labels[e] as usize;
    for j in 0..cols {
        let c = &mut cap[i * cols + j];
        if *c > 0 {
            *c -= 1;
            target[e] = j as u8;
            split(labels, e + 1, cols, cap, target, out);
            cap[i * cols + j] += 1;
        }
    }
}

/// Dense matrix of `rho[A]`.
pub fn rho_matrix(ctx: &TabloidContext, a: &TabMatrix) -> Result<Gf2Matrix> {
    Ok(rho(ctx, a)?.to_dense())
}

/// The image `rho[A](x)` of the tabloid with label vector `labels`, as
/// sorted codomain indices.
pub fn rho_image(ctx: &TabloidContext, a: &TabMatrix, labels: &[u8]) -> Result<Vec<u32>> {
    let codomain = ctx.basis(&a.col_sums())?;
    let mut images = Vec::new();
    let mut cap = a.entries().to_vec();
    let mut target = vec![0u8; labels.len()];
    split(labels, 0, a.cols(), &mut cap, &mut target, &mut images);
    let mut out: Vec<u32> = images
        .iter()
        .map(|l| codomain.index_of_labels(l).expect("split preserves the column margins") as u32)
        .collect();
    reduce_mod2(&mut out);
    Ok(out)
}

/// Which boundary map to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BoundaryKind {
    /// `M(lambda^(i,j,s)) -> M(lambda)`.
    Phi,
    /// `M(lambda) -> M(lambda^(i,j,s))`.
    Psi,
}

/// The table indexing a boundary map, or `None` for the sanctioned zero
/// map when `j` is past the last part. Indices are 0-based with `i < j`.
pub fn boundary_table(
    lambda: &Partition,
    kind: BoundaryKind,
    i: usize,
    j: usize,
    s: u32,
) -> Result<Option<TabMatrix>> {
    if i >= j {
        return Err(Error::IndexRange(format!("need i < j, got ({}, {})", i + 1, j + 1)));
    }
    let len = lambda.length();
    if j >= len {
        return Ok(None);
    }
    if s == 0 || s > lambda.part(j) {
        return Err(Error::IndexRange(format!(
            "amount {s} outside 1..={}",
            lambda.part(j)
        )));
    }
    let mut t = TabMatrix::zeros(len, len);
    for k in 0..len {
        t.set(k, k, lambda.part(k));
    }
    t.set(j, j, lambda.part(j) - s);
    match kind {
        BoundaryKind::Phi => t.set(i, j, s),
        BoundaryKind::Psi => t.set(j, i, s),
    }
    Ok(Some(t))
}

/// The boundary map as a tabloid map. Past the last part this is the zero
/// endomorphism of `M(lambda)`.
pub fn boundary_map(
    ctx: &TabloidContext,
    lambda: &Partition,
    kind: BoundaryKind,
    i: usize,
    j: usize,
    s: u32,
) -> Result<TabloidMap> {
    match boundary_table(lambda, kind, i, j, s)? {
        Some(t) => rho(ctx, &t),
        None => {
            let c = lambda.as_composition();
            TabloidMap::zero(ctx, c, c)
        }
    }
}

/// Dimension and basis of the joint kernel of the maps
/// `psi^(i,i+1,t) : M(lambda) -> M(lambda^(i,i+1,t))`.
pub fn specht_kernel(ctx: &TabloidContext, lambda: &Partition) -> Result<(usize, Vec<Gf2Vector>)> {
    let dim = ctx.basis(lambda.as_composition())?.len();
    let mut rows: Vec<Vec<u32>> = Vec::new();
    for i in 0..lambda.length().saturating_sub(1) {
        for t in 1..=lambda.part(i + 1) {
            let map = boundary_map(ctx, lambda, BoundaryKind::Psi, i, i + 1, t)?;
            rows.extend(map_rows(&map));
        }
    }
    let basis = sparse_nullspace(dim, &rows);
    Ok((basis.len(), basis))
}

/// The rows of a map as lists of domain indices.
fn map_rows(map: &TabloidMap) -> Vec<Vec<u32>> {
    let mut rows = vec![Vec::new(); map.codomain_dim()];
    for (y, x) in map.entries() {
        rows[y as usize].push(x);
    }
    rows.retain(|r| !r.is_empty());
    rows
}

/// The dense permutation matrix of `g` acting on `M(alpha)`.
pub fn permutation_map(ctx: &TabloidContext, alpha: &Composition, g: &[u32]) -> Result<TabloidMap> {
    check_permutation(g, alpha.degree() as usize)?;
    TabloidMap::from_label_fn(ctx, alpha, alpha, |l| vec![act_on_labels(g, l)])
}

/// The generators `(1 2)` and `(1 2 ... r)`, as image lists.
pub fn standard_generators(r: usize) -> Vec<Vec<u32>> {
    let mut swap: Vec<u32> = (1..=r as u32).collect();
    if r >= 2 {
        swap.swap(0, 1);
    }
    let cycle: Vec<u32> = (1..=r as u32).map(|e| e % r as u32 + 1).collect();
    vec![swap, cycle]
}

/// Dimension of `{H : H P_g = Q_g H}` for the standard generators, where
/// `P_g`, `Q_g` permute the tabloid bases of `M(alpha)` and `M(beta)`.
///
/// Each equation reads `H[g y][g x] = H[y][x]`, so the solution space is
/// spanned by the indicator matrices of the orbits of pairs `(x, y)`; its
/// dimension is the number of classes of the generated equivalence.
pub fn equivariant_hom_dim(ctx: &TabloidContext, alpha: &Composition, beta: &Composition) -> Result<usize> {
    if alpha.degree() != beta.degree() {
        return Err(Error::DegreeMismatch {
            left: alpha.degree(),
            right: beta.degree(),
        });
    }
    ctx.check_map_budget(alpha, beta)?;
    let ba = ctx.basis(alpha)?;
    let bb = ctx.basis(beta)?;
    let (na, nb) = (ba.len(), bb.len());
    let r = alpha.degree() as usize;
    let perms: Vec<(Vec<u32>, Vec<u32>)> = standard_generators(r)
        .iter()
        .map(|g| {
            let on = |b: &TabloidBasis| -> Vec<u32> {
                (0..b.len())
                    .map(|x| b.index_of_key(pack(&act_on_labels(g, &b.labels(x)))) as u32)
                    .collect()
            };
            (on(&ba), on(&bb))
        })
        .collect();
    let mut parent: Vec<u32> = (0..(na * nb) as u32).collect();
    fn find(p: &mut [u32], mut x: u32) -> u32 {
        while p[x as usize] != x {
            p[x as usize] = p[p[x as usize] as usize];
            x = p[x as usize];
        }
        x
    }
    let mut classes = na * nb;
    for (pa, pb) in &perms {
        for (y, &py) in pb.iter().enumerate() {
            for (x, &px) in pa.iter().enumerate() {
                let u = (y * na + x) as u32;
                let v = py * na as u32 + px;
                let (ru, rv) = (find(&mut parent, u), find(&mut parent, v));
                if ru != rv {
                    parent[ru.max(rv) as usize] = ru.min(rv);
                    classes -= 1;
                }
            }
        }
    }
    Ok(classes)
}

/// Which family of boundary constraints the oracle imposes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleKind {
    /// Adjacent maps `(i, i+1, s)` with every admissible amount: the
    /// endomorphism algebra of the Specht module.
    End,
    /// Maps `(i, j, 1)` for every `i < j`: the relevant homomorphisms.
    Rel,
}

/// Solution space of the oracle system over the coefficient vectors
/// indexed by `Tab(lambda', lambda)`.
#[derive(Clone, Debug)]
pub struct OracleSpace {
    pub tables: Vec<TabMatrix>,
    pub basis: Vec<Gf2Vector>,
}

impl OracleSpace {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Solves `h . phi = 0`, `psi . h = 0` for `h = sum x_A rho[A]` by working
/// in the tabloid modules. Each constraint is an equivariant map out of a
/// cyclic permutation module, so it vanishes exactly when it kills the
/// first basis tabloid; only that column is evaluated.
pub fn oracle_space(ctx: &TabloidContext, lambda: &Partition, kind: OracleKind) -> Result<OracleSpace> {
    let lambda_t = lambda.transpose();
    let tables = enumerate_tables_capped(
        lambda_t.as_composition(),
        lambda.as_composition(),
        ctx.caps.max_tables,
    )?;
    let source = ctx.basis(lambda_t.as_composition())?;
    ctx.basis(lambda.as_composition())?;

    let pairs = |p: &Partition| -> Vec<(usize, usize, u32)> {
        let len = p.length();
        match kind {
            OracleKind::End => (0..len.saturating_sub(1))
                .flat_map(|i| (1..=p.part(i + 1)).map(move |s| (i, i + 1, s)))
                .collect(),
            OracleKind::Rel => (0..len)
                .flat_map(|i| (i + 1..len).map(move |j| (i, j, 1)))
                .collect(),
        }
    };

    // Each entry: (constraint, codomain index) -> tables hitting it.
    let mut buckets: HashMap<(u32, u32), Vec<u32>> = HashMap::new();
    let mut constraint = 0u32;
    for (i, j, s) in pairs(&lambda_t) {
        let phi = boundary_table(&lambda_t, BoundaryKind::Phi, i, j, s)?.expect("j inside the partition");
        let start = ctx.basis(&phi.row_sums())?.labels(0);
        let images = rho_image(ctx, &phi, &start)?;
        let inputs: Vec<Vec<u8>> = images.iter().map(|&y| source.labels(y as usize)).collect();
        let per_table = tables
            .par_iter()
            .map(|t| {
                let mut out = Vec::new();
                for x in &inputs {
                    out.extend(rho_image(ctx, t, x)?);
                }
                reduce_mod2(&mut out);
                Ok(out)
            })
            .collect::<Result<Vec<_>>>()?;
        for (a, ys) in per_table.into_iter().enumerate() {
            for y in ys {
                buckets.entry((constraint, y)).or_default().push(a as u32);
            }
        }
        constraint += 1;
    }
    let target = ctx.basis(lambda.as_composition())?;
    let start = source.labels(0);
    let psis = pairs(lambda)
        .into_iter()
        .map(|(i, j, t)| Ok(boundary_table(lambda, BoundaryKind::Psi, i, j, t)?.expect("j inside the partition")))
        .collect::<Result<Vec<_>>>()?;
    let per_table = tables
        .par_iter()
        .map(|t| {
            let mid = rho_image(ctx, t, &start)?;
            let mid: Vec<Vec<u8>> = mid.iter().map(|&y| target.labels(y as usize)).collect();
            psis.iter()
                .map(|psi| {
                    let mut out = Vec::new();
                    for x in &mid {
                        out.extend(rho_image(ctx, psi, x)?);
                    }
                    reduce_mod2(&mut out);
                    Ok(out)
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    for (a, per_psi) in per_table.into_iter().enumerate() {
        for (c, ys) in per_psi.into_iter().enumerate() {
            for y in ys {
                buckets.entry((constraint + c as u32, y)).or_default().push(a as u32);
            }
        }
    }
    let mut rows: Vec<Vec<u32>> = buckets.into_values().collect();
    rows.sort_unstable();
    rows.dedup();
    let basis = sparse_nullspace(tables.len(), &rows);
    Ok(OracleSpace { tables, basis })
}

/// `dim End(Sp(lambda))` in the tabloid modules.
pub fn end_dimension_oracle(ctx: &TabloidContext, lambda: &Partition) -> Result<usize> {
    Ok(oracle_space(ctx, lambda, OracleKind::End)?.dim())
}

/// `dim Rel(M(lambda'), M(lambda))` in the tabloid modules.
pub fn rel_dimension_oracle(ctx: &TabloidContext, lambda: &Partition) -> Result<usize> {
    Ok(oracle_space(ctx, lambda, OracleKind::Rel)?.dim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partitions::{enumerate_tables, partitions_of};
    use proptest::prelude::*;

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
    fn basis_sizes_and_order() {
        let caps = Caps::default();
        assert_eq!(TabloidBasis::new(&comp("4"), &caps).unwrap().len(), 1);
        let b = TabloidBasis::new(&comp("1,1"), &caps).unwrap();
        assert_eq!(b.unrank(0).to_string(), "({1}|{2})");
        assert_eq!(b.unrank(1).to_string(), "({2}|{1})");
        assert_eq!(TabloidBasis::new(&comp("2,1"), &caps).unwrap().len(), 3);
        for alpha in ["3,2,1", "2,0,2", "1,1,1,1", "3,0"] {
            let a = comp(alpha);
            let b = TabloidBasis::new(&a, &caps).unwrap();
            assert_eq!(b.len() as u128, module_dimension(&a));
            let els: Vec<Tabloid> = b.elements().collect();
            let flat: Vec<Vec<u32>> = els.iter().map(|t| t.blocks().concat()).collect();
            assert!(flat.windows(2).all(|w| w[0] < w[1]));
            for (i, t) in els.iter().enumerate() {
                assert_eq!(b.rank(t), Some(i));
            }
        }
    }

    #[test]
    fn basis_guard() {
        let caps = Caps {
            max_bits: 100,
            ..Caps::default()
        };
        assert!(matches!(
            TabloidBasis::new(&comp("1,1,1,1"), &caps),
            Err(Error::CapExceeded(_))
        ));
    }

    #[test]
    fn action_examples() {
        let x = Tabloid::new(vec![vec![1], vec![2]]).unwrap();
        assert_eq!(sym_action(&[1, 2], &x).unwrap(), x);
        assert_eq!(
            sym_action(&[2, 1], &x).unwrap(),
            Tabloid::new(vec![vec![2], vec![1]]).unwrap()
        );
        assert!(matches!(sym_action(&[1, 1], &x), Err(Error::InvalidPermutation(_))));
        assert!(sym_action(&[1, 2, 3], &x).is_err());
    }

    fn arb_perm(r: usize) -> impl Strategy<Value = Vec<u32>> {
        Just((1..=r as u32).collect::<Vec<_>>()).prop_shuffle()
    }

    proptest! {
        #[test]
        fn action_is_a_group_action(
            (g, h, idx) in (1usize..=6).prop_flat_map(|r| (arb_perm(r), arb_perm(r), any::<prop::sample::Index>()))
        ) {
            let r = g.len();
            let alpha = match r { 1 => comp("1"), 2 => comp("1,1"), 3 => comp("2,1"), 4 => comp("2,1,1"), 5 => comp("2,2,1"), _ => comp("3,2,1") };
            let b = TabloidBasis::new(&alpha, &Caps::default()).unwrap();
            let x = b.unrank(idx.index(b.len()));
            let gh: Vec<u32> = (0..r).map(|e| g[h[e] as usize - 1]).collect();
            let lhs = sym_action(&gh, &x).unwrap();
            let rhs = sym_action(&g, &sym_action(&h, &x).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn rho_of_diagonal_is_identity() {
        let ctx = TabloidContext::default();
        let a = tm(&[&[3, 0], &[0, 2]]);
        assert_eq!(rho_matrix(&ctx, &a).unwrap(), Gf2Matrix::identity(10));
    }

    #[test]
    fn rho_of_swap() {
        let ctx = TabloidContext::default();
        let m = rho_matrix(&ctx, &tm(&[&[0, 1], &[1, 0]])).unwrap();
        assert_eq!(m, Gf2Matrix::from_rows(&[[0u8, 1], [1, 0]]).unwrap());
    }

    /// Coefficient of `y` in `rho[A](x)` is 1 exactly when every block
    /// intersection `x_i & y_j` has size `a_ij`.
    fn intersection_reference(ctx: &TabloidContext, a: &TabMatrix) -> Gf2Matrix {
        let da = ctx.basis(&a.row_sums()).unwrap();
        let db = ctx.basis(&a.col_sums()).unwrap();
        Gf2Matrix::from_fn(db.len(), da.len(), |y, x| {
            let (lx, ly) = (da.labels(x), db.labels(y));
            let mut counts = vec![0u32; a.rows() * a.cols()];
            for e in 0..lx.len() {
                counts[lx[e] as usize * a.cols() + ly[e] as usize] += 1;
            }
            counts == a.entries()
        })
    }

    #[test]
    fn rho_matches_intersection_reference() {
        let ctx = TabloidContext::default();
        let a = tm(&[&[2, 2], &[1, 1]]);
        let m = rho_matrix(&ctx, &a).unwrap();
        assert_eq!(m, intersection_reference(&ctx, &a));
        // C(4,2) * C(2,1) splittings per column, all distinct.
        for x in 0..m.cols() {
            let ones = (0..m.rows()).filter(|&y| m.get(y, x)).count();
            assert_eq!(ones, 12);
        }
        for (alpha, beta) in [("3,2,1", "2,2,2"), ("2,2,1", "3,1,1"), ("4,1", "2,3")] {
            for t in enumerate_tables(&comp(alpha), &comp(beta)).unwrap() {
                assert_eq!(rho_matrix(&ctx, &t).unwrap(), intersection_reference(&ctx, &t));
            }
        }
    }

    #[test]
    fn boundary_examples() {
        let ctx = TabloidContext::default();
        let l = part("2,1");
        let phi = boundary_map(&ctx, &l, BoundaryKind::Phi, 0, 1, 1).unwrap();
        assert_eq!(
            boundary_table(&l, BoundaryKind::Phi, 0, 1, 1).unwrap(),
            Some(tm(&[&[2, 1], &[0, 0]]))
        );
        assert_eq!(phi.domain(), &comp("3,0"));
        assert_eq!(phi.to_dense(), Gf2Matrix::from_rows(&[[1u8], [1], [1]]).unwrap());

        assert_eq!(
            boundary_table(&l, BoundaryKind::Psi, 0, 1, 1).unwrap(),
            Some(tm(&[&[2, 0], &[1, 0]]))
        );
        let psi = boundary_map(&ctx, &l, BoundaryKind::Psi, 0, 1, 1).unwrap();
        assert_eq!(psi.codomain(), &comp("3,0"));
        assert_eq!(psi.to_dense(), Gf2Matrix::from_rows(&[[1u8, 1, 1]]).unwrap());

        let l = part("1,1");
        let phi = boundary_map(&ctx, &l, BoundaryKind::Phi, 0, 1, 1).unwrap();
        let psi = boundary_map(&ctx, &l, BoundaryKind::Psi, 0, 1, 1).unwrap();
        assert!(psi.compose(&phi).unwrap().is_zero());

        assert!(boundary_map(&ctx, &part("2"), BoundaryKind::Phi, 0, 1, 1).unwrap().is_zero());
        assert!(boundary_map(&ctx, &part("2,1"), BoundaryKind::Phi, 0, 1, 2).is_err());
        assert!(boundary_map(&ctx, &part("2,1"), BoundaryKind::Phi, 1, 0, 1).is_err());
    }

    #[test]
    fn specht_examples() {
        let ctx = TabloidContext::default();
        assert_eq!(specht_kernel(&ctx, &part("1,1,1,1")).unwrap().0, 1);
        assert_eq!(specht_kernel(&ctx, &part("2,1")).unwrap().0, 2);
        assert_eq!(specht_kernel(&ctx, &part("3,1,1,1")).unwrap().0, 10);
    }

    #[test]
    fn equivariant_examples() {
        let ctx = TabloidContext::default();
        assert_eq!(equivariant_hom_dim(&ctx, &comp("4"), &comp("4")).unwrap(), 1);
        assert_eq!(equivariant_hom_dim(&ctx, &comp("2,1"), &comp("2,1")).unwrap(), 2);
        assert_eq!(equivariant_hom_dim(&ctx, &comp("4,2"), &comp("3,3")).unwrap(), 3);
    }

    #[test]
    fn rho_is_equivariant() {
        let ctx = TabloidContext::default();
        for r in 1..=5u32 {
            for lambda in partitions_of(r) {
                let lt = lambda.transpose();
                let g = standard_generators(r as usize);
                for t in enumerate_tables(lt.as_composition(), lambda.as_composition()).unwrap() {
                    let h = rho(&ctx, &t).unwrap();
                    for g in &g {
                        let p = permutation_map(&ctx, lt.as_composition(), g).unwrap();
                        let q = permutation_map(&ctx, lambda.as_composition(), g).unwrap();
                        assert_eq!(h.compose(&p).unwrap(), q.compose(&h).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn transpose_duality() {
        let ctx = TabloidContext::default();
        for r in 1..=5 {
            for lambda in partitions_of(r) {
                let lt = lambda.transpose();
                for t in enumerate_tables(lt.as_composition(), lambda.as_composition()).unwrap() {
                    let m = rho_matrix(&ctx, &t).unwrap();
                    assert_eq!(m.transpose(), rho_matrix(&ctx, &t.transpose()).unwrap());
                }
            }
        }
    }

    #[test]
    fn oracle_examples() {
        let ctx = TabloidContext::default();
        assert_eq!(end_dimension_oracle(&ctx, &part("3")).unwrap(), 1);
        assert_eq!(end_dimension_oracle(&ctx, &part("2,1")).unwrap(), 1);
        assert_eq!(end_dimension_oracle(&ctx, &part("3,1,1,1")).unwrap(), 1);
    }

    #[test]
    fn compose_matches_dense_product() {
        let ctx = TabloidContext::default();
        let a = rho(&ctx, &tm(&[&[2, 1], &[1, 1]])).unwrap();
        let b = rho(&ctx, &tm(&[&[1, 2], &[2, 0]])).unwrap();
        let dense = a.to_dense().mat_mul(&b.to_dense()).unwrap();
        assert_eq!(a.compose(&b).unwrap().to_dense(), dense);
        let other = TabloidMap::identity(&ctx, &comp("2,1")).unwrap();
        assert!(other.compose(&b).is_err());
    }

    /// Whole-matrix version of the oracle: every composite is built in full.
    fn full_oracle_dim(ctx: &TabloidContext, lambda: &Partition, kind: OracleKind) -> usize {
        let lt = lambda.transpose();
        let tables = enumerate_tables(lt.as_composition(), lambda.as_composition()).unwrap();
        let adjacent = |p: &Partition| -> Vec<(usize, usize, u32)> {
            let len = p.length();
            match kind {
                OracleKind::End => (0..len.saturating_sub(1))
                    .flat_map(|i| (1..=p.part(i + 1)).map(move |s| (i, i + 1, s)))
                    .collect(),
                OracleKind::Rel => (0..len).flat_map(|i| (i + 1..len).map(move |j| (i, j, 1))).collect(),
            }
        };
        let rhos: Vec<Gf2Matrix> = tables.iter().map(|t| rho_matrix(ctx, t).unwrap()).collect();
        let mut blocks: Vec<Vec<Gf2Matrix>> = vec![Vec::new(); tables.len()];
        for (i, j, s) in adjacent(&lt) {
            let phi = boundary_map(ctx, &lt, BoundaryKind::Phi, i, j, s).unwrap().to_dense();
            for (a, r) in rhos.iter().enumerate() {
                blocks[a].push(r.mat_mul(&phi).unwrap());
            }
        }
        for (i, j, t) in adjacent(lambda) {
            let psi = boundary_map(ctx, lambda, BoundaryKind::Psi, i, j, t).unwrap().to_dense();
            for (a, r) in rhos.iter().enumerate() {
                blocks[a].push(psi.mat_mul(r).unwrap());
            }
        }
        // Column a of the constraint matrix is the flattening of all composites for table a.
        let flat: Vec<Vec<u8>> = blocks
            .iter()
            .map(|bs| bs.iter().flat_map(|m| (0..m.rows()).flat_map(move |y| (0..m.cols()).map(move |x| m.get(y, x) as u8))).collect())
            .collect();
        if flat.is_empty() || flat[0].is_empty() {
            return tables.len();
        }
        let constraints = Gf2Matrix::from_fn(flat[0].len(), tables.len(), |y, a| flat[a][y] == 1);
        tables.len() - constraints.rank()
    }

    #[test]
    fn generator_oracle_matches_full_composition() {
        let ctx = TabloidContext::default();
        for r in 1..=5 {
            for lambda in partitions_of(r) {
                for kind in [OracleKind::End, OracleKind::Rel] {
                    assert_eq!(
                        oracle_space(&ctx, &lambda, kind).unwrap().dim(),
                        full_oracle_dim(&ctx, &lambda, kind),
                        "{lambda} {kind:?}"
                    );
                }
            }
        }
    }
}
