//! Bit-packed linear algebra over GF(2).
//!
//! Rows are packed into `u64` words, least significant bit first. Padding
//! bits past the logical length are always zero.

use std::fmt;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= s;
    }
}

#[inline]
fn first_one(words: &[u64]) -> Option<usize> {
    words
        .iter()
        .position(|&w| w != 0)
        .map(|i| i * WORD + words[i].trailing_zeros() as usize)
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Gf2Vector {
            len,
            words: vec![0; words_for(len)],
        }
    }

    /// Vector with ones exactly at `indices`; repeated indices cancel.
    pub fn from_indices(len: usize, indices: &[usize]) -> Result<Self> {
        let mut v = Gf2Vector::zeros(len);
        for &i in indices {
            if i >= len {
                return Err(Error::Shape(format!("index {i} in a vector of length {len}")));
            }
            v.flip(i);
        }
        Ok(v)
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        let mut v = Gf2Vector::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            if b {
                v.flip(i);
            }
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        self.words[i / WORD] >> (i % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        first_one(&self.words)
    }

    /// Indices of set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let b = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(wi * WORD + b)
            })
        })
    }

    pub fn xor_assign(&mut self, other: &Gf2Vector) {
        debug_assert_eq!(self.len, other.len);
        xor_into(&mut self.words, &other.words);
    }

    pub fn dot(&self, other: &Gf2Vector) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum::<u32>()
            % 2
            == 1
    }

    pub fn to_bit_string(&self) -> String {
        (0..self.len).map(|i| if self.get(i) { '1' } else { '0' }).collect()
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector({})", self.to_bit_string())
    }
}

/// Dense row-major bit matrix.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Reduced row echelon form together with its pivot columns.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rref {
    pub matrix: Gf2Matrix,
    pub pivots: Vec<usize>,
    pub rank: usize,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Gf2Matrix {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Gf2Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Gf2Matrix::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    /// Builds a matrix from rows of `0`/`1` values (any nonzero counts as 1).
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        if rows.iter().any(|r| r.as_ref().len() != cols) {
            return Err(Error::Shape("ragged rows".into()));
        }
        Ok(Gf2Matrix::from_fn(rows.len(), cols, |i, j| rows[i].as_ref()[j] != 0))
    }

    /// Stacks vectors of equal length as rows.
    pub fn from_vectors(cols: usize, vectors: &[Gf2Vector]) -> Result<Self> {
        let mut m = Gf2Matrix::zeros(vectors.len(), cols);
        for (i, v) in vectors.iter().enumerate() {
            if v.len() != cols {
                return Err(Error::Shape(format!("vector of length {} for {cols} columns", v.len())));
            }
            m.row_mut(i).copy_from_slice(v.words());
        }
        Ok(m)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> bool {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.stride + j / WORD] >> (j % WORD) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        debug_assert!(i < self.rows && j < self.cols);
        let w = &mut self.data[i * self.stride + j / WORD];
        let mask = 1u64 << (j % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize, j: usize) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.stride + j / WORD] ^= 1u64 << (j % WORD);
    }

    #[inline]
    fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.stride..(i + 1) * self.stride]
    }

    #[inline]
    fn row_mut(&mut self, i: usize) -> &mut [u64] {
        &mut self.data[i * self.stride..(i + 1) * self.stride]
    }

    /// `row[dst] ^= row[src]`.
    fn xor_row(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s] as &[u64])
        };
        xor_into(a, b);
    }

    pub fn row(&self, i: usize) -> Gf2Vector {
        Gf2Vector {
            len: self.cols,
            words: self.row_words(i).to_vec(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.data.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn transpose(&self) -> Gf2Matrix {
        let mut t = Gf2Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in first_ones(self.row_words(i)) {
                t.set(j, i, true);
            }
        }
        t
    }

    pub fn add(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(self.shape_error("add", other));
        }
        let mut out = self.clone();
        xor_into(&mut out.data, &other.data);
        Ok(out)
    }

    pub fn mat_mul(&self, other: &Gf2Matrix) -> Result<Gf2Matrix> {
        if self.cols != other.rows {
            return Err(self.shape_error("multiply", other));
        }
        let mut out = Gf2Matrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            let dst = &mut out.data[i * out.stride..(i + 1) * out.stride];
            for k in first_ones(self.row_words(i)) {
                xor_into(dst, other.row_words(k));
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, v: &Gf2Vector) -> Result<Gf2Vector> {
        if self.cols != v.len() {
            return Err(Error::Shape(format!(
                "{}x{} matrix times vector of length {}",
                self.rows,
                self.cols,
                v.len()
            )));
        }
        let mut out = Gf2Vector::zeros(self.rows);
        for i in 0..self.rows {
            let parity = self
                .row_words(i)
                .iter()
                .zip(v.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum::<u32>();
            if parity % 2 == 1 {
                out.flip(i);
            }
        }
        Ok(out)
    }

    pub fn vstack(blocks: &[&Gf2Matrix]) -> Result<Gf2Matrix> {
        let cols = blocks.first().map_or(0, |b| b.cols);
        if blocks.iter().any(|b| b.cols != cols) {
            return Err(Error::Shape("vstack of blocks with different widths".into()));
        }
        let rows = blocks.iter().map(|b| b.rows).sum();
        let mut out = Gf2Matrix::zeros(rows, cols);
        let mut at = 0;
        for b in blocks {
            out.data[at..at + b.data.len()].copy_from_slice(&b.data);
            at += b.data.len();
        }
        Ok(out)
    }

    fn shape_error(&self, op: &str, other: &Gf2Matrix) -> Error {
        Error::Shape(format!(
            "cannot {op} {}x{} and {}x{}",
            self.rows, self.cols, other.rows, other.cols
        ))
    }

    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..self.cols {
            if r == m.rows {
                break;
            }
            let Some(p) = (r..m.rows).find(|&i| m.get(i, c)) else {
                continue;
            };
            if p != r {
                for w in 0..m.stride {
                    m.data.swap(p * m.stride + w, r * m.stride + w);
                }
            }
            for i in 0..m.rows {
                if i != r && m.get(i, c) {
                    m.xor_row(i, r);
                }
            }
            pivots.push(c);
            r += 1;
        }
        Rref {
            matrix: m,
            rank: pivots.len(),
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        let mut e = Echelon::new(self.cols);
        for i in 0..self.rows {
            e.insert(self.row(i));
        }
        e.rank()
    }

    /// Basis of `{v : M v = 0}` from the free columns of the reduced form:
    /// one vector per free column `f`, with a 1 at `f` and the pivot
    /// coordinates read off column `f` of the reduced matrix.
    pub fn nullspace_basis(&self) -> Vec<Gf2Vector> {
        let rref = self.rref();
        nullspace_from_rref(&rref, self.cols)
    }

    /// Rows as strings of `0` and `1`, one per line.
    pub fn dump(&self) -> String {
        let mut s = String::with_capacity(self.rows * (self.cols + 1));
        for i in 0..self.rows {
            for j in 0..self.cols {
                s.push(if self.get(i, j) { '1' } else { '0' });
            }
            s.push('\n');
        }
        s
    }
}

fn first_ones(words: &[u64]) -> impl Iterator<Item = usize> + '_ {
    words.iter().enumerate().flat_map(|(wi, &w)| {
        let mut rest = w;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(wi * WORD + b)
        })
    })
}

fn nullspace_from_rref(rref: &Rref, cols: usize) -> Vec<Gf2Vector> {
    let mut is_pivot = vec![false; cols];
    for &p in &rref.pivots {
        is_pivot[p] = true;
    }
    (0..cols)
        .filter(|&f| !is_pivot[f])
        .map(|f| {
            let mut v = Gf2Vector::zeros(cols);
            v.set(f, true);
            for (r, &p) in rref.pivots.iter().enumerate() {
                if rref.matrix.get(r, f) {
                    v.set(p, true);
                }
            }
            v
        })
        .collect()
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        f.write_str(&self.dump())
    }
}

/// Incrementally built row echelon basis. Each stored row has a distinct
/// leading (lowest) column.
#[derive(Clone, Debug)]
pub struct Echelon {
    cols: usize,
    rows: Vec<Gf2Vector>,
    pivot_row: Vec<u32>,
}

const NO_ROW: u32 = u32::MAX;

impl Echelon {
    pub fn new(cols: usize) -> Self {
        Echelon {
            cols,
            rows: Vec::new(),
            pivot_row: vec![NO_ROW; cols],
        }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Reduces `v` against the basis; the result is zero iff `v` lies in
    /// the span.
    pub fn reduce(&self, mut v: Gf2Vector) -> Gf2Vector {
        debug_assert_eq!(v.len(), self.cols);
        let mut from = 0;
        // A stored row with leading column p only touches columns >= p.
        loop {
            let next = v
                .ones()
                .skip_while(|&x| x < from)
                .find(|&x| self.pivot_row[x] != NO_ROW);
            let Some(p) = next else { break };
            v.xor_assign(&self.rows[self.pivot_row[p] as usize]);
            from = p + 1;
        }
        v
    }

    /// Adds `v` to the span. Returns true when the rank grew.
    pub fn insert(&mut self, v: Gf2Vector) -> bool {
        let mut v = v;
        loop {
            let Some(p) = v.first_one() else {
                return false;
            };
            let r = self.pivot_row[p];
            if r == NO_ROW {
                self.pivot_row[p] = self.rows.len() as u32;
                self.rows.push(v);
                return true;
            }
            v.xor_assign(&self.rows[r as usize]);
        }
    }

    pub fn contains(&self, v: &Gf2Vector) -> bool {
        self.reduce(v.clone()).is_zero()
    }

    /// The reduced row echelon form of the span.
    pub fn into_rref(self) -> Rref {
        let cols = self.cols;
        let mut order: Vec<usize> = (0..self.rows.len()).collect();
        order.sort_by_key(|&r| self.rows[r].first_one());
        let mut rows: Vec<Gf2Vector> = order.into_iter().map(|r| self.rows[r].clone()).collect();
        let pivots: Vec<usize> = rows.iter().map(|r| r.first_one().expect("nonzero")).collect();
        // Back substitution: clear each pivot column above its row.
        for k in (0..rows.len()).rev() {
            let p = pivots[k];
            let (above, rest) = rows.split_at_mut(k);
            let pivot_row = &rest[0];
            for r in above.iter_mut() {
                if r.get(p) {
                    r.xor_assign(pivot_row);
                }
            }
        }
        let matrix = Gf2Matrix::from_vectors(cols, &rows).expect("uniform length");
        Rref {
            rank: pivots.len(),
            matrix,
            pivots,
        }
    }
}

/// Reduced row echelon basis of the span of `vectors`.
pub fn canonical_basis(cols: usize, vectors: impl IntoIterator<Item = Gf2Vector>) -> Vec<Gf2Vector> {
    let mut e = Echelon::new(cols);
    for v in vectors {
        e.insert(v);
    }
    let rref = e.into_rref();
    (0..rref.rank).map(|i| rref.matrix.row(i)).collect()
}

/// Nullspace of a sparse system given as rows of column indices (each row
/// is the sum of the listed unknowns; repeated indices cancel).
///
/// Rows of weight one fix an unknown to zero and rows of weight two
/// identify two unknowns; these are applied to a fixpoint with a
/// union-find before the remaining rows are eliminated densely over the
/// surviving classes. The returned basis is in reduced row echelon form.
pub fn sparse_nullspace(cols: usize, rows: &[Vec<u32>]) -> Vec<Gf2Vector> {
    let mut classes = Classes::new(cols);
    let mut live: Vec<Vec<u32>> = rows.to_vec();
    loop {
        let mut changed = false;
        let mut next = Vec::with_capacity(live.len());
        for row in live {
            let reduced = classes.reduce(&row);
            match reduced.len() {
                0 => {}
                1 => {
                    classes.kill(reduced[0]);
                    changed = true;
                }
                2 => {
                    classes.union(reduced[0], reduced[1]);
                    changed = true;
                }
                _ => next.push(reduced),
            }
        }
        live = next;
        if !changed {
            break;
        }
    }

    // Dense phase over the surviving class representatives.
    let reps: Vec<u32> = (0..cols as u32)
        .filter(|&c| classes.find(c) == c && !classes.dead[c as usize])
        .collect();
    let mut slot = vec![u32::MAX; cols];
    for (s, &r) in reps.iter().enumerate() {
        slot[r as usize] = s as u32;
    }
    let mut e = Echelon::new(reps.len());
    for row in &live {
        let idx: Vec<usize> = row.iter().map(|&c| slot[c as usize] as usize).collect();
        e.insert(Gf2Vector::from_indices(reps.len(), &idx).expect("in range"));
    }
    let rref = e.into_rref();
    let reduced_basis = nullspace_from_rref(&rref, reps.len());

    let owner: Vec<u32> = (0..cols as u32)
        .map(|c| {
            let r = classes.find(c);
            if classes.dead[r as usize] {
                u32::MAX
            } else {
                slot[r as usize]
            }
        })
        .collect();
    let lifted = reduced_basis.into_iter().map(|v| {
        let mut out = Gf2Vector::zeros(cols);
        for (c, &s) in owner.iter().enumerate() {
            if s != u32::MAX && v.get(s as usize) {
                out.set(c, true);
            }
        }
        out
    });
    canonical_basis(cols, lifted)
}

struct Classes {
    parent: Vec<u32>,
    dead: Vec<bool>,
}

impl Classes {
    fn new(n: usize) -> Self {
        Classes {
            parent: (0..n as u32).collect(),
            dead: vec![false; n],
        }
    }

    fn find(&self, mut c: u32) -> u32 {
        while self.parent[c as usize] != c {
            c = self.parent[c as usize];
        }
        c
    }

    fn find_compress(&mut self, c: u32) -> u32 {
        let root = self.find(c);
        let mut x = c;
        while self.parent[x as usize] != root {
            let next = self.parent[x as usize];
            self.parent[x as usize] = root;
            x = next;
        }
        root
    }

    fn kill(&mut self, c: u32) {
        let r = self.find_compress(c);
        self.dead[r as usize] = true;
    }

    fn union(&mut self, a: u32, b: u32) {
        let (ra, rb) = (self.find_compress(a), self.find_compress(b));
        if ra == rb {
            return;
        }
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        self.parent[hi as usize] = lo;
        let dead = self.dead[lo as usize] || self.dead[hi as usize];
        self.dead[lo as usize] = dead;
    }

    /// Rewrites a row over live class representatives, cancelling pairs.
    fn reduce(&mut self, row: &[u32]) -> Vec<u32> {
        let mut out: Vec<u32> = Vec::with_capacity(row.len());
        for &c in row {
            let r = self.find_compress(c);
            if !self.dead[r as usize] {
                out.push(r);
            }
        }
        out.sort_unstable();
        let mut kept = Vec::with_capacity(out.len());
        let mut i = 0;
        while i < out.len() {
            let mut j = i;
            while j < out.len() && out[j] == out[i] {
                j += 1;
            }
            if (j - i) % 2 == 1 {
                kept.push(out[i]);
            }
            i = j;
        }
        kept
    }
}
