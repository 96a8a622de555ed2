//! Bit-packed linear algebra over GF(2).
//!
//! Vectors and matrix rows are stored as `u64` words, least significant bit
//! first. Elimination always pivots on the lowest available row and column
//! index, so every result (solutions, bases, ranks) is reproducible.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(len: usize) -> usize {
    len.div_ceil(WORD)
}

/// A fixed-length vector over GF(2).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Gf2Vector {
    len: usize,
    words: Vec<u64>,
}

impl Gf2Vector {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; words_for(len)],
        }
    }

    pub fn ones(len: usize) -> Self {
        let mut v = Self {
            len,
            words: vec![u64::MAX; words_for(len)],
        };
        v.clear_tail();
        v
    }

    /// Builds a vector with the listed positions set. Repeated indices cancel.
    pub fn from_indices(len: usize, indices: impl IntoIterator<Item = usize>) -> Self {
        let mut v = Self::zeros(len);
        for i in indices {
            v.flip(i);
        }
        v
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        Self::from_indices(
            bits.len(),
            bits.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i),
        )
    }

    fn clear_tail(&mut self) {
        let rem = self.len % WORD;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len, "index {i} out of range for length {}", self.len);
        self.words[i / WORD] ^= 1u64 << (i % WORD);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &Self) -> bool {
        debug_assert_eq!(self.len, other.len);
        let ones: u32 = self
            .words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones())
            .sum();
        ones & 1 == 1
    }

    pub fn xor_assign(&mut self, other: &Self) {
        assert_eq!(self.len, other.len, "vector length mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    pub fn and(&self, other: &Self) -> Self {
        assert_eq!(self.len, other.len, "vector length mismatch");
        Self {
            len: self.len,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        }
    }

    /// Lowest set position, if any.
    pub fn first_one(&self) -> Option<usize> {
        self.words
            .iter()
            .enumerate()
            .find(|(_, &w)| w != 0)
            .map(|(i, w)| i * WORD + w.trailing_zeros() as usize)
    }

    /// Set positions in increasing order.
    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let tz = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(wi * WORD + tz)
                }
            })
        })
    }

    pub fn to_indices(&self) -> Vec<usize> {
        self.iter_ones().collect()
    }

    /// Keeps the entries at `positions`, in that order.
    pub fn gather(&self, positions: &[usize]) -> Self {
        let mut out = Self::zeros(positions.len());
        for (i, &p) in positions.iter().enumerate() {
            if self.get(p) {
                out.set(i, true);
            }
        }
        out
    }

    /// Inverse of [`gather`](Self::gather): entry `i` lands at `positions[i]`
    /// in a vector of length `len`.
    pub fn scatter(&self, positions: &[usize], len: usize) -> Self {
        assert_eq!(self.len, positions.len());
        let mut out = Self::zeros(len);
        for i in self.iter_ones() {
            out.flip(positions[i]);
        }
        out
    }

    #[inline]
    fn words(&self) -> &[u64] {
        &self.words
    }
}

impl fmt::Debug for Gf2Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gf2Vector[{}]{:?}", self.len, self.to_indices())
    }
}

/// Dense row-major matrix over GF(2).
#[derive(Clone, PartialEq, Eq)]
pub struct Gf2Matrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

impl Gf2Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self {
            rows,
            cols,
            stride,
            data: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix whose row `i` has ones at `support[i]`. Repeats cancel.
    pub fn from_supports<I, R>(cols: usize, supports: I) -> Self
    where
        I: IntoIterator<Item = R>,
        R: IntoIterator<Item = usize>,
    {
        let rows: Vec<Vec<usize>> = supports
            .into_iter()
            .map(|r| r.into_iter().collect())
            .collect();
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            for &j in r {
                m.flip(i, j);
            }
        }
        m
    }

    pub fn from_rows(cols: usize, rows: &[Gf2Vector]) -> Self {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            assert_eq!(r.len(), cols, "row {i} has wrong length");
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let mask = 1u64 << (c % WORD);
        let w = &mut self.data[r * self.stride + c / WORD];
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    #[inline]
    pub fn flip(&mut self, r: usize, c: usize) {
        assert!(r < self.rows && c < self.cols);
        self.data[r * self.stride + c / WORD] ^= 1u64 << (c % WORD);
    }

    pub fn row(&self, r: usize) -> Gf2Vector {
        Gf2Vector {
            len: self.cols,
            words: self.row_words(r).to_vec(),
        }
    }

    pub fn row_weight(&self, r: usize) -> usize {
        self.row_words(r)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|&w| w == 0)
    }

    fn xor_rows(&mut self, dst: usize, src: usize) {
        debug_assert_ne!(dst, src);
        let s = self.stride;
        let (a, b) = if dst < src {
            let (lo, hi) = self.data.split_at_mut(src * s);
            (&mut lo[dst * s..(dst + 1) * s], &hi[..s])
        } else {
            let (lo, hi) = self.data.split_at_mut(dst * s);
            (&mut hi[..s], &lo[src * s..(src + 1) * s])
        };
        for (x, y) in a.iter_mut().zip(b) {
            *x ^= y;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        let s = self.stride;
        for k in 0..s {
            self.data.swap(a * s + k, b * s + k);
        }
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in self.row(r).iter_ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `M x`.
    pub fn mul_vec(&self, x: &Gf2Vector) -> Result<Gf2Vector> {
        if x.len() != self.cols {
            return Err(Error::SizeMismatch {
                what: "matrix-vector product",
                expected: self.cols,
                found: x.len(),
            });
        }
        let mut out = Gf2Vector::zeros(self.rows);
        for r in 0..self.rows {
            let ones: u32 = self
                .row_words(r)
                .iter()
                .zip(x.words())
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            if ones & 1 == 1 {
                out.set(r, true);
            }
        }
        Ok(out)
    }

    /// `A B` over GF(2).
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::SizeMismatch {
                what: "matrix product",
                expected: self.cols,
                found: other.rows,
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in self.row(r).iter_ones() {
                let src = other.row_words(k).to_vec();
                for (d, s) in out.row_words_mut(r).iter_mut().zip(&src) {
                    *d ^= s;
                }
            }
        }
        Ok(out)
    }

    /// In-place reduced row echelon form. Returns the pivot columns in order.
    fn rref_in_place(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..self.cols {
            if next == self.rows {
                break;
            }
            let Some(p) = (next..self.rows).find(|&r| self.get(r, c)) else {
                continue;
            };
            self.swap_rows(next, p);
            for r in 0..self.rows {
                if r != next && self.get(r, c) {
                    self.xor_rows(r, next);
                }
            }
            pivots.push(c);
            next += 1;
        }
        pivots
    }

    pub fn rank(&self) -> usize {
        self.clone().rref_in_place().len()
    }

    /// Any `x` with `M x = b`, or `None` when `b` is outside the column space.
    pub fn solve(&self, b: &Gf2Vector) -> Result<Option<Gf2Vector>> {
        ColumnSolver::new(self).solve(b)
    }

    /// Whether `v` is a GF(2) combination of the rows of `M`.
    pub fn in_rowspace(&self, v: &Gf2Vector) -> Result<bool> {
        RowBasis::new(self).contains(v)
    }

    /// Basis of `{x : M x = 0}`, one basis vector per free column.
    pub fn nullspace(&self) -> Vec<Gf2Vector> {
        let mut r = self.clone();
        let pivots = r.rref_in_place();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        (0..self.cols)
            .filter(|&c| !is_pivot[c])
            .map(|free| {
                let mut x = Gf2Vector::zeros(self.cols);
                x.set(free, true);
                for (i, &p) in pivots.iter().enumerate() {
                    if r.get(i, free) {
                        x.set(p, true);
                    }
                }
                x
            })
            .collect()
    }
}

impl fmt::Debug for Gf2Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Gf2Matrix {}x{}", self.rows, self.cols)?;
        for r in 0..self.rows.min(32) {
            let line: String = (0..self.cols.min(128))
                .map(|c| if self.get(r, c) { '1' } else { '.' })
                .collect();
            writeln!(f, "  {line}")?;
        }
        Ok(())
    }
}

/// Echelon basis of a row space, for repeated membership queries.
#[derive(Clone, Debug)]
pub struct RowBasis {
    cols: usize,
    basis: Gf2Matrix,
    pivots: Vec<usize>,
}

impl RowBasis {
    pub fn new(m: &Gf2Matrix) -> Self {
        let mut basis = m.clone();
        let pivots = basis.rref_in_place();
        let rank = pivots.len();
        basis.data.truncate(rank * basis.stride);
        basis.rows = rank;
        Self {
            cols: m.cols,
            basis,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Residue of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &Gf2Vector) -> Result<Gf2Vector> {
        if v.len() != self.cols {
            return Err(Error::SizeMismatch {
                what: "row-space reduction",
                expected: self.cols,
                found: v.len(),
            });
        }
        let mut out = v.clone();
        for (i, &p) in self.pivots.iter().enumerate() {
            if out.get(p) {
                for (a, b) in out.words.iter_mut().zip(self.basis.row_words(i)) {
                    *a ^= b;
                }
            }
        }
        Ok(out)
    }

    pub fn contains(&self, v: &Gf2Vector) -> Result<bool> {
        Ok(self.reduce(v)?.is_zero())
    }
}

/// Precomputed elimination of `M` for repeated solves of `M x = b`.
///
/// Row-reduces `[M | I]` once; the identity half records the row operations so
/// each right-hand side costs one transform application.
#[derive(Clone, Debug)]
pub struct ColumnSolver {
    rows: usize,
    cols: usize,
    transform: Gf2Matrix,
    pivots: Vec<usize>,
}

impl ColumnSolver {
    pub fn new(m: &Gf2Matrix) -> Self {
        let (rows, cols) = (m.rows, m.cols);
        let mut aug = Gf2Matrix::zeros(rows, cols + rows);
        for r in 0..rows {
            for c in m.row(r).iter_ones() {
                aug.set(r, c, true);
            }
            aug.set(r, cols + r, true);
        }
        let mut pivots = Vec::new();
        let mut next = 0;
        for c in 0..cols {
            if next == rows {
                break;
            }
            let Some(p) = (next..rows).find(|&r| aug.get(r, c)) else {
                continue;
            };
            aug.swap_rows(next, p);
            for r in 0..rows {
                if r != next && aug.get(r, c) {
                    aug.xor_rows(r, next);
                }
            }
            pivots.push(c);
            next += 1;
        }
        let mut transform = Gf2Matrix::zeros(rows, rows);
        for r in 0..rows {
            for c in aug.row(r).iter_ones().filter(|&c| c >= cols) {
                transform.set(r, c - cols, true);
            }
        }
        Self {
            rows,
            cols,
            transform,
            pivots,
        }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Whether `b` lies in the column space.
    pub fn is_consistent(&self, b: &Gf2Vector) -> Result<bool> {
        let tb = self.transformed(b)?;
        Ok((self.pivots.len()..self.rows).all(|r| !tb.get(r)))
    }

    fn transformed(&self, b: &Gf2Vector) -> Result<Gf2Vector> {
        if b.len() != self.rows {
            return Err(Error::SizeMismatch {
                what: "linear solve right-hand side",
                expected: self.rows,
                found: b.len(),
            });
        }
        self.transform.mul_vec(b)
    }

    pub fn solve(&self, b: &Gf2Vector) -> Result<Option<Gf2Vector>> {
        let tb = self.transformed(b)?;
        if (self.pivots.len()..self.rows).any(|r| tb.get(r)) {
            return Ok(None);
        }
        let mut x = Gf2Vector::zeros(self.cols);
        for (i, &p) in self.pivots.iter().enumerate() {
            if tb.get(i) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }
}
