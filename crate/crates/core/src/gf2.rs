//! Dense bit-packed linear algebra over GF(2).
//!
//! Vectors and matrix rows are stored in little-endian `u64` words: bit `j`
//! of a row lives in word `j / 64` at position `j % 64`. Padding bits past
//! the logical length are always zero, so word-wise equality, XOR and
//! popcount need no masking.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::error::{Error, Result};

const WORD: usize = 64;

#[inline]
fn words_for(bits: usize) -> usize {
    bits.div_ceil(WORD)
}

#[inline]
pub(crate) fn xor_into(dst: &mut [u64], src: &[u64]) {
    for (d, s) in dst.iter_mut().zip(src) {
        *d ^= *s;
    }
}

#[inline]
pub(crate) fn popcount(words: &[u64]) -> usize {
    words.iter().map(|w| w.count_ones() as usize).sum()
}

#[inline]
pub(crate) fn dot_parity(a: &[u64], b: &[u64]) -> bool {
    let mut acc = 0u64;
    for (x, y) in a.iter().zip(b) {
        acc ^= x & y;
    }
    acc.count_ones() & 1 == 1
}

/// Lexicographic order on bit strings read from index 0 upward.
fn lex_cmp_words(a: &[u64], b: &[u64]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        let diff = x ^ y;
        if diff != 0 {
            let first = diff.trailing_zeros();
            // The vector holding a zero at the first differing bit is smaller.
            return if (x >> first) & 1 == 0 { Ordering::Less } else { Ordering::Greater };
        }
    }
    Ordering::Equal
}

/// A binary vector of fixed length.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryVector {
    len: usize,
    words: Vec<u64>,
}

impl BinaryVector {
    pub fn zeros(len: usize) -> Self {
        Self { len, words: vec![0; words_for(len)] }
    }

    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I) -> Self {
        let mut words = Vec::new();
        let mut len = 0;
        for bit in bits {
            if len % WORD == 0 {
                words.push(0);
            }
            if bit {
                words[len / WORD] |= 1 << (len % WORD);
            }
            len += 1;
        }
        Self { len, words }
    }

    pub fn from_indices(len: usize, ones: &[usize]) -> Self {
        let mut v = Self::zeros(len);
        for &i in ones {
            v.set(i, true);
        }
        v
    }

    pub(crate) fn from_words(len: usize, words: Vec<u64>) -> Self {
        debug_assert_eq!(words.len(), words_for(len));
        Self { len, words }
    }

    /// Parses a string of `0`/`1` characters; index 0 is the first character.
    pub fn parse(s: &str) -> Result<Self> {
        let mut bits = Vec::with_capacity(s.len());
        for ch in s.chars() {
            match ch {
                '0' => bits.push(false),
                '1' => bits.push(true),
                '_' | ' ' => {}
                _ => return Err(Error::Invalid(alloc::format!("not a bit: {ch:?}"))),
            }
        }
        Ok(Self::from_bits(bits))
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

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    pub fn get(&self, i: usize) -> bool {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len, "bit index {i} out of range {}", self.len);
        let mask = 1u64 << (i % WORD);
        if value {
            self.words[i / WORD] |= mask;
        } else {
            self.words[i / WORD] &= !mask;
        }
    }

    pub fn flip(&mut self, i: usize) {
        assert!(i < self.len);
        self.words[i / WORD] ^= 1 << (i % WORD);
    }

    /// Hamming weight.
    pub fn weight(&self) -> usize {
        popcount(&self.words)
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn xor_assign(&mut self, other: &BinaryVector) {
        assert_eq!(self.len, other.len);
        xor_into(&mut self.words, &other.words);
    }

    pub fn xor(&self, other: &BinaryVector) -> BinaryVector {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Inner product mod 2.
    pub fn dot(&self, other: &BinaryVector) -> bool {
        assert_eq!(self.len, other.len);
        dot_parity(&self.words, &other.words)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            core::iter::from_fn(move || {
                if rest == 0 {
                    None
                } else {
                    let tz = rest.trailing_zeros() as usize;
                    rest &= rest - 1;
                    Some(wi * WORD + tz)
                }
            })
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }

    pub fn lex_cmp(&self, other: &BinaryVector) -> Ordering {
        lex_cmp_words(&self.words, &other.words)
    }

    /// Bits packed LSB-first into bytes (`bit i` is bit `i % 8` of byte `i / 8`).
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = vec![0u8; self.len.div_ceil(8)];
        for i in self.ones() {
            out[i / 8] |= 1 << (i % 8);
        }
        out
    }

    pub fn from_bytes(len: usize, bytes: &[u8]) -> Result<Self> {
        if bytes.len() != len.div_ceil(8) {
            return Err(Error::DimensionMismatch { expected: len.div_ceil(8), found: bytes.len() });
        }
        let mut v = Self::zeros(len);
        for (bi, &b) in bytes.iter().enumerate() {
            for bit in 0..8 {
                if (b >> bit) & 1 == 1 {
                    let i = bi * 8 + bit;
                    if i >= len {
                        return Err(Error::Invalid("padding bits set".into()));
                    }
                    v.set(i, true);
                }
            }
        }
        Ok(v)
    }

    /// Left half `v` of a symplectic vector `(v|u)`.
    pub fn left_half(&self) -> Result<BinaryVector> {
        let n = self.half_len()?;
        Ok(BinaryVector::from_bits((0..n).map(|i| self.get(i))))
    }

    pub fn right_half(&self) -> Result<BinaryVector> {
        let n = self.half_len()?;
        Ok(BinaryVector::from_bits((n..2 * n).map(|i| self.get(i))))
    }

    pub fn concat(&self, other: &BinaryVector) -> BinaryVector {
        BinaryVector::from_bits(self.iter().chain(other.iter()))
    }

    fn half_len(&self) -> Result<usize> {
        if self.len % 2 == 1 {
            Err(Error::OddLength(self.len))
        } else {
            Ok(self.len / 2)
        }
    }
}

impl fmt::Debug for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinaryVector({self})")
    }
}

impl fmt::Display for BinaryVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

/// A Pauli operator up to phase, written as the binary vector `(v|u)` of
/// its X and Z parts.
pub type PauliVector = BinaryVector;

/// Trace (symplectic) inner product `u1·v2 + v1·u2` of two `(v|u)` vectors.
/// It vanishes exactly when the two Pauli operators commute.
pub fn trace_inner(e1: &BinaryVector, e2: &BinaryVector) -> Result<bool> {
    if e1.len() != e2.len() {
        return Err(Error::DimensionMismatch { expected: e1.len(), found: e2.len() });
    }
    let (v1, u1) = (e1.left_half()?, e1.right_half()?);
    let (v2, u2) = (e2.left_half()?, e2.right_half()?);
    Ok(u1.dot(&v2) ^ v1.dot(&u2))
}

/// A dense binary matrix, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinaryMatrix {
    rows: usize,
    cols: usize,
    stride: usize,
    data: Vec<u64>,
}

/// Reduced row-echelon form together with rank and pivot columns.
#[derive(Debug, Clone)]
pub struct Rref {
    pub matrix: BinaryMatrix,
    pub rank: usize,
    pub pivots: Vec<usize>,
}

impl BinaryMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        Self { rows, cols, stride, data: vec![0; rows * stride] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from equal-length rows. With no rows, `cols` fixes the width.
    pub fn from_rows(cols: usize, rows: &[BinaryVector]) -> Result<Self> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, r) in rows.iter().enumerate() {
            if r.len() != cols {
                return Err(Error::DimensionMismatch { expected: cols, found: r.len() });
            }
            m.row_words_mut(i).copy_from_slice(r.words());
        }
        Ok(m)
    }

    /// Parses rows of `0`/`1` characters separated by `;` or newlines.
    pub fn parse(s: &str) -> Result<Self> {
        let rows: Vec<BinaryVector> = s
            .split([';', '\n'])
            .map(str::trim)
            .filter(|r| !r.is_empty())
            .map(BinaryVector::parse)
            .collect::<Result<_>>()?;
        let cols = rows.first().map_or(0, BinaryVector::len);
        Self::from_rows(cols, &rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        assert!(r < self.rows && c < self.cols);
        (self.data[r * self.stride + c / WORD] >> (c % WORD)) & 1 == 1
    }

    pub fn set(&mut self, r: usize, c: usize, value: bool) {
        assert!(r < self.rows && c < self.cols);
        let w = &mut self.data[r * self.stride + c / WORD];
        let mask = 1u64 << (c % WORD);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub(crate) fn row_words(&self, r: usize) -> &[u64] {
        &self.data[r * self.stride..(r + 1) * self.stride]
    }

    fn row_words_mut(&mut self, r: usize) -> &mut [u64] {
        &mut self.data[r * self.stride..(r + 1) * self.stride]
    }

    pub fn row(&self, r: usize) -> BinaryVector {
        BinaryVector::from_words(self.cols, self.row_words(r).to_vec())
    }

    pub fn row_vectors(&self) -> Vec<BinaryVector> {
        (0..self.rows).map(|r| self.row(r)).collect()
    }

    pub fn column(&self, c: usize) -> BinaryVector {
        BinaryVector::from_bits((0..self.rows).map(|r| self.get(r, c)))
    }

    pub fn row_weight(&self, r: usize) -> usize {
        popcount(self.row_words(r))
    }

    pub fn column_weight(&self, c: usize) -> usize {
        (0..self.rows).filter(|&r| self.get(r, c)).count()
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
        xor_into(a, b);
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.data.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn transpose(&self) -> BinaryMatrix {
        let mut t = BinaryMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in BinaryVector::from_words(self.cols, self.row_words(r).to_vec()).ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// Matrix product `self · other`.
    pub fn mul(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let mut out = BinaryMatrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            let ones: Vec<usize> = self.row(r).ones().collect();
            let dst = out.row_words_mut(r);
            for k in ones {
                xor_into(dst, other.row_words(k));
            }
        }
        Ok(out)
    }

    /// `self · otherᵀ`, i.e. all pairwise row inner products.
    pub fn mul_transpose(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut out = BinaryMatrix::zeros(self.rows, other.rows);
        for i in 0..self.rows {
            for j in 0..other.rows {
                if dot_parity(self.row_words(i), other.row_words(j)) {
                    out.set(i, j, true);
                }
            }
        }
        Ok(out)
    }

    /// `self · xᵀ` as a vector of length `rows`.
    pub fn mul_vec(&self, x: &BinaryVector) -> Result<BinaryVector> {
        if x.len() != self.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: x.len() });
        }
        Ok(BinaryVector::from_bits((0..self.rows).map(|r| dot_parity(self.row_words(r), x.words()))))
    }

    /// Row combination `σ · self` selected by the set bits of `sigma`.
    pub fn combine_rows(&self, sigma: &BinaryVector) -> Result<BinaryVector> {
        if sigma.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: sigma.len() });
        }
        let mut out = BinaryVector::zeros(self.cols);
        for r in sigma.ones() {
            xor_into(out.words_mut(), self.row_words(r));
        }
        Ok(out)
    }

    /// Reduced row-echelon form by Gauss–Jordan elimination.
    pub fn rref(&self) -> Rref {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut rank = 0;
        for c in 0..self.cols {
            if rank == m.rows {
                break;
            }
            let Some(p) = (rank..m.rows).find(|&r| m.get(r, c)) else { continue };
            m.swap_rows(rank, p);
            for r in 0..m.rows {
                if r != rank && m.get(r, c) {
                    m.xor_rows(r, rank);
                }
            }
            pivots.push(c);
            rank += 1;
        }
        Rref { matrix: m, rank, pivots }
    }

    pub fn rank(&self) -> usize {
        self.rref().rank
    }

    /// Basis of `{x : self · xᵀ = 0}`, one vector per row.
    pub fn nullspace(&self) -> BinaryMatrix {
        let Rref { matrix: r, rank, pivots } = self.rref();
        let mut is_pivot = vec![false; self.cols];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..self.cols).filter(|&c| !is_pivot[c]).collect();
        let mut out = BinaryMatrix::zeros(free.len(), self.cols);
        for (i, &f) in free.iter().enumerate() {
            out.set(i, f, true);
            for (row, &p) in pivots.iter().enumerate().take(rank) {
                if r.get(row, f) {
                    out.set(i, p, true);
                }
            }
        }
        out
    }

    /// Full-row-rank matrix `M*` with `M·M*ᵀ = 0` and `rank M + rank M* = cols`.
    pub fn exact_dual(&self) -> BinaryMatrix {
        self.nullspace()
    }

    /// The nonzero rows of the reduced row-echelon form: a basis of the row space.
    pub fn row_basis(&self) -> BinaryMatrix {
        let Rref { matrix, rank, .. } = self.rref();
        matrix.select_rows(&(0..rank).collect::<Vec<_>>())
    }

    /// Some `x` with `self · xᵀ = s`, or `None` if the system is inconsistent.
    pub fn solve(&self, s: &BinaryVector) -> Result<Option<BinaryVector>> {
        if s.len() != self.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: s.len() });
        }
        let mut aug = BinaryMatrix::zeros(self.rows, self.cols + 1);
        for r in 0..self.rows {
            for c in self.row(r).ones() {
                aug.set(r, c, true);
            }
            aug.set(r, self.cols, s.get(r));
        }
        let Rref { matrix, rank, pivots } = aug.rref();
        if pivots.last() == Some(&self.cols) {
            return Ok(None);
        }
        let mut x = BinaryVector::zeros(self.cols);
        for (row, &p) in pivots.iter().enumerate().take(rank) {
            if matrix.get(row, self.cols) {
                x.set(p, true);
            }
        }
        Ok(Some(x))
    }

    /// Inverse of a square matrix, or `None` when singular.
    pub fn inverse(&self) -> Option<BinaryMatrix> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(BinaryMatrix::zeros(0, 0));
        }
        let aug = self.hstack(&BinaryMatrix::identity(n)).expect("rows match");
        let Rref { matrix, rank, pivots } = aug.rref();
        if rank < n || pivots.get(n - 1).is_some_and(|&p| p >= n) {
            return None;
        }
        Some(matrix.select_columns(&(n..2 * n).collect::<Vec<_>>()))
    }

    /// `n×n` circulant whose row `i` is the coefficient list shifted right by `i`.
    /// `poly[d]` is the coefficient of `x^d`.
    pub fn circulant(poly: &[bool], n: usize) -> Result<BinaryMatrix> {
        let degree = poly.iter().rposition(|&b| b).unwrap_or(0);
        if degree >= n || (n == 0 && !poly.is_empty()) {
            return Err(Error::PolynomialDegree { degree, n });
        }
        let mut m = BinaryMatrix::zeros(n, n);
        for i in 0..n {
            for (d, &c) in poly.iter().enumerate() {
                if c {
                    m.set(i, (i + d) % n, true);
                }
            }
        }
        Ok(m)
    }

    /// Kronecker product: entry `((a,i),(b,j))` is `A[a][b]·B[i][j]`.
    pub fn kron(&self, other: &BinaryMatrix) -> BinaryMatrix {
        let mut out = BinaryMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for a in 0..self.rows {
            for b in self.row(a).ones() {
                for i in 0..other.rows {
                    for j in other.row(i).ones() {
                        out.set(a * other.rows + i, b * other.cols + j, true);
                    }
                }
            }
        }
        out
    }

    pub fn hstack(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.rows != other.rows {
            return Err(Error::DimensionMismatch { expected: self.rows, found: other.rows });
        }
        let mut out = BinaryMatrix::zeros(self.rows, self.cols + other.cols);
        for r in 0..self.rows {
            for c in self.row(r).ones() {
                out.set(r, c, true);
            }
            for c in other.row(r).ones() {
                out.set(r, self.cols + c, true);
            }
        }
        Ok(out)
    }

    pub fn vstack(&self, other: &BinaryMatrix) -> Result<BinaryMatrix> {
        if self.cols != other.cols {
            return Err(Error::DimensionMismatch { expected: self.cols, found: other.cols });
        }
        let mut data = self.data.clone();
        data.extend_from_slice(&other.data);
        Ok(BinaryMatrix { rows: self.rows + other.rows, cols: self.cols, stride: self.stride, data })
    }

    /// `diag(A, B)`.
    pub fn block_diag(&self, other: &BinaryMatrix) -> BinaryMatrix {
        let top = self.hstack(&BinaryMatrix::zeros(self.rows, other.cols)).expect("rows match");
        let bottom = BinaryMatrix::zeros(other.rows, self.cols).hstack(other).expect("rows match");
        top.vstack(&bottom).expect("cols match")
    }

    /// Swaps the left and right column halves: `(A|B) → (B|A)`.
    pub fn conjugate(&self) -> Result<BinaryMatrix> {
        if self.cols % 2 == 1 {
            return Err(Error::OddLength(self.cols));
        }
        let n = self.cols / 2;
        let perm: Vec<usize> = (0..self.cols).map(|c| (c + n) % self.cols).collect();
        Ok(self.permute_columns(&perm))
    }

    /// Column `c` of the result is column `perm[c]` of `self`.
    pub fn permute_columns(&self, perm: &[usize]) -> BinaryMatrix {
        assert_eq!(perm.len(), self.cols);
        let mut out = BinaryMatrix::zeros(self.rows, self.cols);
        for r in 0..self.rows {
            for (c, &src) in perm.iter().enumerate() {
                if self.get(r, src) {
                    out.set(r, c, true);
                }
            }
        }
        out
    }

    pub fn select_rows(&self, rows: &[usize]) -> BinaryMatrix {
        let mut out = BinaryMatrix::zeros(rows.len(), self.cols);
        for (i, &r) in rows.iter().enumerate() {
            out.row_words_mut(i).copy_from_slice(self.row_words(r));
        }
        out
    }

    pub fn select_columns(&self, cols: &[usize]) -> BinaryMatrix {
        let mut out = BinaryMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (i, &c) in cols.iter().enumerate() {
                if self.get(r, c) {
                    out.set(r, i, true);
                }
            }
        }
        out
    }

    /// Rows sorted lexicographically; handy for multiset comparisons.
    pub fn sorted_rows(&self) -> Vec<BinaryVector> {
        let mut rows = self.row_vectors();
        rows.sort_by(BinaryVector::lex_cmp);
        rows
    }

    pub fn to_strings(&self) -> Vec<String> {
        self.row_vectors().iter().map(|r| alloc::format!("{r}")).collect()
    }
}

impl fmt::Debug for BinaryMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "BinaryMatrix {}x{} [", self.rows, self.cols)?;
        for r in 0..self.rows {
            writeln!(f, "  {}", self.row(r))?;
        }
        write!(f, "]")
    }
}

/// Reduced basis of a row space, for membership tests and reductions.
#[derive(Debug, Clone)]
pub struct EchelonBasis {
    basis: BinaryMatrix,
    pivots: Vec<usize>,
}

impl EchelonBasis {
    pub fn new(m: &BinaryMatrix) -> Self {
        let Rref { matrix, rank, pivots } = m.rref();
        Self { basis: matrix.select_rows(&(0..rank).collect::<Vec<_>>()), pivots }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn basis(&self) -> &BinaryMatrix {
        &self.basis
    }

    /// Clears every pivot position of `v` using basis rows.
    pub fn reduce(&self, v: &mut BinaryVector) {
        for (i, &p) in self.pivots.iter().enumerate() {
            if v.get(p) {
                xor_into(v.words_mut(), self.basis.row_words(i));
            }
        }
    }

    pub fn contains(&self, v: &BinaryVector) -> bool {
        let mut r = v.clone();
        self.reduce(&mut r);
        r.is_zero()
    }
}

/// Calls `visit` on every vector of `start + span(basis rows)`, in Gray-code
/// order, so consecutive vectors differ by exactly one basis row.
/// `visit` receives the current words and the index of the row just added
/// (`None` for the starting vector).
pub(crate) fn gray_walk<F>(basis: &BinaryMatrix, start: &[u64], mut visit: F)
where
    F: FnMut(&[u64], Option<usize>),
{
    let r = basis.rows();
    assert!(r < 63, "gray walk over 2^{r} elements");
    let mut cur = start.to_vec();
    visit(&cur, None);
    let total: u64 = 1 << r;
    if basis.cols() <= WORD {
        let rows: Vec<u64> = (0..r).map(|i| basis.row_words(i).first().copied().unwrap_or(0)).collect();
        let mut w = cur.first().copied().unwrap_or(0);
        for i in 1..total {
            let k = i.trailing_zeros() as usize;
            w ^= rows[k];
            if let Some(c) = cur.first_mut() {
                *c = w;
            }
            visit(&cur, Some(k));
        }
    } else {
        for i in 1..total {
            let k = i.trailing_zeros() as usize;
            xor_into(&mut cur, basis.row_words(k));
            visit(&cur, Some(k));
        }
    }
}

/// Search effort for [`coset_min_weight`].
#[derive(Debug, Clone, Copy)]
pub struct CosetSearch {
    /// Full enumeration is used when `rank ≤ budget_log2`.
    pub budget_log2: u32,
    /// Random information sets tried beyond the budget.
    pub isd_iterations: usize,
    pub seed: u64,
}

impl Default for CosetSearch {
    fn default() -> Self {
        Self { budget_log2: 24, isd_iterations: 2000, seed: 0x5eed }
    }
}

/// Outcome of a coset minimum-weight search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CosetMin {
    pub weight: usize,
    /// Lexicographically smallest member found at that weight.
    pub representative: BinaryVector,
    /// True when the whole coset was enumerated.
    pub exact: bool,
}

/// Minimum of `wgt(v + σG)` over all `σ`.
///
/// Exhaustive (Gray code) when `2^rank(G)` fits the budget, otherwise a
/// randomized information-set search reporting `exact = false`. With
/// `cap = Some(w)` the search may stop as soon as a member of weight `≤ w`
/// shows up; such early exits are not exact unless the weight is 0.
pub fn coset_min_weight(
    v: &BinaryVector,
    g: &BinaryMatrix,
    cap: Option<usize>,
    search: &CosetSearch,
) -> Result<CosetMin> {
    if v.len() != g.cols() {
        return Err(Error::DimensionMismatch { expected: g.cols(), found: v.len() });
    }
    let basis = EchelonBasis::new(g);
    let rank = basis.rank();
    if rank as u32 <= search.budget_log2 {
        let mut best_w = usize::MAX;
        let mut best: Vec<u64> = v.words().to_vec();
        let mut stopped = false;
        gray_walk(basis.basis(), v.words(), |cur, _| {
            if stopped {
                return;
            }
            let w = popcount(cur);
            if w < best_w || (w == best_w && lex_cmp_words(cur, &best) == Ordering::Less) {
                best_w = w;
                best.copy_from_slice(cur);
                if cap.is_some_and(|c| w <= c) && w > 0 {
                    stopped = true;
                }
            }
        });
        return Ok(CosetMin {
            weight: best_w,
            representative: BinaryVector::from_words(v.len(), best),
            exact: !stopped || best_w == 0,
        });
    }
    Ok(isd_coset_min(v, basis.basis(), cap, search))
}

fn isd_coset_min(v: &BinaryVector, basis: &BinaryMatrix, cap: Option<usize>, search: &CosetSearch) -> CosetMin {
    let n = v.len();
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(search.seed);
    let mut best = {
        let mut r = v.clone();
        EchelonBasis::new(basis).reduce(&mut r);
        r
    };
    let consider = |cand: &BinaryVector, best: &mut BinaryVector| {
        let (w, bw) = (cand.weight(), best.weight());
        if w < bw || (w == bw && cand.lex_cmp(best) == Ordering::Less) {
            *best = cand.clone();
        }
    };
    let mut order: Vec<usize> = (0..n).collect();
    for _ in 0..search.isd_iterations {
        if cap.is_some_and(|c| best.weight() <= c) {
            break;
        }
        order.shuffle(&mut rng);
        let permuted = basis.permute_columns(&order);
        let Rref { matrix, rank, pivots } = permuted.rref();
        // Undo the permutation so rows live in the original coordinates.
        let mut inverse = vec![0; n];
        for (new, &old) in order.iter().enumerate() {
            inverse[old] = new;
        }
        let rows: Vec<BinaryVector> = (0..rank).map(|i| matrix.row(i).permuted(&inverse)).collect();
        let pivots: Vec<usize> = pivots.iter().map(|&p| order[p]).collect();
        let mut cand = v.clone();
        for (row, &p) in rows.iter().zip(&pivots) {
            if cand.get(p) {
                cand.xor_assign(row);
            }
        }
        consider(&cand, &mut best);
        for (i, ri) in rows.iter().enumerate() {
            let one = cand.xor(ri);
            consider(&one, &mut best);
            for rj in &rows[i + 1..] {
                consider(&one.xor(rj), &mut best);
            }
        }
    }
    CosetMin { weight: best.weight(), representative: best, exact: false }
}

impl BinaryVector {
    /// Maps a vector from permuted coordinates back, where `inverse[old] = new`.
    fn permuted(&self, inverse: &[usize]) -> BinaryVector {
        BinaryVector::from_bits((0..self.len).map(|old| self.get(inverse[old])))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(s: &str) -> BinaryMatrix {
        BinaryMatrix::parse(s).unwrap()
    }

    fn bits(s: &str) -> Vec<bool> {
        s.chars().map(|c| c == '1').collect()
    }

    #[test]
    fn rref_identity_and_zero() {
        let id = BinaryMatrix::identity(3);
        let r = id.rref();
        assert_eq!(r.rank, 3);
        assert_eq!(r.matrix, id);
        let z = BinaryMatrix::zeros(2, 4);
        let r = z.rref();
        assert_eq!(r.rank, 0);
        assert!(r.matrix.is_zero());
    }

    #[test]
    fn circulant_one_plus_x_has_corank_one() {
        // Every row has even weight and the rows sum to zero; any three are independent.
        let c = BinaryMatrix::circulant(&bits("11"), 4).unwrap();
        assert_eq!(c.rank(), 3);
        let c3 = BinaryMatrix::circulant(&bits("11"), 3).unwrap();
        assert_eq!(c3, m("110;011;101"));
        assert_eq!(BinaryMatrix::circulant(&bits("1"), 2).unwrap(), BinaryMatrix::identity(2));
    }

    #[test]
    fn circulant_hamming_polynomial_rank() {
        // gcd(1+x+x^3, x^7-1) has degree 3, so the rank is 7 - 3.
        let c = BinaryMatrix::circulant(&bits("1101"), 7).unwrap();
        assert_eq!(c.rank(), 4);
    }

    #[test]
    fn circulant_rejects_high_degree() {
        assert!(matches!(
            BinaryMatrix::circulant(&bits("0001"), 3),
            Err(Error::PolynomialDegree { degree: 3, n: 3 })
        ));
    }

    #[test]
    fn exact_dual_examples() {
        let d = m("11").exact_dual();
        assert_eq!(d, m("11"));
        let d = BinaryMatrix::identity(4).exact_dual();
        assert_eq!((d.rows(), d.cols()), (0, 4));
        let c = BinaryMatrix::circulant(&bits("11"), 5).unwrap();
        let d = c.exact_dual();
        assert_eq!(d, m("11111"));
        let z = BinaryMatrix::zeros(2, 3).nullspace();
        assert_eq!(z.rank(), 3);
    }

    #[test]
    fn trace_inner_examples() {
        let a = BinaryVector::parse("1000").unwrap();
        let b = BinaryVector::parse("0010").unwrap();
        assert!(trace_inner(&a, &b).unwrap());
        assert!(!trace_inner(&a, &a).unwrap());
        // (11|01)·(01|11): u1·v2 = 01·01 = 1, v1·u2 = 11·11 = 0.
        let a = BinaryVector::parse("1101").unwrap();
        let b = BinaryVector::parse("0111").unwrap();
        assert!(trace_inner(&a, &b).unwrap());
        assert!(matches!(trace_inner(&BinaryVector::zeros(3), &BinaryVector::zeros(3)), Err(Error::OddLength(3))));
        assert!(trace_inner(&BinaryVector::zeros(2), &BinaryVector::zeros(4)).is_err());
    }

    #[test]
    fn conjugate_swaps_halves() {
        let g = m("1100;0011");
        assert_eq!(g.conjugate().unwrap(), m("0011;1100"));
        assert!(m("111").conjugate().is_err());
    }

    #[test]
    fn solve_examples() {
        let id = BinaryMatrix::identity(5);
        let s = BinaryVector::parse("10110").unwrap();
        assert_eq!(id.solve(&s).unwrap().unwrap(), s);
        let c = BinaryMatrix::circulant(&bits("11"), 4).unwrap();
        assert_eq!(c.solve(&BinaryVector::zeros(4)).unwrap().unwrap(), BinaryVector::zeros(4));
        // Odd-weight targets are outside the even-weight image of 1+x.
        assert!(c.solve(&BinaryVector::parse("1000").unwrap()).unwrap().is_none());
    }

    #[test]
    fn kron_with_identity_is_block_diagonal() {
        let a = m("11;01");
        let k = BinaryMatrix::identity(2).kron(&a);
        assert_eq!(k, m("1100;0100;0011;0001"));
        let k = a.kron(&BinaryMatrix::identity(2));
        assert_eq!(k, m("1010;0101;0010;0001"));
    }

    #[test]
    fn coset_min_weight_basics() {
        let g = m("1100;0110;0011");
        let s = CosetSearch::default();
        let r = coset_min_weight(&BinaryVector::zeros(4), &g, None, &s).unwrap();
        assert_eq!((r.weight, r.exact), (0, true));
        let r = coset_min_weight(&g.row(1), &g, None, &s).unwrap();
        assert_eq!((r.weight, r.exact), (0, true));
        let v = BinaryVector::parse("1110").unwrap();
        let r = coset_min_weight(&v, &g, None, &s).unwrap();
        assert_eq!(r.weight, 1);
        // Lexicographically smallest weight-1 member is 0001.
        assert_eq!(r.representative, BinaryVector::parse("0001").unwrap());
    }

    #[test]
    fn isd_finds_small_cosets() {
        let g = m("1100;0110;0011");
        let s = CosetSearch { budget_log2: 0, isd_iterations: 50, seed: 1 };
        let r = coset_min_weight(&BinaryVector::parse("1110").unwrap(), &g, None, &s).unwrap();
        assert_eq!(r.weight, 1);
        assert!(!r.exact);
    }

    fn arb_matrix(max_r: usize, max_c: usize) -> impl Strategy<Value = BinaryMatrix> {
        (1..=max_r, 1..=max_c).prop_flat_map(|(r, c)| {
            proptest::collection::vec(any::<bool>(), r * c).prop_map(move |b| {
                let rows: Vec<BinaryVector> =
                    b.chunks(c).map(|ch| BinaryVector::from_bits(ch.iter().copied())).collect();
                BinaryMatrix::from_rows(c, &rows).unwrap()
            })
        })
    }

    proptest! {
        #[test]
        fn dual_is_orthogonal_with_complementary_rank(g in arb_matrix(8, 80)) {
            let d = g.exact_dual();
            prop_assert!(g.mul_transpose(&d).unwrap().is_zero());
            prop_assert_eq!(g.rank() + d.rank(), g.cols());
            prop_assert_eq!(d.rank(), d.rows());
        }

        #[test]
        fn conjugate_is_involution(g in arb_matrix(6, 12)) {
            prop_assume!(g.cols() % 2 == 0);
            prop_assert_eq!(g.conjugate().unwrap().conjugate().unwrap(), g);
        }

        #[test]
        fn trace_inner_is_dot_with_conjugate(a in proptest::collection::vec(any::<bool>(), 10),
                                             b in proptest::collection::vec(any::<bool>(), 10)) {
            let (a, b) = (BinaryVector::from_bits(a), BinaryVector::from_bits(b));
            let bc = BinaryMatrix::from_rows(10, core::slice::from_ref(&b)).unwrap().conjugate().unwrap().row(0);
            prop_assert_eq!(trace_inner(&a, &b).unwrap(), a.dot(&bc));
        }

        #[test]
        fn solve_round_trips(g in arb_matrix(10, 70), x in proptest::collection::vec(any::<bool>(), 70)) {
            let x = BinaryVector::from_bits(x.into_iter().take(g.cols()));
            let s = g.mul_vec(&x).unwrap();
            let y = g.solve(&s).unwrap().expect("consistent by construction");
            prop_assert_eq!(g.mul_vec(&y).unwrap(), s);
        }

        #[test]
        fn kron_rank_multiplies(a in arb_matrix(3, 3), b in arb_matrix(3, 3)) {
            prop_assert_eq!(a.kron(&b).rank(), a.rank() * b.rank());
        }

        #[test]
        fn coset_min_matches_brute_force(g in arb_matrix(6, 14), v in proptest::collection::vec(any::<bool>(), 14)) {
            let v = BinaryVector::from_bits(v.into_iter().take(g.cols()));
            let r = coset_min_weight(&v, &g, None, &CosetSearch::default()).unwrap();
            // Brute force over every σ, including redundant rows.
            let mut best = usize::MAX;
            for mask in 0u32..(1 << g.rows()) {
                let sigma = BinaryVector::from_bits((0..g.rows()).map(|i| mask >> i & 1 == 1));
                best = best.min(v.xor(&g.combine_rows(&sigma).unwrap()).weight());
            }
            prop_assert!(r.exact);
            prop_assert_eq!(r.weight, best);
        }
    }

    #[test]
    fn bytes_round_trip() {
        let v = BinaryVector::parse("1011000011").unwrap();
        assert_eq!(BinaryVector::from_bytes(10, &v.to_bytes()).unwrap(), v);
    }

    #[test]
    fn gray_walk_visits_whole_span() {
        let g = m("1100;0110");
        let mut seen = Vec::new();
        gray_walk(&g, BinaryVector::zeros(4).words(), |w, _| seen.push(w[0]));
        seen.sort_unstable();
        assert_eq!(seen, [0b0000, 0b0011, 0b0101, 0b0110]);
    }
}
