//! `M_n(F_q)` arithmetic, rank/determinant/inverse, and the canonical
//! integer encoding behind exhaustive enumeration and bitset membership.
//!
//! A matrix encodes to the integer whose row-major entries are its base-q
//! digits (entry (0,0) least significant), so the additive group of the
//! ring maps to digitwise addition on indices. Rectangular shapes share
//! the same entry type because the solvability tests need ranks of n x 2n
//! and n x 3n blocks.

use std::fmt;

use crate::field::{FieldElement, FieldSpec};
use crate::{Error, Result};

/// Canonical index of an n x n matrix: an integer in `[0, q^(n^2))`.
pub type MatrixIndex = u64;

/// Full enumeration ceiling for `q^(n^2)`.
pub const MAX_RING_CARD: u64 = 1 << 30;

/// A dense matrix over `F_q`, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<FieldElement>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for r in 0..self.rows {
            if r > 0 {
                write!(f, "; ")?;
            }
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
        }
        write!(f, "]")
    }
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<FieldElement>) -> Matrix {
        assert_eq!(rows * cols, entries.len());
        Matrix {
            rows,
            cols,
            entries,
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Matrix {
        Matrix {
            rows,
            cols,
            entries: vec![FieldElement::default(); rows * cols],
        }
    }

    pub fn identity(n: usize, field: &FieldSpec) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, field.one());
        }
        m
    }

    /// Builds from integer representatives, row-major.
    pub fn from_reps(field: &FieldSpec, rows: usize, cols: usize, reps: &[u64]) -> Result<Matrix> {
        assert_eq!(rows * cols, reps.len());
        let entries = reps
            .iter()
            .map(|&r| field.element(r))
            .collect::<Result<Vec<_>>>()?;
        Ok(Matrix::new(rows, cols, entries))
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
    pub fn get(&self, r: usize, c: usize) -> FieldElement {
        self.entries[r * self.cols + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: FieldElement) {
        self.entries[r * self.cols + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.rep() == 0)
    }

    /// Horizontal concatenation; all parts must share the row count.
    pub fn hstack(parts: &[&Matrix]) -> Matrix {
        let rows = parts[0].rows;
        assert!(parts.iter().all(|p| p.rows == rows));
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zeros(rows, cols);
        let mut off = 0;
        for p in parts {
            for r in 0..rows {
                for c in 0..p.cols {
                    out.set(r, off + c, p.get(r, c));
                }
            }
            off += p.cols;
        }
        out
    }

    pub fn add(&self, other: &Matrix, field: &FieldSpec) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| field.add(a, b))
            .collect();
        Matrix::new(self.rows, self.cols, entries)
    }

    pub fn sub(&self, other: &Matrix, field: &FieldSpec) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let entries = self
            .entries
            .iter()
            .zip(&other.entries)
            .map(|(&a, &b)| field.sub(a, b))
            .collect();
        Matrix::new(self.rows, self.cols, entries)
    }

    pub fn neg(&self, field: &FieldSpec) -> Matrix {
        let entries = self.entries.iter().map(|&a| field.neg(a)).collect();
        Matrix::new(self.rows, self.cols, entries)
    }

    /// Schoolbook product.
    pub fn mul(&self, other: &Matrix, field: &FieldSpec) -> Matrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Matrix::zeros(self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.rep() == 0 {
                    continue;
                }
                for c in 0..other.cols {
                    let cur = out.get(r, c);
                    out.set(r, c, field.add(cur, field.mul(a, other.get(k, c))));
                }
            }
        }
        out
    }

    /// Rank by Gaussian elimination, defined on any rectangle.
    pub fn rank(&self, field: &FieldSpec) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let pivot = (rank..m.rows).find(|&r| m.get(r, col).rep() != 0);
            let Some(pr) = pivot else { continue };
            m.swap_rows(pr, rank);
            let inv = field.inv(m.get(rank, col)).expect("pivot nonzero");
            m.scale_row(rank, inv, field);
            for r in 0..m.rows {
                if r != rank && m.get(r, col).rep() != 0 {
                    let factor = m.get(r, col);
                    m.row_sub_scaled(r, rank, factor, field);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Determinant and inverse; the inverse is present iff the determinant
    /// is nonzero.
    pub fn det_inv(&self, field: &FieldSpec) -> (FieldElement, Option<Matrix>) {
        assert_eq!(self.rows, self.cols, "det_inv needs a square matrix");
        let n = self.rows;
        let mut m = self.clone();
        let mut aug = Matrix::identity(n, field);
        let mut det = field.one();
        for col in 0..n {
            let pivot = (col..n).find(|&r| m.get(r, col).rep() != 0);
            let Some(pr) = pivot else {
                return (field.zero(), None);
            };
            if pr != col {
                m.swap_rows(pr, col);
                aug.swap_rows(pr, col);
                det = field.neg(det);
            }
            let piv = m.get(col, col);
            det = field.mul(det, piv);
            let inv = field.inv(piv).expect("pivot nonzero");
            m.scale_row(col, inv, field);
            aug.scale_row(col, inv, field);
            for r in 0..n {
                if r != col && m.get(r, col).rep() != 0 {
                    let factor = m.get(r, col);
                    m.row_sub_scaled(r, col, factor, field);
                    aug.row_sub_scaled(r, col, factor, field);
                }
            }
        }
        (det, Some(aug))
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            let tmp = self.get(a, c);
            self.set(a, c, self.get(b, c));
            self.set(b, c, tmp);
        }
    }

    fn scale_row(&mut self, r: usize, s: FieldElement, field: &FieldSpec) {
        for c in 0..self.cols {
            self.set(r, c, field.mul(self.get(r, c), s));
        }
    }

    /// row r -= factor * row src
    fn row_sub_scaled(&mut self, r: usize, src: usize, factor: FieldElement, field: &FieldSpec) {
        for c in 0..self.cols {
            let v = field.sub(self.get(r, c), field.mul(factor, self.get(src, c)));
            self.set(r, c, v);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            let tmp = self.get(r, a);
            self.set(r, a, self.get(r, b));
            self.set(r, b, tmp);
        }
    }
}

/// Invertible `P` (rows x rows) and `Q` (cols x cols) with
/// `P * A * Q = (I_k 0; 0 0)`, plus the rank `k`.
///
/// Forward elimination with the pivot chosen as the lexicographically
/// first nonzero entry of the remaining block; any valid pair works, the
/// fixed order keeps runs reproducible.
pub fn rank_normal_form(field: &FieldSpec, a: &Matrix) -> (Matrix, Matrix, usize) {
    let (rows, cols) = (a.rows(), a.cols());
    let mut m = a.clone();
    let mut p = Matrix::identity(rows, field);
    let mut q = Matrix::identity(cols, field);
    let mut k = 0;
    while k < rows.min(cols) {
        let mut pivot = None;
        'scan: for r in k..rows {
            for c in k..cols {
                if m.get(r, c).rep() != 0 {
                    pivot = Some((r, c));
                    break 'scan;
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        m.swap_rows(pr, k);
        p.swap_rows(pr, k);
        m.swap_cols(pc, k);
        q.swap_cols(pc, k);
        let inv = field.inv(m.get(k, k)).expect("pivot nonzero");
        m.scale_row(k, inv, field);
        p.scale_row(k, inv, field);
        for r in 0..rows {
            if r != k && m.get(r, k).rep() != 0 {
                let factor = m.get(r, k);
                m.row_sub_scaled(r, k, factor, field);
                p.row_sub_scaled(r, k, factor, field);
            }
        }
        // clear row k to the right of the pivot with column operations
        for c in (k + 1)..cols {
            let factor = m.get(k, c);
            if factor.rep() != 0 {
                for r in 0..rows {
                    let v = field.sub(m.get(r, c), field.mul(factor, m.get(r, k)));
                    m.set(r, c, v);
                }
                for r in 0..cols {
                    let v = field.sub(q.get(r, c), field.mul(factor, q.get(r, k)));
                    q.set(r, c, v);
                }
            }
        }
        k += 1;
    }
    (p, q, k)
}

/// The ring `M_n(F_q)` with its enumeration bookkeeping.
#[derive(Clone, PartialEq, Debug)]
pub struct RingSpec {
    field: FieldSpec,
    n: usize,
    card: u64,
}

impl RingSpec {
    pub fn new(field: FieldSpec, n: usize) -> Result<RingSpec> {
        if n < 1 {
            return Err(Error::DimensionMismatch("n must be at least 1".into()));
        }
        let mut card: u128 = 1;
        for _ in 0..n * n {
            card *= field.q() as u128;
            if card > MAX_RING_CARD as u128 {
                return Err(Error::RingTooLarge(card, MAX_RING_CARD));
            }
        }
        Ok(RingSpec {
            field,
            n,
            card: card as u64,
        })
    }

    #[inline]
    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.field.q()
    }

    /// `q^(n^2)`.
    #[inline]
    pub fn card(&self) -> u64 {
        self.card
    }

    pub fn zero_matrix(&self) -> Matrix {
        Matrix::zeros(self.n, self.n)
    }

    pub fn identity_matrix(&self) -> Matrix {
        Matrix::identity(self.n, &self.field)
    }

    /// Row-major base-q digits: entry (r, c) is digit r*n + c.
    pub fn encode(&self, m: &Matrix) -> MatrixIndex {
        debug_assert_eq!((m.rows(), m.cols()), (self.n, self.n));
        let q = self.q();
        let mut idx = 0u64;
        for pos in (0..self.n * self.n).rev() {
            idx = idx * q + m.entries[pos].rep() as u64;
        }
        idx
    }

    pub fn decode(&self, idx: MatrixIndex) -> Result<Matrix> {
        if idx >= self.card {
            return Err(Error::IndexOutOfRange(idx, self.card));
        }
        let q = self.q();
        let mut rest = idx;
        let mut entries = Vec::with_capacity(self.n * self.n);
        for _ in 0..self.n * self.n {
            entries.push(self.field.element(rest % q).expect("digit < q"));
            rest /= q;
        }
        Ok(Matrix::new(self.n, self.n, entries))
    }

    /// Digitwise index addition: `encode(decode(a) + decode(b))` without
    /// the decode round-trip.
    pub fn index_add(&self, a: MatrixIndex, b: MatrixIndex) -> MatrixIndex {
        let q = self.q();
        let (mut ra, mut rb) = (a, b);
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.n * self.n {
            let s = self
                .field
                .add(
                    self.field.element(ra % q).expect("digit"),
                    self.field.element(rb % q).expect("digit"),
                )
                .rep() as u64;
            out += s * place;
            place *= q;
            ra /= q;
            rb /= q;
        }
        out
    }

    pub fn index_neg(&self, a: MatrixIndex) -> MatrixIndex {
        let q = self.q();
        let mut ra = a;
        let mut out = 0u64;
        let mut place = 1u64;
        for _ in 0..self.n * self.n {
            let s = self
                .field
                .neg(self.field.element(ra % q).expect("digit"))
                .rep() as u64;
            out += s * place;
            place *= q;
            ra /= q;
        }
        out
    }

    pub fn index_sub(&self, a: MatrixIndex, b: MatrixIndex) -> MatrixIndex {
        self.index_add(a, self.index_neg(b))
    }

    /// All matrices in increasing index order.
    pub fn matrices(&self) -> impl Iterator<Item = Matrix> + '_ {
        (0..self.card).map(|i| self.decode(i).expect("in range"))
    }
}

/// Predicate for filtered enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MatrixFilter {
    RankIs(usize),
    Invertible,
    Singular,
}

impl MatrixFilter {
    pub fn accepts(&self, spec: &RingSpec, m: &Matrix) -> bool {
        match *self {
            MatrixFilter::RankIs(k) => m.rank(spec.field()) == k,
            MatrixFilter::Invertible => m.det_inv(spec.field()).0.rep() != 0,
            MatrixFilter::Singular => m.det_inv(spec.field()).0.rep() == 0,
        }
    }
}

/// Enumerates matrices in increasing index order, optionally filtered.
pub fn enumerate<'a>(
    spec: &'a RingSpec,
    filter: Option<MatrixFilter>,
) -> impl Iterator<Item = Matrix> + 'a {
    spec.matrices()
        .filter(move |m| filter.is_none_or(|f| f.accepts(spec, m)))
}
