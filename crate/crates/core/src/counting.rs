//! Closed-form counts: rank statistics over `F_q`, solution counts of the
//! one- and two-sided linear systems behind the product graphs, and the
//! exact degrees of the auxiliary Cayley graph families. Each formula is
//! paired with an exhaustive-enumeration oracle in the tests.

use std::fmt;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::field::FieldSpec;
use crate::matrix::{rank_normal_form, Matrix};
use crate::{Error, Result};

/// `Q_k(q^m) = (q^m - 1)(q^m - q) ... (q^m - q^(k-1))`; the empty product
/// for `k = 0`.
pub fn q_factor(q: u64, m: u32, k: u32) -> BigUint {
    let qm = BigUint::from(q).pow(m);
    let mut acc = BigUint::one();
    let mut qi = BigUint::one();
    for _ in 0..k {
        acc *= &qm - &qi;
        qi *= q;
    }
    acc
}

/// Count of `rows x cols` matrices of a given rank over `F_q`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RankCountQuery {
    pub rows: u32,
    pub cols: u32,
    pub rank: u32,
    pub q: u64,
}

/// `Q_k(q^rows) * Q_k(q^cols) / Q_k(q^k)`, exactly.
pub fn rank_count(query: &RankCountQuery) -> Result<BigUint> {
    let &RankCountQuery {
        rows,
        cols,
        rank: k,
        q,
    } = query;
    if k > rows.min(cols) {
        return Err(Error::IllegalRank(k as usize, rows.min(cols) as usize));
    }
    let num = q_factor(q, rows, k) * q_factor(q, cols, k);
    let den = q_factor(q, k, k);
    debug_assert!((&num % &den).is_zero());
    Ok(num / den)
}

/// Number of solutions `X` (block.cols x rhs.cols) to `block * X = rhs`:
/// zero when the augmented rank grows, else `q^((block.cols - k) * rhs.cols)`
/// with `k = rank(block)`.
pub fn linear_solution_count(field: &FieldSpec, block: &Matrix, rhs: &Matrix) -> Result<u128> {
    if block.rows() != rhs.rows() {
        return Err(Error::DimensionMismatch(format!(
            "block has {} rows, rhs has {}",
            block.rows(),
            rhs.rows()
        )));
    }
    let k = block.rank(field);
    let augmented = Matrix::hstack(&[block, rhs]);
    if augmented.rank(field) != k {
        return Ok(0);
    }
    let free = (block.cols() - k) as u32 * rhs.cols() as u32;
    Ok((field.q() as u128).pow(free))
}

/// Number of solutions `(b, f)` to `b * a_diff + e_diff * f = c_diff`
/// over square n x n matrices.
///
/// Brings both difference matrices to rank normal form, tests the
/// zero-block solvability condition on the transformed right side, and
/// returns `q^(2n^2 - k1*n - k2*n + k1*k2)` when solvable (k1 the rank of
/// `e_diff`, k2 the rank of `a_diff`).
pub fn two_sided_solution_count(
    field: &FieldSpec,
    a_diff: &Matrix,
    e_diff: &Matrix,
    c_diff: &Matrix,
) -> Result<u128> {
    let n = a_diff.rows();
    for m in [a_diff, e_diff, c_diff] {
        if m.rows() != n || m.cols() != n {
            return Err(Error::DimensionMismatch(
                "all arguments must be n x n".into(),
            ));
        }
    }
    let (p1, _q1, k1) = rank_normal_form(field, e_diff);
    let (_p2, q2, k2) = rank_normal_form(field, a_diff);
    let transformed = p1.mul(c_diff, field).mul(&q2, field);
    for i in k1..n {
        for j in k2..n {
            if transformed.get(i, j).rep() != 0 {
                return Ok(0);
            }
        }
    }
    let exponent = 2 * n * n - k1 * n - k2 * n + k1 * k2;
    Ok((field.q() as u128).pow(exponent as u32))
}

/// The four auxiliary Cayley families on triples of matrices, named by
/// what the common-neighbor system does for a difference triple:
/// `Solvable`/`Unsolvable` classify by the rank of the combined `(a e)`
/// block (the `ab + ef` orientation), the pair forms classify by the
/// individual ranks of `e` and `a` (the `ba + ef` orientation).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Solvable { k: usize },
    Unsolvable { k: usize },
    SolvablePair { k1: usize, k2: usize },
    UnsolvablePair { k1: usize, k2: usize },
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Family::Solvable { k } => write!(f, "solvable(k={k})"),
            Family::Unsolvable { k } => write!(f, "unsolvable(k={k})"),
            Family::SolvablePair { k1, k2 } => write!(f, "solvable(k1={k1},k2={k2})"),
            Family::UnsolvablePair { k1, k2 } => write!(f, "unsolvable(k1={k1},k2={k2})"),
        }
    }
}

impl Family {
    /// Legal rank ranges per family.
    pub fn validate(&self, n: usize) -> Result<()> {
        let ok = match *self {
            Family::Solvable { k } => (1..=n).contains(&k),
            Family::Unsolvable { k } => k < n,
            Family::SolvablePair { k1, k2 } => k1 <= n && k2 <= n && (k1, k2) != (0, 0),
            Family::UnsolvablePair { k1, k2 } => k1 < n && k2 < n,
        };
        if ok {
            Ok(())
        } else {
            let bad = match *self {
                Family::Solvable { k } | Family::Unsolvable { k } => k,
                Family::SolvablePair { k1, .. } | Family::UnsolvablePair { k1, .. } => k1,
            };
            Err(Error::IllegalRank(bad, n))
        }
    }

    /// Every family in the given orientation's decomposition, in a fixed
    /// order.
    pub fn all_for(n: usize, pair_form: bool) -> Vec<Family> {
        let mut out = Vec::new();
        if pair_form {
            for k1 in 0..=n {
                for k2 in 0..=n {
                    if (k1, k2) != (0, 0) {
                        out.push(Family::SolvablePair { k1, k2 });
                    }
                }
            }
            for k1 in 0..n {
                for k2 in 0..n {
                    out.push(Family::UnsolvablePair { k1, k2 });
                }
            }
        } else {
            for k in 1..=n {
                out.push(Family::Solvable { k });
            }
            for k in 0..n {
                out.push(Family::Unsolvable { k });
            }
        }
        out
    }
}

/// Exact degree of one auxiliary family, with the power of `q` that
/// dominates it.
#[derive(Clone, Debug, PartialEq)]
pub struct DegreeFormula {
    pub family: Family,
    pub n: usize,
    pub q: u64,
    pub exact: BigUint,
    pub leading_exponent: u32,
}

/// Number of n x n matrices of rank k over F_q.
fn square_rank_count(q: u64, n: usize, k: usize) -> BigUint {
    rank_count(&RankCountQuery {
        rows: n as u32,
        cols: n as u32,
        rank: k as u32,
        q,
    })
    .expect("k <= n")
}

/// Closed-form degree of a family's Cayley graph on matrix triples.
pub fn degree_formula(family: Family, n: usize, q: u64) -> Result<DegreeFormula> {
    family.validate(n)?;
    let qb = BigUint::from(q);
    let (exact, leading_exponent) = match family {
        Family::Solvable { k } => {
            // rank-k choices of the n x 2n block, then q^(nk) right sides
            let block = q_factor(q, 2 * n as u32, k as u32) * q_factor(q, n as u32, k as u32)
                / q_factor(q, k as u32, k as u32);
            let exact = block * qb.pow((n * k) as u32);
            (exact, (4 * n * k - k * k) as u32)
        }
        Family::Unsolvable { k } => {
            let block = q_factor(q, 2 * n as u32, k as u32) * q_factor(q, n as u32, k as u32)
                / q_factor(q, k as u32, k as u32);
            let sides = qb.pow((n * n) as u32) - qb.pow((n * k) as u32);
            (block * sides, (n * n + 3 * n * k - k * k) as u32)
        }
        Family::SolvablePair { k1, k2 } => {
            let pairs = square_rank_count(q, n, k2) * square_rank_count(q, n, k1);
            let sides = qb.pow((n * k1 + n * k2 - k1 * k2) as u32);
            (
                pairs * sides,
                (3 * n * k1 + 3 * n * k2 - k1 * k1 - k2 * k2 - k1 * k2) as u32,
            )
        }
        Family::UnsolvablePair { k1, k2 } => {
            let pairs = square_rank_count(q, n, k2) * square_rank_count(q, n, k1);
            let sides = qb.pow((n * n) as u32) - qb.pow((n * k1 + n * k2 - k1 * k2) as u32);
            (
                pairs * sides,
                (n * n + 2 * n * k1 + 2 * n * k2 - k1 * k1 - k2 * k2) as u32,
            )
        }
    };
    Ok(DegreeFormula {
        family,
        n,
        q,
        exact,
        leading_exponent,
    })
}
