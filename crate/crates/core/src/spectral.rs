//! Eigenvalue machinery: a dense Jacobi solver for exact integer
//! matrices at tiny scale, additive-character spectra for the Cayley
//! pieces, third-eigenvalue extraction along both routes, and the
//! expander-mixing checker.
//!
//! The graphs' `N N^T` is translation invariant over the additive group
//! of matrix triples, so the characters `chi_y(x) = psi(<y, x>)` (with
//! `<.,.>` the entrywise product paired through the trace character)
//! diagonalize it; the eigenvalue at `y` is the coefficient-weighted sum
//! of connection-set character sums. The dense route knows none of that
//! and just diagonalizes the integer matrix, which is what makes the
//! agreement between the two a real check.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::field::FieldElement;
use crate::graphs::{
    classify_triple, nnt_coefficient, triple_space, BipartiteGraph, ConnectionSet, Orientation,
    TripleIndex, TripleSet,
};
use crate::matrix::RingSpec;
use crate::{Error, Result};

/// Dense eigensolver ceiling.
pub const MAX_DENSE_DIM: usize = 4096;

/// Character-path ceiling on the triple space: the spectrum costs one
/// character sum per (character, difference) pair, so quadratic in this.
pub const MAX_CHARACTER_SPACE: u64 = 8192;

const JACOBI_EPS: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 64;
const RESIDUAL_BOUND: f64 = 1e-8;

/// Cyclic Jacobi rotations on a symmetric matrix.
///
/// Returns (eigenvalues, eigenvectors) unsorted; column `j` of the
/// eigenvector matrix pairs with eigenvalue `j`.
pub fn jacobi_eigen(a: &[f64], dim: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    assert_eq!(a.len(), dim * dim);
    if dim > MAX_DENSE_DIM {
        return Err(Error::DenseTooLarge(dim, MAX_DENSE_DIM));
    }
    let mut m = a.to_vec();
    let mut v = vec![0.0; dim * dim];
    for i in 0..dim {
        v[i * dim + i] = 1.0;
    }
    if dim <= 1 {
        return Ok((m, v));
    }
    let scale: f64 = a.iter().fold(0.0_f64, |acc, &x| acc.max(x.abs())).max(1.0);

    for _sweep in 0..JACOBI_MAX_SWEEPS {
        let mut off = 0.0_f64;
        for p in 0..dim - 1 {
            for q in p + 1..dim {
                off += m[p * dim + q].abs();
            }
        }
        if off <= JACOBI_EPS * scale * dim as f64 {
            let evals = (0..dim).map(|i| m[i * dim + i]).collect();
            return Ok((evals, v));
        }
        for p in 0..dim - 1 {
            for q in p + 1..dim {
                let apq = m[p * dim + q];
                if apq.abs() <= JACOBI_EPS * scale {
                    continue;
                }
                let app = m[p * dim + p];
                let aqq = m[q * dim + q];
                let theta = 0.5 * (aqq - app) / apq;
                let t = if theta.abs() > 1e150 {
                    0.5 / theta
                } else {
                    let s = theta.signum();
                    s / (theta.abs() + (1.0 + theta * theta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let tau = s / (1.0 + c);

                m[p * dim + p] = app - t * apq;
                m[q * dim + q] = aqq + t * apq;
                m[p * dim + q] = 0.0;
                m[q * dim + p] = 0.0;
                for j in 0..dim {
                    if j != p && j != q {
                        let mjp = m[j * dim + p];
                        let mjq = m[j * dim + q];
                        let new_p = mjp - s * (mjq + tau * mjp);
                        let new_q = mjq + s * (mjp - tau * mjq);
                        m[j * dim + p] = new_p;
                        m[p * dim + j] = new_p;
                        m[j * dim + q] = new_q;
                        m[q * dim + j] = new_q;
                    }
                }
                for j in 0..dim {
                    let vjp = v[j * dim + p];
                    let vjq = v[j * dim + q];
                    v[j * dim + p] = vjp - s * (vjq + tau * vjp);
                    v[j * dim + q] = vjq + s * (vjp - tau * vjq);
                }
            }
        }
    }
    Err(Error::NoConvergence)
}

fn check_symmetric_int(m: &[i64], dim: usize) -> Result<()> {
    for r in 0..dim {
        for c in r + 1..dim {
            if m[r * dim + c] != m[c * dim + r] {
                return Err(Error::NotSymmetric(r, c));
            }
        }
    }
    Ok(())
}

/// Eigenvalues of a symmetric integer matrix, sorted descending.
///
/// Each eigenpair is residual-checked: `||M v - lambda v||_inf` must not
/// exceed `1e-8 * ||M||_inf`.
pub fn dense_spectrum(m: &[i64], dim: usize) -> Result<Vec<f64>> {
    Ok(dense_spectrum_with_vectors(m, dim)?.0)
}

/// Like [`dense_spectrum`] but also returns eigenvectors (column `j`
/// pairs with eigenvalue `j` after sorting).
pub fn dense_spectrum_with_vectors(m: &[i64], dim: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    assert_eq!(m.len(), dim * dim);
    check_symmetric_int(m, dim)?;
    let a: Vec<f64> = m.iter().map(|&x| x as f64).collect();
    let (evals, vecs) = jacobi_eigen(&a, dim)?;

    // operator infinity norm (max row sum)
    let norm = (0..dim)
        .map(|r| (0..dim).map(|c| a[r * dim + c].abs()).sum::<f64>())
        .fold(1.0_f64, f64::max);
    for j in 0..dim {
        let lambda = evals[j];
        let mut worst = 0.0_f64;
        for r in 0..dim {
            let mut acc = 0.0;
            for c in 0..dim {
                acc += a[r * dim + c] * vecs[c * dim + j];
            }
            worst = worst.max((acc - lambda * vecs[r * dim + j]).abs());
        }
        if worst > RESIDUAL_BOUND * norm {
            return Err(Error::NoConvergence);
        }
    }

    let mut order: Vec<usize> = (0..dim).collect();
    order.sort_by(|&i, &j| evals[j].partial_cmp(&evals[i]).expect("finite"));
    let sorted_evals: Vec<f64> = order.iter().map(|&i| evals[i]).collect();
    let mut sorted_vecs = vec![0.0; dim * dim];
    for (new_j, &old_j) in order.iter().enumerate() {
        for r in 0..dim {
            sorted_vecs[r * dim + new_j] = vecs[r * dim + old_j];
        }
    }
    Ok((sorted_evals, sorted_vecs))
}

/// Additive characters of the triple group, labeled by triples.
pub struct CharacterTable {
    spec: RingSpec,
    width: usize,
    digits: Vec<FieldElement>,
    psi: Vec<Complex64>,
    psi_re: Vec<f64>,
}

impl CharacterTable {
    pub fn new(spec: &RingSpec) -> Result<CharacterTable> {
        let space = triple_space(spec);
        if space > MAX_CHARACTER_SPACE as u128 {
            return Err(Error::GraphTooLarge(space, MAX_CHARACTER_SPACE));
        }
        let space = space as u64;
        let q = spec.q();
        let width = 3 * spec.n() * spec.n();
        let mut digits = Vec::with_capacity(space as usize * width);
        for mut t in 0..space {
            for _ in 0..width {
                digits.push(spec.field().element(t % q).expect("digit"));
                t /= q;
            }
        }
        let field = spec.field();
        let psi: Vec<Complex64> = field.elements().map(|x| field.character(x)).collect();
        let psi_re = psi.iter().map(|c| c.re).collect();
        Ok(CharacterTable {
            spec: spec.clone(),
            width,
            digits,
            psi,
            psi_re,
        })
    }

    #[inline]
    fn pairing(&self, y: TripleIndex, t: TripleIndex) -> FieldElement {
        let field = self.spec.field();
        let yd = &self.digits[y as usize * self.width..(y as usize + 1) * self.width];
        let td = &self.digits[t as usize * self.width..(t as usize + 1) * self.width];
        let mut acc = field.zero();
        for i in 0..self.width {
            acc = field.add(acc, field.mul(yd[i], td[i]));
        }
        acc
    }

    /// `chi_y(t)`.
    #[inline]
    pub fn chi(&self, y: TripleIndex, t: TripleIndex) -> Complex64 {
        self.psi[self.pairing(y, t).rep() as usize]
    }

    #[inline]
    pub fn chi_re(&self, y: TripleIndex, t: TripleIndex) -> f64 {
        self.psi_re[self.pairing(y, t).rep() as usize]
    }
}

/// Spectrum (all `q^(3n^2)` eigenvalues) of the Cayley graph of a
/// connection set: the character sums `sum_{s in S} chi_y(s)`, sorted
/// descending. Errors when the set is not symmetric.
pub fn cayley_spectrum(conn: &ConnectionSet) -> Result<Vec<f64>> {
    if !conn.is_symmetric() {
        return Err(Error::AsymmetricConnectionSet);
    }
    let spec = conn.spec().clone();
    let table = CharacterTable::new(&spec)?;
    let space = triple_space(&spec) as u64;
    let members: Vec<TripleIndex> = conn.members().collect();
    let mut evals: Vec<f64> = (0..space)
        .into_par_iter()
        .map(|y| {
            let mut acc = Complex64::new(0.0, 0.0);
            for &s in &members {
                acc += table.chi(y, s);
            }
            debug_assert!(acc.im.abs() <= 1e-9 * (members.len() as f64).max(1.0));
            acc.re
        })
        .collect();
    evals.sort_by(|a, b| b.partial_cmp(a).expect("finite"));
    Ok(evals)
}

/// Eigenvalues of `N N^T` along the character route, indexed by the
/// character label `y` (entry 0 is the principal character).
///
/// Assembled per the decomposition: classify every nonzero difference
/// into its family, then `mu_y = (deg - q^(n^2)) + q^(n^2)|G| [y = 0] +
/// sum_t coef(family(t)) Re chi_y(t)`.
pub fn nnt_character_spectrum(spec: &RingSpec, orientation: Orientation) -> Result<Vec<f64>> {
    let table = CharacterTable::new(spec)?;
    let space = triple_space(spec) as u64;
    let n = spec.n();
    let qn2 = (spec.q() as f64).powi((n * n) as i32);
    let deg = (spec.card() as f64) * (spec.card() as f64);

    let coefs: Vec<i64> = (0..space)
        .into_par_iter()
        .map(
            |t| match classify_triple(spec, orientation.pair_form(), t) {
                Some(fam) => nnt_coefficient(spec, fam) as i64,
                None => 0,
            },
        )
        .collect();

    let nonzero: Vec<(TripleIndex, f64)> = (1..space)
        .filter(|&t| coefs[t as usize] != 0)
        .map(|t| (t, coefs[t as usize] as f64))
        .collect();

    Ok((0..space)
        .into_par_iter()
        .map(|y| {
            let mut mu = deg - qn2;
            if y == 0 {
                mu += qn2 * space as f64;
            }
            for &(t, coef) in &nonzero {
                mu += coef * table.chi_re(y, t);
            }
            mu
        })
        .collect())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpectralMethod {
    Dense,
    CharacterSum,
    Auto,
}

/// One measured spectral gap.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    pub graph: String,
    pub method: String,
    pub lambda1: f64,
    pub lambda3: f64,
    pub bound_exponent: f64,
    pub measured_constant: f64,
}

impl SpectralReport {
    /// The bound value `q^bound_exponent`.
    pub fn bound(&self, q: u64) -> f64 {
        (q as f64).powf(self.bound_exponent)
    }
}

/// The q-power exponent the orientation's gap estimate claims.
pub fn bound_exponent(n: usize, orientation: Orientation) -> f64 {
    let n = n as f64;
    match orientation {
        Orientation::Left => 2.0 * n * n - (n + 1.0) / 2.0,
        Orientation::Right => 2.0 * n * n - 1.0,
    }
}

/// `lambda_3 = sqrt(second largest eigenvalue of N N^T)`, via the dense
/// route, the character route, or whichever fits.
pub fn third_eigenvalue(graph: &BipartiteGraph, method: SpectralMethod) -> Result<SpectralReport> {
    let spec = graph.spec();
    let n = spec.n();
    let q = spec.q();
    let use_dense = match method {
        SpectralMethod::Dense => true,
        SpectralMethod::CharacterSum => false,
        SpectralMethod::Auto => graph.is_materialized() && graph.side_size() <= 729,
    };
    let (method_label, lambda1_sq, lambda3_sq) = if use_dense {
        let dim = graph.side_size() as usize;
        let nnt = graph.nnt()?;
        let as_i64: Vec<i64> = nnt.iter().map(|&x| x as i64).collect();
        let evals = dense_spectrum(&as_i64, dim)?;
        ("dense", evals[0], evals.get(1).copied().unwrap_or(0.0))
    } else {
        let mu = nnt_character_spectrum(spec, graph.orientation())?;
        let top = mu[0];
        let second = mu[1..].iter().fold(0.0_f64, |acc, &x| acc.max(x));
        ("character-sum", top, second)
    };
    let lambda1 = lambda1_sq.max(0.0).sqrt();
    let lambda3 = lambda3_sq.max(0.0).sqrt();
    let exponent = bound_exponent(n, graph.orientation());
    let bound = (q as f64).powf(exponent);
    Ok(SpectralReport {
        graph: format!("n={},q={},{}", n, q, graph.orientation().label()),
        method: method_label.into(),
        lambda1,
        lambda3,
        bound_exponent: exponent,
        measured_constant: lambda3 / bound,
    })
}

/// One expander-mixing instance.
#[derive(Clone, Debug, Serialize)]
pub struct MixingReport {
    pub edges: u128,
    pub expected: f64,
    pub deviation: f64,
    pub allowed: f64,
    pub holds: bool,
    pub slack: f64,
}

/// Checks `|e(X, Y) - deg/|V| |X||Y|| <= lambda3 sqrt(|X||Y|)` with exact
/// edge counts.
pub fn mixing_check(
    graph: &BipartiteGraph,
    lambda3: f64,
    x: &TripleSet,
    y: &TripleSet,
) -> Result<MixingReport> {
    let edges = graph.edge_count_between(x, y)?;
    let sizes = x.size() as f64 * y.size() as f64;
    let expected = graph.degree() as f64 * sizes / graph.side_size() as f64;
    let deviation = (edges as f64 - expected).abs();
    let allowed = lambda3 * sizes.sqrt();
    Ok(MixingReport {
        edges,
        expected,
        deviation,
        allowed,
        holds: deviation <= allowed * (1.0 + 1e-9) + 1e-9,
        slack: allowed - deviation,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counting::Family;
    use crate::field::FieldSpec;
    use crate::rng;

    fn ring(p: u64, n: usize) -> RingSpec {
        RingSpec::new(FieldSpec::new(p, 1).unwrap(), n).unwrap()
    }

    #[test]
    fn jacobi_all_ones_and_identity() {
        let dim = 8;
        let j = vec![1i64; dim * dim];
        let evals = dense_spectrum(&j, dim).unwrap();
        assert!((evals[0] - 8.0).abs() < 1e-9);
        for &e in &evals[1..] {
            assert!(e.abs() < 1e-9);
        }

        let mut id = vec![0i64; dim * dim];
        for i in 0..dim {
            id[i * dim + i] = 1;
        }
        let evals = dense_spectrum(&id, dim).unwrap();
        assert!(evals.iter().all(|&e| (e - 1.0).abs() < 1e-12));
    }

    #[test]
    fn non_symmetric_rejected() {
        let m = vec![0i64, 1, 0, 0];
        assert!(matches!(
            dense_spectrum(&m, 2),
            Err(Error::NotSymmetric(0, 1))
        ));
    }

    #[test]
    fn nnt_spectrum_q2_dense() {
        let r = ring(2, 1);
        let g = BipartiteGraph::build(&r, Orientation::Left).unwrap();
        let nnt = g.nnt().unwrap();
        let as_i64: Vec<i64> = nnt.iter().map(|&x| x as i64).collect();
        let evals = dense_spectrum(&as_i64, 8).unwrap();
        // trace is |U| * deg = 32; multiset fixed by this oracle run
        let want = [16.0, 4.0, 4.0, 4.0, 4.0, 0.0, 0.0, 0.0];
        for (got, want) in evals.iter().zip(want) {
            assert!((got - want).abs() < 1e-7, "{evals:?}");
        }
        let trace: f64 = evals.iter().sum();
        assert!((trace - 32.0).abs() < 1e-6);
    }

    #[test]
    fn cayley_spectrum_examples() {
        let r = ring(2, 1);
        // the unsolvable k=0 family is the single triple (0, 0, 1):
        // eigenvalues chi_y((0,0,1)) = +-1, four each
        let f0 = ConnectionSet::build(&r, Family::Unsolvable { k: 0 }).unwrap();
        let evals = cayley_spectrum(&f0).unwrap();
        assert_eq!(evals.iter().filter(|&&e| (e - 1.0).abs() < 1e-9).count(), 4);
        assert_eq!(evals.iter().filter(|&&e| (e + 1.0).abs() < 1e-9).count(), 4);

        // complete-graph Cayley set: the family union covers everything
        // nonzero, so the summed spectra give 26 at the principal
        // character and -1 everywhere else
        let r3 = ring(3, 1);
        let family_sets: Vec<ConnectionSet> = Family::all_for(1, false)
            .into_iter()
            .map(|f| ConnectionSet::build(&r3, f).unwrap())
            .collect();
        let mut sums = vec![Complex64::new(0.0, 0.0); 27];
        let table = CharacterTable::new(&r3).unwrap();
        for s in &family_sets {
            for m in s.members() {
                for (y, acc) in sums.iter_mut().enumerate() {
                    *acc += table.chi(y as u64, m);
                }
            }
        }
        assert!((sums[0].re - 26.0).abs() < 1e-9);
        for s in &sums[1..] {
            assert!((s.re + 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn cayley_matches_dense_adjacency() {
        // the solvable k=1 family at n=1, q=2: compare character sums to
        // the dense spectrum of the materialized 8x8 adjacency
        let r = ring(2, 1);
        let s = ConnectionSet::build(&r, Family::Solvable { k: 1 }).unwrap();
        let evals = cayley_spectrum(&s).unwrap();
        let dim = 8usize;
        let mut adj = vec![0i64; dim * dim];
        for u in 0..dim as u64 {
            for v in 0..dim as u64 {
                if u != v && s.contains(crate::graphs::triple_sub(&r, u, v)) {
                    adj[u as usize * dim + v as usize] = 1;
                }
            }
        }
        let dense = dense_spectrum(&adj, dim).unwrap();
        for (a, b) in evals.iter().zip(dense.iter()) {
            assert!((a - b).abs() < 1e-6, "{evals:?} vs {dense:?}");
        }
    }

    #[test]
    fn third_eigenvalue_small_fields() {
        for (p, want) in [(2u64, 2.0f64), (3, 3.0)] {
            let r = ring(p, 1);
            let g = BipartiteGraph::build(&r, Orientation::Left).unwrap();
            let dense = third_eigenvalue(&g, SpectralMethod::Dense).unwrap();
            let chars = third_eigenvalue(&g, SpectralMethod::CharacterSum).unwrap();
            assert!((dense.lambda3 - want).abs() < 1e-6, "{dense:?}");
            assert!(
                (dense.lambda3 - chars.lambda3).abs() <= 1e-6 * want,
                "{dense:?} vs {chars:?}"
            );
            assert!((dense.lambda1 - (p * p) as f64).abs() < 1e-6);
            assert!((dense.measured_constant - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn dense_and_character_spectra_agree() {
        for p in [2u64, 3, 5] {
            let r = ring(p, 1);
            for orientation in [Orientation::Left, Orientation::Right] {
                let g = BipartiteGraph::build(&r, orientation).unwrap();
                let nnt = g.nnt().unwrap();
                let dim = g.side_size() as usize;
                let as_i64: Vec<i64> = nnt.iter().map(|&x| x as i64).collect();
                let dense = dense_spectrum(&as_i64, dim).unwrap();
                let mut mu = nnt_character_spectrum(&r, orientation).unwrap();
                mu.sort_by(|a, b| b.partial_cmp(a).unwrap());
                for (a, b) in dense.iter().zip(mu.iter()) {
                    let scale = a.abs().max(1.0);
                    assert!((a - b).abs() <= 1e-6 * scale, "p={p}: {a} vs {b}");
                }
                // positive semidefinite
                assert!(mu.iter().all(|&x| x >= -1e-6 * mu[0]));
            }
        }
    }

    #[test]
    fn nnt_eigenvectors_orthogonal_to_ones() {
        let r = ring(3, 1);
        let g = BipartiteGraph::build(&r, Orientation::Left).unwrap();
        let nnt = g.nnt().unwrap();
        let dim = g.side_size() as usize;
        let as_i64: Vec<i64> = nnt.iter().map(|&x| x as i64).collect();
        let (evals, vecs) = dense_spectrum_with_vectors(&as_i64, dim).unwrap();
        let lambda3_sq = evals[1];
        // the top eigenvector is constant
        let top: Vec<f64> = (0..dim).map(|r_| vecs[r_ * dim]).collect();
        let avg = top.iter().sum::<f64>() / dim as f64;
        assert!(top.iter().all(|&x| (x - avg).abs() < 1e-7 * avg.abs()));
        // every lambda3^2 eigenvector is orthogonal to all-ones
        for j in 1..dim {
            if (evals[j] - lambda3_sq).abs() <= 1e-6 * lambda3_sq.abs().max(1.0) {
                let dot: f64 = (0..dim).map(|r_| vecs[r_ * dim + j]).sum();
                assert!(dot.abs() < 1e-7 * (dim as f64).sqrt());
            }
        }
    }

    /// The operational lambda3 agrees with the third largest |eigenvalue|
    /// of the full bipartite adjacency at tiny scale.
    #[test]
    fn matches_full_adjacency_definition() {
        for p in [2u64, 3] {
            let r = ring(p, 1);
            let g = BipartiteGraph::build(&r, Orientation::Left).unwrap();
            let side = g.side_size() as usize;
            let dim = 2 * side;
            let mut adj = vec![0i64; dim * dim];
            for u in 0..side as u64 {
                for v in g.neighbors(u) {
                    adj[u as usize * dim + (side + v as usize)] = 1;
                    adj[(side + v as usize) * dim + u as usize] = 1;
                }
            }
            let mut evals = dense_spectrum(&adj, dim).unwrap();
            evals.sort_by(|a, b| b.abs().partial_cmp(&a.abs()).unwrap());
            let report = third_eigenvalue(&g, SpectralMethod::Dense).unwrap();
            assert!((evals[0].abs() - report.lambda1).abs() < 1e-6);
            // bipartite: lambda1 = -lambda2 in the signed ordering
            assert!((evals[0] + evals[1]).abs() < 1e-6);
            assert!((evals[2].abs() - report.lambda3).abs() < 1e-6);
        }
    }

    /// Values fixed by the character-path oracle at n=2, q=2: the gap is
    /// exactly 64 for both orientations, comfortably inside both bounds.
    #[test]
    fn third_eigenvalue_n2_q2() {
        let r = ring(2, 2);
        for (orientation, constant) in [
            (Orientation::Left, 64.0 / 2.0f64.powf(6.5)),
            (Orientation::Right, 0.5),
        ] {
            let g = BipartiteGraph::predicate(&r, orientation).unwrap();
            let report = third_eigenvalue(&g, SpectralMethod::CharacterSum).unwrap();
            assert!((report.lambda3 - 64.0).abs() < 1e-6, "{report:?}");
            assert!((report.lambda1 - 256.0).abs() < 1e-6);
            assert!((report.measured_constant - constant).abs() < 1e-9);
        }
    }

    #[test]
    fn mixing_examples() {
        let r = ring(2, 1);
        let g = BipartiteGraph::build(&r, Orientation::Left).unwrap();
        let report = third_eigenvalue(&g, SpectralMethod::Dense).unwrap();
        let full = TripleSet::full(&r).unwrap();
        let m = mixing_check(&g, report.lambda3, &full, &full).unwrap();
        assert!(m.holds);
        assert!(m.deviation < 1e-9); // main term exact on the full sides

        // worst-case singleton pairs
        for u in 0..8u64 {
            for v in 0..8u64 {
                let x = TripleSet::from_indices(&r, &[u]).unwrap();
                let y = TripleSet::from_indices(&r, &[v]).unwrap();
                let m = mixing_check(&g, report.lambda3, &x, &y).unwrap();
                assert!(m.holds, "u={u} v={v}: {m:?}");
            }
        }
    }

    #[test]
    fn mixing_random_pairs() {
        let r = ring(5, 1);
        let g = BipartiteGraph::build(&r, Orientation::Left).unwrap();
        let report = third_eigenvalue(&g, SpectralMethod::CharacterSum).unwrap();
        for i in 0..100 {
            let dx = 0.1 + 0.8 * (rng::stream(99, 2 * i) as f64 / u64::MAX as f64);
            let dy = 0.1 + 0.8 * (rng::stream(99, 2 * i + 1) as f64 / u64::MAX as f64);
            let x = TripleSet::random(&r, dx, 1000 + i).unwrap();
            let y = TripleSet::random(&r, dy, 2000 + i).unwrap();
            if x.size() == 0 || y.size() == 0 {
                continue;
            }
            let m = mixing_check(&g, report.lambda3, &x, &y).unwrap();
            assert!(m.holds, "i={i}: {m:?}");
        }
    }
}
