//! Python bindings: the field/ring/set types and the counters, spectral
//! reports and theorem harness, driven in-process.
//!
//! Configs and reports cross the boundary as JSON strings so the Python
//! side sees exactly what the CLI reads and writes.

use num_bigint::BigUint;
use num_complex::Complex64;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::PyDict;

use sumprod::counting;
use sumprod::field::FieldSpec;
use sumprod::graphs::{self, BipartiteGraph, Orientation};
use sumprod::matrix::{Matrix, RingSpec};
use sumprod::sets;
use sumprod::spectral::{self, SpectralMethod};
use sumprod::verify;

fn err(e: sumprod::Error) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_matrix(field: &FieldSpec, rows: &[Vec<u64>]) -> PyResult<Matrix> {
    if rows.is_empty() || rows.iter().any(|r| r.len() != rows[0].len()) {
        return Err(PyValueError::new_err(
            "matrix rows must be nonempty and equal length",
        ));
    }
    let flat: Vec<u64> = rows.iter().flatten().copied().collect();
    Matrix::from_reps(field, rows.len(), rows[0].len(), &flat).map_err(err)
}

fn parse_orientation(label: &str) -> PyResult<Orientation> {
    match label {
        "left" => Ok(Orientation::Left),
        "right" => Ok(Orientation::Right),
        _ => Err(PyValueError::new_err(
            "orientation must be 'left' or 'right'",
        )),
    }
}

/// The finite field F_{p^m}.
#[pyclass(frozen)]
struct Field {
    inner: FieldSpec,
}

#[pymethods]
impl Field {
    #[new]
    #[pyo3(signature = (p, m = 1))]
    fn new(p: u64, m: u32) -> PyResult<Self> {
        Ok(Field {
            inner: FieldSpec::new(p, m).map_err(err)?,
        })
    }

    #[getter]
    fn p(&self) -> u64 {
        self.inner.p()
    }

    #[getter]
    fn m(&self) -> u32 {
        self.inner.m()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    /// Reduction modulus coefficients, constant term first (empty for
    /// prime fields).
    #[getter]
    fn modulus(&self) -> Vec<u32> {
        self.inner.modulus().to_vec()
    }

    fn add(&self, x: u64, y: u64) -> PyResult<u64> {
        let f = &self.inner;
        Ok(
            f.add(f.element(x).map_err(err)?, f.element(y).map_err(err)?)
                .rep() as u64,
        )
    }

    fn sub(&self, x: u64, y: u64) -> PyResult<u64> {
        let f = &self.inner;
        Ok(
            f.sub(f.element(x).map_err(err)?, f.element(y).map_err(err)?)
                .rep() as u64,
        )
    }

    fn mul(&self, x: u64, y: u64) -> PyResult<u64> {
        let f = &self.inner;
        Ok(
            f.mul(f.element(x).map_err(err)?, f.element(y).map_err(err)?)
                .rep() as u64,
        )
    }

    fn inv(&self, x: u64) -> PyResult<u64> {
        let f = &self.inner;
        Ok(f.inv(f.element(x).map_err(err)?).map_err(err)?.rep() as u64)
    }

    fn neg(&self, x: u64) -> PyResult<u64> {
        let f = &self.inner;
        Ok(f.neg(f.element(x).map_err(err)?).rep() as u64)
    }

    /// Absolute trace into the prime subfield.
    fn trace(&self, x: u64) -> PyResult<u32> {
        Ok(self.inner.trace(self.inner.element(x).map_err(err)?))
    }

    /// Additive character psi(x) as a complex number.
    fn character(&self, x: u64) -> PyResult<Complex64> {
        Ok(self.inner.character(self.inner.element(x).map_err(err)?))
    }

    /// Rank of an arbitrary rectangular matrix of representatives.
    fn rank(&self, rows: Vec<Vec<u64>>) -> PyResult<usize> {
        Ok(parse_matrix(&self.inner, &rows)?.rank(&self.inner))
    }

    fn __repr__(&self) -> String {
        format!("Field(p={}, m={})", self.inner.p(), self.inner.m())
    }
}

/// The matrix ring M_n(F_q) with its canonical index encoding.
#[pyclass(frozen)]
struct Ring {
    inner: RingSpec,
}

#[pymethods]
impl Ring {
    #[new]
    #[pyo3(signature = (p, m = 1, n = 1))]
    fn new(p: u64, m: u32, n: usize) -> PyResult<Self> {
        let field = FieldSpec::new(p, m).map_err(err)?;
        Ok(Ring {
            inner: RingSpec::new(field, n).map_err(err)?,
        })
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn q(&self) -> u64 {
        self.inner.q()
    }

    /// q^(n^2).
    #[getter]
    fn card(&self) -> u64 {
        self.inner.card()
    }

    fn encode(&self, rows: Vec<Vec<u64>>) -> PyResult<u64> {
        let m = parse_matrix(self.inner.field(), &rows)?;
        if m.rows() != self.inner.n() || m.cols() != self.inner.n() {
            return Err(PyValueError::new_err("matrix must be n x n"));
        }
        Ok(self.inner.encode(&m))
    }

    fn decode(&self, idx: u64) -> PyResult<Vec<Vec<u64>>> {
        let m = self.inner.decode(idx).map_err(err)?;
        Ok((0..m.rows())
            .map(|r| (0..m.cols()).map(|c| m.get(r, c).rep() as u64).collect())
            .collect())
    }

    /// Determinant representative; 0 means singular.
    fn det(&self, rows: Vec<Vec<u64>>) -> PyResult<u64> {
        let m = parse_matrix(self.inner.field(), &rows)?;
        Ok(m.det_inv(self.inner.field()).0.rep() as u64)
    }

    /// Inverse matrix, or None when singular.
    fn inverse(&self, rows: Vec<Vec<u64>>) -> PyResult<Option<Vec<Vec<u64>>>> {
        let m = parse_matrix(self.inner.field(), &rows)?;
        Ok(m.det_inv(self.inner.field()).1.map(|inv| {
            (0..inv.rows())
                .map(|r| {
                    (0..inv.cols())
                        .map(|c| inv.get(r, c).rep() as u64)
                        .collect()
                })
                .collect()
        }))
    }

    fn full_set(&self) -> MSet {
        MSet {
            inner: sets::MatrixSet::full(&self.inner),
        }
    }

    fn gl_set(&self) -> MSet {
        MSet {
            inner: sets::MatrixSet::invertible(&self.inner),
        }
    }

    fn singular_set(&self) -> MSet {
        MSet {
            inner: sets::MatrixSet::singular(&self.inner),
        }
    }

    fn random_set(&self, density: f64, seed: u64) -> PyResult<MSet> {
        Ok(MSet {
            inner: sets::MatrixSet::random(&self.inner, density, seed).map_err(err)?,
        })
    }

    fn explicit_set(&self, members: Vec<u64>) -> PyResult<MSet> {
        Ok(MSet {
            inner: sets::MatrixSet::from_members(&self.inner, &members).map_err(err)?,
        })
    }

    fn __repr__(&self) -> String {
        format!("Ring(q={}, n={})", self.inner.q(), self.inner.n())
    }
}

/// A subset of M_n(F_q), dense over the canonical index.
#[pyclass(frozen)]
struct MSet {
    inner: sets::MatrixSet,
}

#[pymethods]
impl MSet {
    #[getter]
    fn size(&self) -> u64 {
        self.inner.size()
    }

    fn members(&self) -> Vec<u64> {
        self.inner.members().collect()
    }

    fn contains(&self, idx: u64) -> bool {
        idx < self.inner.spec().card() && self.inner.contains(idx)
    }

    fn sum(&self, other: &MSet) -> PyResult<MSet> {
        Ok(MSet {
            inner: self.inner.sum(&other.inner).map_err(err)?,
        })
    }

    fn product(&self, other: &MSet) -> PyResult<MSet> {
        Ok(MSet {
            inner: self.inner.product(&other.inner).map_err(err)?,
        })
    }

    fn negate(&self) -> MSet {
        MSet {
            inner: self.inner.negated(),
        }
    }

    fn invert(&self) -> PyResult<MSet> {
        Ok(MSet {
            inner: self.inner.inverted().map_err(err)?,
        })
    }

    fn intersect(&self, other: &MSet) -> PyResult<MSet> {
        Ok(MSet {
            inner: self.inner.intersect(&other.inner).map_err(err)?,
        })
    }

    /// Reproducible JSON form (sorted member indices).
    fn to_json(&self) -> String {
        self.inner.to_json().to_string()
    }

    fn __len__(&self) -> usize {
        self.inner.size() as usize
    }

    fn __repr__(&self) -> String {
        format!(
            "MSet(q={}, n={}, size={})",
            self.inner.spec().q(),
            self.inner.spec().n(),
            self.inner.size()
        )
    }
}

/// Number of sextuples with ab + ef = c + d.
#[pyfunction]
fn count_n6(a: &MSet, b: &MSet, c: &MSet, d: &MSet, e: &MSet, f: &MSet) -> PyResult<u128> {
    sets::count_n6(&a.inner, &b.inner, &c.inner, &d.inner, &e.inner, &f.inner).map_err(err)
}

/// Additive energy of (A, B).
#[pyfunction]
fn additive_energy(a: &MSet, b: &MSet) -> PyResult<u128> {
    sets::additive_energy(&a.inner, &b.inner).map_err(err)
}

/// Number of quadruples with a + b = cd.
#[pyfunction]
fn count_a_plus_b_eq_cd(a: &MSet, b: &MSet, c: &MSet, d: &MSet) -> PyResult<u128> {
    sets::count_a_plus_b_eq_cd(&a.inner, &b.inner, &c.inner, &d.inner).map_err(err)
}

/// The image A + BC and its representation-count table as a dict.
#[pyfunction]
fn a_plus_bc<'py>(
    py: Python<'py>,
    a: &MSet,
    b: &MSet,
    c: &MSet,
) -> PyResult<(MSet, Bound<'py, PyDict>)> {
    let (image, table) = sets::a_plus_bc(&a.inner, &b.inner, &c.inner).map_err(err)?;
    let dict = PyDict::new(py);
    for (idx, count) in table.support() {
        dict.set_item(idx, count)?;
    }
    Ok((MSet { inner: image }, dict))
}

/// Exact count of rows x cols matrices of one rank over F_q.
#[pyfunction]
fn rank_count(rows: u32, cols: u32, rank: u32, q: u64) -> PyResult<BigUint> {
    counting::rank_count(&counting::RankCountQuery {
        rows,
        cols,
        rank,
        q,
    })
    .map_err(err)
}

/// Exact degree of one auxiliary Cayley family; `ranks` is [k] for the
/// block families ('solvable'/'unsolvable') and [k1, k2] for the pair
/// families ('solvable_pair'/'unsolvable_pair'). Returns (degree,
/// leading exponent).
#[pyfunction]
fn degree_formula(family: &str, n: usize, q: u64, ranks: Vec<usize>) -> PyResult<(BigUint, u32)> {
    let fam = match (family, ranks.as_slice()) {
        ("solvable", [k]) => counting::Family::Solvable { k: *k },
        ("unsolvable", [k]) => counting::Family::Unsolvable { k: *k },
        ("solvable_pair", [k1, k2]) => counting::Family::SolvablePair { k1: *k1, k2: *k2 },
        ("unsolvable_pair", [k1, k2]) => counting::Family::UnsolvablePair { k1: *k1, k2: *k2 },
        _ => return Err(PyValueError::new_err("unknown family / rank arity")),
    };
    let d = counting::degree_formula(fam, n, q).map_err(err)?;
    Ok((d.exact, d.leading_exponent))
}

/// Number of solutions X to block * X = rhs (matrices of reps).
#[pyfunction]
fn linear_solution_count(
    p: u64,
    m: u32,
    block: Vec<Vec<u64>>,
    rhs: Vec<Vec<u64>>,
) -> PyResult<u128> {
    let field = FieldSpec::new(p, m).map_err(err)?;
    let block = parse_matrix(&field, &block)?;
    let rhs = parse_matrix(&field, &rhs)?;
    counting::linear_solution_count(&field, &block, &rhs).map_err(err)
}

/// Number of solutions (b, f) to b*a_diff + e_diff*f = c_diff.
#[pyfunction]
fn two_sided_solution_count(
    p: u64,
    m: u32,
    a_diff: Vec<Vec<u64>>,
    e_diff: Vec<Vec<u64>>,
    c_diff: Vec<Vec<u64>>,
) -> PyResult<u128> {
    let field = FieldSpec::new(p, m).map_err(err)?;
    let a = parse_matrix(&field, &a_diff)?;
    let e = parse_matrix(&field, &e_diff)?;
    let c = parse_matrix(&field, &c_diff)?;
    counting::two_sided_solution_count(&field, &a, &e, &c).map_err(err)
}

/// Third-eigenvalue report for a product graph, as a dict.
#[pyfunction]
#[pyo3(signature = (n, p, m = 1, orientation = "left", method = "auto"))]
fn third_eigenvalue<'py>(
    py: Python<'py>,
    n: usize,
    p: u64,
    m: u32,
    orientation: &str,
    method: &str,
) -> PyResult<Bound<'py, PyDict>> {
    let spec = RingSpec::new(FieldSpec::new(p, m).map_err(err)?, n).map_err(err)?;
    let orientation = parse_orientation(orientation)?;
    let method = match method {
        "dense" => SpectralMethod::Dense,
        "character" => SpectralMethod::CharacterSum,
        "auto" => SpectralMethod::Auto,
        _ => return Err(PyValueError::new_err("method must be dense/character/auto")),
    };
    let graph = if method != SpectralMethod::CharacterSum && graphs::triple_space(&spec) <= 4096 {
        BipartiteGraph::build(&spec, orientation).map_err(err)?
    } else {
        BipartiteGraph::predicate(&spec, orientation).map_err(err)?
    };
    let report = spectral::third_eigenvalue(&graph, method).map_err(err)?;
    let dict = PyDict::new(py);
    dict.set_item("graph", &report.graph)?;
    dict.set_item("method", &report.method)?;
    dict.set_item("lambda1", report.lambda1)?;
    dict.set_item("lambda3", report.lambda3)?;
    dict.set_item("bound_exponent", report.bound_exponent)?;
    dict.set_item("measured_constant", report.measured_constant)?;
    Ok(dict)
}

/// Entrywise check of the N N^T decomposition; returns the maximum
/// absolute discrepancy (0 means the identity holds).
#[pyfunction]
#[pyo3(signature = (n, p, m = 1, orientation = "left"))]
fn nnt_discrepancy(n: usize, p: u64, m: u32, orientation: &str) -> PyResult<u64> {
    let spec = RingSpec::new(FieldSpec::new(p, m).map_err(err)?, n).map_err(err)?;
    let report =
        graphs::verify_nnt_decomposition(&spec, parse_orientation(orientation)?).map_err(err)?;
    Ok(report.max_abs_discrepancy)
}

/// Runs one experiment config (JSON string in, report JSON string out).
#[pyfunction]
fn run_experiment(config_json: &str) -> PyResult<String> {
    let config: verify::ExperimentConfig =
        serde_json::from_str(config_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let report = verify::run_experiment(&config).map_err(err)?;
    serde_json::to_string_pretty(&report).map_err(|e| PyValueError::new_err(e.to_string()))
}

/// Runs a sweep config (JSON string in, CSV out).
#[pyfunction]
fn run_sweep_csv(config_json: &str) -> PyResult<String> {
    let config: verify::SweepConfig =
        serde_json::from_str(config_json).map_err(|e| PyValueError::new_err(e.to_string()))?;
    let rows = verify::run_sweep(&config).map_err(err)?;
    Ok(verify::sweep_csv(&rows))
}

#[pymodule]
fn sumprod_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<Field>()?;
    m.add_class::<Ring>()?;
    m.add_class::<MSet>()?;
    m.add_function(wrap_pyfunction!(count_n6, m)?)?;
    m.add_function(wrap_pyfunction!(additive_energy, m)?)?;
    m.add_function(wrap_pyfunction!(count_a_plus_b_eq_cd, m)?)?;
    m.add_function(wrap_pyfunction!(a_plus_bc, m)?)?;
    m.add_function(wrap_pyfunction!(rank_count, m)?)?;
    m.add_function(wrap_pyfunction!(degree_formula, m)?)?;
    m.add_function(wrap_pyfunction!(linear_solution_count, m)?)?;
    m.add_function(wrap_pyfunction!(two_sided_solution_count, m)?)?;
    m.add_function(wrap_pyfunction!(third_eigenvalue, m)?)?;
    m.add_function(wrap_pyfunction!(nnt_discrepancy, m)?)?;
    m.add_function(wrap_pyfunction!(run_experiment, m)?)?;
    m.add_function(wrap_pyfunction!(run_sweep_csv, m)?)?;
    Ok(())
}
