//! Acceptance suite: one test per criterion, exhaustive oracles first.
//!
//! Run with `cargo test -p sumprod-cli --test acceptance` for one
//! pass/fail line per criterion.

use std::collections::BTreeMap;
use std::process::Command;
use std::time::Instant;

use num_bigint::BigUint;

use sumprod::counting::{
    degree_formula, linear_solution_count, rank_count, two_sided_solution_count, Family,
    RankCountQuery,
};
use sumprod::field::FieldSpec;
use sumprod::graphs::{
    verify_nnt_decomposition, BipartiteGraph, ConnectionSet, Orientation, TripleSet,
};
use sumprod::matrix::{Matrix, RingSpec};
use sumprod::rng;
use sumprod::sets::{a_plus_bc, count_n6, MatrixSet};
use sumprod::spectral::{mixing_check, third_eigenvalue, SpectralMethod};
use sumprod::verify::{run_experiment, ExperimentConfig, Theorem};

fn field_for(q: u64) -> FieldSpec {
    let (p, m) = match q {
        4 => (2, 2),
        8 => (2, 3),
        9 => (3, 2),
        16 => (2, 4),
        _ => (q, 1),
    };
    FieldSpec::new(p, m).unwrap()
}

fn ring_for(q: u64, n: usize) -> RingSpec {
    RingSpec::new(field_for(q), n).unwrap()
}

/// Visits every rows x cols matrix over the field, in index order.
fn for_all_matrices(field: &FieldSpec, rows: usize, cols: usize, mut f: impl FnMut(&Matrix)) {
    let q = field.q();
    let cells = rows * cols;
    let total = q.pow(cells as u32);
    let mut reps = vec![0u64; cells];
    for t in 0..total {
        let mut rest = t;
        for r in reps.iter_mut() {
            *r = rest % q;
            rest /= q;
        }
        f(&Matrix::from_reps(field, rows, cols, &reps).unwrap());
    }
}

/// Criterion 1: the closed rank-count formula equals exhaustive
/// enumeration for all shapes in {1,2,3}^2 and q in {2,3,4,5}.
#[test]
fn criterion_01_rank_count_exactness() {
    let start = Instant::now();
    for q in [2u64, 3, 4, 5] {
        let field = field_for(q);
        for rows in 1..=3usize {
            for cols in 1..=3usize {
                let mut histogram = vec![0u64; rows.min(cols) + 1];
                for_all_matrices(&field, rows, cols, |m| {
                    histogram[m.rank(&field)] += 1;
                });
                for (k, &count) in histogram.iter().enumerate() {
                    let formula = rank_count(&RankCountQuery {
                        rows: rows as u32,
                        cols: cols as u32,
                        rank: k as u32,
                        q,
                    })
                    .unwrap();
                    assert_eq!(
                        formula,
                        BigUint::from(count),
                        "q={q} shape {rows}x{cols} rank {k}"
                    );
                }
            }
        }
    }
    assert!(start.elapsed().as_secs() < 30, "budget exceeded");
}

/// Criterion 2: both linear-system counters equal exhaustive enumeration
/// on full input sweeps at n=1 (q <= 13) and n=2 (q=2).
#[test]
fn criterion_02_linear_system_counts() {
    let start = Instant::now();

    // one-sided oracle: enumerate all (block.cols x rhs.cols) stacks
    fn one_sided_oracle(field: &FieldSpec, block: &Matrix, rhs: &Matrix) -> u128 {
        let mut count = 0u128;
        for_all_matrices(field, block.cols(), rhs.cols(), |x| {
            if block.mul(x, field) == *rhs {
                count += 1;
            }
        });
        count
    }

    // two-sided oracle: enumerate all (b, f) pairs
    fn two_sided_oracle(field: &FieldSpec, a: &Matrix, e: &Matrix, c: &Matrix) -> u128 {
        let n = a.rows();
        let mut count = 0u128;
        for_all_matrices(field, n, n, |b| {
            let ba = b.mul(a, field);
            for_all_matrices(field, n, n, |f| {
                if ba.add(&e.mul(f, field), field) == *c {
                    count += 1;
                }
            });
        });
        count
    }

    for q in [2u64, 3, 4, 5, 7, 8, 9, 11, 13] {
        let spec = ring_for(q, 1);
        let field = spec.field();
        for ai in 0..q {
            for ei in 0..q {
                let block = Matrix::from_reps(field, 1, 2, &[ai, ei]).unwrap();
                for ci in 0..q {
                    let rhs = Matrix::from_reps(field, 1, 1, &[ci]).unwrap();
                    assert_eq!(
                        linear_solution_count(field, &block, &rhs).unwrap(),
                        one_sided_oracle(field, &block, &rhs),
                        "one-sided q={q} ({ai} {ei} | {ci})"
                    );
                    let a = Matrix::from_reps(field, 1, 1, &[ai]).unwrap();
                    let e = Matrix::from_reps(field, 1, 1, &[ei]).unwrap();
                    assert_eq!(
                        two_sided_solution_count(field, &a, &e, &rhs).unwrap(),
                        two_sided_oracle(field, &a, &e, &rhs),
                        "two-sided q={q} ({ai}, {ei}, {ci})"
                    );
                }
            }
        }
    }

    let spec = ring_for(2, 2);
    let field = spec.field();
    for ai in 0..spec.card() {
        let a = spec.decode(ai).unwrap();
        for ei in 0..spec.card() {
            let e = spec.decode(ei).unwrap();
            let block = Matrix::hstack(&[&a, &e]);
            for ci in 0..spec.card() {
                let c = spec.decode(ci).unwrap();
                assert_eq!(
                    linear_solution_count(field, &block, &c).unwrap(),
                    one_sided_oracle(field, &block, &c),
                    "one-sided n=2 ({ai}, {ei}, {ci})"
                );
                assert_eq!(
                    two_sided_solution_count(field, &a, &e, &c).unwrap(),
                    two_sided_oracle(field, &a, &e, &c),
                    "two-sided n=2 ({ai}, {ei}, {ci})"
                );
            }
        }
    }
    assert!(start.elapsed().as_secs() < 60, "budget exceeded");
}

/// Criterion 3: connection-set sizes equal the closed degree formulas and
/// the families partition the nonzero triples, at n=1 q <= 5 and n=2 q=2.
#[test]
fn criterion_03_degree_formulas_vs_connection_sets() {
    let start = Instant::now();
    for (q, n) in [(2u64, 1usize), (3, 1), (4, 1), (5, 1), (2, 2)] {
        let spec = ring_for(q, n);
        let space = spec.card().pow(3);
        for pair_form in [false, true] {
            let families = Family::all_for(n, pair_form);
            let sets: Vec<ConnectionSet> = families
                .iter()
                .map(|&f| ConnectionSet::build(&spec, f).unwrap())
                .collect();
            let mut total = 0u64;
            for (fam, set) in families.iter().zip(&sets) {
                let formula = degree_formula(*fam, n, q).unwrap().exact;
                assert_eq!(
                    BigUint::from(set.size()),
                    formula,
                    "q={q} n={n} family {fam}"
                );
                assert!(set.is_symmetric());
                total += set.size();
            }
            // partition of the nonzero triples
            assert_eq!(total, space - 1, "q={q} n={n} pair_form={pair_form}");
            for t in (1..space).step_by(7) {
                let claims = sets.iter().filter(|s| s.contains(t)).count();
                assert_eq!(claims, 1, "triple {t} q={q} n={n}");
            }
        }
    }
    assert!(start.elapsed().as_secs() < 60, "budget exceeded");
}

/// Criterion 4: the N N^T decompositions hold entrywise over the
/// integers at n=1, q in {2,3}, both orientations.
#[test]
fn criterion_04_nnt_decomposition_exact() {
    let start = Instant::now();
    for q in [2u64, 3] {
        let spec = ring_for(q, 1);
        for orientation in [Orientation::Left, Orientation::Right] {
            let report = verify_nnt_decomposition(&spec, orientation).unwrap();
            assert_eq!(
                report.max_abs_discrepancy, 0,
                "q={q} {orientation:?}: nonzero discrepancy"
            );
        }
    }
    assert!(start.elapsed().as_secs() < 30, "budget exceeded");
}

/// Criterion 5: lambda3 = q at n=1 for q=2,3 with dense and character
/// paths agreeing; the measured constant against q^(2n^2-(n+1)/2) stays
/// at most 2 up to n=1 q=7 and n=2 q=2.
#[test]
fn criterion_05_third_eigenvalue_left() {
    let start = Instant::now();
    for (q, want) in [(2u64, 2.0f64), (3, 3.0)] {
        let spec = ring_for(q, 1);
        let graph = BipartiteGraph::build(&spec, Orientation::Left).unwrap();
        let dense = third_eigenvalue(&graph, SpectralMethod::Dense).unwrap();
        let chars = third_eigenvalue(&graph, SpectralMethod::CharacterSum).unwrap();
        assert!((dense.lambda3 - want).abs() <= 1e-6 * want, "{dense:?}");
        assert!(
            (dense.lambda3 - chars.lambda3).abs() <= 1e-6 * want,
            "paths disagree: {dense:?} vs {chars:?}"
        );
    }
    for (q, n) in [(2u64, 1usize), (3, 1), (5, 1), (7, 1), (2, 2)] {
        let spec = ring_for(q, n);
        let graph = BipartiteGraph::predicate(&spec, Orientation::Left).unwrap();
        let report = third_eigenvalue(&graph, SpectralMethod::CharacterSum).unwrap();
        assert!(report.measured_constant <= 2.0, "q={q} n={n}: {report:?}");
        assert!(report.measured_constant > 0.0);
    }
    assert!(start.elapsed().as_secs() < 300, "budget exceeded");
}

/// Criterion 6: the reversed-orientation bound q^(2n^2-1) also holds
/// with measured constant at most 2 at the same scales.
#[test]
fn criterion_06_third_eigenvalue_right() {
    let start = Instant::now();
    for (q, n) in [(2u64, 1usize), (3, 1), (5, 1), (7, 1), (2, 2)] {
        let spec = ring_for(q, n);
        let graph = BipartiteGraph::predicate(&spec, Orientation::Right).unwrap();
        let report = third_eigenvalue(&graph, SpectralMethod::CharacterSum).unwrap();
        let expected_exponent = 2.0 * (n * n) as f64 - 1.0;
        assert!((report.bound_exponent - expected_exponent).abs() < 1e-12);
        assert!(report.measured_constant <= 2.0, "q={q} n={n}: {report:?}");
        assert!(report.measured_constant > 0.0);
    }
    assert!(start.elapsed().as_secs() < 300, "budget exceeded");
}

/// Criterion 7: the expander mixing inequality holds on 100 random
/// subset pairs per graph at n=1, q in {3,5,7}.
#[test]
fn criterion_07_mixing_lemma() {
    let start = Instant::now();
    for q in [3u64, 5, 7] {
        let spec = ring_for(q, 1);
        for orientation in [Orientation::Left, Orientation::Right] {
            let graph = BipartiteGraph::build(&spec, orientation).unwrap();
            let report = third_eigenvalue(&graph, SpectralMethod::CharacterSum).unwrap();
            for i in 0..100u64 {
                let dx = 0.05 + 0.9 * (rng::stream(q, 2 * i) as f64 / u64::MAX as f64);
                let dy = 0.05 + 0.9 * (rng::stream(q, 2 * i + 1) as f64 / u64::MAX as f64);
                let x = TripleSet::random(&spec, dx, 500 + i).unwrap();
                let y = TripleSet::random(&spec, dy, 900 + i).unwrap();
                let m = mixing_check(&graph, report.lambda3, &x, &y).unwrap();
                assert!(m.holds, "q={q} {orientation:?} pair {i}: {m:?}");
            }
        }
    }
    assert!(start.elapsed().as_secs() < 60, "budget exceeded");
}

/// Criterion 8: the two bridge identities hold exactly on 20 random
/// instances each at n=1, q <= 7.
#[test]
fn criterion_08_bridge_identities() {
    let start = Instant::now();
    let qs = [2u64, 3, 4, 5, 7];

    // sum of squared representation counts equals the sextuple count
    for trial in 0..20u64 {
        let q = qs[(trial % qs.len() as u64) as usize];
        let spec = ring_for(q, 1);
        let mk = |slot: u64| MatrixSet::random(&spec, 0.5, 3000 + trial * 13 + slot).unwrap();
        let (a, b, c) = (mk(0), mk(1), mk(2));
        let (_, table) = a_plus_bc(&a, &b, &c).unwrap();
        let lhs = table.sum_of_squares().unwrap();
        let rhs = count_n6(&b, &c, &a, &a.negated(), &b.negated(), &c).unwrap();
        assert_eq!(lhs, rhs, "square-sum identity, trial {trial} q={q}");
    }

    // edges between product sets equal the sextuple count
    for trial in 0..20u64 {
        let q = qs[(trial % qs.len() as u64) as usize];
        let spec = ring_for(q, 1);
        let graph = BipartiteGraph::build(&spec, Orientation::Left).unwrap();
        let mk = |slot: u64| MatrixSet::random(&spec, 0.5, 4000 + trial * 17 + slot).unwrap();
        let (a, b, c, d, e, f) = (mk(0), mk(1), mk(2), mk(3), mk(4), mk(5));
        let x = TripleSet::product(&a, &e, &c).unwrap();
        let y = TripleSet::product(&b, &f, &d).unwrap();
        assert_eq!(
            graph.edge_count_between(&x, &y).unwrap(),
            count_n6(&a, &b, &c, &d, &e, &f).unwrap(),
            "edge bridge, trial {trial} q={q}"
        );
    }
    assert!(start.elapsed().as_secs() < 60, "budget exceeded");
}

/// Criterion 9: for full sets at n=1, q in {2,3,5,7,11,13}, every
/// theorem's measured constant is at most 2.
#[test]
fn criterion_09_saturation_constants() {
    let start = Instant::now();
    for q in [2u64, 3, 5, 7, 11, 13] {
        for theorem in Theorem::ALL {
            let report = run_experiment(&ExperimentConfig::full_sets(theorem, 1, q, 1)).unwrap();
            let trial = &report.trials[0];
            assert!(
                trial.constant <= 2.0,
                "{} q={q}: measured constant {}",
                theorem.id(),
                trial.constant
            );
        }
    }
    assert!(start.elapsed().as_secs() < 120, "budget exceeded");
}

/// Criterion 10: repeated sweeps with one config and seed produce
/// byte-identical CSV across thread counts 1, 2 and 8.
#[test]
fn criterion_10_sweep_determinism() {
    let start = Instant::now();
    let config = serde_json::json!({
        "theorems": ["a_plus_bc", "sum_product", "energy_bound"],
        "n": 1,
        "fields": [[3, 1], [5, 1]],
        "densities": [0.3, 0.7],
        "trials": 3,
        "seed": 0
    });
    let dir = std::env::temp_dir().join(format!("sumprod-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config_path = dir.join("sweep.json");
    std::fs::write(&config_path, serde_json::to_string(&config).unwrap()).unwrap();

    let mut outputs: Vec<BTreeMap<&str, Vec<u8>>> = Vec::new();
    let mut csvs = Vec::new();
    for threads in ["1", "2", "8"] {
        let out = Command::new(env!("CARGO_BIN_EXE_sumprod"))
            .args([
                "sweep",
                "--config",
                config_path.to_str().unwrap(),
                "--format",
                "csv",
                "--threads",
                threads,
            ])
            .output()
            .unwrap();
        assert!(out.status.success(), "sweep failed: {:?}", out);
        csvs.push(out.stdout.clone());
        outputs.push(BTreeMap::from([("stdout", out.stdout)]));
    }
    assert_eq!(csvs[0], csvs[1], "threads 1 vs 2 differ");
    assert_eq!(csvs[0], csvs[2], "threads 1 vs 8 differ");

    // repeat run with the same thread count is also byte-identical
    let again = Command::new(env!("CARGO_BIN_EXE_sumprod"))
        .args([
            "sweep",
            "--config",
            config_path.to_str().unwrap(),
            "--format",
            "csv",
            "--threads",
            "2",
        ])
        .output()
        .unwrap();
    assert_eq!(csvs[1], again.stdout, "re-run differs");

    let text = String::from_utf8(csvs[0].clone()).unwrap();
    // 3 theorems x 2 fields x 2 densities x 3 trials + header
    assert_eq!(text.lines().count(), 3 * 2 * 2 * 3 + 1);
    std::fs::remove_dir_all(&dir).ok();
    assert!(start.elapsed().as_secs() < 60, "budget exceeded");
}
