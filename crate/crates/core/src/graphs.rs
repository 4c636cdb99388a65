//! The bipartite product graphs on `(M_n(F_q))^3` and their Cayley
//! decompositions.
//!
//! Both sides of a graph are the full triple space; a left vertex
//! `(a, e, c)` meets a right vertex `(b, f, d)` exactly when
//! `ab + ef = c + d` (left orientation) or `ba + ef = c + d` (right
//! orientation). The number of common neighbors of two left vertices
//! depends only on their difference triple, and the difference triples
//! split into rank-classified families; this module materializes those
//! families as symmetric connection sets and checks the resulting
//! decomposition of `N N^T` entry by entry.

use std::io::Write;

use crate::bitset::DenseBits;
use crate::counting::{two_sided_solution_count, Family};
use crate::matrix::{Matrix, RingSpec};
use crate::rng::stream_coin;
use crate::{Error, Result};

/// Index of a triple `(x, y, z)` of matrices: three concatenated base-q
/// digit groups, `x` least significant.
pub type TripleIndex = u64;

/// Materialization ceiling for the triple space `q^(3n^2)`.
pub const MAX_TRIPLE_SPACE: u64 = 1 << 22;

/// Dimension ceiling for exact `N N^T` matrices.
pub const MAX_NNT_DIM: u64 = 4096;

pub fn triple_space(spec: &RingSpec) -> u128 {
    (spec.card() as u128).pow(3)
}

fn checked_triple_space(spec: &RingSpec) -> Result<u64> {
    let space = triple_space(spec);
    if space > MAX_TRIPLE_SPACE as u128 {
        Err(Error::GraphTooLarge(space, MAX_TRIPLE_SPACE))
    } else {
        Ok(space as u64)
    }
}

pub fn triple_encode(card: u64, x: u64, y: u64, z: u64) -> TripleIndex {
    x + card * (y + card * z)
}

pub fn triple_decode(card: u64, t: TripleIndex) -> (u64, u64, u64) {
    (t % card, t / card % card, t / (card * card))
}

/// Componentwise difference of triples under the additive group.
pub fn triple_sub(spec: &RingSpec, s: TripleIndex, t: TripleIndex) -> TripleIndex {
    let card = spec.card();
    let (sx, sy, sz) = triple_decode(card, s);
    let (tx, ty, tz) = triple_decode(card, t);
    triple_encode(
        card,
        spec.index_sub(sx, tx),
        spec.index_sub(sy, ty),
        spec.index_sub(sz, tz),
    )
}

pub fn triple_add(spec: &RingSpec, s: TripleIndex, t: TripleIndex) -> TripleIndex {
    let card = spec.card();
    let (sx, sy, sz) = triple_decode(card, s);
    let (tx, ty, tz) = triple_decode(card, t);
    triple_encode(
        card,
        spec.index_add(sx, tx),
        spec.index_add(sy, ty),
        spec.index_add(sz, tz),
    )
}

pub fn triple_neg(spec: &RingSpec, t: TripleIndex) -> TripleIndex {
    let card = spec.card();
    let (tx, ty, tz) = triple_decode(card, t);
    triple_encode(
        card,
        spec.index_neg(tx),
        spec.index_neg(ty),
        spec.index_neg(tz),
    )
}

/// Which product goes into the edge rule.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Orientation {
    /// `ab + ef = c + d`
    Left,
    /// `ba + ef = c + d`
    Right,
}

impl Orientation {
    pub fn label(&self) -> &'static str {
        match self {
            Orientation::Left => "left",
            Orientation::Right => "right",
        }
    }

    /// The family set decomposing this orientation's `N N^T`.
    pub fn pair_form(&self) -> bool {
        matches!(self, Orientation::Right)
    }
}

/// A subset of the left (or right) vertex set, as a bitset over triples.
#[derive(Clone, PartialEq, Debug)]
pub struct TripleSet {
    spec: RingSpec,
    bits: DenseBits,
    size: u64,
}

impl TripleSet {
    fn from_bits(spec: RingSpec, bits: DenseBits) -> TripleSet {
        let size = bits.count_ones();
        TripleSet { spec, bits, size }
    }

    pub fn empty(spec: &RingSpec) -> Result<TripleSet> {
        let space = checked_triple_space(spec)?;
        Ok(TripleSet::from_bits(spec.clone(), DenseBits::new(space)))
    }

    pub fn full(spec: &RingSpec) -> Result<TripleSet> {
        let space = checked_triple_space(spec)?;
        let mut bits = DenseBits::new(space);
        for t in 0..space {
            bits.insert(t);
        }
        Ok(TripleSet::from_bits(spec.clone(), bits))
    }

    pub fn random(spec: &RingSpec, density: f64, seed: u64) -> Result<TripleSet> {
        if !(density > 0.0 && density <= 1.0) {
            return Err(Error::BadDensity(density));
        }
        let space = checked_triple_space(spec)?;
        let mut bits = DenseBits::new(space);
        for t in 0..space {
            if stream_coin(seed, t, density) {
                bits.insert(t);
            }
        }
        Ok(TripleSet::from_bits(spec.clone(), bits))
    }

    /// The product set `X x Y x Z` of three matrix sets, in slot order
    /// (first component least significant).
    pub fn product(
        x: &crate::sets::MatrixSet,
        y: &crate::sets::MatrixSet,
        z: &crate::sets::MatrixSet,
    ) -> Result<TripleSet> {
        if x.spec() != y.spec() || y.spec() != z.spec() {
            return Err(Error::MismatchedSpecs);
        }
        let spec = x.spec();
        let space = checked_triple_space(spec)?;
        let card = spec.card();
        let mut bits = DenseBits::new(space);
        for zi in z.members() {
            for yi in y.members() {
                for xi in x.members() {
                    bits.insert(triple_encode(card, xi, yi, zi));
                }
            }
        }
        Ok(TripleSet::from_bits(spec.clone(), bits))
    }

    pub fn from_indices(spec: &RingSpec, indices: &[TripleIndex]) -> Result<TripleSet> {
        let space = checked_triple_space(spec)?;
        let mut bits = DenseBits::new(space);
        for &t in indices {
            if t >= space {
                return Err(Error::IndexOutOfRange(t, space));
            }
            bits.insert(t);
        }
        Ok(TripleSet::from_bits(spec.clone(), bits))
    }

    #[inline]
    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    #[inline]
    pub fn size(&self) -> u64 {
        self.size
    }

    #[inline]
    pub fn contains(&self, t: TripleIndex) -> bool {
        self.bits.contains(t)
    }

    pub fn members(&self) -> impl Iterator<Item = TripleIndex> + '_ {
        self.bits.ones()
    }
}

/// One rank-family Cayley connection set on the triple space:
/// `u ~ v` iff `u - v` lies in the set. Symmetric and zero-free by
/// construction.
#[derive(Clone, Debug)]
pub struct ConnectionSet {
    spec: RingSpec,
    family: Family,
    bits: DenseBits,
    size: u64,
}

impl ConnectionSet {
    /// Sweeps the whole triple space and keeps the differences the family
    /// claims.
    pub fn build(spec: &RingSpec, family: Family) -> Result<ConnectionSet> {
        family.validate(spec.n())?;
        let space = checked_triple_space(spec)?;
        let mut bits = DenseBits::new(space);
        for t in 1..space {
            if classify_triple(spec, family_pair_form(family), t) == Some(family) {
                bits.insert(t);
            }
        }
        let size = bits.count_ones();
        Ok(ConnectionSet {
            spec: spec.clone(),
            family,
            bits,
            size,
        })
    }

    #[inline]
    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    #[inline]
    pub fn family(&self) -> Family {
        self.family
    }

    #[inline]
    pub fn size(&self) -> u64 {
        self.size
    }

    #[inline]
    pub fn contains(&self, t: TripleIndex) -> bool {
        self.bits.contains(t)
    }

    pub fn members(&self) -> impl Iterator<Item = TripleIndex> + '_ {
        self.bits.ones()
    }

    pub fn is_symmetric(&self) -> bool {
        !self.bits.contains(0)
            && self
                .members()
                .all(|t| self.contains(triple_neg(&self.spec, t)))
    }
}

fn family_pair_form(family: Family) -> bool {
    matches!(
        family,
        Family::SolvablePair { .. } | Family::UnsolvablePair { .. }
    )
}

/// Classifies a nonzero difference triple into its family; `None` for the
/// zero triple.
///
/// Block form (`pair_form = false`): `k = rank(a e)` as an n x 2n block,
/// solvable iff appending `c` keeps the rank. Pair form: `k1 = rank(e)`,
/// `k2 = rank(a)`, solvable iff the two-sided system admits a solution.
pub fn classify_triple(spec: &RingSpec, pair_form: bool, t: TripleIndex) -> Option<Family> {
    if t == 0 {
        return None;
    }
    let card = spec.card();
    let (ai, ei, ci) = triple_decode(card, t);
    let a = spec.decode(ai).expect("in range");
    let e = spec.decode(ei).expect("in range");
    let c = spec.decode(ci).expect("in range");
    let field = spec.field();
    if pair_form {
        let k1 = e.rank(field);
        let k2 = a.rank(field);
        let solvable = two_sided_solution_count(field, &a, &e, &c).expect("square inputs") > 0;
        if solvable {
            Some(Family::SolvablePair { k1, k2 })
        } else {
            Some(Family::UnsolvablePair { k1, k2 })
        }
    } else {
        let block = Matrix::hstack(&[&a, &e]);
        let k = block.rank(field);
        let augmented = Matrix::hstack(&[&a, &e, &c]);
        if augmented.rank(field) == k {
            Some(Family::Solvable { k })
        } else {
            Some(Family::Unsolvable { k })
        }
    }
}

/// The coefficient a family's adjacency matrix carries in the `N N^T`
/// decomposition: the family's common-neighbor count minus the `q^(n^2)`
/// absorbed by the all-ones term (so unsolvable families carry
/// `-q^(n^2)`).
pub fn nnt_coefficient(spec: &RingSpec, family: Family) -> i128 {
    let q = spec.q() as i128;
    let n = spec.n() as u32;
    let qn2 = q.pow(n * n);
    match family {
        Family::Solvable { k } => q.pow(2 * n * n - n * k as u32) - qn2,
        Family::Unsolvable { .. } => -qn2,
        Family::SolvablePair { k1, k2 } => {
            q.pow(2 * n * n - (k1 as u32) * n - (k2 as u32) * n + (k1 * k2) as u32) - qn2
        }
        Family::UnsolvablePair { .. } => -qn2,
    }
}

/// One of the two sum-product graphs, sides `U = V = (M_n(F_q))^3`.
pub struct BipartiteGraph {
    spec: RingSpec,
    orientation: Orientation,
    /// Neighbor bitsets per left vertex when materialized.
    rows: Option<Vec<DenseBits>>,
    mats: Vec<Matrix>,
}

impl BipartiteGraph {
    /// Materialized build: errors above the triple-space ceiling, checks
    /// biregularity of both sides during the sweep.
    pub fn build(spec: &RingSpec, orientation: Orientation) -> Result<BipartiteGraph> {
        let mut g = BipartiteGraph::predicate(spec, orientation)?;
        let space = checked_triple_space(spec)?;
        let mut right_degrees = vec![0u64; space as usize];
        let mut rows = Vec::with_capacity(space as usize);
        for u in 0..space {
            let mut row = DenseBits::new(space);
            for v in g.neighbors(u) {
                row.insert(v);
                right_degrees[v as usize] += 1;
            }
            assert_eq!(row.count_ones(), g.degree(), "left degree off at {u}");
            rows.push(row);
        }
        let deg = g.degree();
        assert!(
            right_degrees.iter().all(|&d| d == deg),
            "graph is not biregular"
        );
        g.rows = Some(rows);
        Ok(g)
    }

    /// Predicate-only view: edges are computed from the rule, nothing is
    /// stored. Still subject to the triple-space ceiling.
    pub fn predicate(spec: &RingSpec, orientation: Orientation) -> Result<BipartiteGraph> {
        checked_triple_space(spec)?;
        let mats = spec.matrices().collect();
        Ok(BipartiteGraph {
            spec: spec.clone(),
            orientation,
            rows: None,
            mats,
        })
    }

    #[inline]
    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    #[inline]
    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// `q^(3n^2)`, the size of each side.
    pub fn side_size(&self) -> u64 {
        triple_space(&self.spec) as u64
    }

    /// `q^(2n^2)`, the common degree of both sides.
    pub fn degree(&self) -> u64 {
        self.spec.card() * self.spec.card()
    }

    pub fn edge_count(&self) -> u128 {
        self.side_size() as u128 * self.degree() as u128
    }

    pub fn is_materialized(&self) -> bool {
        self.rows.is_some()
    }

    /// The right endpoint forced by `(b, f)` from left vertex `u`:
    /// `d = ab + ef - c` (or `ba + ef - c`).
    fn forced_d(&self, a: &Matrix, e: &Matrix, c: &Matrix, b: &Matrix, f: &Matrix) -> u64 {
        let field = self.spec.field();
        let prod = match self.orientation {
            Orientation::Left => a.mul(b, field),
            Orientation::Right => b.mul(a, field),
        };
        let d = prod.add(&e.mul(f, field), field).sub(c, field);
        self.spec.encode(&d)
    }

    /// Neighbors of a left vertex, one per `(b, f)` pair.
    pub fn neighbors(&self, u: TripleIndex) -> impl Iterator<Item = TripleIndex> + '_ {
        let card = self.spec.card();
        let (ai, ei, ci) = triple_decode(card, u);
        let a = &self.mats[ai as usize];
        let e = &self.mats[ei as usize];
        let c = self.mats[ci as usize].clone();
        (0..card * card).map(move |bf| {
            let (bi, fi) = (bf % card, bf / card);
            let d = self.forced_d(a, e, &c, &self.mats[bi as usize], &self.mats[fi as usize]);
            triple_encode(card, bi, fi, d)
        })
    }

    pub fn has_edge(&self, u: TripleIndex, v: TripleIndex) -> bool {
        if let Some(rows) = &self.rows {
            return rows[u as usize].contains(v);
        }
        let card = self.spec.card();
        let (ai, ei, ci) = triple_decode(card, u);
        let (bi, fi, di) = triple_decode(card, v);
        let d = self.forced_d(
            &self.mats[ai as usize],
            &self.mats[ei as usize],
            &self.mats[ci as usize],
            &self.mats[bi as usize],
            &self.mats[fi as usize],
        );
        d == di
    }

    /// Exact number of edges between a left subset and a right subset.
    pub fn edge_count_between(&self, x: &TripleSet, y: &TripleSet) -> Result<u128> {
        if x.spec != self.spec || y.spec != self.spec {
            return Err(Error::MismatchedSpecs);
        }
        let mut count: u128 = 0;
        if let Some(rows) = &self.rows {
            for u in x.members() {
                count += rows[u as usize].intersection_count(&y.bits) as u128;
            }
        } else {
            for u in x.members() {
                count += self.neighbors(u).filter(|&v| y.contains(v)).count() as u128;
            }
        }
        Ok(count)
    }

    /// Exact `N N^T` (dense, row-major): entry `(u1, u2)` is the number
    /// of common neighbors, straight from the materialized rows.
    pub fn nnt(&self) -> Result<Vec<u64>> {
        let dim = self.side_size();
        if dim > MAX_NNT_DIM {
            return Err(Error::DenseTooLarge(dim as usize, MAX_NNT_DIM as usize));
        }
        let rows = match &self.rows {
            Some(rows) => rows,
            None => {
                return Err(Error::GraphTooLarge(
                    triple_space(&self.spec),
                    MAX_TRIPLE_SPACE,
                ))
            }
        };
        let d = dim as usize;
        let mut out = vec![0u64; d * d];
        for u1 in 0..d {
            for u2 in u1..d {
                let common = rows[u1].intersection_count(&rows[u2]);
                out[u1 * d + u2] = common;
                out[u2 * d + u1] = common;
            }
        }
        Ok(out)
    }

    /// Plain edge-list export: one `u v` line per edge, decimal triple
    /// indices.
    pub fn export_edges<W: Write>(&self, mut w: W) -> Result<()> {
        for u in 0..self.side_size() {
            for v in self.neighbors(u) {
                writeln!(w, "{u} {v}")?;
            }
        }
        Ok(())
    }
}

/// Report of the entrywise `N N^T` decomposition check.
#[derive(Clone, Debug)]
pub struct NntReport {
    pub orientation: Orientation,
    pub dim: u64,
    pub families: usize,
    pub max_abs_discrepancy: u64,
}

/// Builds the graph and every family of its orientation, assembles the
/// decomposition `q^(n^2) J + (deg - q^(n^2)) I + sum coef * adjacency`
/// and compares it to the true common-neighbor matrix entry by entry.
pub fn verify_nnt_decomposition(spec: &RingSpec, orientation: Orientation) -> Result<NntReport> {
    let graph = BipartiteGraph::build(spec, orientation)?;
    let lhs = graph.nnt()?;
    let dim = graph.side_size();
    let n = spec.n();
    let qn2 = (spec.q() as i128).pow((n * n) as u32);
    let deg = graph.degree() as i128;

    let families = Family::all_for(n, orientation.pair_form());
    let sets = families
        .iter()
        .map(|&f| ConnectionSet::build(spec, f))
        .collect::<Result<Vec<_>>>()?;
    let coefs: Vec<i128> = families.iter().map(|&f| nnt_coefficient(spec, f)).collect();

    let mut max_abs: i128 = 0;
    for u1 in 0..dim {
        for u2 in 0..dim {
            let mut rhs = qn2;
            if u1 == u2 {
                rhs += deg - qn2;
            } else {
                let diff = triple_sub(spec, u1, u2);
                for (set, &coef) in sets.iter().zip(&coefs) {
                    if set.contains(diff) {
                        rhs += coef;
                    }
                }
            }
            let got = lhs[(u1 * dim + u2) as usize] as i128;
            max_abs = max_abs.max((got - rhs).abs());
        }
    }
    Ok(NntReport {
        orientation,
        dim,
        families: families.len(),
        max_abs_discrepancy: max_abs as u64,
    })
}
