//! Subsets of `M_n(F_q)` and the set-level quantities the growth theorems
//! speak about: sumsets, product sets, `A + BC`, additive energy, and the
//! solution counters for `ab + ef = c + d` and `a + b = cd`.
//!
//! Sets are dense bitsets over the canonical matrix index, so membership
//! and popcount are O(1)/O(card/64). Counters run by multiplicity-table
//! convolution rather than looping over tuples; every count is exact and
//! accumulated in checked 128-bit arithmetic.

use serde::{Deserialize, Serialize};

use crate::bitset::DenseBits;
use crate::field::FieldSpec;
use crate::matrix::{Matrix, MatrixIndex, RingSpec};
use crate::rng::stream_coin;
use crate::{Error, Result};

/// Shorthand identifying a ring in serialized artifacts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpecDescriptor {
    pub p: u64,
    pub m: u32,
    pub n: usize,
}

impl SpecDescriptor {
    pub fn of(spec: &RingSpec) -> SpecDescriptor {
        SpecDescriptor {
            p: spec.field().p(),
            m: spec.field().m(),
            n: spec.n(),
        }
    }

    pub fn build(&self) -> Result<RingSpec> {
        RingSpec::new(FieldSpec::new(self.p, self.m)?, self.n)
    }
}

/// A subset of `M_n(F_q)` as a dense bitset over matrix indices.
#[derive(Clone, PartialEq, Debug)]
pub struct MatrixSet {
    spec: RingSpec,
    bits: DenseBits,
    size: u64,
}

#[derive(Serialize, Deserialize)]
struct SetJson {
    spec: SpecDescriptor,
    encoding: String,
    members: Vec<u64>,
}

impl MatrixSet {
    fn from_bits(spec: RingSpec, bits: DenseBits) -> MatrixSet {
        let size = bits.count_ones();
        MatrixSet { spec, bits, size }
    }

    pub fn empty(spec: &RingSpec) -> MatrixSet {
        MatrixSet::from_bits(spec.clone(), DenseBits::new(spec.card()))
    }

    /// All of `M_n(F_q)`.
    pub fn full(spec: &RingSpec) -> MatrixSet {
        let mut bits = DenseBits::new(spec.card());
        for i in 0..spec.card() {
            bits.insert(i);
        }
        MatrixSet::from_bits(spec.clone(), bits)
    }

    /// The invertible matrices `GL_n(F_q)`.
    pub fn invertible(spec: &RingSpec) -> MatrixSet {
        let mut bits = DenseBits::new(spec.card());
        for (i, m) in spec.matrices().enumerate() {
            if m.det_inv(spec.field()).0.rep() != 0 {
                bits.insert(i as u64);
            }
        }
        MatrixSet::from_bits(spec.clone(), bits)
    }

    /// The matrices of zero determinant `Z_n(F_q)`.
    pub fn singular(spec: &RingSpec) -> MatrixSet {
        let mut bits = DenseBits::new(spec.card());
        for (i, m) in spec.matrices().enumerate() {
            if m.det_inv(spec.field()).0.rep() == 0 {
                bits.insert(i as u64);
            }
        }
        MatrixSet::from_bits(spec.clone(), bits)
    }

    /// Independent inclusion of each index with probability `density`,
    /// driven by the counter-based stream, so a `(density, seed)` pair
    /// names one set forever.
    pub fn random(spec: &RingSpec, density: f64, seed: u64) -> Result<MatrixSet> {
        if !(density > 0.0 && density <= 1.0) {
            return Err(Error::BadDensity(density));
        }
        let mut bits = DenseBits::new(spec.card());
        for i in 0..spec.card() {
            if stream_coin(seed, i, density) {
                bits.insert(i);
            }
        }
        Ok(MatrixSet::from_bits(spec.clone(), bits))
    }

    /// Explicit member list (an empty list yields the empty set).
    pub fn from_members(spec: &RingSpec, members: &[MatrixIndex]) -> Result<MatrixSet> {
        let mut bits = DenseBits::new(spec.card());
        for &i in members {
            if i >= spec.card() {
                return Err(Error::IndexOutOfRange(i, spec.card()));
            }
            bits.insert(i);
        }
        Ok(MatrixSet::from_bits(spec.clone(), bits))
    }

    #[inline]
    pub fn spec(&self) -> &RingSpec {
        &self.spec
    }

    #[inline]
    pub fn size(&self) -> u64 {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    #[inline]
    pub fn contains(&self, idx: MatrixIndex) -> bool {
        self.bits.contains(idx)
    }

    /// Member indices in increasing order.
    pub fn members(&self) -> impl Iterator<Item = MatrixIndex> + '_ {
        self.bits.ones()
    }

    /// Decoded members, in index order.
    pub fn member_matrices(&self) -> Vec<Matrix> {
        self.members()
            .map(|i| self.spec.decode(i).expect("member in range"))
            .collect()
    }

    pub fn is_subset_of(&self, other: &MatrixSet) -> bool {
        self.spec == other.spec && self.members().all(|i| other.contains(i))
    }

    fn check_same_spec(&self, other: &MatrixSet) -> Result<()> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(Error::MismatchedSpecs)
        }
    }

    /// `{x + y}` over all pairs.
    pub fn sum(&self, other: &MatrixSet) -> Result<MatrixSet> {
        self.check_same_spec(other)?;
        let mut bits = DenseBits::new(self.spec.card());
        for x in self.members() {
            for y in other.members() {
                bits.insert(self.spec.index_add(x, y));
            }
        }
        Ok(MatrixSet::from_bits(self.spec.clone(), bits))
    }

    /// `{x * y}` over all pairs.
    pub fn product(&self, other: &MatrixSet) -> Result<MatrixSet> {
        self.check_same_spec(other)?;
        let xs = self.member_matrices();
        let ys = other.member_matrices();
        let mut bits = DenseBits::new(self.spec.card());
        for x in &xs {
            for y in &ys {
                bits.insert(self.spec.encode(&x.mul(y, self.spec.field())));
            }
        }
        Ok(MatrixSet::from_bits(self.spec.clone(), bits))
    }

    /// `{-x}`.
    pub fn negated(&self) -> MatrixSet {
        let mut bits = DenseBits::new(self.spec.card());
        for x in self.members() {
            bits.insert(self.spec.index_neg(x));
        }
        MatrixSet::from_bits(self.spec.clone(), bits)
    }

    /// `{x^{-1}}`; every member must be invertible.
    pub fn inverted(&self) -> Result<MatrixSet> {
        let mut bits = DenseBits::new(self.spec.card());
        for x in self.members() {
            let m = self.spec.decode(x).expect("member in range");
            match m.det_inv(self.spec.field()).1 {
                Some(inv) => bits.insert(self.spec.encode(&inv)),
                None => return Err(Error::SingularMember(x)),
            }
        }
        Ok(MatrixSet::from_bits(self.spec.clone(), bits))
    }

    pub fn intersect(&self, other: &MatrixSet) -> Result<MatrixSet> {
        self.check_same_spec(other)?;
        let mut bits = DenseBits::new(self.spec.card());
        for x in self.members() {
            if other.contains(x) {
                bits.insert(x);
            }
        }
        Ok(MatrixSet::from_bits(self.spec.clone(), bits))
    }

    /// Reproducible JSON form: sorted member indices plus the encoding tag.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(SetJson {
            spec: SpecDescriptor::of(&self.spec),
            encoding: "base-q row-major".into(),
            members: self.members().collect(),
        })
        .expect("serializable")
    }

    pub fn from_json(v: &serde_json::Value) -> Result<MatrixSet> {
        let parsed: SetJson = serde_json::from_value(v.clone())?;
        let spec = parsed.spec.build()?;
        MatrixSet::from_members(&spec, &parsed.members)
    }
}

/// Representation counts `idx -> multiplicity` over the full index space.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicityTable {
    counts: Vec<u64>,
}

impl MultiplicityTable {
    fn new(card: u64) -> MultiplicityTable {
        MultiplicityTable {
            counts: vec![0; card as usize],
        }
    }

    #[inline]
    pub fn get(&self, idx: MatrixIndex) -> u64 {
        self.counts[idx as usize]
    }

    /// Nonzero entries in index order.
    pub fn support(&self) -> impl Iterator<Item = (MatrixIndex, u64)> + '_ {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (i as u64, c))
    }

    pub fn support_size(&self) -> u64 {
        self.counts.iter().filter(|&&c| c > 0).count() as u64
    }

    pub fn total(&self) -> Result<u128> {
        let mut acc: u128 = 0;
        for &c in &self.counts {
            acc = acc.checked_add(c as u128).ok_or(Error::Overflow)?;
        }
        Ok(acc)
    }

    pub fn sum_of_squares(&self) -> Result<u128> {
        let mut acc: u128 = 0;
        for &c in &self.counts {
            let sq = (c as u128).checked_mul(c as u128).ok_or(Error::Overflow)?;
            acc = acc.checked_add(sq).ok_or(Error::Overflow)?;
        }
        Ok(acc)
    }
}

/// `t(s) = #{(x, y) in X x Y : x + y = s}`.
fn sum_multiplicities(x: &MatrixSet, y: &MatrixSet) -> MultiplicityTable {
    let spec = x.spec();
    let mut t = MultiplicityTable::new(spec.card());
    for a in x.members() {
        for b in y.members() {
            t.counts[spec.index_add(a, b) as usize] += 1;
        }
    }
    t
}

/// `m(s) = #{(x, y) in X x Y : x * y = s}`.
fn product_multiplicities(x: &MatrixSet, y: &MatrixSet) -> MultiplicityTable {
    let spec = x.spec();
    let xs = x.member_matrices();
    let ys = y.member_matrices();
    let mut t = MultiplicityTable::new(spec.card());
    for a in &xs {
        for b in &ys {
            t.counts[spec.encode(&a.mul(b, spec.field())) as usize] += 1;
        }
    }
    t
}

/// The image `A + BC` together with the full representation count
/// `t(s) = #{(a, b, c) : a + bc = s}`. The counts sum to `|A||B||C|`.
pub fn a_plus_bc(
    a: &MatrixSet,
    b: &MatrixSet,
    c: &MatrixSet,
) -> Result<(MatrixSet, MultiplicityTable)> {
    if a.spec() != b.spec() || b.spec() != c.spec() {
        return Err(Error::MismatchedSpecs);
    }
    let spec = a.spec();
    let m_bc = product_multiplicities(b, c);
    let mut t = MultiplicityTable::new(spec.card());
    for (s, v) in m_bc.support() {
        for ai in a.members() {
            t.counts[spec.index_add(ai, s) as usize] += v;
        }
    }
    let mut bits = DenseBits::new(spec.card());
    for (s, _) in t.support() {
        bits.insert(s);
    }
    Ok((MatrixSet::from_bits(spec.clone(), bits), t))
}

/// The image `(A + B)C` together with the representation count
/// `t(s) = #{(a, b, c) : (a + b)c = s}`.
pub fn apb_c_table(
    a: &MatrixSet,
    b: &MatrixSet,
    c: &MatrixSet,
) -> Result<(MatrixSet, MultiplicityTable)> {
    if a.spec() != b.spec() || b.spec() != c.spec() {
        return Err(Error::MismatchedSpecs);
    }
    let spec = a.spec();
    let t_ab = sum_multiplicities(a, b);
    let cs = c.member_matrices();
    let mut t = MultiplicityTable::new(spec.card());
    for (s, v) in t_ab.support() {
        let sm = spec.decode(s).expect("in range");
        for cm in &cs {
            let idx = spec.encode(&sm.mul(cm, spec.field())) as usize;
            t.counts[idx] = t.counts[idx].checked_add(v).ok_or(Error::Overflow)?;
        }
    }
    let mut bits = DenseBits::new(spec.card());
    for (s, _) in t.support() {
        bits.insert(s);
    }
    Ok((MatrixSet::from_bits(spec.clone(), bits), t))
}

/// Exact number of sextuples `(a, b, c, d, e, f)` with `ab + ef = c + d`.
///
/// Computed by convolution: multiplicity tables for `{ab + ef}` and
/// `{c + d}`, then a pointwise dot product. No tuple loop.
pub fn count_n6(
    a: &MatrixSet,
    b: &MatrixSet,
    c: &MatrixSet,
    d: &MatrixSet,
    e: &MatrixSet,
    f: &MatrixSet,
) -> Result<u128> {
    for s in [b, c, d, e, f] {
        if a.spec() != s.spec() {
            return Err(Error::MismatchedSpecs);
        }
    }
    let spec = a.spec();
    let m_ab = product_multiplicities(a, b);
    let m_ef = product_multiplicities(e, f);
    let m_cd = sum_multiplicities(c, d);

    // the ab + ef table can exceed 64 bits at the enumeration ceiling
    let mut m1: Vec<u128> = vec![0; spec.card() as usize];
    for (s1, v1) in m_ab.support() {
        for (s2, v2) in m_ef.support() {
            let idx = spec.index_add(s1, s2) as usize;
            let prod = (v1 as u128)
                .checked_mul(v2 as u128)
                .ok_or(Error::Overflow)?;
            m1[idx] = m1[idx].checked_add(prod).ok_or(Error::Overflow)?;
        }
    }

    let mut acc: u128 = 0;
    for (s, v2) in m_cd.support() {
        let prod = m1[s as usize]
            .checked_mul(v2 as u128)
            .ok_or(Error::Overflow)?;
        acc = acc.checked_add(prod).ok_or(Error::Overflow)?;
    }
    Ok(acc)
}

/// Additive energy `E_+(A, B)`: quadruples with `a1 + b1 = a2 + b2`.
///
/// Also asserts the Cauchy-Schwarz identity
/// `(|A||B|)^2 <= |A+B| * E_+(A, B)` on the freshly computed values.
pub fn additive_energy(a: &MatrixSet, b: &MatrixSet) -> Result<u128> {
    if a.spec() != b.spec() {
        return Err(Error::MismatchedSpecs);
    }
    let t = sum_multiplicities(a, b);
    let energy = t.sum_of_squares()?;
    let sumset = t.support_size() as u128;
    let pairs = (a.size() as u128)
        .checked_mul(b.size() as u128)
        .ok_or(Error::Overflow)?;
    let lhs = pairs.checked_mul(pairs).ok_or(Error::Overflow)?;
    if let Some(rhs) = energy.checked_mul(sumset) {
        assert!(lhs <= rhs, "Cauchy-Schwarz floor violated");
    } // a None product exceeds 2^128 > lhs

    Ok(energy)
}

/// Exact number of quadruples `(a, b, c, d)` with `a + b = cd`.
pub fn count_a_plus_b_eq_cd(
    a: &MatrixSet,
    b: &MatrixSet,
    c: &MatrixSet,
    d: &MatrixSet,
) -> Result<u128> {
    for s in [b, c, d] {
        if a.spec() != s.spec() {
            return Err(Error::MismatchedSpecs);
        }
    }
    let t_ab = sum_multiplicities(a, b);
    let m_cd = product_multiplicities(c, d);
    let mut acc: u128 = 0;
    for (s, v) in t_ab.support() {
        let prod = (v as u128)
            .checked_mul(m_cd.get(s) as u128)
            .ok_or(Error::Overflow)?;
        acc = acc.checked_add(prod).ok_or(Error::Overflow)?;
    }
    Ok(acc)
}
