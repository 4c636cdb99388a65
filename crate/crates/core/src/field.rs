//! Exact arithmetic in `F_q`, `q = p^m <= 64`, plus the trace map and the
//! additive character needed for Cayley spectra.
//!
//! Elements are integers in `[0, q)` encoding the coefficient vector of
//! the polynomial basis in base `p` (coefficient of `x^j` is digit `j`).
//! Extension fields reduce modulo a fixed monic irreducible polynomial:
//! the least one of its degree when the non-leading coefficient vector is
//! read as a base-`p` integer (degree-(m-1) digit most significant), so
//! the representation is identical across runs and implementations.
//!
//! All binary operations are table lookups; the tables are built once at
//! construction from explicit polynomial arithmetic.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use crate::{Error, Result};

/// Enumeration ceiling for the field order.
pub const MAX_FIELD_ORDER: u64 = 64;

/// An element of `F_q`, stored as its representative in `[0, q)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, Default)]
pub struct FieldElement(u32);

impl FieldElement {
    #[inline]
    pub fn rep(self) -> u32 {
        self.0
    }
}

impl fmt::Display for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

struct Tables {
    add: Vec<u32>,
    mul: Vec<u32>,
    neg: Vec<u32>,
    inv: Vec<u32>,
    trace: Vec<u32>,
    psi: Vec<Complex64>,
}

/// The field `F_q` with `q = p^m`.
#[derive(Clone)]
pub struct FieldSpec {
    p: u64,
    m: u32,
    q: u64,
    /// Coefficients of the reduction modulus, constant term first,
    /// length `m + 1` with leading coefficient 1. Empty when `m == 1`.
    modulus: Vec<u32>,
    tables: Arc<Tables>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.m == other.m
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FieldSpec")
            .field("p", &self.p)
            .field("m", &self.m)
            .field("q", &self.q)
            .field("modulus", &self.modulus)
            .finish()
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

// --- polynomial arithmetic over F_p on little-endian coefficient vectors ---

fn poly_trim(v: &mut Vec<u32>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn poly_mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u32; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    poly_trim(&mut out);
    out
}

/// Remainder of `a` modulo the monic polynomial `f`.
fn poly_rem(a: &[u32], f: &[u32], p: u32) -> Vec<u32> {
    let mut r: Vec<u32> = a.to_vec();
    poly_trim(&mut r);
    let df = f.len() - 1;
    while r.len() > df {
        let lead = *r.last().unwrap();
        let shift = r.len() - 1 - df;
        for (i, &fc) in f.iter().enumerate() {
            let sub = (lead * fc) % p;
            let idx = shift + i;
            r[idx] = (r[idx] + p - sub) % p;
        }
        poly_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

/// Digits of `t` in base `p`, least significant first, padded to `len`.
fn digits(mut t: u64, p: u64, len: usize) -> Vec<u32> {
    let mut out = vec![0u32; len];
    for o in out.iter_mut() {
        *o = (t % p) as u32;
        t /= p;
    }
    out
}

fn value(digs: &[u32], p: u64) -> u64 {
    digs.iter().rev().fold(0u64, |acc, &d| acc * p + d as u64)
}

/// Irreducibility by trial division against every monic polynomial of
/// degree 1..=deg(f)/2.
fn is_irreducible(f: &[u32], p: u64) -> bool {
    let df = f.len() - 1;
    for d in 1..=df / 2 {
        let count = p.pow(d as u32);
        for t in 0..count {
            let mut g = digits(t, p, d);
            g.push(1); // monic degree d
            if poly_rem(f, &g, p as u32).is_empty() {
                return false;
            }
        }
    }
    true
}

/// Least monic irreducible polynomial of degree `m` over `F_p`.
fn least_irreducible(p: u64, m: u32) -> Vec<u32> {
    let count = p.pow(m);
    for t in 0..count {
        let mut f = digits(t, p, m as usize);
        f.push(1);
        if is_irreducible(&f, p) {
            return f;
        }
    }
    unreachable!("an irreducible polynomial of every degree exists over F_p")
}

impl FieldSpec {
    /// Constructs `F_{p^m}` with the deterministic least modulus.
    pub fn new(p: u64, m: u32) -> Result<FieldSpec> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if m < 1 {
            return Err(Error::ZeroDegree);
        }
        let q = p
            .checked_pow(m)
            .filter(|&q| q <= MAX_FIELD_ORDER)
            .ok_or(Error::FieldTooLarge(p.saturating_pow(m), MAX_FIELD_ORDER))?;
        let modulus = if m == 1 {
            Vec::new()
        } else {
            least_irreducible(p, m)
        };
        let tables = Arc::new(build_tables(p, m, q, &modulus));
        Ok(FieldSpec {
            p,
            m,
            q,
            modulus,
            tables,
        })
    }

    #[inline]
    pub fn p(&self) -> u64 {
        self.p
    }

    #[inline]
    pub fn m(&self) -> u32 {
        self.m
    }

    #[inline]
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Reduction modulus coefficients (constant term first); empty for
    /// prime fields.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn element(&self, rep: u64) -> Result<FieldElement> {
        if rep < self.q {
            Ok(FieldElement(rep as u32))
        } else {
            Err(Error::BadElement(rep, self.q))
        }
    }

    #[inline]
    pub fn zero(&self) -> FieldElement {
        FieldElement(0)
    }

    #[inline]
    pub fn one(&self) -> FieldElement {
        FieldElement(1)
    }

    pub fn elements(&self) -> impl Iterator<Item = FieldElement> {
        (0..self.q as u32).map(FieldElement)
    }

    #[inline]
    pub fn add(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(self.tables.add[(x.0 as u64 * self.q + y.0 as u64) as usize])
    }

    #[inline]
    pub fn sub(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        self.add(x, self.neg(y))
    }

    #[inline]
    pub fn mul(&self, x: FieldElement, y: FieldElement) -> FieldElement {
        FieldElement(self.tables.mul[(x.0 as u64 * self.q + y.0 as u64) as usize])
    }

    #[inline]
    pub fn neg(&self, x: FieldElement) -> FieldElement {
        FieldElement(self.tables.neg[x.0 as usize])
    }

    /// Multiplicative inverse; errors on zero.
    #[inline]
    pub fn inv(&self, x: FieldElement) -> Result<FieldElement> {
        if x.0 == 0 {
            Err(Error::DivisionByZero)
        } else {
            Ok(FieldElement(self.tables.inv[x.0 as usize]))
        }
    }

    pub fn pow(&self, x: FieldElement, e: u64) -> FieldElement {
        pow_by_table(|a, b| self.mul(a, b), x, e)
    }

    /// Absolute trace `Tr(x) = sum_{j<m} x^(p^j)`, returned as its
    /// representative in the prime subfield `[0, p)`.
    #[inline]
    pub fn trace(&self, x: FieldElement) -> u32 {
        self.tables.trace[x.0 as usize]
    }

    /// Additive character `psi(x) = exp(2*pi*i*Tr(x)/p)`.
    #[inline]
    pub fn character(&self, x: FieldElement) -> Complex64 {
        self.tables.psi[x.0 as usize]
    }
}

fn pow_by_table(
    mul: impl Fn(FieldElement, FieldElement) -> FieldElement,
    x: FieldElement,
    mut e: u64,
) -> FieldElement {
    let mut base = x;
    let mut acc = FieldElement(1);
    while e > 0 {
        if e & 1 == 1 {
            acc = mul(acc, base);
        }
        base = mul(base, base);
        e >>= 1;
    }
    acc
}

fn build_tables(p: u64, m: u32, q: u64, modulus: &[u32]) -> Tables {
    let qs = q as usize;
    let pu = p as u32;
    let mut add = vec![0u32; qs * qs];
    let mut mul = vec![0u32; qs * qs];
    let mut neg = vec![0u32; qs];

    for x in 0..q {
        let dx = digits(x, p, m as usize);
        let mut nd = dx.clone();
        for d in nd.iter_mut() {
            *d = (pu - *d) % pu;
        }
        neg[x as usize] = value(&nd, p) as u32;
        for y in 0..q {
            let dy = digits(y, p, m as usize);
            let sum: Vec<u32> = dx.iter().zip(&dy).map(|(&a, &b)| (a + b) % pu).collect();
            add[(x * q + y) as usize] = value(&sum, p) as u32;
            let prod = if m == 1 {
                vec![((x * y) % p) as u32]
            } else {
                let raw = poly_mul(&dx, &dy, pu);
                poly_rem(&raw, modulus, pu)
            };
            let mut prod_padded = prod;
            prod_padded.resize(m as usize, 0);
            mul[(x * q + y) as usize] = value(&prod_padded, p) as u32;
        }
    }

    // inv via x^(q-2) square-and-multiply on the table just built
    let table_mul = |a: FieldElement, b: FieldElement| {
        FieldElement(mul[(a.0 as u64 * q + b.0 as u64) as usize])
    };
    let mut inv = vec![0u32; qs];
    for x in 1..q {
        inv[x as usize] = pow_by_table(table_mul, FieldElement(x as u32), q - 2).0;
    }

    // trace via Frobenius powers
    let mut trace = vec![0u32; qs];
    for x in 0..q {
        let mut acc = FieldElement(0);
        let mut frob = FieldElement(x as u32);
        for _ in 0..m {
            acc = FieldElement(add[(acc.0 as u64 * q + frob.0 as u64) as usize]);
            frob = pow_by_table(table_mul, frob, p);
        }
        // the trace lands in the prime subfield, whose elements are the
        // representatives below p
        debug_assert!((acc.0 as u64) < p);
        trace[x as usize] = acc.0;
    }

    let psi = (0..qs)
        .map(|x| {
            let angle = 2.0 * std::f64::consts::PI * trace[x] as f64 / p as f64;
            Complex64::new(angle.cos(), angle.sin())
        })
        .collect();

    Tables {
        add,
        mul,
        neg,
        inv,
        trace,
        psi,
    }
}
