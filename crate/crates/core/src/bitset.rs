//! Fixed-length dense bitset over `u64` words.
//!
//! Membership, popcount and intersection dominate the set algebra, so the
//! representation is a flat word vector sized at construction.

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct DenseBits {
    len: u64,
    words: Vec<u64>,
}

impl DenseBits {
    pub fn new(len: u64) -> Self {
        let n_words = len.div_ceil(64) as usize;
        DenseBits {
            len,
            words: vec![0; n_words],
        }
    }

    #[inline]
    pub fn len(&self) -> u64 {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    #[inline]
    pub fn insert(&mut self, i: u64) {
        debug_assert!(i < self.len);
        self.words[(i / 64) as usize] |= 1u64 << (i % 64);
    }

    #[inline]
    pub fn remove(&mut self, i: u64) {
        debug_assert!(i < self.len);
        self.words[(i / 64) as usize] &= !(1u64 << (i % 64));
    }

    #[inline]
    pub fn contains(&self, i: u64) -> bool {
        debug_assert!(i < self.len);
        self.words[(i / 64) as usize] >> (i % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Popcount of the intersection with `other` (same length required).
    pub fn intersection_count(&self, other: &DenseBits) -> u64 {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as u64)
            .sum()
    }

    pub fn union_with(&mut self, other: &DenseBits) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    /// Indices of set bits in increasing order.
    pub fn ones(&self) -> impl Iterator<Item = u64> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut rest = w;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let bit = rest.trailing_zeros() as u64;
                rest &= rest - 1;
                Some(wi as u64 * 64 + bit)
            })
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn insert_contains_count() {
        let mut b = DenseBits::new(130);
        for i in [0u64, 63, 64, 129] {
            b.insert(i);
        }
        assert!(b.contains(63) && b.contains(64));
        assert!(!b.contains(1));
        assert_eq!(b.count_ones(), 4);
        assert_eq!(b.ones().collect::<Vec<_>>(), vec![0, 63, 64, 129]);
        b.remove(64);
        assert_eq!(b.count_ones(), 3);
    }

    #[test]
    fn intersection() {
        let mut a = DenseBits::new(100);
        let mut b = DenseBits::new(100);
        for i in 0..50 {
            a.insert(i);
        }
        for i in 25..75 {
            b.insert(i);
        }
        assert_eq!(a.intersection_count(&b), 25);
    }
}
