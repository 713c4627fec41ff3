//! Fixed-width subsets of a finite index set.
//!
//! Every finite structure in this crate (points of a space, objects of a
//! model, prime ideals) is indexed densely from zero, so subsets are stored
//! as a single `u128`. Subsets are totally ordered by their mask value,
//! which is the deterministic tie-break used by every enumeration.

use std::fmt;
use std::ops::{BitAnd, BitOr, Not, Sub};

/// Largest index set a [`Bits`] value can address.
pub const MAX_BITS: usize = 128;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Bits(pub u128);

impl Bits {
    pub const EMPTY: Bits = Bits(0);

    /// The subset `{0, .., n-1}`.
    pub fn full(n: usize) -> Bits {
        assert!(n <= MAX_BITS, "index set of size {n} exceeds {MAX_BITS}");
        if n == MAX_BITS {
            Bits(u128::MAX)
        } else {
            Bits((1u128 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Bits {
        assert!(i < MAX_BITS);
        Bits(1u128 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(it: I) -> Bits {
        it.into_iter().fold(Bits::EMPTY, |acc, i| acc | Bits::singleton(i))
    }

    #[inline]
    pub fn contains(self, i: usize) -> bool {
        i < MAX_BITS && (self.0 >> i) & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, i: usize) {
        self.0 |= 1u128 << i;
    }

    #[inline]
    pub fn remove(&mut self, i: usize) {
        self.0 &= !(1u128 << i);
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    #[inline]
    pub fn is_subset(self, other: Bits) -> bool {
        self.0 & !other.0 == 0
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Smallest member, if any.
    pub fn first(self) -> Option<usize> {
        if self.0 == 0 {
            None
        } else {
            Some(self.0.trailing_zeros() as usize)
        }
    }

    /// Members in increasing order.
    pub fn iter(self) -> BitsIter {
        BitsIter(self.0)
    }

    /// Members below `i` only.
    pub fn below(self, i: usize) -> Bits {
        if i >= MAX_BITS {
            self
        } else {
            Bits(self.0 & ((1u128 << i) - 1))
        }
    }
}

pub struct BitsIter(u128);

impl Iterator for BitsIter {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        if self.0 == 0 {
            return None;
        }
        let i = self.0.trailing_zeros() as usize;
        self.0 &= self.0 - 1;
        Some(i)
    }
}

impl FromIterator<usize> for Bits {
    fn from_iter<T: IntoIterator<Item = usize>>(iter: T) -> Self {
        Bits::from_indices(iter)
    }
}

impl BitOr for Bits {
    type Output = Bits;
    fn bitor(self, rhs: Bits) -> Bits {
        Bits(self.0 | rhs.0)
    }
}

impl BitAnd for Bits {
    type Output = Bits;
    fn bitand(self, rhs: Bits) -> Bits {
        Bits(self.0 & rhs.0)
    }
}

impl Sub for Bits {
    type Output = Bits;
    fn sub(self, rhs: Bits) -> Bits {
        Bits(self.0 & !rhs.0)
    }
}

impl Not for Bits {
    type Output = Bits;
    fn not(self) -> Bits {
        Bits(!self.0)
    }
}

impl fmt::Debug for Bits {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iter_is_ascending() {
        let b = Bits::from_indices([5, 1, 64, 3]);
        assert_eq!(b.iter().collect::<Vec<_>>(), vec![1, 3, 5, 64]);
        assert_eq!(b.len(), 4);
        assert_eq!(b.first(), Some(1));
    }

    #[test]
    fn full_and_subset() {
        assert_eq!(Bits::full(0), Bits::EMPTY);
        assert_eq!(Bits::full(128).len(), 128);
        assert!(Bits::from_indices([1, 2]).is_subset(Bits::full(3)));
        assert!(!Bits::from_indices([3]).is_subset(Bits::full(3)));
        assert_eq!(Bits::from_indices([0, 1, 2]).below(2), Bits::from_indices([0, 1]));
    }
}
