//! Row-reduced XOR bases over GF(2).
//!
//! Symplectic vectors pack a Pauli string as `x | (z << 64)`.

use crate::pauli::PauliString;

#[inline]
pub fn symplectic(p: &PauliString) -> u128 {
    (p.x_mask() as u128) | ((p.z_mask() as u128) << 64)
}

#[inline]
pub fn split_symplectic(v: u128) -> (u64, u64) {
    (v as u64, (v >> 64) as u64)
}

/// Fully reduced basis: every pivot (highest set bit of a basis vector) is
/// absent from all other basis vectors.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct XorBasis {
    vectors: Vec<u128>,
}

impl XorBasis {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_vectors<I: IntoIterator<Item = u128>>(iter: I) -> Self {
        let mut b = Self::new();
        for v in iter {
            b.insert(v);
        }
        b
    }

    fn reduce(&self, mut v: u128) -> u128 {
        for &b in &self.vectors {
            let pivot = 127 - b.leading_zeros();
            if (v >> pivot) & 1 == 1 {
                v ^= b;
            }
        }
        v
    }

    /// Adds `v` to the span; returns `false` if it was already in it.
    pub fn insert(&mut self, v: u128) -> bool {
        let r = self.reduce(v);
        if r == 0 {
            return false;
        }
        let pivot = 127 - r.leading_zeros();
        for b in &mut self.vectors {
            if (*b >> pivot) & 1 == 1 {
                *b ^= r;
            }
        }
        self.vectors.push(r);
        self.vectors.sort_unstable_by(|a, b| b.cmp(a));
        true
    }

    pub fn contains(&self, v: u128) -> bool {
        self.reduce(v) == 0
    }

    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn vectors(&self) -> &[u128] {
        &self.vectors
    }

    /// Visits all `2^rank` elements of the span in Gray-code order, starting
    /// from zero. Consecutive elements differ by one basis vector.
    pub fn for_each_element<F: FnMut(u128)>(&self, mut f: F) {
        let rank = self.vectors.len();
        assert!(rank < 64, "span too large to enumerate");
        let mut current = 0u128;
        f(current);
        for i in 1u64..(1u64 << rank) {
            current ^= self.vectors[i.trailing_zeros() as usize];
            f(current);
        }
    }
}
