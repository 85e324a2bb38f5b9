//! Pauli strings modulo phase in the symplectic (x-mask, z-mask) encoding.
//!
//! Qubit `j` is bit `j` of both masks and the `j`-th letter of the text form,
//! so `"XZIIXY"` has qubit 0 on the left. Letters decode as
//! `(x, z) = (0,0) -> I`, `(1,0) -> X`, `(0,1) -> Z`, `(1,1) -> Y`.
//!
//! `Y` stands for the real matrix `iY = [[0, 1], [-1, 0]]` wherever a matrix
//! action is needed ([`PauliString::basis_action`]). With that convention
//! every string is a real matrix: odd strings (odd number of `Y`) are
//! antisymmetric and even strings are symmetric.

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;

use crate::error::{Error, Result};

pub const MAX_QUBITS: usize = 64;

/// Parity of the number of `Y` letters in a string.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn from_count(count: u32) -> Self {
        if count % 2 == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString {
    n_qubits: u8,
    x: u64,
    z: u64,
}

#[inline]
pub(crate) fn low_mask(n_qubits: usize) -> u64 {
    if n_qubits >= 64 {
        u64::MAX
    } else {
        (1u64 << n_qubits) - 1
    }
}

impl PauliString {
    /// Builds a string from raw masks; bits above `n_qubits` are rejected.
    pub fn from_masks(n_qubits: usize, x_mask: u64, z_mask: u64) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::EmptyPauli);
        }
        if n_qubits > MAX_QUBITS {
            return Err(Error::TooManyQubits(n_qubits));
        }
        let m = low_mask(n_qubits);
        if x_mask & !m != 0 || z_mask & !m != 0 {
            return Err(Error::Invalid(format!(
                "masks {x_mask:#x}/{z_mask:#x} use bits beyond {n_qubits} qubits"
            )));
        }
        Ok(PauliString {
            n_qubits: n_qubits as u8,
            x: x_mask,
            z: z_mask,
        })
    }

    pub fn identity(n_qubits: usize) -> Result<Self> {
        Self::from_masks(n_qubits, 0, 0)
    }

    /// Single-letter string `letter` on `qubit`, identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, letter: char) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::IndexOutOfRange {
                index: qubit as u64,
                n_qubits,
            });
        }
        let (x, z) = letter_bits(letter).ok_or(Error::InvalidPauliChar {
            ch: letter,
            position: 0,
        })?;
        Self::from_masks(n_qubits, (x as u64) << qubit, (z as u64) << qubit)
    }

    #[inline]
    pub fn n_qubits(&self) -> usize {
        self.n_qubits as usize
    }

    /// Bit `j` set iff qubit `j` carries `X` or `Y` (the string flips it).
    #[inline]
    pub fn x_mask(&self) -> u64 {
        self.x
    }

    /// Bit `j` set iff qubit `j` carries `Z` or `Y`.
    #[inline]
    pub fn z_mask(&self) -> u64 {
        self.z
    }

    #[inline]
    pub fn y_mask(&self) -> u64 {
        self.x & self.z
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Number of qubits flipped (count of `X` and `Y` letters).
    pub fn flip_weight(&self) -> u32 {
        self.x.count_ones()
    }

    pub fn y_parity(&self) -> Parity {
        Parity::from_count(self.y_mask().count_ones())
    }

    #[inline]
    pub fn is_odd(&self) -> bool {
        self.y_mask().count_ones() % 2 == 1
    }

    fn check_same_size(&self, other: &PauliString) -> Result<()> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::QubitMismatch {
                left: self.n_qubits(),
                right: other.n_qubits(),
            });
        }
        Ok(())
    }

    /// Symplectic test; both strings must act on the same number of qubits.
    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        self.check_same_size(other)?;
        Ok(self.commutes_unchecked(other))
    }

    #[inline]
    pub(crate) fn commutes_unchecked(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// Product with the sign dropped.
    pub fn product(&self, other: &PauliString) -> Result<PauliString> {
        self.check_same_size(other)?;
        Ok(self.product_unchecked(other))
    }

    #[inline]
    pub(crate) fn product_unchecked(&self, other: &PauliString) -> PauliString {
        PauliString {
            n_qubits: self.n_qubits,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        }
    }

    /// Image of computational basis state `|basis_index>` under the real
    /// matrix of this string: `M |b> = sign |b ^ x_mask>`.
    pub fn basis_action(&self, basis_index: u64) -> Result<(u64, i8)> {
        if basis_index & !low_mask(self.n_qubits()) != 0 {
            return Err(Error::IndexOutOfRange {
                index: basis_index,
                n_qubits: self.n_qubits(),
            });
        }
        Ok((basis_index ^ self.x, self.sign_at(basis_index)))
    }

    /// `(-1)^{|y|} (-1)^{popcount(b & z)}`: Z gives `(-1)^{b_j}`, iY gives
    /// `-1` on `|0>` and `+1` on `|1>`.
    #[inline]
    pub(crate) fn sign_at(&self, basis_index: u64) -> i8 {
        let flips = self.y_mask().count_ones() + (basis_index & self.z).count_ones();
        if flips.is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Dense `2^n x 2^n` real matrix. Only sensible for small `n`.
    pub fn dense_matrix(&self) -> DMatrix<f64> {
        let dim = 1usize << self.n_qubits();
        let mut m = DMatrix::zeros(dim, dim);
        for b in 0..dim as u64 {
            let target = b ^ self.x;
            m[(target as usize, b as usize)] = self.sign_at(b) as f64;
        }
        m
    }

    pub fn letter(&self, qubit: usize) -> char {
        let x = (self.x >> qubit) & 1;
        let z = (self.z >> qubit) & 1;
        match (x, z) {
            (0, 0) => 'I',
            (1, 0) => 'X',
            (0, 1) => 'Z',
            _ => 'Y',
        }
    }
}

fn letter_bits(c: char) -> Option<(bool, bool)> {
    match c {
        'I' => Some((false, false)),
        'X' => Some((true, false)),
        'Z' => Some((false, true)),
        'Y' => Some((true, true)),
        _ => None,
    }
}

/// Parses a letter string over `{I, X, Y, Z}`; the leftmost letter is qubit 0.
pub fn parse_pauli(text: &str) -> Result<PauliString> {
    text.parse()
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        if text.is_empty() {
            return Err(Error::EmptyPauli);
        }
        let mut x = 0u64;
        let mut z = 0u64;
        let mut n = 0usize;
        for (position, ch) in text.chars().enumerate() {
            let (bx, bz) = letter_bits(ch).ok_or(Error::InvalidPauliChar { ch, position })?;
            if position >= MAX_QUBITS {
                return Err(Error::TooManyQubits(text.chars().count()));
            }
            x |= (bx as u64) << position;
            z |= (bz as u64) << position;
            n = position + 1;
        }
        PauliString::from_masks(n, x, z)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for q in 0..self.n_qubits() {
            write!(f, "{}", self.letter(q))?;
        }
        Ok(())
    }
}

/// Parses a `0/1` occupation string (leftmost = qubit 0) into a bitmask.
pub fn parse_bits(text: &str) -> Result<(usize, u64)> {
    let text = text.trim();
    if text.is_empty() {
        return Err(Error::Invalid("empty bit string".into()));
    }
    if text.len() > MAX_QUBITS {
        return Err(Error::TooManyQubits(text.len()));
    }
    let mut mask = 0u64;
    for (i, ch) in text.chars().enumerate() {
        match ch {
            '0' => {}
            '1' => mask |= 1 << i,
            _ => {
                return Err(Error::Invalid(format!(
                    "invalid character {ch:?} at position {i} in bit string"
                )))
            }
        }
    }
    Ok((text.len(), mask))
}

pub fn format_bits(n_qubits: usize, mask: u64) -> String {
    (0..n_qubits)
        .map(|j| if (mask >> j) & 1 == 1 { '1' } else { '0' })
        .collect()
}
