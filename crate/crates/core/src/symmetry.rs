//! Spin-sector and binary point-group constraints on pool operators.
//!
//! Every constraint here is a GF(2)-linear functional on a string's flip
//! mask: a string satisfies functional `m` iff `popcount(x & m)` is even.
//! The α and β spin masks give the spin-sector conditions and each
//! character column (bit set where the orbital's character is `-1`) gives
//! one spatial-symmetry condition. Because the functionals are linear the
//! compatible strings form a subgroup, and each independent functional
//! halves it.
//!
//! # Spec file format
//!
//! ```text
//! # H4, alternating spin, spatial parity + - + -
//! name: H4
//! qubits: 8
//! alpha: 10101010
//! hf: 11110000
//! character parity: 1 -1 1 -1
//! ```
//!
//! `alpha` and `hf` are 0/1 strings with qubit 0 on the left. Each
//! `character` line (optionally followed by a label before the colon) lists
//! `+1`/`-1` characters either per qubit (`n` entries) or per spatial
//! orbital (`n/2` entries, expanded onto qubits `2k` and `2k+1`). Any other
//! character value is rejected: only one-dimensional irreps are supported.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf2;
use crate::pauli::{format_bits, low_mask, parse_bits, PauliString};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterColumn {
    pub label: Option<String>,
    /// Bit `j` set iff orbital `j` has character `-1`.
    pub mask: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymmetrySpec {
    pub name: Option<String>,
    n_qubits: usize,
    alpha_mask: u64,
    hf_occupation: u64,
    character_columns: Vec<CharacterColumn>,
}

impl SymmetrySpec {
    pub fn new(
        n_qubits: usize,
        alpha_mask: u64,
        hf_occupation: u64,
        character_columns: Vec<CharacterColumn>,
    ) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 64 {
            return Err(Error::Symmetry(format!("invalid qubit count {n_qubits}")));
        }
        let m = low_mask(n_qubits);
        if alpha_mask & !m != 0 || hf_occupation & !m != 0 {
            return Err(Error::Symmetry(
                "alpha/hf masks use bits beyond the qubit count".into(),
            ));
        }
        if let Some(c) = character_columns.iter().find(|c| c.mask & !m != 0) {
            return Err(Error::Symmetry(format!(
                "character column {:?} uses bits beyond the qubit count",
                c.label
            )));
        }
        Ok(SymmetrySpec {
            name: None,
            n_qubits,
            alpha_mask,
            hf_occupation,
            character_columns,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn alpha_mask(&self) -> u64 {
        self.alpha_mask
    }

    pub fn beta_mask(&self) -> u64 {
        !self.alpha_mask & low_mask(self.n_qubits)
    }

    pub fn hf_occupation(&self) -> u64 {
        self.hf_occupation
    }

    pub fn electron_count(&self) -> u32 {
        self.hf_occupation.count_ones()
    }

    pub fn character_columns(&self) -> &[CharacterColumn] {
        &self.character_columns
    }

    /// Linear H4 chain in a minimal basis: αβ pairs with spatial parities
    /// `+ - + -` and the four lowest spin orbitals occupied.
    pub fn h4() -> Self {
        BUILTIN_H4.parse().expect("builtin H4 spec")
    }

    /// LiH with frozen Li 1s: orbitals `A1 A1 C B A1` (αβ each), reduced
    /// group {σxy, σxz, Rx(180)}.
    pub fn lih() -> Self {
        BUILTIN_LIH.parse().expect("builtin LiH spec")
    }

    /// BeH2 with frozen Be 1s: orbitals `A1 B C D A1 B` (αβ each).
    pub fn beh2() -> Self {
        BUILTIN_BEH2.parse().expect("builtin BeH2 spec")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.name {
            out.push_str(&format!("name: {name}\n"));
        }
        out.push_str(&format!("qubits: {}\n", self.n_qubits));
        out.push_str(&format!("alpha: {}\n", format_bits(self.n_qubits, self.alpha_mask)));
        out.push_str(&format!("hf: {}\n", format_bits(self.n_qubits, self.hf_occupation)));
        for col in &self.character_columns {
            let values: Vec<&str> = (0..self.n_qubits)
                .map(|j| if (col.mask >> j) & 1 == 1 { "-1" } else { "1" })
                .collect();
            match &col.label {
                Some(l) => out.push_str(&format!("character {l}: {}\n", values.join(" "))),
                None => out.push_str(&format!("character: {}\n", values.join(" "))),
            }
        }
        out
    }
}

pub const BUILTIN_H4: &str = include_str!("../data/h4.sym");
pub const BUILTIN_LIH: &str = include_str!("../data/lih.sym");
pub const BUILTIN_BEH2: &str = include_str!("../data/beh2.sym");

fn parse_character(values: &str, n_qubits: usize, line: usize) -> Result<u64> {
    let mut chars = Vec::new();
    for tok in values.split_whitespace() {
        let v: f64 = tok.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("invalid character value {tok:?}"),
        })?;
        if v == 1.0 {
            chars.push(false);
        } else if v == -1.0 {
            chars.push(true);
        } else {
            return Err(Error::Parse {
                line,
                msg: format!(
                    "character {tok} is not +1/-1; multi-dimensional irreps are not supported"
                ),
            });
        }
    }
    let mut mask = 0u64;
    if chars.len() == n_qubits {
        for (j, &neg) in chars.iter().enumerate() {
            if neg {
                mask |= 1 << j;
            }
        }
    } else if n_qubits.is_multiple_of(2) && chars.len() == n_qubits / 2 {
        for (k, &neg) in chars.iter().enumerate() {
            if neg {
                mask |= 0b11 << (2 * k);
            }
        }
    } else {
        return Err(Error::Parse {
            line,
            msg: format!(
                "character row has {} entries, expected {} (per qubit) or {} (per spatial orbital)",
                chars.len(),
                n_qubits,
                n_qubits / 2
            ),
        });
    }
    Ok(mask)
}

impl FromStr for SymmetrySpec {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut name = None;
        let mut qubits: Option<usize> = None;
        let mut alpha: Option<(usize, u64)> = None;
        let mut hf: Option<(usize, u64)> = None;
        let mut raw_columns: Vec<(usize, Option<String>, String)> = Vec::new();

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once(':').ok_or_else(|| Error::Parse {
                line,
                msg: format!("expected `key: value`, got {content:?}"),
            })?;
            let key = key.trim();
            let value = value.trim();
            let mut key_parts = key.split_whitespace();
            match key_parts.next() {
                Some("name") => name = Some(value.to_string()),
                Some("qubits") => {
                    qubits = Some(value.parse().map_err(|_| Error::Parse {
                        line,
                        msg: format!("invalid qubit count {value:?}"),
                    })?)
                }
                Some("alpha") => {
                    alpha = Some(parse_bits(value).map_err(|e| Error::Parse {
                        line,
                        msg: e.to_string(),
                    })?)
                }
                Some("hf") => {
                    hf = Some(parse_bits(value).map_err(|e| Error::Parse {
                        line,
                        msg: e.to_string(),
                    })?)
                }
                Some("character") => {
                    let label: Vec<&str> = key_parts.collect();
                    let label = (!label.is_empty()).then(|| label.join(" "));
                    raw_columns.push((line, label, value.to_string()));
                }
                _ => {
                    return Err(Error::Parse {
                        line,
                        msg: format!("unknown key {key:?}"),
                    })
                }
            }
        }

        let n = qubits.ok_or_else(|| Error::Symmetry("missing `qubits:`".into()))?;
        let (na, alpha_mask) = alpha.ok_or_else(|| Error::Symmetry("missing `alpha:`".into()))?;
        let (nh, hf_mask) = hf.ok_or_else(|| Error::Symmetry("missing `hf:`".into()))?;
        if na != n || nh != n {
            return Err(Error::Symmetry(format!(
                "alpha/hf strings have lengths {na}/{nh}, expected {n}"
            )));
        }
        let mut columns = Vec::new();
        for (line, label, values) in raw_columns {
            columns.push(CharacterColumn {
                label,
                mask: parse_character(&values, n, line)?,
            });
        }
        let mut spec = SymmetrySpec::new(n, alpha_mask, hf_mask, columns)?;
        spec.name = name;
        Ok(spec)
    }
}

impl fmt::Display for SymmetrySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

/// Parity functionals on flip masks derived from a [`SymmetrySpec`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintSet {
    n_qubits: usize,
    functionals: Vec<u64>,
    basis: Vec<u64>,
}

impl ConstraintSet {
    /// Constraint set from explicit functional masks.
    pub fn from_functionals(n_qubits: usize, functionals: Vec<u64>) -> Self {
        let basis = gf2::XorBasis::from_vectors(functionals.iter().map(|&m| m as u128));
        ConstraintSet {
            n_qubits,
            basis: basis.vectors().iter().map(|&v| v as u64).collect(),
            functionals,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn functionals(&self) -> &[u64] {
        &self.functionals
    }

    /// Independent functionals (row-reduced).
    pub fn basis(&self) -> &[u64] {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    /// Whether flipping exactly the qubits in `mask` keeps every parity.
    #[inline]
    pub fn allows_flip(&self, mask: u64) -> bool {
        self.basis.iter().all(|&m| (mask & m).count_ones().is_multiple_of(2))
    }

    pub fn satisfies(&self, p: &PauliString) -> bool {
        debug_assert_eq!(p.n_qubits(), self.n_qubits);
        self.allows_flip(p.x_mask())
    }

    /// Dimension of the allowed flip subspace, `n - rank`.
    pub fn flip_dimension(&self) -> usize {
        self.n_qubits - self.rank()
    }

    /// Parities of a basis index under each basis functional, packed into
    /// bits. Constraint-satisfying strings never change this signature.
    pub fn sector_of(&self, basis_index: u64) -> u64 {
        self.basis
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &m)| {
                acc | ((((basis_index & m).count_ones() & 1) as u64) << i)
            })
    }
}

pub fn build_constraints(spec: &SymmetrySpec) -> ConstraintSet {
    let mut functionals = vec![spec.alpha_mask(), spec.beta_mask()];
    functionals.extend(spec.character_columns.iter().map(|c| c.mask));
    ConstraintSet::from_functionals(spec.n_qubits, functionals)
}

pub fn satisfies_constraints(p: &PauliString, cs: &ConstraintSet) -> bool {
    cs.satisfies(p)
}

/// A starter flips exactly four qubits, keeps particle number and S_z of the
/// reference determinant (holes and particles balance in each spin sector)
/// and keeps its spatial symmetry.
pub fn is_starter(p: &PauliString, spec: &SymmetrySpec) -> bool {
    let x = p.x_mask();
    if x.count_ones() != 4 {
        return false;
    }
    let occ = spec.hf_occupation();
    let full = low_mask(spec.n_qubits());
    for sector in [spec.alpha_mask(), spec.beta_mask()] {
        let holes = (x & occ & sector).count_ones();
        let particles = (x & !occ & full & sector).count_ones();
        if holes != particles {
            return false;
        }
    }
    spec.character_columns()
        .iter()
        .all(|c| (x & c.mask).count_ones().is_multiple_of(2))
}

/// Size of a symmetry-adapted minimal complete pool: `2n - 2 - rank`.
pub fn expected_pool_size(spec: &SymmetrySpec) -> usize {
    (2 * spec.n_qubits()).saturating_sub(2 + build_constraints(spec).rank())
}

/// Default minimum number of starters for a pool of `pool_size` operators.
pub fn default_starter_count(pool_size: usize) -> usize {
    pool_size.div_ceil(2)
}
