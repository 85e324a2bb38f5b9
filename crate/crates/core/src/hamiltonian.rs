//! Real Pauli-sum Hamiltonians.
//!
//! File format, one term per line:
//!
//! ```text
//! # comment
//! -0.8105479805373266 IIII
//! 0.17218393261915552 ZIII
//! 1.2e-3 XXYY
//! ```
//!
//! The coefficient is a decimal or scientific-notation float, the string
//! length fixes the qubit count on the first term line. Every string must be
//! even (zero or two or ... `Y` factors) so the matrix is real symmetric.
//! Repeated strings are merged by adding coefficients. Identity terms are
//! kept as a constant offset.

use std::collections::HashMap;
use std::fmt::Write as _;
use std::path::Path;

use nalgebra::{DMatrix, SymmetricEigen};
use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lanczos::{self, LanczosOptions, LanczosResult};
use crate::pauli::PauliString;
use crate::symmetry::ConstraintSet;

/// Qubit cap for [`ground_energy`].
pub const GROUND_ENERGY_MAX_QUBITS: usize = 16;

/// Chunk length for deterministic parallel reductions and scatters.
pub(crate) const CHUNK: usize = 1 << 12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coefficient: f64,
    pub string: PauliString,
}

/// Terms sharing one flip mask, with signs folded into the coefficients.
#[derive(Debug, Clone)]
struct FlipGroup {
    x: u64,
    /// `(z_mask, coefficient * (-1)^{|y|})`
    parts: Vec<(u64, f64)>,
}

impl FlipGroup {
    #[inline]
    fn factor(&self, k: u64) -> f64 {
        self.parts
            .iter()
            .map(|&(z, c)| if (k & z).count_ones().is_multiple_of(2) { c } else { -c })
            .sum()
    }
}

#[derive(Debug, Clone)]
pub struct PauliSumHamiltonian {
    n_qubits: usize,
    terms: Vec<Term>,
    groups: Vec<FlipGroup>,
}

impl PartialEq for PauliSumHamiltonian {
    fn eq(&self, other: &Self) -> bool {
        self.n_qubits == other.n_qubits && self.terms == other.terms
    }
}

impl PauliSumHamiltonian {
    /// Merges repeated strings and validates realness and finiteness.
    pub fn new(n_qubits: usize, terms: impl IntoIterator<Item = (f64, PauliString)>) -> Result<Self> {
        let mut index: HashMap<PauliString, usize> = HashMap::new();
        let mut merged: Vec<Term> = Vec::new();
        for (c, s) in terms {
            if s.n_qubits() != n_qubits {
                return Err(Error::QubitMismatch {
                    left: n_qubits,
                    right: s.n_qubits(),
                });
            }
            if s.is_odd() {
                return Err(Error::NonRealHamiltonian(s.to_string()));
            }
            if !c.is_finite() {
                return Err(Error::Invalid(format!("non-finite coefficient for {s}")));
            }
            match index.get(&s) {
                Some(&i) => merged[i].coefficient += c,
                None => {
                    index.insert(s, merged.len());
                    merged.push(Term {
                        coefficient: c,
                        string: s,
                    });
                }
            }
        }
        Ok(Self::from_merged(n_qubits, merged))
    }

    fn from_merged(n_qubits: usize, terms: Vec<Term>) -> Self {
        let mut by_x: Vec<FlipGroup> = Vec::new();
        let mut slot: HashMap<u64, usize> = HashMap::new();
        for t in &terms {
            let sign = if t.string.y_mask().count_ones() % 2 == 0 { 1.0 } else { -1.0 };
            let part = (t.string.z_mask(), sign * t.coefficient);
            match slot.get(&t.string.x_mask()) {
                Some(&i) => by_x[i].parts.push(part),
                None => {
                    slot.insert(t.string.x_mask(), by_x.len());
                    by_x.push(FlipGroup {
                        x: t.string.x_mask(),
                        parts: vec![part],
                    });
                }
            }
        }
        PauliSumHamiltonian {
            n_qubits,
            terms,
            groups: by_x,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.n_qubits
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Writes `H v` into `out`. Each output entry is accumulated in a fixed
    /// order, so results do not depend on the thread count.
    pub fn apply_into(&self, v: &[f64], out: &mut [f64]) {
        assert_eq!(v.len(), self.dim());
        assert_eq!(out.len(), self.dim());
        let kernel = |offset: usize, chunk: &mut [f64]| {
            for (i, o) in chunk.iter_mut().enumerate() {
                let j = (offset + i) as u64;
                let mut acc = 0.0;
                for g in &self.groups {
                    let k = j ^ g.x;
                    acc += g.factor(k) * v[k as usize];
                }
                *o = acc;
            }
        };
        if out.len() >= 2 * CHUNK {
            out.par_chunks_mut(CHUNK)
                .enumerate()
                .for_each(|(c, chunk)| kernel(c * CHUNK, chunk));
        } else {
            kernel(0, out);
        }
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; v.len()];
        self.apply_into(v, &mut out);
        out
    }

    /// `<v|H|v>` in one pass over the flip groups.
    pub fn expectation(&self, v: &[f64]) -> f64 {
        assert_eq!(v.len(), self.dim());
        let kernel = |range: std::ops::Range<usize>| -> f64 {
            let mut total = 0.0;
            for j in range {
                let mut acc = 0.0;
                for g in &self.groups {
                    let k = j as u64 ^ g.x;
                    acc += g.factor(k) * v[k as usize];
                }
                total += v[j] * acc;
            }
            total
        };
        chunked_sum(v.len(), kernel)
    }

    pub fn dense_matrix(&self) -> DMatrix<f64> {
        let dim = self.dim();
        let mut m = DMatrix::zeros(dim, dim);
        for t in &self.terms {
            for b in 0..dim as u64 {
                let (target, sign) = t.string.basis_action(b).expect("index in range");
                m[(target as usize, b as usize)] += t.coefficient * sign as f64;
            }
        }
        m
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# {} qubits, {} terms", self.n_qubits, self.terms.len());
        for t in &self.terms {
            let _ = writeln!(out, "{:.16e} {}", t.coefficient, t.string);
        }
        out
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_file_string())?;
        Ok(())
    }
}

/// Sum of `kernel` over fixed-size index chunks, combined in chunk order.
pub(crate) fn chunked_sum<F>(len: usize, kernel: F) -> f64
where
    F: Fn(std::ops::Range<usize>) -> f64 + Sync,
{
    if len < 2 * CHUNK {
        return kernel(0..len);
    }
    let n_chunks = len.div_ceil(CHUNK);
    let partial: Vec<f64> = (0..n_chunks)
        .into_par_iter()
        .map(|c| kernel(c * CHUNK..((c + 1) * CHUNK).min(len)))
        .collect();
    partial.iter().sum()
}

pub fn parse_hamiltonian(text: &str) -> Result<PauliSumHamiltonian> {
    let mut n: Option<usize> = None;
    let mut raw = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let mut parts = content.split_whitespace();
        let (Some(c), Some(s), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected `<coefficient> <pauli string>`, got {content:?}"),
            });
        };
        let coefficient: f64 = c.parse().map_err(|_| Error::Parse {
            line: line_no,
            msg: format!("invalid coefficient {c:?}"),
        })?;
        if !coefficient.is_finite() {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("non-finite coefficient {c:?}"),
            });
        }
        let string: PauliString = s.parse().map_err(|e| Error::Parse {
            line: line_no,
            msg: format!("{e}"),
        })?;
        match n {
            None => n = Some(string.n_qubits()),
            Some(n) if n != string.n_qubits() => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("string length {} differs from {n}", string.n_qubits()),
                })
            }
            _ => {}
        }
        if string.is_odd() {
            return Err(Error::NonRealHamiltonian(string.to_string()));
        }
        raw.push((coefficient, string));
    }
    let n = n.ok_or_else(|| Error::Parse {
        line: 0,
        msg: "no terms".into(),
    })?;
    PauliSumHamiltonian::new(n, raw)
}

pub fn read_hamiltonian_file(path: &Path) -> Result<PauliSumHamiltonian> {
    parse_hamiltonian(&std::fs::read_to_string(path)?)
}

/// Options for [`random_real_hamiltonian_with`].
#[derive(Debug, Clone)]
pub struct RandomHamiltonian {
    pub n_qubits: usize,
    pub n_terms: usize,
    pub seed: u64,
    /// Restrict support to strings satisfying these constraints.
    pub constraints: Option<ConstraintSet>,
    /// Restrict support to strings flipping at most this many qubits.
    pub max_flip_weight: Option<u32>,
}

impl RandomHamiltonian {
    pub fn new(n_qubits: usize, n_terms: usize, seed: u64) -> Self {
        RandomHamiltonian {
            n_qubits,
            n_terms,
            seed,
            constraints: None,
            max_flip_weight: None,
        }
    }

    fn admits(&self, p: &PauliString) -> bool {
        !p.is_odd()
            && self.constraints.as_ref().is_none_or(|cs| cs.satisfies(p))
            && self.max_flip_weight.is_none_or(|w| p.flip_weight() <= w)
    }
}

/// Largest qubit count at which the candidate strings are enumerated.
const ENUMERATE_MAX_QUBITS: usize = 11;

/// Random real Hamiltonian: `n_terms` distinct admissible even strings drawn
/// uniformly, coefficients i.i.d. standard normal, all from a ChaCha8
/// stream seeded with `seed`.
pub fn random_real_hamiltonian(
    n_qubits: usize,
    n_terms: usize,
    seed: u64,
    constraints: Option<&ConstraintSet>,
) -> Result<PauliSumHamiltonian> {
    let mut opts = RandomHamiltonian::new(n_qubits, n_terms, seed);
    opts.constraints = constraints.cloned();
    random_real_hamiltonian_with(&opts)
}

pub fn random_real_hamiltonian_with(opts: &RandomHamiltonian) -> Result<PauliSumHamiltonian> {
    let n = opts.n_qubits;
    if n == 0 || n > 32 {
        return Err(Error::TooLarge { n_qubits: n, cap: 32 });
    }
    if opts.n_terms == 0 {
        return Err(Error::Invalid("a Hamiltonian needs at least one term".into()));
    }
    if let Some(cs) = &opts.constraints {
        if cs.n_qubits() != n {
            return Err(Error::QubitMismatch {
                left: n,
                right: cs.n_qubits(),
            });
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mask = crate::pauli::low_mask(n);
    let strings: Vec<PauliString> = if n <= ENUMERATE_MAX_QUBITS {
        let mut candidates = Vec::new();
        for x in 0..=mask {
            for z in 0..=mask {
                let p = PauliString::from_masks(n, x, z)?;
                if opts.admits(&p) {
                    candidates.push(p);
                }
            }
        }
        if candidates.len() < opts.n_terms {
            return Err(Error::InsufficientStrings {
                requested: opts.n_terms as u64,
                available: candidates.len() as u64,
            });
        }
        index::sample(&mut rng, candidates.len(), opts.n_terms)
            .into_iter()
            .map(|i| candidates[i])
            .collect()
    } else {
        let mut chosen = Vec::with_capacity(opts.n_terms);
        let mut seen = std::collections::HashSet::new();
        let budget = 10_000 * opts.n_terms as u64 + 1_000_000;
        let mut draws = 0u64;
        while chosen.len() < opts.n_terms {
            draws += 1;
            if draws > budget {
                return Err(Error::InsufficientStrings {
                    requested: opts.n_terms as u64,
                    available: chosen.len() as u64,
                });
            }
            let p = PauliString::from_masks(n, rng.random::<u64>() & mask, rng.random::<u64>() & mask)?;
            if opts.admits(&p) && seen.insert(p) {
                chosen.push(p);
            }
        }
        chosen
    };
    let terms: Vec<(f64, PauliString)> = strings
        .into_iter()
        .map(|s| (rng.sample::<f64, _>(StandardNormal), s))
        .collect();
    PauliSumHamiltonian::new(n, terms)
}

/// Lowest eigenvalue of `h` by Lanczos from a seeded random start.
pub fn ground_energy(h: &PauliSumHamiltonian) -> Result<f64> {
    Ok(ground_energy_with(h, &LanczosOptions::default(), None)?.eigenvalue)
}

/// Lanczos ground energy; `start` overrides the seeded random start vector.
pub fn ground_energy_with(
    h: &PauliSumHamiltonian,
    opts: &LanczosOptions,
    start: Option<Vec<f64>>,
) -> Result<LanczosResult> {
    if h.n_qubits() > GROUND_ENERGY_MAX_QUBITS {
        return Err(Error::TooLarge {
            n_qubits: h.n_qubits(),
            cap: GROUND_ENERGY_MAX_QUBITS,
        });
    }
    let start = start.unwrap_or_else(|| lanczos::random_start(h.dim(), opts.seed, |_| true));
    lanczos::lowest_eigenvalue(|v, out| h.apply_into(v, out), start, opts)
}

/// Lowest eigenvalue within the symmetry sector of basis state `reference`:
/// the span of basis states with the same constraint parities. Exact for
/// Hamiltonians whose terms all satisfy `cs`.
pub fn sector_ground_energy(h: &PauliSumHamiltonian, cs: &ConstraintSet, reference: u64) -> Result<f64> {
    let opts = LanczosOptions::default();
    let sector = cs.sector_of(reference);
    let start = lanczos::random_start(h.dim(), opts.seed, |i| cs.sector_of(i as u64) == sector);
    Ok(ground_energy_with(h, &opts, Some(start))?.eigenvalue)
}

/// Dense symmetric eigensolve. Intended as a test oracle for small `n`.
pub fn dense_ground_energy(h: &PauliSumHamiltonian) -> f64 {
    SymmetricEigen::new(h.dense_matrix()).eigenvalues.min()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_two_terms() {
        let h = parse_hamiltonian("1.0 ZZ\n0.5 XX\n").unwrap();
        assert_eq!(h.n_qubits(), 2);
        assert_eq!(h.terms().len(), 2);
    }

    #[test]
    fn parse_rejects_odd_terms() {
        assert!(matches!(
            parse_hamiltonian("1.0 ZY"),
            Err(Error::NonRealHamiltonian(_))
        ));
    }

    #[test]
    fn parse_merges_repeats() {
        let h = parse_hamiltonian("0.5 XX\n0.25 XX\n").unwrap();
        assert_eq!(h.terms().len(), 1);
        assert_eq!(h.terms()[0].coefficient, 0.75);
    }

    #[test]
    fn parse_errors() {
        match parse_hamiltonian("# c\n1.0 ZZ\nabc XX\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_hamiltonian("1.0 ZZ\n1.0 ZZZ\n").is_err());
        assert!(parse_hamiltonian("1.0\n").is_err());
        assert!(parse_hamiltonian("1.0 ZZ extra\n").is_err());
        assert!(parse_hamiltonian("# only comments\n").is_err());
        assert!(parse_hamiltonian("inf ZZ\n").is_err());
    }

    #[test]
    fn scientific_notation_and_identity_offset() {
        let h = parse_hamiltonian("-1.5e0 II\n2E-1 ZI\n").unwrap();
        let v = [1.0, 0.0, 0.0, 0.0];
        assert!((h.expectation(&v) - (-1.3)).abs() < 1e-15);
    }

    #[test]
    fn single_z_ground_energy() {
        let h = parse_hamiltonian("1.0 Z").unwrap();
        assert!((ground_energy(&h).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn exhaustive_random_hamiltonian() {
        // 10 even strings at n = 2
        let h = random_real_hamiltonian(2, 10, 4, None).unwrap();
        assert_eq!(h.terms().len(), 10);
        let m = h.dense_matrix();
        assert_eq!(m.clone(), m.transpose());
        assert!(random_real_hamiltonian(2, 11, 4, None).is_err());
    }

    #[test]
    fn ground_energy_cap() {
        let s: PauliString = "Z".repeat(17).parse().unwrap();
        let h = PauliSumHamiltonian::new(17, [(1.0, s)]).unwrap();
        assert!(matches!(ground_energy(&h), Err(Error::TooLarge { .. })));
    }
}
