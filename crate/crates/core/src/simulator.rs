//! Exact real statevector kernels.
//!
//! Amplitudes are indexed by computational basis index, qubit `j` being bit
//! `j`. Odd Pauli strings act as real antisymmetric matrices with `A^2 = -I`,
//! so `exp(θA) = cos θ I + sin θ A` and rotations stay real and orthogonal.
//!
//! Reductions run over fixed chunks combined in a fixed order. Results are
//! reproducible for a given thread count and in practice agree to within
//! about 1e-13 across thread counts.

use std::io::{Read, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hamiltonian::{chunked_sum, PauliSumHamiltonian};
use crate::pauli::{low_mask, PauliString};

/// Default memory budget for storing per-layer states in the adjoint sweep.
pub const DEFAULT_STATE_BUDGET_BYTES: usize = 2 << 30;

#[derive(Debug, Clone, PartialEq)]
pub struct RealState {
    n_qubits: usize,
    amplitudes: Vec<f64>,
}

impl RealState {
    pub fn basis_state(n_qubits: usize, occupation: u64) -> Result<Self> {
        if n_qubits > 30 {
            return Err(Error::TooLarge { n_qubits, cap: 30 });
        }
        if occupation & !low_mask(n_qubits) != 0 {
            return Err(Error::IndexOutOfRange {
                index: occupation,
                n_qubits,
            });
        }
        let mut amplitudes = vec![0.0; 1 << n_qubits];
        amplitudes[occupation as usize] = 1.0;
        Ok(RealState {
            n_qubits,
            amplitudes,
        })
    }

    /// Wraps raw amplitudes; the length must be a power of two. No
    /// normalization is applied.
    pub fn from_amplitudes(amplitudes: Vec<f64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::Invalid(format!("state length {len} is not a power of two")));
        }
        Ok(RealState {
            n_qubits: len.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[f64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<f64> {
        self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        dot(&self.amplitudes, &self.amplitudes).sqrt()
    }

    pub fn dot(&self, other: &RealState) -> f64 {
        dot(&self.amplitudes, &other.amplitudes)
    }

    fn check(&self, p: &PauliString) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::QubitMismatch {
                left: self.n_qubits,
                right: p.n_qubits(),
            });
        }
        Ok(())
    }

    /// Flat binary dump: `n` as a little-endian u32, then `2^n`
    /// little-endian f64 amplitudes.
    pub fn write_dump(&self, path: &Path) -> Result<()> {
        let mut f = std::io::BufWriter::new(std::fs::File::create(path)?);
        f.write_all(&(self.n_qubits as u32).to_le_bytes())?;
        for a in &self.amplitudes {
            f.write_all(&a.to_le_bytes())?;
        }
        f.flush()?;
        Ok(())
    }

    pub fn read_dump(path: &Path) -> Result<Self> {
        let mut bytes = Vec::new();
        std::fs::File::open(path)?.read_to_end(&mut bytes)?;
        if bytes.len() < 4 {
            return Err(Error::Invalid("state dump too short".into()));
        }
        let n = u32::from_le_bytes(bytes[..4].try_into().expect("4 bytes")) as usize;
        if n > 30 || bytes.len() != 4 + 8 * (1usize << n) {
            return Err(Error::Invalid("state dump length does not match header".into()));
        }
        let amplitudes = bytes[4..]
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().expect("8 bytes")))
            .collect();
        Ok(RealState {
            n_qubits: n,
            amplitudes,
        })
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    chunked_sum(a.len(), |r| a[r.clone()].iter().zip(&b[r]).map(|(x, y)| x * y).sum())
}

/// `out = M v` for the real matrix `M` of `p`.
fn pauli_into(p: &PauliString, v: &[f64], out: &mut [f64]) {
    let x = p.x_mask();
    for (k, o) in out.iter_mut().enumerate() {
        let b = k as u64 ^ x;
        *o = p.sign_at(b) as f64 * v[b as usize];
    }
}

pub fn apply_pauli(p: &PauliString, s: &RealState) -> Result<RealState> {
    s.check(p)?;
    let mut out = vec![0.0; s.amplitudes.len()];
    pauli_into(p, &s.amplitudes, &mut out);
    Ok(RealState {
        n_qubits: s.n_qubits,
        amplitudes: out,
    })
}

/// In-place `v <- (cos θ I + sin θ A) v` for odd `p`.
pub(crate) fn rotate_in_place(p: &PauliString, theta: f64, v: &mut [f64]) {
    let (s, c) = theta.sin_cos();
    let x = p.x_mask();
    debug_assert!(x != 0, "odd strings always flip");
    let top = 1u64 << (63 - x.leading_zeros());
    for b in 0..v.len() as u64 {
        if b & top != 0 {
            continue;
        }
        let partner = b ^ x;
        let (v0, v1) = (v[b as usize], v[partner as usize]);
        v[partner as usize] = c * v1 + s * p.sign_at(b) as f64 * v0;
        v[b as usize] = c * v0 + s * p.sign_at(partner) as f64 * v1;
    }
}

pub fn apply_rotation(p: &PauliString, theta: f64, s: &RealState) -> Result<RealState> {
    s.check(p)?;
    if !p.is_odd() {
        return Err(Error::EvenGenerator(p.to_string()));
    }
    let mut out = s.clone();
    rotate_in_place(p, theta, &mut out.amplitudes);
    debug_assert!((out.norm() - s.norm()).abs() < 1e-10);
    Ok(out)
}

pub fn expectation(h: &PauliSumHamiltonian, s: &RealState) -> Result<f64> {
    if h.n_qubits() != s.n_qubits {
        return Err(Error::QubitMismatch {
            left: h.n_qubits(),
            right: s.n_qubits,
        });
    }
    Ok(h.expectation(&s.amplitudes))
}

pub fn apply_h(h: &PauliSumHamiltonian, s: &RealState) -> Result<RealState> {
    if h.n_qubits() != s.n_qubits {
        return Err(Error::QubitMismatch {
            left: h.n_qubits(),
            right: s.n_qubits,
        });
    }
    Ok(RealState {
        n_qubits: s.n_qubits,
        amplitudes: h.apply(&s.amplitudes),
    })
}

/// `2 <Hψ, A ψ>` given `hpsi = Hψ`.
fn gradient_with(p: &PauliString, psi: &[f64], hpsi: &[f64]) -> f64 {
    let x = p.x_mask();
    let sum: f64 = (0..psi.len() as u64)
        .map(|b| hpsi[(b ^ x) as usize] * p.sign_at(b) as f64 * psi[b as usize])
        .sum();
    2.0 * sum
}

/// Energy gradients `d/dθ <ψ| e^{-θA} H e^{θA} |ψ>` at `θ = 0` for every
/// pool member, equal to `<ψ|[H, A]|ψ>`. `Hψ` is formed once.
pub fn pool_gradients(h: &PauliSumHamiltonian, s: &RealState, pool: &[PauliString]) -> Result<Vec<f64>> {
    for p in pool {
        s.check(p)?;
        if !p.is_odd() {
            return Err(Error::EvenGenerator(p.to_string()));
        }
    }
    let hpsi = apply_h(h, s)?;
    Ok(pool
        .par_iter()
        .map(|p| gradient_with(p, &s.amplitudes, &hpsi.amplitudes))
        .collect())
}

/// `exp(θ_L A_L) ... exp(θ_1 A_1) |reference>`, operators in application
/// order.
#[derive(Debug, Clone, PartialEq)]
pub struct Ansatz {
    n_qubits: usize,
    pub operators: Vec<PauliString>,
    pub params: Vec<f64>,
    pub reference: u64,
}

impl Ansatz {
    pub fn new(n_qubits: usize, reference: u64) -> Self {
        Ansatz {
            n_qubits,
            operators: Vec::new(),
            params: Vec::new(),
            reference,
        }
    }

    pub fn with_layers(n_qubits: usize, reference: u64, operators: Vec<PauliString>, params: Vec<f64>) -> Result<Self> {
        if operators.len() != params.len() {
            return Err(Error::Invalid(format!(
                "{} operators but {} parameters",
                operators.len(),
                params.len()
            )));
        }
        let mut a = Ansatz::new(n_qubits, reference);
        for (p, t) in operators.into_iter().zip(params) {
            a.push(p, t)?;
        }
        Ok(a)
    }

    pub fn push(&mut self, p: PauliString, theta: f64) -> Result<()> {
        if p.n_qubits() != self.n_qubits {
            return Err(Error::QubitMismatch {
                left: self.n_qubits,
                right: p.n_qubits(),
            });
        }
        if !p.is_odd() {
            return Err(Error::EvenGenerator(p.to_string()));
        }
        self.operators.push(p);
        self.params.push(theta);
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn state(&self) -> Result<RealState> {
        self.state_at(&self.params)
    }

    pub fn state_at(&self, params: &[f64]) -> Result<RealState> {
        let mut s = RealState::basis_state(self.n_qubits, self.reference)?;
        for (p, &t) in self.operators.iter().zip(params) {
            rotate_in_place(p, t, &mut s.amplitudes);
        }
        Ok(s)
    }
}

/// How the adjoint sweep recovers intermediate states.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AdjointMode {
    /// Store every layer state when they fit in the byte budget, else
    /// fall back to inverse rotations.
    Auto { budget_bytes: usize },
    Stored,
    /// Undo each rotation on the fly, keeping two states.
    Inverse,
}

impl Default for AdjointMode {
    fn default() -> Self {
        AdjointMode::Auto {
            budget_bytes: DEFAULT_STATE_BUDGET_BYTES,
        }
    }
}

/// Energy and its gradient with respect to every parameter, by one forward
/// and one backward pass.
pub fn ansatz_energy_gradient(ansatz: &Ansatz, params: &[f64], h: &PauliSumHamiltonian) -> Result<(f64, Vec<f64>)> {
    ansatz_energy_gradient_with(ansatz, params, h, AdjointMode::default())
}

pub fn ansatz_energy_gradient_with(
    ansatz: &Ansatz,
    params: &[f64],
    h: &PauliSumHamiltonian,
    mode: AdjointMode,
) -> Result<(f64, Vec<f64>)> {
    if params.len() != ansatz.len() {
        return Err(Error::Invalid(format!(
            "{} parameters for {} layers",
            params.len(),
            ansatz.len()
        )));
    }
    if h.n_qubits() != ansatz.n_qubits {
        return Err(Error::QubitMismatch {
            left: h.n_qubits(),
            right: ansatz.n_qubits,
        });
    }
    let layers = ansatz.len();
    let dim = 1usize << ansatz.n_qubits;
    let store = match mode {
        AdjointMode::Stored => true,
        AdjointMode::Inverse => false,
        AdjointMode::Auto { budget_bytes } => {
            (layers + 1).saturating_mul(dim).saturating_mul(8) <= budget_bytes
        }
    };

    let mut phi = RealState::basis_state(ansatz.n_qubits, ansatz.reference)?.amplitudes;
    let mut stored: Vec<Vec<f64>> = Vec::new();
    for (p, &t) in ansatz.operators.iter().zip(params) {
        if store {
            stored.push(phi.clone());
        }
        rotate_in_place(p, t, &mut phi);
    }
    let mut lambda = h.apply(&phi);
    let energy = dot(&phi, &lambda);
    let mut grad = vec![0.0; layers];
    for k in (0..layers).rev() {
        let p = &ansatz.operators[k];
        grad[k] = gradient_with(p, &phi, &lambda);
        rotate_in_place(p, -params[k], &mut lambda);
        match stored.pop() {
            Some(prev) => phi = prev,
            None => rotate_in_place(p, -params[k], &mut phi),
        }
    }
    Ok((energy, grad))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn basis_states() {
        let s = RealState::basis_state(8, 0b1111).unwrap();
        assert_eq!(s.amplitudes()[15], 1.0);
        assert_eq!(s.norm(), 1.0);
        assert!(RealState::basis_state(2, 4).is_err());
    }

    #[test]
    fn iy_on_zero() {
        let s = RealState::basis_state(1, 0).unwrap();
        let out = apply_pauli(&ps("Y"), &s).unwrap();
        assert_eq!(out.amplitudes(), &[0.0, -1.0]);
        let z = apply_pauli(&ps("Z"), &RealState::basis_state(1, 1).unwrap()).unwrap();
        assert_eq!(z.amplitudes(), &[0.0, -1.0]);
    }

    #[test]
    fn quarter_turn() {
        let s = RealState::basis_state(1, 0).unwrap();
        let out = apply_rotation(&ps("Y"), std::f64::consts::FRAC_PI_2, &s).unwrap();
        assert!(out.amplitudes()[0].abs() < 1e-15);
        assert!((out.amplitudes()[1] + 1.0).abs() < 1e-15);
        assert!(apply_rotation(&ps("Z"), 0.1, &s).is_err());
    }

    #[test]
    fn expectation_basics() {
        let h = PauliSumHamiltonian::new(1, [(1.0, ps("Z"))]).unwrap();
        let s = RealState::basis_state(1, 0).unwrap();
        assert_eq!(expectation(&h, &s).unwrap(), 1.0);
        let h = PauliSumHamiltonian::new(1, [(1.0, ps("X"))]).unwrap();
        assert_eq!(expectation(&h, &s).unwrap(), 0.0);
    }

    #[test]
    fn empty_ansatz_energy() {
        let h = PauliSumHamiltonian::new(2, [(0.5, ps("ZI")), (0.25, ps("XX"))]).unwrap();
        let a = Ansatz::new(2, 0b01);
        let (e, g) = ansatz_energy_gradient(&a, &[], &h).unwrap();
        assert_eq!(e, -0.5);
        assert!(g.is_empty());
    }

    #[test]
    fn modes_agree() {
        let h = crate::hamiltonian::random_real_hamiltonian(4, 30, 2, None).unwrap();
        let ops = vec![ps("YIII"), ps("ZYII"), ps("IXYI"), ps("YZZX")];
        let params = vec![0.3, -0.7, 1.1, 0.05];
        let a = Ansatz::with_layers(4, 0, ops, params.clone()).unwrap();
        let (e1, g1) = ansatz_energy_gradient_with(&a, &params, &h, AdjointMode::Stored).unwrap();
        let (e2, g2) = ansatz_energy_gradient_with(&a, &params, &h, AdjointMode::Inverse).unwrap();
        assert!((e1 - e2).abs() < 1e-14);
        for (a, b) in g1.iter().zip(&g2) {
            assert!((a - b).abs() < 1e-13);
        }
    }

    #[test]
    fn dump_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("s.bin");
        let s = apply_rotation(&ps("YX"), 0.4, &RealState::basis_state(2, 1).unwrap()).unwrap();
        s.write_dump(&path).unwrap();
        assert_eq!(RealState::read_dump(&path).unwrap(), s);
    }
}
