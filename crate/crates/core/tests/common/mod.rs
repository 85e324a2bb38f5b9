//! Shared oracles and fixtures for the integration tests.
#![allow(dead_code)]

use minpool::hamiltonian::{random_real_hamiltonian_with, PauliSumHamiltonian, RandomHamiltonian};
use minpool::symmetry::build_constraints;
use minpool::{PauliString, SymmetrySpec};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn ps(s: &str) -> PauliString {
    s.parse().unwrap()
}

/// 2x2 real matrix of one letter, `Y` standing for `iY`.
fn letter_matrix(c: char) -> DMatrix<f64> {
    match c {
        'I' => DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, 1.0]),
        'X' => DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
        'Z' => DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]),
        'Y' => DMatrix::from_row_slice(2, 2, &[0.0, 1.0, -1.0, 0.0]),
        _ => unreachable!(),
    }
}

/// Kronecker-product matrix with qubit 0 as the least significant index bit.
pub fn kron_matrix(p: &PauliString) -> DMatrix<f64> {
    let letters: Vec<char> = p.to_string().chars().collect();
    let mut m = DMatrix::from_element(1, 1, 1.0);
    for &c in letters.iter().rev() {
        m = m.kronecker(&letter_matrix(c));
    }
    m
}

pub fn dense_hamiltonian(h: &PauliSumHamiltonian) -> DMatrix<f64> {
    let dim = 1 << h.n_qubits();
    let mut m = DMatrix::zeros(dim, dim);
    for t in h.terms() {
        m += kron_matrix(&t.string) * t.coefficient;
    }
    m
}

pub fn random_string(rng: &mut ChaCha8Rng, n: usize) -> PauliString {
    let mask = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    PauliString::from_masks(n, rng.random::<u64>() & mask, rng.random::<u64>() & mask).unwrap()
}

pub fn random_odd(rng: &mut ChaCha8Rng, n: usize) -> PauliString {
    loop {
        let p = random_string(rng, n);
        if p.is_odd() {
            return p;
        }
    }
}

pub fn random_unit_vector(rng: &mut ChaCha8Rng, dim: usize) -> Vec<f64> {
    let v: Vec<f64> = (0..dim).map(|_| rng.random::<f64>() - 0.5).collect();
    let norm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}

/// Constrained random Hamiltonian with at most `max_flip` flipped qubits per
/// term.
pub fn constrained_hamiltonian(spec: &SymmetrySpec, terms: usize, seed: u64, max_flip: u32) -> PauliSumHamiltonian {
    let mut opts = RandomHamiltonian::new(spec.n_qubits(), terms, seed);
    opts.constraints = Some(build_constraints(spec));
    opts.max_flip_weight = Some(max_flip);
    random_real_hamiltonian_with(&opts).unwrap()
}

/// Flip masks taking the reference to a determinant with the same number
/// of electrons in each spin sector.
pub fn conserves_particles(spec: &SymmetrySpec, x: u64) -> bool {
    let occ = spec.hf_occupation();
    [spec.alpha_mask(), spec.beta_mask()]
        .iter()
        .all(|&s| (x & occ & s).count_ones() == (x & !occ & s).count_ones())
}

/// Single-excitation flip masks: one hole and one particle of equal spin.
pub fn is_single_excitation(spec: &SymmetrySpec, x: u64) -> bool {
    x.count_ones() == 2 && conserves_particles(spec, x)
}

/// Adds real terms cancelling every coupling `<HF ^ x|H|HF>` for
/// single-excitation masks `x`, so that the reference satisfies the
/// Brillouin condition.
pub fn brillouin_corrected(h: &PauliSumHamiltonian, spec: &SymmetrySpec) -> PauliSumHamiltonian {
    let n = h.n_qubits();
    let hf = spec.hf_occupation();
    let mut v = vec![0.0; 1 << n];
    v[hf as usize] = 1.0;
    let hv = h.apply(&v);
    let mut terms: Vec<(f64, PauliString)> = h.terms().iter().map(|t| (t.coefficient, t.string)).collect();
    for a in 0..n {
        for b in a + 1..n {
            let x = (1u64 << a) | (1 << b);
            if is_single_excitation(spec, x) {
                let coupling = hv[(hf ^ x) as usize];
                // the all-X string maps |hf> to |hf ^ x> with sign +1
                terms.push((-coupling, PauliString::from_masks(n, x, 0).unwrap()));
            }
        }
    }
    PauliSumHamiltonian::new(n, terms).unwrap()
}

/// Constrained Hamiltonian whose terms flip at most four qubits and, applied
/// to the reference, conserve particle number in each spin sector; with the
/// Brillouin correction applied.
pub fn molecular_like_hamiltonian(spec: &SymmetrySpec, terms: usize, seed: u64) -> PauliSumHamiltonian {
    let n = spec.n_qubits();
    let cs = build_constraints(spec);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut chosen: Vec<(f64, PauliString)> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    while chosen.len() < terms {
        let p = random_string(&mut rng, n);
        if p.is_odd() || p.flip_weight() > 4 || !cs.satisfies(&p) || !conserves_particles(spec, p.x_mask()) {
            continue;
        }
        if seen.insert(p) {
            chosen.push((rng.random::<f64>() - 0.5, p));
        }
    }
    brillouin_corrected(&PauliSumHamiltonian::new(n, chosen).unwrap(), spec)
}

/// Central finite difference of `f` at `x` along coordinate `k`.
pub fn central_difference(f: impl Fn(&[f64]) -> f64, x: &[f64], k: usize, step: f64) -> f64 {
    let mut plus = x.to_vec();
    let mut minus = x.to_vec();
    plus[k] += step;
    minus[k] -= step;
    (f(&plus) - f(&minus)) / (2.0 * step)
}
