//! Minimal complete Pauli operator pools and qubit-ADAPT-VQE.
//!
//! The crate covers the whole pipeline at desk scale (up to ~14 qubits):
//!
//! - [`pauli`]: Pauli strings modulo phase in the symplectic encoding.
//! - [`group`]: product groups, flip coverage, inseparability, Lie closure
//!   and the combined completeness check.
//! - [`symmetry`]: spin and binary point-group constraints, starters and
//!   symmetry-adapted pool sizes.
//! - [`pool_search`]: seeded random search for minimal complete pools,
//!   unrestricted or symmetry-adapted.
//! - [`hamiltonian`]: real Pauli-sum Hamiltonians, file I/O, random
//!   generation and Lanczos ground energies.
//! - [`simulator`]: exact real statevector kernels and adjoint gradients.
//! - [`adapt`]: the ADAPT-VQE loop and its L-BFGS inner optimizer.
//! - [`cli`]: the `minpool` command-line front end.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod adapt;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod gf2;
pub mod group;
pub mod hamiltonian;
pub mod lanczos;
pub mod optimize;
pub mod pauli;
pub mod plot;
pub mod pool;
pub mod pool_search;
pub mod simulator;
pub mod symmetry;
pub mod trace;

pub use error::{Error, Result};
pub use group::{check_pool, CheckLevel, CompletenessReport};
pub use hamiltonian::PauliSumHamiltonian;
pub use pauli::{parse_pauli, Parity, PauliString};
pub use pool::Pool;
pub use symmetry::{ConstraintSet, SymmetrySpec};
