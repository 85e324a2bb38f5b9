//! The ADAPT-VQE loop.
//!
//! Starting from a reference basis state, every iteration screens the pool
//! gradients, appends the operator with the largest `|g|` (parameter
//! initialized to [`AdaptConfig::new_parameter_init`]) and re-optimizes all
//! parameters with L-BFGS, warm-started from the previous optimum.
//!
//! The trace has one row per ansatz length. Row `k` describes the state
//! after `k` operators: the operator added last, the largest pool gradient
//! at that state, the optimized energy, the error against the reference
//! energy if one was given, the parameter count `k` and the number of
//! optimizer evaluations spent reaching it.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::hamiltonian::PauliSumHamiltonian;
use crate::optimize::{self, LbfgsOptions, LbfgsStatus};
use crate::pauli::{low_mask, PauliString};
use crate::simulator::{ansatz_energy_gradient_with, expectation, pool_gradients, AdjointMode, Ansatz, RealState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdaptConfig {
    /// Stop with [`AdaptStatus::GradientStall`] once every pool gradient is
    /// below this in magnitude.
    pub eps_grad: f64,
    /// Stop with [`AdaptStatus::Converged`] once `|E - E_ref|` is below this.
    pub eps_energy: f64,
    /// Maximum ansatz length; `None` means `4 * 2^n`.
    pub max_iters: Option<usize>,
    pub optimizer: LbfgsOptions,
    pub new_parameter_init: f64,
    pub adjoint: AdjointMode,
}

impl Default for AdaptConfig {
    fn default() -> Self {
        AdaptConfig {
            eps_grad: 1e-8,
            eps_energy: 1e-8,
            max_iters: None,
            optimizer: LbfgsOptions::default(),
            new_parameter_init: 0.0,
            adjoint: AdjointMode::default(),
        }
    }
}

impl AdaptConfig {
    pub fn max_iters_for(&self, n_qubits: usize) -> usize {
        self.max_iters
            .unwrap_or_else(|| 4usize.saturating_mul(1usize.checked_shl(n_qubits as u32).unwrap_or(usize::MAX)))
    }

    fn validate(&self) -> Result<()> {
        if !(self.eps_grad > 0.0 && self.eps_energy > 0.0) {
            return Err(Error::Invalid("thresholds must be positive".into()));
        }
        if self.max_iters == Some(0) {
            return Err(Error::Invalid("max_iters must be at least 1".into()));
        }
        if !self.new_parameter_init.is_finite() {
            return Err(Error::NonFinite);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AdaptStatus {
    Converged,
    GradientStall,
    IterationCap,
}

impl AdaptStatus {
    pub fn as_str(&self) -> &'static str {
        match self {
            AdaptStatus::Converged => "converged",
            AdaptStatus::GradientStall => "gradient_stall",
            AdaptStatus::IterationCap => "iteration_cap",
        }
    }
}

impl fmt::Display for AdaptStatus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AdaptStatus {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "converged" => Ok(AdaptStatus::Converged),
            "gradient_stall" => Ok(AdaptStatus::GradientStall),
            "iteration_cap" => Ok(AdaptStatus::IterationCap),
            other => Err(Error::Invalid(format!("unknown status {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdaptRecord {
    pub iter: usize,
    /// Operator appended at this iteration; empty for the reference row.
    pub op: String,
    pub max_grad: f64,
    pub energy: f64,
    pub error: Option<f64>,
    pub params: usize,
    pub evals: usize,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct AdaptTrace {
    pub records: Vec<AdaptRecord>,
    /// `None` only for a partial trace carried by an error.
    pub status: Option<AdaptStatus>,
}

impl AdaptTrace {
    pub fn last(&self) -> Option<&AdaptRecord> {
        self.records.last()
    }

    pub fn final_energy(&self) -> Option<f64> {
        self.last().map(|r| r.energy)
    }

    pub fn final_error(&self) -> Option<f64> {
        self.last().and_then(|r| r.error)
    }

    /// Number of operators in the final ansatz.
    pub fn iterations(&self) -> usize {
        self.last().map_or(0, |r| r.iter)
    }

    /// First ansatz length whose error is below `threshold`.
    pub fn iterations_to(&self, threshold: f64) -> Option<usize> {
        self.records
            .iter()
            .find(|r| r.error.is_some_and(|e| e < threshold))
            .map(|r| r.iter)
    }
}

/// Index of the largest `|g_i|`, lowest index on exact ties, and whether
/// every entry is zero.
pub fn selection_tiebreak(g: &[f64]) -> (usize, bool) {
    let mut best = 0;
    let mut best_abs = 0.0;
    for (i, v) in g.iter().enumerate() {
        if v.abs() > best_abs {
            best = i;
            best_abs = v.abs();
        }
    }
    (best, best_abs == 0.0)
}

#[derive(Debug, Clone, PartialEq)]
pub struct VqeResult {
    pub params: Vec<f64>,
    pub energy: f64,
    pub evals: usize,
    pub status: LbfgsStatus,
    /// Gradient infinity norm at the initial parameters.
    pub initial_grad_norm: f64,
    pub initial_energy: f64,
}

/// Minimizes the ansatz energy over all parameters from `theta_init`.
pub fn vqe_minimize(
    ansatz: &Ansatz,
    theta_init: &[f64],
    h: &PauliSumHamiltonian,
    opts: &LbfgsOptions,
) -> Result<VqeResult> {
    vqe_minimize_with(ansatz, theta_init, h, opts, AdjointMode::default())
}

pub fn vqe_minimize_with(
    ansatz: &Ansatz,
    theta_init: &[f64],
    h: &PauliSumHamiltonian,
    opts: &LbfgsOptions,
    mode: AdjointMode,
) -> Result<VqeResult> {
    if theta_init.iter().any(|t| !t.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut first: Option<(f64, f64)> = None;
    let res = optimize::minimize(
        |theta| {
            let (e, g) = ansatz_energy_gradient_with(ansatz, theta, h, mode)?;
            if first.is_none() {
                first = Some((e, g.iter().fold(0.0f64, |m, v| m.max(v.abs()))));
            }
            Ok((e, g))
        },
        theta_init,
        opts,
    )?;
    let (initial_energy, initial_grad_norm) = first.expect("at least one evaluation");
    Ok(VqeResult {
        params: res.x,
        energy: res.f,
        evals: res.evals,
        status: res.status,
        initial_grad_norm,
        initial_energy,
    })
}

/// Gradient norm above which an optimization without any descent counts as
/// a failure rather than round-off.
const NO_DESCENT_GRAD: f64 = 1e-6;

/// Runs ADAPT-VQE without an observer.
pub fn run_adapt(
    h: &PauliSumHamiltonian,
    pool: &[PauliString],
    reference: u64,
    config: &AdaptConfig,
    e_ref: Option<f64>,
) -> Result<(Ansatz, AdaptTrace)> {
    run_adapt_observed(h, pool, reference, config, e_ref, |_| Ok(()))
}

/// Runs ADAPT-VQE, calling `observer` with every trace row as soon as it is
/// known.
pub fn run_adapt_observed<F>(
    h: &PauliSumHamiltonian,
    pool: &[PauliString],
    reference: u64,
    config: &AdaptConfig,
    e_ref: Option<f64>,
    mut observer: F,
) -> Result<(Ansatz, AdaptTrace)>
where
    F: FnMut(&AdaptRecord) -> Result<()>,
{
    config.validate()?;
    let n = h.n_qubits();
    if pool.is_empty() {
        return Err(Error::EmptyPool);
    }
    for p in pool {
        if p.n_qubits() != n {
            return Err(Error::QubitMismatch {
                left: n,
                right: p.n_qubits(),
            });
        }
        if !p.is_odd() {
            return Err(Error::EvenGenerator(p.to_string()));
        }
    }
    if reference & !low_mask(n) != 0 {
        return Err(Error::IndexOutOfRange {
            index: reference,
            n_qubits: n,
        });
    }
    let max_iters = config.max_iters_for(n);
    let mut ansatz = Ansatz::new(n, reference);
    let mut state = RealState::basis_state(n, reference)?;
    let mut energy = expectation(h, &state)?;
    let mut trace = AdaptTrace::default();
    let mut last_op = String::new();
    let mut last_evals = 0;

    let status = loop {
        let grads = pool_gradients(h, &state, pool)?;
        let max_grad = grads.iter().fold(0.0f64, |m, g| m.max(g.abs()));
        let record = AdaptRecord {
            iter: ansatz.len(),
            op: std::mem::take(&mut last_op),
            max_grad,
            energy,
            error: e_ref.map(|e| (energy - e).abs()),
            params: ansatz.len(),
            evals: last_evals,
        };
        observer(&record)?;
        trace.records.push(record);

        if e_ref.is_some_and(|e| (energy - e).abs() < config.eps_energy) {
            break AdaptStatus::Converged;
        }
        if max_grad < config.eps_grad {
            break AdaptStatus::GradientStall;
        }
        if ansatz.len() >= max_iters {
            break AdaptStatus::IterationCap;
        }

        let (chosen, _) = selection_tiebreak(&grads);
        ansatz.push(pool[chosen], config.new_parameter_init)?;
        let init = ansatz.params.clone();
        let res = vqe_minimize_with(&ansatz, &init, h, &config.optimizer, config.adjoint)?;
        if res.energy >= res.initial_energy && res.initial_grad_norm > NO_DESCENT_GRAD {
            return Err(Error::OptimizerFailed {
                iteration: ansatz.len(),
                grad_norm: res.initial_grad_norm,
                partial: Box::new(trace),
            });
        }
        ansatz.params = res.params;
        energy = res.energy;
        last_evals = res.evals;
        last_op = pool[chosen].to_string();
        state = ansatz.state()?;
    };
    trace.status = Some(status);
    Ok((ansatz, trace))
}
