//! Product groups generated by pools, the completeness checks built on
//! them, and Lie-algebra closure.
//!
//! Modulo sign, the product group of a set of Pauli strings is the GF(2)
//! span of their symplectic vectors, so it is stored as a row-reduced basis
//! and enumerated by Gray code when needed.
//!
//! A pool of `2n - 2` odd strings is screened in three steps:
//! 1. the group has rank `2n - 2` and contains an odd element for every
//!    nonzero flip mask (flip coverage);
//! 2. the anticommutation graph of the pool is connected (inseparability);
//! 3. the Lie closure contains every odd element of the group, i.e. it has
//!    `2^{n-1}(2^{n-1}+1)/2` elements.
//!
//! Step 3 implies completeness. Step 2 is necessary and, on every pool we
//! have tried, also sufficient once step 1 passes; the report records both.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::gf2::{self, XorBasis};
use crate::pauli::PauliString;
use crate::symmetry::{build_constraints, expected_pool_size, is_starter, ConstraintSet, SymmetrySpec};

/// Largest group rank that is enumerated element by element.
pub const ENUMERATION_CAP: usize = 26;

/// Largest qubit count for which [`CheckLevel::default_for`] picks the
/// algebra check.
pub const ALGEBRA_DEFAULT_MAX_QUBITS: usize = 10;

#[derive(Debug, Clone)]
pub struct GeneratedGroup {
    n_qubits: usize,
    generators: Vec<PauliString>,
    basis: XorBasis,
}

impl GeneratedGroup {
    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn generators(&self) -> &[PauliString] {
        &self.generators
    }

    /// Row-reduced symplectic basis (`x | z << 64`).
    pub fn gf2_basis(&self) -> &[u128] {
        self.basis.vectors()
    }

    pub fn rank(&self) -> usize {
        self.basis.rank()
    }

    pub fn contains(&self, p: &PauliString) -> bool {
        p.n_qubits() == self.n_qubits && self.basis.contains(gf2::symplectic(p))
    }

    fn check_enumerable(&self, cap: usize) -> Result<()> {
        if self.rank() > cap {
            return Err(Error::EnumerationInfeasible {
                rank: self.rank(),
                cap,
            });
        }
        Ok(())
    }

    /// Calls `f` on every group element (mod sign) in Gray-code order.
    pub fn for_each_element<F: FnMut(PauliString)>(&self, cap: usize, mut f: F) -> Result<()> {
        self.check_enumerable(cap)?;
        let n = self.n_qubits;
        self.basis.for_each_element(|v| {
            let (x, z) = gf2::split_symplectic(v);
            f(PauliString::from_masks(n, x, z).expect("span stays within n qubits"));
        });
        Ok(())
    }

    /// Number of odd elements, optionally only those satisfying `constraints`.
    pub fn count_odd(&self, constraints: Option<&ConstraintSet>, cap: usize) -> Result<u64> {
        let mut count = 0u64;
        self.for_each_element(cap, |p| {
            if p.is_odd() && constraints.is_none_or(|cs| cs.satisfies(&p)) {
                count += 1;
            }
        })?;
        Ok(count)
    }

    /// True iff every nonzero flip mask (or every nonzero mask allowed by
    /// `allowed`) is the x-mask of some odd element.
    pub fn flip_coverage(&self, allowed: Option<&ConstraintSet>) -> Result<bool> {
        self.flip_coverage_with_cap(allowed, ENUMERATION_CAP)
    }

    pub fn flip_coverage_with_cap(&self, allowed: Option<&ConstraintSet>, cap: usize) -> Result<bool> {
        if self.n_qubits > 32 {
            return Err(Error::TooLarge {
                n_qubits: self.n_qubits,
                cap: 32,
            });
        }
        let dim = 1usize << self.n_qubits;
        let mut covered = vec![false; dim];
        self.for_each_element(cap, |p| {
            if p.is_odd() {
                covered[p.x_mask() as usize] = true;
            }
        })?;
        Ok((1..dim as u64).all(|f| {
            covered[f as usize] || allowed.is_some_and(|cs| !cs.allows_flip(f))
        }))
    }
}

fn uniform_size(pool: &[PauliString]) -> Result<usize> {
    let first = pool.first().ok_or(Error::EmptyPool)?;
    let n = first.n_qubits();
    if let Some(bad) = pool.iter().find(|p| p.n_qubits() != n) {
        return Err(Error::QubitMismatch {
            left: n,
            right: bad.n_qubits(),
        });
    }
    Ok(n)
}

pub fn build_group(pool: &[PauliString]) -> Result<GeneratedGroup> {
    let n = uniform_size(pool)?;
    Ok(GeneratedGroup {
        n_qubits: n,
        generators: pool.to_vec(),
        basis: XorBasis::from_vectors(pool.iter().map(gf2::symplectic)),
    })
}

pub fn flip_coverage(group: &GeneratedGroup, allowed: Option<&ConstraintSet>) -> Result<bool> {
    group.flip_coverage(allowed)
}

/// Whether the anticommutation graph of the pool is connected, i.e. the
/// pool cannot be split into two mutually commuting sets.
pub fn inseparability(pool: &[PauliString]) -> Result<bool> {
    uniform_size(pool)?;
    let k = pool.len();
    let mut uf = UnionFind::<usize>::new(k);
    for i in 0..k {
        for j in (i + 1)..k {
            if !pool[i].commutes_unchecked(&pool[j]) {
                uf.union(i, j);
            }
        }
    }
    let root = uf.find(0);
    Ok((1..k).all(|i| uf.find(i) == root))
}

#[derive(Debug, Clone)]
pub struct LieClosure {
    elements: Vec<PauliString>,
    set: HashSet<PauliString>,
    capped: bool,
}

impl LieClosure {
    /// Elements in discovery order; the pool comes first.
    pub fn elements(&self) -> &[PauliString] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: &PauliString) -> bool {
        self.set.contains(p)
    }

    /// Set when enumeration stopped because the element count exceeded the cap.
    pub fn capped(&self) -> bool {
        self.capped
    }
}

/// Elements per parallel block; small blocks keep duplicate products few.
const CLOSURE_BLOCK: usize = 64;

/// Smallest set of odd strings containing `pool` and closed under the
/// products of anticommuting pairs (commutators modulo scale).
///
/// Elements are processed in fixed blocks: each element is paired with all
/// elements before it and new products are appended in index order after
/// every block, so the result does not depend on thread count.
pub fn lie_closure(pool: &[PauliString], cap: usize) -> Result<LieClosure> {
    uniform_size(pool)?;
    if let Some(even) = pool.iter().find(|p| !p.is_odd()) {
        return Err(Error::EvenGenerator(even.to_string()));
    }
    let mut elements: Vec<PauliString> = Vec::new();
    let mut set: HashSet<PauliString> = HashSet::new();
    for p in pool {
        if set.insert(*p) {
            elements.push(*p);
        }
    }
    let mut capped = elements.len() > cap;
    let mut start = 0;
    while start < elements.len() && !capped {
        let end = (start + CLOSURE_BLOCK).min(elements.len());
        let snapshot = &elements;
        let seen = &set;
        let found: Vec<Vec<PauliString>> = (start..end)
            .into_par_iter()
            .map(|i| {
                let e = snapshot[i];
                snapshot[..i]
                    .iter()
                    .filter(|f| !e.commutes_unchecked(f))
                    .map(|f| e.product_unchecked(f))
                    .filter(|prod| !seen.contains(prod))
                    .collect()
            })
            .collect();
        for prod in found.into_iter().flatten() {
            if set.insert(prod) {
                elements.push(prod);
                if elements.len() > cap {
                    capped = true;
                    break;
                }
            }
        }
        start = end;
    }
    Ok(LieClosure {
        elements,
        set,
        capped,
    })
}

/// Number of odd strings in the canonical minimal complete group,
/// `2^{n-1} (2^{n-1} + 1) / 2`.
pub fn odd_count_target(n: usize) -> Result<u128> {
    if n < 2 {
        return Err(Error::TooFewQubits(n));
    }
    if n > 64 {
        return Err(Error::TooManyQubits(n));
    }
    let half = 1u128 << (n - 1);
    Ok(half * (half + 1) / 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum CheckLevel {
    /// Rank and flip coverage of the product group.
    Group,
    /// Group checks plus inseparability.
    Inseparable,
    /// All of the above plus the Lie-closure size.
    Algebra,
}

impl CheckLevel {
    pub fn default_for(n_qubits: usize) -> Self {
        if n_qubits <= ALGEBRA_DEFAULT_MAX_QUBITS {
            CheckLevel::Algebra
        } else {
            CheckLevel::Inseparable
        }
    }

    pub fn as_str(&self) -> &'static str {
        match self {
            CheckLevel::Group => "group",
            CheckLevel::Inseparable => "inseparable",
            CheckLevel::Algebra => "algebra",
        }
    }
}

impl fmt::Display for CheckLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CheckLevel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "group" => Ok(CheckLevel::Group),
            "inseparable" => Ok(CheckLevel::Inseparable),
            "algebra" => Ok(CheckLevel::Algebra),
            other => Err(Error::Invalid(format!(
                "unknown check level {other:?} (expected group, inseparable or algebra)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompletenessReport {
    pub level: CheckLevel,
    pub n_qubits: usize,
    pub symmetry: Option<String>,
    pub pool_size: usize,
    pub expected_size: usize,
    /// Members with an even number of `Y` factors.
    pub even_members: Vec<String>,
    /// Members violating the symmetry constraints (symmetry-restricted only).
    pub constraint_violations: Vec<String>,
    pub rank: usize,
    pub expected_rank: usize,
    pub flip_coverage: bool,
    pub inseparable: Option<bool>,
    pub closure_size: Option<usize>,
    pub closure_target: Option<u128>,
    pub closure_capped: bool,
    /// Per-member starter flags (symmetry-restricted only).
    pub starters: Option<Vec<bool>>,
    pub complete: bool,
}

impl CompletenessReport {
    pub fn size_ok(&self) -> bool {
        self.pool_size == self.expected_size
    }

    pub fn rank_ok(&self) -> bool {
        self.rank == self.expected_rank
    }

    pub fn starter_count(&self) -> Option<usize> {
        self.starters
            .as_ref()
            .map(|s| s.iter().filter(|&&b| b).count())
    }

    pub fn verdict(&self) -> &'static str {
        if self.complete {
            "complete"
        } else {
            "incomplete"
        }
    }

    /// Machine-readable `key=value` lines.
    pub fn to_key_values(&self) -> String {
        let mut kv: Vec<(String, String)> = vec![
            ("verdict".into(), self.verdict().into()),
            ("level".into(), self.level.to_string()),
            ("qubits".into(), self.n_qubits.to_string()),
            (
                "symmetry".into(),
                self.symmetry.clone().unwrap_or_else(|| "none".into()),
            ),
            ("pool_size".into(), self.pool_size.to_string()),
            ("expected_size".into(), self.expected_size.to_string()),
            ("all_odd".into(), self.even_members.is_empty().to_string()),
            ("rank".into(), self.rank.to_string()),
            ("expected_rank".into(), self.expected_rank.to_string()),
            ("flip_coverage".into(), self.flip_coverage.to_string()),
        ];
        if self.symmetry.is_some() {
            kv.push((
                "constraints_ok".into(),
                self.constraint_violations.is_empty().to_string(),
            ));
        }
        if let Some(ins) = self.inseparable {
            kv.push(("inseparable".into(), ins.to_string()));
        }
        if let Some(size) = self.closure_size {
            kv.push(("closure_size".into(), size.to_string()));
        }
        if let Some(t) = self.closure_target {
            kv.push(("closure_target".into(), t.to_string()));
        }
        if self.closure_size.is_some() {
            kv.push(("closure_capped".into(), self.closure_capped.to_string()));
        }
        if let Some(c) = self.starter_count() {
            kv.push(("starters".into(), c.to_string()));
        }
        kv.into_iter()
            .map(|(k, v)| format!("{k}={v}\n"))
            .collect()
    }
}

fn mark(ok: bool) -> &'static str {
    if ok {
        "ok"
    } else {
        "FAIL"
    }
}

impl fmt::Display for CompletenessReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pool check ({} level, {} qubits)", self.level, self.n_qubits)?;
        if let Some(s) = &self.symmetry {
            writeln!(f, "  symmetry       : {s}")?;
        }
        writeln!(
            f,
            "  size           : {} (expected {}) {}",
            self.pool_size,
            self.expected_size,
            mark(self.size_ok())
        )?;
        if self.even_members.is_empty() {
            writeln!(f, "  generators odd : ok")?;
        } else {
            writeln!(f, "  generators odd : FAIL ({})", self.even_members.join(", "))?;
        }
        if self.symmetry.is_some() {
            if self.constraint_violations.is_empty() {
                writeln!(f, "  constraints    : ok")?;
            } else {
                writeln!(
                    f,
                    "  constraints    : FAIL ({})",
                    self.constraint_violations.join(", ")
                )?;
            }
        }
        writeln!(
            f,
            "  group rank     : {} (expected {}) {}",
            self.rank,
            self.expected_rank,
            mark(self.rank_ok())
        )?;
        writeln!(f, "  flip coverage  : {}", mark(self.flip_coverage))?;
        if let Some(ins) = self.inseparable {
            writeln!(f, "  inseparable    : {}", mark(ins))?;
        }
        if let (Some(size), Some(target)) = (self.closure_size, self.closure_target) {
            writeln!(
                f,
                "  Lie closure    : {size} (target {target}){} {}",
                if self.closure_capped { " capped" } else { "" },
                mark(size as u128 == target && !self.closure_capped)
            )?;
        }
        if let Some(flags) = &self.starters {
            writeln!(
                f,
                "  starters       : {} of {}",
                flags.iter().filter(|&&b| b).count(),
                flags.len()
            )?;
        }
        write!(f, "  verdict        : {}", self.verdict())
    }
}

/// Runs the completeness checks up to `level`.
///
/// Without `symmetry` the pool is judged against the canonical minimal
/// complete group (`2n - 2` generators). With it, against the largest
/// constraint-compatible subgroup: rank `expected_pool_size(spec)`, flip
/// coverage over the allowed flips only and, at algebra level, a closure
/// equal to the odd constraint-compatible part of the generated group.
pub fn check_pool(
    pool: &[PauliString],
    level: CheckLevel,
    symmetry: Option<&SymmetrySpec>,
) -> Result<CompletenessReport> {
    let n = uniform_size(pool)?;
    let constraints = match symmetry {
        Some(spec) => {
            if spec.n_qubits() != n {
                return Err(Error::QubitMismatch {
                    left: n,
                    right: spec.n_qubits(),
                });
            }
            Some(build_constraints(spec))
        }
        None => None,
    };
    let expected = match symmetry {
        Some(spec) => expected_pool_size(spec),
        None => 2 * n - 2,
    };

    let even_members: Vec<String> = pool
        .iter()
        .filter(|p| !p.is_odd())
        .map(|p| p.to_string())
        .collect();
    let constraint_violations: Vec<String> = match &constraints {
        Some(cs) => pool
            .iter()
            .filter(|p| !cs.satisfies(p))
            .map(|p| p.to_string())
            .collect(),
        None => Vec::new(),
    };
    let starters = symmetry.map(|spec| pool.iter().map(|p| is_starter(p, spec)).collect());

    let group = build_group(pool)?;
    let rank = group.rank();
    let coverage = group.flip_coverage(constraints.as_ref())?;

    let inseparable = if level >= CheckLevel::Inseparable {
        Some(inseparability(pool)?)
    } else {
        None
    };

    let (mut closure_size, mut closure_target, mut closure_capped) = (None, None, false);
    if level == CheckLevel::Algebra && even_members.is_empty() {
        let target = match &constraints {
            None => odd_count_target(n)?,
            Some(cs) => group.count_odd(Some(cs), ENUMERATION_CAP)? as u128,
        };
        let cap = usize::try_from(target).unwrap_or(usize::MAX - 1) + 1;
        let closure = lie_closure(pool, cap)?;
        closure_size = Some(closure.len());
        closure_target = Some(target);
        closure_capped = closure.capped();
    }

    let mut complete = pool.len() == expected
        && even_members.is_empty()
        && constraint_violations.is_empty()
        && rank == expected
        && coverage;
    if let Some(ins) = inseparable {
        complete &= ins;
    }
    if level == CheckLevel::Algebra {
        complete &= match (closure_size, closure_target) {
            (Some(size), Some(target)) => size as u128 == target && !closure_capped,
            _ => false,
        };
    }

    Ok(CompletenessReport {
        level,
        n_qubits: n,
        symmetry: symmetry.map(|s| s.name.clone().unwrap_or_else(|| "custom".into())),
        pool_size: pool.len(),
        expected_size: expected,
        even_members,
        constraint_violations,
        rank,
        expected_rank: expected,
        flip_coverage: coverage,
        inseparable,
        closure_size,
        closure_target,
        closure_capped,
        starters,
        complete,
    })
}
