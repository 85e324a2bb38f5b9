//! Operator pools and the pool file format.
//!
//! A pool file is UTF-8 text with one Pauli letter string per line. `#`
//! starts a comment, blank lines are ignored. Files written by this crate
//! carry a metadata header of `# key: value` comment lines and mark
//! starters with a trailing `# starter` comment:
//!
//! ```text
//! # qubits: 8
//! # seed: 7
//! # attempts: 31
//! # level: algebra
//! # starters: 10
//! YIXIYIYI # starter
//! XZIIYZII
//! ```

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::group::CheckLevel;
use crate::pauli::PauliString;
use crate::symmetry::{is_starter, SymmetrySpec};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PoolMeta {
    pub seed: Option<u64>,
    pub attempts: Option<u64>,
    pub level: Option<CheckLevel>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pool {
    operators: Vec<PauliString>,
    n_qubits: usize,
    pub meta: PoolMeta,
    pub spec: Option<SymmetrySpec>,
}

impl Pool {
    /// Validates uniform size, oddness and uniqueness.
    pub fn new(operators: Vec<PauliString>) -> Result<Self> {
        let n = operators.first().ok_or(Error::EmptyPool)?.n_qubits();
        for (i, p) in operators.iter().enumerate() {
            if p.n_qubits() != n {
                return Err(Error::QubitMismatch {
                    left: n,
                    right: p.n_qubits(),
                });
            }
            if !p.is_odd() {
                return Err(Error::EvenGenerator(p.to_string()));
            }
            if operators[..i].contains(p) {
                return Err(Error::Invalid(format!("duplicate pool operator {p}")));
            }
        }
        Ok(Pool {
            operators,
            n_qubits: n,
            meta: PoolMeta::default(),
            spec: None,
        })
    }

    pub fn with_spec(mut self, spec: SymmetrySpec) -> Result<Self> {
        if spec.n_qubits() != self.n_qubits {
            return Err(Error::QubitMismatch {
                left: self.n_qubits,
                right: spec.n_qubits(),
            });
        }
        self.spec = Some(spec);
        Ok(self)
    }

    pub fn operators(&self) -> &[PauliString] {
        &self.operators
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

    pub fn starter_flags(&self) -> Option<Vec<bool>> {
        self.spec
            .as_ref()
            .map(|spec| self.operators.iter().map(|p| is_starter(p, spec)).collect())
    }

    pub fn starter_count(&self) -> usize {
        self.starter_flags()
            .map_or(0, |f| f.iter().filter(|&&b| b).count())
    }

    pub fn to_file_string(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# qubits: {}", self.n_qubits);
        if let Some(name) = self.spec.as_ref().and_then(|s| s.name.as_ref()) {
            let _ = writeln!(out, "# symmetry: {name}");
        }
        if let Some(seed) = self.meta.seed {
            let _ = writeln!(out, "# seed: {seed}");
        }
        if let Some(a) = self.meta.attempts {
            let _ = writeln!(out, "# attempts: {a}");
        }
        if let Some(level) = self.meta.level {
            let _ = writeln!(out, "# level: {level}");
        }
        let flags = self.starter_flags();
        if flags.is_some() {
            let _ = writeln!(out, "# starters: {}", self.starter_count());
        }
        for (i, p) in self.operators.iter().enumerate() {
            match &flags {
                Some(f) if f[i] => {
                    let _ = writeln!(out, "{p} # starter");
                }
                _ => {
                    let _ = writeln!(out, "{p}");
                }
            }
        }
        out
    }

    pub fn write_file(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_file_string())?;
        Ok(())
    }
}

/// Parses pool file text into its operators and any metadata header.
pub fn parse_pool(text: &str) -> Result<(Vec<PauliString>, PoolMeta)> {
    let mut ops = Vec::new();
    let mut meta = PoolMeta::default();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let (content, comment) = match raw.split_once('#') {
            Some((c, rest)) => (c.trim(), Some(rest.trim())),
            None => (raw.trim(), None),
        };
        if content.is_empty() {
            if let Some((k, v)) = comment.and_then(|c| c.split_once(':')) {
                let v = v.trim();
                match k.trim() {
                    "seed" => meta.seed = v.parse().ok(),
                    "attempts" => meta.attempts = v.parse().ok(),
                    "level" => meta.level = v.parse().ok(),
                    _ => {}
                }
            }
            continue;
        }
        let p: PauliString = content.parse().map_err(|e| Error::Parse {
            line,
            msg: format!("{e}"),
        })?;
        if let Some(first) = ops.first().map(|q: &PauliString| q.n_qubits()) {
            if first != p.n_qubits() {
                return Err(Error::Parse {
                    line,
                    msg: format!("string length {} differs from {first}", p.n_qubits()),
                });
            }
        }
        ops.push(p);
    }
    if ops.is_empty() {
        return Err(Error::EmptyPool);
    }
    Ok((ops, meta))
}

/// Reads a pool file. Operators are returned as written; use [`Pool::new`]
/// when oddness and uniqueness must hold.
pub fn read_pool_file(path: &Path) -> Result<(Vec<PauliString>, PoolMeta)> {
    parse_pool(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_with_comments_and_metadata() {
        let text = "# seed: 9\n# level: inseparable\n\nYI  # first\nZY\n";
        let (ops, meta) = parse_pool(text).unwrap();
        assert_eq!(ops.len(), 2);
        assert_eq!(meta.seed, Some(9));
        assert_eq!(meta.level, Some(CheckLevel::Inseparable));
    }

    #[test]
    fn parse_errors_name_the_line() {
        match parse_pool("YI\nZQ\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_pool("# nothing\n"), Err(Error::EmptyPool)));
        assert!(parse_pool("YI\nYII\n").is_err());
    }

    #[test]
    fn pool_validation() {
        let ok = Pool::new(vec!["YI".parse().unwrap(), "ZY".parse().unwrap()]);
        assert!(ok.is_ok());
        assert!(Pool::new(vec!["YY".parse().unwrap()]).is_err());
        assert!(Pool::new(vec!["YI".parse().unwrap(), "YI".parse().unwrap()]).is_err());
        assert!(Pool::new(vec![]).is_err());
    }

    #[test]
    fn file_round_trip_keeps_starter_marks() {
        let spec = SymmetrySpec::h4();
        let mut pool = Pool::new(crate::catalog::h4_ten_starters())
            .unwrap()
            .with_spec(spec)
            .unwrap();
        pool.meta.seed = Some(3);
        let text = pool.to_file_string();
        assert_eq!(text.matches("# starter\n").count(), 10);
        let (ops, meta) = parse_pool(&text).unwrap();
        assert_eq!(ops, pool.operators());
        assert_eq!(meta.seed, Some(3));
    }
}
