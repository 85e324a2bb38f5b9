//! Trace CSV files.
//!
//! ```text
//! iter,op,max_grad,energy,error,params,evals
//! 0,,1.2e0,-3.1e0,4.5e-1,0,0
//! 1,YXII,3.0e-1,-3.4e0,1.5e-1,1,12
//! # status=converged
//! ```
//!
//! Floats use the shortest representation that reads back exactly. `error`
//! is empty when no reference energy was given.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use crate::adapt::{AdaptRecord, AdaptStatus, AdaptTrace};
use crate::error::{Error, Result};

pub const HEADER: &str = "iter,op,max_grad,energy,error,params,evals";

pub fn format_record(r: &AdaptRecord) -> String {
    let error = r.error.map(|e| format!("{e:e}")).unwrap_or_default();
    format!(
        "{},{},{:e},{:e},{},{},{}",
        r.iter, r.op, r.max_grad, r.energy, error, r.params, r.evals
    )
}

pub fn to_csv(trace: &AdaptTrace) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for r in &trace.records {
        out.push_str(&format_record(r));
        out.push('\n');
    }
    if let Some(status) = trace.status {
        out.push_str(&format!("# status={status}\n"));
    }
    out
}

pub fn parse_csv(text: &str) -> Result<AdaptTrace> {
    let mut trace = AdaptTrace::default();
    let mut seen_header = false;
    for (idx, line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some(s) = comment.trim().strip_prefix("status=") {
                trace.status = Some(s.trim().parse()?);
            }
            continue;
        }
        if !seen_header {
            if line != HEADER {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("expected header {HEADER:?}"),
                });
            }
            seen_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(Error::Parse {
                line: line_no,
                msg: format!("expected 7 fields, found {}", fields.len()),
            });
        }
        let bad = |what: &str| Error::Parse {
            line: line_no,
            msg: format!("invalid {what}"),
        };
        trace.records.push(AdaptRecord {
            iter: fields[0].parse().map_err(|_| bad("iter"))?,
            op: fields[1].to_string(),
            max_grad: fields[2].parse().map_err(|_| bad("max_grad"))?,
            energy: fields[3].parse().map_err(|_| bad("energy"))?,
            error: if fields[4].is_empty() {
                None
            } else {
                Some(fields[4].parse().map_err(|_| bad("error"))?)
            },
            params: fields[5].parse().map_err(|_| bad("params"))?,
            evals: fields[6].parse().map_err(|_| bad("evals"))?,
        });
    }
    if !seen_header {
        return Err(Error::Parse {
            line: 0,
            msg: "missing trace header".into(),
        });
    }
    Ok(trace)
}

pub fn read_trace(path: &Path) -> Result<AdaptTrace> {
    parse_csv(&std::fs::read_to_string(path)?)
}

pub fn write_trace(path: &Path, trace: &AdaptTrace) -> Result<()> {
    std::fs::write(path, to_csv(trace))?;
    Ok(())
}

/// Writes rows as they arrive, flushing after each one, so an interrupted
/// run leaves a readable prefix.
pub struct TraceWriter {
    out: BufWriter<File>,
}

impl TraceWriter {
    pub fn create(path: &Path) -> Result<Self> {
        let mut out = BufWriter::new(File::create(path)?);
        writeln!(out, "{HEADER}")?;
        out.flush()?;
        Ok(TraceWriter { out })
    }

    pub fn record(&mut self, r: &AdaptRecord) -> Result<()> {
        writeln!(self.out, "{}", format_record(r))?;
        self.out.flush()?;
        Ok(())
    }

    pub fn finish(mut self, status: Option<AdaptStatus>) -> Result<()> {
        if let Some(s) = status {
            writeln!(self.out, "# status={s}")?;
        }
        self.out.flush()?;
        Ok(())
    }
}
