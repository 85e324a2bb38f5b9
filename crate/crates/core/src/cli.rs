//! The `minpool` command line.
//!
//! ```text
//! minpool pool check POOL [--symmetry SPEC] [--level group|inseparable|algebra]
//! minpool pool find (--qubits N | --symmetry SPEC [--starters K]) --seed S -o OUT
//! minpool ham random --qubits N --terms K --seed S [--symmetry SPEC] -o OUT
//! minpool ham fci FILE [--symmetry SPEC --ref BITS]
//! minpool adapt run --hamiltonian H --pool P --ref BITS [--fci | --eref X] --trace OUT.csv
//! minpool scan --dir DIR --pool P --ref BITS [--fci] -o SUMMARY.csv
//! minpool plot --trace OUT.csv -o PLOT.svg [--linear]
//! ```
//!
//! `SPEC` is a symmetry file or one of the built-in names `h4`, `lih`,
//! `beh2`. `BITS` is a bit string, qubit 0 first (`11110000`).
//!
//! Settings can also come from `--config FILE`, a `key = value` file with
//! `#` comments. Keys are the long flag names with `_` for `-` (for example
//! `eps_grad = 1e-10`). A flag given on the command line always wins over
//! the file.
//!
//! The thread count is taken from `MINPOOL_THREADS` when set.
//!
//! Exit codes: `pool check` gives 0 for complete and 1 for incomplete,
//! `adapt run` gives 0 converged, 3 gradient stall and 4 iteration cap. Any
//! error gives 2.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::adapt::{run_adapt_observed, AdaptConfig, AdaptStatus};
use crate::error::{Error, Result};
use crate::group::{check_pool, CheckLevel};
use crate::hamiltonian::{
    ground_energy, read_hamiltonian_file, random_real_hamiltonian_with, sector_ground_energy, PauliSumHamiltonian,
    RandomHamiltonian,
};
use crate::pauli::{parse_bits, PauliString};
use crate::plot::{render_svg, PlotOptions};
use crate::pool::read_pool_file;
use crate::pool_search::{random_mcp_with, symmetry_adapted_mcp_with, SearchOptions, DEFAULT_MAX_ATTEMPTS};
use crate::symmetry::{build_constraints, default_starter_count, expected_pool_size, SymmetrySpec};
use crate::trace::{read_trace, TraceWriter};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INCOMPLETE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;
pub const EXIT_STALL: i32 = 3;
pub const EXIT_CAP: i32 = 4;

pub const THREADS_ENV: &str = "MINPOOL_THREADS";

#[derive(Debug, Parser)]
#[command(name = "minpool", version, about = "Minimal complete pools and qubit-ADAPT-VQE")]
pub struct Cli {
    /// key = value settings file; command-line flags take precedence
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Write the run manifest here instead of next to the main output
    #[arg(long, global = true)]
    pub manifest: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check or search for pools
    #[command(subcommand)]
    Pool(PoolCommand),
    /// Generate Hamiltonians or compute ground energies
    #[command(subcommand)]
    Ham(HamCommand),
    /// Run ADAPT-VQE
    #[command(subcommand)]
    Adapt(AdaptCommand),
    /// Run ADAPT-VQE on every Hamiltonian file in a directory
    Scan(ScanArgs),
    /// Render a trace CSV as an SVG convergence plot
    Plot(PlotArgs),
}

#[derive(Debug, Subcommand)]
pub enum PoolCommand {
    Check(PoolCheckArgs),
    Find(PoolFindArgs),
}

#[derive(Debug, Args)]
pub struct PoolCheckArgs {
    pub pool: PathBuf,
    #[arg(long)]
    pub symmetry: Option<String>,
    #[arg(long)]
    pub level: Option<CheckLevel>,
}

#[derive(Debug, Args)]
pub struct PoolFindArgs {
    #[arg(long, conflicts_with = "symmetry")]
    pub qubits: Option<usize>,
    #[arg(long)]
    pub symmetry: Option<String>,
    #[arg(long)]
    pub starters: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub level: Option<CheckLevel>,
    #[arg(long)]
    pub max_attempts: Option<u64>,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Subcommand)]
pub enum HamCommand {
    Random(HamRandomArgs),
    Fci(HamFciArgs),
}

#[derive(Debug, Args)]
pub struct HamRandomArgs {
    #[arg(long)]
    pub qubits: Option<usize>,
    #[arg(long)]
    pub terms: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub symmetry: Option<String>,
    /// Only use strings flipping at most this many qubits
    #[arg(long)]
    pub max_flip_weight: Option<u32>,
    #[arg(short, long)]
    pub output: PathBuf,
}

#[derive(Debug, Args)]
pub struct HamFciArgs {
    pub hamiltonian: PathBuf,
    /// With --ref, restrict to the symmetry sector of the reference
    #[arg(long, requires = "reference")]
    pub symmetry: Option<String>,
    #[arg(long = "ref", requires = "symmetry")]
    pub reference: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum AdaptCommand {
    Run(AdaptRunArgs),
}

#[derive(Debug, Args, Clone)]
pub struct RunSettings {
    #[arg(long)]
    pub pool: PathBuf,
    /// Reference occupation as a bit string, qubit 0 first
    #[arg(long = "ref")]
    pub reference: String,
    #[arg(long)]
    pub symmetry: Option<String>,
    /// Use the exact ground energy (of the reference's sector with
    /// --symmetry) as the convergence target
    #[arg(long, conflicts_with = "eref")]
    pub fci: bool,
    #[arg(long, allow_hyphen_values = true)]
    pub eref: Option<f64>,
    #[arg(long)]
    pub eps_grad: Option<f64>,
    #[arg(long)]
    pub eps_energy: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    #[arg(long)]
    pub gtol: Option<f64>,
    #[arg(long)]
    pub max_evals: Option<usize>,
    #[arg(long)]
    pub memory: Option<usize>,
}

#[derive(Debug, Args)]
pub struct AdaptRunArgs {
    #[arg(long)]
    pub hamiltonian: PathBuf,
    #[command(flatten)]
    pub settings: RunSettings,
    #[arg(long)]
    pub trace: PathBuf,
}

#[derive(Debug, Args)]
pub struct ScanArgs {
    #[arg(long)]
    pub dir: PathBuf,
    #[command(flatten)]
    pub settings: RunSettings,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Also write one trace CSV per file into this directory
    #[arg(long)]
    pub trace_dir: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PlotArgs {
    #[arg(long)]
    pub trace: PathBuf,
    #[arg(short, long)]
    pub output: PathBuf,
    /// Linear instead of logarithmic y axis
    #[arg(long)]
    pub linear: bool,
}

/// Record of one invocation, written as JSON next to the outputs.
#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub args: Vec<String>,
    pub inputs: Vec<String>,
    pub seed: Option<u64>,
    pub config: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub version: String,
    pub threads: usize,
    pub duration_seconds: f64,
}

/// Settings file contents.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    values: BTreeMap<String, String>,
}

const CONFIG_KEYS: &[&str] = &[
    "seed",
    "level",
    "qubits",
    "terms",
    "starters",
    "max_attempts",
    "max_flip_weight",
    "symmetry",
    "eps_grad",
    "eps_energy",
    "max_iters",
    "gtol",
    "max_evals",
    "memory",
];

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        let mut values = BTreeMap::new();
        for (idx, line) in text.lines().enumerate() {
            let content = line.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (k, v) = content.split_once('=').ok_or_else(|| Error::Parse {
                line: idx + 1,
                msg: format!("expected key = value, got {content:?}"),
            })?;
            let key = k.trim().replace('-', "_");
            if !CONFIG_KEYS.contains(&key.as_str()) {
                return Err(Error::Parse {
                    line: idx + 1,
                    msg: format!("unknown setting {key:?}"),
                });
            }
            values.insert(key, v.trim().to_string());
        }
        Ok(ConfigFile { values })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    pub fn values(&self) -> &BTreeMap<String, String> {
        &self.values
    }

    /// `flag` if given, else the file value for `key`, else `None`.
    fn pick<T: FromStr>(&self, flag: Option<T>, key: &str) -> Result<Option<T>> {
        if flag.is_some() {
            return Ok(flag);
        }
        match self.values.get(key) {
            None => Ok(None),
            Some(v) => v
                .parse()
                .map(Some)
                .map_err(|_| Error::Invalid(format!("config value {v:?} for {key} is invalid"))),
        }
    }
}

/// Loads a symmetry spec from a file path or a built-in name.
pub fn load_symmetry(arg: &str) -> Result<SymmetrySpec> {
    match arg.to_ascii_lowercase().as_str() {
        "h4" => Ok(SymmetrySpec::h4()),
        "lih" => Ok(SymmetrySpec::lih()),
        "beh2" => Ok(SymmetrySpec::beh2()),
        _ => std::fs::read_to_string(arg)?.parse(),
    }
}

fn reference_mask(bits: &str, n: usize) -> Result<u64> {
    let (len, mask) = parse_bits(bits)?;
    if len != n {
        return Err(Error::QubitMismatch { left: n, right: len });
    }
    Ok(mask)
}

fn thread_count() -> usize {
    rayon::current_num_threads()
}

struct Session {
    config: ConfigFile,
    manifest_path: Option<PathBuf>,
    started: Instant,
    args: Vec<String>,
}

impl Session {
    fn write_manifest(
        &self,
        command: &str,
        inputs: &[&Path],
        seed: Option<u64>,
        outputs: &[&Path],
    ) -> Result<()> {
        let path = match (&self.manifest_path, outputs.first()) {
            (Some(p), _) => p.clone(),
            (None, Some(out)) => {
                let mut s = out.as_os_str().to_owned();
                s.push(".manifest.json");
                PathBuf::from(s)
            }
            (None, None) => return Ok(()),
        };
        let manifest = RunManifest {
            command: command.to_string(),
            args: self.args.clone(),
            inputs: inputs.iter().map(|p| p.display().to_string()).collect(),
            seed,
            config: self.config.values().clone(),
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            threads: thread_count(),
            duration_seconds: self.started.elapsed().as_secs_f64(),
        };
        let json = serde_json::to_string_pretty(&manifest).map_err(|e| Error::Invalid(e.to_string()))?;
        std::fs::write(path, json + "\n")?;
        Ok(())
    }
}

/// Parses `args` (program name first) and runs the command, returning the
/// process exit code. Messages go to stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let args: Vec<std::ffi::OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let session = |config| Session {
        config,
        manifest_path: cli.manifest.clone(),
        started: Instant::now(),
        args: args.iter().map(|a| a.to_string_lossy().into_owned()).collect(),
    };
    let config = match &cli.config {
        Some(p) => match ConfigFile::read(p) {
            Ok(c) => c,
            Err(e) => {
                eprintln!("error: {}: {e}", p.display());
                return EXIT_ERROR;
            }
        },
        None => ConfigFile::default(),
    };
    match dispatch(&cli.command, &session(config)) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}

fn dispatch(command: &Command, s: &Session) -> Result<i32> {
    match command {
        Command::Pool(PoolCommand::Check(a)) => pool_check(a, s),
        Command::Pool(PoolCommand::Find(a)) => pool_find(a, s),
        Command::Ham(HamCommand::Random(a)) => ham_random(a, s),
        Command::Ham(HamCommand::Fci(a)) => ham_fci(a, s),
        Command::Adapt(AdaptCommand::Run(a)) => adapt_run(a, s),
        Command::Scan(a) => scan(a, s),
        Command::Plot(a) => plot(a, s),
    }
}

fn pool_check(a: &PoolCheckArgs, s: &Session) -> Result<i32> {
    let (ops, meta) = read_pool_file(&a.pool)?;
    let spec = s.config.pick(a.symmetry.clone(), "symmetry")?.map(|v| load_symmetry(&v)).transpose()?;
    let n = ops[0].n_qubits();
    let level = s
        .config
        .pick(a.level, "level")?
        .or(meta.level)
        .unwrap_or_else(|| CheckLevel::default_for(n));
    let report = check_pool(&ops, level, spec.as_ref())?;
    println!("{report}");
    let inputs = [a.pool.as_path()];
    s.write_manifest("pool check", &inputs, None, &[])?;
    Ok(if report.complete { EXIT_OK } else { EXIT_INCOMPLETE })
}

fn pool_find(a: &PoolFindArgs, s: &Session) -> Result<i32> {
    let seed = s.config.pick(a.seed, "seed")?.unwrap_or(0);
    let symmetry = s.config.pick(a.symmetry.clone(), "symmetry")?;
    let qubits = s.config.pick(a.qubits, "qubits")?;
    let max_attempts = s.config.pick(a.max_attempts, "max_attempts")?.unwrap_or(DEFAULT_MAX_ATTEMPTS);
    let level_flag = s.config.pick(a.level, "level")?;
    let pool = match (symmetry, qubits) {
        (Some(sym), _) => {
            let spec = load_symmetry(&sym)?;
            let level = level_flag.unwrap_or_else(|| CheckLevel::default_for(spec.n_qubits()));
            let starters = s
                .config
                .pick(a.starters, "starters")?
                .unwrap_or_else(|| default_starter_count(expected_pool_size(&spec)));
            let opts = SearchOptions {
                seed,
                level,
                max_attempts,
            };
            symmetry_adapted_mcp_with(&spec, starters, &opts)?
        }
        (None, Some(n)) => {
            if a.starters.is_some() {
                return Err(Error::Invalid("--starters needs --symmetry".into()));
            }
            let level = level_flag.unwrap_or_else(|| CheckLevel::default_for(n));
            random_mcp_with(
                n,
                &SearchOptions {
                    seed,
                    level,
                    max_attempts,
                },
            )?
        }
        (None, None) => return Err(Error::Invalid("give --qubits or --symmetry".into())),
    };
    pool.write_file(&a.output)?;
    println!(
        "wrote {} operators ({} starters) after {} attempts to {}",
        pool.len(),
        pool.starter_count(),
        pool.meta.attempts.unwrap_or(0),
        a.output.display()
    );
    s.write_manifest("pool find", &[], Some(seed), &[a.output.as_path()])?;
    Ok(EXIT_OK)
}

fn ham_random(a: &HamRandomArgs, s: &Session) -> Result<i32> {
    let n = s
        .config
        .pick(a.qubits, "qubits")?
        .ok_or_else(|| Error::Invalid("--qubits is required".into()))?;
    let terms = s
        .config
        .pick(a.terms, "terms")?
        .ok_or_else(|| Error::Invalid("--terms is required".into()))?;
    let seed = s.config.pick(a.seed, "seed")?.unwrap_or(0);
    let mut opts = RandomHamiltonian::new(n, terms, seed);
    if let Some(sym) = s.config.pick(a.symmetry.clone(), "symmetry")? {
        opts.constraints = Some(build_constraints(&load_symmetry(&sym)?));
    }
    opts.max_flip_weight = s.config.pick(a.max_flip_weight, "max_flip_weight")?;
    let h = random_real_hamiltonian_with(&opts)?;
    h.write_file(&a.output)?;
    println!("wrote {} terms on {} qubits to {}", h.terms().len(), n, a.output.display());
    s.write_manifest("ham random", &[], Some(seed), &[a.output.as_path()])?;
    Ok(EXIT_OK)
}

fn reference_energy(h: &PauliSumHamiltonian, spec: Option<&SymmetrySpec>, reference: u64) -> Result<f64> {
    match spec {
        Some(spec) => sector_ground_energy(h, &build_constraints(spec), reference),
        None => ground_energy(h),
    }
}

fn ham_fci(a: &HamFciArgs, s: &Session) -> Result<i32> {
    let h = read_hamiltonian_file(&a.hamiltonian)?;
    let spec = a.symmetry.as_deref().map(load_symmetry).transpose()?;
    let e = match (&spec, &a.reference) {
        (Some(spec), Some(bits)) => reference_energy(&h, Some(spec), reference_mask(bits, h.n_qubits())?)?,
        _ => ground_energy(&h)?,
    };
    println!("{e:.15e}");
    s.write_manifest("ham fci", &[a.hamiltonian.as_path()], None, &[])?;
    Ok(EXIT_OK)
}

struct Prepared {
    pool: Vec<PauliString>,
    spec: Option<SymmetrySpec>,
    config: AdaptConfig,
}

fn prepare(r: &RunSettings, s: &Session) -> Result<Prepared> {
    let (pool, _) = read_pool_file(&r.pool)?;
    let spec = s.config.pick(r.symmetry.clone(), "symmetry")?.map(|v| load_symmetry(&v)).transpose()?;
    let mut config = AdaptConfig::default();
    if let Some(v) = s.config.pick(r.eps_grad, "eps_grad")? {
        config.eps_grad = v;
    }
    if let Some(v) = s.config.pick(r.eps_energy, "eps_energy")? {
        config.eps_energy = v;
    }
    config.max_iters = s.config.pick(r.max_iters, "max_iters")?;
    if let Some(v) = s.config.pick(r.gtol, "gtol")? {
        config.optimizer.gtol = v;
    }
    if let Some(v) = s.config.pick(r.max_evals, "max_evals")? {
        config.optimizer.max_evals = v;
    }
    if let Some(v) = s.config.pick(r.memory, "memory")? {
        config.optimizer.memory = v;
    }
    match check_pool(&pool, CheckLevel::Inseparable, spec.as_ref()) {
        Ok(r) if !r.complete => eprintln!("warning: pool fails the {} check", r.level),
        Err(e) => eprintln!("warning: pool could not be checked: {e}"),
        _ => {}
    }
    Ok(Prepared { pool, spec, config })
}

struct Outcome {
    status: AdaptStatus,
    energy: f64,
    error: Option<f64>,
    iterations: usize,
}

fn run_one(h: &PauliSumHamiltonian, r: &RunSettings, p: &Prepared, trace: &Path) -> Result<Outcome> {
    let reference = reference_mask(&r.reference, h.n_qubits())?;
    let e_ref = if r.fci {
        Some(reference_energy(h, p.spec.as_ref(), reference)?)
    } else {
        r.eref
    };
    let mut writer = TraceWriter::create(trace)?;
    let result = run_adapt_observed(h, &p.pool, reference, &p.config, e_ref, |rec| writer.record(rec));
    match result {
        Ok((_, t)) => {
            writer.finish(t.status)?;
            let last = t.last().expect("trace has the reference row");
            Ok(Outcome {
                status: t.status.expect("finished run has a status"),
                energy: last.energy,
                error: last.error,
                iterations: last.iter,
            })
        }
        Err(e) => {
            writer.finish(None)?;
            Err(e)
        }
    }
}

fn exit_for(status: AdaptStatus) -> i32 {
    match status {
        AdaptStatus::Converged => EXIT_OK,
        AdaptStatus::GradientStall => EXIT_STALL,
        AdaptStatus::IterationCap => EXIT_CAP,
    }
}

fn adapt_run(a: &AdaptRunArgs, s: &Session) -> Result<i32> {
    let h = read_hamiltonian_file(&a.hamiltonian)?;
    let p = prepare(&a.settings, s)?;
    let out = run_one(&h, &a.settings, &p, &a.trace)?;
    println!(
        "status={} iterations={} energy={:.12e}{}",
        out.status,
        out.iterations,
        out.energy,
        out.error.map(|e| format!(" error={e:.3e}")).unwrap_or_default()
    );
    s.write_manifest(
        "adapt run",
        &[a.hamiltonian.as_path(), a.settings.pool.as_path()],
        None,
        &[a.trace.as_path()],
    )?;
    Ok(exit_for(out.status))
}

pub const SCAN_HEADER: &str = "label,energy,error,iterations,status";

fn scan(a: &ScanArgs, s: &Session) -> Result<i32> {
    let mut files: Vec<PathBuf> = std::fs::read_dir(&a.dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "ham" || x == "txt"))
        .collect();
    files.sort();
    if files.is_empty() {
        return Err(Error::Invalid(format!(
            "no .ham or .txt Hamiltonian files in {}",
            a.dir.display()
        )));
    }
    let p = prepare(&a.settings, s)?;
    let scratch = trace_dir_for(a)?;
    let mut out = String::from(SCAN_HEADER);
    out.push('\n');
    for f in &files {
        let label = f.file_stem().map(|x| x.to_string_lossy().into_owned()).unwrap_or_default();
        let h = read_hamiltonian_file(f)?;
        let trace = scratch.join(format!("{label}.csv"));
        let r = run_one(&h, &a.settings, &p, &trace)?;
        out.push_str(&format!(
            "{label},{:e},{},{},{}\n",
            r.energy,
            r.error.map(|e| format!("{e:e}")).unwrap_or_default(),
            r.iterations,
            r.status
        ));
    }
    std::fs::write(&a.output, &out)?;
    if a.trace_dir.is_none() {
        let _ = std::fs::remove_dir_all(&scratch);
    }
    print!("{out}");
    let inputs: Vec<&Path> = files.iter().map(|p| p.as_path()).collect();
    s.write_manifest("scan", &inputs, None, &[a.output.as_path()])?;
    Ok(EXIT_OK)
}

fn trace_dir_for(a: &ScanArgs) -> Result<PathBuf> {
    let dir = match &a.trace_dir {
        Some(d) => d.clone(),
        None => {
            let mut s = a.output.as_os_str().to_owned();
            s.push(".traces");
            PathBuf::from(s)
        }
    };
    std::fs::create_dir_all(&dir)?;
    Ok(dir)
}

fn plot(a: &PlotArgs, s: &Session) -> Result<i32> {
    let trace = read_trace(&a.trace)?;
    let svg = render_svg(&trace, PlotOptions { log_y: !a.linear })?;
    std::fs::write(&a.output, svg)?;
    s.write_manifest("plot", &[a.trace.as_path()], None, &[a.output.as_path()])?;
    Ok(EXIT_OK)
}

/// Applies `MINPOOL_THREADS` to the global rayon pool. Invalid values are
/// reported and ignored.
pub fn init_threads() {
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => {
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => eprintln!("warning: ignoring {THREADS_ENV}={v:?}"),
        }
    }
}
