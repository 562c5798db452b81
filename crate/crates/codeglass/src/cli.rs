//! Command-line interface. [`execute`] does the work and returns the text
//! for stdout so the binary stays a thin wrapper.

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};
use codeglass_core::decoder::nishimori_beta;
use codeglass_core::montecarlo::{self, Schedule};
use codeglass_core::{rng, StabilizerCode};
use serde::Serialize;

use crate::checks::{self, CheckInputs, Suite};
use crate::codefile::CodeFile;
use crate::config::{CodeSpec, ExperimentConfig};
use crate::driver;
use crate::error::{AppError, AppResult};
use crate::report::{self, CodeSummary, Header};

/// Environment variable naming the default output directory.
pub const OUT_DIR_VAR: &str = "CODEGLASS_OUT";

#[derive(Debug, Parser)]
#[command(name = "codeglass", version, about = "Stabilizer-code decoding through random-bond Wegner spin models")]
pub struct Cli {
    /// Worker threads (default: one per core).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build, inspect, save and load codes.
    #[command(subcommand)]
    Code(CodeCommand),
    /// Run property suites; exit status 1 when any check fails.
    Check(CheckArgs),
    /// Decoding experiments.
    #[command(subcommand)]
    Decode(DecodeCommand),
    /// Monte Carlo estimation jobs.
    #[command(subcommand)]
    Mc(McCommand),
}

#[derive(Debug, Subcommand)]
pub enum CodeCommand {
    /// Print `[[n,k,d]]`.
    Build {
        #[command(subcommand)]
        family: Family,
        /// Weight cap for the exact distance search.
        #[arg(long, default_value_t = 5)]
        cap: usize,
    },
    /// Print parameters, ranks and sector sizes as JSON.
    Info {
        #[command(subcommand)]
        family: Family,
        #[arg(long, default_value_t = 5)]
        cap: usize,
    },
    /// Write the code file.
    Save {
        #[arg(long)]
        out: PathBuf,
        #[command(subcommand)]
        family: Family,
    },
    /// Read a code file and print `[[n,k,d]]`.
    Load {
        path: PathBuf,
        #[arg(long, default_value_t = 5)]
        cap: usize,
    },
}

#[derive(Debug, Clone, Subcommand)]
pub enum Family {
    Toric {
        #[arg(long = "L")]
        l: usize,
    },
    /// Cyclic hypergraph product; polynomials as bit strings, lowest degree first.
    HpCyclic {
        #[arg(long)]
        h1: String,
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        h2: String,
        #[arg(long)]
        n2: usize,
    },
    /// `1+x` on `n1` against `1+…+x^{l-1}` on `n2`.
    Dt {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        n1: usize,
        #[arg(long)]
        n2: usize,
    },
    /// Product of a random `(h, v)` matrix with its transpose.
    Gallager {
        #[arg(long)]
        h: usize,
        #[arg(long)]
        v: usize,
        #[arg(long)]
        nc: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
    },
    /// Layered code over a toric code.
    Gauge {
        #[arg(long = "inner-L")]
        inner_l: usize,
        #[arg(long)]
        layers: usize,
    },
}

impl From<Family> for CodeSpec {
    fn from(f: Family) -> Self {
        match f {
            Family::Toric { l } => CodeSpec::Toric { l },
            Family::HpCyclic { h1, n1, h2, n2 } => CodeSpec::HpCyclic { h1, n1, h2, n2 },
            Family::Dt { l, n1, n2 } => CodeSpec::DebierreTurban { l, n1, n2 },
            Family::Gallager { h, v, nc, seed } => CodeSpec::Gallager { h, v, nc, seed },
            Family::Gauge { inner_l, layers } => CodeSpec::Gauge { inner_l, layers },
        }
    }
}

/// Compact code syntax for flags: `toric:3`, `hp-cyclic:1101,7,1101,7`,
/// `dt:3,3,6`, `gallager:2,3,6,1`, `gauge:2,2`, `file:PATH`.
impl FromStr for CodeSpec {
    type Err = AppError;

    fn from_str(s: &str) -> AppResult<Self> {
        let (family, rest) = s.split_once(':').ok_or_else(|| AppError::Usage(format!("code {s:?}: expected FAMILY:ARGS")))?;
        let parts: Vec<&str> = rest.split(',').collect();
        let bad = || AppError::Usage(format!("code {s:?}: bad arguments for {family}"));
        let num = |i: usize| -> AppResult<usize> { parts.get(i).and_then(|x| x.parse().ok()).ok_or_else(bad) };
        let spec = match (family, parts.len()) {
            ("toric", 1) => CodeSpec::Toric { l: num(0)? },
            ("hp-cyclic", 4) => CodeSpec::HpCyclic { h1: parts[0].into(), n1: num(1)?, h2: parts[2].into(), n2: num(3)? },
            ("dt", 3) => CodeSpec::DebierreTurban { l: num(0)?, n1: num(1)?, n2: num(2)? },
            ("gallager", 4) => CodeSpec::Gallager { h: num(0)?, v: num(1)?, nc: num(2)?, seed: num(3)? as u64 },
            ("gauge", 2) => CodeSpec::Gauge { inner_l: num(0)?, layers: num(1)? },
            ("file", _) => CodeSpec::File { path: rest.into() },
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

/// Flags shared by experiment commands; each overrides the config file.
#[derive(Debug, Clone, Default, Args)]
pub struct ExperimentArgs {
    /// JSON experiment configuration.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Code(s), e.g. `toric:3`; repeat for a family.
    #[arg(long = "code")]
    pub codes: Vec<String>,
    /// X, Z or full.
    #[arg(long)]
    pub sector: Option<String>,
    /// Comma-separated error rates.
    #[arg(long = "p", value_delimiter = ',')]
    pub p_grid: Vec<f64>,
    /// Comma-separated inverse temperatures (default: Nishimori).
    #[arg(long = "beta", value_delimiter = ',')]
    pub beta_grid: Vec<f64>,
    #[arg(long)]
    pub trials: Option<u64>,
    #[arg(long)]
    pub samples: Option<u64>,
    #[arg(long)]
    pub sweeps: Option<usize>,
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Extra inverse temperatures for replica exchange.
    #[arg(long, value_delimiter = ',')]
    pub tempering: Vec<f64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub spin_budget: Option<usize>,
    #[arg(long)]
    pub coset_budget: Option<usize>,
    /// Output file; a bare file name goes under $CODEGLASS_OUT when set.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write the Monte Carlo trace of the first sample.
    #[arg(long)]
    pub trace: bool,
}

impl ExperimentArgs {
    /// The config file (or defaults) with every given flag applied.
    pub fn resolve(&self) -> AppResult<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(path) => ExperimentConfig::load(path)?,
            None => ExperimentConfig::default(),
        };
        if !self.codes.is_empty() {
            cfg.codes = self.codes.iter().map(|s| s.parse()).collect::<AppResult<_>>()?;
        }
        if let Some(s) = &self.sector {
            cfg.sector = s.clone();
        }
        if !self.p_grid.is_empty() {
            cfg.p_grid = self.p_grid.clone();
        }
        if !self.beta_grid.is_empty() {
            cfg.beta_grid = self.beta_grid.clone();
        }
        if !self.tempering.is_empty() {
            cfg.tempering = self.tempering.clone();
        }
        macro_rules! take {
            ($($flag:ident => $field:ident),*) => { $(if let Some(v) = self.$flag { cfg.$field = v; })* };
        }
        take!(trials => trials, samples => samples, sweeps => sweeps, seed => seed);
        if let Some(v) = self.burn_in {
            cfg.burn_in = Some(v);
        }
        if let Some(v) = self.spin_budget {
            cfg.budget.spin_log2 = v;
        }
        if let Some(v) = self.coset_budget {
            cfg.budget.coset_log2 = v;
        }
        if self.out.is_some() {
            cfg.output = self.out.clone();
        }
        cfg.trace |= self.trace;
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SuiteArg {
    Duality,
    Selfdual,
    Nishimori,
    Bounds,
    Expansion,
    All,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    pub suite: SuiteArg,
    #[command(flatten)]
    pub experiment: ExperimentArgs,
}

#[derive(Debug, Subcommand)]
pub enum DecodeCommand {
    /// Success curves over a family and their crossing.
    Sweep(ExperimentArgs),
}

#[derive(Debug, Subcommand)]
pub enum McCommand {
    /// Energy and specific heat per disorder sample.
    Run(ExperimentArgs),
}

/// What a command produced.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub stdout: String,
    /// False when a check failed (exit status 1).
    pub passed: bool,
    pub files: Vec<PathBuf>,
}

impl Outcome {
    fn text(stdout: String) -> Self {
        Self { stdout, passed: true, files: Vec::new() }
    }
}

fn summary(spec: &CodeSpec, code: &StabilizerCode, cap: usize) -> AppResult<CodeSummary> {
    Ok(CodeSummary { label: spec.label(), params: code.params(cap)?.to_string() })
}

/// Where a command's main output goes, if anywhere.
fn output_path(cfg: &ExperimentConfig, default_name: &str) -> Option<PathBuf> {
    let dir = std::env::var_os(OUT_DIR_VAR).map(PathBuf::from);
    match (&cfg.output, dir) {
        (Some(p), Some(d)) if p.is_relative() && p.parent().is_none_or(|x| x.as_os_str().is_empty()) => Some(d.join(p)),
        (Some(p), _) => Some(p.clone()),
        (None, Some(d)) => Some(d.join(default_name)),
        (None, None) => None,
    }
}

pub fn execute(cli: Cli) -> AppResult<Outcome> {
    let threads = cli.threads;
    driver::with_threads(threads, move || match cli.command {
        Command::Code(c) => code_command(c),
        Command::Check(args) => check_command(args),
        Command::Decode(DecodeCommand::Sweep(args)) => sweep_command(args),
        Command::Mc(McCommand::Run(args)) => mc_command(args),
    })
}

fn code_command(cmd: CodeCommand) -> AppResult<Outcome> {
    match cmd {
        CodeCommand::Build { family, cap } => {
            let code = CodeSpec::from(family).build()?;
            Ok(Outcome::text(format!("{}\n", code.params(cap)?)))
        }
        CodeCommand::Info { family, cap } => {
            let spec = CodeSpec::from(family);
            let code = spec.build()?;
            Ok(Outcome::text(serde_json::to_string_pretty(&code_info(&spec, &code, cap)?)? + "\n"))
        }
        CodeCommand::Save { out, family } => {
            let spec = CodeSpec::from(family);
            let code = spec.build()?;
            let mut meta = BTreeMap::new();
            meta.insert("label".into(), spec.label());
            meta.insert("spec".into(), serde_json::to_string(&spec)?);
            CodeFile::from_code(&code, meta).save(&out)?;
            Ok(Outcome { stdout: format!("wrote {}\n", out.display()), passed: true, files: vec![out] })
        }
        CodeCommand::Load { path, cap } => {
            let code = CodeFile::load(&path)?.to_code()?;
            Ok(Outcome::text(format!("{}\n", code.params(cap)?)))
        }
    }
}

#[derive(Debug, Serialize)]
struct SectorInfo {
    sector: String,
    bits: usize,
    theta_rank: usize,
    k: usize,
    syndrome_rank: usize,
}

#[derive(Debug, Serialize)]
struct CodeInfo {
    label: String,
    params: String,
    n: usize,
    k: usize,
    d: Option<usize>,
    d_exact: bool,
    rate: f64,
    generators: usize,
    redundancy: usize,
    css: bool,
    sectors: Vec<SectorInfo>,
}

fn code_info(spec: &CodeSpec, code: &StabilizerCode, cap: usize) -> AppResult<CodeInfo> {
    let params = code.params(cap)?;
    let sectors = code
        .sectors()
        .into_iter()
        .map(|s| {
            let p = code.sector(s)?;
            Ok(SectorInfo {
                sector: s.to_string(),
                bits: p.bits(),
                theta_rank: p.theta().rank(),
                k: p.k(),
                syndrome_rank: p.syndrome_rank(),
            })
        })
        .collect::<AppResult<Vec<_>>>()?;
    Ok(CodeInfo {
        label: spec.label(),
        params: params.to_string(),
        n: params.n,
        k: params.k,
        d: params.d,
        d_exact: params.d_exact,
        rate: params.rate(),
        generators: code.num_generators(),
        redundancy: code.redundancy(),
        css: code.is_css(),
        sectors,
    })
}

fn check_command(args: CheckArgs) -> AppResult<Outcome> {
    let cfg = args.experiment.resolve()?;
    let spec = &cfg.codes[0];
    let code = spec.build()?;
    let problem = code.sector(cfg.sector()?)?;
    let suites: Vec<Suite> = match args.suite {
        SuiteArg::Duality => vec![Suite::Duality],
        SuiteArg::Selfdual => vec![Suite::SelfDual],
        SuiteArg::Nishimori => vec![Suite::Nishimori],
        SuiteArg::Bounds => vec![Suite::Bounds],
        SuiteArg::Expansion => vec![Suite::Expansion],
        SuiteArg::All => Suite::ALL.to_vec(),
    };
    // Checks favour short runs: cap the default sample count.
    let samples = if args.experiment.samples.is_some() || args.experiment.config.is_some() { cfg.samples } else { 10 };
    let inputs =
        CheckInputs { code: &code, problem: &problem, p_grid: &cfg.p_grid, seed: cfg.seed, samples, budget: cfg.budget() };
    let mut records = Vec::new();
    for s in suites {
        records.extend(checks::run(s, &inputs)?);
    }
    let mut stdout = String::new();
    for r in &records {
        stdout.push_str(&format!(
            "{} {}/{}: residual {:.3e} (tolerance {:.1e})\n",
            if r.passed { "PASS" } else { "FAIL" },
            r.suite,
            r.name,
            r.residual,
            r.tolerance
        ));
    }
    let passed = checks::all_passed(&records);
    let mut files = Vec::new();
    if let Some(path) = output_path(&cfg, "check.json") {
        let header = Header::new("check", &cfg, vec![summary(spec, &code, cfg.distance_cap)?]);
        report::write_file(&path, &report::json_string(&header, &records)?)?;
        files.push(path);
    }
    Ok(Outcome { stdout, passed, files })
}

#[derive(Debug, Serialize)]
struct SweepRow {
    code: String,
    n: usize,
    k: usize,
    p: f64,
    beta: f64,
    trials: u64,
    successes: u64,
    p_succ: f64,
    stderr: f64,
    max_fraction: f64,
}

#[derive(Debug, Serialize)]
struct CrossingSummary {
    pairwise: Vec<f64>,
    median: Option<f64>,
    spread: Option<f64>,
    diagnostic: String,
    p_conjecture: f64,
}

fn sweep_command(args: ExperimentArgs) -> AppResult<Outcome> {
    let cfg = args.resolve()?;
    if !cfg.beta_grid.is_empty() {
        return Err(AppError::Usage("decode sweep decodes at the Nishimori temperature; drop --beta".into()));
    }
    let sector = cfg.sector()?;
    let budget = cfg.budget();
    let mut family = Vec::new();
    let mut summaries = Vec::new();
    let mut sizes = Vec::new();
    for spec in &cfg.codes {
        let code = spec.build()?;
        summaries.push(summary(spec, &code, cfg.distance_cap)?);
        sizes.push((code.n(), code.k()));
        family.push((spec.label(), code.sector(sector)?));
    }
    let scan = driver::threshold_scan(&family, &cfg.p_grid, cfg.trials, cfg.seed, &budget)?;
    let mut rows = Vec::new();
    for (curve, &(n, k)) in scan.curves.iter().zip(&sizes) {
        for (p, est) in &curve.points {
            rows.push(SweepRow {
                code: curve.label.clone(),
                n,
                k,
                p: *p,
                beta: nishimori_beta(*p)?,
                trials: est.trials,
                successes: est.successes,
                p_succ: est.mean,
                stderr: est.stderr,
                max_fraction: est.mean_max_fraction,
            });
        }
    }
    let crossing = CrossingSummary {
        pairwise: scan.crossing.as_ref().map(|c| c.pairwise.clone()).unwrap_or_default(),
        median: scan.crossing.as_ref().map(|c| c.median),
        spread: scan.crossing.as_ref().map(|c| c.spread),
        diagnostic: scan.diagnostic.clone(),
        p_conjecture: codeglass_core::analysis::conjectured_pc(),
    };
    let header = Header::new("decode sweep", &cfg, summaries);
    let csv = report::csv_string(&header, &rows)?;
    let mut stdout = String::new();
    let mut files = Vec::new();
    match output_path(&cfg, "sweep.csv") {
        Some(path) => {
            report::write_file(&path, &csv)?;
            let json_path = path.with_extension("crossing.json");
            report::write_file(&json_path, &report::json_string(&header, &crossing)?)?;
            files.push(path);
            files.push(json_path);
        }
        None => stdout.push_str(&csv),
    }
    match crossing.median {
        Some(m) => stdout.push_str(&format!(
            "crossing: {m:.4} (spread {:.4}, pairwise {:?}); H2(p)=1/2 at {:.4}\n",
            crossing.spread.unwrap_or(0.0),
            crossing.pairwise,
            crossing.p_conjecture
        )),
        None => stdout.push_str(&format!("no crossing: {}\n", crossing.diagnostic)),
    }
    Ok(Outcome { stdout, passed: true, files })
}

#[derive(Debug, Serialize)]
struct McRow {
    code: String,
    p: f64,
    beta: f64,
    sample: u64,
    energy: f64,
    energy_stderr: f64,
    heat: f64,
    heat_stderr: f64,
    tau: f64,
    burn_in: usize,
}

#[derive(Debug, Serialize)]
struct TraceRow {
    sweep: usize,
    energy: f64,
    observable: f64,
}

fn mc_command(args: ExperimentArgs) -> AppResult<Outcome> {
    use codeglass_core::wegner::WegnerModel;
    use rayon::prelude::*;

    let cfg = args.resolve()?;
    let spec = &cfg.codes[0];
    let code = spec.build()?;
    let problem = code.sector(cfg.sector()?)?;
    let model = WegnerModel::uniform(problem.theta().clone());
    let schedule = Schedule { sweeps: cfg.sweeps, burn_in: cfg.burn_in, tempering: cfg.tempering.clone() };
    if cfg.samples == 0 || cfg.sweeps < montecarlo::BLOCKS {
        return Err(AppError::Usage(format!("need samples ≥ 1 and sweeps ≥ {}", montecarlo::BLOCKS)));
    }
    let mut rows = Vec::new();
    let mut stdout = String::new();
    for (pi, &p) in cfg.p_grid.iter().enumerate() {
        let betas = if cfg.beta_grid.is_empty() { vec![nishimori_beta(p)?] } else { cfg.beta_grid.clone() };
        for (bi, &beta) in betas.iter().enumerate() {
            let point_seed = codeglass_core::decoder::scan_point_seed(cfg.seed, pi, bi);
            let per_sample = (0..cfg.samples)
                .into_par_iter()
                .map(|i| {
                    let e = codeglass_core::decoder::sample_bits(p, problem.bits(), &mut rng::substream(point_seed, i, 0));
                    let (u, c) =
                        montecarlo::estimate_energy_and_cv(&model, &e, beta, &schedule, rng::substream(point_seed, i, 1))?;
                    Ok(McRow {
                        code: spec.label(),
                        p,
                        beta,
                        sample: i,
                        energy: u.mean,
                        energy_stderr: u.stderr,
                        heat: c.mean,
                        heat_stderr: c.stderr,
                        tau: u.tau,
                        burn_in: u.burn_in,
                    })
                })
                .collect::<codeglass_core::Result<Vec<_>>>()?;
            let heats: Vec<f64> = per_sample.iter().map(|r| r.heat).collect();
            let (mean, err) = montecarlo::mean_and_error(&heats);
            let bound = montecarlo::specific_heat_bound(problem.bits(), nishimori_beta(p)?);
            stdout.push_str(&format!(
                "p={p} beta={beta:.6}: [C] = {mean:.4} ± {err:.4}; bound at beta_p {bound:.4}\n"
            ));
            rows.extend(per_sample);
        }
    }
    let header = Header::new("mc run", &cfg, vec![summary(spec, &code, cfg.distance_cap)?]);
    let csv = report::csv_string(&header, &rows)?;
    let mut files = Vec::new();
    match output_path(&cfg, "mc.csv") {
        Some(path) => {
            report::write_file(&path, &csv)?;
            files.push(path);
        }
        None => stdout = csv + &stdout,
    }
    if cfg.trace {
        let p = cfg.p_grid[0];
        let beta = cfg.beta_grid.first().copied().unwrap_or(nishimori_beta(p)?);
        let point_seed = codeglass_core::decoder::scan_point_seed(cfg.seed, 0, 0);
        let e = codeglass_core::decoder::sample_bits(p, problem.bits(), &mut rng::substream(point_seed, 0, 0));
        let burn_in = schedule.burn_in.unwrap_or(0);
        let m = problem.dual_logicals().rows().checked_sub(1).map(|_| problem.dual_logicals().row(0));
        let trace = montecarlo::metropolis_run(
            &model,
            &e,
            m.as_ref(),
            beta,
            cfg.sweeps + burn_in,
            burn_in,
            rng::substream(point_seed, 0, 2),
        )?;
        let trace_rows: Vec<TraceRow> = trace
            .energy
            .iter()
            .zip(&trace.observable)
            .enumerate()
            .map(|(i, (&energy, &observable))| TraceRow { sweep: burn_in + i, energy, observable })
            .collect();
        let path = output_path(&cfg, "mc.csv").unwrap_or_else(|| PathBuf::from("mc.csv")).with_extension("trace.csv");
        report::write_file(&path, &report::csv_string(&header, &trace_rows)?)?;
        files.push(path);
    }
    Ok(Outcome { stdout, passed: true, files })
}

/// Parses `args`, runs, prints and returns the exit status.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match execute(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            for f in &out.files {
                eprintln!("wrote {}", f.display());
            }
            if out.passed {
                0
            } else {
                1
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
