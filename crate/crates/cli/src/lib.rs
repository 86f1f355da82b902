//! Command-line driver for `qwalk`: single runs, comparisons, parameter sweeps
//! and the four-panel coin figure.

pub mod compare;
pub mod config;
mod error;
pub mod run;

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, PI};
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use qwalk::generic::ResourceParams;
use rayon::prelude::*;

pub use config::{Experiment, ExperimentConfig, Format, Model};
pub use error::CliError;
pub use run::RunOutcome;

#[derive(Debug, Parser)]
#[command(name = "qwalk", version, about = "Simulate one-dimensional quantum walks")]
pub struct Cli {
    /// Directory for relative output paths.
    #[arg(long, global = true, env = "QWALK_OUTPUT_DIR")]
    pub output_dir: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run a config file whose `model` key picks the walk.
    Run(RunArgs),
    /// Discrete-time coined walk.
    Dtqw(RunArgs),
    /// Continuous-time walk from a point at the origin.
    Ctqw(RunArgs),
    /// Resource-controlled shift walk.
    Generic(RunArgs),
    /// Compare two configs, or print a canned report.
    Compare(CompareArgs),
    /// Run many config files in parallel.
    Sweep(SweepArgs),
    /// Distributions for four coin settings after 100 steps.
    Fig1(Fig1Args),
}

#[derive(Debug, Clone, Args)]
pub struct RunArgs {
    /// TOML or JSON config (a `.meta.json` sidecar works too).
    #[arg(long, short)]
    pub config: Option<PathBuf>,
    #[command(flatten)]
    pub overrides: ExperimentConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Preset {
    /// Each disposal policy against the Hadamard walk.
    HadamardRetrieval,
    /// Resource-basis restrictions of the controlled shift.
    DtqwLimit,
    /// Coin-basis limit against the hopping Hamiltonian.
    CtqwLimit,
}

#[derive(Debug, Clone, Args)]
pub struct CompareArgs {
    /// Two config files.
    #[arg(num_args = 0..=2, conflicts_with = "preset")]
    pub configs: Vec<PathBuf>,
    #[arg(long, value_enum)]
    pub preset: Option<Preset>,
    /// hadamard-retrieval step count.
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
    /// dtqw-limit / ctqw-limit window.
    #[arg(long)]
    pub half_width: Option<usize>,
    #[arg(long, value_parser = config::parse_angle, allow_hyphen_values = true, default_value = "pi/4")]
    pub theta_u: f64,
    #[arg(long, value_parser = config::parse_angle, allow_hyphen_values = true, default_value = "0")]
    pub gamma_u: f64,
    #[arg(long, default_value_t = 0)]
    pub particle_basis: usize,
    #[arg(long, default_value_t = 10)]
    pub max_t: usize,
    /// Report file; stdout when absent.
    #[arg(long, short)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct SweepArgs {
    #[arg(required = true)]
    pub configs: Vec<PathBuf>,
    /// Worker threads; all cores when absent.
    #[arg(long, short)]
    pub jobs: Option<usize>,
    /// Applied on top of every file.
    #[command(flatten)]
    pub overrides: ExperimentConfig,
}

#[derive(Debug, Clone, Args)]
pub struct Fig1Args {
    #[arg(long, default_value_t = 100)]
    pub steps: usize,
}

/// The four coin panels `(label, xi, theta, zeta)`.
pub const FIG1_PANELS: [(&str, f64, f64, f64); 4] = [
    ("a", 0.0, PI / 12.0, 0.0),
    ("b", 0.0, FRAC_PI_4, 0.0),
    ("c", 0.0, FRAC_PI_3, 5.0 * PI / 12.0),
    ("d", 5.0 * PI / 12.0, FRAC_PI_3, 0.0),
];

/// Configs for the four panels, started from `(|0⟩ + i|1⟩)/√2`.
pub fn fig1_configs(steps: usize) -> Vec<ExperimentConfig> {
    FIG1_PANELS
        .iter()
        .map(|&(label, xi, theta, zeta)| ExperimentConfig {
            model: Some(Model::Dtqw),
            steps: Some(steps),
            xi: Some(xi),
            theta: Some(theta),
            zeta: Some(zeta),
            delta: Some(FRAC_PI_4),
            eta: Some(FRAC_PI_2),
            output: Some(PathBuf::from(format!("fig1_{label}.csv"))),
            ..Default::default()
        })
        .collect()
}

fn load(args: &RunArgs, model: Option<Model>) -> Result<ExperimentConfig, CliError> {
    let base = match &args.config {
        Some(path) => ExperimentConfig::from_file(path)?,
        None => ExperimentConfig::default(),
    };
    let mut cfg = base.merged(&args.overrides);
    if model.is_some() {
        cfg.model = model;
    }
    Ok(cfg)
}

fn report_run(out: &mut dyn Write, outcome: &RunOutcome, path: &Path) -> Result<(), CliError> {
    let s = outcome.summary();
    writeln!(
        out,
        "wrote {} ({} sites, mean {:.6}, variance {:.6}, norm residual {:.1e})",
        path.display(),
        outcome.distribution.probabilities().len(),
        s.mean,
        s.variance,
        s.norm_residual
    )
    .map_err(|e| CliError::io("writing to stdout", e))
}

fn emit_json(out: &mut dyn Write, value: &impl serde::Serialize, path: Option<PathBuf>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    match path {
        Some(p) => {
            run::write_file(&p, &text)?;
            writeln!(out, "wrote {}", p.display())
        }
        None => out.write_all(text.as_bytes()),
    }
    .map_err(|e| CliError::io("writing to stdout", e))
}

fn compare(args: &CompareArgs, dir: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let dest = args.output.as_deref().map(|p| run::resolve_path(p, dir));
    match args.preset {
        Some(Preset::HadamardRetrieval) => emit_json(out, &compare::hadamard_retrieval(args.steps)?, dest),
        Some(Preset::DtqwLimit) => emit_json(out, &compare::dtqw_limit(args.half_width.unwrap_or(8))?, dest),
        Some(Preset::CtqwLimit) => {
            let resource = ResourceParams::new(args.theta_u, args.gamma_u);
            let report = compare::ctqw_limit(
                resource,
                args.particle_basis,
                args.half_width.unwrap_or(32),
                args.max_t,
            )?;
            emit_json(out, &report, dest)
        }
        None => {
            let [a, b] = args.configs.as_slice() else {
                return Err(CliError::config("configs", "compare needs two config files or --preset"));
            };
            let a = ExperimentConfig::from_file(a)?.validate()?;
            let b = ExperimentConfig::from_file(b)?.validate()?;
            emit_json(out, &compare::compare_experiments(&a, &b)?, dest)
        }
    }
}

/// One sweep entry: the outcome and where it was written.
pub type SweepResult = Result<(RunOutcome, PathBuf), CliError>;

/// Run every config; each result is independent of the thread count.
pub fn sweep(
    configs: &[ExperimentConfig],
    jobs: Option<usize>,
    dir: Option<&Path>,
) -> Result<Vec<SweepResult>, CliError> {
    let experiments = configs.iter().map(|c| c.validate()).collect::<Result<Vec<_>, _>>()?;
    let mut seen = std::collections::BTreeSet::new();
    for e in &experiments {
        let p = run::resolve_path(&e.output, dir);
        if !seen.insert(p.clone()) {
            return Err(CliError::config("output", format!("{} is written by more than one config", p.display())));
        }
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::config("jobs", e.to_string()))?;
    Ok(pool.install(|| {
        experiments
            .par_iter()
            .map(|e| {
                let outcome = run::run(e)?;
                let path = run::write_outcome(&outcome, dir)?;
                Ok((outcome, path))
            })
            .collect()
    }))
}

fn sweep_command(args: &SweepArgs, dir: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let configs = args
        .configs
        .iter()
        .map(|path| {
            let mut cfg = ExperimentConfig::from_file(path)?.merged(&args.overrides);
            if cfg.output.is_none() {
                // Default to the config's own name so files don't collide.
                let stem = path.file_stem().unwrap_or_default().to_string_lossy();
                let stem = stem.strip_suffix(".meta").unwrap_or(&stem);
                let ext = cfg.format.unwrap_or_default().extension();
                cfg.output = Some(PathBuf::from(format!("{stem}.{ext}")));
            }
            Ok(cfg)
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let mut first_error = None;
    for (path, result) in args.configs.iter().zip(sweep(&configs, args.jobs, dir)?) {
        match result {
            Ok((outcome, written)) => report_run(out, &outcome, &written)?,
            Err(e) => {
                writeln!(out, "failed {}: {e}", path.display()).map_err(|e| CliError::io("writing to stdout", e))?;
                first_error.get_or_insert(e);
            }
        }
    }
    first_error.map_or(Ok(()), Err)
}

/// Dispatch a parsed command line, writing progress to `out`.
pub fn execute(cli: &Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let dir = cli.output_dir.as_deref();
    let single = |args: &RunArgs, model: Option<Model>, out: &mut dyn Write| {
        let (outcome, path) = run::run_config(&load(args, model)?, dir)?;
        report_run(out, &outcome, &path)
    };
    match &cli.command {
        Command::Run(a) => single(a, None, out),
        Command::Dtqw(a) => single(a, Some(Model::Dtqw), out),
        Command::Ctqw(a) => single(a, Some(Model::Ctqw), out),
        Command::Generic(a) => single(a, Some(Model::Generic), out),
        Command::Compare(a) => compare(a, dir, out),
        Command::Sweep(a) => sweep_command(a, dir, out),
        Command::Fig1(a) => {
            for cfg in fig1_configs(a.steps) {
                let (outcome, path) = run::run_config(&cfg, dir)?;
                report_run(out, &outcome, &path)?;
            }
            Ok(())
        }
    }
}
