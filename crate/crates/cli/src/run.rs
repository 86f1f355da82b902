//! Running a validated experiment and writing its files.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use qwalk::ctqw::{ctqw_distribution, HamiltonianSpec, PositionState};
use qwalk::dtqw::dtqw_evolve;
use qwalk::generic::GenericWalk;
use qwalk::state::{initial_particle_state, measure_position};
use qwalk::Distribution;
use serde::Serialize;
use serde_json::json;

use crate::config::{Experiment, ExperimentConfig, Format, RunKind};
use crate::error::CliError;

#[derive(Debug, Clone)]
pub struct RunOutcome {
    pub experiment: Experiment,
    pub distribution: Distribution,
    pub elapsed_seconds: f64,
}

/// Moments that go into both output formats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Summary {
    pub norm_residual: f64,
    pub mean: f64,
    pub variance: f64,
}

impl RunOutcome {
    pub fn summary(&self) -> Summary {
        summarize(&self.distribution)
    }
}

pub fn summarize(d: &Distribution) -> Summary {
    Summary {
        norm_residual: (d.total() - 1.0).abs(),
        mean: d.mean(),
        variance: d.variance(),
    }
}

/// Final position distribution of `kind`.
pub fn simulate(kind: &RunKind) -> Result<Distribution, CliError> {
    Ok(match kind {
        RunKind::Dtqw {
            lattice,
            steps,
            coin,
            init,
            backend,
        } => {
            let psi = initial_particle_state(init.0, init.1, *lattice);
            measure_position(&dtqw_evolve(&psi, *coin, *steps, (*backend).into())?)
        }
        RunKind::Ctqw {
            lattice,
            time,
            gamma,
        } => {
            let spec = HamiltonianSpec::new(*gamma, *lattice)?;
            ctqw_distribution(&spec, *time, &PositionState::delta_peak(*lattice, 0)?)?
        }
        RunKind::Generic {
            lattice,
            steps,
            coin,
            init,
            resource,
            policy,
        } => {
            let psi = initial_particle_state(init.0, init.1, *lattice);
            let mut walk = GenericWalk::new(*resource, (*policy).into());
            if let Some(coin) = coin {
                walk = walk.with_coin(*coin);
            }
            walk.evolve(&psi, *steps)?
        }
    })
}

pub fn run(experiment: &Experiment) -> Result<RunOutcome, CliError> {
    let start = Instant::now();
    let distribution = simulate(&experiment.kind)?;
    Ok(RunOutcome {
        experiment: experiment.clone(),
        distribution,
        elapsed_seconds: start.elapsed().as_secs_f64(),
    })
}

/// `x,probability`, sites ascending, shortest round-trip floats.
pub fn render_csv(d: &Distribution) -> String {
    let mut out = String::with_capacity(24 * d.probabilities().len() + 16);
    out.push_str("x,probability\n");
    for (x, p) in d.iter() {
        writeln!(out, "{x},{p:?}").unwrap();
    }
    out
}

#[derive(Serialize)]
struct Site {
    x: i64,
    probability: f64,
}

/// The CSV rows plus config and moments. No timing, so reruns are byte-identical.
pub fn render_json(outcome: &RunOutcome) -> String {
    let sites: Vec<Site> = outcome
        .distribution
        .iter()
        .map(|(x, probability)| Site { x, probability })
        .collect();
    let doc = json!({
        "config": outcome.experiment.resolved_config(),
        "summary": outcome.summary(),
        "distribution": sites,
    });
    let mut s = serde_json::to_string_pretty(&doc).unwrap();
    s.push('\n');
    s
}

pub fn render_sidecar(outcome: &RunOutcome) -> String {
    let s = outcome.summary();
    let doc = json!({
        "config": outcome.experiment.resolved_config(),
        "norm_residual": s.norm_residual,
        "mean": s.mean,
        "variance": s.variance,
        "sites": outcome.distribution.probabilities().len(),
        "wall_clock_seconds": outcome.elapsed_seconds,
    });
    let mut out = serde_json::to_string_pretty(&doc).unwrap();
    out.push('\n');
    out
}

/// Relative paths land in `dir` when one is given.
pub fn resolve_path(path: &Path, dir: Option<&Path>) -> PathBuf {
    match dir {
        Some(d) if path.is_relative() => d.join(path),
        _ => path.to_path_buf(),
    }
}

/// `out.csv` -> `out.meta.json`.
pub fn sidecar_path(output: &Path) -> PathBuf {
    output.with_extension("meta.json")
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        std::fs::create_dir_all(parent)
            .map_err(|e| CliError::io(format!("creating {}", parent.display()), e))?;
    }
    std::fs::write(path, contents).map_err(|e| CliError::io(format!("writing {}", path.display()), e))
}

/// Write the distribution and its sidecar; returns the distribution path.
pub fn write_outcome(outcome: &RunOutcome, dir: Option<&Path>) -> Result<PathBuf, CliError> {
    let path = resolve_path(&outcome.experiment.output, dir);
    let body = match outcome.experiment.format {
        Format::Csv => render_csv(&outcome.distribution),
        Format::Json => render_json(outcome),
    };
    write_file(&path, &body)?;
    write_file(&sidecar_path(&path), &render_sidecar(outcome))?;
    Ok(path)
}

/// Validate, run and write in one go.
pub fn run_config(config: &ExperimentConfig, dir: Option<&Path>) -> Result<(RunOutcome, PathBuf), CliError> {
    let experiment = config.validate()?;
    let outcome = run(&experiment)?;
    let path = write_outcome(&outcome, dir)?;
    Ok((outcome, path))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Model;

    #[test]
    fn csv_layout() {
        let lattice = qwalk::Lattice::guarded(2);
        let d = Distribution::from_probabilities(lattice, vec![0.0, 0.25, 0.5, 0.25, 0.0]).unwrap();
        assert_eq!(
            render_csv(&d),
            "x,probability\n-2,0.0\n-1,0.25\n0,0.5\n1,0.25\n2,0.0\n"
        );
    }

    #[test]
    fn csv_floats_round_trip() {
        let cfg = ExperimentConfig {
            model: Some(Model::Dtqw),
            steps: Some(25),
            theta: Some(0.3),
            ..Default::default()
        };
        let outcome = run(&cfg.validate().unwrap()).unwrap();
        let csv = render_csv(&outcome.distribution);
        let parsed: Vec<f64> = csv
            .lines()
            .skip(1)
            .map(|l| l.split_once(',').unwrap().1.parse().unwrap())
            .collect();
        assert_eq!(parsed, outcome.distribution.probabilities());
    }

    #[test]
    fn sidecar_naming() {
        assert_eq!(sidecar_path(Path::new("a/b.csv")), PathBuf::from("a/b.meta.json"));
        assert_eq!(resolve_path(Path::new("b.csv"), Some(Path::new("d"))), PathBuf::from("d/b.csv"));
        assert_eq!(resolve_path(Path::new("/x/b.csv"), Some(Path::new("d"))), PathBuf::from("/x/b.csv"));
    }
}
