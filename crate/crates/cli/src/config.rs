//! Experiment configuration: flat key-value files (TOML, or JSON sidecars) merged
//! with command-line flags, then validated into a typed [`Experiment`].
//!
//! | key | models | meaning | default |
//! |-----|--------|---------|---------|
//! | `model` | all | `dtqw`, `ctqw` or `generic` | required |
//! | `steps` | dtqw, generic | number of steps | required |
//! | `time` | ctqw | evolution time | required |
//! | `gamma` | ctqw | transition rate | `1` |
//! | `half_width` | all | window is `[-h, h]` | `steps + 1` (ctqw: `64`) |
//! | `boundary` | all | `guarded` or `periodic` | `guarded` |
//! | `xi`, `theta`, `zeta` | dtqw, generic | coin angles | `0`, `pi/4`, `0` |
//! | `delta`, `eta` | dtqw, generic | initial coin state | `pi/4`, `pi/2` |
//! | `theta_u`, `gamma_u` | generic | resource angles | `pi/4`, `0` |
//! | `policy` | generic | `keep-coherent`, `trace-out`, `post-select` | `trace-out` |
//! | `interleave_coin` | generic | apply the coin before every `U_C` | `false` |
//! | `backend` | dtqw | `permutation` or `momentum` | `permutation` |
//! | `output` | all | distribution file path | `<model>.<format>` |
//! | `format` | all | `csv` or `json` | `csv` |
//!
//! Angles are radians, given as numbers or as expressions such as `"5pi/12"`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::fmt;
use std::path::{Path, PathBuf};

use qwalk::dtqw::{CoinParams, ShiftBackend};
use qwalk::generic::{DisposalPolicy, ResourceParams};
use qwalk::{Boundary, Lattice};
use serde::{Deserialize, Deserializer, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Dtqw,
    Ctqw,
    Generic,
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::Dtqw => "dtqw",
            Model::Ctqw => "ctqw",
            Model::Generic => "generic",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BoundaryArg {
    Guarded,
    Periodic,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::Guarded => Boundary::Guarded,
            BoundaryArg::Periodic => Boundary::Periodic,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyArg {
    KeepCoherent,
    TraceOut,
    PostSelect,
}

impl From<PolicyArg> for DisposalPolicy {
    fn from(p: PolicyArg) -> Self {
        match p {
            PolicyArg::KeepCoherent => DisposalPolicy::KeepCoherent,
            PolicyArg::TraceOut => DisposalPolicy::TraceOut,
            PolicyArg::PostSelect => DisposalPolicy::PostSelect,
        }
    }
}

impl From<DisposalPolicy> for PolicyArg {
    fn from(p: DisposalPolicy) -> Self {
        match p {
            DisposalPolicy::KeepCoherent => PolicyArg::KeepCoherent,
            DisposalPolicy::TraceOut => PolicyArg::TraceOut,
            DisposalPolicy::PostSelect => PolicyArg::PostSelect,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum BackendArg {
    Permutation,
    Momentum,
}

impl From<BackendArg> for ShiftBackend {
    fn from(b: BackendArg) -> Self {
        match b {
            BackendArg::Permutation => ShiftBackend::Permutation,
            BackendArg::Momentum => ShiftBackend::MomentumPhase,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum, Default)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Parse `1.3`, `pi`, `-pi/3`, `5pi/12`, `5*pi/12`, `0.5pi`.
pub fn parse_angle(text: &str) -> Result<f64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let s = s.to_ascii_lowercase();
    if let Ok(v) = s.parse::<f64>() {
        return Ok(v);
    }
    let bad = || format!("cannot parse angle `{text}` (use radians or e.g. `5pi/12`)");
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n, d.parse::<f64>().map_err(|_| bad())?),
        None => (s.as_str(), 1.0),
    };
    let coeff = num.strip_suffix("pi").ok_or_else(bad)?;
    let coeff = coeff.strip_suffix('*').unwrap_or(coeff);
    let factor = match coeff {
        "" | "+" => 1.0,
        "-" => -1.0,
        c => c.parse::<f64>().map_err(|_| bad())?,
    };
    if den == 0.0 {
        return Err(bad());
    }
    Ok(factor * PI / den)
}

fn angle_field<'de, D: Deserializer<'de>>(d: D) -> Result<Option<f64>, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Number(f64),
        Text(String),
    }
    match Option::<Raw>::deserialize(d)? {
        None => Ok(None),
        Some(Raw::Number(v)) => Ok(Some(v)),
        Some(Raw::Text(t)) => parse_angle(&t).map(Some).map_err(serde::de::Error::custom),
    }
}

/// Every field is optional so files and flags can be layered.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize, clap::Args)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[arg(skip)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub model: Option<Model>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub time: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub half_width: Option<usize>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub boundary: Option<BoundaryArg>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "angle_field", skip_serializing_if = "Option::is_none")]
    pub xi: Option<f64>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "angle_field", skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "angle_field", skip_serializing_if = "Option::is_none")]
    pub zeta: Option<f64>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "angle_field", skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "angle_field", skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "angle_field", skip_serializing_if = "Option::is_none")]
    pub theta_u: Option<f64>,
    #[arg(long, value_parser = parse_angle, allow_hyphen_values = true)]
    #[serde(default, deserialize_with = "angle_field", skip_serializing_if = "Option::is_none")]
    pub gamma_u: Option<f64>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub policy: Option<PolicyArg>,
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interleave_coin: Option<bool>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub backend: Option<BackendArg>,
    #[arg(long, short)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[arg(long, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

/// A metadata sidecar; only its `config` table is read back.
#[derive(Deserialize)]
struct SidecarConfig {
    config: ExperimentConfig,
}

impl ExperimentConfig {
    /// Read a TOML config, a JSON config, or the `config` table of a JSON sidecar.
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::io(format!("reading {}", path.display()), e))?;
        let is_json = path.extension().is_some_and(|e| e == "json");
        let parsed = if is_json {
            serde_json::from_str::<SidecarConfig>(&text)
                .map(|s| s.config)
                .or_else(|_| serde_json::from_str::<ExperimentConfig>(&text))
                .map_err(|e| e.to_string())
        } else {
            toml::from_str::<ExperimentConfig>(&text).map_err(|e| e.to_string())
        };
        parsed.map_err(|e| CliError::Config {
            field: "config".into(),
            message: format!("{}: {e}", path.display()),
        })
    }

    /// Fields set in `overrides` replace those in `self`.
    pub fn merged(mut self, overrides: &ExperimentConfig) -> Self {
        macro_rules! take {
            ($($f:ident),*) => { $( if overrides.$f.is_some() { self.$f = overrides.$f.clone(); } )* };
        }
        take!(
            model, steps, time, gamma, half_width, boundary, xi, theta, zeta, delta, eta,
            theta_u, gamma_u, policy, interleave_coin, backend, output, format
        );
        self
    }

    /// Check every present field against the engines' preconditions and fill in
    /// defaults.
    pub fn validate(&self) -> Result<Experiment, CliError> {
        let bad = |field: &str, message: String| CliError::Config {
            field: field.into(),
            message,
        };
        let model = self
            .model
            .ok_or_else(|| bad("model", "missing (dtqw, ctqw or generic)".into()))?;
        for (name, v) in [
            ("xi", self.xi),
            ("theta", self.theta),
            ("zeta", self.zeta),
            ("delta", self.delta),
            ("eta", self.eta),
            ("theta_u", self.theta_u),
            ("gamma_u", self.gamma_u),
            ("time", self.time),
            ("gamma", self.gamma),
        ] {
            if let Some(v) = v {
                if !v.is_finite() {
                    return Err(bad(name, format!("must be finite, got {v}")));
                }
            }
        }
        let boundary: Boundary = self.boundary.unwrap_or(BoundaryArg::Guarded).into();
        let format = self.format.unwrap_or_default();

        let walk_steps = || -> Result<usize, CliError> {
            self.steps
                .ok_or_else(|| bad("steps", format!("required for the {model} model")))
        };
        let lattice_for = |default_hw: usize, steps: Option<usize>| -> Result<Lattice, CliError> {
            let hw = self.half_width.unwrap_or(default_hw);
            let lattice =
                Lattice::new(hw, boundary).map_err(|e| bad("half_width", e.to_string()))?;
            if let Some(n) = steps {
                if !lattice.fits_steps(n) {
                    return Err(bad(
                        "steps",
                        format!("{n} steps exceed half_width - 1 = {} on a guarded lattice", hw as i64 - 1),
                    ));
                }
            }
            Ok(lattice)
        };
        let coin = CoinParams::new(
            self.xi.unwrap_or(0.0),
            self.theta.unwrap_or(FRAC_PI_4),
            self.zeta.unwrap_or(0.0),
        );
        let init = (self.delta.unwrap_or(FRAC_PI_4), self.eta.unwrap_or(FRAC_PI_2));

        let kind = match model {
            Model::Dtqw => {
                let steps = walk_steps()?;
                RunKind::Dtqw {
                    lattice: lattice_for(steps + 1, Some(steps))?,
                    steps,
                    coin,
                    init,
                    backend: self.backend.unwrap_or(BackendArg::Permutation),
                }
            }
            Model::Generic => {
                let steps = walk_steps()?;
                RunKind::Generic {
                    lattice: lattice_for(steps + 1, Some(steps))?,
                    steps,
                    coin: self.interleave_coin.unwrap_or(false).then_some(coin),
                    init,
                    resource: ResourceParams::new(
                        self.theta_u.unwrap_or(FRAC_PI_4),
                        self.gamma_u.unwrap_or(0.0),
                    ),
                    policy: self.policy.unwrap_or(PolicyArg::TraceOut),
                }
            }
            Model::Ctqw => {
                let time = self
                    .time
                    .ok_or_else(|| bad("time", "required for the ctqw model".into()))?;
                if time < 0.0 {
                    return Err(bad("time", format!("must be non-negative, got {time}")));
                }
                let gamma = self.gamma.unwrap_or(1.0);
                if gamma <= 0.0 {
                    return Err(bad("gamma", format!("must be positive, got {gamma}")));
                }
                RunKind::Ctqw {
                    lattice: lattice_for(64, None)?,
                    time,
                    gamma,
                }
            }
        };
        let output = self
            .output
            .clone()
            .unwrap_or_else(|| PathBuf::from(format!("{model}.{}", format.extension())));
        Ok(Experiment {
            kind,
            output,
            format,
        })
    }
}

/// A validated run.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub kind: RunKind,
    pub output: PathBuf,
    pub format: Format,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RunKind {
    Dtqw {
        lattice: Lattice,
        steps: usize,
        coin: CoinParams,
        init: (f64, f64),
        backend: BackendArg,
    },
    Ctqw {
        lattice: Lattice,
        time: f64,
        gamma: f64,
    },
    Generic {
        lattice: Lattice,
        steps: usize,
        coin: Option<CoinParams>,
        init: (f64, f64),
        resource: ResourceParams,
        policy: PolicyArg,
    },
}

impl RunKind {
    pub fn lattice(&self) -> &Lattice {
        match self {
            RunKind::Dtqw { lattice, .. }
            | RunKind::Ctqw { lattice, .. }
            | RunKind::Generic { lattice, .. } => lattice,
        }
    }
}

fn boundary_arg(b: Boundary) -> BoundaryArg {
    match b {
        Boundary::Guarded => BoundaryArg::Guarded,
        Boundary::Periodic => BoundaryArg::Periodic,
    }
}

impl Experiment {
    /// Fully resolved config with only the fields the model reads.
    pub fn resolved_config(&self) -> ExperimentConfig {
        let lattice = self.kind.lattice();
        let mut c = ExperimentConfig {
            half_width: Some(lattice.half_width()),
            boundary: Some(boundary_arg(lattice.boundary())),
            output: Some(self.output.clone()),
            format: Some(self.format),
            ..Default::default()
        };
        match &self.kind {
            RunKind::Dtqw {
                steps,
                coin,
                init,
                backend,
                ..
            } => {
                c.model = Some(Model::Dtqw);
                c.steps = Some(*steps);
                (c.xi, c.theta, c.zeta) = (Some(coin.xi), Some(coin.theta), Some(coin.zeta));
                (c.delta, c.eta) = (Some(init.0), Some(init.1));
                c.backend = Some(*backend);
            }
            RunKind::Ctqw { time, gamma, .. } => {
                c.model = Some(Model::Ctqw);
                c.time = Some(*time);
                c.gamma = Some(*gamma);
            }
            RunKind::Generic {
                steps,
                coin,
                init,
                resource,
                policy,
                ..
            } => {
                c.model = Some(Model::Generic);
                c.steps = Some(*steps);
                (c.delta, c.eta) = (Some(init.0), Some(init.1));
                (c.theta_u, c.gamma_u) = (Some(resource.theta_u), Some(resource.gamma_u));
                c.policy = Some(*policy);
                c.interleave_coin = Some(coin.is_some());
                if let Some(coin) = coin {
                    (c.xi, c.theta, c.zeta) = (Some(coin.xi), Some(coin.theta), Some(coin.zeta));
                }
            }
        }
        c
    }
}
