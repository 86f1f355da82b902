//! Spreading statistics: power-law fits and the `(1 - sin θ) N²` variance law.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use crate::dtqw::{dtqw_evolve, variance_prediction, CoinParams, ShiftBackend};
use crate::error::{Result, WalkError};
use crate::lattice::Lattice;
use crate::state::{initial_particle_state, measure_position};

/// Least-squares line through `(ln N, ln σ²)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ScalingFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub samples: Vec<(f64, f64)>,
}

/// Ordinary least squares on `ln σ²` against `ln N`.
///
/// Needs at least four samples, every `N ≥ 2` and every `σ² > 0`.
pub fn fit_scaling_exponent(samples: &[(f64, f64)]) -> Result<ScalingFit> {
    if samples.len() < 4 {
        return Err(WalkError::DegenerateInput(format!(
            "need at least 4 samples, got {}",
            samples.len()
        )));
    }
    if let Some((n, v)) = samples.iter().find(|(n, v)| !(*n >= 2.0) || !(*v > 0.0)) {
        return Err(WalkError::DegenerateInput(format!(
            "sample (N = {n}, σ² = {v}) is outside N ≥ 2, σ² > 0"
        )));
    }
    let xs: Vec<f64> = samples.iter().map(|(n, _)| n.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, v)| v.ln()).collect();
    let m = xs.len() as f64;
    let x_mean = xs.iter().sum::<f64>() / m;
    let y_mean = ys.iter().sum::<f64>() / m;
    let sxx: f64 = xs.iter().map(|x| (x - x_mean).powi(2)).sum();
    if sxx == 0.0 {
        return Err(WalkError::DegenerateInput("all N values coincide".into()));
    }
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - x_mean) * (y - y_mean)).sum();
    let syy: f64 = ys.iter().map(|y| (y - y_mean).powi(2)).sum();
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        (sxy * sxy / (sxx * syy)).clamp(0.0, 1.0)
    };
    Ok(ScalingFit {
        slope,
        intercept,
        r_squared,
        samples: samples.to_vec(),
    })
}

/// One line of the variance-law table.
#[derive(Debug, Clone, PartialEq)]
pub struct VarianceLawRow {
    pub theta: f64,
    pub measured: f64,
    pub predicted: f64,
    /// `|measured - predicted| / predicted`.
    pub relative_error: f64,
}

/// Variance after `steps` steps from `(|0⟩ + i|1⟩)/√2` with coin `(0, θ, 0)`.
pub fn symmetric_walk_variance(theta: f64, steps: usize) -> Result<f64> {
    let lattice = Lattice::guarded(steps + 1);
    let init = initial_particle_state(FRAC_PI_4, FRAC_PI_2, lattice);
    let out = dtqw_evolve(&init, CoinParams::new(0.0, theta, 0.0), steps, ShiftBackend::Permutation)?;
    Ok(measure_position(&out).variance())
}

/// Measured against predicted variance for every `θ` in `thetas`.
pub fn verify_variance_law(thetas: &[f64], steps: usize) -> Result<Vec<VarianceLawRow>> {
    thetas
        .iter()
        .map(|&theta| {
            let measured = symmetric_walk_variance(theta, steps)?;
            let predicted = variance_prediction(theta, steps);
            Ok(VarianceLawRow {
                theta,
                measured,
                predicted,
                relative_error: (measured - predicted).abs() / predicted,
            })
        })
        .collect()
}
