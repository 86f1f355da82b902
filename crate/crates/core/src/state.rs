//! Coin ⊗ position state vectors and position statistics shared by every engine.

use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::lattice::Lattice;

/// Tolerance on `|‖ψ‖² - 1|` accepted when a caller hands in raw amplitudes.
pub const NORM_TOL: f64 = 1e-10;

/// Coin label. `0` moves left under the standard shift, `1` moves right.
pub type Coin = usize;

/// Two-component coin ⊗ lattice wavefunction.
///
/// Storage is coin-major: all sites of coin `0`, then all sites of coin `1`.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    lattice: Lattice,
    amplitudes: Vec<Complex64>,
}

impl WalkState {
    /// Build from per-coin amplitude rows. The rows must match the lattice and
    /// the state must already be normalized.
    pub fn from_components(
        lattice: Lattice,
        coin0: Vec<Complex64>,
        coin1: Vec<Complex64>,
    ) -> Result<Self> {
        let n = lattice.sites();
        if coin0.len() != n || coin1.len() != n {
            return Err(WalkError::DegenerateInput(format!(
                "expected {n} amplitudes per coin, got {} and {}",
                coin0.len(),
                coin1.len()
            )));
        }
        let mut amplitudes = coin0;
        amplitudes.extend(coin1);
        let state = Self { lattice, amplitudes };
        let residual = (state.norm_sqr() - 1.0).abs();
        if residual > NORM_TOL {
            return Err(WalkError::DegenerateInput(format!(
                "state is not normalized (|norm² - 1| = {residual:e})"
            )));
        }
        Ok(state)
    }

    /// Particle at site `x` with coin vector `coin`, which must have unit norm.
    pub fn localized(lattice: Lattice, coin: [Complex64; 2], x: i64) -> Result<Self> {
        let i = lattice.index_of(x).ok_or_else(|| WalkError::InvalidParameter {
            name: "x",
            reason: format!("site {x} is outside the {lattice}"),
        })?;
        let n = lattice.sites();
        let mut coin0 = vec![Complex64::new(0.0, 0.0); n];
        let mut coin1 = coin0.clone();
        coin0[i] = coin[0];
        coin1[i] = coin[1];
        Self::from_components(lattice, coin0, coin1)
    }

    /// Basis state `|coin⟩ ⊗ |ψ_x⟩`.
    pub fn basis(lattice: Lattice, coin: Coin, x: i64) -> Result<Self> {
        let mut c = [Complex64::new(0.0, 0.0); 2];
        c[coin & 1] = Complex64::new(1.0, 0.0);
        Self::localized(lattice, c, x)
    }

    pub(crate) fn from_raw(lattice: Lattice, amplitudes: Vec<Complex64>) -> Self {
        debug_assert_eq!(amplitudes.len(), 2 * lattice.sites());
        Self { lattice, amplitudes }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Amplitude of `|coin⟩ ⊗ |ψ_x⟩`; zero outside the window.
    pub fn amplitude(&self, coin: Coin, x: i64) -> Complex64 {
        self.lattice
            .index_of(x)
            .map(|i| self.amplitudes[coin * self.lattice.sites() + i])
            .unwrap_or_default()
    }

    /// All sites of one coin component, ascending in `x`.
    pub fn component(&self, coin: Coin) -> &[Complex64] {
        let n = self.lattice.sites();
        &self.amplitudes[coin * n..(coin + 1) * n]
    }

    /// Coin-major flat amplitude vector.
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of finding the particle on storage index `i`.
    pub(crate) fn site_probability(&self, i: usize) -> f64 {
        let n = self.lattice.sites();
        self.amplitudes[i].norm_sqr() + self.amplitudes[n + i].norm_sqr()
    }

    pub(crate) fn check_guard(&self) -> Result<()> {
        self.lattice.check_guard(|i| self.site_probability(i))
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &WalkState) -> Result<f64> {
        self.lattice.ensure_same(&other.lattice)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Marginal probabilities of the two coin states.
    pub fn coin_marginal(&self) -> [f64; 2] {
        [0, 1].map(|c| self.component(c).iter().map(|a| a.norm_sqr()).sum())
    }
}

/// `[cos δ |0⟩ + e^{iη} sin δ |1⟩] ⊗ |ψ_0⟩`.
pub fn initial_particle_state(delta: f64, eta: f64, lattice: Lattice) -> WalkState {
    let coin = [
        Complex64::new(delta.cos(), 0.0),
        Complex64::from_polar(delta.sin(), eta),
    ];
    WalkState::localized(lattice, coin, 0).expect("the origin lies in every lattice")
}

/// Position probabilities with their first two moments.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution {
    lattice: Lattice,
    probabilities: Vec<f64>,
    mean: f64,
    variance: f64,
}

impl Distribution {
    /// Wrap raw per-site probabilities. Entries must be non-negative and sum to one.
    pub fn from_probabilities(lattice: Lattice, probabilities: Vec<f64>) -> Result<Self> {
        if probabilities.len() != lattice.sites() {
            return Err(WalkError::DegenerateInput(format!(
                "expected {} probabilities, got {}",
                lattice.sites(),
                probabilities.len()
            )));
        }
        if let Some(p) = probabilities.iter().find(|p| !(**p >= 0.0)) {
            return Err(WalkError::DegenerateInput(format!("negative probability {p}")));
        }
        let total: f64 = probabilities.iter().sum();
        if (total - 1.0).abs() > NORM_TOL {
            return Err(WalkError::DegenerateInput(format!(
                "probabilities sum to {total}, not 1"
            )));
        }
        Ok(Self::from_raw(lattice, probabilities))
    }

    pub(crate) fn from_raw(lattice: Lattice, probabilities: Vec<f64>) -> Self {
        let mean: f64 = lattice
            .positions()
            .zip(&probabilities)
            .map(|(x, p)| x as f64 * p)
            .sum();
        // Centered second moment; never negative.
        let variance = lattice
            .positions()
            .zip(&probabilities)
            .map(|(x, p)| (x as f64 - mean).powi(2) * p)
            .sum();
        Self {
            lattice,
            probabilities,
            mean,
            variance,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Per-site probabilities, ascending in `x`.
    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// `P_x`; zero outside the window.
    pub fn probability(&self, x: i64) -> f64 {
        self.lattice
            .index_of(x)
            .map(|i| self.probabilities[i])
            .unwrap_or(0.0)
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn total(&self) -> f64 {
        self.probabilities.iter().sum()
    }

    /// `(x, P_x)` pairs, ascending in `x`.
    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.lattice.positions().zip(self.probabilities.iter().copied())
    }

    /// Largest `|P_x - P_{-x}|`.
    pub fn parity_asymmetry(&self) -> f64 {
        let n = self.probabilities.len();
        (0..n)
            .map(|i| (self.probabilities[i] - self.probabilities[n - 1 - i]).abs())
            .fold(0.0, f64::max)
    }
}

/// `P_x = Σ_coin |ψ(coin, x)|²` together with mean and variance.
pub fn measure_position(state: &WalkState) -> Distribution {
    let n = state.lattice.sites();
    let probabilities = (0..n).map(|i| state.site_probability(i)).collect();
    Distribution::from_raw(state.lattice, probabilities)
}

/// `½ Σ_x |a_x - b_x|`.
pub fn total_variation_distance(a: &Distribution, b: &Distribution) -> Result<f64> {
    a.lattice.ensure_same(&b.lattice)?;
    let sum: f64 = a
        .probabilities
        .iter()
        .zip(&b.probabilities)
        .map(|(p, q)| (p - q).abs())
        .sum();
    Ok((0.5 * sum).clamp(0.0, 1.0))
}
