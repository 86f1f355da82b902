//! The continuous-time walk `exp(iHt)` under the nearest-neighbour lattice Hamiltonian.
//!
//! `H(γ) = γ(2I - A)`, with `A` the adjacency matrix of the window. Periodic
//! windows are diagonalized by the Fourier basis (eigenvalue `2γ(1 - cos k)`),
//! guarded windows by the sine basis of the open chain. Both give the exact
//! propagator up to round-off.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Result, WalkError};
use crate::lattice::{Boundary, Lattice};
use crate::spectral::{FourierPlan, SineBasis};
use crate::state::{Distribution, NORM_TOL};

/// Coinless wavefunction over the sites of a window.
#[derive(Debug, Clone, PartialEq)]
pub struct PositionState {
    lattice: Lattice,
    amplitudes: Vec<Complex64>,
}

impl PositionState {
    /// Wrap normalized amplitudes, ascending in `x`.
    pub fn new(lattice: Lattice, amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.len() != lattice.sites() {
            return Err(WalkError::DegenerateInput(format!(
                "expected {} amplitudes, got {}",
                lattice.sites(),
                amplitudes.len()
            )));
        }
        let state = Self { lattice, amplitudes };
        let residual = (state.norm_sqr() - 1.0).abs();
        if residual > NORM_TOL {
            return Err(WalkError::DegenerateInput(format!(
                "state is not normalized (|norm² - 1| = {residual:e})"
            )));
        }
        Ok(state)
    }

    /// `|ψ_x⟩`.
    pub fn delta_peak(lattice: Lattice, x: i64) -> Result<Self> {
        let i = lattice.index_of(x).ok_or_else(|| WalkError::InvalidParameter {
            name: "x",
            reason: format!("site {x} is outside the {lattice}"),
        })?;
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); lattice.sites()];
        amplitudes[i] = Complex64::new(1.0, 0.0);
        Ok(Self { lattice, amplitudes })
    }

    pub(crate) fn from_raw(lattice: Lattice, amplitudes: Vec<Complex64>) -> Self {
        Self { lattice, amplitudes }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, x: i64) -> Complex64 {
        self.lattice
            .index_of(x)
            .map(|i| self.amplitudes[i])
            .unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn max_abs_diff(&self, other: &PositionState) -> Result<f64> {
        self.lattice.ensure_same(&other.lattice)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn distribution(&self) -> Distribution {
        Distribution::from_raw(
            self.lattice,
            self.amplitudes.iter().map(|a| a.norm_sqr()).collect(),
        )
    }
}

/// Hermitian nearest-neighbour generator
/// `on_site · I + hop · Σ|ψ_{x-1}⟩⟨ψ_x| + conj(hop) · Σ|ψ_{x+1}⟩⟨ψ_x|`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TightBinding {
    pub lattice: Lattice,
    pub on_site: f64,
    /// Amplitude carried from `x` to `x - 1`.
    pub hop: Complex64,
}

impl TightBinding {
    /// `out_x = on_site·ψ_x + hop·ψ_{x+1} + conj(hop)·ψ_{x-1}`.
    pub fn apply(&self, input: &[Complex64]) -> Vec<Complex64> {
        let l = &self.lattice;
        (0..l.sites())
            .map(|i| {
                let mut acc = input[i] * self.on_site;
                if let Some(j) = l.step(i, 1) {
                    acc += self.hop * input[j];
                }
                if let Some(j) = l.step(i, -1) {
                    acc += self.hop.conj() * input[j];
                }
                acc
            })
            .collect()
    }

    /// Dense matrix in the site basis.
    pub fn matrix(&self) -> DMatrix<Complex64> {
        let n = self.lattice.sites();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            m[(i, i)] += Complex64::new(self.on_site, 0.0);
            if let Some(j) = self.lattice.step(i, 1) {
                m[(i, j)] += self.hop;
            }
            if let Some(j) = self.lattice.step(i, -1) {
                m[(i, j)] += self.hop.conj();
            }
        }
        m
    }

    /// Diagonalize once; the result evolves any state for any time.
    pub fn propagator(&self) -> Propagator {
        let n = self.lattice.sites();
        let kind = match self.lattice.boundary() {
            Boundary::Periodic => {
                let plan = FourierPlan::new(n);
                let eigenvalues = (0..n)
                    .map(|m| {
                        let k = plan.wavenumber(m);
                        self.on_site + 2.0 * (self.hop * Complex64::from_polar(1.0, k)).re
                    })
                    .collect();
                SpectralKind::Fourier { plan, eigenvalues }
            }
            Boundary::Guarded => {
                let basis = SineBasis::new(n);
                let magnitude = self.hop.norm();
                let eigenvalues = basis
                    .eigenvalues()
                    .iter()
                    .map(|e| self.on_site + magnitude * e)
                    .collect();
                // Gauge e^{ijφ} maps the complex hopping onto the real open chain.
                let phase = self.hop.arg();
                let gauge = (0..n).map(|j| Complex64::from_polar(1.0, j as f64 * phase)).collect();
                SpectralKind::Sine {
                    basis,
                    eigenvalues,
                    gauge,
                }
            }
        };
        Propagator {
            lattice: self.lattice,
            kind,
        }
    }
}

/// Cached eigendecomposition of a [`TightBinding`] generator.
#[derive(Debug, Clone)]
pub struct Propagator {
    lattice: Lattice,
    kind: SpectralKind,
}

#[derive(Debug, Clone)]
enum SpectralKind {
    Fourier {
        plan: FourierPlan,
        eigenvalues: Vec<f64>,
    },
    Sine {
        basis: SineBasis,
        eigenvalues: Vec<f64>,
        gauge: Vec<Complex64>,
    },
}

impl Propagator {
    pub fn eigenvalues(&self) -> &[f64] {
        match &self.kind {
            SpectralKind::Fourier { eigenvalues, .. } | SpectralKind::Sine { eigenvalues, .. } => {
                eigenvalues
            }
        }
    }

    /// Apply `exp(iHt)` to raw site amplitudes. Negative `t` gives `exp(-iH|t|)`.
    pub fn evolve_raw(&self, amplitudes: &mut [Complex64], t: f64) {
        let phases: Vec<Complex64> = self
            .eigenvalues()
            .iter()
            .map(|e| Complex64::from_polar(1.0, e * t))
            .collect();
        match &self.kind {
            SpectralKind::Fourier { plan, .. } => plan.apply_diagonal(amplitudes, &phases),
            SpectralKind::Sine { basis, gauge, .. } => {
                for (a, g) in amplitudes.iter_mut().zip(gauge) {
                    *a *= g;
                }
                basis.apply_diagonal(amplitudes, &phases);
                for (a, g) in amplitudes.iter_mut().zip(gauge) {
                    *a *= g.conj();
                }
            }
        }
    }

    /// `exp(iHt) |state⟩`.
    pub fn evolve(&self, state: &PositionState, t: f64) -> Result<PositionState> {
        self.lattice.ensure_same(&state.lattice)?;
        let mut amplitudes = state.amplitudes.clone();
        self.evolve_raw(&mut amplitudes, t);
        Ok(PositionState::from_raw(self.lattice, amplitudes))
    }
}

/// Transition rate `γ` on a window.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HamiltonianSpec {
    pub gamma: f64,
    pub lattice: Lattice,
}

impl HamiltonianSpec {
    pub fn new(gamma: f64, lattice: Lattice) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite()) {
            return Err(WalkError::InvalidParameter {
                name: "gamma",
                reason: format!("transition rate must be positive and finite, got {gamma}"),
            });
        }
        Ok(Self { gamma, lattice })
    }

    /// Stencil `(-γ, 2γ, -γ)`.
    pub fn generator(&self) -> TightBinding {
        TightBinding {
            lattice: self.lattice,
            on_site: 2.0 * self.gamma,
            hop: Complex64::new(-self.gamma, 0.0),
        }
    }

    pub fn matrix(&self) -> DMatrix<Complex64> {
        self.generator().matrix()
    }

    pub fn propagator(&self) -> Propagator {
        self.generator().propagator()
    }
}

/// `out_x = γ(-in_{x-1} + 2 in_x - in_{x+1})`; guarded windows treat missing
/// neighbours as zero.
pub fn hamiltonian_apply(spec: &HamiltonianSpec, state: &[Complex64]) -> Result<Vec<Complex64>> {
    if state.len() != spec.lattice.sites() {
        return Err(WalkError::DegenerateInput(format!(
            "expected {} amplitudes, got {}",
            spec.lattice.sites(),
            state.len()
        )));
    }
    Ok(spec.generator().apply(state))
}

/// `exp(iHt) |state⟩` for `t ≥ 0`.
pub fn ctqw_evolve(spec: &HamiltonianSpec, t: f64, state: &PositionState) -> Result<PositionState> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(WalkError::InvalidParameter {
            name: "time",
            reason: format!("must be finite and non-negative, got {t}"),
        });
    }
    spec.propagator().evolve(state, t)
}

pub fn ctqw_distribution(
    spec: &HamiltonianSpec,
    t: f64,
    init: &PositionState,
) -> Result<Distribution> {
    Ok(ctqw_evolve(spec, t, init)?.distribution())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(v: &[Complex64]) -> Vec<f64> {
        v.iter().map(|a| a.re).collect()
    }

    #[test]
    fn stencil_on_delta_peak() {
        let spec = HamiltonianSpec::new(1.0, Lattice::guarded(2)).unwrap();
        let peak = PositionState::delta_peak(spec.lattice, 0).unwrap();
        let out = hamiltonian_apply(&spec, peak.amplitudes()).unwrap();
        assert_eq!(re(&out), vec![0.0, -1.0, 2.0, -1.0, 0.0]);
        assert!(out.iter().all(|a| a.im == 0.0));
    }

    #[test]
    fn zero_and_uniform_vectors() {
        let spec = HamiltonianSpec::new(1.0, Lattice::periodic(3)).unwrap();
        let zero = vec![Complex64::new(0.0, 0.0); 7];
        assert_eq!(hamiltonian_apply(&spec, &zero).unwrap(), zero);
        let uniform = vec![Complex64::new(0.3, -0.2); 7];
        assert!(hamiltonian_apply(&spec, &uniform)
            .unwrap()
            .iter()
            .all(|a| a.norm() == 0.0));
    }

    #[test]
    fn materialized_hamiltonian_is_hermitian_tridiagonal() {
        for lattice in [Lattice::guarded(4), Lattice::periodic(4)] {
            let h = HamiltonianSpec::new(0.7, lattice).unwrap().matrix();
            assert_eq!(h, h.adjoint());
            let n = lattice.sites();
            for i in 0..n {
                for j in 0..n {
                    let d = (i as i64 - j as i64).rem_euclid(n as i64);
                    let near = d == 0 || d == 1 || d == n as i64 - 1;
                    let wraps = (i as i64 - j as i64).abs() > 1;
                    if !near || (wraps && lattice.boundary() == Boundary::Guarded) {
                        assert_eq!(h[(i, j)], Complex64::new(0.0, 0.0));
                    }
                }
            }
            assert_eq!(h[(4, 3)], Complex64::new(-0.7, 0.0));
            assert_eq!(h[(4, 4)], Complex64::new(1.4, 0.0));
        }
    }

    #[test]
    fn periodic_eigenvalues_match_dispersion() {
        let spec = HamiltonianSpec::new(1.5, Lattice::periodic(5)).unwrap();
        let prop = spec.propagator();
        let plan = FourierPlan::new(11);
        for (m, e) in prop.eigenvalues().iter().enumerate() {
            let k = plan.wavenumber(m);
            assert!((e - 3.0 * (1.0 - k.cos())).abs() < 1e-14);
        }
    }

    #[test]
    fn zero_time_is_identity() {
        for lattice in [Lattice::guarded(6), Lattice::periodic(6)] {
            let spec = HamiltonianSpec::new(1.0, lattice).unwrap();
            let s = PositionState::delta_peak(lattice, 2).unwrap();
            let out = ctqw_evolve(&spec, 0.0, &s).unwrap();
            assert!(out.max_abs_diff(&s).unwrap() < 1e-14);
        }
    }

    #[test]
    fn negative_or_nan_time_rejected() {
        let spec = HamiltonianSpec::new(1.0, Lattice::guarded(2)).unwrap();
        let s = PositionState::delta_peak(spec.lattice, 0).unwrap();
        assert!(ctqw_evolve(&spec, -1.0, &s).is_err());
        assert!(ctqw_evolve(&spec, f64::NAN, &s).is_err());
    }

    #[test]
    fn non_positive_rate_rejected() {
        assert!(HamiltonianSpec::new(0.0, Lattice::guarded(2)).is_err());
        assert!(HamiltonianSpec::new(-1.0, Lattice::guarded(2)).is_err());
    }

    #[test]
    fn complex_hopping_guarded_propagator_matches_dense_exponential() {
        let gen = TightBinding {
            lattice: Lattice::guarded(4),
            on_site: 0.3,
            hop: Complex64::from_polar(0.8, 1.1),
        };
        let t = 0.9;
        let dense = (gen.matrix() * Complex64::new(0.0, t)).exp();
        let prop = gen.propagator();
        for i in 0..gen.lattice.sites() {
            let mut col = vec![Complex64::new(0.0, 0.0); gen.lattice.sites()];
            col[i] = Complex64::new(1.0, 0.0);
            prop.evolve_raw(&mut col, t);
            for (j, a) in col.iter().enumerate() {
                assert!((a - dense[(j, i)]).norm() < 1e-12);
            }
        }
    }
}
