//! The standard discrete-time walk: SU(2) coin followed by a coin-conditioned shift.

use std::fmt;

use nalgebra::Matrix2;
use num_complex::Complex64;

use crate::error::Result;
use crate::lattice::Lattice;
use crate::spectral::FourierPlan;
use crate::state::WalkState;

/// Angles `(ξ, θ, ζ)` of the three-parameter SU(2) coin.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CoinParams {
    pub xi: f64,
    pub theta: f64,
    pub zeta: f64,
}

impl CoinParams {
    pub const fn new(xi: f64, theta: f64, zeta: f64) -> Self {
        Self { xi, theta, zeta }
    }

    /// `(0, π/4, 0)`.
    pub fn hadamard() -> Self {
        Self::new(0.0, std::f64::consts::FRAC_PI_4, 0.0)
    }

    pub fn matrix(&self) -> Matrix2<Complex64> {
        coin_matrix(*self)
    }
}

/// ```text
/// ⎡ e^{iξ} cos θ    e^{iζ} sin θ ⎤
/// ⎣ e^{-iζ} sin θ  -e^{-iξ} cos θ ⎦
/// ```
pub fn coin_matrix(params: CoinParams) -> Matrix2<Complex64> {
    let (s, c) = params.theta.sin_cos();
    Matrix2::new(
        Complex64::from_polar(c, params.xi),
        Complex64::from_polar(s, params.zeta),
        Complex64::from_polar(s, -params.zeta),
        -Complex64::from_polar(c, -params.xi),
    )
}

/// Left-multiply the coin vector at every site by the coin matrix.
pub fn apply_coin(state: &WalkState, params: CoinParams) -> WalkState {
    let m = coin_matrix(params);
    let n = state.lattice().sites();
    let (up, down) = state.amplitudes().split_at(n);
    let mut out = vec![Complex64::new(0.0, 0.0); 2 * n];
    for i in 0..n {
        out[i] = m[(0, 0)] * up[i] + m[(0, 1)] * down[i];
        out[n + i] = m[(1, 0)] * up[i] + m[(1, 1)] * down[i];
    }
    WalkState::from_raw(*state.lattice(), out)
}

/// How the conditional shift is carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum ShiftBackend {
    /// Index permutation in position space.
    #[default]
    Permutation,
    /// Per-mode phases in the Fourier basis of the window.
    MomentumPhase,
}

impl fmt::Display for ShiftBackend {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ShiftBackend::Permutation => f.write_str("permutation"),
            ShiftBackend::MomentumPhase => f.write_str("momentum"),
        }
    }
}

/// Direction each coin state moves in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShiftOrientation {
    /// Coin `0` moves to `x - 1`, coin `1` to `x + 1`.
    Standard,
    /// Coin `0` moves to `x + 1`, coin `1` to `x - 1`.
    Mirrored,
}

impl ShiftOrientation {
    /// Displacement applied to coin `coin`.
    pub fn displacement(self, coin: usize) -> i64 {
        let d = if coin == 0 { -1 } else { 1 };
        match self {
            ShiftOrientation::Standard => d,
            ShiftOrientation::Mirrored => -d,
        }
    }
}

/// A coin-conditioned shift bound to one lattice, with any FFT plans prepared.
#[derive(Debug, Clone)]
pub struct ConditionalShift {
    lattice: Lattice,
    orientation: ShiftOrientation,
    momentum: Option<MomentumTables>,
}

#[derive(Debug, Clone)]
struct MomentumTables {
    plan: FourierPlan,
    left: Vec<Complex64>,
    right: Vec<Complex64>,
}

impl ConditionalShift {
    pub fn new(lattice: Lattice, backend: ShiftBackend, orientation: ShiftOrientation) -> Self {
        let momentum = (backend == ShiftBackend::MomentumPhase).then(|| {
            let plan = FourierPlan::new(lattice.sites());
            MomentumTables {
                left: plan.translation_phases(true),
                right: plan.translation_phases(false),
                plan,
            }
        });
        Self {
            lattice,
            orientation,
            momentum,
        }
    }

    pub fn backend(&self) -> ShiftBackend {
        if self.momentum.is_some() {
            ShiftBackend::MomentumPhase
        } else {
            ShiftBackend::Permutation
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    /// Shift a raw coin-major vector in place. No boundary checks.
    pub(crate) fn apply_raw(&self, amplitudes: &mut [Complex64]) {
        let n = self.lattice.sites();
        for coin in 0..2 {
            let row = &mut amplitudes[coin * n..(coin + 1) * n];
            let delta = self.orientation.displacement(coin);
            match &self.momentum {
                Some(t) => {
                    let phases = if delta < 0 { &t.left } else { &t.right };
                    t.plan.apply_diagonal(row, phases);
                }
                None => permute(&self.lattice, row, delta),
            }
        }
    }

    /// Apply the shift. Guarded lattices are checked before and after.
    pub fn apply(&self, state: &WalkState) -> Result<WalkState> {
        self.lattice.ensure_same(state.lattice())?;
        state.check_guard()?;
        let mut amplitudes = state.amplitudes().to_vec();
        self.apply_raw(&mut amplitudes);
        let out = WalkState::from_raw(self.lattice, amplitudes);
        out.check_guard()?;
        Ok(out)
    }
}

/// Move every entry of `row` by `delta` sites. Entries pushed off a guarded
/// window are dropped; callers guard against that beforehand.
pub(crate) fn permute(lattice: &Lattice, row: &mut [Complex64], delta: i64) {
    let src = row.to_vec();
    row.fill(Complex64::new(0.0, 0.0));
    for (i, a) in src.into_iter().enumerate() {
        if let Some(j) = lattice.step(i, delta) {
            row[j] = a;
        }
    }
}

/// Coin `0` to `x - 1`, coin `1` to `x + 1`.
///
/// Fails with `BoundaryViolation` on a guarded lattice carrying amplitude on an
/// outermost site before or after the move.
pub fn apply_shift(state: &WalkState, backend: ShiftBackend) -> Result<WalkState> {
    ConditionalShift::new(*state.lattice(), backend, ShiftOrientation::Standard).apply(state)
}

/// `steps` applications of shift ∘ coin.
pub fn dtqw_evolve(
    state: &WalkState,
    params: CoinParams,
    steps: usize,
    backend: ShiftBackend,
) -> Result<WalkState> {
    let shift = ConditionalShift::new(*state.lattice(), backend, ShiftOrientation::Standard);
    let mut current = state.clone();
    for _ in 0..steps {
        current = shift.apply(&apply_coin(&current, params))?;
    }
    Ok(current)
}

/// Large-`N` spread of the walk with coin `(·, θ, ·)`: `(1 - sin θ) N²`.
pub fn variance_prediction(theta: f64, steps: usize) -> f64 {
    let n = steps as f64;
    (1.0 - theta.sin()) * n * n
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::{initial_particle_state, measure_position};
    use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI};

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    fn assert_matrix(m: Matrix2<Complex64>, expect: [[f64; 2]; 2]) {
        for r in 0..2 {
            for col in 0..2 {
                assert!(
                    (m[(r, col)] - c(expect[r][col])).norm() < 1e-15,
                    "entry ({r},{col}) = {}",
                    m[(r, col)]
                );
            }
        }
    }

    #[test]
    fn coin_matrix_examples() {
        assert_matrix(coin_matrix(CoinParams::new(0.0, 0.0, 0.0)), [[1.0, 0.0], [0.0, -1.0]]);
        let h = FRAC_1_SQRT_2;
        assert_matrix(coin_matrix(CoinParams::hadamard()), [[h, h], [h, -h]]);
        assert_matrix(coin_matrix(CoinParams::new(0.0, FRAC_PI_2, 0.0)), [[0.0, 1.0], [1.0, 0.0]]);
    }

    #[test]
    fn hadamard_on_coin_zero() {
        let l = Lattice::guarded(2);
        let s = apply_coin(&WalkState::basis(l, 0, 0).unwrap(), CoinParams::hadamard());
        assert!((s.amplitude(0, 0) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((s.amplitude(1, 0) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        for x in [-2, -1, 1, 2] {
            assert_eq!(s.amplitude(0, x), c(0.0));
            assert_eq!(s.amplitude(1, x), c(0.0));
        }
    }

    #[test]
    fn diagonal_coin_is_involution() {
        let s = initial_particle_state(0.4, 1.3, Lattice::guarded(3));
        let z = CoinParams::default();
        let twice = apply_coin(&apply_coin(&s, z), z);
        assert_eq!(twice.max_abs_diff(&s).unwrap(), 0.0);
    }

    #[test]
    fn shift_basis_states() {
        let l = Lattice::guarded(3);
        for backend in [ShiftBackend::Permutation, ShiftBackend::MomentumPhase] {
            let left = apply_shift(&WalkState::basis(l, 0, 0).unwrap(), backend).unwrap();
            assert!(left.max_abs_diff(&WalkState::basis(l, 0, -1).unwrap()).unwrap() < 1e-12);
            let right = apply_shift(&WalkState::basis(l, 1, 0).unwrap(), backend).unwrap();
            assert!(right.max_abs_diff(&WalkState::basis(l, 1, 1).unwrap()).unwrap() < 1e-12);
        }
    }

    #[test]
    fn shift_superposition_backends_agree() {
        let l = Lattice::guarded(4);
        let s = initial_particle_state(FRAC_PI_4, 0.0, l);
        let a = apply_shift(&s, ShiftBackend::Permutation).unwrap();
        let b = apply_shift(&s, ShiftBackend::MomentumPhase).unwrap();
        assert!((a.amplitude(0, -1) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!((a.amplitude(1, 1) - c(FRAC_1_SQRT_2)).norm() < 1e-15);
        assert!(a.max_abs_diff(&b).unwrap() <= 1e-10);
    }

    #[test]
    fn guarded_shift_rejects_boundary_amplitude() {
        let l = Lattice::guarded(2);
        let edge = WalkState::basis(l, 1, 2).unwrap();
        assert!(matches!(
            apply_shift(&edge, ShiftBackend::Permutation),
            Err(crate::WalkError::BoundaryViolation { site: 2, .. })
        ));
        // Lands on the edge: rejected after the move.
        let near = WalkState::basis(l, 0, -1).unwrap();
        assert!(matches!(
            apply_shift(&near, ShiftBackend::MomentumPhase),
            Err(crate::WalkError::BoundaryViolation { site: -2, .. })
        ));
    }

    #[test]
    fn periodic_shift_wraps() {
        let l = Lattice::periodic(2);
        let s = apply_shift(&WalkState::basis(l, 1, 2).unwrap(), ShiftBackend::Permutation).unwrap();
        assert_eq!(s.amplitude(1, -2), c(1.0));
    }

    #[test]
    fn two_step_hadamard_distribution() {
        let l = Lattice::guarded(3);
        let s = dtqw_evolve(
            &WalkState::basis(l, 0, 0).unwrap(),
            CoinParams::hadamard(),
            2,
            ShiftBackend::Permutation,
        )
        .unwrap();
        let d = measure_position(&s);
        assert!((d.probability(-2) - 0.25).abs() < 1e-15);
        assert!((d.probability(0) - 0.5).abs() < 1e-15);
        assert!((d.probability(2) - 0.25).abs() < 1e-15);
    }

    #[test]
    fn zero_steps_is_identity() {
        let s = initial_particle_state(0.2, 0.9, Lattice::guarded(2));
        let out = dtqw_evolve(&s, CoinParams::new(0.1, 0.2, 0.3), 0, ShiftBackend::Permutation)
            .unwrap();
        assert_eq!(out, s);
    }

    #[test]
    fn too_many_steps_hit_the_guard() {
        let s = initial_particle_state(FRAC_PI_4, FRAC_PI_2, Lattice::guarded(5));
        assert!(dtqw_evolve(&s, CoinParams::hadamard(), 4, ShiftBackend::Permutation).is_ok());
        assert!(matches!(
            dtqw_evolve(&s, CoinParams::hadamard(), 5, ShiftBackend::Permutation),
            Err(crate::WalkError::BoundaryViolation { .. })
        ));
    }

    #[test]
    fn variance_prediction_values() {
        assert!(variance_prediction(FRAC_PI_2, 37).abs() < 1e-12);
        // (1 - 1/√2) · 10⁴
        assert!((variance_prediction(FRAC_PI_4, 100) - 2928.932188134524).abs() < 1e-9);
        assert!(variance_prediction(PI / 12.0, 100) > variance_prediction(FRAC_PI_4, 100));
    }
}
