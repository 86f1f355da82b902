//! Coin-embedded shift walk.
//!
//! An external two-level resource `|Ψ_U⟩ = cos θ_U |0_U⟩ + e^{iγ_U} sin θ_U |1_U⟩`
//! controls the shift `U_C`: with the resource in `|0_U⟩` coin `0` moves left and
//! coin `1` moves right; with `|1_U⟩` the directions are swapped. A fresh resource
//! is attached before every step.
//!
//! Applying `U_C` to a resource superposition entangles resource and position, so
//! what happens to the resource afterwards has to be chosen explicitly. See
//! [`DisposalPolicy`].

use std::fmt;

use num_complex::Complex64;

use crate::dtqw::{apply_coin, coin_matrix, CoinParams, ConditionalShift, ShiftBackend, ShiftOrientation};
use crate::error::{Result, WalkError};
use crate::lattice::Lattice;
use crate::state::{measure_position, Distribution, WalkState};

/// Branches lighter than this are dropped (e.g. the `cos²(π/2)` ≈ 4e-33 branch).
pub const BRANCH_WEIGHT_FLOOR: f64 = 1e-30;

/// Post-selection probabilities at or below this raise
/// [`WalkError::PostSelectZeroProbability`].
pub const POST_SELECT_FLOOR: f64 = 1e-300;

/// Resource angles `(θ_U, γ_U)`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ResourceParams {
    pub theta_u: f64,
    pub gamma_u: f64,
}

impl ResourceParams {
    pub const fn new(theta_u: f64, gamma_u: f64) -> Self {
        Self { theta_u, gamma_u }
    }

    /// `(π/4, 0)`.
    pub fn equal_superposition() -> Self {
        Self::new(std::f64::consts::FRAC_PI_4, 0.0)
    }

    pub fn amplitudes(&self) -> [Complex64; 2] {
        prepare_resource(*self)
    }

    /// `[cos² θ_U, sin² θ_U]`, with entries below [`BRANCH_WEIGHT_FLOOR`] set to
    /// zero and the other set to one.
    pub fn branch_weights(&self) -> [f64; 2] {
        let (s, c) = self.theta_u.sin_cos();
        let w = [c * c, s * s];
        if w[0] < BRANCH_WEIGHT_FLOOR {
            [0.0, 1.0]
        } else if w[1] < BRANCH_WEIGHT_FLOOR {
            [1.0, 0.0]
        } else {
            w
        }
    }

    /// The resource is (numerically) one of `|0_U⟩`, `|1_U⟩`.
    pub fn basis_state(&self) -> Option<usize> {
        match self.branch_weights() {
            [_, w] if w == 0.0 => Some(0),
            [w, _] if w == 0.0 => Some(1),
            _ => None,
        }
    }
}

/// `[cos θ_U, e^{iγ_U} sin θ_U]`.
pub fn prepare_resource(params: ResourceParams) -> [Complex64; 2] {
    let (s, c) = params.theta_u.sin_cos();
    [Complex64::new(c, 0.0), Complex64::from_polar(s, params.gamma_u)]
}

/// Resource ⊗ coin ⊗ position amplitudes.
///
/// Storage is resource-major, then coin, then site: index `(r·2 + c)·n + i`.
#[derive(Debug, Clone, PartialEq)]
pub struct GenericState {
    lattice: Lattice,
    amplitudes: Vec<Complex64>,
}

impl GenericState {
    /// `|resource⟩ ⊗ |particle⟩`.
    pub fn attach(resource: [Complex64; 2], particle: &WalkState) -> Self {
        let mut amplitudes = Vec::with_capacity(2 * particle.amplitudes().len());
        for r in resource {
            amplitudes.extend(particle.amplitudes().iter().map(|a| r * a));
        }
        Self {
            lattice: *particle.lattice(),
            amplitudes,
        }
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn amplitude(&self, resource: usize, coin: usize, x: i64) -> Complex64 {
        let n = self.lattice.sites();
        self.lattice
            .index_of(x)
            .map(|i| self.amplitudes[(resource * 2 + coin) * n + i])
            .unwrap_or_default()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Coin ⊗ position block belonging to resource state `r` (not normalized).
    pub fn resource_block(&self, r: usize) -> &[Complex64] {
        let half = self.amplitudes.len() / 2;
        &self.amplitudes[r * half..(r + 1) * half]
    }

    fn site_probability(&self, i: usize) -> f64 {
        let n = self.lattice.sites();
        (0..4).map(|b| self.amplitudes[b * n + i].norm_sqr()).sum()
    }

    /// Position statistics with resource and coin traced out.
    pub fn position_distribution(&self) -> Distribution {
        let probabilities = (0..self.lattice.sites())
            .map(|i| self.site_probability(i))
            .collect();
        Distribution::from_raw(self.lattice, probabilities)
    }

    /// Marginal probabilities of the particle's coin states.
    pub fn coin_marginal(&self) -> [f64; 2] {
        let n = self.lattice.sites();
        [0, 1].map(|c| {
            (0..2)
                .flat_map(|r| &self.amplitudes[(r * 2 + c) * n..(r * 2 + c + 1) * n])
                .map(|a| a.norm_sqr())
                .sum()
        })
    }

    /// Marginal probabilities of the resource states.
    pub fn resource_marginal(&self) -> [f64; 2] {
        [0, 1].map(|r| self.resource_block(r).iter().map(|a| a.norm_sqr()).sum())
    }
}

/// Apply `U_C` to raw resource-major amplitudes. No boundary checks.
fn apply_uc_raw(lattice: &Lattice, amplitudes: &mut [Complex64]) {
    let half = amplitudes.len() / 2;
    let (zero, one) = amplitudes.split_at_mut(half);
    ConditionalShift::new(*lattice, ShiftBackend::Permutation, ShiftOrientation::Standard)
        .apply_raw(zero);
    ConditionalShift::new(*lattice, ShiftBackend::Permutation, ShiftOrientation::Mirrored)
        .apply_raw(one);
}

/// Resource `|0_U⟩`: coin `0` left, coin `1` right. Resource `|1_U⟩`: coin `0`
/// right, coin `1` left.
pub fn apply_uc(state: &GenericState) -> Result<GenericState> {
    state.lattice.check_guard(|i| state.site_probability(i))?;
    let mut amplitudes = state.amplitudes.clone();
    apply_uc_raw(&state.lattice, &mut amplitudes);
    let out = GenericState {
        lattice: state.lattice,
        amplitudes,
    };
    out.lattice.check_guard(|i| out.site_probability(i))?;
    Ok(out)
}

/// What happens to the resource after each application of `U_C`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DisposalPolicy {
    /// Every step's resource is kept, never measured or reset. Nothing acts on
    /// it again, so the particle's reduced state equals the [`TraceOut`] mixture.
    ///
    /// [`TraceOut`]: DisposalPolicy::TraceOut
    KeepCoherent,
    /// The resource is discarded after each step; the particle becomes the
    /// mixture of the `|0_U⟩` and `|1_U⟩` branches.
    TraceOut,
    /// The resource is projected back onto `|Ψ_U⟩` and the particle renormalized.
    PostSelect,
}

impl DisposalPolicy {
    pub const ALL: [DisposalPolicy; 3] = [
        DisposalPolicy::KeepCoherent,
        DisposalPolicy::TraceOut,
        DisposalPolicy::PostSelect,
    ];
}

impl fmt::Display for DisposalPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DisposalPolicy::KeepCoherent => "keep-coherent",
            DisposalPolicy::TraceOut => "trace-out",
            DisposalPolicy::PostSelect => "post-select",
        })
    }
}

/// One member of a classical mixture.
#[derive(Debug, Clone, PartialEq)]
pub struct Branch {
    pub weight: f64,
    pub state: WalkState,
}

/// Particle state between steps.
#[derive(Debug, Clone, PartialEq)]
pub enum ParticleState {
    Pure(WalkState),
    /// Explicit branch list; weights sum to one.
    Mixture(Vec<Branch>),
}

impl ParticleState {
    pub fn lattice(&self) -> &Lattice {
        match self {
            ParticleState::Pure(s) => s.lattice(),
            ParticleState::Mixture(b) => b[0].state.lattice(),
        }
    }

    pub fn branches(&self) -> Vec<Branch> {
        match self {
            ParticleState::Pure(s) => vec![Branch {
                weight: 1.0,
                state: s.clone(),
            }],
            ParticleState::Mixture(b) => b.clone(),
        }
    }

    pub fn total_weight(&self) -> f64 {
        match self {
            ParticleState::Pure(_) => 1.0,
            ParticleState::Mixture(b) => b.iter().map(|b| b.weight).sum(),
        }
    }

    /// Weight-averaged position distribution.
    pub fn distribution(&self) -> Distribution {
        match self {
            ParticleState::Pure(s) => measure_position(s),
            ParticleState::Mixture(branches) => {
                let lattice = *self.lattice();
                let mut p = vec![0.0; lattice.sites()];
                for b in branches {
                    for (acc, q) in p.iter_mut().zip(measure_position(&b.state).probabilities()) {
                        *acc += b.weight * q;
                    }
                }
                Distribution::from_raw(lattice, p)
            }
        }
    }
}

/// The two shifted copies `S_0 ψ`, `S_1 ψ` (resource `|0_U⟩`, `|1_U⟩`), with
/// guarded-window checks.
fn shifted_pair(shifts: &[ConditionalShift; 2], state: &WalkState) -> Result<[WalkState; 2]> {
    Ok([shifts[0].apply(state)?, shifts[1].apply(state)?])
}

fn shift_pair(lattice: Lattice) -> [ConditionalShift; 2] {
    [
        ConditionalShift::new(lattice, ShiftBackend::Permutation, ShiftOrientation::Standard),
        ConditionalShift::new(lattice, ShiftBackend::Permutation, ShiftOrientation::Mirrored),
    ]
}

/// `(⟨Ψ_U| ⊗ 1) U_C (|Ψ_U⟩ ⊗ ψ) = cos²θ_U S_0ψ + sin²θ_U S_1ψ`, unnormalized.
fn project_onto_resource(weights: [f64; 2], shifted: &[WalkState; 2]) -> Vec<Complex64> {
    shifted[0]
        .amplitudes()
        .iter()
        .zip(shifted[1].amplitudes())
        .map(|(a, b)| a * weights[0] + b * weights[1])
        .collect()
}

/// Post-selection of the shifted pair. A basis resource selects one branch
/// exactly, with probability one.
fn post_select(weights: [f64; 2], shifted: [WalkState; 2]) -> Result<(f64, WalkState)> {
    let [zero, one] = shifted;
    match weights {
        [_, w] if w == 0.0 => Ok((1.0, zero)),
        [w, _] if w == 0.0 => Ok((1.0, one)),
        _ => {
            let lattice = *zero.lattice();
            renormalize(lattice, project_onto_resource(weights, &[zero, one]))
        }
    }
}

fn renormalize(lattice: Lattice, mut amplitudes: Vec<Complex64>) -> Result<(f64, WalkState)> {
    let probability: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
    if !(probability > POST_SELECT_FLOOR) {
        return Err(WalkError::PostSelectZeroProbability { probability });
    }
    let scale = probability.sqrt().recip();
    amplitudes.iter_mut().for_each(|a| *a *= scale);
    Ok((probability, WalkState::from_raw(lattice, amplitudes)))
}

/// A generic walk: resource, disposal policy, and an optional coin applied to
/// the particle before every `U_C`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GenericWalk {
    pub resource: ResourceParams,
    pub policy: DisposalPolicy,
    pub coin: Option<CoinParams>,
}

impl GenericWalk {
    pub fn new(resource: ResourceParams, policy: DisposalPolicy) -> Self {
        Self {
            resource,
            policy,
            coin: None,
        }
    }

    pub fn with_coin(mut self, coin: CoinParams) -> Self {
        self.coin = Some(coin);
        self
    }

    /// Attach a fresh resource, apply `U_C`, dispose. Mixtures are carried as
    /// explicit branch lists, so `TraceOut` doubles the branch count per step.
    pub fn step(&self, state: &ParticleState) -> Result<ParticleState> {
        let lattice = *state.lattice();
        let shifts = shift_pair(lattice);
        let weights = self.resource.branch_weights();
        let prepare = |s: &WalkState| match self.coin {
            Some(c) => apply_coin(s, c),
            None => s.clone(),
        };
        match self.policy {
            DisposalPolicy::PostSelect => {
                let mut out = Vec::new();
                for b in state.branches() {
                    let shifted = shifted_pair(&shifts, &prepare(&b.state))?;
                    let (p, s) = post_select(weights, shifted)?;
                    out.push(Branch {
                        weight: b.weight * p,
                        state: s,
                    });
                }
                let total: f64 = out.iter().map(|b| b.weight).sum();
                if !(total > POST_SELECT_FLOOR) {
                    return Err(WalkError::PostSelectZeroProbability { probability: total });
                }
                Ok(match state {
                    ParticleState::Pure(_) => ParticleState::Pure(out.remove(0).state),
                    ParticleState::Mixture(_) => {
                        out.iter_mut().for_each(|b| b.weight /= total);
                        ParticleState::Mixture(out)
                    }
                })
            }
            DisposalPolicy::TraceOut | DisposalPolicy::KeepCoherent => {
                let mut out = Vec::new();
                for b in state.branches() {
                    let shifted = shifted_pair(&shifts, &prepare(&b.state))?;
                    for (w, s) in weights.into_iter().zip(shifted) {
                        if w > 0.0 {
                            out.push(Branch {
                                weight: b.weight * w,
                                state: s,
                            });
                        }
                    }
                }
                Ok(ParticleState::Mixture(out))
            }
        }
    }

    /// Position distribution after `steps` steps from `init`, without
    /// enumerating branches.
    pub fn evolve(&self, init: &WalkState, steps: usize) -> Result<Distribution> {
        let mut engine = Engine::new(self, init)?;
        for _ in 0..steps {
            engine.step()?;
        }
        Ok(engine.distribution())
    }

    /// Distributions after `0, 1, …, steps` steps.
    pub fn trajectory(&self, init: &WalkState, steps: usize) -> Result<Vec<Distribution>> {
        let mut engine = Engine::new(self, init)?;
        let mut out = Vec::with_capacity(steps + 1);
        out.push(engine.distribution());
        for _ in 0..steps {
            engine.step()?;
            out.push(engine.distribution());
        }
        Ok(out)
    }
}

/// Linear-cost evolution for each policy.
///
/// * basis resource or `PostSelect`: a single pure state;
/// * mixtures without a coin: per-coin site probabilities, since `U_C` never
///   mixes coin states and shifts only permute sites;
/// * mixtures with a coin: the coin ⊗ position density matrix.
enum Engine {
    Pure {
        walk: GenericWalk,
        shifts: [ConditionalShift; 2],
        weights: [f64; 2],
        state: WalkState,
    },
    Classical {
        lattice: Lattice,
        weights: [f64; 2],
        /// Coin-major site probabilities.
        probabilities: Vec<f64>,
    },
    Density {
        lattice: Lattice,
        weights: [f64; 2],
        coin: CoinParams,
        /// Row-major `2n × 2n`, coin-major indices.
        rho: Vec<Complex64>,
    },
}

impl Engine {
    fn new(walk: &GenericWalk, init: &WalkState) -> Result<Self> {
        let lattice = *init.lattice();
        init.check_guard()?;
        let weights = walk.resource.branch_weights();
        let mixing = walk.policy != DisposalPolicy::PostSelect && walk.resource.basis_state().is_none();
        Ok(match (mixing, walk.coin) {
            (false, _) => Engine::Pure {
                walk: *walk,
                shifts: shift_pair(lattice),
                weights,
                state: init.clone(),
            },
            (true, None) => Engine::Classical {
                lattice,
                weights,
                probabilities: init.amplitudes().iter().map(|a| a.norm_sqr()).collect(),
            },
            (true, Some(coin)) => {
                let psi = init.amplitudes();
                let rho = psi
                    .iter()
                    .flat_map(|a| psi.iter().map(move |b| a * b.conj()))
                    .collect();
                Engine::Density {
                    lattice,
                    weights,
                    coin,
                    rho,
                }
            }
        })
    }

    fn step(&mut self) -> Result<()> {
        match self {
            Engine::Pure {
                walk,
                shifts,
                weights,
                state,
            } => {
                let prepared = match walk.coin {
                    Some(c) => apply_coin(state, c),
                    None => state.clone(),
                };
                let shifted = shifted_pair(shifts, &prepared)?;
                *state = post_select(*weights, shifted)?.1;
            }
            Engine::Classical {
                lattice,
                weights,
                probabilities,
            } => {
                let n = lattice.sites();
                let mut next = vec![0.0; 2 * n];
                for coin in 0..2 {
                    for (orientation, w) in [ShiftOrientation::Standard, ShiftOrientation::Mirrored]
                        .into_iter()
                        .zip(*weights)
                    {
                        let d = orientation.displacement(coin);
                        for i in 0..n {
                            if let Some(j) = lattice.step(i, d) {
                                next[coin * n + j] += w * probabilities[coin * n + i];
                            }
                        }
                    }
                }
                *probabilities = next;
                let p = &*probabilities;
                lattice.check_guard(|i| p[i] + p[n + i])?;
            }
            Engine::Density {
                lattice,
                weights,
                coin,
                rho,
            } => {
                let n = lattice.sites();
                let dim = 2 * n;
                let c = coin_matrix(*coin);
                // ρ ← (C ⊗ 1) ρ (C ⊗ 1)†
                let mut left = vec![Complex64::new(0.0, 0.0); dim * dim];
                for a in 0..2 {
                    for i in 0..n {
                        let row = a * n + i;
                        for col in 0..dim {
                            left[row * dim + col] =
                                c[(a, 0)] * rho[i * dim + col] + c[(a, 1)] * rho[(n + i) * dim + col];
                        }
                    }
                }
                for row in 0..dim {
                    let r = &left[row * dim..(row + 1) * dim];
                    let out = &mut rho[row * dim..(row + 1) * dim];
                    for b in 0..2 {
                        for j in 0..n {
                            out[b * n + j] =
                                r[j] * c[(b, 0)].conj() + r[n + j] * c[(b, 1)].conj();
                        }
                    }
                }
                // ρ ← Σ_r w_r S_r ρ S_r†
                let targets: Vec<[Option<usize>; 2]> = (0..dim)
                    .map(|a| {
                        let (cn, i) = (a / n, a % n);
                        [ShiftOrientation::Standard, ShiftOrientation::Mirrored]
                            .map(|o| lattice.step(i, o.displacement(cn)).map(|j| cn * n + j))
                    })
                    .collect();
                let mut next = vec![Complex64::new(0.0, 0.0); dim * dim];
                for (r, w) in weights.iter().enumerate() {
                    if *w == 0.0 {
                        continue;
                    }
                    for a in 0..dim {
                        let Some(ta) = targets[a][r] else { continue };
                        for b in 0..dim {
                            if let Some(tb) = targets[b][r] {
                                next[ta * dim + tb] += rho[a * dim + b] * *w;
                            }
                        }
                    }
                }
                *rho = next;
                let rho = &*rho;
                lattice.check_guard(|i| rho[i * dim + i].re + rho[(n + i) * dim + n + i].re)?;
            }
        }
        Ok(())
    }

    fn distribution(&self) -> Distribution {
        match self {
            Engine::Pure { state, .. } => measure_position(state),
            Engine::Classical {
                lattice,
                probabilities,
                ..
            } => {
                let n = lattice.sites();
                let p = (0..n).map(|i| probabilities[i] + probabilities[n + i]).collect();
                Distribution::from_raw(*lattice, p)
            }
            Engine::Density { lattice, rho, .. } => {
                let n = lattice.sites();
                let dim = 2 * n;
                let p = (0..n)
                    .map(|i| (rho[i * dim + i].re + rho[(n + i) * dim + n + i].re).max(0.0))
                    .collect();
                Distribution::from_raw(*lattice, p)
            }
        }
    }
}

/// One disposal step on a particle state.
pub fn generic_step(
    state: &ParticleState,
    resource: ResourceParams,
    policy: DisposalPolicy,
) -> Result<ParticleState> {
    GenericWalk::new(resource, policy).step(state)
}

/// Position distribution after `steps` coinless generic steps.
pub fn generic_evolve(
    init: &WalkState,
    resource: ResourceParams,
    policy: DisposalPolicy,
    steps: usize,
) -> Result<Distribution> {
    GenericWalk::new(resource, policy).evolve(init, steps)
}

pub(crate) fn apply_uc_unchecked(lattice: &Lattice, amplitudes: &mut [Complex64]) {
    apply_uc_raw(lattice, amplitudes)
}
