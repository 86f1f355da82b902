//! Limits of the coin-embedded shift walk.
//!
//! * Resource in a basis state: `U_C` restricted to that resource state is the
//!   standard conditional shift (`|0_U⟩`) or its mirror (`|1_U⟩`).
//! * Particle in a coin basis state: `U_C` acts on resource ⊗ position as
//!   `exp[∓i Z_U ⊗ P]`, with `P` the lattice momentum and `Z_U = |0_U⟩⟨0_U| - |1_U⟩⟨1_U|`.
//!   The matching one-step hopping generator `H_L` is compared against the
//!   generic walk under every disposal policy.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::ctqw::{PositionState, TightBinding};
use crate::dtqw::{ConditionalShift, ShiftBackend, ShiftOrientation};
use crate::error::{Result, WalkError};
use crate::generic::{apply_uc_unchecked, DisposalPolicy, GenericWalk, ResourceParams};
use crate::lattice::Lattice;
use crate::operator::{is_permutation, materialize, max_abs_diff, unitarity_defect};
use crate::spectral::FourierPlan;
use crate::state::{total_variation_distance, WalkState};

/// Restriction of `U_C` to one resource basis state, next to the standard shift.
#[derive(Debug, Clone)]
pub struct DtqwReduction {
    pub resource_basis: usize,
    /// `⟨r_U| U_C |r_U⟩` on coin ⊗ position.
    pub restricted: DMatrix<Complex64>,
    /// The standard shift for `|0_U⟩`; `(X ⊗ 1) S (X ⊗ 1)` for `|1_U⟩`.
    pub reference: DMatrix<Complex64>,
    pub max_abs_diff: f64,
    pub leakage: f64,
    pub unitarity_defect: f64,
    pub is_permutation: bool,
}

impl DtqwReduction {
    pub fn exact(&self) -> bool {
        self.max_abs_diff == 0.0 && self.leakage == 0.0 && self.is_permutation
    }
}

/// Materialize `U_C` on a periodic window of `half_width` and restrict it to
/// resource basis state `resource_basis` (`0` or `1`).
pub fn reduce_to_dtqw_operator(resource_basis: usize, half_width: usize) -> Result<DtqwReduction> {
    if resource_basis > 1 {
        return Err(WalkError::InvalidParameter {
            name: "resource_basis",
            reason: format!("must be 0 or 1, got {resource_basis}"),
        });
    }
    let lattice = Lattice::new(half_width, crate::lattice::Boundary::Periodic)?;
    let block = 2 * lattice.sites();
    let offset = resource_basis * block;

    let full = materialize(2 * block, |v| apply_uc_unchecked(&lattice, v));
    let restricted = full.view((offset, offset), (block, block)).clone_owned();
    // Amplitude U_C moves out of the chosen resource block.
    let other = (1 - resource_basis) * block;
    let leakage = full
        .view((other, offset), (block, block))
        .iter()
        .map(|a| a.norm())
        .fold(0.0, f64::max);

    let shift = ConditionalShift::new(lattice, ShiftBackend::Permutation, ShiftOrientation::Standard);
    let standard = materialize(block, |v| {
        let state = WalkState::from_raw(lattice, v.to_vec());
        let out = shift.apply(&state).expect("periodic shifts never violate a guard");
        v.copy_from_slice(out.amplitudes());
    });
    let reference = if resource_basis == 0 {
        standard
    } else {
        let n = lattice.sites();
        let flip = materialize(block, |v| {
            let (a, b) = v.split_at_mut(n);
            a.swap_with_slice(b);
        });
        &flip * standard * &flip
    };

    Ok(DtqwReduction {
        resource_basis,
        max_abs_diff: max_abs_diff(&restricted, &reference),
        leakage,
        unitarity_defect: unitarity_defect(&restricted),
        is_permutation: is_permutation(&restricted),
        restricted,
        reference,
    })
}

/// Lattice momentum `P` with `e^{-iP}` the translation `|ψ_x⟩ → |ψ_{x-1}⟩`.
pub fn momentum_operator(lattice: &Lattice) -> DMatrix<Complex64> {
    let n = lattice.sites();
    let plan = FourierPlan::new(n);
    // Left translation has eigenvalue e^{+ik}, so P = -k on mode k.
    DMatrix::from_fn(n, n, |j, l| {
        let d = j as f64 - l as f64;
        (0..n)
            .map(|m| {
                let k = plan.wavenumber(m);
                Complex64::from_polar(-k, k * d)
            })
            .sum::<Complex64>()
            / n as f64
    })
}

/// One row of the hopping-generator comparison.
#[derive(Debug, Clone, PartialEq)]
pub struct CtqwLimitRow {
    pub t: usize,
    /// Total-variation distance to the `exp(±iH_L t)` distribution, per policy
    /// in [`DisposalPolicy::ALL`] order.
    pub tv_distance: [f64; 3],
    /// Mean position of the generic walk, per policy.
    pub generic_mean: [f64; 3],
    pub hopping_mean: f64,
    pub hopping_parity_asymmetry: f64,
}

/// Outcome of the coin-basis limit check.
#[derive(Debug, Clone)]
pub struct CtqwLimitReport {
    pub resource: ResourceParams,
    pub particle_basis: usize,
    pub lattice: Lattice,
    /// `exp(∓i|0_U⟩⟨0_U|⊗P) · exp(±i|1_U⟩⟨1_U|⊗P)` against `exp(∓i Z_U ⊗ P)`.
    pub product_vs_exponential: f64,
    /// `exp(∓i Z_U ⊗ P)` against the materialized `U_C` with the coin fixed.
    pub exponential_vs_uc: f64,
    /// Coefficient of `|ψ_{x-1}⟩⟨ψ_x|` in `H_L`.
    pub hopping: Complex64,
    pub rows: Vec<CtqwLimitRow>,
}

/// Coin-basis limit of the generic walk on a periodic window of `half_width`.
///
/// Part (a) compares the product of the two conditional exponentials with the
/// single exponential and with `U_C`. Part (b) builds `H_L = (A + A†)/2`, where
/// `A` moves amplitude `cos θ_U` to the `|0_U⟩` neighbour and `e^{iγ_U} sin θ_U`
/// to the `|1_U⟩` neighbour, and reports distances between the generic walk and
/// `exp(±iH_L t)` for `t = 1..=max_t`.
pub fn reduce_to_ctqw_check(
    resource: ResourceParams,
    particle_basis: usize,
    half_width: usize,
    max_t: usize,
) -> Result<CtqwLimitReport> {
    if particle_basis > 1 {
        return Err(WalkError::InvalidParameter {
            name: "particle_basis",
            reason: format!("must be 0 or 1, got {particle_basis}"),
        });
    }
    if max_t >= half_width {
        return Err(WalkError::InvalidParameter {
            name: "max_t",
            reason: format!("must stay below half_width {half_width} to avoid wrap-around"),
        });
    }
    let lattice = Lattice::new(half_width, crate::lattice::Boundary::Periodic)?;
    let n = lattice.sites();

    // Upper sign for coin 0, lower sign for coin 1.
    let sign = if particle_basis == 0 { 1.0 } else { -1.0 };
    let p = momentum_operator(&lattice);
    let zero = Complex64::new(0.0, 0.0);
    let embed = |r: usize, weight: f64| {
        let mut g = DMatrix::from_element(2 * n, 2 * n, zero);
        g.view_mut((r * n, r * n), (n, n))
            .copy_from(&(&p * Complex64::new(0.0, weight)));
        g
    };
    let product = embed(0, -sign).exp() * embed(1, sign).exp();
    let single = (embed(0, -sign) + embed(1, sign)).exp();

    let uc = materialize(2 * n, |v| {
        // Particle fixed in coin `particle_basis`: embed, apply, read back.
        let mut full = vec![zero; 4 * n];
        for r in 0..2 {
            let dst = (r * 2 + particle_basis) * n;
            full[dst..dst + n].copy_from_slice(&v[r * n..(r + 1) * n]);
        }
        apply_uc_unchecked(&lattice, &mut full);
        for r in 0..2 {
            let src = (r * 2 + particle_basis) * n;
            v[r * n..(r + 1) * n].copy_from_slice(&full[src..src + n]);
        }
    });

    let [alpha, beta] = resource.amplitudes();
    // Coin 0: |0_U⟩ moves left. Coin 1: |0_U⟩ moves right.
    let (left, right) = if particle_basis == 0 { (alpha, beta) } else { (beta, alpha) };
    let hopping = (left + right.conj()) * 0.5;
    let generator = TightBinding {
        lattice,
        on_site: 0.0,
        hop: hopping,
    };
    let propagator = generator.propagator();
    let origin = PositionState::delta_peak(lattice, 0)?;

    let init = WalkState::basis(lattice, particle_basis, 0)?;
    let trajectories = DisposalPolicy::ALL
        .map(|policy| GenericWalk::new(resource, policy).trajectory(&init, max_t));
    let trajectories = trajectories.into_iter().collect::<Result<Vec<_>>>()?;

    let mut rows = Vec::with_capacity(max_t);
    for t in 1..=max_t {
        let hopping_dist = propagator.evolve(&origin, sign * t as f64)?.distribution();
        let mut tv_distance = [0.0; 3];
        let mut generic_mean = [0.0; 3];
        for (k, traj) in trajectories.iter().enumerate() {
            tv_distance[k] = total_variation_distance(&traj[t], &hopping_dist)?;
            generic_mean[k] = traj[t].mean();
        }
        rows.push(CtqwLimitRow {
            t,
            tv_distance,
            generic_mean,
            hopping_mean: hopping_dist.mean(),
            hopping_parity_asymmetry: hopping_dist.parity_asymmetry(),
        });
    }

    Ok(CtqwLimitReport {
        resource,
        particle_basis,
        lattice,
        product_vs_exponential: max_abs_diff(&product, &single),
        exponential_vs_uc: max_abs_diff(&single, &uc),
        hopping,
        rows,
    })
}
