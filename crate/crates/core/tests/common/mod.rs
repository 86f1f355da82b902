//! Independent reference implementations used only by the integration tests.

#![allow(dead_code)]

use qwalk::{Boundary, Complex64, Lattice};

/// `γ(-ψ_{x-1} + 2ψ_x - ψ_{x+1})`, written out directly on the raw vector.
fn stencil(gamma: f64, periodic: bool, psi: &[Complex64]) -> Vec<Complex64> {
    let n = psi.len();
    (0..n)
        .map(|i| {
            let left = if i > 0 {
                psi[i - 1]
            } else if periodic {
                psi[n - 1]
            } else {
                Complex64::new(0.0, 0.0)
            };
            let right = if i + 1 < n {
                psi[i + 1]
            } else if periodic {
                psi[0]
            } else {
                Complex64::new(0.0, 0.0)
            };
            (psi[i] * 2.0 - left - right) * gamma
        })
        .collect()
}

/// `exp(iHt) ψ` by truncated Taylor series.
///
/// The interval is cut into substeps with `‖H‖τ ≤ 1/2` (`‖H‖ ≤ 4γ`), and each
/// substep series runs until the Lagrange remainder bound `(‖H‖τ)^{k+1}/(k+1)!`
/// falls below 1e-17.
pub fn taylor_exp(gamma: f64, lattice: &Lattice, t: f64, psi: &[Complex64]) -> Vec<Complex64> {
    let periodic = lattice.boundary() == Boundary::Periodic;
    let h_norm = 4.0 * gamma;
    let substeps = ((h_norm * t.abs()) / 0.5).ceil().max(1.0) as usize;
    let tau = t / substeps as f64;
    let mut state = psi.to_vec();
    for _ in 0..substeps {
        let mut term = state.clone();
        let mut sum = state.clone();
        let mut bound = 1.0;
        let mut k = 0usize;
        loop {
            k += 1;
            let applied = stencil(gamma, periodic, &term);
            let factor = Complex64::new(0.0, tau / k as f64);
            term = applied.into_iter().map(|a| a * factor).collect();
            for (s, a) in sum.iter_mut().zip(&term) {
                *s += a;
            }
            bound *= h_norm * tau.abs() / (k + 1) as f64;
            if bound < 1e-17 {
                break;
            }
        }
        state = sum;
    }
    state
}

/// Position distribution of the walk where a fresh resource `[α, β]` is attached
/// before every step and every resource is kept: the full state lives on
/// `2^steps` register configurations ⊗ coin ⊗ position.
///
/// Register bit `k` records the resource of step `k`. A coin, if given, is
/// applied to the particle before each shift.
pub fn explicit_register_distribution(
    lattice: &Lattice,
    init: &[Complex64],
    resource: [Complex64; 2],
    coin: Option<[[Complex64; 2]; 2]>,
    steps: usize,
) -> Vec<f64> {
    let n = lattice.sites();
    let block = 2 * n;
    // register-major: index = reg * block + coin * n + site
    let mut state = init.to_vec();
    for step in 0..steps {
        let configs = state.len() / block;
        let mut next = vec![Complex64::new(0.0, 0.0); 2 * state.len()];
        for reg in 0..configs {
            let mut particle = state[reg * block..(reg + 1) * block].to_vec();
            if let Some(c) = coin {
                for i in 0..n {
                    let (u, d) = (particle[i], particle[n + i]);
                    particle[i] = c[0][0] * u + c[0][1] * d;
                    particle[n + i] = c[1][0] * u + c[1][1] * d;
                }
            }
            for (r, amp) in resource.iter().enumerate() {
                let new_reg = reg | (r << step);
                for coin_state in 0..2 {
                    // |0_U⟩: coin 0 left, coin 1 right. |1_U⟩: mirrored.
                    let delta: i64 = if (coin_state == 0) == (r == 0) { -1 } else { 1 };
                    for i in 0..n {
                        let a = particle[coin_state * n + i];
                        if a == Complex64::new(0.0, 0.0) {
                            continue;
                        }
                        let j = lattice.step(i, delta).expect("window too small for oracle");
                        next[new_reg * block + coin_state * n + j] += amp * a;
                    }
                }
            }
        }
        state = next;
    }
    let mut p = vec![0.0; n];
    for (idx, a) in state.iter().enumerate() {
        p[idx % n] += a.norm_sqr();
    }
    p
}

/// Trace-out mixture by explicit branch enumeration: every step splits each
/// branch into its `|0_U⟩` (weight `cos²θ_U`) and `|1_U⟩` (weight `sin²θ_U`)
/// shifted copies, with no branch merging.
pub fn enumerated_branch_distribution(
    lattice: &Lattice,
    init: &[Complex64],
    weights: [f64; 2],
    steps: usize,
) -> (Vec<f64>, usize, f64) {
    let n = lattice.sites();
    let mut branches = vec![(1.0f64, init.to_vec())];
    for _ in 0..steps {
        let mut next = Vec::with_capacity(branches.len() * 2);
        for (w, psi) in &branches {
            for (r, wr) in weights.iter().enumerate() {
                let mut out = vec![Complex64::new(0.0, 0.0); 2 * n];
                for coin_state in 0..2 {
                    let delta: i64 = if (coin_state == 0) == (r == 0) { -1 } else { 1 };
                    for i in 0..n {
                        if let Some(j) = lattice.step(i, delta) {
                            out[coin_state * n + j] = psi[coin_state * n + i];
                        }
                    }
                }
                next.push((w * wr, out));
            }
        }
        branches = next;
    }
    let mut p = vec![0.0; n];
    for (w, psi) in &branches {
        for (idx, a) in psi.iter().enumerate() {
            p[idx % n] += w * a.norm_sqr();
        }
    }
    let total_weight = branches.iter().map(|(w, _)| w).sum();
    (p, branches.len(), total_weight)
}

pub fn max_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

pub fn max_cdiff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}
