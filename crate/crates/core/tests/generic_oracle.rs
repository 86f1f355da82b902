mod common;

use common::{enumerated_branch_distribution, explicit_register_distribution, max_diff};
use qwalk::analysis::fit_scaling_exponent;
use qwalk::dtqw::{coin_matrix, CoinParams};
use qwalk::generic::{generic_evolve, generic_step, DisposalPolicy, GenericWalk, ParticleState, ResourceParams};
use qwalk::state::{initial_particle_state, total_variation_distance};
use qwalk::{Lattice, WalkState};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

const RESOURCES: [(f64, f64); 4] = [(FRAC_PI_4, 0.0), (0.3, 1.1), (1.2, -0.4), (FRAC_PI_4, 2.0)];

fn coin_array(params: CoinParams) -> [[qwalk::Complex64; 2]; 2] {
    let m = coin_matrix(params);
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

#[test]
fn keep_coherent_equals_trace_out_with_explicit_registers() {
    for steps in 0..=8 {
        let lattice = Lattice::guarded(steps + 1);
        for (delta, eta) in [(0.0, 0.0), (FRAC_PI_4, FRAC_PI_2), (0.9, 0.3)] {
            let init = initial_particle_state(delta, eta, lattice);
            for (theta_u, gamma_u) in RESOURCES {
                let resource = ResourceParams::new(theta_u, gamma_u);
                let oracle =
                    explicit_register_distribution(&lattice, init.amplitudes(), resource.amplitudes(), None, steps);
                let keep = generic_evolve(&init, resource, DisposalPolicy::KeepCoherent, steps).unwrap();
                let trace = generic_evolve(&init, resource, DisposalPolicy::TraceOut, steps).unwrap();
                assert!(max_diff(keep.probabilities(), &oracle) <= 1e-12, "N={steps}");
                assert!(max_diff(trace.probabilities(), &oracle) <= 1e-12, "N={steps}");
            }
        }
    }
}

#[test]
fn keep_coherent_with_coin_matches_explicit_registers() {
    let coin = CoinParams::new(0.3, 0.6, -0.2);
    for steps in [1, 4, 7] {
        let lattice = Lattice::guarded(steps + 1);
        let init = initial_particle_state(FRAC_PI_4, FRAC_PI_2, lattice);
        let resource = ResourceParams::new(0.7, 0.5);
        let oracle = explicit_register_distribution(
            &lattice,
            init.amplitudes(),
            resource.amplitudes(),
            Some(coin_array(coin)),
            steps,
        );
        let fast = GenericWalk::new(resource, DisposalPolicy::KeepCoherent)
            .with_coin(coin)
            .evolve(&init, steps)
            .unwrap();
        assert!(max_diff(fast.probabilities(), &oracle) <= 1e-12);
    }
}

#[test]
fn trace_out_fast_path_equals_branch_enumeration() {
    for steps in 0..=10 {
        let lattice = Lattice::guarded(steps + 1);
        let init = initial_particle_state(0.6, 1.4, lattice);
        for (theta_u, gamma_u) in RESOURCES {
            let resource = ResourceParams::new(theta_u, gamma_u);
            let (oracle, count, weight) =
                enumerated_branch_distribution(&lattice, init.amplitudes(), resource.branch_weights(), steps);
            assert_eq!(count, 1 << steps);
            assert!((weight - 1.0).abs() <= 1e-12);
            let fast = generic_evolve(&init, resource, DisposalPolicy::TraceOut, steps).unwrap();
            assert!(max_diff(fast.probabilities(), &oracle) <= 1e-12, "N={steps}");
        }
    }
}

#[test]
fn step_api_branches_match_enumeration() {
    let lattice = Lattice::guarded(7);
    let init = initial_particle_state(0.2, 0.0, lattice);
    let resource = ResourceParams::new(0.4, 0.9);
    let mut state = ParticleState::Pure(init.clone());
    for steps in 1..=6 {
        state = generic_step(&state, resource, DisposalPolicy::TraceOut).unwrap();
        assert!((state.total_weight() - 1.0).abs() <= 1e-12);
        let (oracle, _, _) =
            enumerated_branch_distribution(&lattice, init.amplitudes(), resource.branch_weights(), steps);
        assert!(max_diff(state.distribution().probabilities(), &oracle) <= 1e-12);
    }
}

#[test]
fn trace_out_is_binomial() {
    let steps = 12;
    let lattice = Lattice::guarded(steps + 1);
    let init = WalkState::basis(lattice, 0, 0).unwrap();
    let d = generic_evolve(&init, ResourceParams::equal_superposition(), DisposalPolicy::TraceOut, steps)
        .unwrap();
    let mut binom = 1.0f64;
    for k in 0..=steps {
        let x = 2 * k as i64 - steps as i64;
        let expect = binom / 2f64.powi(steps as i32);
        assert!((d.probability(x) - expect).abs() <= 1e-15);
        assert_eq!(d.probability(x + 1), 0.0);
        binom = binom * (steps - k) as f64 / (k + 1) as f64;
    }
    assert!((d.variance() - steps as f64).abs() <= 1e-12);
}

#[test]
fn trace_out_variance_law() {
    let steps = 400;
    let lattice = Lattice::guarded(steps + 1);
    for theta_u in [FRAC_PI_4, 0.3, 1.0, 0.1] {
        for coin in 0..2 {
            let init = WalkState::basis(lattice, coin, 0).unwrap();
            let d = generic_evolve(&init, ResourceParams::new(theta_u, 0.7), DisposalPolicy::TraceOut, steps)
                .unwrap();
            let (s, c) = theta_u.sin_cos();
            let predicted = 4.0 * c * c * s * s * steps as f64;
            let rel = (d.variance() - predicted).abs() / predicted;
            assert!(rel <= 0.02, "θ_U={theta_u}: {} vs {predicted}", d.variance());
        }
    }
}

#[test]
fn trace_out_is_diffusive() {
    let lattice = Lattice::guarded(401);
    let init = WalkState::basis(lattice, 0, 0).unwrap();
    let walk = GenericWalk::new(ResourceParams::equal_superposition(), DisposalPolicy::TraceOut);
    let traj = walk.trajectory(&init, 400).unwrap();
    let samples: Vec<_> = (50..=400).step_by(50).map(|n| (n as f64, traj[n].variance())).collect();
    let fit = fit_scaling_exponent(&samples).unwrap();
    assert!((fit.slope - 1.0).abs() <= 0.05);
}

#[test]
fn policies_agree_for_basis_resources() {
    let lattice = Lattice::guarded(31);
    let init = initial_particle_state(0.7, 0.2, lattice);
    for resource in [ResourceParams::new(0.0, 0.0), ResourceParams::new(FRAC_PI_2, 1.3)] {
        for coin in [None, Some(CoinParams::hadamard()), Some(CoinParams::new(0.4, 1.0, 0.2))] {
            let dists: Vec<_> = DisposalPolicy::ALL
                .iter()
                .map(|p| {
                    let mut w = GenericWalk::new(resource, *p);
                    w.coin = coin;
                    w.evolve(&init, 30).unwrap()
                })
                .collect();
            for d in &dists[1..] {
                assert_eq!(total_variation_distance(&dists[0], d).unwrap(), 0.0);
            }
        }
    }
}

#[test]
fn post_select_keeps_unit_norm_over_many_steps() {
    let lattice = Lattice::guarded(61);
    let init = initial_particle_state(FRAC_PI_4, FRAC_PI_2, lattice);
    let walk = GenericWalk::new(ResourceParams::new(0.6, 0.8), DisposalPolicy::PostSelect)
        .with_coin(CoinParams::hadamard());
    for d in walk.trajectory(&init, 60).unwrap() {
        assert!((d.total() - 1.0).abs() <= 1e-12);
    }
}

#[test]
fn generic_walk_respects_the_guard() {
    let lattice = Lattice::guarded(10);
    let init = WalkState::basis(lattice, 0, 0).unwrap();
    for policy in DisposalPolicy::ALL {
        assert!(generic_evolve(&init, ResourceParams::new(0.5, 0.0), policy, 9).is_ok());
        assert!(matches!(
            generic_evolve(&init, ResourceParams::new(0.5, 0.0), policy, 10),
            Err(qwalk::WalkError::BoundaryViolation { .. })
        ));
    }
}
