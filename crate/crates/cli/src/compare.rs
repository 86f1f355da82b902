//! Distribution comparisons and the canned reduction reports.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use qwalk::dtqw::{dtqw_evolve, CoinParams, ShiftBackend};
use qwalk::generic::{DisposalPolicy, GenericWalk, ResourceParams};
use qwalk::reduction::{reduce_to_ctqw_check, reduce_to_dtqw_operator};
use qwalk::state::{initial_particle_state, measure_position, total_variation_distance};
use qwalk::{Distribution, Lattice, WalkError};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::Experiment;
use crate::error::CliError;
use crate::run::{simulate, summarize, Summary};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Comparison {
    pub tv_distance: f64,
    /// `mean(a) - mean(b)`.
    pub mean_difference: f64,
    /// `var(a) / var(b)`; `null` when `var(b) = 0`.
    pub variance_ratio: Option<f64>,
}

pub fn compare_distributions(a: &Distribution, b: &Distribution) -> Result<Comparison, CliError> {
    let tv_distance = total_variation_distance(a, b)?;
    let vb = b.variance();
    Ok(Comparison {
        tv_distance,
        mean_difference: a.mean() - b.mean(),
        variance_ratio: (vb != 0.0).then(|| a.variance() / vb),
    })
}

/// Run two experiments on the same lattice and compare their distributions.
pub fn compare_experiments(a: &Experiment, b: &Experiment) -> Result<Value, CliError> {
    let (la, lb) = (a.kind.lattice(), b.kind.lattice());
    if la != lb {
        return Err(WalkError::LatticeMismatch {
            left: la.to_string(),
            right: lb.to_string(),
        }
        .into());
    }
    let (da, db) = (simulate(&a.kind)?, simulate(&b.kind)?);
    Ok(json!({
        "a": { "config": a.resolved_config(), "summary": summarize(&da) },
        "b": { "config": b.resolved_config(), "summary": summarize(&db) },
        "comparison": compare_distributions(&da, &db)?,
    }))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PolicyComparison {
    pub policy: String,
    pub summary: Summary,
    #[serde(flatten)]
    pub comparison: Comparison,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RetrievalReport {
    pub preset: &'static str,
    pub steps: usize,
    pub half_width: usize,
    pub reference: Summary,
    pub policies: Vec<PolicyComparison>,
}

/// Each disposal policy with the equal-superposition resource, no coin, against
/// the Hadamard walk from `(|0⟩ + i|1⟩)/√2` after `steps` steps.
pub fn hadamard_retrieval(steps: usize) -> Result<RetrievalReport, CliError> {
    if steps == 0 {
        return Err(CliError::config("steps", "must be at least 1"));
    }
    let lattice = Lattice::guarded(steps + 1);
    let init = initial_particle_state(FRAC_PI_4, FRAC_PI_2, lattice);
    let reference = measure_position(&dtqw_evolve(
        &init,
        CoinParams::hadamard(),
        steps,
        ShiftBackend::Permutation,
    )?);
    let policies = DisposalPolicy::ALL
        .iter()
        .map(|&policy| {
            let d = GenericWalk::new(ResourceParams::equal_superposition(), policy).evolve(&init, steps)?;
            Ok(PolicyComparison {
                policy: policy.to_string(),
                summary: summarize(&d),
                comparison: compare_distributions(&d, &reference)?,
            })
        })
        .collect::<Result<_, CliError>>()?;
    Ok(RetrievalReport {
        preset: "hadamard-retrieval",
        steps,
        half_width: lattice.half_width(),
        reference: summarize(&reference),
        policies,
    })
}

/// Both resource basis restrictions of `U_C` against the standard shift.
pub fn dtqw_limit(half_width: usize) -> Result<Value, CliError> {
    let rows = (0..2)
        .map(|r| {
            let red = reduce_to_dtqw_operator(r, half_width)?;
            Ok(json!({
                "resource_basis": r,
                "max_abs_diff": red.max_abs_diff,
                "leakage": red.leakage,
                "unitarity_defect": red.unitarity_defect,
                "is_permutation": red.is_permutation,
                "exact": red.exact(),
            }))
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(json!({ "preset": "dtqw-limit", "half_width": half_width, "restrictions": rows }))
}

pub fn ctqw_limit(
    resource: ResourceParams,
    particle_basis: usize,
    half_width: usize,
    max_t: usize,
) -> Result<Value, CliError> {
    let r = reduce_to_ctqw_check(resource, particle_basis, half_width, max_t)?;
    let names: Vec<String> = DisposalPolicy::ALL.iter().map(|p| p.to_string()).collect();
    let rows: Vec<Value> = r
        .rows
        .iter()
        .map(|row| {
            let per = |v: &[f64; 3]| -> Value {
                names.iter().cloned().zip(v.iter().map(|&x| json!(x))).collect::<serde_json::Map<_, _>>().into()
            };
            json!({
                "t": row.t,
                "tv_distance": per(&row.tv_distance),
                "generic_mean": per(&row.generic_mean),
                "hopping_mean": row.hopping_mean,
                "hopping_parity_asymmetry": row.hopping_parity_asymmetry,
            })
        })
        .collect();
    Ok(json!({
        "preset": "ctqw-limit",
        "theta_u": resource.theta_u,
        "gamma_u": resource.gamma_u,
        "particle_basis": particle_basis,
        "half_width": half_width,
        "product_vs_exponential": r.product_vs_exponential,
        "exponential_vs_uc": r.exponential_vs_uc,
        "hopping": { "re": r.hopping.re, "im": r.hopping.im },
        "rows": rows,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identical_distributions() {
        let d = Distribution::from_probabilities(Lattice::guarded(1), vec![0.25, 0.5, 0.25]).unwrap();
        let c = compare_distributions(&d, &d).unwrap();
        assert_eq!(c.tv_distance, 0.0);
        assert_eq!(c.mean_difference, 0.0);
        assert_eq!(c.variance_ratio, Some(1.0));

        let point = Distribution::from_probabilities(Lattice::guarded(1), vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(compare_distributions(&d, &point).unwrap().variance_ratio, None);
    }

    #[test]
    fn retrieval_report_shape() {
        let r = hadamard_retrieval(20).unwrap();
        assert_eq!(r.policies.len(), 3);
        for p in &r.policies {
            assert!((0.0..=1.0).contains(&p.comparison.tv_distance));
        }
        assert!(hadamard_retrieval(0).is_err());
    }
}
