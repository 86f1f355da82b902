//! Diagonal bases for translation-invariant nearest-neighbour operators.
//!
//! Periodic windows are diagonalized by the discrete Fourier transform. Plane
//! waves are `⟨x|k⟩ = e^{ikx}` with `k_m = 2πm/n`, so moving every amplitude one
//! site to the left (`|ψ_x⟩ → |ψ_{x-1}⟩`) multiplies mode `k` by `e^{+ik}` and
//! moving it right multiplies by `e^{-ik}`.
//!
//! Guarded windows with a real hopping are diagonalized by the discrete sine
//! basis of the open chain.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

/// Forward/inverse FFT pair for one window size.
#[derive(Clone)]
pub struct FourierPlan {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for FourierPlan {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FourierPlan").field("n", &self.n).finish()
    }
}

impl FourierPlan {
    pub fn new(n: usize) -> Self {
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// Wavenumber of Fourier mode `m`, folded into `(-π, π]`.
    pub fn wavenumber(&self, m: usize) -> f64 {
        let k = 2.0 * PI * m as f64 / self.n as f64;
        if k > PI {
            k - 2.0 * PI
        } else {
            k
        }
    }

    /// `e^{±ik_m}` for every mode: the left-translation eigenvalues (`+`) or the
    /// right-translation eigenvalues (`-`).
    pub fn translation_phases(&self, left: bool) -> Vec<Complex64> {
        let s = if left { 1.0 } else { -1.0 };
        (0..self.n)
            .map(|m| Complex64::from_polar(1.0, s * self.wavenumber(m)))
            .collect()
    }

    /// Multiply `data` by the circulant operator whose eigenvalue on mode `m`
    /// is `multipliers[m]`.
    pub fn apply_diagonal(&self, data: &mut [Complex64], multipliers: &[Complex64]) {
        assert_eq!(data.len(), self.n);
        assert_eq!(multipliers.len(), self.n);
        self.forward.process(data);
        let scale = 1.0 / self.n as f64;
        for (a, m) in data.iter_mut().zip(multipliers) {
            *a *= m * scale;
        }
        self.inverse.process(data);
    }
}

/// Orthonormal eigenvectors of the `n`-site open chain `T_L + T_R`.
///
/// Column `k` (1-based) is `√(2/(n+1)) sin(jkπ/(n+1))`, `j = 1..=n`, with eigenvalue
/// `2 cos(kπ/(n+1))`.
#[derive(Debug, Clone)]
pub struct SineBasis {
    n: usize,
    /// Row-major `n × n`; entry `(j, k)` with zero-based indices.
    vectors: Vec<f64>,
    eigenvalues: Vec<f64>,
}

impl SineBasis {
    pub fn new(n: usize) -> Self {
        let norm = (2.0 / (n as f64 + 1.0)).sqrt();
        let angle = PI / (n as f64 + 1.0);
        let mut vectors = Vec::with_capacity(n * n);
        for j in 1..=n {
            for k in 1..=n {
                vectors.push(norm * ((j * k) as f64 * angle).sin());
            }
        }
        let eigenvalues = (1..=n).map(|k| 2.0 * (k as f64 * angle).cos()).collect();
        Self {
            n,
            vectors,
            eigenvalues,
        }
    }

    /// Eigenvalues of `T_L + T_R`, in column order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn vector_entry(&self, j: usize, k: usize) -> f64 {
        self.vectors[j * self.n + k]
    }

    /// `V diag(multipliers) Vᵀ data`.
    pub fn apply_diagonal(&self, data: &mut [Complex64], multipliers: &[Complex64]) {
        let n = self.n;
        assert_eq!(data.len(), n);
        let coefficients: Vec<Complex64> = (0..n)
            .map(|k| {
                let c: Complex64 = (0..n).map(|j| data[j] * self.vectors[j * n + k]).sum();
                c * multipliers[k]
            })
            .collect();
        for (j, out) in data.iter_mut().enumerate() {
            let row = &self.vectors[j * n..(j + 1) * n];
            *out = row.iter().zip(&coefficients).map(|(v, c)| c * v).sum();
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn left_phase_is_left_translation() {
        let plan = FourierPlan::new(7);
        let mut data: Vec<Complex64> = (0..7).map(|j| Complex64::new(j as f64, 0.5)).collect();
        let original = data.clone();
        plan.apply_diagonal(&mut data, &plan.translation_phases(true));
        for j in 0..7 {
            assert!((data[j] - original[(j + 1) % 7]).norm() < 1e-12);
        }
        plan.apply_diagonal(&mut data, &plan.translation_phases(false));
        for j in 0..7 {
            assert!((data[j] - original[j]).norm() < 1e-12);
        }
    }

    #[test]
    fn wavenumbers_fold_into_principal_range() {
        let plan = FourierPlan::new(5);
        let ks: Vec<f64> = (0..5).map(|m| plan.wavenumber(m)).collect();
        assert!(ks.iter().all(|k| *k > -PI && *k <= PI));
        assert_eq!(ks[0], 0.0);
        assert!((ks[4] + 2.0 * PI / 5.0).abs() < 1e-15);
    }

    #[test]
    fn sine_basis_is_orthonormal_eigenbasis() {
        let n = 9;
        let basis = SineBasis::new(n);
        for a in 0..n {
            for b in 0..n {
                let dot: f64 = (0..n)
                    .map(|j| basis.vector_entry(j, a) * basis.vector_entry(j, b))
                    .sum();
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!((dot - expect).abs() < 1e-13);
            }
            // (T_L + T_R) v = λ v with zero padding at both ends.
            for j in 0..n {
                let left = if j > 0 { basis.vector_entry(j - 1, a) } else { 0.0 };
                let right = if j + 1 < n { basis.vector_entry(j + 1, a) } else { 0.0 };
                let lhs = left + right;
                assert!((lhs - basis.eigenvalues()[a] * basis.vector_entry(j, a)).abs() < 1e-13);
            }
        }
    }
}
