//! Dense materialization of linear maps, for exact structural checks on small windows.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Column `j` is `apply(e_j)`.
pub fn materialize<F>(dim: usize, apply: F) -> DMatrix<Complex64>
where
    F: Fn(&mut [Complex64]),
{
    let mut m = DMatrix::zeros(dim, dim);
    let mut col = vec![Complex64::new(0.0, 0.0); dim];
    for j in 0..dim {
        col.fill(Complex64::new(0.0, 0.0));
        col[j] = Complex64::new(1.0, 0.0);
        apply(&mut col);
        for (i, a) in col.iter().enumerate() {
            m[(i, j)] = *a;
        }
    }
    m
}

/// `max |(U U†)_{ij} - δ_{ij}|`.
pub fn unitarity_defect(m: &DMatrix<Complex64>) -> f64 {
    let product = m * m.adjoint();
    let mut worst = 0.0f64;
    for i in 0..product.nrows() {
        for j in 0..product.ncols() {
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((product[(i, j)] - Complex64::new(target, 0.0)).norm());
        }
    }
    worst
}

/// Exactly one entry equal to `1` in every row and column, all others exactly `0`.
pub fn is_permutation(m: &DMatrix<Complex64>) -> bool {
    if m.nrows() != m.ncols() {
        return false;
    }
    let one = Complex64::new(1.0, 0.0);
    let zero = Complex64::new(0.0, 0.0);
    if m.iter().any(|a| *a != one && *a != zero) {
        return false;
    }
    let rows_ok = m.row_iter().all(|r| r.iter().filter(|a| **a == one).count() == 1);
    let cols_ok = m.column_iter().all(|c| c.iter().filter(|a| **a == one).count() == 1);
    rows_ok && cols_ok
}

/// Largest entrywise modulus of `a - b`.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn permutation_detection() {
        let swap = materialize(3, |v| v.swap(0, 2));
        assert!(is_permutation(&swap));
        assert_eq!(unitarity_defect(&swap), 0.0);
        let scaled = materialize(2, |v| v[0] *= 2.0);
        assert!(!is_permutation(&scaled));
        assert!(unitarity_defect(&scaled) > 1.0);
        let dropped = materialize(2, |v| v[1] = Complex64::new(0.0, 0.0));
        assert!(!is_permutation(&dropped));
    }
}
