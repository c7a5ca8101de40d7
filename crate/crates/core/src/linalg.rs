// Copyright 2026 The decoscatter Authors
// SPDX-License-Identifier: Apache-2.0

//! Small dense helpers shared by the density-matrix code paths.

use nalgebra::DMatrix;
use num_complex::Complex64;

/// Eigenvalues below this are treated as zero before taking logarithms.
pub const EIGENVALUE_FLOOR: f64 = 1e-12;

/// Eigenvalues of a Hermitian matrix, ascending. Only the lower triangle is
/// trusted; the matrix is symmetrized first.
pub fn hermitian_eigenvalues(matrix: &DMatrix<Complex64>) -> Vec<f64> {
    let sym = (matrix + matrix.adjoint()) * Complex64::new(0.5, 0.0);
    let mut values: Vec<f64> = sym.symmetric_eigenvalues().iter().copied().collect();
    values.sort_by(f64::total_cmp);
    values
}

/// `-sum lambda ln lambda`, with eigenvalues below [`EIGENVALUE_FLOOR`]
/// dropped. A pure state whose top eigenvalue rounds above 1 gives 0, not a
/// negative rounding residue.
pub fn entropy_of_spectrum(eigenvalues: &[f64]) -> f64 {
    eigenvalues
        .iter()
        .filter(|&&l| l > EIGENVALUE_FLOOR)
        .map(|&l| -l * l.ln())
        .sum::<f64>()
        .max(0.0)
}

/// `-p ln p - (1-p) ln(1-p)` with `0 ln 0 = 0`.
pub fn binary_entropy(p: f64) -> f64 {
    let term = |x: f64| if x > 0.0 { -x * x.ln() } else { 0.0 };
    term(p) + term(1.0 - p)
}

/// Largest `|M_ij - conj(M_ji)|`.
pub fn hermiticity_defect(matrix: &DMatrix<Complex64>) -> f64 {
    let n = matrix.nrows();
    let mut worst = 0.0_f64;
    for j in 0..n {
        for i in j..n {
            worst = worst.max((matrix[(i, j)] - matrix[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs(matrix: &DMatrix<Complex64>) -> f64 {
    matrix.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Gram matrix `G_ab = sqrt(w_a w_b) <psi_b | psi_a> * measure`. Its nonzero
/// spectrum equals that of `sum_a w_a |psi_a><psi_a| * measure`.
pub fn weighted_gram(
    weights: &[f64],
    states: &[Vec<Complex64>],
    measure: f64,
) -> DMatrix<Complex64> {
    let r = states.len();
    let mut gram = DMatrix::zeros(r, r);
    for a in 0..r {
        for b in 0..=a {
            let overlap: Complex64 = states[b]
                .iter()
                .zip(&states[a])
                .map(|(x, y)| x.conj() * y)
                .sum();
            let value = overlap * (weights[a] * weights[b]).sqrt() * measure;
            gram[(a, b)] = value;
            gram[(b, a)] = value.conj();
        }
    }
    gram
}

/// Ordinary least squares `y = a + b x`; returns `(a, b, r_squared)`.
pub fn linear_fit(x: &[f64], y: &[f64]) -> (f64, f64, f64) {
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let sxx: f64 = x.iter().map(|a| (a - mx) * (a - mx)).sum();
    let syy: f64 = y.iter().map(|b| (b - my) * (b - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let r2 = if syy == 0.0 {
        1.0
    } else {
        sxy * sxy / (sxx * syy)
    };
    (intercept, slope, r2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn binary_entropy_values() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert_abs_diff_eq!(binary_entropy(0.5), std::f64::consts::LN_2, epsilon = 1e-15);
    }

    #[test]
    fn gram_spectrum_matches_dense() {
        let states = vec![
            vec![
                Complex64::new(0.6, 0.0),
                Complex64::new(0.0, 0.8),
                Complex64::new(0.0, 0.0),
            ],
            vec![
                Complex64::new(0.0, 0.0),
                Complex64::new(0.6, 0.0),
                Complex64::new(0.8, 0.0),
            ],
        ];
        let weights = [0.3, 0.7];
        let mut dense = DMatrix::zeros(3, 3);
        for (w, s) in weights.iter().zip(&states) {
            for i in 0..3 {
                for j in 0..3 {
                    dense[(i, j)] += s[i] * s[j].conj() * *w;
                }
            }
        }
        let full = hermitian_eigenvalues(&dense);
        let low = hermitian_eigenvalues(&weighted_gram(&weights, &states, 1.0));
        assert_abs_diff_eq!(full[0], 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(full[1], low[0], epsilon = 1e-14);
        assert_abs_diff_eq!(full[2], low[1], epsilon = 1e-14);
    }

    #[test]
    fn fit_recovers_line() {
        let x = [1.0, 2.0, 4.0];
        let y: Vec<f64> = x.iter().map(|v| 0.5 + 3.0 * v).collect();
        let (a, b, r2) = linear_fit(&x, &y);
        assert_abs_diff_eq!(a, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(b, 3.0, epsilon = 1e-12);
        assert_abs_diff_eq!(r2, 1.0, epsilon = 1e-12);
    }
}
