//! Spectral calculus and operator predicates built on the Jacobi kernels.

use serde::Serialize;

use super::eig::{check_hermitian, hermitian_eig, spectral_sum};
use super::matrix::{ComplexMatrix, C64};
use super::spectrum::Tolerances;
use super::svd::{singular_values, svd};
use crate::error::{Error, Result};

/// Largest condition number accepted for negative powers.
pub const MAX_CONDITION: f64 = 1e12;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PsdReport {
    pub is_psd: bool,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
}

impl PsdReport {
    /// `λ_min / max(1, |λ_max|)`.
    pub fn relative_min(&self) -> f64 {
        self.min_eigenvalue / self.max_eigenvalue.abs().max(1.0)
    }
}

/// PSD test: `λ_min ≥ -psd_tol · max(1, λ_max)`.
pub fn is_psd(a: &ComplexMatrix, tol: &Tolerances) -> Result<PsdReport> {
    let e = hermitian_eig(a, tol)?;
    let min = e.min_eigenvalue();
    let max = e.max_eigenvalue();
    Ok(PsdReport {
        is_psd: min >= -tol.psd_tol * max.max(1.0),
        min_eigenvalue: min,
        max_eigenvalue: max,
    })
}

fn power_weight(lambda: f64, exponent: f64) -> f64 {
    if exponent == 0.0 {
        1.0
    } else if lambda == 0.0 {
        0.0
    } else {
        lambda.powf(exponent)
    }
}

/// Real power `P^α` of a PSD matrix, with the convention `0^0 = 1`.
///
/// Eigenvalues in `[-psd_tol·λ_max, 0)` are clipped to zero. Negative
/// exponents need `P` strictly positive definite with condition number at
/// most [`MAX_CONDITION`].
pub fn power_op(a: &ComplexMatrix, alpha: f64, tol: &Tolerances) -> Result<ComplexMatrix> {
    if !alpha.is_finite() {
        return Err(Error::Parameter(format!("exponent {alpha} is not finite")));
    }
    check_hermitian(a, tol, "power_op")?;
    let e = hermitian_eig(a, tol)?;
    let (min, max) = (e.min_eigenvalue(), e.max_eigenvalue());
    if min < -tol.psd_tol * max.max(1.0) {
        return Err(Error::hypothesis(
            "psd",
            format!("λ_min = {min:.3e} is below the PSD tolerance"),
        ));
    }
    if alpha < 0.0 && (min <= 0.0 || max / min > MAX_CONDITION) {
        return Err(Error::Domain(format!(
            "exponent {alpha} needs a positive definite operand (λ_min = {min:.3e}, λ_max = {max:.3e})"
        )));
    }
    let weights: Vec<f64> = e
        .eigenvalues
        .iter()
        .map(|&l| power_weight(l.max(0.0), alpha))
        .collect();
    spectral_sum(&e.eigenvectors, &weights).hermitian_part()
}

/// `|A|^γ = (A*A)^{γ/2}`, evaluated from the SVD so small singular values keep full accuracy.
pub fn abs_power(a: &ComplexMatrix, gamma: f64, tol: &Tolerances) -> Result<ComplexMatrix> {
    if !gamma.is_finite() {
        return Err(Error::Parameter(format!("exponent {gamma} is not finite")));
    }
    let d = svd(a, tol)?;
    let n = a.cols();
    let weights: Vec<f64> = (0..n)
        .map(|j| d.singular_values.get(j))
        .map(|s| {
            if gamma < 0.0 && s == 0.0 {
                Err(Error::Domain(format!(
                    "|A|^{gamma} is undefined for singular A"
                )))
            } else {
                Ok(power_weight(s, gamma))
            }
        })
        .collect::<Result<_>>()?;
    spectral_sum(&d.v, &weights).hermitian_part()
}

/// Absolute value `|A| = (A*A)^{1/2}`.
pub fn abs_op(a: &ComplexMatrix, tol: &Tolerances) -> Result<ComplexMatrix> {
    abs_power(a, 1.0, tol)
}

/// Cartesian decomposition `A = Re(A) + i·Im(A)`, both parts exactly Hermitian.
pub fn cartesian(a: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    if !a.is_square() {
        return Err(Error::shape("cartesian", "matrix is not square"));
    }
    let re = a.hermitian_part()?;
    let n = a.rows();
    let mut im = ComplexMatrix::zeros(n, n);
    let minus_half_i = C64::new(0.0, -0.5);
    for i in 0..n {
        for j in 0..n {
            im[(i, j)] = (a[(i, j)] - a[(j, i)].conj()) * minus_half_i;
        }
    }
    Ok((re, im))
}

/// `s_1(A)`.
pub fn operator_norm(a: &ComplexMatrix, tol: &Tolerances) -> Result<f64> {
    Ok(singular_values(a, tol)?.largest())
}

/// `max |A*A − AA*|`.
pub fn normality_defect(a: &ComplexMatrix) -> Result<f64> {
    if !a.is_square() {
        return Err(Error::shape("normality", "matrix is not square"));
    }
    let ah = a.adjoint();
    ah.matmul(a)?.max_abs_diff(&a.matmul(&ah)?)
}

/// `‖A*A − AA*‖_max ≤ recon_tol · (1 + ‖A‖²)`, with the Frobenius norm as the scale.
pub fn is_normal(a: &ComplexMatrix, tol: &Tolerances) -> Result<bool> {
    let scale = a.frobenius_norm();
    Ok(normality_defect(a)? <= tol.recon_tol * (1.0 + scale * scale))
}

/// `‖U*U − I‖_max ≤ unitary_tol`.
pub fn is_unitary(a: &ComplexMatrix, tol: &Tolerances) -> Result<bool> {
    if !a.is_square() {
        return Ok(false);
    }
    let gram = a.adjoint().matmul(a)?;
    Ok(gram.max_abs_diff(&ComplexMatrix::identity(a.rows()))? <= tol.unitary_tol)
}

/// True when `‖A − A*‖_max ≤ recon_tol · (1 + ‖A‖_F)`.
pub fn is_hermitian(a: &ComplexMatrix, tol: &Tolerances) -> bool {
    check_hermitian(a, tol, "is_hermitian").is_ok()
}
