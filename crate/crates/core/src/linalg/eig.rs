//! Hermitian eigendecomposition by cyclic complex Jacobi rotations.

use super::matrix::{ComplexMatrix, C64};
use super::spectrum::Tolerances;
use crate::error::{Error, Result};

pub(crate) const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-13;

/// Eigenvalues (descending) and orthonormal eigenvectors stored as columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// `V diag(λ) V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        spectral_sum(&self.eigenvectors, &self.eigenvalues)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues.last().copied().unwrap_or(0.0)
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues.first().copied().unwrap_or(0.0)
    }
}

/// `V diag(w) V*` for real weights `w`, one per column of `V`.
pub(crate) fn spectral_sum(v: &ComplexMatrix, weights: &[f64]) -> ComplexMatrix {
    let n = v.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for (k, &w) in weights.iter().enumerate() {
        if w == 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = v[(i, k)] * w;
            for j in 0..n {
                out[(i, j)] += vik * v[(j, k)].conj();
            }
        }
    }
    out
}

/// Plane rotation `G = [[c, s], [-s·φ, c·φ]]` with `|φ| = 1`.
///
/// For a Hermitian 2×2 `H = [[app, apq], [conj(apq), aqq]]`, `G* H G` is diagonal.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Rotation {
    pub g00: C64,
    pub g01: C64,
    pub g10: C64,
    pub g11: C64,
}

impl Rotation {
    pub(crate) fn annihilating(app: f64, aqq: f64, apq: C64) -> Option<Rotation> {
        let g = apq.norm();
        if g == 0.0 {
            return None;
        }
        let phase = (apq / g).conj();
        let theta = (aqq - app) / (2.0 * g);
        let t = if theta >= 0.0 {
            1.0 / (theta + theta.hypot(1.0))
        } else {
            -1.0 / (-theta + theta.hypot(1.0))
        };
        let c = 1.0 / t.hypot(1.0);
        let s = t * c;
        Some(Rotation {
            g00: C64::new(c, 0.0),
            g01: C64::new(s, 0.0),
            g10: -phase * s,
            g11: phase * c,
        })
    }

    /// `M ← M G` on columns `p`, `q`.
    #[inline]
    pub(crate) fn apply_right(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        for k in 0..m.rows() {
            let x = m[(k, p)];
            let y = m[(k, q)];
            m[(k, p)] = x * self.g00 + y * self.g10;
            m[(k, q)] = x * self.g01 + y * self.g11;
        }
    }

    /// `M ← G* M` on rows `p`, `q`.
    #[inline]
    fn apply_left_adjoint(&self, m: &mut ComplexMatrix, p: usize, q: usize) {
        for k in 0..m.cols() {
            let x = m[(p, k)];
            let y = m[(q, k)];
            m[(p, k)] = self.g00.conj() * x + self.g10.conj() * y;
            m[(q, k)] = self.g01.conj() * x + self.g11.conj() * y;
        }
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)].norm_sqr();
            }
        }
    }
    acc.sqrt()
}

pub(crate) fn check_hermitian(a: &ComplexMatrix, tol: &Tolerances, op: &'static str) -> Result<()> {
    if !a.is_square() {
        return Err(Error::shape(op, format!("{}x{} is not square", a.rows(), a.cols())));
    }
    let skew = a.max_abs_diff(&a.adjoint())?;
    let bound = tol.recon_tol * (1.0 + a.frobenius_norm());
    if skew > bound {
        return Err(Error::hypothesis(
            "hermitian",
            format!("max |A - A*| = {skew:.3e} exceeds {bound:.3e}"),
        ));
    }
    Ok(())
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input is first replaced by its exact Hermitian part; it must be
/// Hermitian to within `recon_tol · (1 + ‖A‖_F)`.
pub fn hermitian_eig(a: &ComplexMatrix, tol: &Tolerances) -> Result<EigenDecomposition> {
    check_hermitian(a, tol, "hermitian_eig")?;
    let mut work = a.hermitian_part()?;
    let n = work.rows();
    let mut v = ComplexMatrix::identity(n);
    let target = OFF_DIAGONAL_TOL * work.frobenius_norm();

    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        if off_diagonal_norm(&work) <= target {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let Some(rot) =
                    Rotation::annihilating(work[(p, p)].re, work[(q, q)].re, work[(p, q)])
                else {
                    continue;
                };
                rot.apply_right(&mut work, p, q);
                rot.apply_left_adjoint(&mut work, p, q);
                work[(p, q)] = C64::new(0.0, 0.0);
                work[(q, p)] = C64::new(0.0, 0.0);
                work[(p, p)].im = 0.0;
                work[(q, q)].im = 0.0;
                rot.apply_right(&mut v, p, q);
            }
        }
    }
    if !converged && off_diagonal_norm(&work) > target {
        return Err(Error::Convergence {
            routine: "hermitian_eig",
            sweeps: MAX_SWEEPS,
        });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| work[(j, j)].re.total_cmp(&work[(i, i)].re));
    let eigenvalues = order.iter().map(|&i| work[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        for i in 0..n {
            eigenvectors[(i, dst)] = v[(i, src)];
        }
    }
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}
