//! One-sided (Hestenes) Jacobi SVD.
//!
//! Column pairs of `A` are rotated until mutually orthogonal; the column
//! norms are then the singular values. Small singular values keep high
//! relative accuracy because `A*A` is never formed.

use super::eig::{Rotation, MAX_SWEEPS};
use super::matrix::{ComplexMatrix, C64};
use super::spectrum::{SingularSpectrum, Tolerances};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct SvdDecomposition {
    /// `m×m` unitary.
    pub u: ComplexMatrix,
    /// `min(m, n)` values, descending.
    pub singular_values: SingularSpectrum,
    /// `n×n` unitary.
    pub v: ComplexMatrix,
}

impl SvdDecomposition {
    /// `U Σ V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let (m, n) = (self.u.rows(), self.v.rows());
        let mut sigma = ComplexMatrix::zeros(m, n);
        for (j, &s) in self.singular_values.values().iter().enumerate() {
            sigma[(j, j)] = C64::new(s, 0.0);
        }
        self.u
            .matmul(&sigma)
            .and_then(|us| us.matmul(&self.v.adjoint()))
            .expect("SVD factors have compatible shapes")
    }
}

struct Columns {
    cols: Vec<Vec<C64>>,
    v: Option<Vec<Vec<C64>>>,
}

fn dot(x: &[C64], y: &[C64]) -> C64 {
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

fn norm_sqr(x: &[C64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum()
}

fn rotate_pair(cols: &mut [Vec<C64>], p: usize, q: usize, rot: &Rotation) {
    let (lo, hi) = cols.split_at_mut(q);
    let (cp, cq) = (&mut lo[p], &mut hi[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (a, b) = (*x, *y);
        *x = a * rot.g00 + b * rot.g10;
        *y = a * rot.g01 + b * rot.g11;
    }
}

/// Orthogonalizes the columns of a tall (`m ≥ n`) matrix in place.
fn orthogonalize(a: &ComplexMatrix, want_v: bool) -> Result<Columns> {
    let (m, n) = a.shape();
    debug_assert!(m >= n);
    let mut cols: Vec<Vec<C64>> = (0..n).map(|j| a.column(j)).collect();
    let mut v = want_v.then(|| {
        (0..n)
            .map(|j| {
                let mut e = vec![C64::new(0.0, 0.0); n];
                e[j] = C64::new(1.0, 0.0);
                e
            })
            .collect::<Vec<_>>()
    });
    let threshold = (m as f64) * f64::EPSILON;

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let app = norm_sqr(&cols[p]);
                let aqq = norm_sqr(&cols[q]);
                if app == 0.0 || aqq == 0.0 {
                    continue;
                }
                let apq = dot(&cols[p], &cols[q]);
                if apq.norm() <= threshold * (app * aqq).sqrt() {
                    continue;
                }
                let Some(rot) = Rotation::annihilating(app, aqq, apq) else {
                    continue;
                };
                rotated = true;
                rotate_pair(&mut cols, p, q, &rot);
                if let Some(v) = v.as_mut() {
                    // V is stored by columns, so the same pair update applies.
                    rotate_pair(v, p, q, &rot);
                }
            }
        }
        if !rotated {
            return Ok(Columns { cols, v });
        }
    }
    Err(Error::Convergence {
        routine: "svd",
        sweeps: MAX_SWEEPS,
    })
}

/// Extends a set of orthonormal columns (some slots empty) to a full orthonormal basis of C^m.
///
/// Each empty slot takes the standard basis vector with the largest
/// component orthogonal to the columns placed so far.
fn complete_basis(slots: &mut [Option<Vec<C64>>], m: usize) {
    let residual = |slots: &[Option<Vec<C64>>], k: usize| {
        let mut w = vec![C64::new(0.0, 0.0); m];
        w[k] = C64::new(1.0, 0.0);
        // Two Gram-Schmidt passes.
        for _ in 0..2 {
            for u in slots.iter().flatten() {
                let proj = dot(u, &w);
                for (wi, ui) in w.iter_mut().zip(u) {
                    *wi -= proj * ui;
                }
            }
        }
        w
    };
    for idx in 0..slots.len() {
        if slots[idx].is_some() {
            continue;
        }
        let mut best = residual(slots, 0);
        let mut best_norm = norm_sqr(&best);
        for k in 1..m {
            let w = residual(slots, k);
            let nrm = norm_sqr(&w);
            if nrm > best_norm {
                best = w;
                best_norm = nrm;
            }
        }
        let nrm = best_norm.sqrt();
        for wi in best.iter_mut() {
            *wi /= nrm;
        }
        slots[idx] = Some(best);
    }
}

fn columns_to_matrix(cols: &[Vec<C64>]) -> ComplexMatrix {
    let rows = cols[0].len();
    let mut out = ComplexMatrix::zeros(rows, cols.len());
    for (j, c) in cols.iter().enumerate() {
        for (i, z) in c.iter().enumerate() {
            out[(i, j)] = *z;
        }
    }
    out
}

fn tall_svd(a: &ComplexMatrix, tol: &Tolerances) -> Result<SvdDecomposition> {
    let (m, n) = a.shape();
    let Columns { cols, v } = orthogonalize(a, true)?;
    let v = v.expect("requested V");
    let norms: Vec<f64> = cols.iter().map(|c| norm_sqr(c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));

    let top = norms.iter().copied().fold(0.0, f64::max);
    let null_below = top * (m as f64) * f64::EPSILON;
    let mut u_slots: Vec<Option<Vec<C64>>> = vec![None; m];
    for (dst, &src) in order.iter().enumerate() {
        let s = norms[src];
        if s > null_below && s > 0.0 {
            u_slots[dst] = Some(cols[src].iter().map(|z| z / s).collect());
        }
    }
    complete_basis(&mut u_slots, m);
    let u_cols: Vec<Vec<C64>> = u_slots.into_iter().map(Option::unwrap).collect();
    let v_cols: Vec<Vec<C64>> = order.iter().map(|&j| v[j].clone()).collect();
    let values = order.iter().map(|&j| norms[j]).collect();

    Ok(SvdDecomposition {
        u: columns_to_matrix(&u_cols),
        singular_values: SingularSpectrum::from_unsorted(values, tol.clip_tol)?,
        v: columns_to_matrix(&v_cols),
    })
}

/// Full SVD `A = U Σ V*` with square unitary `U`, `V`.
pub fn svd(a: &ComplexMatrix, tol: &Tolerances) -> Result<SvdDecomposition> {
    if a.rows() >= a.cols() {
        tall_svd(a, tol)
    } else {
        let t = tall_svd(&a.adjoint(), tol)?;
        Ok(SvdDecomposition {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        })
    }
}

/// Singular values only; skips accumulation of the unitary factors.
pub fn singular_values(a: &ComplexMatrix, tol: &Tolerances) -> Result<SingularSpectrum> {
    let cols = if a.rows() >= a.cols() {
        orthogonalize(a, false)?.cols
    } else {
        orthogonalize(&a.adjoint(), false)?.cols
    };
    let values = cols.iter().map(|c| norm_sqr(c).sqrt()).collect();
    SingularSpectrum::from_unsorted(values, tol.clip_tol)
}
