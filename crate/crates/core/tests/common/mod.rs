//! Reference computations on nalgebra's Householder/QR based decompositions.
//! Nothing here goes through the Jacobi kernels.

#![allow(dead_code)]

use nalgebra::DMatrix;
use num_complex::Complex64;
use svineq::generators::{ginibre, rng_from_seed};
use svineq::linalg::ComplexMatrix;

pub type Na = DMatrix<Complex64>;

pub fn to_na(m: &ComplexMatrix) -> Na {
    Na::from_fn(m.rows(), m.cols(), |i, j| m[(i, j)])
}

fn desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

pub fn sv(m: &Na) -> Vec<f64> {
    desc(m.clone().svd(false, false).singular_values.iter().copied().collect())
}

pub fn eig(m: &Na) -> Vec<f64> {
    desc(m.clone().symmetric_eigen().eigenvalues.iter().copied().collect())
}

/// `|M|^γ` from the SVD `M = U Σ V*`.
pub fn abs_power(m: &Na, gamma: f64) -> Na {
    let n = m.ncols();
    let svd = m.clone().svd(true, true);
    let v_t = svd.v_t.unwrap();
    let k = svd.singular_values.len();
    let mut d = Na::zeros(n, n);
    for i in 0..k {
        let s = svd.singular_values[i];
        d[(i, i)] = Complex64::new(if gamma == 0.0 { 1.0 } else if s == 0.0 { 0.0 } else { s.powf(gamma) }, 0.0);
    }
    // Rows of V* beyond k span the kernel; complete them so 0^0 = 1 holds there too.
    let v = full_v(&v_t, n);
    for i in k..n {
        d[(i, i)] = Complex64::new(if gamma == 0.0 { 1.0 } else { 0.0 }, 0.0);
    }
    let out = &v * d * v.adjoint();
    (&out + out.adjoint()) * Complex64::new(0.5, 0.0)
}

fn full_v(v_t: &Na, n: usize) -> Na {
    if v_t.nrows() == n {
        return v_t.adjoint();
    }
    // Kernel completion through the eigenvectors of I − V V*.
    let v = v_t.adjoint();
    let proj = Na::identity(n, n) - &v * v.adjoint();
    let e = proj.symmetric_eigen();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.sort_by(|&a, &b| e.eigenvalues[b].total_cmp(&e.eigenvalues[a]));
    let mut full = Na::zeros(n, n);
    for j in 0..v.ncols() {
        full.set_column(j, &v.column(j));
    }
    for (slot, &src) in (v.ncols()..n).zip(&idx) {
        full.set_column(slot, &e.eigenvectors.column(src));
    }
    full
}

/// `P^α` for Hermitian PSD `P`, clipping tiny negative eigenvalues.
pub fn psd_power(p: &Na, alpha: f64) -> Na {
    let e = p.clone().symmetric_eigen();
    let d = Na::from_diagonal(&e.eigenvalues.map(|l| {
        let l = l.max(0.0);
        Complex64::new(if alpha == 0.0 { 1.0 } else if l == 0.0 { 0.0 } else { l.powf(alpha) }, 0.0)
    }));
    let out = &e.eigenvectors * d * e.eigenvectors.adjoint();
    (&out + out.adjoint()) * Complex64::new(0.5, 0.0)
}

pub fn direct_sum(parts: &[Na]) -> Na {
    let rows = parts.iter().map(|p| p.nrows()).sum();
    let cols = parts.iter().map(|p| p.ncols()).sum();
    let mut out = Na::zeros(rows, cols);
    let (mut r, mut c) = (0, 0);
    for p in parts {
        out.view_mut((r, c), (p.nrows(), p.ncols())).copy_from(p);
        r += p.nrows();
        c += p.ncols();
    }
    out
}

pub fn block(a: &Na, b: &Na, c: &Na) -> Na {
    let (n, m) = (a.nrows(), c.nrows());
    let mut out = Na::zeros(n + m, n + m);
    out.view_mut((0, 0), (n, n)).copy_from(a);
    out.view_mut((0, n), (n, m)).copy_from(b);
    out.view_mut((n, 0), (m, n)).copy_from(&b.adjoint());
    out.view_mut((n, n), (m, m)).copy_from(c);
    out
}

pub fn re_im(a: &Na) -> (Na, Na) {
    let half = Complex64::new(0.5, 0.0);
    let re = (a + a.adjoint()) * half;
    let im = (a - a.adjoint()) * Complex64::new(0.0, -0.5);
    (re, im)
}

pub fn scale(v: &[f64], f: f64) -> Vec<f64> {
    v.iter().map(|x| x * f).collect()
}

/// Asserts `got ≈ want` entrywise relative to the largest magnitude, zero-padding `want`.
pub fn assert_close(label: &str, got: &[f64], want: &[f64], rel: f64) {
    let scale = got.iter().chain(want).fold(1.0_f64, |m, v| m.max(v.abs()));
    for (j, g) in got.iter().enumerate() {
        let w = want.get(j).copied().unwrap_or(0.0);
        assert!((g - w).abs() <= rel * scale, "{label}[{j}]: {g} vs {w}");
    }
}

pub fn random(seed: u64, rows: usize, cols: usize) -> ComplexMatrix {
    ginibre(&mut rng_from_seed(seed), rows, cols)
}

/// The non-normal 2×2 example `[[−1+i, 1], [i, 1+2i]]`.
pub fn example() -> ComplexMatrix {
    ComplexMatrix::from_rows(&[
        vec![Complex64::new(-1.0, 1.0), Complex64::new(1.0, 0.0)],
        vec![Complex64::new(0.0, 1.0), Complex64::new(1.0, 2.0)],
    ])
    .unwrap()
}
