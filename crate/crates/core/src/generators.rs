//! Seeded generators for every operator class the inequality checks assume.
//!
//! Each class is a deterministic map from a list of *latent* Ginibre
//! matrices to the class members. Local search perturbs the latent
//! matrices, so hypotheses such as block positivity survive every move.
//!
//! The stream is ChaCha8 seeded from a `u64`, with standard normal
//! variates from `rand_distr`; a seed therefore reproduces bit-for-bit
//! on any platform with IEEE-754 doubles.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, operator_norm, ComplexMatrix, Tolerances, C64};

pub type Latent = Vec<ComplexMatrix>;

/// Shift used by the positive definite class, relative to `scale`.
pub const PD_SHIFT: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatrixClass {
    Ginibre,
    Hermitian,
    Psd,
    PositiveDefinite,
    Normal,
    Unitary,
    Contraction,
    /// `(A, B, C)` blocks of `W*W`.
    BlockPsd,
    /// `(P, q(P))` with `[[P, q(P)*], [q(P), P]] ≥ 0`.
    CommutingPair,
    /// `(|T|, |T*|, T)`.
    CanonicalTriple,
}

const ALL_CLASSES: [(MatrixClass, &str); 10] = [
    (MatrixClass::Ginibre, "ginibre"),
    (MatrixClass::Hermitian, "hermitian"),
    (MatrixClass::Psd, "psd"),
    (MatrixClass::PositiveDefinite, "positive_definite"),
    (MatrixClass::Normal, "normal"),
    (MatrixClass::Unitary, "unitary"),
    (MatrixClass::Contraction, "contraction"),
    (MatrixClass::BlockPsd, "block_psd"),
    (MatrixClass::CommutingPair, "commuting_pair"),
    (MatrixClass::CanonicalTriple, "canonical_triple"),
];

impl fmt::Display for MatrixClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = ALL_CLASSES
            .iter()
            .find(|(c, _)| c == self)
            .map(|(_, n)| *n)
            .expect("every class is named");
        f.write_str(name)
    }
}

impl FromStr for MatrixClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ALL_CLASSES
            .iter()
            .find(|(_, n)| *n == s)
            .map(|(c, _)| *c)
            .ok_or_else(|| Error::Parameter(format!("unknown matrix class `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GenConfig {
    pub seed: u64,
    /// `n`; for block classes the size of the first diagonal block.
    pub rows: usize,
    /// `m`; equal to `rows` for square classes.
    pub cols: usize,
    pub scale: f64,
    pub class: MatrixClass,
}

impl GenConfig {
    pub fn square(seed: u64, n: usize, class: MatrixClass) -> Self {
        GenConfig {
            seed,
            rows: n,
            cols: n,
            scale: 1.0,
            class,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.rows == 0 || self.cols == 0 {
            return Err(Error::Parameter("dimensions must be at least 1".into()));
        }
        if !(self.scale.is_finite() && self.scale > 0.0) {
            return Err(Error::Parameter(format!("scale {} must be positive", self.scale)));
        }
        Ok(())
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Matrix of independent standard complex Gaussians (real and imaginary parts each N(0, 1)).
pub fn ginibre<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix {
    let data = (0..rows * cols)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im)
        })
        .collect();
    ComplexMatrix::new(rows, cols, data).expect("Gaussian samples are finite")
}

fn splitmix64(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9E37_79B9_7F4A_7C15);
    x = (x ^ (x >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    x ^ (x >> 31)
}

/// Stable sub-stream seed for `(base, label, indices…)`.
pub fn derive_seed(base: u64, label: &str, indices: &[u64]) -> u64 {
    // FNV-1a over the label; std's hasher is not stable across releases.
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in label.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0000_0100_0000_01B3);
    }
    let mut s = splitmix64(base ^ splitmix64(h));
    for &i in indices {
        s = splitmix64(s ^ splitmix64(i.wrapping_add(0x5851_F42D_4C95_7F2D)));
    }
    s
}

/// Gram-Schmidt orthonormalization of the columns of a square matrix.
///
/// The implied `R` factor has a positive diagonal, which makes the map
/// from a Ginibre draw Haar-distributed.
fn orthonormalize(z: &ComplexMatrix) -> ComplexMatrix {
    let n = z.rows();
    let mut q: Vec<Vec<C64>> = Vec::with_capacity(n);
    let mut fallback = 0..n;
    for j in 0..n {
        let mut v = z.column(j);
        let mut norm0 = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        loop {
            for _ in 0..2 {
                for u in &q {
                    let proj: C64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                    for (vi, ui) in v.iter_mut().zip(u) {
                        *vi -= proj * ui;
                    }
                }
            }
            let nrm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
            if nrm > 1e-10 * norm0.max(f64::MIN_POSITIVE) {
                v.iter_mut().for_each(|x| *x /= nrm);
                break;
            }
            // Degenerate draw: replace with the next standard basis vector.
            let k = fallback.next().expect("basis completion");
            v = vec![C64::new(0.0, 0.0); n];
            v[k] = C64::new(1.0, 0.0);
            norm0 = 1.0;
        }
        q.push(v);
    }
    let mut out = ComplexMatrix::zeros(n, n);
    for (j, col) in q.iter().enumerate() {
        for (i, x) in col.iter().enumerate() {
            out[(i, j)] = *x;
        }
    }
    out
}

fn gram(z: &ComplexMatrix) -> ComplexMatrix {
    z.adjoint()
        .matmul(z)
        .and_then(|g| g.hermitian_part())
        .expect("Gram matrix is square")
}

impl MatrixClass {
    /// Shapes of the latent Ginibre matrices for `rows = n`, `cols = m`.
    pub fn latent_shapes(&self, n: usize, m: usize) -> Vec<(usize, usize)> {
        match self {
            MatrixClass::Ginibre => vec![(n, m)],
            MatrixClass::Hermitian
            | MatrixClass::Psd
            | MatrixClass::PositiveDefinite
            | MatrixClass::Unitary => vec![(n, n)],
            MatrixClass::Normal => vec![(n, n), (n, 1)],
            MatrixClass::Contraction => vec![(n, m), (1, 1)],
            MatrixClass::BlockPsd => vec![(n + m, n + m)],
            MatrixClass::CommutingPair => vec![(n, n), (3, 1), (1, 1)],
            MatrixClass::CanonicalTriple => vec![(m, n)],
        }
    }

    pub fn draw_latent<R: Rng + ?Sized>(&self, rng: &mut R, n: usize, m: usize) -> Latent {
        self.latent_shapes(n, m)
            .into_iter()
            .map(|(r, c)| ginibre(rng, r, c))
            .collect()
    }

    /// Maps latent matrices to class members. `n` is the first diagonal
    /// block size and only matters for [`MatrixClass::BlockPsd`].
    pub fn realize(
        &self,
        latent: &[ComplexMatrix],
        n: usize,
        scale: f64,
        tol: &Tolerances,
    ) -> Result<Vec<ComplexMatrix>> {
        let want = self.latent_shapes(1, 1).len();
        if latent.len() != want {
            return Err(Error::Arity {
                expected: format!("{want} latent matrices for class {self}"),
                got: latent.len(),
            });
        }
        let z = &latent[0];
        Ok(match self {
            MatrixClass::Ginibre => vec![z.scale_real(scale)],
            MatrixClass::Hermitian => vec![z.hermitian_part()?.scale_real(scale)],
            MatrixClass::Psd => vec![gram(z).scale_real(scale)],
            MatrixClass::PositiveDefinite => {
                let shift = ComplexMatrix::identity(z.cols()).scale_real(PD_SHIFT);
                vec![gram(z).add(&shift)?.scale_real(scale)]
            }
            MatrixClass::Unitary => vec![orthonormalize(z)],
            MatrixClass::Normal => {
                let u = orthonormalize(z);
                let d = ComplexMatrix::diag(latent[1].as_slice()).scale_real(scale);
                vec![u.matmul(&d)?.matmul(&u.adjoint())?]
            }
            MatrixClass::Contraction => {
                let g = operator_norm(z, tol)?;
                let w = latent[1][(0, 0)].norm();
                if g + w == 0.0 {
                    vec![z.clone()]
                } else {
                    vec![z.scale_real(1.0 / (g + w))]
                }
            }
            MatrixClass::BlockPsd => split_block(&gram(z).scale_real(scale), n)?,
            MatrixClass::CommutingPair => {
                let p = gram(z).scale_real(scale);
                vec![p.clone(), commuting_partner(&p, &latent[1], &latent[2], tol)?]
            }
            MatrixClass::CanonicalTriple => {
                let t = z.scale_real(scale);
                let abs_t = crate::linalg::abs_op(&t, tol)?;
                let abs_ts = crate::linalg::abs_op(&t.adjoint(), tol)?;
                vec![abs_t, abs_ts, t]
            }
        })
    }
}

/// Splits a square matrix into `(A, B, C)` with `A` of size `n×n`.
pub fn split_block(g: &ComplexMatrix, n: usize) -> Result<Vec<ComplexMatrix>> {
    let total = g.rows();
    if n == 0 || n >= total {
        return Err(Error::shape(
            "split_block",
            format!("cannot split {total}x{total} at {n}"),
        ));
    }
    let m = total - n;
    Ok(vec![g.block(0, 0, n, n)?, g.block(0, n, n, m)?, g.block(n, n, m, m)?])
}

/// `q(P) = c · P · r(P/λ_max)` with `deg r ≤ 2`, scaled so that `|r| ≤ 1/(1+|w|)` on the spectrum.
fn commuting_partner(
    p: &ComplexMatrix,
    coeffs: &ComplexMatrix,
    w: &ComplexMatrix,
    tol: &Tolerances,
) -> Result<ComplexMatrix> {
    let n = p.rows();
    let eig = hermitian_eig(p, tol)?;
    let top = eig.max_eigenvalue();
    if top <= 0.0 {
        return Ok(ComplexMatrix::zeros(n, n));
    }
    let r = [coeffs[(0, 0)], coeffs[(1, 0)], coeffs[(2, 0)]];
    let eval = |t: f64| {
        let x = t / top;
        r[0] + r[1] * x + r[2] * x * x
    };
    let rho = eig
        .eigenvalues
        .iter()
        .map(|&l| eval(l.max(0.0)).norm())
        .fold(0.0, f64::max);
    if rho == 0.0 {
        return Ok(ComplexMatrix::zeros(n, n));
    }
    let factor = 1.0 / (rho * (1.0 + w[(0, 0)].norm()));
    let x = p.scale_real(1.0 / top);
    let x2 = x.matmul(&x)?;
    let poly = ComplexMatrix::identity(n)
        .scale(r[0])
        .add(&x.scale(r[1]))?
        .add(&x2.scale(r[2]))?;
    Ok(p.matmul(&poly)?.scale_real(factor))
}

/// Draws one member of the configured class.
///
/// Block classes use `rows` and `cols` as the two diagonal block sizes.
pub fn generate(config: &GenConfig) -> Result<Vec<ComplexMatrix>> {
    config.validate()?;
    let tol = Tolerances::default();
    let mut rng = rng_from_seed(config.seed);
    generate_with(&mut rng, config.class, config.rows, config.cols, config.scale, &tol)
}

pub(crate) fn generate_with<R: Rng + ?Sized>(
    rng: &mut R,
    class: MatrixClass,
    n: usize,
    m: usize,
    scale: f64,
    tol: &Tolerances,
) -> Result<Vec<ComplexMatrix>> {
    let latent = class.draw_latent(rng, n, m);
    class.realize(&latent, n, scale, tol)
}

/// `a + magnitude · G` for a seeded Ginibre `G`. Class structure is not preserved.
pub fn perturb(a: &ComplexMatrix, magnitude: f64, seed: u64) -> Result<ComplexMatrix> {
    if !(magnitude.is_finite() && magnitude >= 0.0) {
        return Err(Error::Parameter(format!("perturbation magnitude {magnitude}")));
    }
    if magnitude == 0.0 {
        return Ok(a.clone());
    }
    let mut rng = rng_from_seed(seed);
    let g = ginibre(&mut rng, a.rows(), a.cols());
    a.add(&g.scale_real(magnitude))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{is_normal, is_psd, is_unitary};

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    #[test]
    fn class_names_round_trip() {
        for (c, name) in ALL_CLASSES {
            assert_eq!(c.to_string(), name);
            assert_eq!(name.parse::<MatrixClass>().unwrap(), c);
        }
        assert!(matches!(
            "toeplitz".parse::<MatrixClass>(),
            Err(Error::Parameter(_))
        ));
    }

    #[test]
    fn psd_scalar_is_non_negative_real() {
        for seed in 0..20 {
            let p = &generate(&GenConfig::square(seed, 1, MatrixClass::Psd)).unwrap()[0];
            assert!(p[(0, 0)].re >= 0.0);
            assert_eq!(p[(0, 0)].im, 0.0);
        }
    }

    #[test]
    fn unitary_draw() {
        for seed in 0..20 {
            let u = &generate(&GenConfig::square(seed, 5, MatrixClass::Unitary)).unwrap()[0];
            let gram = u.adjoint().matmul(u).unwrap();
            assert!(gram.max_abs_diff(&ComplexMatrix::identity(5)).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn normal_draw_matches_its_diagonal() {
        let cfg = GenConfig::square(11, 4, MatrixClass::Normal);
        let a = &generate(&cfg).unwrap()[0];
        assert!(is_normal(a, &tol()).unwrap());
        let mut rng = rng_from_seed(11);
        let latent = MatrixClass::Normal.draw_latent(&mut rng, 4, 4);
        let mut want: Vec<f64> = latent[1].as_slice().iter().map(|z| z.norm()).collect();
        want.sort_by(|a, b| b.total_cmp(a));
        let got = crate::linalg::singular_values(a, &tol()).unwrap();
        for (g, w) in got.values().iter().zip(&want) {
            assert!((g - w).abs() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn block_psd_partitions_a_gram_matrix() {
        let cfg = GenConfig {
            seed: 3,
            rows: 2,
            cols: 3,
            scale: 1.0,
            class: MatrixClass::BlockPsd,
        };
        let parts = generate(&cfg).unwrap();
        assert_eq!(parts[0].shape(), (2, 2));
        assert_eq!(parts[1].shape(), (2, 3));
        assert_eq!(parts[2].shape(), (3, 3));
        let blk = crate::constructions::block2x2(&parts[0], &parts[1], &parts[2]).unwrap();
        assert!(is_psd(&blk.realized, &tol()).unwrap().is_psd);
    }

    #[test]
    fn commuting_pair_hypotheses() {
        for seed in 0..30 {
            let parts = generate(&GenConfig::square(seed, 3, MatrixClass::CommutingPair)).unwrap();
            let (p, c) = (&parts[0], &parts[1]);
            let comm = p.matmul(c).unwrap().sub(&c.matmul(p).unwrap()).unwrap();
            assert!(comm.max_abs() <= 1e-9 * (1.0 + p.frobenius_norm().powi(2)));
            let blk = crate::constructions::block2x2(p, &c.adjoint(), p).unwrap();
            assert!(is_psd(&blk.realized, &tol()).unwrap().is_psd);
        }
    }

    #[test]
    fn contraction_norm_at_most_one() {
        for seed in 0..20 {
            let cfg = GenConfig {
                seed,
                rows: 3,
                cols: 2,
                scale: 1.0,
                class: MatrixClass::Contraction,
            };
            let c = &generate(&cfg).unwrap()[0];
            assert!(operator_norm(c, &tol()).unwrap() <= 1.0 + 1e-15);
        }
    }

    #[test]
    fn positive_definite_shift() {
        let p = &generate(&GenConfig::square(5, 3, MatrixClass::PositiveDefinite)).unwrap()[0];
        let r = is_psd(p, &tol()).unwrap();
        assert!(r.min_eigenvalue >= PD_SHIFT * (1.0 - 1e-12));
        let u = &generate(&GenConfig::square(5, 3, MatrixClass::Unitary)).unwrap()[0];
        assert!(is_unitary(u, &tol()).unwrap());
    }

    #[test]
    fn hermitian_is_exact() {
        let h = &generate(&GenConfig::square(9, 4, MatrixClass::Hermitian)).unwrap()[0];
        assert_eq!(h, &h.adjoint());
    }

    #[test]
    fn determinism_and_perturb() {
        let cfg = GenConfig::square(42, 3, MatrixClass::Ginibre);
        let a = generate(&cfg).unwrap();
        assert_eq!(a, generate(&cfg).unwrap());
        assert_eq!(perturb(&a[0], 0.0, 1).unwrap(), a[0]);
        assert_eq!(perturb(&a[0], 0.3, 1).unwrap(), perturb(&a[0], 0.3, 1).unwrap());
        assert_ne!(perturb(&a[0], 0.3, 1).unwrap(), a[0]);
        let h = perturb(&a[0], 0.3, 2).unwrap().hermitian_part().unwrap();
        assert_eq!(h, h.adjoint());
    }

    #[test]
    fn invalid_config() {
        let mut cfg = GenConfig::square(0, 0, MatrixClass::Ginibre);
        assert!(generate(&cfg).is_err());
        cfg.rows = 2;
        cfg.cols = 2;
        cfg.scale = 0.0;
        assert!(generate(&cfg).is_err());
    }

    #[test]
    fn derived_seeds_differ() {
        let a = derive_seed(42, "tao", &[1, 0]);
        assert_eq!(a, derive_seed(42, "tao", &[1, 0]));
        assert_ne!(a, derive_seed(42, "tao", &[1, 1]));
        assert_ne!(a, derive_seed(42, "ab-star", &[1, 0]));
    }
}
