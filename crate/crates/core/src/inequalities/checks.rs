//! One function per inequality. Each builds both sides, compares them and
//! returns per-index margins; hypotheses are verified first.

use std::f64::consts::SQRT_2;

use super::result::{CheckResult, Track, TrackKind};
use crate::constructions::{block2x2, merge_spectra, NormFamily};
use crate::error::{Error, Result};
use crate::linalg::{
    abs_op, abs_power, cartesian, is_hermitian, is_normal, is_psd, normality_defect, operator_norm,
    power_op, singular_values, ComplexMatrix, SingularSpectrum, Tolerances, C64,
};

#[derive(Clone, Debug, Default)]
pub struct CheckOptions {
    pub tol: Tolerances,
    /// Evaluate margins even when a hypothesis fails; failures are recorded instead.
    pub force: bool,
}

impl CheckOptions {
    pub fn forced(tol: Tolerances) -> Self {
        CheckOptions { tol, force: true }
    }
}

/// Collects hypothesis outcomes; errors out on the first failure unless forced.
struct Gate<'a> {
    opts: &'a CheckOptions,
    failures: Vec<String>,
}

impl<'a> Gate<'a> {
    fn new(opts: &'a CheckOptions) -> Self {
        Gate {
            opts,
            failures: Vec::new(),
        }
    }

    fn require(&mut self, name: &str, ok: bool, detail: impl FnOnce() -> String) -> Result<()> {
        if ok {
            return Ok(());
        }
        let detail = detail();
        if self.opts.force {
            self.failures.push(format!("{name}: {detail}"));
            Ok(())
        } else {
            Err(Error::hypothesis(name, detail))
        }
    }

    fn require_psd(&mut self, name: &str, m: &ComplexMatrix) -> Result<()> {
        let (ok, detail) = psd_status(m, &self.opts.tol)?;
        self.require(name, ok, || detail)
    }

    fn finish(self, id: &str, tracks: Vec<Track>, alpha: Option<f64>, inputs: &[&ComplexMatrix]) -> CheckResult {
        let dims = inputs.iter().map(|m| m.shape()).collect();
        CheckResult::assemble(id, tracks, alpha, self.opts.force, self.failures, dims)
    }
}

fn psd_status(m: &ComplexMatrix, tol: &Tolerances) -> Result<(bool, String)> {
    if !m.is_square() {
        return Ok((false, format!("{:?} is not square", m.shape())));
    }
    if !is_hermitian(m, tol) {
        return Ok((false, "not Hermitian".into()));
    }
    let r = is_psd(m, tol)?;
    Ok((r.is_psd, format!("λ_min = {:.6e}, λ_max = {:.6e}", r.min_eigenvalue, r.max_eigenvalue)))
}

fn is_psd_matrix(m: &ComplexMatrix, tol: &Tolerances) -> Result<bool> {
    Ok(psd_status(m, tol)?.0)
}

fn unit_alpha(alpha: f64) -> Result<()> {
    if (0.0..=1.0).contains(&alpha) {
        Ok(())
    } else {
        Err(Error::Parameter(format!("alpha = {alpha} outside [0, 1]")))
    }
}

fn sv(a: &ComplexMatrix, tol: &Tolerances) -> Result<SingularSpectrum> {
    singular_values(a, tol)
}

fn scaled(s: &SingularSpectrum, f: f64) -> Vec<f64> {
    s.values().iter().map(|v| v * f).collect()
}

fn squared(s: &SingularSpectrum, f: f64) -> Vec<f64> {
    s.values().iter().map(|v| f * v * v).collect()
}

/// Spectrum of `A_1 ⊕ … ⊕ A_k`, merged from the parts.
fn sum_spectrum(parts: &[ComplexMatrix], tol: &Tolerances) -> Result<SingularSpectrum> {
    let mut acc = SingularSpectrum::empty();
    for p in parts {
        acc = merge_spectra(&acc, &sv(p, tol)?)?;
    }
    Ok(acc)
}

fn mul3(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.matmul(b)?.matmul(c)
}

fn require_square(op: &'static str, name: &str, m: &ComplexMatrix) -> Result<()> {
    if m.is_square() {
        Ok(())
    } else {
        Err(Error::shape(op, format!("{name} is {:?}, expected square", m.shape())))
    }
}

/// `2 s_j(B) ≤ s_j([[A, B], [B*, C]])` for a PSD block.
pub fn check_tao(a: &ComplexMatrix, b: &ComplexMatrix, c: &ComplexMatrix, opts: &CheckOptions) -> Result<CheckResult> {
    let tol = &opts.tol;
    let blk = block2x2(a, b, c)?;
    let mut gate = Gate::new(opts);
    gate.require_psd("block-psd", &blk.realized)?;
    let lhs = scaled(&sv(b, tol)?, 2.0);
    let rhs = sv(&blk.realized, tol)?;
    let tracks = vec![Track::spectrum("tao", lhs, rhs.values(), tol)];
    Ok(gate.finish("tao", tracks, None, &[a, b, c]))
}

/// `s_j(block) ≤ 2 s_j(A ⊕ C)` and its consequence `s_j(B) ≤ s_j(A ⊕ C)`.
pub fn check_block_dominance(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    opts: &CheckOptions,
) -> Result<CheckResult> {
    let tol = &opts.tol;
    let blk = block2x2(a, b, c)?;
    let mut gate = Gate::new(opts);
    gate.require_psd("block-psd", &blk.realized)?;
    let pinched = merge_spectra(&sv(a, tol)?, &sv(c, tol)?)?;
    let tracks = vec![
        Track::spectrum("block", sv(&blk.realized, tol)?.into_values(), &scaled(&pinched, 2.0), tol),
        Track::spectrum("off-diagonal", sv(b, tol)?.into_values(), pinched.values(), tol),
    ];
    Ok(gate.finish("block-dominance", tracks, None, &[a, b, c]))
}

/// Pinching bounds for unitarily invariant norms:
/// `|||A ⊕ C||| ≤ |||block|||`, `|||block||| ≤ 2 |||A ⊕ C|||` (PSD block only) and
/// `max(‖A‖, ‖C‖) ≤ ‖block‖`.
pub fn check_pinching_norms(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    families: &[NormFamily],
    opts: &CheckOptions,
) -> Result<CheckResult> {
    let tol = &opts.tol;
    if families.is_empty() {
        return Err(Error::Parameter("no norm families given".into()));
    }
    let blk = block2x2(a, b, c)?;
    let dim = blk.realized.rows();
    for f in families {
        f.validate(dim)?;
    }
    let s_block = sv(&blk.realized, tol)?;
    let s_pinch = merge_spectra(&sv(a, tol)?, &sv(c, tol)?)?;
    let eval = |s: &SingularSpectrum| -> Result<Vec<f64>> {
        families.iter().map(|f| f.of_spectrum(s, dim)).collect()
    };
    let (n_block, n_pinch) = (eval(&s_block)?, eval(&s_pinch)?);

    let mut tracks = vec![Track::dominance("lower", TrackKind::Norm, n_pinch.clone(), &n_block, tol)];
    let (block_psd, detail) = psd_status(&blk.realized, tol)?;
    if block_psd {
        let doubled: Vec<f64> = n_pinch.iter().map(|v| 2.0 * v).collect();
        tracks.push(Track::dominance("upper", TrackKind::Norm, n_block, &doubled, tol));
    } else {
        tracks.push(Track::skipped("upper", TrackKind::Norm, format!("block not PSD ({detail})")));
    }
    let max_diag = operator_norm(a, tol)?.max(operator_norm(c, tol)?);
    tracks.push(Track::dominance(
        "operator-max",
        TrackKind::Norm,
        vec![max_diag],
        &[s_block.largest()],
        tol,
    ));
    Ok(Gate::new(opts).finish("pinching-norms", tracks, None, &[a, b, c]))
}

/// `[[|A|^{2α}, A*], [A, |A*|^{2(1−α)}]] ≥ 0`.
pub fn check_cartesian_block_psd(a: &ComplexMatrix, alpha: f64, opts: &CheckOptions) -> Result<CheckResult> {
    let tol = &opts.tol;
    unit_alpha(alpha)?;
    let top = abs_power(a, 2.0 * alpha, tol)?;
    let bottom = abs_power(&a.adjoint(), 2.0 * (1.0 - alpha), tol)?;
    let blk = block2x2(&top, &a.adjoint(), &bottom)?;
    let report = is_psd(&blk.realized, tol)?;
    let tracks = vec![Track::psd("block", &report, tol)];
    Ok(Gate::new(opts).finish("cartesian-block-psd", tracks, Some(alpha), &[a]))
}

/// For PSD `A`, `B` with `BC = CA` and `[[A, C*], [C, B]] ≥ 0`:
/// `[[A^{2α}, C*], [C, B^{2(1−α)}]] ≥ 0`.
pub fn check_kittaneh_lemma(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    c: &ComplexMatrix,
    alpha: f64,
    opts: &CheckOptions,
) -> Result<CheckResult> {
    let tol = &opts.tol;
    unit_alpha(alpha)?;
    let original = block2x2(a, &c.adjoint(), b)?;
    let mut gate = Gate::new(opts);
    gate.require_psd("a-psd", a)?;
    gate.require_psd("b-psd", b)?;
    let defect = b.matmul(c)?.max_abs_diff(&c.matmul(a)?)?;
    let cf = c.frobenius_norm();
    let scale = 1.0 + cf * (a.frobenius_norm() + b.frobenius_norm());
    gate.require("intertwining", defect <= tol.recon_tol * scale, || {
        format!("‖BC − CA‖_max = {defect:.3e}")
    })?;
    gate.require_psd("block-psd", &original.realized)?;

    let fa = power_op(a, 2.0 * alpha, tol)?;
    let gb = power_op(b, 2.0 * (1.0 - alpha), tol)?;
    let transformed = block2x2(&fa, &c.adjoint(), &gb)?;
    let report = is_psd(&transformed.realized, tol)?;
    let tracks = vec![Track::psd("transformed-block", &report, tol)];
    Ok(gate.finish("kittaneh-lemma", tracks, Some(alpha), &[a, b, c]))
}

/// `s_j(A + B) ≤ s_j((|A|^{2α} + |B|^{2α}) ⊕ (|A*|^{2(1−α)} + |B*|^{2(1−α)}))`,
/// plus `s_j(A + B) ≤ s_j((|A| + |B|) ⊕ (|A| + |B|))` when both are normal.
pub fn check_sum_split(a: &ComplexMatrix, b: &ComplexMatrix, alpha: f64, opts: &CheckOptions) -> Result<CheckResult> {
    let tol = &opts.tol;
    unit_alpha(alpha)?;
    require_square("sum_split", "a", a)?;
    if a.shape() != b.shape() {
        return Err(Error::shape(
            "sum_split",
            format!("operands {:?} and {:?} differ", a.shape(), b.shape()),
        ));
    }
    let (a_s, b_s) = (a.adjoint(), b.adjoint());
    let left = abs_power(a, 2.0 * alpha, tol)?.add(&abs_power(b, 2.0 * alpha, tol)?)?;
    let right = abs_power(&a_s, 2.0 * (1.0 - alpha), tol)?.add(&abs_power(&b_s, 2.0 * (1.0 - alpha), tol)?)?;
    let lhs = sv(&a.add(b)?, tol)?;
    let rhs = merge_spectra(&sv(&left, tol)?, &sv(&right, tol)?)?;
    let mut tracks = vec![Track::spectrum("split", lhs.values().to_vec(), rhs.values(), tol)];
    if is_normal(a, tol)? && is_normal(b, tol)? {
        let s = sv(&abs_op(a, tol)?.add(&abs_op(b, tol)?)?, tol)?;
        let rhs = merge_spectra(&s, &s)?;
        tracks.push(Track::spectrum("normal", lhs.into_values(), rhs.values(), tol));
    }
    Ok(Gate::new(opts).finish("sum-split", tracks, Some(alpha), &[a, b]))
}

/// `s_j(B* X A) ≤ s_j(A* |X|^{2α} A ⊕ B* |X*|^{2(1−α)} B)`; for normal `X`
/// the second summand uses `|X|` in place of `|X*|`.
///
/// `X` is `p×q`, `A` is `q×r` and `B` is `p×s`.
pub fn check_product_split(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    x: &ComplexMatrix,
    alpha: f64,
    opts: &CheckOptions,
) -> Result<CheckResult> {
    let tol = &opts.tol;
    unit_alpha(alpha)?;
    if a.rows() != x.cols() || b.rows() != x.rows() {
        return Err(Error::shape(
            "product_split",
            format!("a {:?}, b {:?} do not compose with x {:?}", a.shape(), b.shape(), x.shape()),
        ));
    }
    let (a_s, b_s) = (a.adjoint(), b.adjoint());
    let lhs = sv(&mul3(&b_s, x, a)?, tol)?;
    let top = mul3(&a_s, &abs_power(x, 2.0 * alpha, tol)?, a)?;
    let beta = 2.0 * (1.0 - alpha);
    let bottom = mul3(&b_s, &abs_power(&x.adjoint(), beta, tol)?, b)?;
    let s_top = sv(&top, tol)?;
    let rhs = merge_spectra(&s_top, &sv(&bottom, tol)?)?;
    let mut tracks = vec![Track::spectrum("split", lhs.values().to_vec(), rhs.values(), tol)];
    if x.is_square() && is_normal(x, tol)? {
        let bottom = mul3(&b_s, &abs_power(x, beta, tol)?, b)?;
        let rhs = merge_spectra(&s_top, &sv(&bottom, tol)?)?;
        tracks.push(Track::spectrum("normal-x", lhs.into_values(), rhs.values(), tol));
    }
    Ok(Gate::new(opts).finish("product-split", tracks, Some(alpha), &[a, b, x]))
}

/// `s_j(A X B*) ≤ ‖X‖ s_j(A ⊕ B)²`, and for PSD `A`, `B`:
/// `s_j(A^{1/2} X B^{1/2}) ≤ ‖X‖ s_j(A ⊕ B)`.
pub fn check_product_norm_bound(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    x: &ComplexMatrix,
    opts: &CheckOptions,
) -> Result<CheckResult> {
    let tol = &opts.tol;
    if a.cols() != x.rows() || b.cols() != x.cols() {
        return Err(Error::shape(
            "product_norm_bound",
            format!("a {:?}, b {:?} do not compose with x {:?}", a.shape(), b.shape(), x.shape()),
        ));
    }
    let x_norm = operator_norm(x, tol)?;
    let s_sum = merge_spectra(&sv(a, tol)?, &sv(b, tol)?)?;
    let lhs = sv(&mul3(a, x, &b.adjoint())?, tol)?;
    let mut tracks = vec![Track::spectrum("bound", lhs.into_values(), &squared(&s_sum, x_norm), tol)];
    if is_psd_matrix(a, tol)? && is_psd_matrix(b, tol)? {
        let (ra, rb) = (power_op(a, 0.5, tol)?, power_op(b, 0.5, tol)?);
        let lhs = sv(&mul3(&ra, x, &rb)?, tol)?;
        tracks.push(Track::spectrum("positive", lhs.into_values(), &scaled(&s_sum, x_norm), tol));
    } else {
        tracks.push(Track::skipped("positive", TrackKind::Spectrum, "a or b is not PSD"));
    }
    Ok(Gate::new(opts).finish("product-norm-bound", tracks, None, &[a, b, x]))
}

/// `s_j(AB*) ≤ s_j(A*A ⊕ B*B)`, and the commutator bound obtained from the
/// embedding `A' = [[X, Y], [0, 0]]`, `B' = [[Y, −X], [0, 0]]` with `(X, Y) = (A, B)`.
pub fn check_ab_star(a: &ComplexMatrix, b: &ComplexMatrix, opts: &CheckOptions) -> Result<CheckResult> {
    let tol = &opts.tol;
    if a.shape() != b.shape() {
        return Err(Error::shape(
            "ab_star",
            format!("operands {:?} and {:?} differ", a.shape(), b.shape()),
        ));
    }
    let gram = |m: &ComplexMatrix| m.adjoint().matmul(m);
    let lhs = sv(&a.matmul(&b.adjoint())?, tol)?;
    let rhs = merge_spectra(&sv(&gram(a)?, tol)?, &sv(&gram(b)?, tol)?)?;
    let mut tracks = vec![Track::spectrum("corollary", lhs.into_values(), rhs.values(), tol)];

    let (n, p) = a.shape();
    let mut ea = ComplexMatrix::zeros(2 * n, 2 * p);
    ea.set_block(0, 0, a);
    ea.set_block(0, p, b);
    let mut eb = ComplexMatrix::zeros(2 * n, 2 * p);
    eb.set_block(0, 0, b);
    eb.set_block(0, p, &a.scale_real(-1.0));
    let lhs = sv(&ea.matmul(&eb.adjoint())?, tol)?;
    let rhs = merge_spectra(&sv(&gram(&ea)?, tol)?, &sv(&gram(&eb)?, tol)?)?;
    tracks.push(Track::spectrum("commutator", lhs.into_values(), rhs.values(), tol));
    Ok(Gate::new(opts).finish("ab-star", tracks, None, &[a, b]))
}

/// For PSD `X`: `s_j(A X B*) ≤ s_j(A X^{2α} A* ⊕ B X^{2(1−α)} B*)`, the
/// bound `max(‖X^{2α}‖, ‖X^{2(1−α)}‖) s_j(A ⊕ B)²`, and for PSD `A`, `B`
/// the square-root instance `s_j(A^{1/2} X B^{1/2}) ≤ max(…) s_j(A ⊕ B)`.
///
/// `α` outside `[0, 1]` needs `X` positive definite.
pub fn check_positive_sandwich(
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    x: &ComplexMatrix,
    alpha: f64,
    opts: &CheckOptions,
) -> Result<CheckResult> {
    let tol = &opts.tol;
    if !alpha.is_finite() {
        return Err(Error::Parameter(format!("alpha = {alpha}")));
    }
    require_square("positive_sandwich", "x", x)?;
    if a.cols() != x.rows() || b.cols() != x.rows() {
        return Err(Error::shape(
            "positive_sandwich",
            format!("a {:?}, b {:?} do not compose with x {:?}", a.shape(), b.shape(), x.shape()),
        ));
    }
    let gate = Gate::new(opts);
    let (x_psd, detail) = psd_status(x, tol)?;
    if !x_psd {
        // The fractional powers below are undefined without it, so force does not apply.
        return Err(Error::hypothesis("x-psd", detail));
    }
    let p = power_op(x, 2.0 * alpha, tol)?;
    let q = power_op(x, 2.0 * (1.0 - alpha), tol)?;
    let (a_s, b_s) = (a.adjoint(), b.adjoint());
    let lhs = sv(&mul3(a, x, &b_s)?, tol)?;
    let rhs = merge_spectra(&sv(&mul3(a, &p, &a_s)?, tol)?, &sv(&mul3(b, &q, &b_s)?, tol)?)?;
    let bound = operator_norm(&p, tol)?.max(operator_norm(&q, tol)?);
    let s_sum = merge_spectra(&sv(a, tol)?, &sv(b, tol)?)?;
    let mut tracks = vec![
        Track::spectrum("sandwich", lhs.values().to_vec(), rhs.values(), tol),
        Track::spectrum("max-norm", lhs.into_values(), &squared(&s_sum, bound), tol),
    ];
    if is_psd_matrix(a, tol)? && is_psd_matrix(b, tol)? {
        let (ra, rb) = (power_op(a, 0.5, tol)?, power_op(b, 0.5, tol)?);
        let lhs = sv(&mul3(&ra, x, &rb)?, tol)?;
        tracks.push(Track::spectrum("positive", lhs.into_values(), &scaled(&s_sum, bound), tol));
    } else {
        tracks.push(Track::skipped("positive", TrackKind::Spectrum, "a or b is not PSD"));
    }
    Ok(gate.finish("positive-sandwich", tracks, Some(alpha), &[a, b, x]))
}

fn require_parts(op: &'static str, parts: &[ComplexMatrix]) -> Result<()> {
    if parts.is_empty() {
        return Err(Error::Arity {
            expected: "at least one".into(),
            got: 0,
        });
    }
    for (i, p) in parts.iter().enumerate() {
        require_square(op, &format!("part {}", i + 1), p)?;
    }
    Ok(())
}

fn re_plus_im(parts: &[ComplexMatrix]) -> Result<Vec<(ComplexMatrix, ComplexMatrix)>> {
    parts.iter().map(cartesian).collect()
}

/// For normal `A_i`:
/// `(1/√2) s_j(⊕(Re A_i + Im A_i)) ≤ s_j(⊕A_i) ≤ s_j(⊕(|Re A_i| + |Im A_i|))`.
pub fn check_normal_cartesian(parts: &[ComplexMatrix], opts: &CheckOptions) -> Result<CheckResult> {
    let tol = &opts.tol;
    require_parts("normal_cartesian", parts)?;
    let mut gate = Gate::new(opts);
    for (i, p) in parts.iter().enumerate() {
        gate.require("normal", is_normal(p, tol)?, || {
            format!(
                "part {} has ‖A*A − AA*‖_max = {:.6e}",
                i + 1,
                normality_defect(p).unwrap_or(f64::NAN)
            )
        })?;
    }
    let cart = re_plus_im(parts)?;
    let sums = cart.iter().map(|(r, i)| r.add(i)).collect::<Result<Vec<_>>>()?;
    let abs_sums = cart
        .iter()
        .map(|(r, i)| abs_op(r, tol)?.add(&abs_op(i, tol)?))
        .collect::<Result<Vec<_>>>()?;
    let s_a = sum_spectrum(parts, tol)?;
    let lower_lhs = scaled(&sum_spectrum(&sums, tol)?, 1.0 / SQRT_2);
    let tracks = vec![
        Track::spectrum("lower", lower_lhs, s_a.values(), tol),
        Track::spectrum("upper", s_a.values().to_vec(), sum_spectrum(&abs_sums, tol)?.values(), tol),
    ];
    let inputs: Vec<&ComplexMatrix> = parts.iter().collect();
    Ok(gate.finish("normal-cartesian", tracks, None, &inputs))
}

/// `√2 s_j(⊕(Re A_i + Im A_i)) ≤ s_j(⊕(A_i + i A_i*)) ≤ 2 s_j(⊕(Re A_i + Im A_i))`.
pub fn check_a_plus_ia_star(parts: &[ComplexMatrix], opts: &CheckOptions) -> Result<CheckResult> {
    let tol = &opts.tol;
    require_parts("a_plus_ia_star", parts)?;
    let cart = re_plus_im(parts)?;
    let sums = cart.iter().map(|(r, i)| r.add(i)).collect::<Result<Vec<_>>>()?;
    let twisted = parts
        .iter()
        .map(|p| p.add(&p.adjoint().scale(C64::new(0.0, 1.0))))
        .collect::<Result<Vec<_>>>()?;
    let s_sum = sum_spectrum(&sums, tol)?;
    let s_tw = sum_spectrum(&twisted, tol)?;
    let tracks = vec![
        Track::spectrum("lower", scaled(&s_sum, SQRT_2), s_tw.values(), tol),
        Track::spectrum("upper", s_tw.values().to_vec(), &scaled(&s_sum, 2.0), tol),
    ];
    let inputs: Vec<&ComplexMatrix> = parts.iter().collect();
    Ok(Gate::new(opts).finish("a-plus-ia-star", tracks, None, &inputs))
}
