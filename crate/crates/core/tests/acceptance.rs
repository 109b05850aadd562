//! Acceptance criteria 1–7. Each test prints one `criterion N: PASS|FAIL` line
//! straight to stderr so it shows up without `--nocapture`.

mod common;

use std::f64::consts::SQRT_2;
use std::io::Write;
use std::process::Command;

use common::{example, random};
use svineq::constructions::{direct_sum, norm, NormFamily};
use svineq::harness::{falsify, FalsifyConfig, FalsifyOutcome};
use svineq::inequalities::*;
use svineq::linalg::*;

fn verdict(n: usize, pass: bool, detail: String) {
    let line = format!("criterion {n}: {} {detail}\n", if pass { "PASS" } else { "FAIL" });
    std::io::stderr().write_all(line.as_bytes()).unwrap();
    assert!(pass, "criterion {n} failed: {detail}");
}

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn criterion_1_example_values() {
    let a = example();
    let s_a = singular_values(&a, &tol()).unwrap();
    let (re, im) = cartesian(&a).unwrap();
    let sum = abs_op(&re, &tol()).unwrap().add(&abs_op(&im, &tol()).unwrap()).unwrap();
    let s_sum = singular_values(&sum, &tol()).unwrap();
    let (x, y) = (s_a.get(1), s_sum.get(1));
    let pass = (x - 1.34).abs() <= 0.01 && (y - 1.27).abs() <= 0.01 && x > y;
    verdict(
        1,
        pass,
        format!("s_2(A) = {x:.6} (want 1.34 ± 0.01), s_2(|Re A| + |Im A|) = {y:.6} (want 1.27 ± 0.01), strict > holds: {}", x > y),
    );
}

#[test]
fn criterion_2_full_registry() {
    let run = RegistryRun::default();
    let outcomes = run_registry(&all_ids(), &run).unwrap();
    let mut worst = f64::INFINITY;
    let mut bad = Vec::new();
    for o in &outcomes {
        match &o.result {
            Ok(r) => {
                worst = worst.min(r.worst_margin);
                if !r.pass || r.worst_margin < -1e-8 {
                    bad.push(format!("{} dim {} trial {}", o.id, o.dim, o.trial));
                }
            }
            Err(e) => bad.push(format!("{} dim {} trial {}: {}", o.id, o.dim, o.trial, e.message)),
        }
    }
    let expected: usize = all_ids()
        .iter()
        .map(|id| {
            let spec = lookup(id).unwrap();
            let alphas = if spec.uses_alpha { run.alphas.len() } else { 1 };
            run.dims.len() * run.trials * alphas
        })
        .sum();
    let pass = bad.is_empty() && outcomes.len() == expected && worst >= -1e-8;
    verdict(
        2,
        pass,
        format!("{} evaluations, {} failing, worst margin {worst:.3e}{}", outcomes.len(), bad.len(), bad.first().map(|b| format!(", first: {b}")).unwrap_or_default()),
    );
}

/// Largest singular value and `|det|/s_1` from the characteristic quadratic of `A*A`.
fn quadratic_sv(a: &ComplexMatrix) -> [f64; 2] {
    let g = a.adjoint().matmul(a).unwrap();
    let (p, r, q) = (g[(0, 0)].re, g[(1, 1)].re, g[(0, 1)].norm());
    let big = ((p + r) / 2.0 + ((p - r) / 2.0).hypot(q)).sqrt();
    let det = (a[(0, 0)] * a[(1, 1)] - a[(0, 1)] * a[(1, 0)]).norm();
    [big, if big == 0.0 { 0.0 } else { det / big }]
}

fn quadratic_eig(h: &ComplexMatrix) -> [f64; 2] {
    let (a, c, b) = (h[(0, 0)].re, h[(1, 1)].re, h[(0, 1)].norm());
    let (m, d) = ((a + c) / 2.0, ((a - c) / 2.0).hypot(b));
    [m + d, m - d]
}

#[test]
fn criterion_3_kernel_oracles() {
    let mut worst_sv = 0.0_f64;
    let mut worst_eig = 0.0_f64;
    for seed in 0..500 {
        let a = random(seed, 2, 2);
        let got = singular_values(&a, &tol()).unwrap();
        for (j, want) in quadratic_sv(&a).iter().enumerate() {
            worst_sv = worst_sv.max((got.get(j) - want).abs());
        }
        let h = a.hermitian_part().unwrap();
        let e = hermitian_eig(&h, &tol()).unwrap();
        for (j, want) in quadratic_eig(&h).iter().enumerate() {
            worst_eig = worst_eig.max((e.eigenvalues[j] - want).abs());
        }
    }
    verdict(
        3,
        worst_sv <= 1e-10 && worst_eig <= 1e-10,
        format!("500 matrices, max |Δs| = {worst_sv:.2e}, max |Δλ| = {worst_eig:.2e}"),
    );
}

#[test]
fn criterion_4_norm_identities() {
    let mut worst = 0.0_f64;
    let rel = |x: f64, y: f64| (x - y).abs() / x.abs().max(y.abs()).max(f64::MIN_POSITIVE);
    for seed in 0..500u64 {
        let (r1, c1) = (1 + seed as usize % 4, 1 + (seed as usize / 4) % 4);
        let (r2, c2) = (1 + (seed as usize / 16) % 4, 1 + (seed as usize / 64) % 4);
        let a = random(2 * seed, r1, c1);
        let b = random(2 * seed + 1, r2, c2);
        let ab = direct_sum(&[a.clone(), b.clone()]).unwrap();
        let op = |m: &ComplexMatrix| norm(m, NormFamily::Operator, &tol()).unwrap();
        worst = worst.max(rel(op(&ab), op(&a).max(op(&b))));
        for p in [1.0, 2.0, 3.0] {
            let sp = |m: &ComplexMatrix| norm(m, NormFamily::Schatten(p), &tol()).unwrap().powf(p);
            worst = worst.max(rel(sp(&ab), sp(&a) + sp(&b)));
        }
    }
    verdict(4, worst <= 1e-9, format!("500 pairs, worst relative error {worst:.2e}"));
}

#[test]
fn criterion_5_falsifier_finds_and_replays() {
    let config = FalsifyConfig::new("normal-cartesian-upper", Some("normal"), 2, 7);
    let outcome = falsify(&config).unwrap();
    let FalsifyOutcome::Witness(w) = &outcome else {
        verdict(5, false, format!("no witness: {outcome:?}"));
        return;
    };
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("witness.json");
    std::fs::write(&file, outcome.to_json()).unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_svineq"))
        .args(["check", "--ineq", "normal-cartesian", "--force", "--input", file.to_str().unwrap()])
        .env_clear()
        .output()
        .unwrap();
    let replayed: CheckResult = serde_json::from_slice(&out.stdout).unwrap();
    let track = replayed.track("upper").unwrap();
    let bit_exact = track.worst_margin.to_bits() == w.margin.to_bits()
        && track.worst_index == w.violated_index
        && (track.lhs[w.violated_index - 1] - track.rhs[w.violated_index - 1]).to_bits() == w.violation.to_bits();
    let pass = w.violation > 1e-3 && w.iterations <= 10_000 && bit_exact && out.status.code() == Some(1);
    verdict(
        5,
        pass,
        format!(
            "violation {:.6e} at index {} after {} iterations, replay exit {:?}, bit-exact {bit_exact}",
            w.violation,
            w.violated_index,
            w.iterations,
            out.status.code()
        ),
    );
}

#[test]
fn criterion_6_no_false_positives() {
    let mut details = Vec::new();
    let mut pass = true;
    for id in ["tao", "ab-star"] {
        let outcome = falsify(&FalsifyConfig::new(id, None, 2, 42)).unwrap();
        match outcome {
            FalsifyOutcome::Exhausted(e) => {
                pass &= e.best_margin >= -1e-8 && e.iterations <= 10_000;
                details.push(format!("{id}: best margin {:.3e} over {} iterations", e.best_margin, e.iterations));
            }
            FalsifyOutcome::Witness(w) => {
                pass = false;
                details.push(format!("{id}: spurious witness, margin {:.3e}", w.margin));
            }
        }
    }
    verdict(6, pass, details.join("; "));
}

fn desc(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| b.total_cmp(a));
    v
}

/// Compares a computed track with closed-form sides; `rhs` is zero-padded or truncated
/// to `lhs` like the library does, and margins are recomputed from the closed form.
fn expect(track: &Track, lhs: &[f64], rhs: &[f64], worst: &mut f64) {
    assert!(track.is_active(), "{} skipped", track.name);
    assert_eq!(track.lhs.len(), lhs.len(), "{}", track.name);
    let rhs: Vec<f64> = (0..lhs.len()).map(|j| rhs.get(j).copied().unwrap_or(0.0)).collect();
    let scale = lhs.iter().chain(&rhs).fold(0.0_f64, |m, v| m.max(v.abs())).max(1.0);
    for j in 0..lhs.len() {
        let margin = (rhs[j] - lhs[j]) / scale;
        let err = [
            (track.lhs[j] - lhs[j]).abs() / scale,
            (track.rhs[j] - rhs[j]).abs() / scale,
            (track.margins[j] - margin).abs(),
        ];
        for e in err {
            *worst = worst.max(e);
        }
        assert!(margin >= -1e-12, "{}: closed form violated at {j}", track.name);
    }
    assert!(track.pass, "{}", track.name);
}

/// `λ_min` reported by a PSD track against the closed form `det / λ_max`.
fn expect_psd(track: &Track, lam_max: f64, det: f64, worst: &mut f64) {
    let lam_min = if lam_max == 0.0 { 0.0 } else { det / lam_max };
    let scale = lam_max.abs().max(1.0);
    *worst = worst.max((track.rhs[0] - lam_min).abs() / scale);
    *worst = worst.max((track.scale - lam_max.abs()) / scale);
    assert!(track.pass, "{}", track.name);
}

fn z(seed: u64) -> C64 {
    random(seed, 1, 1)[(0, 0)]
}

fn sc(z: C64) -> ComplexMatrix {
    ComplexMatrix::scalar(z)
}

fn re(x: f64) -> ComplexMatrix {
    sc(C64::new(x, 0.0))
}

/// Eigenvalues of `[[a, b], [b̄, c]]` for real `a`, `c`.
fn eig2(a: f64, b: f64, c: f64) -> [f64; 2] {
    let (m, d) = ((a + c) / 2.0, ((a - c) / 2.0).hypot(b));
    let hi = m + d;
    // Vieta keeps the small root accurate for nearly singular blocks.
    let lo = if hi > 0.0 { (a * c - b * b) / hi } else { m - d };
    [hi, lo]
}

const ALPHAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

#[test]
fn criterion_7_scalar_reductions() {
    let opts = CheckOptions::default();
    let mut worst = 0.0_f64;
    let mut cases = 0usize;
    for seed in 0..200u64 {
        let (g1, g2, g3, g4) = (z(4 * seed), z(4 * seed + 1), z(4 * seed + 2), z(4 * seed + 3));
        let alpha = ALPHAS[seed as usize % ALPHAS.len()];

        // PSD 2×2 block with scalar entries: a, c ≥ 0 and |b|² ≤ ac.
        let (a, c) = (g1.norm_sqr(), g2.norm_sqr());
        let b = g3 * ((a * c).sqrt() / g3.norm().max(1.0));
        let [hi, lo] = eig2(a, b.norm(), c);
        let r = check_tao(&re(a), &sc(b), &re(c), &opts).unwrap();
        expect(r.track("tao").unwrap(), &[2.0 * b.norm()], &[hi, lo], &mut worst);
        let r = check_block_dominance(&re(a), &sc(b), &re(c), &opts).unwrap();
        let pinch = desc(vec![a, c]);
        expect(r.track("block").unwrap(), &[hi, lo], &[2.0 * pinch[0], 2.0 * pinch[1]], &mut worst);
        expect(r.track("off-diagonal").unwrap(), &[b.norm()], &pinch, &mut worst);

        // Pinching norms on a PSD block and on an arbitrary one.
        let families = [
            NormFamily::Operator,
            NormFamily::Schatten(1.0),
            NormFamily::Schatten(2.0),
            NormFamily::Schatten(3.0),
            NormFamily::KyFan(1),
            NormFamily::KyFan(2),
        ];
        let norms = |[x, y]: [f64; 2]| -> Vec<f64> {
            vec![x, x + y, x.hypot(y), (x.powi(3) + y.powi(3)).cbrt(), x, x + y]
        };
        let r = check_pinching_norms(&re(a), &sc(b), &re(c), &families, &opts).unwrap();
        let (nb, np) = (norms([hi, lo.max(0.0)]), norms([pinch[0], pinch[1]]));
        expect(r.track("lower").unwrap(), &np, &nb, &mut worst);
        expect(r.track("upper").unwrap(), &nb, &np.iter().map(|v| 2.0 * v).collect::<Vec<_>>(), &mut worst);
        expect(r.track("operator-max").unwrap(), &[pinch[0]], &[hi], &mut worst);
        let (x, w, y) = (g1.re, g3 * 3.0, g2.re);
        let e = eig2(x, w.norm(), y);
        let s = desc(vec![e[0].abs(), e[1].abs()]);
        let r = check_pinching_norms(&re(x), &sc(w), &re(y), &families, &opts).unwrap();
        let p = desc(vec![x.abs(), y.abs()]);
        expect(r.track("lower").unwrap(), &norms([p[0], p[1]]), &norms([s[0], s[1]]), &mut worst);
        expect(r.track("operator-max").unwrap(), &[p[0]], &[s[0]], &mut worst);

        // [[|z|^{2α}, z̄], [z, |z|^{2−2α}]] is singular with trace |z|^{2α} + |z|^{2−2α}.
        let m = g4.norm();
        let r = check_cartesian_block_psd(&sc(g4), alpha, &opts).unwrap();
        let (p, q) = (m.powf(2.0 * alpha), m.powf(2.0 - 2.0 * alpha));
        expect_psd(r.track("block").unwrap(), p + q, p * q - m * m, &mut worst);

        // Intertwining with scalars forces A = B = t (or C = 0).
        let t = g1.norm();
        let cc = g2 * (t / g2.norm().max(1.0));
        let r = check_kittaneh_lemma(&re(t), &re(t), &sc(cc), alpha, &opts).unwrap();
        let (p, q) = (t.powf(2.0 * alpha), t.powf(2.0 - 2.0 * alpha));
        let [hi_k, _] = eig2(p, cc.norm(), q);
        expect_psd(r.track("transformed-block").unwrap(), hi_k, p * q - cc.norm_sqr(), &mut worst);

        // Sum split: |a + b| against the merged scalar sums.
        let (u, v) = (g1, g2);
        let r = check_sum_split(&sc(u), &sc(v), alpha, &opts).unwrap();
        let rhs = desc(vec![
            u.norm().powf(2.0 * alpha) + v.norm().powf(2.0 * alpha),
            u.norm().powf(2.0 - 2.0 * alpha) + v.norm().powf(2.0 - 2.0 * alpha),
        ]);
        expect(r.track("split").unwrap(), &[(u + v).norm()], &rhs, &mut worst);
        let n = u.norm() + v.norm();
        expect(r.track("normal").unwrap(), &[(u + v).norm()], &[n, n], &mut worst);

        // Product split and its normal-X instance coincide for scalars.
        let (pa, pb, px) = (g1, g2, g3);
        let r = check_product_split(&sc(pa), &sc(pb), &sc(px), alpha, &opts).unwrap();
        let lhs = pa.norm() * pb.norm() * px.norm();
        let rhs = desc(vec![
            pa.norm_sqr() * px.norm().powf(2.0 * alpha),
            pb.norm_sqr() * px.norm().powf(2.0 - 2.0 * alpha),
        ]);
        expect(r.track("split").unwrap(), &[lhs], &rhs, &mut worst);
        expect(r.track("normal-x").unwrap(), &[lhs], &rhs, &mut worst);

        let big = pa.norm().max(pb.norm());
        let r = check_product_norm_bound(&sc(pa), &sc(pb), &sc(px), &opts).unwrap();
        expect(r.track("bound").unwrap(), &[lhs], &[px.norm() * big * big], &mut worst);
        let (ra, rb) = (pa.norm(), pb.norm());
        let r = check_product_norm_bound(&re(ra), &re(rb), &sc(px), &opts).unwrap();
        expect(r.track("positive").unwrap(), &[ra.sqrt() * px.norm() * rb.sqrt()], &[px.norm() * ra.max(rb)], &mut worst);

        // AB*: |a||b| ≤ max(|a|², |b|²); the commutator collapses to 2|Im(a b̄)|.
        let r = check_ab_star(&sc(pa), &sc(pb), &opts).unwrap();
        expect(r.track("corollary").unwrap(), &[pa.norm() * pb.norm()], &[big * big], &mut worst);
        let s = pa.norm_sqr() + pb.norm_sqr();
        expect(r.track("commutator").unwrap(), &[2.0 * (pa * pb.conj()).im.abs(), 0.0], &[s, s], &mut worst);

        // Positive sandwich with x ≥ 0.
        let x = g3.norm_sqr();
        let (p, q) = (x.powf(2.0 * alpha), x.powf(2.0 - 2.0 * alpha));
        let r = check_positive_sandwich(&sc(pa), &sc(pb), &re(x), alpha, &opts).unwrap();
        let lhs = pa.norm() * x * pb.norm();
        expect(r.track("sandwich").unwrap(), &[lhs], &desc(vec![pa.norm_sqr() * p, pb.norm_sqr() * q]), &mut worst);
        expect(r.track("max-norm").unwrap(), &[lhs], &[p.max(q) * big * big], &mut worst);
        let r = check_positive_sandwich(&re(ra), &re(rb), &re(x), alpha, &opts).unwrap();
        expect(r.track("positive").unwrap(), &[ra.sqrt() * x * rb.sqrt()], &[p.max(q) * ra.max(rb)], &mut worst);

        // (1/√2)|u + v| ≤ |u + iv| ≤ |u| + |v| over one to three scalar parts.
        let k = 1 + seed as usize % 3;
        let zs = [g1, g2, g4];
        let parts: Vec<ComplexMatrix> = zs[..k].iter().map(|&w| sc(w)).collect();
        let sum_ri = desc(zs[..k].iter().map(|w| (w.re + w.im).abs()).collect());
        let r = check_normal_cartesian(&parts, &opts).unwrap();
        let mods = desc(zs[..k].iter().map(|w| w.norm()).collect());
        let lower: Vec<f64> = sum_ri.iter().map(|v| v / SQRT_2).collect();
        expect(r.track("lower").unwrap(), &lower, &mods, &mut worst);
        let upper = desc(zs[..k].iter().map(|w| w.re.abs() + w.im.abs()).collect());
        expect(r.track("upper").unwrap(), &mods, &upper, &mut worst);

        // z + i z̄ = (1 + i)(Re z + Im z), so the lower bound is an equality.
        let r = check_a_plus_ia_star(&parts, &opts).unwrap();
        let tw: Vec<f64> = sum_ri.iter().map(|v| SQRT_2 * v).collect();
        expect(r.track("lower").unwrap(), &tw, &tw, &mut worst);
        let doubled: Vec<f64> = sum_ri.iter().map(|v| 2.0 * v).collect();
        expect(r.track("upper").unwrap(), &tw, &doubled, &mut worst);

        cases += 1;
    }
    verdict(
        7,
        worst <= 1e-13,
        format!("{cases} scalar draws across all 12 checks, worst deviation from closed form {worst:.2e}"),
    );
}
