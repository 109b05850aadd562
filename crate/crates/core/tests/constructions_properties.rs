mod common;

use common::{random, sv, to_na};
use proptest::prelude::*;
use svineq::constructions::*;
use svineq::generators::{generate, GenConfig, MatrixClass};
use svineq::linalg::*;

fn tol() -> Tolerances {
    Tolerances::default()
}

#[test]
fn direct_sum_spectrum_is_the_merge() {
    for seed in 0..200 {
        let (r1, c1) = (1 + seed as usize % 3, 1 + (seed as usize / 3) % 3);
        let (a, b) = (random(seed, r1, c1), random(seed + 9, 2, 3));
        let direct = singular_values(&direct_sum(&[a.clone(), b.clone()]).unwrap(), &tol()).unwrap();
        let merged = merge_spectra(&singular_values(&a, &tol()).unwrap(), &singular_values(&b, &tol()).unwrap()).unwrap();
        let nonzero = merged.len();
        for j in 0..direct.len() {
            let want = if j < nonzero { merged.get(j) } else { 0.0 };
            assert!((direct.get(j) - want).abs() < 1e-12, "seed {seed}");
        }
    }
}

#[test]
fn companion_is_unitarily_equivalent() {
    for seed in 0..100 {
        let p = generate(&GenConfig {
            seed,
            rows: 2,
            cols: 3,
            scale: 1.0,
            class: MatrixClass::BlockPsd,
        })
        .unwrap();
        let blk = block2x2(&p[0], &p[1], &p[2]).unwrap();
        let s = singular_values(&blk.realized, &tol()).unwrap();
        let t = singular_values(&blk.companion().realized, &tol()).unwrap();
        for j in 0..5 {
            assert!((s.get(j) - t.get(j)).abs() < 1e-12);
        }
        assert_eq!(blk.pinching(), direct_sum(&[p[0].clone(), p[2].clone()]).unwrap());
    }
}

#[test]
fn norms_against_oracle_spectrum() {
    for seed in 0..100 {
        let a = random(seed, 3, 4);
        let s = sv(&to_na(&a));
        let schatten = |p: f64| s.iter().map(|v| v.powf(p)).sum::<f64>().powf(1.0 / p);
        for p in [1.0, 2.0, 3.0, 7.5] {
            let got = norm(&a, NormFamily::Schatten(p), &tol()).unwrap();
            assert!((got - schatten(p)).abs() <= 1e-10 * schatten(p));
        }
        for k in 1..=3 {
            let got = norm(&a, NormFamily::KyFan(k), &tol()).unwrap();
            assert!((got - s[..k].iter().sum::<f64>()).abs() <= 1e-10 * s[0]);
        }
        let fro = a.frobenius_norm();
        assert!((norm(&a, NormFamily::Schatten(2.0), &tol()).unwrap() - fro).abs() <= 1e-12 * fro);
    }
}

#[test]
fn large_schatten_exponent_does_not_overflow() {
    let s = SingularSpectrum::new(vec![1e200, 1e200]).unwrap();
    let v = NormFamily::Schatten(4.0).of_spectrum(&s, 2).unwrap();
    assert!((v / 1e200 - 2f64.powf(0.25)).abs() < 1e-12);
}

#[test]
fn norm_family_json_shape() {
    let text = serde_json::to_string(&NormFamily::KyFan(2)).unwrap();
    assert_eq!(text, r#"{"kind":"ky_fan","param":2}"#);
    let back: NormFamily = serde_json::from_str(r#"{"kind":"schatten","param":1.5}"#).unwrap();
    assert_eq!(back, NormFamily::Schatten(1.5));
}

fn sorted_vec() -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(0.0..10.0f64, 0..6).prop_map(|mut v| {
        v.sort_by(|a, b| b.total_cmp(a));
        v
    })
}

proptest! {
    #[test]
    fn merge_is_a_sorted_multiset_union(x in sorted_vec(), y in sorted_vec()) {
        let m = merge_spectra(&SingularSpectrum::new(x.clone()).unwrap(), &SingularSpectrum::new(y.clone()).unwrap()).unwrap();
        let mut all = [x, y].concat();
        all.sort_by(|a, b| b.total_cmp(a));
        prop_assert_eq!(m.values(), all.as_slice());
    }

    #[test]
    fn ky_fan_is_monotone_in_k(x in sorted_vec()) {
        prop_assume!(!x.is_empty());
        let s = SingularSpectrum::new(x.clone()).unwrap();
        let mut prev = 0.0;
        for k in 1..=x.len() {
            let v = NormFamily::KyFan(k).of_spectrum(&s, x.len()).unwrap();
            prop_assert!(v >= prev);
            prev = v;
        }
    }
}
