use num_complex::Complex64;
use proptest::prelude::*;
use zlab_core::quadrature::{
    integrate_abs, l1_translate_distance, short_interval_mean, translate_distance, LineSegment, Norm, QuadratureConfig,
    Rule, TargetFunction, WeightFunction,
};
use zlab_core::special::{zeta_on_vertical_grid, EvalAccuracy};

#[test]
fn short_interval_mean_matches_dense_trapezoid() {
    let (sigma, a, n) = (0.75, 100.0, 1_000_000usize);
    let values = zeta_on_vertical_grid(sigma, a, 1.0 / n as f64, n + 1, &EvalAccuracy::for_height(101.0)).unwrap();
    let inner: f64 = values[1..n].iter().map(|z| z.norm()).sum();
    let trapezoid = (inner + 0.5 * (values[0].norm() + values[n].norm())) / n as f64;
    let seg = LineSegment::new(sigma, a, 1.0).unwrap();
    let mean = short_interval_mean(&seg, &QuadratureConfig::default()).unwrap();
    assert!(mean.converged);
    assert!((mean.value - trapezoid).abs() <= 1e-6, "{} vs {trapezoid}", mean.value);
}

#[test]
fn refinement_converges_as_tolerance_tightens() {
    let seg = LineSegment::new(0.5, 1000.0, 2.0).unwrap();
    let f = TargetFunction::real_constant(1.0, 2.0).unwrap();
    let tols = [1e-4, 1e-6, 1e-8, 1e-10];
    let values: Vec<f64> = tols
        .iter()
        .map(|&tol| {
            let cfg = QuadratureConfig::default().with_tol(tol);
            l1_translate_distance(&f, &seg, &WeightFunction::Unit, &cfg)
                .unwrap()
                .value
        })
        .collect();
    for k in 0..tols.len() - 1 {
        assert!((values[k] - values[3]).abs() <= 10.0 * tols[k], "{values:?}");
    }
}

#[test]
fn rules_agree_on_a_distance() {
    let seg = LineSegment::new(0.5, 2000.0, 1.0).unwrap();
    let f = TargetFunction::polynomial(&[1.0, -1.0], 1.0).unwrap();
    let gk = QuadratureConfig::default();
    let simpson = gk.with_rule(Rule::CompositeSimpson);
    let a = l1_translate_distance(&f, &seg, &WeightFunction::Unit, &gk)
        .unwrap()
        .value;
    let b = l1_translate_distance(&f, &seg, &WeightFunction::Unit, &simpson)
        .unwrap()
        .value;
    assert!((a - b).abs() < 1e-7, "{a} vs {b}");
}

#[test]
fn sampled_linear_target_equals_polynomial() {
    let csv: String = std::iter::once("t,re,im".to_string())
        .chain((0..=10).map(|k| {
            let t = k as f64 / 10.0;
            format!("{t},{},0", 2.0 - t)
        }))
        .collect::<Vec<_>>()
        .join("\n");
    let sampled = TargetFunction::from_csv(&csv, 1.0).unwrap();
    let poly = TargetFunction::polynomial(&[2.0, -1.0], 1.0).unwrap();
    let seg = LineSegment::new(0.5, 500.0, 1.0).unwrap();
    let cfg = QuadratureConfig::default();
    let a = l1_translate_distance(&sampled, &seg, &WeightFunction::Unit, &cfg)
        .unwrap()
        .value;
    let b = l1_translate_distance(&poly, &seg, &WeightFunction::Unit, &cfg)
        .unwrap()
        .value;
    assert!((a - b).abs() < 1e-9, "{a} vs {b}");
}

#[test]
fn sup_norm_dominates_l1_over_unit_window() {
    let seg = LineSegment::new(0.5, 300.0, 1.0).unwrap();
    let f = TargetFunction::real_constant(0.5, 1.0).unwrap();
    let cfg = QuadratureConfig::default();
    let l1 = translate_distance(&f, &seg, &WeightFunction::Unit, &cfg, Norm::L1)
        .unwrap()
        .value;
    let sup = translate_distance(&f, &seg, &WeightFunction::Unit, &cfg, Norm::Sup)
        .unwrap()
        .value;
    assert!(sup >= l1);
}

#[test]
fn integrate_abs_of_oscillation() {
    // ∫_0^{10π} |cos x| dx = 20
    let out = integrate_abs(
        |x| Ok(Complex64::new(x.cos(), 0.0)),
        0.0,
        10.0 * std::f64::consts::PI,
        &QuadratureConfig::default(),
    )
    .unwrap();
    assert!((out.value - 20.0).abs() < 1e-9);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    // |d(c1) - d(c2)| <= |c1 - c2| H by the triangle inequality.
    #[test]
    fn distance_is_lipschitz_in_the_target(c1 in -2.0f64..2.0, c2 in -2.0f64..2.0, t in 50.0f64..3000.0) {
        let seg = LineSegment::new(0.5, t, 1.0).unwrap();
        let cfg = QuadratureConfig::default();
        let d = |c: f64| {
            let f = TargetFunction::real_constant(c, 1.0).unwrap();
            l1_translate_distance(&f, &seg, &WeightFunction::Unit, &cfg).unwrap().value
        };
        prop_assert!((d(c1) - d(c2)).abs() <= (c1 - c2).abs() + 1e-8);
    }

    #[test]
    fn distance_is_nonnegative_and_bounded_by_mean(c in -1.0f64..1.0, t in 50.0f64..3000.0) {
        let seg = LineSegment::new(0.7, t, 0.5).unwrap();
        let cfg = QuadratureConfig::default();
        let f = TargetFunction::real_constant(c, 0.5).unwrap();
        let d = l1_translate_distance(&f, &seg, &WeightFunction::Unit, &cfg).unwrap().value;
        let mean = short_interval_mean(&seg, &cfg).unwrap().value;
        prop_assert!(d >= 0.0);
        prop_assert!(d <= mean + 0.5 * c.abs() + 1e-8);
    }
}
