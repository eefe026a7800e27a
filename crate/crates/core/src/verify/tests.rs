use super::*;
use crate::config::{k_of_alpha, Branch, Problem};
use crate::error::{Error, Result};
use crate::operators::{BoundarySample, BoundaryVectorField};
use crate::solver::{configure, FieldGrid, FieldKind, GridSpec};
use crate::{PVQuadratureScheme, ProblemConfig};

fn cfg(k: f64) -> ProblemConfig {
    configure(Problem::Dirichlet, k, 2.0, Branch::H1Branch).unwrap()
}

fn potential_grid<F: Fn(f64, f64) -> f64 + Sync>(spec: &GridSpec<f64>, f: F) -> FieldGrid<f64> {
    FieldGrid::tabulate(spec, FieldKind::Potential, |t, x| Ok(vec![f(t, x)])).unwrap()
}

fn spec() -> GridSpec<f64> {
    let x: Vec<f64> = (0..20).map(|j| -1.0 + 0.1 * j as f64 + 0.05).collect();
    let t: Vec<f64> = (1..=8).map(|i| 0.1 * i as f64).collect();
    GridSpec::new(t, x).unwrap()
}

#[test]
fn harmonic_polynomials_have_tiny_residual() {
    // Quadratics are reproduced exactly by the nonuniform 3-point rule.
    let g = potential_grid(&spec(), |t, x| t * t - x * x + 3.0 * t * x - x);
    assert!(laplacian_residual(&g).unwrap() < 1e-12);
}

#[test]
fn constant_field_has_zero_residual() {
    let g = potential_grid(&spec(), |_, _| 2.5);
    assert!(laplacian_residual(&g).unwrap() < 1e-3);
}

#[test]
fn non_harmonic_field_is_flagged() {
    let g = potential_grid(&spec(), |t, x| t * t + x * x);
    assert!(laplacian_residual(&g).unwrap() > 0.5);
}

#[test]
fn coarse_grids_are_rejected() {
    let s = GridSpec::new(vec![0.1, 0.2], vec![-0.5, 0.5]).unwrap();
    let g = potential_grid(&s, |_, _| 1.0);
    assert!(matches!(laplacian_residual(&g), Err(Error::GridTooCoarse(_))));
    let s = GridSpec::new(vec![0.1, 0.2, 0.3], vec![-0.2, -0.1, 0.1, 0.2, 0.3, 0.4]).unwrap();
    let g = potential_grid(&s, |_, _| 1.0);
    assert!(matches!(laplacian_residual(&g), Err(Error::GridTooCoarse(_))));
}

#[test]
fn transmission_holds_for_smooth_harmonic_at_k0() {
    let u = |t: f64, x: f64| -> Result<f64> { Ok(t * x + x) };
    let r = transmission_check(&u, &cfg(0.0), &[0.3, 0.5], 1e-3).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn transmission_detects_a_kink() {
    let u = |_t: f64, x: f64| -> Result<f64> { Ok(x.abs()) };
    let r = transmission_check(&u, &cfg(0.0), &[0.3], 1e-3).unwrap();
    assert!(!r.passed);
}

#[test]
fn nt_max_of_constant_is_constant() {
    let x: Vec<f64> = (0..60).map(|j| -3.0 + 0.1 * j as f64 + 0.05).collect();
    let t: Vec<f64> = (1..=20).map(|i| 0.1 * i as f64).collect();
    let s = GridSpec::new(t, x).unwrap();
    let g = potential_grid(&s, |_, _| -1.75);
    for variant in [NTVariant::Plain, NTVariant::Modified] {
        let prof = nontangential_max(&g, variant).unwrap();
        assert!(prof.nstar_values.iter().all(|v| (v - 1.75).abs() < 1e-12), "{variant:?}");
    }
}

#[test]
fn nt_max_needs_populated_cones() {
    let s = GridSpec::new(vec![0.1, 0.2], vec![-0.5, 0.5]).unwrap();
    let g = potential_grid(&s, |_, _| 1.0);
    assert!(matches!(nontangential_max(&g, NTVariant::Plain), Err(Error::GridTooCoarse(_))));
}

#[test]
fn constant_potential_has_zero_energy() {
    let u = |_t: f64, _x: f64| -> Result<f64> { Ok(4.0) };
    let (fit, _) = energy_scaling(&u, &cfg(0.0), &[0.1, 0.05, 0.025]).unwrap();
    assert!(fit.energies.iter().all(|&e| e.abs() < 1e-20));
}

#[test]
fn energy_needs_decreasing_heights() {
    let u = |_t: f64, _x: f64| -> Result<f64> { Ok(0.0) };
    assert!(energy_scaling(&u, &cfg(0.0), &[0.1, 0.2, 0.05]).is_err());
    assert!(energy_scaling(&u, &cfg(0.0), &[0.1, 0.05]).is_err());
}

#[test]
fn far_field_rate_saturates() {
    assert!((dirichlet_far_field_decay(0.5) - 1.5).abs() < 1e-15);
    assert_eq!(dirichlet_far_field_decay(-1.5), 3.0);
    assert!(tail_in_lp(-1.3, 1.0));
    assert!(!tail_in_lp(-0.4, 2.0));
}

#[test]
fn dawson_matches_reference_values() {
    // Abramowitz-Stegun table values.
    for &(x, d) in &[(0.5, 0.424_436_383_5), (1.0, 0.538_079_506_9), (2.0, 0.301_340_388_4)] {
        assert!((dawson(x) - d).abs() < 1e-9, "x={x}");
    }
    assert_eq!(dawson(0.0), 0.0);
    assert!((dawson(-1.0) + dawson(1.0)).abs() < 1e-15);
}

#[test]
fn scalar_dunford_identity() {
    for &(x, t) in &[(1.0, 0.0), (0.3, 2.0), (2.0, -1.0)] {
        let r = dunford_scalar_identity(x, t);
        assert!(r.passed, "{r:?}");
    }
}

#[test]
fn dunford_of_zero_is_zero() {
    let f = BoundaryVectorField::<f64>::zero();
    let scheme = PVQuadratureScheme::default();
    let got = sgn_reconstruction(&f, 0.7, &cfg(1.0), &scheme).unwrap();
    assert_eq!(got, [0.0, 0.0]);
}

#[test]
fn dunford_sgn_matches_cauchy_integral() {
    let f = BoundaryVectorField::new(
        BoundarySample::from_fn(|y: f64| (-y * y).exp()),
        BoundarySample::from_fn(|y: f64| y * (-(y - 0.3).powi(2)).exp()),
    );
    let c = configure(Problem::Dirichlet, k_of_alpha(0.3), 2.0, Branch::H1Branch).unwrap();
    let r = dunford_reconstruction(&f, 0.8, &c, &PVQuadratureScheme::default()).unwrap();
    assert!(r.passed, "{r:?}");
}

#[test]
fn empty_sweep_gives_no_reports() {
    assert!(run_suite(&[], &SuiteSpec::default()).is_empty());
}

#[test]
fn only_filters_by_name() {
    let spec = SuiteSpec {
        only: Some("multiplier-identity".into()),
        ..Default::default()
    };
    let r = run_suite(&[(1.0, 2.0), (0.5, 3.0)], &spec);
    assert_eq!(r.len(), 2);
    assert!(r.iter().all(|x| x.check_name == "multiplier-identity" && x.passed));
    assert!(check_names().contains(&"multiplier-identity"));
}

#[test]
fn threshold_is_an_expected_failure() {
    let spec = SuiteSpec {
        only: Some("dirichlet-threshold".into()),
        ..Default::default()
    };
    let r = run_suite(&[(1.0, 2.0)], &spec);
    assert_eq!(r.len(), 1);
    assert!(r[0].expected_failure && r[0].passed, "{:?}", r[0]);
    assert!(summary_table(&r).contains("xfail"));
}

#[test]
fn timed_turns_errors_into_failures() {
    let r = timed("boom", &[("k", "1".into())], 1e-3, || Err(Error::QuadratureFailure));
    assert!(!r.passed);
    assert!(r.measured_error.is_infinite());
    assert_eq!(r.parameters["k"], "1");
}
