use alloc::vec;
use alloc::vec::Vec;

use approx::assert_relative_eq;
use proptest::prelude::*;

use super::*;
use crate::distributions::{DistributionSpec, Family};
use crate::rng::RngStream;
use crate::sample::{Sample, SortedSample};

fn d(f: Family) -> DistributionSpec {
    DistributionSpec::new(f).unwrap()
}

fn exp(rate: f64) -> DistributionSpec {
    d(Family::Exponential { rate })
}

fn burr(k: f64, c: f64) -> DistributionSpec {
    d(Family::BurrXii { k, c, sigma: 1.0 })
}

fn sample(v: &[f64]) -> Sample {
    Sample::new(v.to_vec()).unwrap()
}

/// The families whose characterizations hold.
fn hypotheses() -> Vec<DistributionSpec> {
    vec![
        d(Family::Normal { mu: 0.0, sigma: 1.0 }),
        d(Family::Laplace { mu: 0.0, sigma: 1.0 }),
        d(Family::Gamma { k: 2.0, lambda: 1.0 }),
        exp(1.0),
        d(Family::InverseGaussian { mu: 1.0, lambda: 1.0 }),
        d(Family::Weibull { k: 1.5, lambda: 1.0 }),
        burr(2.0, 1.0),
        d(Family::Levy { mu: 0.0, sigma: 1.0 }),
        d(Family::LogNormal { mu: 0.0, sigma: 1.0 }),
        d(Family::Beta { alpha: 2.0, beta: 3.0 }),
        d(Family::Uniform { lower: 0.0, upper: 1.0 }),
    ]
}

fn kind(dist: &DistributionSpec) -> OperatorKind {
    OperatorKind::for_distribution(dist).unwrap()
}

#[test]
fn empirical_min_examples() {
    let b = burr(1.0, 1.0);
    let e = exp(1.0);
    assert_eq!(empirical_t_min(&sample(&[1.0]), |x| b.score(x), 2.0, 0.0).unwrap(), 1.0);
    assert_eq!(empirical_t_min(&sample(&[2.0]), |x| e.score(x), 1.0, 0.0).unwrap(), 1.0);
    assert_eq!(empirical_t_min(&sample(&[1.0, 3.0]), |x| e.score(x), 2.0, 0.0).unwrap(), 1.5);
    assert!(empirical_t_min(&sample(&[1.0, -3.0]), |x| e.score(x), 2.0, 0.0).is_err());
}

#[test]
fn empirical_zero_bias_examples() {
    assert_eq!(empirical_t_zero_bias(&sample(&[0.0]), 1.3, 1.0), 0.0);
    assert_eq!(empirical_t_zero_bias(&sample(&[-1.0, 1.0]), 0.0, 1.0), 0.5);
    assert_eq!(empirical_t_zero_bias(&sample(&[-1.0, 1.0]), 2.0, 1.0), 1.0);
}

#[test]
fn operator_kinds_follow_the_support() {
    assert_eq!(kind(&d(Family::Normal { mu: 0.0, sigma: 1.0 })), OperatorKind::RealLine);
    assert_eq!(kind(&exp(1.0)), OperatorKind::PositiveAxisMin);
    assert_eq!(
        kind(&d(Family::Levy { mu: -1.0, sigma: 1.0 })),
        OperatorKind::LowerBoundedMin { lower: -1.0 }
    );
    assert_eq!(
        kind(&d(Family::Uniform { lower: 0.0, upper: 1.0 })),
        OperatorKind::BoundedRightLimit {
            lower: 0.0,
            upper: 1.0,
            density_limit: 1.0
        }
    );
    assert_eq!(
        kind(&d(Family::Beta { alpha: 2.0, beta: 1.0 })),
        OperatorKind::BoundedRightLimit {
            lower: 0.0,
            upper: 1.0,
            density_limit: 2.0
        }
    );
    assert_eq!(
        kind(&d(Family::Beta { alpha: 1.0, beta: 0.5 })),
        OperatorKind::BoundedLeftLimit {
            lower: 0.0,
            upper: 1.0,
            density_limit: 0.5
        }
    );
    assert!(OperatorKind::for_distribution(&d(Family::Beta { alpha: 0.5, beta: 0.5 })).is_err());
    assert!(OperatorKind::RealLine.validate_for(&exp(1.0)).is_err());
}

#[test]
fn exact_operator_examples() {
    let e = exact_t(&exp(1.0), &OperatorKind::PositiveAxisMin, 1.0, 1e-10).unwrap();
    assert_relative_eq!(e, 1.0 - (-1.0f64).exp(), epsilon = 1e-10);

    let u = d(Family::Uniform { lower: 0.0, upper: 1.0 });
    assert_relative_eq!(exact_t(&u, &kind(&u), 0.3, 1e-10).unwrap(), 0.3, epsilon = 1e-12);

    let b = burr(2.0, 3.0);
    let v = exact_t(&b, &OperatorKind::PositiveAxisMin, 0.7, 1e-10).unwrap();
    assert_relative_eq!(v, 1.0 - (1.0 + 0.7f64.powi(3)).powi(-2), epsilon = 1e-9);
}

#[test]
fn left_limit_variant_reproduces_the_cdf() {
    // Beta(2, 1) has p(0+) = 0 and F(t) = t²; Beta(1, 0.5) has p(0+) = 0.5 and
    // a (1-x)^(-1/2) pole at 1 that x-coordinate quadrature resolves to ~1e-8
    for (a, b, tol) in [(2.0, 1.0, 1e-10), (1.0, 0.5, 1e-7)] {
        let beta = d(Family::Beta { alpha: a, beta: b });
        let (left, _) = endpoint_density_limits(&beta);
        let kind = OperatorKind::BoundedLeftLimit {
            lower: 0.0,
            upper: 1.0,
            density_limit: left.unwrap(),
        };
        for t in [0.1, 0.5, 0.9] {
            assert_relative_eq!(exact_t(&beta, &kind, t, tol).unwrap(), beta.cdf(t), epsilon = 10.0 * tol);
        }
    }
}

#[test]
fn mismatched_exponentials() {
    let t = 1.0;
    let v = exact_t_under(&exp(1.0), &OperatorKind::PositiveAxisMin, &exp(2.0), t, 1e-10).unwrap();
    assert_relative_eq!(v, (1.0 - (-2.0f64).exp()) / 2.0, epsilon = 1e-10);
    let r = fixed_point_residual_under(&exp(1.0), &OperatorKind::PositiveAxisMin, &exp(2.0), &[t], 1e-10).unwrap();
    assert!(r > 0.1, "{r}");
}

#[test]
fn fixed_point_holds_for_hypothesis_families() {
    for dist in hypotheses() {
        let grid = residual_grid(&dist, 50).unwrap();
        let r = fixed_point_residual(&dist, &kind(&dist), &grid).unwrap();
        assert!(r <= 1e-8, "{}: residual {r:e}", dist.label());
    }
    for theta in [0.5, 1.0, 3.0] {
        let w = d(Family::Weibull { k: theta, lambda: 1.0 });
        let r = fixed_point_residual(&w, &kind(&w), &residual_grid(&w, 50).unwrap()).unwrap();
        assert!(r <= 1e-6, "W({theta}): {r:e}");
    }
}

#[test]
fn mismatched_pairs_are_separated() {
    let n01 = d(Family::Normal { mu: 0.0, sigma: 1.0 });
    let pairs = vec![
        (exp(1.0), exp(2.0)),
        (exp(1.0), d(Family::Gamma { k: 2.0, lambda: 1.0 })),
        (d(Family::Gamma { k: 2.0, lambda: 1.0 }), d(Family::Weibull { k: 1.5, lambda: 1.0 })),
        (d(Family::Weibull { k: 1.5, lambda: 1.0 }), d(Family::LogNormal { mu: 0.0, sigma: 1.0 })),
        (d(Family::LogNormal { mu: 0.0, sigma: 1.0 }), exp(1.0)),
        (burr(2.0, 1.0), exp(1.0)),
        (burr(1.0, 1.0), d(Family::Weibull { k: 0.5, lambda: 1.0 })),
        (n01.clone(), d(Family::Laplace { mu: 0.0, sigma: 1.0 })),
        (d(Family::Laplace { mu: 0.0, sigma: 1.0 }), d(Family::Normal { mu: 0.0, sigma: 2.0 })),
        (n01, d(Family::Normal { mu: 1.0, sigma: 1.0 })),
        (d(Family::InverseGaussian { mu: 1.0, lambda: 1.0 }), d(Family::Gamma { k: 2.0, lambda: 1.0 })),
        (d(Family::Uniform { lower: 0.0, upper: 1.0 }), d(Family::Beta { alpha: 2.0, beta: 3.0 })),
        (d(Family::Beta { alpha: 2.0, beta: 3.0 }), d(Family::Beta { alpha: 3.0, beta: 3.0 })),
    ];
    for (dist, cand) in pairs {
        let grid = residual_grid(&cand, 20).unwrap();
        let r = fixed_point_residual_under(&dist, &kind(&dist), &cand, &grid, 1e-9).unwrap();
        assert!(r > 0.01, "{} under {}: {r}", dist.label(), cand.label());
    }
}

#[test]
fn density_identity_examples() {
    assert_relative_eq!(density_identity(&exp(1.0), 1.0).unwrap(), (-1.0f64).exp(), epsilon = 1e-9);
    let u = d(Family::Uniform { lower: 0.0, upper: 1.0 });
    let left = OperatorKind::BoundedLeftLimit {
        lower: 0.0,
        upper: 1.0,
        density_limit: 1.0,
    };
    assert_relative_eq!(density_identity_under(&u, &left, &u, 0.4, 1e-9).unwrap(), 1.0);
    let g = d(Family::Gamma { k: 2.0, lambda: 1.0 });
    assert_relative_eq!(density_identity(&g, 1.0).unwrap(), (-1.0f64).exp(), epsilon = 1e-8);
}

#[test]
fn density_identity_recovers_the_density() {
    for dist in hypotheses() {
        for u in [0.2, 0.5, 0.8] {
            let t = dist.quantile(u).unwrap();
            if dist.support().is_knot(t) {
                continue;
            }
            let v = density_identity(&dist, t).unwrap();
            assert_relative_eq!(v, dist.pdf(t).unwrap(), epsilon = 1e-7);
        }
    }
}

#[test]
fn test_function_examples() {
    let e = exp(1.0);
    let v = test_function_ftp(&e, 1.0, 0.5).unwrap();
    assert_relative_eq!(v, (0.5f64.exp() - 1.0) * (-1.0f64).exp(), max_relative = 1e-14);
    assert!(test_function_ftp(&e, 1.0, 1e-12).unwrap() < 1e-11);
    for dist in hypotheses() {
        let t = dist.quantile(0.37).unwrap();
        let left = test_function_ftp(&dist, t, t).unwrap();
        let right = test_function_ftp(&dist, t, t + 1e-13 * t.abs().max(1.0)).unwrap();
        assert_relative_eq!(left, right, max_relative = 1e-10);
    }
    assert!(test_function_ftp(&e, 1.0, -1.0).is_err());
}

#[test]
fn test_function_derivative_matches_the_stein_equation() {
    // f' = 1{x ≤ t} - P(t) - s f, checked pointwise away from the kink
    for dist in hypotheses() {
        let t = dist.quantile(0.4).unwrap();
        for u in [0.05, 0.3, 0.6, 0.95] {
            let x = dist.quantile(u).unwrap();
            if dist.support().is_knot(x) {
                continue;
            }
            let f = test_function_ftp(&dist, t, x).unwrap();
            let fd = test_function_ftp_derivative(&dist, t, x).unwrap();
            let ind = if x <= t { 1.0 } else { 0.0 };
            let exact = ind - dist.cdf(t) - dist.score(x).unwrap() * f;
            assert_relative_eq!(fd, exact, epsilon = 1e-8);
        }
    }
}

#[test]
fn stein_expectation_examples() {
    let e1 = exp(1.0);
    let same = stein_expectation(&e1, &e1, 1.0, 1e-10).unwrap();
    assert!(same.value.abs() < 1e-8, "{same:?}");
    let other = stein_expectation(&e1, &exp(2.0), 1.0, 1e-10).unwrap();
    let oracle = (1.0 - (-2.0f64).exp()) - (1.0 - (-1.0f64).exp());
    assert_relative_eq!(other.value, oracle, epsilon = 1e-8);
    assert_relative_eq!(other.expected, oracle, epsilon = 1e-15);
    let n = d(Family::Normal { mu: 0.0, sigma: 1.0 });
    assert!(stein_expectation(&n, &n, 0.5, 1e-10).unwrap().value.abs() < 1e-8);
}

#[test]
fn stein_identity_on_mixed_pairs() {
    let n = |mu, sigma| d(Family::Normal { mu, sigma });
    let cases = vec![
        (n(0.0, 1.0), d(Family::Laplace { mu: 0.5, sigma: 1.0 }), 0.2),
        (d(Family::Laplace { mu: 0.0, sigma: 1.0 }), n(0.3, 0.7), 0.1),
        (exp(1.0), d(Family::Gamma { k: 2.0, lambda: 1.0 }), 1.5),
        (d(Family::Gamma { k: 2.0, lambda: 1.0 }), d(Family::LogNormal { mu: 0.0, sigma: 0.5 }), 0.8),
        (burr(2.0, 1.0), d(Family::Weibull { k: 1.5, lambda: 1.0 }), 0.7),
        (d(Family::Beta { alpha: 2.0, beta: 3.0 }), d(Family::Beta { alpha: 3.0, beta: 2.0 }), 0.5),
    ];
    for (dist, cand, t) in cases {
        let s = stein_expectation(&dist, &cand, t, 1e-10).unwrap();
        assert!(s.discrepancy() < 1e-8, "{} vs {}: {s:?}", dist.label(), cand.label());
    }
}

#[test]
fn min_operator_matches_direct_sum_and_is_piecewise_linear() {
    let b = burr(1.0, 1.0);
    let s = b.sample(40, &RngStream::new(5, 0)).unwrap();
    let sorted = s.sorted();
    let coef: Vec<f64> = sorted.values().iter().map(|&y| -b.score(y).unwrap()).collect();
    let op = min_operator(&sorted, &coef, 0.0).unwrap();
    for t in [0.01, 0.3, 1.0, 2.5, 40.0, 1e6] {
        let direct = empirical_t_min(&s, |x| b.score(x), t, 0.0).unwrap();
        assert_relative_eq!(op.eval(t), direct, epsilon = 1e-14);
    }
    // continuity at the order statistics, constant past the maximum
    for &y in sorted.values() {
        let m = op.locate(y);
        let (a0, b0) = op.piece(m - 1);
        let (a1, b1) = op.piece(m);
        assert_relative_eq!(a0 + b0 * y, a1 + b1 * y, epsilon = 1e-14);
    }
    assert_eq!(op.piece(op.pieces() - 1).1, 0.0);
}

#[test]
fn zero_bias_operator_matches_direct_sum() {
    let n = d(Family::Normal { mu: 0.0, sigma: 1.0 });
    let s = n.sample(30, &RngStream::new(6, 0)).unwrap();
    let op = zero_bias_operator(&s.sorted(), 1.0);
    for t in [-3.0, -0.2, 0.0, 0.7, 5.0] {
        assert_relative_eq!(op.eval(t), empirical_t_zero_bias(&s, t, 1.0), epsilon = 1e-14);
    }
}

#[test]
fn empirical_operator_converges_to_exact_operator() {
    let n = 100_000;
    for dist in [burr(2.0, 1.0), d(Family::Gamma { k: 2.0, lambda: 1.0 }), exp(1.0)] {
        let s = dist.sample(n, &RngStream::new(11, 3)).unwrap();
        for u in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let t = dist.quantile(u).unwrap();
            let terms: Vec<f64> = s.values().iter().map(|&y| -dist.score(y).unwrap() * y.min(t)).collect();
            let mean = terms.iter().sum::<f64>() / n as f64;
            let var = terms.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / (n - 1) as f64;
            let se = (var / n as f64).sqrt();
            let exact = exact_t(&dist, &OperatorKind::PositiveAxisMin, t, 1e-10).unwrap();
            let emp = empirical_t_min(&s, |x| dist.score(x), t, 0.0).unwrap();
            assert!((emp - exact).abs() <= 4.0 * se, "{} t={t}: {emp} vs {exact} (se {se})", dist.label());
        }
    }
}

#[test]
fn condition_examples() {
    let sg = check_conditions(&d(Family::ShiftedGamma { k: 0.5, lambda: 1.0, mu: 1.0 }), 200);
    assert!(sg.c3_divergent, "{sg:?}");
    assert_eq!(sg.verdicts.c3, Verdict::Fail);
    assert!(!sg.passes());

    let arcsine = check_conditions(&d(Family::Beta { alpha: 0.5, beta: 0.5 }), 200);
    assert!(arcsine.operator.is_none());
    assert_eq!(arcsine.left_density_limit, None);
    assert_eq!(arcsine.right_density_limit, None);
    assert!(!arcsine.passes());

    let b = check_conditions(&burr(1.0, 1.0), 200);
    assert!(b.passes(), "{b:?}");
    assert_eq!(b.verdicts.c5, Verdict::NotApplicable);
}

#[test]
fn hypothesis_families_meet_their_conditions() {
    for dist in hypotheses() {
        let r = check_conditions(&dist, 400);
        assert!(r.passes(), "{}: {r:?}", dist.label());
    }
    // c < 1 needs the weighted form
    let r = check_conditions(&burr(2.0, 0.5), 200);
    assert_eq!(r.c3_form, C3Form::Weighted);
    assert!(r.passes(), "{r:?}");
}

#[test]
fn numeric_endpoint_limits_match_closed_forms() {
    for dist in [
        d(Family::Uniform { lower: 0.0, upper: 1.0 }),
        d(Family::Beta { alpha: 2.0, beta: 1.0 }),
        d(Family::Beta { alpha: 2.0, beta: 3.0 }),
        exp(2.0),
        burr(3.0, 1.0),
        d(Family::HalfNormal),
    ] {
        let r = check_conditions(&dist, 100);
        let (l, rt) = endpoint_density_limits(&dist);
        for (num, exact) in [(r.left_density_limit, l), (r.right_density_limit, rt)] {
            match (num, exact) {
                (Some(a), Some(b)) => assert_relative_eq!(a, b, max_relative = 1e-6, epsilon = 1e-12),
                (None, None) => {}
                other => panic!("{}: {other:?}", dist.label()),
            }
        }
    }
}

#[test]
fn report_round_trips_through_json() {
    let r = check_conditions(&exp(1.0), 100);
    let json = serde_json::to_string(&r).unwrap();
    let back: ConditionReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back.verdicts, r.verdicts);
    assert_eq!(back.operator, r.operator);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn min_operator_is_flat_beyond_the_maximum(
        values in prop::collection::vec(0.01f64..50.0, 1..40),
        extra in 0.0f64..100.0,
    ) {
        let b = burr(1.5, 2.0);
        let sorted = Sample::new(values).unwrap().sorted();
        let coef: Vec<f64> = sorted.values().iter().map(|&y| -b.score(y).unwrap()).collect();
        let op = min_operator(&sorted, &coef, 0.0).unwrap();
        let top = sorted.max();
        prop_assert!((op.eval(top) - op.eval(top + extra)).abs() <= 1e-12 * op.eval(top).abs().max(1.0));
    }

    #[test]
    fn min_operator_agrees_with_direct_evaluation(
        values in prop::collection::vec(0.01f64..50.0, 1..40),
        t in 0.001f64..80.0,
    ) {
        let e = d(Family::Gamma { k: 2.5, lambda: 1.0 });
        let s = Sample::new(values).unwrap();
        let sorted: SortedSample = s.sorted();
        let coef: Vec<f64> = sorted.values().iter().map(|&y| -e.score(y).unwrap()).collect();
        let op = min_operator(&sorted, &coef, 0.0).unwrap();
        let direct = empirical_t_min(&s, |x| e.score(x), t, 0.0).unwrap();
        prop_assert!((op.eval(t) - direct).abs() <= 1e-10 * direct.abs().max(1.0));
    }
}
