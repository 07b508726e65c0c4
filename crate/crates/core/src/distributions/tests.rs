use super::*;
use crate::numeric::quad::{integrate_pieces, QuadOptions};
use alloc::string::ToString;
use approx::assert_relative_eq;
use proptest::prelude::*;

fn d(f: Family) -> DistributionSpec {
    DistributionSpec::new(f).unwrap()
}

fn burr(k: f64, c: f64) -> DistributionSpec {
    d(Family::BurrXii { k, c, sigma: 1.0 })
}

/// One representative per family, including the simulation alternatives.
pub(crate) fn catalog() -> Vec<DistributionSpec> {
    use Family::*;
    [
        Normal { mu: 0.5, sigma: 2.0 },
        Laplace { mu: -1.0, sigma: 0.7 },
        Gamma { k: 2.0, lambda: 1.0 },
        Gamma { k: 0.6, lambda: 3.0 },
        Exponential { rate: 1.0 },
        InverseGaussian { mu: 1.0, lambda: 1.0 },
        InverseGaussian { mu: 1.0, lambda: 0.5 },
        Weibull { k: 1.5, lambda: 1.0 },
        Weibull { k: 0.5, lambda: 1.0 },
        BurrXii { k: 2.0, c: 1.0, sigma: 1.0 },
        BurrXii { k: 0.5, c: 2.0, sigma: 1.5 },
        Levy { mu: 0.0, sigma: 1.0 },
        LogNormal { mu: 0.0, sigma: 1.0 },
        Beta { alpha: 2.0, beta: 3.0 },
        Beta { alpha: 0.5, beta: 0.5 },
        Uniform { lower: 0.0, upper: 1.0 },
        HalfNormal,
        HalfCauchy,
        Gompertz { theta: 2.0 },
        LinearFailureRate { theta: 2.0 },
        InverseWeibull { theta: 1.0 },
        ShiftedGamma { k: 0.5, lambda: 1.0, mu: 1.0 },
    ]
    .into_iter()
    .map(d)
    .collect()
}

#[test]
fn pdf_examples() {
    assert_relative_eq!(burr(1.0, 1.0).pdf(1.0).unwrap(), 0.25, max_relative = 1e-15);
    let e = d(Family::Exponential { rate: 1.0 });
    assert_relative_eq!(e.pdf(1.0).unwrap(), (-1.0f64).exp(), max_relative = 1e-15);
    let u = d(Family::Uniform { lower: 0.0, upper: 1.0 });
    assert_eq!(u.pdf(0.5).unwrap(), 1.0);
    assert!(u.pdf(1.5).is_err());
    assert!(e.pdf(-1.0).is_err());
}

#[test]
fn cdf_examples() {
    assert_relative_eq!(burr(1.0, 1.0).cdf(1.0), 0.5, max_relative = 1e-15);
    let lf = d(Family::LinearFailureRate { theta: 2.0 });
    assert_relative_eq!(lf.cdf(1.0), 1.0 - (-2.0f64).exp(), max_relative = 1e-15);
    assert_eq!(d(Family::Gompertz { theta: 2.0 }).cdf(0.0), 0.0);
    // clamping
    assert_eq!(lf.cdf(-3.0), 0.0);
    assert_eq!(d(Family::Beta { alpha: 2.0, beta: 3.0 }).cdf(4.0), 1.0);
}

#[test]
fn quantile_examples() {
    assert_relative_eq!(burr(1.0, 1.0).quantile(0.5).unwrap(), 1.0, max_relative = 1e-15);
    let iw = d(Family::InverseWeibull { theta: 1.0 });
    assert_relative_eq!(iw.quantile((-1.0f64).exp()).unwrap(), 1.0, max_relative = 1e-14);
    let lf = d(Family::LinearFailureRate { theta: 2.0 });
    assert_relative_eq!(
        lf.quantile(1.0 - (-2.0f64).exp()).unwrap(),
        1.0,
        max_relative = 1e-14
    );
    assert!(lf.quantile(0.0).is_err());
    assert!(lf.quantile(1.0).is_err());
}

#[test]
fn score_examples() {
    assert_relative_eq!(burr(1.0, 1.0).score(1.0).unwrap(), -1.0, max_relative = 1e-15);
    let n = d(Family::Normal { mu: 0.0, sigma: 2.0 });
    assert_relative_eq!(n.score(2.0).unwrap(), -0.5, max_relative = 1e-15);
    let l = d(Family::Laplace { mu: 0.0, sigma: 1.0 });
    assert_eq!(l.score(-3.0).unwrap(), 1.0);
    assert!(matches!(l.score(0.0), Err(Error::Domain { .. })));
}

#[test]
fn log_likelihood_examples() {
    let e = d(Family::Exponential { rate: 1.0 });
    let s = Sample::new(alloc::vec![1.0, 2.0]).unwrap();
    assert_relative_eq!(e.log_likelihood(&s), -3.0, max_relative = 1e-15);
    let b = burr(1.0, 1.0);
    let s = Sample::new(alloc::vec![1.0]).unwrap();
    assert_relative_eq!(b.log_likelihood(&s), 0.25f64.ln(), max_relative = 1e-15);
    let u = d(Family::Uniform { lower: 0.0, upper: 1.0 });
    let s = Sample::new(alloc::vec![0.5, 2.0]).unwrap();
    assert_eq!(u.log_likelihood(&s), f64::NEG_INFINITY);
}

#[test]
fn log_density_matches_density() {
    for dist in catalog() {
        for i in 1..200 {
            let x = dist.quantile(i as f64 / 200.0).unwrap();
            if !dist.support().contains_interior(x) {
                continue;
            }
            let lp = dist.ln_pdf(x).unwrap();
            let p = dist.pdf(x).unwrap();
            assert!(
                (p.ln() - lp).abs() <= 1e-12 * lp.abs().max(1.0),
                "{}: ln pdf mismatch at {x}",
                dist.label()
            );
        }
    }
}

#[test]
fn score_matches_finite_difference_of_log_density() {
    for dist in catalog() {
        for i in 1..100 {
            let x = dist.quantile(i as f64 / 100.0).unwrap();
            let h = 1e-6 * x.abs().max(1.0);
            let sup = dist.support();
            if !(x - 2.0 * h > sup.left && x + 2.0 * h < sup.right) || sup.knots.iter().any(|k| (k - x).abs() < 4.0 * h) {
                continue;
            }
            let lp = |y: f64| dist.ln_pdf(y).unwrap();
            // fourth-order central difference
            let fd = (8.0 * (lp(x + h) - lp(x - h)) - (lp(x + 2.0 * h) - lp(x - 2.0 * h))) / (12.0 * h);
            let s = dist.score(x).unwrap();
            let scale = s.abs().max(1.0 / x.abs().max(1.0));
            assert!(
                (fd - s).abs() <= 1e-6 * scale,
                "{} at x={x}: score {s}, finite difference {fd}",
                dist.label()
            );
        }
    }
}

#[test]
fn densities_integrate_to_one() {
    let opts = QuadOptions {
        abs_tol: 1e-11,
        rel_tol: 0.0,
        max_intervals: 4000,
    };
    for dist in catalog() {
        let sup = dist.support();
        let median = dist.quantile(0.5).unwrap();
        let lower = if sup.left.is_finite() {
            // measure from the left endpoint so that a singularity there is resolved
            let mut pts = alloc::vec![0.0, dist.quantile(0.01).unwrap() - sup.left];
            pts.extend(sup.knots.iter().map(|k| k - sup.left).filter(|&k| k < median - sup.left));
            pts.push(median - sup.left);
            pts.sort_by(f64::total_cmp);
            integrate_pieces(|y| dist.density_above_left(y), &pts, &opts)
        } else {
            let mut pts = alloc::vec![sup.left, dist.quantile(0.01).unwrap(), dist.quantile(0.25).unwrap()];
            pts.extend(sup.knots.iter().copied().filter(|&k| k < median));
            pts.push(median);
            pts.sort_by(f64::total_cmp);
            integrate_pieces(|x| dist.density(x), &pts, &opts)
        }
        .unwrap_or_else(|e| panic!("{}: {e}", dist.label()));
        let upper = if sup.right.is_finite() {
            // measure from the right endpoint so that a singularity there is resolved
            integrate_pieces(|y| dist.density_below_right(y), &[0.0, sup.right - median], &opts)
        } else {
            let mut pts = alloc::vec![median];
            pts.extend(sup.knots.iter().copied().filter(|&k| k > median));
            pts.extend([dist.quantile(0.75).unwrap(), dist.quantile(0.99).unwrap(), sup.right]);
            pts.sort_by(f64::total_cmp);
            integrate_pieces(|x| dist.density(x), &pts, &opts)
        }
        .unwrap_or_else(|e| panic!("{}: {e}", dist.label()));
        let total = lower.value + upper.value;
        assert!(
            (total - 1.0).abs() <= 1e-8,
            "{} integrates to {}",
            dist.label(),
            total
        );
    }
}

#[test]
fn quantile_cdf_round_trip_on_grid() {
    for dist in catalog() {
        for i in 1..1000 {
            let u = i as f64 / 1000.0;
            let x = dist.quantile(u).unwrap();
            assert!((dist.cdf(x) - u).abs() <= 1e-10, "{} at u={u}", dist.label());
        }
        for u in [1e-9, 1e-6, 1.0 - 1e-6, 1.0 - 1e-9] {
            let x = dist.quantile(u).unwrap();
            // the arcsine law puts the 1 - 1e-9 quantile within 1e-18 of
            // its upper endpoint, which f64 cannot resolve
            if !dist.support().contains_interior(x) {
                continue;
            }
            assert!((dist.cdf(x) - u).abs() <= 1e-10, "{} at u={u}", dist.label());
        }
    }
}

#[test]
fn log_cdf_and_sf_agree_with_direct_values() {
    for dist in catalog() {
        for i in 1..200 {
            let x = dist.quantile(i as f64 / 200.0).unwrap();
            let (c, s) = (dist.cdf(x), dist.sf(x));
            assert!((dist.ln_cdf(x) - c.ln()).abs() <= 1e-11, "{} ln cdf at {x}", dist.label());
            assert!((dist.ln_sf(x) - s.ln()).abs() <= 1e-11, "{} ln sf at {x}", dist.label());
            assert!((c + s - 1.0).abs() <= 1e-14, "{} cdf + sf at {x}", dist.label());
        }
    }
}

#[test]
fn log_tails_stay_finite() {
    let n = d(Family::Normal { mu: 0.0, sigma: 1.0 });
    assert!((n.ln_cdf(-40.0) - -804.60844201375379).abs() < 1e-10);
    assert!((n.ln_sf(40.0) - -804.60844201375379).abs() < 1e-10);
    // Exp(1): ln cdf(x) = ln(1 - e^{-x}) ~ ln x for tiny x
    let e = d(Family::Exponential { rate: 1.0 });
    assert_relative_eq!(e.ln_cdf(1e-300), (1e-300f64).ln(), max_relative = 1e-14);
    assert_eq!(e.ln_sf(1000.0), -1000.0);
    // Levy(0,1) at 1e-4: erfc(sqrt(5000)), far below the f64 range
    let l = d(Family::Levy { mu: 0.0, sigma: 1.0 });
    assert!(l.cdf(1e-4) == 0.0 && l.ln_cdf(1e-4).is_finite());
    let g = d(Family::Gamma { k: 2.0, lambda: 1.0 });
    assert_relative_eq!(g.ln_sf(800.0), -793.31413905293164, max_relative = 1e-13);
}

#[test]
fn offset_evaluation_matches_direct_evaluation() {
    for dist in catalog() {
        let sup = dist.support().clone();
        for y in [0.3, 0.05, 1e-3] {
            if let Some(p) = dist.at_left_offset(y) {
                let x = sup.left + y;
                assert_relative_eq!(p.ln_pdf, dist.ln_pdf(x).unwrap(), max_relative = 1e-12, epsilon = 1e-12);
                assert_relative_eq!(p.score, dist.score(x).unwrap(), max_relative = 1e-10, epsilon = 1e-12);
                assert_relative_eq!(p.ln_cdf, dist.ln_cdf(x), max_relative = 1e-10, epsilon = 1e-12);
                assert_relative_eq!(p.ln_sf, dist.ln_sf(x), max_relative = 1e-10, epsilon = 1e-12);
            }
            if let Some(p) = dist.at_right_offset(y) {
                let x = sup.right - y;
                assert_relative_eq!(p.ln_pdf, dist.ln_pdf(x).unwrap(), max_relative = 1e-12, epsilon = 1e-12);
                assert_relative_eq!(p.score, dist.score(x).unwrap(), max_relative = 1e-10, epsilon = 1e-12);
                assert_relative_eq!(p.ln_cdf, dist.ln_cdf(x), max_relative = 1e-10, epsilon = 1e-12);
                assert_relative_eq!(p.ln_sf, dist.ln_sf(x), max_relative = 1e-10, epsilon = 1e-12);
            }
        }
    }
    // resolvable below the spacing of f64 around L = 1
    let sg = d(Family::ShiftedGamma { k: 0.5, lambda: 1.0, mu: 1.0 });
    let p = sg.at_left_offset(1e-20).unwrap();
    assert_relative_eq!(p.score, -0.5e20 - 1.0, max_relative = 1e-15);
}

#[test]
fn same_stream_same_sample() {
    let rng = RngStream::new(42, 3);
    for dist in catalog() {
        assert_eq!(dist.sample(50, &rng).unwrap(), dist.sample(50, &rng).unwrap());
    }
}

#[test]
fn inversion_sampler_uses_quantile() {
    // The inversion samplers map a uniform u to quantile(u).
    let dist = burr(1.0, 1.0);
    let rng = RngStream::new(9, 9);
    let mut g = rng.generator();
    let mut h = rng.generator();
    for _ in 0..100 {
        assert_eq!(dist.draw(&mut g), dist.quantile(h.uniform()).unwrap());
    }
}

/// Kolmogorov distance between the empirical CDF of `xs` and `cdf`.
fn ks_distance(mut xs: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).max((i + 1) as f64 / n - f)
        })
        .fold(0.0, f64::max)
}

#[test]
fn samplers_follow_their_law() {
    // 1.95/sqrt(n) is the asymptotic 0.001 critical value of sqrt(n) D_n.
    let n = 10_000;
    let crit = 1.95 / (n as f64).sqrt();
    for (i, dist) in catalog().into_iter().enumerate() {
        let s = dist.sample(n, &RngStream::new(2024, i as u64)).unwrap();
        let dn = ks_distance(s.into_values(), |x| dist.cdf(x));
        assert!(dn < crit, "{}: KS distance {dn}", dist.label());
    }
}

#[test]
fn inverse_gaussian_sample_mean() {
    let dist = d(Family::InverseGaussian { mu: 1.0, lambda: 0.5 });
    // mean mu = 1, variance mu^3 / lambda = 2
    let n = 100_000;
    let s = dist.sample(n, &RngStream::new(7, 0)).unwrap();
    assert!((s.mean() - 1.0).abs() < 3.0 * (2.0 / n as f64).sqrt());
}

#[test]
fn inverse_gaussian_moments_by_quadrature() {
    // independent check of the parametrization used for IG(theta)
    let dist = d(Family::InverseGaussian { mu: 1.0, lambda: 0.5 });
    let opts = QuadOptions::absolute(1e-10);
    let m1 = integrate_pieces(|x| x * dist.density(x), &[0.0, 1.0, f64::INFINITY], &opts).unwrap();
    let m2 = integrate_pieces(|x| x * x * dist.density(x), &[0.0, 1.0, f64::INFINITY], &opts).unwrap();
    assert_relative_eq!(m1.value, 1.0, max_relative = 1e-8);
    assert_relative_eq!(m2.value - 1.0, 2.0, max_relative = 1e-8);
}

#[test]
fn names_parse_with_defaults_and_aliases() {
    let p = |k: &str, v: f64| (k.to_string(), v);
    let b = DistributionSpec::from_name("burr", &[p("k", 1.0), p("c", 1.0)]).unwrap();
    assert_eq!(b, burr(1.0, 1.0));
    assert_eq!(b.label(), "Burr_XII(1,1)");
    let w = DistributionSpec::from_name("W", &[p("theta", 0.5)]).unwrap();
    assert_eq!(w.label(), "W(0.5)");
    let ig = DistributionSpec::from_name("inverse_gaussian", &[p("theta", 1.5)]).unwrap();
    assert_eq!(ig.label(), "IG(1.5)");
    assert_eq!(DistributionSpec::from_name("hn", &[]).unwrap().label(), "HN");
    assert!(DistributionSpec::from_name("rice", &[]).is_err());
    assert!(DistributionSpec::from_name("burr", &[p("k", 1.0)]).is_err());
    assert!(DistributionSpec::from_name("burr", &[p("k", 1.0), p("c", -1.0)]).is_err());
    assert!(DistributionSpec::from_name("burr", &[p("k", 1.0), p("c", 1.0), p("z", 1.0)]).is_err());
}

#[test]
fn serde_round_trip_validates() {
    let b = burr(2.0, 3.0);
    let json = serde_json::to_string(&b).unwrap();
    assert_eq!(json, r#"{"family":"burr_xii","k":2.0,"c":3.0,"sigma":1.0}"#);
    let back: DistributionSpec = serde_json::from_str(&json).unwrap();
    assert_eq!(back, b);
    assert!(serde_json::from_str::<DistributionSpec>(r#"{"family":"exponential","rate":-1.0}"#).is_err());
}

proptest! {
    #[test]
    fn burr_score_bound(k in 0.05f64..20.0, c in 0.05f64..20.0, lx in -30.0f64..30.0) {
        let x = lx.exp();
        let s = burr(k, c).score(x).unwrap();
        prop_assert!((s * x).abs() <= (c - 1.0).abs() + c * (k + 1.0) + 1e-12);
    }

    #[test]
    fn burr_round_trip(k in 0.1f64..10.0, c in 0.1f64..10.0, u in 1e-9f64..(1.0 - 1e-9)) {
        let b = burr(k, c);
        let x = b.quantile(u).unwrap();
        prop_assert!((b.cdf(x) - u).abs() <= 1e-9);
    }

    #[test]
    fn root_found_quantiles_round_trip(
        a in 0.2f64..8.0,
        b in 0.2f64..8.0,
        u in 1e-9f64..(1.0 - 1e-9),
    ) {
        for dist in [
            d(Family::Gamma { k: a, lambda: b }),
            d(Family::InverseGaussian { mu: a, lambda: b }),
            d(Family::Beta { alpha: a, beta: b }),
        ] {
            let x = dist.quantile(u).unwrap();
            prop_assert!((dist.cdf(x) - u).abs() <= 1e-9, "{} u={}", dist.label(), u);
        }
    }

    #[test]
    fn closed_form_quantiles_round_trip(t in 0.1f64..6.0, u in 1e-9f64..(1.0 - 1e-9)) {
        for dist in [
            d(Family::Weibull { k: t, lambda: 1.0 }),
            d(Family::InverseWeibull { theta: t }),
            d(Family::Gompertz { theta: t }),
            d(Family::LinearFailureRate { theta: t }),
            d(Family::Exponential { rate: t }),
            d(Family::Levy { mu: 0.0, sigma: t }),
            d(Family::LogNormal { mu: 0.0, sigma: t }),
            d(Family::Laplace { mu: 0.0, sigma: t }),
        ] {
            let x = dist.quantile(u).unwrap();
            prop_assert!((dist.cdf(x) - u).abs() <= 1e-9, "{} u={}", dist.label(), u);
        }
    }
}

#[test]
fn labels_parse_back() {
    for dist in catalog() {
        assert_eq!(DistributionSpec::parse_label(&dist.label()).unwrap(), dist, "{}", dist.label());
    }
    assert_eq!(
        DistributionSpec::parse_label("IG(0.5)").unwrap().family(),
        &Family::InverseGaussian { mu: 1.0, lambda: 0.5 }
    );
    assert_eq!(
        DistributionSpec::parse_label(" W(0.5) ").unwrap().family(),
        &Family::Weibull { k: 0.5, lambda: 1.0 }
    );
    assert_eq!(DistributionSpec::parse_label("Exp").unwrap().family(), &Family::Exponential { rate: 1.0 });
    for bad in ["W(x)", "W(0.5", "GO(1,2)", "cauchy(1)", "W()"] {
        assert!(DistributionSpec::parse_label(bad).is_err(), "{bad}");
    }
}
