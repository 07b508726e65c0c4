use approx::assert_relative_eq;
use steinfit_core::bootstrap::bootstrap_test;
use steinfit_core::characterization::{check_conditions, fixed_point_residual_under, residual_grid, OperatorKind};
use steinfit_core::distributions::DistributionSpec;
use steinfit_core::estimation::TestFamily;
use steinfit_core::gof::{burr_b_closed, StatisticId};
use steinfit_core::simulation::{render_table, run_power_study, PowerStudyConfig, PowerStudyReport, TableFormat};
use steinfit_core::RngStream;

fn law(label: &str) -> DistributionSpec {
    DistributionSpec::parse_label(label).unwrap()
}

#[test]
fn fitted_statistic_matches_the_closed_form() {
    let s = law("Burr_XII(2,1.5)").sample(80, &RngStream::new(3, 0)).unwrap();
    let fit = TestFamily::Burr.fit(&s).unwrap();
    let (k, c) = (fit.param("k").unwrap(), fit.param("c").unwrap());
    let sorted = s.sorted();
    for a in [0.25, 1.0, 3.0, 10.0] {
        let via_id = StatisticId::BurrB { a }.evaluate(&sorted, &fit).unwrap();
        assert_relative_eq!(via_id, burr_b_closed(&sorted, k, c, a).unwrap(), max_relative = 1e-10);
    }
}

#[test]
fn bootstrap_decision_is_reproducible_from_its_stream() {
    let s = law("W(0.5)").sample(100, &RngStream::new(11, 0)).unwrap();
    let stat = StatisticId::parse("B_0.25").unwrap();
    let out = bootstrap_test(&s, TestFamily::Burr, stat, 60, 0.1, &RngStream::new(5, 0)).unwrap();
    let again = bootstrap_test(&s, TestFamily::Burr, stat, 60, 0.1, &out.rng).unwrap();
    assert_eq!(out, again);
    assert!(out.p_value > 0.0 && out.p_value <= 1.0);
}

#[test]
fn operators_separate_the_law_from_a_neighbour() {
    for (label, other) in [("gamma(2,1)", "gamma(3,1)"), ("W(1.5)", "Exp(1)"), ("beta(2,3)", "beta(3,2)")] {
        let (d, c) = (law(label), law(other));
        let kind = OperatorKind::for_distribution(&d).unwrap();
        let grid = residual_grid(&d, 20).unwrap();
        assert!(fixed_point_residual_under(&d, &kind, &d, &grid, 1e-10).unwrap() < 1e-7, "{label}");
        assert!(fixed_point_residual_under(&d, &kind, &c, &grid, 1e-10).unwrap() > 1e-2, "{label} vs {other}");
        assert!(check_conditions(&d, 200).passes(), "{label}");
    }
}

#[test]
fn small_study_round_trips_and_renders() {
    let cfg: PowerStudyConfig = serde_json::from_str(
        r#"{"n": 30, "alpha": 0.1, "mc_reps": 10, "bootstrap_B": 19, "seed": 2,
            "statistics": ["B_1", "ad"], "alternatives": ["Burr_XII(1,1)", "HC"]}"#,
    )
    .unwrap();
    let report = run_power_study(&cfg).unwrap();
    let back: PowerStudyReport = serde_json::from_str(&serde_json::to_string(&report).unwrap()).unwrap();
    assert_eq!(back, report);
    let md = render_table(&report, TableFormat::Markdown);
    assert_eq!(md.lines().count(), 4);
    assert!(md.lines().nth(3).unwrap().starts_with("| HC |"));
}
