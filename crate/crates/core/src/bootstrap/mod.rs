//! Parametric bootstrap calibration of a goodness-of-fit statistic.
//!
//! The data are fitted once; replicate `j` (for `j = 1..=B`) draws a sample
//! of the same size from the fitted law on sub-stream `j`, re-fits it and
//! evaluates the statistic. The critical value is the order statistic of
//! rank `⌈(1-α)B⌉` of the replicate values and the hypothesis is rejected
//! when the observed statistic exceeds it strictly.


use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimation::{FitResult, TestFamily};
use crate::gof::StatisticId;
use crate::par::map_indices;
use crate::rng::RngStream;
use crate::sample::Sample;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TestOutcome {
    pub statistic: StatisticId,
    pub statistic_value: f64,
    pub critical_value: f64,
    pub p_value: f64,
    pub reject: bool,
    pub fit: FitResult,
    #[serde(rename = "B")]
    pub bootstrap_b: usize,
    pub alpha: f64,
    /// Replicates that produced a statistic value.
    pub effective_b: usize,
    pub failed_replicates: usize,
    pub rng: RngStream,
    /// First output word of `rng`, as 16 hex digits.
    pub rng_fingerprint: String,
}

/// One replicate: the re-fit and one value per requested statistic.
#[derive(Clone, Debug, PartialEq)]
pub struct Replicate {
    pub fit: Option<FitResult>,
    pub values: Vec<Option<f64>>,
}

/// `⌈(1-α)B⌉`, clamped to `1..=B`.
pub fn critical_rank(b: usize, alpha: f64) -> usize {
    let r = ((1.0 - alpha) * b as f64 - 1e-9).ceil();
    (r.max(1.0) as usize).min(b.max(1))
}

/// `(1 + #{B* ≥ t}) / (B + 1)`.
pub fn p_value(replicates: &[f64], t: f64) -> f64 {
    let above = replicates.iter().filter(|&&v| v >= t).count();
    (1 + above) as f64 / (replicates.len() + 1) as f64
}

/// Critical value and decision from the replicate values; sorts `replicates`.
pub fn decide(replicates: &mut [f64], t: f64, alpha: f64) -> Result<(f64, bool)> {
    if replicates.is_empty() {
        return Err(Error::InvalidInput("no bootstrap replicates".into()));
    }
    replicates.sort_by(f64::total_cmp);
    let crit = replicates[critical_rank(replicates.len(), alpha) - 1];
    Ok((crit, t > crit))
}

pub fn fingerprint(rng: &RngStream) -> String {
    format!("{:016x}", rng.generator().next_u64())
}

fn check_args(b: usize, alpha: f64) -> Result<()> {
    if b == 0 {
        return Err(Error::InvalidInput("the bootstrap size B must be at least 1".into()));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::param("alpha", alpha, "must lie in (0, 1)"));
    }
    Ok(())
}

fn over_budget(failed: usize, attempted: usize) -> bool {
    failed * 20 > attempted
}

/// Fit, falling back to [`TestFamily::refit`] when the first attempt errs
/// or does not converge.
pub fn fit_with_retry(family: TestFamily, s: &Sample) -> Result<FitResult> {
    let first = family.fit(s);
    if matches!(&first, Ok(f) if f.converged) {
        return first;
    }
    match family.refit(s) {
        Ok(f) if f.converged => Ok(f),
        second => Err(first.err().unwrap_or(Error::NonConvergence {
            what: "parameter fit",
            iterations: second.map_or(0, |f| f.iterations),
        })),
    }
}

/// Draw and evaluate replicates `1..=b` against `fit`.
pub fn replicates(
    n: usize,
    fit: &FitResult,
    stats: &[StatisticId],
    b: usize,
    rng: &RngStream,
) -> Result<Vec<Replicate>> {
    let law = fit.distribution()?;
    let family = fit.family;
    Ok(map_indices(b, |i| {
        let stream = rng.substream(i as u64 + 1);
        let refit = law
            .sample(n, &stream)
            .ok()
            .and_then(|s| fit_with_retry(family, &s).ok().map(|f| (s, f)));
        match refit {
            None => Replicate {
                fit: None,
                values: alloc::vec![None; stats.len()],
            },
            Some((s, f)) => {
                let sorted = s.sorted();
                let values = stats
                    .iter()
                    .map(|st| st.evaluate(&sorted, &f).ok().filter(|v| v.is_finite()))
                    .collect();
                Replicate { fit: Some(f), values }
            }
        }
    }))
}

/// One bootstrap test per statistic, all sharing the fit and the replicate
/// samples. The outer error covers the data fit; each statistic can still
/// fail on its own (non-finite value, too many failed replicates).
pub fn bootstrap_test_many(
    s: &Sample,
    family: TestFamily,
    stats: &[StatisticId],
    b: usize,
    alpha: f64,
    rng: &RngStream,
) -> Result<Vec<Result<TestOutcome>>> {
    check_args(b, alpha)?;
    if let Some(st) = stats.iter().find(|st| !st.supports(family)) {
        return Err(Error::InvalidInput(format!(
            "statistic {st} cannot test the {} family",
            family.name()
        )));
    }
    let fit = fit_with_retry(family, s)?;
    let sorted = s.sorted();
    let reps = replicates(s.len(), &fit, stats, b, rng)?;
    let print = fingerprint(rng);
    let outcome = |i: usize, st: &StatisticId| -> Result<TestOutcome> {
        let t = st.evaluate(&sorted, &fit)?;
        if !t.is_finite() {
            return Err(Error::domain("a finite statistic", t));
        }
        let mut values: Vec<f64> = reps.iter().filter_map(|r| r.values[i]).collect();
        let failed = b - values.len();
        if over_budget(failed, b) {
            return Err(Error::BootstrapAborted { failed, attempted: b });
        }
        let p = p_value(&values, t);
        let (crit, reject) = decide(&mut values, t, alpha)?;
        Ok(TestOutcome {
            statistic: *st,
            statistic_value: t,
            critical_value: crit,
            p_value: p,
            reject,
            fit: fit.clone(),
            bootstrap_b: b,
            alpha,
            effective_b: values.len(),
            failed_replicates: failed,
            rng: *rng,
            rng_fingerprint: print.clone(),
        })
    };
    Ok(stats.iter().enumerate().map(|(i, st)| outcome(i, st)).collect())
}

pub fn bootstrap_test(
    s: &Sample,
    family: TestFamily,
    stat: StatisticId,
    b: usize,
    alpha: f64,
    rng: &RngStream,
) -> Result<TestOutcome> {
    bootstrap_test_many(s, family, &[stat], b, alpha, rng)?.remove(0)
}
