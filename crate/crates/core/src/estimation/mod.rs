//! Parameter estimation for the hypothesized families: Burr XII maximum
//! likelihood (σ = 1) by profiling out `k`, and moment estimators for the
//! gamma and normal laws.


use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::distributions::{DistributionSpec, Family};
use crate::error::{Error, Result};
use crate::numeric::optimize::brent_minimize;
use crate::numeric::neumaier_sum;
use crate::sample::Sample;
use crate::special::softplus;

/// Families a composite goodness-of-fit hypothesis can name.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TestFamily {
    Burr,
    Gamma,
    Normal,
}

pub const TEST_FAMILIES: &str = "burr, gamma, normal";

impl TestFamily {
    pub fn parse(name: &str) -> Result<Self> {
        match name.trim().to_ascii_lowercase().as_str() {
            "burr" | "burr_xii" | "burr12" => Ok(TestFamily::Burr),
            "gamma" => Ok(TestFamily::Gamma),
            "normal" | "gaussian" => Ok(TestFamily::Normal),
            _ => Err(Error::Unknown {
                kind: "test family",
                name: name.to_string(),
                expected: TEST_FAMILIES,
            }),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            TestFamily::Burr => "burr",
            TestFamily::Gamma => "gamma",
            TestFamily::Normal => "normal",
        }
    }

    pub fn fit(&self, s: &Sample) -> Result<FitResult> {
        match self {
            TestFamily::Burr => burr_mle(s),
            TestFamily::Gamma => gamma_fit(s),
            TestFamily::Normal => normal_fit(s),
        }
    }

    /// A second attempt after a failed fit. Only the Burr likelihood has
    /// a search to perturb: its grid is refined and shifted by half a step.
    pub fn refit(&self, s: &Sample) -> Result<FitResult> {
        match self {
            TestFamily::Burr => burr_mle_with(s, &MleOptions::retry()),
            _ => self.fit(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    pub value: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct FitTrace {
    pub evaluations: usize,
    /// Final search interval for `ln c` (Burr only).
    pub bracket: Option<[f64; 2]>,
    pub bracket_expansions: usize,
    pub message: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub family: TestFamily,
    pub params: Vec<Param>,
    pub converged: bool,
    pub loglik: f64,
    pub iterations: usize,
    pub trace: FitTrace,
}

impl FitResult {
    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|p| p.name == name).map(|p| p.value)
    }

    fn require(&self, name: &str) -> Result<f64> {
        self.param(name)
            .ok_or_else(|| Error::InvalidInput(format!("fit has no parameter `{name}`")))
    }

    /// The fitted law.
    pub fn distribution(&self) -> Result<DistributionSpec> {
        let family = match self.family {
            TestFamily::Burr => Family::BurrXii {
                k: self.require("k")?,
                c: self.require("c")?,
                sigma: 1.0,
            },
            TestFamily::Gamma => Family::Gamma {
                k: self.require("k")?,
                lambda: self.require("lambda")?,
            },
            TestFamily::Normal => Family::Normal {
                mu: self.require("mu")?,
                sigma: self.require("sigma2")?.sqrt(),
            },
        };
        DistributionSpec::new(family)
    }
}

fn params(pairs: &[(&str, f64)]) -> Vec<Param> {
    pairs
        .iter()
        .map(|&(name, value)| Param {
            name: name.into(),
            value,
        })
        .collect()
}

fn require_n(s: &Sample, min: usize) -> Result<()> {
    if s.len() < min {
        return Err(Error::InvalidInput(format!(
            "at least {min} observations are needed, got {}",
            s.len()
        )));
    }
    Ok(())
}

fn require_positive(s: &Sample, what: &'static str) -> Result<()> {
    match s.values().iter().find(|&&x| !(x > 0.0)) {
        Some(&x) => Err(Error::domain(what, x)),
        None => Ok(()),
    }
}

/// Search settings for [`burr_mle_with`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MleOptions {
    /// Grid points over the initial `ln c` interval.
    pub grid_points: usize,
    /// Shift of the grid as a fraction of its step.
    pub grid_offset: f64,
    pub c_min: f64,
    pub c_max: f64,
    /// Absolute tolerance in `ln c`.
    pub tol: f64,
    pub max_expansions: usize,
}

impl Default for MleOptions {
    fn default() -> Self {
        Self {
            grid_points: 33,
            grid_offset: 0.0,
            c_min: 1e-3,
            c_max: 1e3,
            tol: 1e-10,
            max_expansions: 3,
        }
    }
}

impl MleOptions {
    pub fn retry() -> Self {
        Self {
            grid_points: 97,
            grid_offset: 0.5,
            ..Self::default()
        }
    }
}

/// `k̂(c) = n / Σ ln(1 + x_i^c)`, the root of `∂ℓ/∂k` at fixed `c`.
pub fn burr_profile_k(log_x: &[f64], c: f64) -> f64 {
    log_x.len() as f64 / neumaier_sum(log_x.iter().map(|&l| softplus(c * l)))
}

/// `ℓ(k̂(c), c)`.
fn burr_profile_loglik(log_x: &[f64], sum_log_x: f64, c: f64) -> f64 {
    let n = log_x.len() as f64;
    let s = neumaier_sum(log_x.iter().map(|&l| softplus(c * l)));
    let k = n / s;
    n * c.ln() + n * k.ln() + (c - 1.0) * sum_log_x - (k + 1.0) * s
}

/// Burr XII log-likelihood at `(k, c)`, `σ = 1`.
pub fn burr_loglik(s: &Sample, k: f64, c: f64) -> f64 {
    let n = s.len() as f64;
    let mut acc = crate::numeric::CompensatedSum::new();
    for &x in s.values() {
        let l = x.ln();
        acc.add((c - 1.0) * l - (k + 1.0) * softplus(c * l));
    }
    n * c.ln() + n * k.ln() + acc.value()
}

pub fn burr_mle(s: &Sample) -> Result<FitResult> {
    burr_mle_with(s, &MleOptions::default())
}

/// Profile maximum likelihood: `k` is eliminated in closed form and
/// `ln c` is located on a grid, then refined with Brent. A maximum on the
/// edge of the grid widens the interval tenfold on that side, at most
/// `max_expansions` times; after that the fit is reported as not converged.
pub fn burr_mle_with(s: &Sample, opts: &MleOptions) -> Result<FitResult> {
    require_n(s, 2)?;
    require_positive(s, "the Burr likelihood (positive observations)")?;
    let first = s.values()[0];
    if s.values().iter().all(|&x| x == first) {
        return Err(Error::DegenerateSample("all observations are equal"));
    }
    let log_x: Vec<f64> = s.values().iter().map(|x| x.ln()).collect();
    let sum_log_x = neumaier_sum(log_x.iter().copied());
    let objective = |v: f64| -burr_profile_loglik(&log_x, sum_log_x, v.exp());

    let ln10 = core::f64::consts::LN_10;
    let (mut lo, mut hi) = (opts.c_min.ln(), opts.c_max.ln());
    let points = opts.grid_points.max(5);
    let step = (hi - lo) / (points - 1) as f64;
    let mut evaluations = 0;
    let mut expansions = 0;
    let mut grid: Vec<(f64, f64)> = Vec::new();
    let push = |v: f64, grid: &mut Vec<(f64, f64)>, evaluations: &mut usize| {
        *evaluations += 1;
        let f = objective(v);
        grid.push((v, if f.is_nan() { f64::INFINITY } else { f }));
    };
    let mut v = lo + opts.grid_offset * step;
    while v <= hi + 1e-12 {
        push(v, &mut grid, &mut evaluations);
        v += step;
    }
    let mut interior;
    loop {
        let best = best_index(&grid);
        interior = best > 0 && best + 1 < grid.len();
        if interior || expansions >= opts.max_expansions {
            break;
        }
        expansions += 1;
        if best == 0 {
            let start = grid[0].0;
            let new_lo = lo - ln10;
            let mut added = Vec::new();
            let mut v = start - step;
            while v >= new_lo - 1e-12 {
                push(v, &mut added, &mut evaluations);
                v -= step;
            }
            added.reverse();
            added.extend(grid);
            grid = added;
            lo = new_lo;
        } else {
            let end = grid[grid.len() - 1].0;
            let new_hi = hi + ln10;
            let mut v = end + step;
            while v <= new_hi + 1e-12 {
                push(v, &mut grid, &mut evaluations);
                v += step;
            }
            hi = new_hi;
        }
    }
    let best = best_index(&grid);
    let (a, b) = (
        grid[best.saturating_sub(1)].0,
        grid[(best + 1).min(grid.len() - 1)].0,
    );
    let min = brent_minimize(objective, a, b, opts.tol, 200);
    evaluations += min.evaluations;
    let (v_hat, value) = if min.value <= grid[best].1 {
        (min.x, min.value)
    } else {
        grid[best]
    };
    let c = v_hat.exp();
    let k = burr_profile_k(&log_x, c);
    let converged = interior && min.converged && value.is_finite();
    let message = (!interior).then(|| {
        format!(
            "likelihood maximum on the edge of ln c ∈ [{lo:.3}, {hi:.3}] after {expansions} expansions"
        )
    });
    Ok(FitResult {
        family: TestFamily::Burr,
        params: params(&[("k", k), ("c", c)]),
        converged,
        loglik: -value,
        iterations: evaluations,
        trace: FitTrace {
            evaluations,
            bracket: Some([a, b]),
            bracket_expansions: expansions,
            message,
        },
    })
}

fn best_index(grid: &[(f64, f64)]) -> usize {
    let mut best = 0;
    for (i, g) in grid.iter().enumerate() {
        if g.1 < grid[best].1 {
            best = i;
        }
    }
    best
}

/// Method of moments, variance divisor `n`: `k̂ = x̄²/s²`, `λ̂ = s²/x̄`.
pub fn gamma_fit(s: &Sample) -> Result<FitResult> {
    require_n(s, 2)?;
    require_positive(s, "the gamma fit (positive observations)")?;
    let mean = s.mean();
    let var = s.variance();
    if !(var > 0.0) {
        return Err(Error::DegenerateSample("zero sample variance"));
    }
    let k = mean * mean / var;
    let lambda = var / mean;
    let loglik = DistributionSpec::new(Family::Gamma { k, lambda })?.log_likelihood(s);
    Ok(FitResult {
        family: TestFamily::Gamma,
        params: params(&[("k", k), ("lambda", lambda)]),
        converged: true,
        loglik,
        iterations: 0,
        trace: FitTrace::default(),
    })
}

/// Sample mean and variance with divisor `n`. A zero variance is reported
/// as `converged = false`, since nothing can be standardized by it.
pub fn normal_fit(s: &Sample) -> Result<FitResult> {
    require_n(s, 2)?;
    let mu = s.mean();
    let sigma2 = s.variance();
    let converged = sigma2 > 0.0;
    let loglik = if converged {
        let n = s.len() as f64;
        -0.5 * n * (2.0 * core::f64::consts::PI * sigma2).ln() - 0.5 * n
    } else {
        f64::NAN
    };
    Ok(FitResult {
        family: TestFamily::Normal,
        params: params(&[("mu", mu), ("sigma2", sigma2)]),
        converged,
        loglik,
        iterations: 0,
        trace: FitTrace {
            message: (!converged).then(|| "zero sample variance".to_string()),
            ..FitTrace::default()
        },
    })
}

/// `(x - mean)/sd` with the fitted moments.
pub fn standardize(s: &Sample, fit: &FitResult) -> Result<Vec<f64>> {
    let mu = fit.require("mu")?;
    let sd = fit.require("sigma2")?.sqrt();
    if !(sd > 0.0) {
        return Err(Error::DegenerateSample("zero sample variance"));
    }
    Ok(s.values().iter().map(|x| (x - mu) / sd).collect())
}
