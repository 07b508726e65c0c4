#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::operators::expect_under;
use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::numeric::quad::QuadOptions;

/// The solution `f_t^p` of the Stein equation for `1{x ≤ t} - P(t)`:
/// `P(x)(1 - P(t))/p(x)` left of `t`, `(1 - P(x))P(t)/p(x)` right of it.
/// Evaluated in logs so that both tails stay finite.
pub fn test_function_ftp(dist: &DistributionSpec, t: f64, x: f64) -> Result<f64> {
    dist.check_interior("the test function argument t (support interior)", t)?;
    dist.check_interior("the test function argument x (support interior)", x)?;
    Ok(Branch::new(dist, t, x <= t).eval(x))
}

/// `d/dx f_t^p(x)` by Richardson-extrapolated central differences on the
/// smooth branch containing `x` (left branch at `x = t`).
pub fn test_function_ftp_derivative(dist: &DistributionSpec, t: f64, x: f64) -> Result<f64> {
    dist.check_interior("the test function argument t (support interior)", t)?;
    dist.check_interior("the test function argument x (support interior)", x)?;
    Ok(Branch::new(dist, t, x <= t).derivative(x))
}

/// One of the two closed-form pieces of `f_t^p`, each smooth across `t`.
struct Branch<'a> {
    dist: &'a DistributionSpec,
    left: bool,
    ln_tail_t: f64,
}

impl<'a> Branch<'a> {
    fn new(dist: &'a DistributionSpec, t: f64, left: bool) -> Self {
        let ln_tail_t = if left { dist.ln_sf(t) } else { dist.ln_cdf(t) };
        Self { dist, left, ln_tail_t }
    }

    fn eval(&self, x: f64) -> f64 {
        let ln_tail_x = if self.left {
            self.dist.ln_cdf(x)
        } else {
            self.dist.ln_sf(x)
        };
        (ln_tail_x + self.ln_tail_t - self.dist.ln_pdf_interior(x)).exp()
    }

    fn derivative(&self, x: f64) -> f64 {
        let sup = self.dist.support();
        let mut room = (x - sup.left).min(sup.right - x);
        for &k in &sup.knots {
            if k != x {
                room = room.min((x - k).abs());
            }
        }
        let h = (1e-3 * x.abs().max(1.0)).min(0.02 * room);
        let central = |h: f64| (self.eval(x + h) - self.eval(x - h)) / (2.0 * h);
        (4.0 * central(0.5 * h) - central(h)) / 3.0
    }
}

/// `E_candidate[f'(X) + s(X) f(X)]` for `f = f_t^p` of `dist`, next to the
/// value `F_candidate(t) - P(t)` it must equal.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SteinExpectation {
    pub value: f64,
    pub expected: f64,
    pub quad_error: f64,
}

impl SteinExpectation {
    pub fn discrepancy(&self) -> f64 {
        (self.value - self.expected).abs()
    }
}

pub fn stein_expectation(
    dist: &DistributionSpec,
    candidate: &DistributionSpec,
    t: f64,
    quad_tol: f64,
) -> Result<SteinExpectation> {
    let (d, c) = (dist.support(), candidate.support());
    if c.left < d.left || c.right > d.right {
        return Err(Error::InvalidInput(alloc::format!(
            "candidate {} is not supported inside the support of {}",
            candidate.label(),
            dist.label()
        )));
    }
    dist.check_interior("the test function argument t (support interior)", t)?;
    let left = Branch::new(dist, t, true);
    let right = Branch::new(dist, t, false);
    let integrand = |x: f64| {
        let branch = if x <= t { &left } else { &right };
        branch.derivative(x) + dist.score_interior(x) * branch.eval(x)
    };
    let mut breaks = d.knots.clone();
    breaks.push(t);
    let integral = expect_under(candidate, integrand, &breaks, &QuadOptions::absolute(quad_tol))?;
    Ok(SteinExpectation {
        value: integral.value,
        expected: candidate.cdf(t) - dist.cdf(t),
        quad_error: integral.error,
    })
}
