//! Catalog of continuous univariate laws.
//!
//! Every entry provides density, log-density, distribution and survival
//! functions, quantiles, the score `p'/p` and an exact sampler. Hypothesis
//! families (gamma, Burr XII, normal, ...) and the simulation alternatives
//! share the same type.

mod names;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_2_PI, LN_2, PI};

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::roots::brent_root;
use crate::rng::{RngStream, StreamRng};
use crate::sample::Sample;
use crate::special::{
    beta_inc, erf, erfc, gamma_p, gamma_q, ln_beta, ln_beta_inc, ln_gamma, ln_gamma_p, ln_gamma_q,
    logistic, normal_cdf, normal_ln_cdf, normal_ln_sf, normal_quantile, normal_sf, softplus,
    LN_SQRT_2PI,
};

pub use names::{family_info, FamilyInfo, ParamSpec, FAMILIES};

/// Closed interval `[left, right]` carrying the density, plus the interior
/// points where the density is not differentiable.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Support {
    pub left: f64,
    pub right: f64,
    pub knots: Vec<f64>,
}

impl Support {
    fn new(left: f64, right: f64) -> Self {
        Self {
            left,
            right,
            knots: Vec::new(),
        }
    }

    pub fn contains_interior(&self, x: f64) -> bool {
        x > self.left && x < self.right
    }

    pub fn is_knot(&self, x: f64) -> bool {
        self.knots.iter().any(|&k| k == x)
    }

    pub fn lower_bounded(&self) -> bool {
        self.left.is_finite()
    }

    pub fn upper_bounded(&self) -> bool {
        self.right.is_finite()
    }
}

/// Family tag and parameters. Scale parameters are scales (not rates) unless
/// the name says otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Normal { mu: f64, sigma: f64 },
    Laplace { mu: f64, sigma: f64 },
    Gamma { k: f64, lambda: f64 },
    Exponential { rate: f64 },
    InverseGaussian { mu: f64, lambda: f64 },
    Weibull { k: f64, lambda: f64 },
    BurrXii { k: f64, c: f64, sigma: f64 },
    Levy { mu: f64, sigma: f64 },
    #[serde(rename = "lognormal")]
    LogNormal { mu: f64, sigma: f64 },
    Beta { alpha: f64, beta: f64 },
    Uniform { lower: f64, upper: f64 },
    HalfNormal,
    HalfCauchy,
    Gompertz { theta: f64 },
    LinearFailureRate { theta: f64 },
    InverseWeibull { theta: f64 },
    ShiftedGamma { k: f64, lambda: f64, mu: f64 },
}

/// Pointwise quantities near a support endpoint.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LocalPoint {
    pub ln_pdf: f64,
    pub score: f64,
    pub ln_cdf: f64,
    pub ln_sf: f64,
}

/// A validated catalog entry. Immutable once built.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Family", into = "Family")]
pub struct DistributionSpec {
    family: Family,
    support: Support,
}

impl TryFrom<Family> for DistributionSpec {
    type Error = Error;
    fn try_from(f: Family) -> Result<Self> {
        DistributionSpec::new(f)
    }
}

impl From<DistributionSpec> for Family {
    fn from(d: DistributionSpec) -> Self {
        d.family
    }
}

fn positive(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(name, v, "must be finite and > 0"))
    }
}

fn finite(name: &'static str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(name, v, "must be finite"))
    }
}

impl DistributionSpec {
    pub fn new(family: Family) -> Result<Self> {
        use Family::*;
        let inf = f64::INFINITY;
        let support = match family {
            Normal { mu, sigma } => {
                finite("mu", mu)?;
                positive("sigma", sigma)?;
                Support::new(-inf, inf)
            }
            Laplace { mu, sigma } => {
                finite("mu", mu)?;
                positive("sigma", sigma)?;
                Support {
                    left: -inf,
                    right: inf,
                    knots: vec![mu],
                }
            }
            Gamma { k, lambda } => {
                positive("k", k)?;
                positive("lambda", lambda)?;
                Support::new(0.0, inf)
            }
            Exponential { rate } => {
                positive("rate", rate)?;
                Support::new(0.0, inf)
            }
            InverseGaussian { mu, lambda } => {
                positive("mu", mu)?;
                positive("lambda", lambda)?;
                Support::new(0.0, inf)
            }
            Weibull { k, lambda } => {
                positive("k", k)?;
                positive("lambda", lambda)?;
                Support::new(0.0, inf)
            }
            BurrXii { k, c, sigma } => {
                positive("k", k)?;
                positive("c", c)?;
                positive("sigma", sigma)?;
                Support::new(0.0, inf)
            }
            Levy { mu, sigma } => {
                finite("mu", mu)?;
                positive("sigma", sigma)?;
                Support::new(mu, inf)
            }
            LogNormal { mu, sigma } => {
                finite("mu", mu)?;
                positive("sigma", sigma)?;
                Support::new(0.0, inf)
            }
            Beta { alpha, beta } => {
                positive("alpha", alpha)?;
                positive("beta", beta)?;
                Support::new(0.0, 1.0)
            }
            Uniform { lower, upper } => {
                finite("lower", lower)?;
                finite("upper", upper)?;
                if !(lower < upper) {
                    return Err(Error::param("upper", upper, "must exceed lower"));
                }
                Support::new(lower, upper)
            }
            HalfNormal | HalfCauchy => Support::new(0.0, inf),
            Gompertz { theta } | LinearFailureRate { theta } | InverseWeibull { theta } => {
                positive("theta", theta)?;
                Support::new(0.0, inf)
            }
            ShiftedGamma { k, lambda, mu } => {
                positive("k", k)?;
                positive("lambda", lambda)?;
                finite("mu", mu)?;
                Support::new(mu, inf)
            }
        };
        Ok(Self { family, support })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    pub(crate) fn check_interior(&self, what: &'static str, x: f64) -> Result<()> {
        if self.support.contains_interior(x) {
            Ok(())
        } else {
            Err(Error::domain(what, x))
        }
    }

    /// `ln p(x)` for `x` strictly inside the support.
    pub(crate) fn ln_pdf_interior(&self, x: f64) -> f64 {
        use Family::*;
        match self.family {
            Normal { mu, sigma } => {
                let z = (x - mu) / sigma;
                -0.5 * z * z - LN_SQRT_2PI - sigma.ln()
            }
            Laplace { mu, sigma } => -(x - mu).abs() / sigma - LN_2 - sigma.ln(),
            Gamma { k, lambda } => (k - 1.0) * x.ln() - x / lambda - ln_gamma(k) - k * lambda.ln(),
            Exponential { rate } => rate.ln() - rate * x,
            InverseGaussian { mu, lambda } => {
                0.5 * (lambda.ln() - 3.0 * x.ln()) - LN_SQRT_2PI
                    - lambda * (x - mu) * (x - mu) / (2.0 * mu * mu * x)
            }
            Weibull { k, lambda } => {
                let lz = (x / lambda).ln();
                k.ln() - lambda.ln() + (k - 1.0) * lz - (k * lz).exp()
            }
            BurrXii { k, c, sigma } => {
                let lz = (x / sigma).ln();
                c.ln() + k.ln() - sigma.ln() + (c - 1.0) * lz - (k + 1.0) * softplus(c * lz)
            }
            Levy { mu, sigma } => {
                let y = x - mu;
                0.5 * sigma.ln() - LN_SQRT_2PI - 1.5 * y.ln() - sigma / (2.0 * y)
            }
            LogNormal { mu, sigma } => {
                let lx = x.ln();
                let z = (lx - mu) / sigma;
                -0.5 * z * z - LN_SQRT_2PI - sigma.ln() - lx
            }
            Beta { alpha, beta } => {
                (alpha - 1.0) * x.ln() + (beta - 1.0) * (-x).ln_1p() - ln_beta(alpha, beta)
            }
            Uniform { lower, upper } => -(upper - lower).ln(),
            HalfNormal => LN_2 - LN_SQRT_2PI - 0.5 * x * x,
            HalfCauchy => FRAC_2_PI.ln() - (x * x).ln_1p(),
            Gompertz { theta } => x - theta.ln() - x.exp_m1() / theta,
            LinearFailureRate { theta } => (theta * x).ln_1p() - x - 0.5 * theta * x * x,
            InverseWeibull { theta } => {
                let lx = x.ln();
                theta.ln() - (theta + 1.0) * lx - (-theta * lx).exp()
            }
            ShiftedGamma { k, lambda, mu } => {
                let y = x - mu;
                (k - 1.0) * y.ln() - y / lambda - ln_gamma(k) - k * lambda.ln()
            }
        }
    }

    pub fn ln_pdf(&self, x: f64) -> Result<f64> {
        self.check_interior("the support interior", x)?;
        Ok(self.ln_pdf_interior(x))
    }

    pub fn pdf(&self, x: f64) -> Result<f64> {
        self.ln_pdf(x).map(Float::exp)
    }

    /// Density with the value 0 outside the open support; never fails.
    pub fn density(&self, x: f64) -> f64 {
        if self.support.contains_interior(x) {
            self.ln_pdf_interior(x).exp()
        } else {
            0.0
        }
    }

    /// Log-density, score and log tail probabilities at `L + y` for a finite
    /// left endpoint `L`, computed from the offset `y` itself where the family
    /// allows it, so points within an ulp of `L` stay distinguishable.
    pub fn at_left_offset(&self, y: f64) -> Option<LocalPoint> {
        let Support { left, right, .. } = self.support;
        if !left.is_finite() || !(y > 0.0 && y < right - left) {
            return None;
        }
        let point = match self.family {
            Family::Levy { sigma, .. } => {
                let z = (sigma / (2.0 * y)).sqrt();
                LocalPoint {
                    ln_pdf: 0.5 * sigma.ln() - LN_SQRT_2PI - 1.5 * y.ln() - sigma / (2.0 * y),
                    score: (sigma / y - 3.0) / (2.0 * y),
                    ln_cdf: LN_2 + normal_ln_sf(z * core::f64::consts::SQRT_2),
                    ln_sf: ln_erf(z),
                }
            }
            Family::ShiftedGamma { k, lambda, .. } => LocalPoint {
                ln_pdf: (k - 1.0) * y.ln() - y / lambda - ln_gamma(k) - k * lambda.ln(),
                score: (k - 1.0) / y - 1.0 / lambda,
                ln_cdf: ln_gamma_p(k, y / lambda),
                ln_sf: ln_gamma_q(k, y / lambda),
            },
            _ => self.local_point(left + y)?,
        };
        Some(point)
    }

    /// As [`Self::at_left_offset`], at `R - y` for a finite right endpoint.
    pub fn at_right_offset(&self, y: f64) -> Option<LocalPoint> {
        let Support { left, right, .. } = self.support;
        if !right.is_finite() || !(y > 0.0 && y < right - left) {
            return None;
        }
        let point = match self.family {
            Family::Beta { alpha, beta } => LocalPoint {
                ln_pdf: (alpha - 1.0) * (-y).ln_1p() + (beta - 1.0) * y.ln() - ln_beta(alpha, beta),
                score: (alpha - 1.0) / (1.0 - y) - (beta - 1.0) / y,
                ln_cdf: ln_beta_inc(alpha, beta, 1.0 - y),
                ln_sf: ln_beta_inc(beta, alpha, y),
            },
            Family::Uniform { lower, upper } => LocalPoint {
                ln_pdf: -(upper - lower).ln(),
                score: 0.0,
                ln_cdf: (-(y / (upper - lower))).ln_1p(),
                ln_sf: (y / (upper - lower)).ln(),
            },
            _ => self.local_point(right - y)?,
        };
        Some(point)
    }

    fn local_point(&self, x: f64) -> Option<LocalPoint> {
        if !self.support.contains_interior(x) {
            return None;
        }
        Some(LocalPoint {
            ln_pdf: self.ln_pdf_interior(x),
            score: self.score_interior(x),
            ln_cdf: self.ln_cdf(x),
            ln_sf: self.ln_sf(x),
        })
    }

    /// `p(L + y)`; 0 when there is no such interior point.
    pub fn density_above_left(&self, y: f64) -> f64 {
        self.at_left_offset(y).map_or(0.0, |p| p.ln_pdf.exp())
    }

    /// `p(R - y)`; 0 when there is no such interior point.
    pub fn density_below_right(&self, y: f64) -> f64 {
        self.at_right_offset(y).map_or(0.0, |p| p.ln_pdf.exp())
    }

    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x <= self.support.left {
            return 0.0;
        }
        if x >= self.support.right {
            return 1.0;
        }
        use Family::*;
        match self.family {
            Normal { mu, sigma } => normal_cdf((x - mu) / sigma),
            Laplace { mu, sigma } => {
                if x < mu {
                    0.5 * ((x - mu) / sigma).exp()
                } else {
                    1.0 - 0.5 * (-(x - mu) / sigma).exp()
                }
            }
            Gamma { k, lambda } => gamma_p(k, x / lambda),
            Exponential { rate } => -(-rate * x).exp_m1(),
            InverseGaussian { mu, lambda } => ig_cdf(mu, lambda, x),
            Weibull { k, lambda } => -(-(x / lambda).powf(k)).exp_m1(),
            BurrXii { k, c, sigma } => -(-k * softplus(c * (x / sigma).ln())).exp_m1(),
            Levy { mu, sigma } => erfc((sigma / (2.0 * (x - mu))).sqrt()),
            LogNormal { mu, sigma } => normal_cdf((x.ln() - mu) / sigma),
            Beta { alpha, beta } => beta_inc(alpha, beta, x),
            Uniform { lower, upper } => (x - lower) / (upper - lower),
            HalfNormal => erf(x / core::f64::consts::SQRT_2),
            HalfCauchy => FRAC_2_PI * x.atan(),
            Gompertz { theta } => -(-x.exp_m1() / theta).exp_m1(),
            LinearFailureRate { theta } => -(-x - 0.5 * theta * x * x).exp_m1(),
            InverseWeibull { theta } => (-x.powf(-theta)).exp(),
            ShiftedGamma { k, lambda, mu } => gamma_p(k, (x - mu) / lambda),
        }
    }

    /// `1 - cdf(x)`, computed directly where that avoids cancellation.
    pub fn sf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x <= self.support.left {
            return 1.0;
        }
        if x >= self.support.right {
            return 0.0;
        }
        use Family::*;
        match self.family {
            Normal { mu, sigma } => normal_sf((x - mu) / sigma),
            Laplace { mu, sigma } => {
                if x < mu {
                    1.0 - 0.5 * ((x - mu) / sigma).exp()
                } else {
                    0.5 * (-(x - mu) / sigma).exp()
                }
            }
            Gamma { k, lambda } => gamma_q(k, x / lambda),
            Exponential { rate } => (-rate * x).exp(),
            Weibull { k, lambda } => (-(x / lambda).powf(k)).exp(),
            BurrXii { k, c, sigma } => (-k * softplus(c * (x / sigma).ln())).exp(),
            Levy { mu, sigma } => erf((sigma / (2.0 * (x - mu))).sqrt()),
            LogNormal { mu, sigma } => normal_sf((x.ln() - mu) / sigma),
            Beta { alpha, beta } => beta_inc(beta, alpha, 1.0 - x),
            Uniform { lower, upper } => (upper - x) / (upper - lower),
            HalfNormal => erfc(x / core::f64::consts::SQRT_2),
            HalfCauchy => FRAC_2_PI * x.recip().atan(),
            Gompertz { theta } => (-x.exp_m1() / theta).exp(),
            LinearFailureRate { theta } => (-x - 0.5 * theta * x * x).exp(),
            InverseWeibull { theta } => -(-x.powf(-theta)).exp_m1(),
            ShiftedGamma { k, lambda, mu } => gamma_q(k, (x - mu) / lambda),
            InverseGaussian { .. } => 1.0 - self.cdf(x),
        }
    }

    /// `ln cdf(x)`, finite wherever the distribution function is positive even
    /// if it underflows.
    pub fn ln_cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x <= self.support.left {
            return f64::NEG_INFINITY;
        }
        if x >= self.support.right {
            return 0.0;
        }
        use Family::*;
        match self.family {
            Normal { mu, sigma } => normal_ln_cdf((x - mu) / sigma),
            Laplace { mu, sigma } => {
                let z = (x - mu) / sigma;
                if z < 0.0 {
                    z - LN_2
                } else {
                    (-0.5 * (-z).exp()).ln_1p()
                }
            }
            Gamma { k, lambda } => ln_gamma_p(k, x / lambda),
            ShiftedGamma { k, lambda, mu } => ln_gamma_p(k, (x - mu) / lambda),
            InverseGaussian { mu, lambda } => {
                let r = (lambda / x).sqrt();
                let a = normal_ln_cdf(r * (x / mu - 1.0));
                let b = 2.0 * lambda / mu + normal_ln_cdf(-r * (x / mu + 1.0));
                let (hi, lo) = if a >= b { (a, b) } else { (b, a) };
                (hi + (lo - hi).exp().ln_1p()).min(0.0)
            }
            Levy { mu, sigma } => {
                let z = (sigma / (2.0 * (x - mu))).sqrt();
                LN_2 + normal_ln_sf(z * core::f64::consts::SQRT_2)
            }
            LogNormal { mu, sigma } => normal_ln_cdf((x.ln() - mu) / sigma),
            Beta { alpha, beta } => ln_beta_inc(alpha, beta, x),
            Uniform { lower, upper } => ((x - lower) / (upper - lower)).ln(),
            HalfNormal => ln_erf(x / core::f64::consts::SQRT_2),
            HalfCauchy => (FRAC_2_PI * x.atan()).ln(),
            InverseWeibull { theta } => -x.powf(-theta),
            _ => ln_one_minus_exp_neg(self.cumulative_hazard(x)),
        }
    }

    /// `ln sf(x)`, finite wherever the survival function is positive.
    pub fn ln_sf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        if x <= self.support.left {
            return 0.0;
        }
        if x >= self.support.right {
            return f64::NEG_INFINITY;
        }
        use Family::*;
        match self.family {
            Normal { mu, sigma } => normal_ln_sf((x - mu) / sigma),
            Laplace { mu, sigma } => {
                let z = (x - mu) / sigma;
                if z < 0.0 {
                    (-0.5 * z.exp()).ln_1p()
                } else {
                    -z - LN_2
                }
            }
            Gamma { k, lambda } => ln_gamma_q(k, x / lambda),
            ShiftedGamma { k, lambda, mu } => ln_gamma_q(k, (x - mu) / lambda),
            InverseGaussian { mu, lambda } => {
                let r = (lambda / x).sqrt();
                let a = normal_ln_sf(r * (x / mu - 1.0));
                let b = 2.0 * lambda / mu + normal_ln_sf(r * (x / mu + 1.0));
                a + (-(b - a).exp()).ln_1p()
            }
            Levy { mu, sigma } => ln_erf((sigma / (2.0 * (x - mu))).sqrt()),
            LogNormal { mu, sigma } => normal_ln_sf((x.ln() - mu) / sigma),
            Beta { alpha, beta } => ln_beta_inc(beta, alpha, 1.0 - x),
            Uniform { lower, upper } => ((upper - x) / (upper - lower)).ln(),
            HalfNormal => LN_2 + normal_ln_sf(x),
            HalfCauchy => (FRAC_2_PI * x.recip().atan()).ln(),
            InverseWeibull { theta } => ln_one_minus_exp_neg(x.powf(-theta)),
            _ => -self.cumulative_hazard(x),
        }
    }

    /// `-ln sf(x)` for the families whose survival function is `exp(-H)` in
    /// closed form.
    fn cumulative_hazard(&self, x: f64) -> f64 {
        use Family::*;
        match self.family {
            Exponential { rate } => rate * x,
            Weibull { k, lambda } => (x / lambda).powf(k),
            BurrXii { k, c, sigma } => k * softplus(c * (x / sigma).ln()),
            Gompertz { theta } => x.exp_m1() / theta,
            LinearFailureRate { theta } => x + 0.5 * theta * x * x,
            _ => -self.sf(x).ln(),
        }
    }

    /// Inverse distribution function on `(0, 1)`.
    pub fn quantile(&self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::domain("quantile levels (0, 1)", u));
        }
        use Family::*;
        let neg_log_sf = -(-u).ln_1p();
        let x = match self.family {
            Normal { mu, sigma } => mu + sigma * normal_quantile(u),
            Laplace { mu, sigma } => {
                if u < 0.5 {
                    mu + sigma * (2.0 * u).ln()
                } else {
                    mu - sigma * (2.0 * (1.0 - u)).ln()
                }
            }
            Exponential { rate } => neg_log_sf / rate,
            Weibull { k, lambda } => lambda * neg_log_sf.powf(k.recip()),
            BurrXii { k, c, sigma } => sigma * (neg_log_sf / k).exp_m1().powf(c.recip()),
            Levy { mu, sigma } => {
                let z = normal_quantile(0.5 * u);
                mu + sigma / (z * z)
            }
            LogNormal { mu, sigma } => (mu + sigma * normal_quantile(u)).exp(),
            Uniform { lower, upper } => lower + (upper - lower) * u,
            HalfNormal => -normal_quantile(0.5 * (1.0 - u)),
            HalfCauchy => (0.5 * PI * u).tan(),
            Gompertz { theta } => (theta * neg_log_sf).ln_1p(),
            LinearFailureRate { theta } => {
                2.0 * neg_log_sf / (1.0 + (1.0 + 2.0 * theta * neg_log_sf).sqrt())
            }
            InverseWeibull { theta } => (-u.ln()).powf(-theta.recip()),
            Gamma { .. } | InverseGaussian { .. } | Beta { .. } | ShiftedGamma { .. } => {
                return self.quantile_by_root(u);
            }
        };
        Ok(x)
    }

    fn quantile_by_root(&self, u: f64) -> Result<f64> {
        const U_TOL: f64 = 1e-13;
        let Support { left, right, .. } = self.support;
        let lo = left;
        let hi = if right.is_finite() {
            right
        } else {
            let mut width = 1.0;
            let mut hi = left + width;
            let mut grow = 0;
            while self.cdf(hi) < u {
                width *= 2.0;
                hi = left + width;
                grow += 1;
                if grow > 1100 {
                    return Err(Error::NonConvergence {
                        what: "quantile bracket",
                        iterations: grow,
                    });
                }
            }
            hi
        };
        if u <= 0.5 {
            brent_root(|x| self.cdf(x) - u, lo, hi, 0.0, U_TOL)
        } else {
            let v = 1.0 - u;
            brent_root(|x| v - self.sf(x), lo, hi, 0.0, U_TOL)
        }
    }

    /// `p'(x)/p(x)`; undefined (domain error) at knots and off the support.
    pub fn score(&self, x: f64) -> Result<f64> {
        self.check_interior("the score (support interior)", x)?;
        if self.support.is_knot(x) {
            return Err(Error::domain("the score (knot of the density)", x));
        }
        Ok(self.score_interior(x))
    }

    pub(crate) fn score_interior(&self, x: f64) -> f64 {
        use Family::*;
        match self.family {
            Normal { mu, sigma } => -(x - mu) / (sigma * sigma),
            Laplace { mu, sigma } => {
                if x < mu {
                    1.0 / sigma
                } else {
                    -1.0 / sigma
                }
            }
            Gamma { k, lambda } => (k - 1.0) / x - 1.0 / lambda,
            Exponential { rate } => -rate,
            InverseGaussian { mu, lambda } => {
                -1.5 / x - lambda / (2.0 * mu * mu) + lambda / (2.0 * x * x)
            }
            Weibull { k, lambda } => (k - 1.0 - k * (x / lambda).powf(k)) / x,
            BurrXii { k, c, sigma } => {
                ((c - 1.0) - c * (k + 1.0) * logistic(c * (x / sigma).ln())) / x
            }
            Levy { mu, sigma } => {
                let y = x - mu;
                (sigma / y - 3.0) / (2.0 * y)
            }
            LogNormal { mu, sigma } => ((mu - sigma * sigma) - x.ln()) / (sigma * sigma * x),
            Beta { alpha, beta } => (alpha - 1.0) / x - (beta - 1.0) / (1.0 - x),
            Uniform { .. } => 0.0,
            HalfNormal => -x,
            HalfCauchy => -2.0 * x / (1.0 + x * x),
            Gompertz { theta } => 1.0 - x.exp() / theta,
            LinearFailureRate { theta } => theta / (1.0 + theta * x) - 1.0 - theta * x,
            InverseWeibull { theta } => (theta * x.powf(-theta) - (theta + 1.0)) / x,
            ShiftedGamma { k, lambda, mu } => (k - 1.0) / (x - mu) - 1.0 / lambda,
        }
    }

    /// `Σ ln p(x_i)`, or `-∞` as soon as one observation leaves the support.
    pub fn log_likelihood(&self, s: &Sample) -> f64 {
        let mut acc = crate::numeric::CompensatedSum::new();
        for &x in s.values() {
            if !self.support.contains_interior(x) {
                return f64::NEG_INFINITY;
            }
            acc.add(self.ln_pdf_interior(x));
        }
        acc.value()
    }

    /// One variate from `g`.
    pub fn draw(&self, g: &mut StreamRng) -> f64 {
        use Family::*;
        match self.family {
            InverseGaussian { mu, lambda } => {
                let nu = g.standard_normal();
                let y = nu * nu;
                let muy = mu * y;
                let x = mu + mu * muy / (2.0 * lambda)
                    - mu / (2.0 * lambda) * (4.0 * mu * lambda * y + muy * muy).sqrt();
                if g.uniform() * (mu + x) <= mu {
                    x
                } else {
                    mu * mu / x
                }
            }
            HalfNormal => g.standard_normal().abs(),
            HalfCauchy => (PI * (g.uniform() - 0.5)).tan().abs(),
            Levy { mu, sigma } => {
                let z = g.standard_normal();
                mu + sigma / (z * z)
            }
            _ => loop {
                // Root-finding quantiles can fail only for pathological
                // parameters; redraw rather than return garbage.
                if let Ok(x) = self.quantile(g.uniform()) {
                    break x;
                }
            },
        }
    }

    pub fn draw_into(&self, g: &mut StreamRng, n: usize, out: &mut Vec<f64>) {
        out.clear();
        out.extend((0..n).map(|_| self.draw(g)));
    }

    /// `n` i.i.d. variates from the stream.
    pub fn sample(&self, n: usize, rng: &RngStream) -> Result<Sample> {
        if n == 0 {
            return Err(Error::InvalidInput("sample size must be at least 1".into()));
        }
        let mut g = rng.generator();
        let mut v = Vec::with_capacity(n);
        self.draw_into(&mut g, n, &mut v);
        Sample::new(v)
    }
}

/// `ln(1 - e^{-h})` for `h > 0`.
fn ln_one_minus_exp_neg(h: f64) -> f64 {
    if h > LN_2 {
        (-(-h).exp()).ln_1p()
    } else {
        (-(-h).exp_m1()).ln()
    }
}

fn ln_erf(z: f64) -> f64 {
    if z < 0.5 {
        erf(z).ln()
    } else {
        (-erfc(z)).ln_1p()
    }
}

fn ig_cdf(mu: f64, lambda: f64, x: f64) -> f64 {
    let r = (lambda / x).sqrt();
    let a = normal_cdf(r * (x / mu - 1.0));
    let tail = normal_cdf(-r * (x / mu + 1.0));
    let b = if tail > 0.0 {
        (2.0 * lambda / mu + tail.ln()).exp()
    } else {
        0.0
    };
    (a + b).min(1.0)
}

#[cfg(test)]
mod tests;
