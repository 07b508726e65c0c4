//! Fixed-point operators, the density-approach test functions and numeric
//! checks of the regularity conditions.
//!
//! Every operator `T` here satisfies `T(F) = F` exactly when the data follow
//! the hypothesized density. The variants differ only in how the support is
//! bounded:
//!
//! | kind | support | `T(t)` |
//! |---|---|---|
//! | `RealLine` | ℝ | `E[s(X)(t - X) 1{X ≤ t}]` |
//! | `PositiveAxisMin` | (0, ∞) | `E[-s(X) min{X, t}]` |
//! | `LowerBoundedMin` | (L, ∞) | `E[-s(X)(min{X, t} - L)]` |
//! | `UpperBoundedMax` | (-∞, R) | `1 - E[s(X)(R - max{X, t})]` |
//! | `BoundedRightLimit` | (L, R) | `E[-s(X)(min{X, t} - L)] + (t - L) p(R-)` |
//! | `BoundedLeftLimit` | (L, R) | `1 - E[s(X)(R - max{X, t})] - (R - t) p(L+)` |
//!
//! with `s = p'/p`. For the normal law the real-line form is the zero-bias
//! identity `F(t) = E[X (X - t) 1{X ≤ t}] / σ²` (centred at the mean).

mod conditions;
mod operators;
mod stein;
#[cfg(test)]
mod tests;

use alloc::format;

use serde::{Deserialize, Serialize};

use crate::distributions::{DistributionSpec, Family};
use crate::error::{Error, Result};

pub use conditions::{check_conditions, C3Form, ConditionReport, Verdict, Verdicts};
pub use operators::{
    density_identity, density_identity_under, empirical_t_min, empirical_t_zero_bias, exact_t,
    exact_t_under, fixed_point_residual, fixed_point_residual_under, min_operator,
    residual_grid, zero_bias_operator, PiecewiseLinear,
};
pub use stein::{stein_expectation, test_function_ftp, test_function_ftp_derivative, SteinExpectation};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "variant", rename_all = "snake_case")]
pub enum OperatorKind {
    RealLine,
    PositiveAxisMin,
    LowerBoundedMin {
        lower: f64,
    },
    UpperBoundedMax {
        upper: f64,
    },
    /// `density_limit` is `lim_{x↗R} p(x)`.
    BoundedRightLimit {
        lower: f64,
        upper: f64,
        density_limit: f64,
    },
    /// `density_limit` is `lim_{x↘L} p(x)`.
    BoundedLeftLimit {
        lower: f64,
        upper: f64,
        density_limit: f64,
    },
}

impl OperatorKind {
    /// The variant matching `dist`'s support. Bounded supports use the right
    /// endpoint limit when it exists and the left one otherwise; when neither
    /// exists (arcsine-type densities) there is no characterization.
    pub fn for_distribution(dist: &DistributionSpec) -> Result<Self> {
        let sup = dist.support();
        let (l, r) = (sup.left, sup.right);
        Ok(match (l.is_finite(), r.is_finite()) {
            (false, false) => OperatorKind::RealLine,
            (true, false) if l == 0.0 => OperatorKind::PositiveAxisMin,
            (true, false) => OperatorKind::LowerBoundedMin { lower: l },
            (false, true) => OperatorKind::UpperBoundedMax { upper: r },
            (true, true) => {
                let (left_limit, right_limit) = endpoint_density_limits(dist);
                if let Some(density_limit) = right_limit {
                    OperatorKind::BoundedRightLimit {
                        lower: l,
                        upper: r,
                        density_limit,
                    }
                } else if let Some(density_limit) = left_limit {
                    OperatorKind::BoundedLeftLimit {
                        lower: l,
                        upper: r,
                        density_limit,
                    }
                } else {
                    return Err(Error::InvalidInput(format!(
                        "{} has no finite density limit at either endpoint, so no \
                         bounded-support characterization applies",
                        dist.label()
                    )));
                }
            }
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            OperatorKind::RealLine => "real_line",
            OperatorKind::PositiveAxisMin => "positive_axis_min",
            OperatorKind::LowerBoundedMin { .. } => "lower_bounded_min",
            OperatorKind::UpperBoundedMax { .. } => "upper_bounded_max",
            OperatorKind::BoundedRightLimit { .. } => "bounded_right_limit",
            OperatorKind::BoundedLeftLimit { .. } => "bounded_left_limit",
        }
    }

    /// Left boundary used by min-type operators.
    fn lower(&self) -> Option<f64> {
        match *self {
            OperatorKind::PositiveAxisMin => Some(0.0),
            OperatorKind::LowerBoundedMin { lower } | OperatorKind::BoundedRightLimit { lower, .. } => {
                Some(lower)
            }
            _ => None,
        }
    }

    /// Right boundary used by max-type operators.
    fn upper(&self) -> Option<f64> {
        match *self {
            OperatorKind::UpperBoundedMax { upper } | OperatorKind::BoundedLeftLimit { upper, .. } => {
                Some(upper)
            }
            _ => None,
        }
    }

    /// Checks the invariants and that `dist`'s support has the shape the
    /// variant expects.
    pub fn validate_for(&self, dist: &DistributionSpec) -> Result<()> {
        let sup = dist.support();
        let (l, r) = (sup.left, sup.right);
        let ok = match *self {
            OperatorKind::RealLine => !l.is_finite() && !r.is_finite(),
            OperatorKind::PositiveAxisMin => l == 0.0 && !r.is_finite(),
            OperatorKind::LowerBoundedMin { lower } => l == lower && !r.is_finite(),
            OperatorKind::UpperBoundedMax { upper } => !l.is_finite() && r == upper,
            OperatorKind::BoundedRightLimit {
                lower,
                upper,
                density_limit,
            }
            | OperatorKind::BoundedLeftLimit {
                lower,
                upper,
                density_limit,
            } => {
                if !(density_limit >= 0.0 && density_limit.is_finite()) {
                    return Err(Error::param(
                        "density_limit",
                        density_limit,
                        "must be finite and non-negative",
                    ));
                }
                l == lower && r == upper
            }
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidInput(format!(
                "operator {} does not match the support ({l}, {r}) of {}",
                self.name(),
                dist.label()
            )))
        }
    }
}

/// `(lim_{x↘L} p(x), lim_{x↗R} p(x))` at finite endpoints, from the closed
/// forms. `None` for an infinite endpoint or an unbounded density.
pub fn endpoint_density_limits(dist: &DistributionSpec) -> (Option<f64>, Option<f64>) {
    use Family::*;
    let sup = dist.support();
    // shape > 1 → 0, shape = 1 → `at_one`, shape < 1 → unbounded
    let by_shape = |shape: f64, at_one: f64| {
        if shape > 1.0 {
            Some(0.0)
        } else if shape == 1.0 {
            Some(at_one)
        } else {
            None
        }
    };
    let left = match *dist.family() {
        Gamma { k, lambda } | ShiftedGamma { k, lambda, .. } => by_shape(k, 1.0 / lambda),
        Exponential { rate } => Some(rate),
        Weibull { k, lambda } => by_shape(k, 1.0 / lambda),
        BurrXii { k, c, sigma } => by_shape(c, k / sigma),
        InverseGaussian { .. } | Levy { .. } | LogNormal { .. } | InverseWeibull { .. } => Some(0.0),
        Beta { alpha, beta } => by_shape(alpha, beta),
        Uniform { lower, upper } => Some(1.0 / (upper - lower)),
        HalfNormal => Some(core::f64::consts::FRAC_2_SQRT_PI * core::f64::consts::FRAC_1_SQRT_2),
        HalfCauchy => Some(core::f64::consts::FRAC_2_PI),
        Gompertz { theta } => Some(1.0 / theta),
        LinearFailureRate { .. } => Some(1.0),
        Normal { .. } | Laplace { .. } => None,
    };
    let right = match *dist.family() {
        Beta { alpha, beta } => by_shape(beta, alpha),
        Uniform { lower, upper } => Some(1.0 / (upper - lower)),
        _ => None,
    };
    (
        left.filter(|_| sup.lower_bounded()),
        right.filter(|_| sup.upper_bounded()),
    )
}
