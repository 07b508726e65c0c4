//! Test statistics: the Burr Type XII statistic `B_{n,a}`, the generic
//! weighted-L² characterization statistic and the classical EDF statistics.

mod burr;
mod classical;
mod l2;

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::characterization::{min_operator, zero_bias_operator};
use crate::distributions::Family;
use crate::error::{Error, Result};
use crate::estimation::{FitResult, TestFamily};
use crate::sample::SortedSample;

pub use burr::{burr_b_closed, burr_b_quadrature, burr_coefficients};
pub use classical::{ad, ad_with_clamps, cvm, ks, watson, AD_EPSILON};
pub use l2::{generic_l2, Weight};

/// Which statistic to compute. Serialized as its short id (`B_0.25`,
/// `L2_1`, `ks`, `ks_sqrt_n`, `cvm`, `ad`, `watson`).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum StatisticId {
    /// `B_{n,a}`; Burr family only.
    BurrB { a: f64 },
    /// `n ∫ |T̂ - F̂|² w_a` with the hypothesized family's own operator;
    /// `w_a(t) = e^{-at}` on (0, ∞), `e^{-at²}` on the real line.
    GenericL2 { a: f64 },
    /// Kolmogorov–Smirnov; `scaled` multiplies by `√n`.
    Ks { scaled: bool },
    Cvm,
    Ad,
    Watson,
}

pub const STATISTIC_TAGS: &str = "B_<a>, L2_<a>, ks, ks_sqrt_n, cvm, ad, watson";

impl StatisticId {
    pub fn parse(text: &str) -> Result<Self> {
        let t = text.trim();
        let lower = t.to_ascii_lowercase();
        let tuned = |prefix: &str| -> Option<Result<f64>> {
            let rest = lower.strip_prefix(prefix)?;
            let rest = rest.strip_prefix('_').unwrap_or(rest);
            let rest = rest.trim_start_matches('{').trim_end_matches('}');
            Some(
                rest.parse::<f64>()
                    .ok()
                    .filter(|a| *a > 0.0 && a.is_finite())
                    .ok_or_else(|| Error::InvalidInput(format!("statistic `{t}`: tuning parameter must be a positive number"))),
            )
        };
        let id = match lower.as_str() {
            "ks" | "k_n" | "kn" => StatisticId::Ks { scaled: false },
            "ks_sqrt_n" => StatisticId::Ks { scaled: true },
            "cvm" | "cm" => StatisticId::Cvm,
            "ad" => StatisticId::Ad,
            "watson" | "wa" => StatisticId::Watson,
            _ => {
                if let Some(a) = tuned("l2") {
                    StatisticId::GenericL2 { a: a? }
                } else if let Some(a) = tuned("b") {
                    StatisticId::BurrB { a: a? }
                } else {
                    return Err(Error::Unknown {
                        kind: "statistic",
                        name: t.to_string(),
                        expected: STATISTIC_TAGS,
                    });
                }
            }
        };
        Ok(id)
    }

    /// Short id, the inverse of [`Self::parse`].
    pub fn id(&self) -> String {
        match *self {
            StatisticId::BurrB { a } => format!("B_{a}"),
            StatisticId::GenericL2 { a } => format!("L2_{a}"),
            StatisticId::Ks { scaled: false } => "ks".into(),
            StatisticId::Ks { scaled: true } => "ks_sqrt_n".into(),
            StatisticId::Cvm => "cvm".into(),
            StatisticId::Ad => "ad".into(),
            StatisticId::Watson => "watson".into(),
        }
    }

    /// Column heading in power tables.
    pub fn heading(&self) -> String {
        match *self {
            StatisticId::BurrB { a } => format!("B_{{{a}}}"),
            StatisticId::GenericL2 { a } => format!("G_{{{a}}}"),
            StatisticId::Ks { scaled: false } => "K_n".into(),
            StatisticId::Ks { scaled: true } => "√n K_n".into(),
            StatisticId::Cvm => "CM".into(),
            StatisticId::Ad => "AD".into(),
            StatisticId::Watson => "WA".into(),
        }
    }

    /// The statistics of the Burr power tables, in table order.
    pub fn burr_table() -> Vec<StatisticId> {
        let mut v: Vec<StatisticId> = [0.25, 0.5, 1.0, 3.0, 5.0, 10.0]
            .iter()
            .map(|&a| StatisticId::BurrB { a })
            .collect();
        v.extend([
            StatisticId::Ks { scaled: false },
            StatisticId::Cvm,
            StatisticId::Ad,
            StatisticId::Watson,
        ]);
        v
    }

    pub fn supports(&self, family: TestFamily) -> bool {
        !matches!(self, StatisticId::BurrB { .. }) || family == TestFamily::Burr
    }

    /// The statistic of `sorted` under the fitted law in `fit`.
    pub fn evaluate(&self, sorted: &SortedSample, fit: &FitResult) -> Result<f64> {
        if !self.supports(fit.family) {
            return Err(Error::InvalidInput(format!(
                "statistic {} applies to the Burr family only",
                self.id()
            )));
        }
        let dist = fit.distribution()?;
        let cdf = |x: f64| dist.cdf(x);
        Ok(match *self {
            StatisticId::BurrB { a } => {
                let Family::BurrXii { k, c, .. } = *dist.family() else {
                    unreachable!("Burr fit yields a Burr law")
                };
                burr_b_quadrature(sorted, k, c, a)?
            }
            StatisticId::GenericL2 { a } => generic_statistic(sorted, fit, a)?,
            StatisticId::Ks { scaled } => {
                let d = ks(sorted, cdf);
                if scaled {
                    d * (sorted.len() as f64).sqrt()
                } else {
                    d
                }
            }
            StatisticId::Cvm => cvm(sorted, cdf),
            StatisticId::Ad => ad(sorted, cdf),
            StatisticId::Watson => watson(sorted, cdf),
        })
    }
}

fn generic_statistic(sorted: &SortedSample, fit: &FitResult, a: f64) -> Result<f64> {
    let dist = fit.distribution()?;
    match *dist.family() {
        Family::BurrXii { k, c, .. } => burr_b_quadrature(sorted, k, c, a),
        Family::Gamma { k, lambda } => {
            // Y = X/λ̂ with coefficients 1 - (k̂-1)/Y
            let y: Vec<f64> = sorted.values().iter().map(|x| x / lambda).collect();
            let y = SortedSample::from_sorted(y)?;
            let coef: Vec<f64> = y.values().iter().map(|&v| 1.0 - (k - 1.0) / v).collect();
            let op = min_operator(&y, &coef, 0.0)?;
            generic_l2(&op, Weight::Exponential { a }, 0.0)
        }
        Family::Normal { mu, sigma } => {
            let y: Vec<f64> = sorted.values().iter().map(|x| (x - mu) / sigma).collect();
            let op = zero_bias_operator(&SortedSample::from_sorted(y)?, 1.0);
            generic_l2(&op, Weight::Gaussian { a }, f64::NEG_INFINITY)
        }
        _ => unreachable!("test families are Burr, gamma and normal"),
    }
}

impl TryFrom<String> for StatisticId {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        StatisticId::parse(&s)
    }
}

impl From<StatisticId> for String {
    fn from(s: StatisticId) -> String {
        s.id()
    }
}

impl core::fmt::Display for StatisticId {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(&self.id())
    }
}

impl core::str::FromStr for StatisticId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        StatisticId::parse(s)
    }
}
