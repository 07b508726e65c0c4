//! Textual names, parameter lists and short display labels.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{DistributionSpec, Family};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct ParamSpec {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub default: Option<f64>,
}

#[derive(Clone, Copy, Debug)]
pub struct FamilyInfo {
    pub name: &'static str,
    pub aliases: &'static [&'static str],
    pub params: &'static [ParamSpec],
}

const fn p(name: &'static str, aliases: &'static [&'static str], default: Option<f64>) -> ParamSpec {
    ParamSpec {
        name,
        aliases,
        default,
    }
}

const THETA: &[&str] = &["theta"];

pub const FAMILIES: &[FamilyInfo] = &[
    FamilyInfo {
        name: "normal",
        aliases: &["gaussian"],
        params: &[p("mu", &[], Some(0.0)), p("sigma", &[], Some(1.0))],
    },
    FamilyInfo {
        name: "laplace",
        aliases: &[],
        params: &[p("mu", &[], Some(0.0)), p("sigma", &[], Some(1.0))],
    },
    FamilyInfo {
        name: "gamma",
        aliases: &[],
        params: &[p("k", &[], None), p("lambda", &[], Some(1.0))],
    },
    FamilyInfo {
        name: "exponential",
        aliases: &["exp"],
        params: &[p("rate", &["lambda", "theta"], Some(1.0))],
    },
    FamilyInfo {
        name: "inverse_gaussian",
        aliases: &["ig"],
        params: &[p("mu", &[], Some(1.0)), p("lambda", THETA, Some(1.0))],
    },
    FamilyInfo {
        name: "weibull",
        aliases: &["w"],
        params: &[p("k", THETA, None), p("lambda", &[], Some(1.0))],
    },
    FamilyInfo {
        name: "burr_xii",
        aliases: &["burr"],
        params: &[p("k", &[], None), p("c", &[], None), p("sigma", &[], Some(1.0))],
    },
    FamilyInfo {
        name: "levy",
        aliases: &[],
        params: &[p("mu", &[], Some(0.0)), p("sigma", &[], Some(1.0))],
    },
    FamilyInfo {
        name: "lognormal",
        aliases: &["log_normal"],
        params: &[p("mu", &[], Some(0.0)), p("sigma", &[], Some(1.0))],
    },
    FamilyInfo {
        name: "beta",
        aliases: &[],
        params: &[p("alpha", &[], None), p("beta", &[], None)],
    },
    FamilyInfo {
        name: "uniform",
        aliases: &[],
        params: &[p("lower", &["a"], Some(0.0)), p("upper", &["b"], Some(1.0))],
    },
    FamilyInfo {
        name: "half_normal",
        aliases: &["hn"],
        params: &[],
    },
    FamilyInfo {
        name: "half_cauchy",
        aliases: &["hc"],
        params: &[],
    },
    FamilyInfo {
        name: "gompertz",
        aliases: &["go"],
        params: &[p("theta", &[], None)],
    },
    FamilyInfo {
        name: "linear_failure_rate",
        aliases: &["lf"],
        params: &[p("theta", &[], None)],
    },
    FamilyInfo {
        name: "inverse_weibull",
        aliases: &["iw"],
        params: &[p("theta", &[], None)],
    },
    FamilyInfo {
        name: "shifted_gamma",
        aliases: &[],
        params: &[p("k", &[], None), p("lambda", &[], Some(1.0)), p("mu", &[], None)],
    },
];

pub(crate) const FAMILY_LIST: &str = "normal, laplace, gamma, exponential, inverse_gaussian, weibull, \
burr_xii, levy, lognormal, beta, uniform, half_normal, half_cauchy, gompertz, linear_failure_rate, \
inverse_weibull, shifted_gamma";

pub fn family_info(name: &str) -> Result<&'static FamilyInfo> {
    let key = name.trim().to_ascii_lowercase().replace('-', "_");
    FAMILIES
        .iter()
        .find(|f| f.name == key || f.aliases.contains(&key.as_str()))
        .ok_or_else(|| Error::Unknown {
            kind: "family",
            name: name.to_string(),
            expected: FAMILY_LIST,
        })
}

fn fmt_num(v: f64) -> String {
    format!("{v}")
}

impl DistributionSpec {
    /// Builds an entry from a family name and `(parameter, value)` pairs.
    /// Missing parameters take their defaults; unknown or repeated names are
    /// errors.
    pub fn from_name(name: &str, params: &[(String, f64)]) -> Result<Self> {
        let info = family_info(name)?;
        let mut values: Vec<Option<f64>> = info.params.iter().map(|p| p.default).collect();
        let mut seen = alloc::vec![false; info.params.len()];
        for (key, value) in params {
            let key = key.trim();
            let Some(i) = info
                .params
                .iter()
                .position(|p| p.name == key || p.aliases.contains(&key))
            else {
                let expected: Vec<&str> = info.params.iter().map(|p| p.name).collect();
                return Err(Error::InvalidInput(format!(
                    "unknown parameter `{key}` for family {} (expected: {})",
                    info.name,
                    if expected.is_empty() {
                        "none".to_string()
                    } else {
                        expected.join(", ")
                    }
                )));
            };
            if seen[i] {
                return Err(Error::InvalidInput(format!(
                    "parameter `{}` given twice",
                    info.params[i].name
                )));
            }
            seen[i] = true;
            values[i] = Some(*value);
        }
        let mut v = Vec::with_capacity(values.len());
        for (spec, value) in info.params.iter().zip(values) {
            match value {
                Some(x) => v.push(x),
                None => {
                    return Err(Error::InvalidInput(format!(
                        "family {} requires parameter `{}`",
                        info.name, spec.name
                    )))
                }
            }
        }
        let family = match info.name {
            "normal" => Family::Normal { mu: v[0], sigma: v[1] },
            "laplace" => Family::Laplace { mu: v[0], sigma: v[1] },
            "gamma" => Family::Gamma { k: v[0], lambda: v[1] },
            "exponential" => Family::Exponential { rate: v[0] },
            "inverse_gaussian" => Family::InverseGaussian { mu: v[0], lambda: v[1] },
            "weibull" => Family::Weibull { k: v[0], lambda: v[1] },
            "burr_xii" => Family::BurrXii {
                k: v[0],
                c: v[1],
                sigma: v[2],
            },
            "levy" => Family::Levy { mu: v[0], sigma: v[1] },
            "lognormal" => Family::LogNormal { mu: v[0], sigma: v[1] },
            "beta" => Family::Beta {
                alpha: v[0],
                beta: v[1],
            },
            "uniform" => Family::Uniform {
                lower: v[0],
                upper: v[1],
            },
            "half_normal" => Family::HalfNormal,
            "half_cauchy" => Family::HalfCauchy,
            "gompertz" => Family::Gompertz { theta: v[0] },
            "linear_failure_rate" => Family::LinearFailureRate { theta: v[0] },
            "inverse_weibull" => Family::InverseWeibull { theta: v[0] },
            "shifted_gamma" => Family::ShiftedGamma {
                k: v[0],
                lambda: v[1],
                mu: v[2],
            },
            other => unreachable!("family table entry {other} has no constructor"),
        };
        DistributionSpec::new(family)
    }

    /// Parses a table label such as `W(0.5)`, `Burr_XII(1,1)`, `HN` or
    /// `gamma(2,1)`. Values fill the family's parameters in order, except
    /// that a single value for the inverse Gaussian is its shape `λ`.
    pub fn parse_label(label: &str) -> Result<Self> {
        let text = label.trim();
        let (name, args) = match text.find('(') {
            Some(open) => {
                let inner = text[open + 1..].strip_suffix(')').ok_or_else(|| {
                    Error::InvalidInput(format!("label `{text}`: missing closing parenthesis"))
                })?;
                (&text[..open], inner)
            }
            None => (text, ""),
        };
        let info = family_info(name)?;
        let values = args
            .split(',')
            .map(str::trim)
            .filter(|a| !a.is_empty())
            .map(|a| {
                a.parse::<f64>()
                    .map_err(|_| Error::InvalidInput(format!("label `{text}`: `{a}` is not a number")))
            })
            .collect::<Result<Vec<f64>>>()?;
        if values.len() > info.params.len() {
            return Err(Error::InvalidInput(format!(
                "label `{text}`: {} takes at most {} parameters",
                info.name,
                info.params.len()
            )));
        }
        let pairs: Vec<(String, f64)> = if info.name == "inverse_gaussian" && values.len() == 1 {
            alloc::vec![("lambda".to_string(), values[0])]
        } else {
            info.params.iter().zip(&values).map(|(p, v)| (p.name.to_string(), *v)).collect()
        };
        Self::from_name(info.name, &pairs)
    }

    pub fn family_name(&self) -> &'static str {
        use Family::*;
        match self.family {
            Normal { .. } => "normal",
            Laplace { .. } => "laplace",
            Gamma { .. } => "gamma",
            Exponential { .. } => "exponential",
            InverseGaussian { .. } => "inverse_gaussian",
            Weibull { .. } => "weibull",
            BurrXii { .. } => "burr_xii",
            Levy { .. } => "levy",
            LogNormal { .. } => "lognormal",
            Beta { .. } => "beta",
            Uniform { .. } => "uniform",
            HalfNormal => "half_normal",
            HalfCauchy => "half_cauchy",
            Gompertz { .. } => "gompertz",
            LinearFailureRate { .. } => "linear_failure_rate",
            InverseWeibull { .. } => "inverse_weibull",
            ShiftedGamma { .. } => "shifted_gamma",
        }
    }

    /// Parameters in canonical order.
    pub fn params(&self) -> Vec<(&'static str, f64)> {
        use Family::*;
        match self.family {
            Normal { mu, sigma }
            | Laplace { mu, sigma }
            | Levy { mu, sigma }
            | LogNormal { mu, sigma } => alloc::vec![("mu", mu), ("sigma", sigma)],
            Gamma { k, lambda } | Weibull { k, lambda } => alloc::vec![("k", k), ("lambda", lambda)],
            Exponential { rate } => alloc::vec![("rate", rate)],
            InverseGaussian { mu, lambda } => alloc::vec![("mu", mu), ("lambda", lambda)],
            BurrXii { k, c, sigma } => alloc::vec![("k", k), ("c", c), ("sigma", sigma)],
            Beta { alpha, beta } => alloc::vec![("alpha", alpha), ("beta", beta)],
            Uniform { lower, upper } => alloc::vec![("lower", lower), ("upper", upper)],
            HalfNormal | HalfCauchy => Vec::new(),
            Gompertz { theta } | LinearFailureRate { theta } | InverseWeibull { theta } => {
                alloc::vec![("theta", theta)]
            }
            ShiftedGamma { k, lambda, mu } => alloc::vec![("k", k), ("lambda", lambda), ("mu", mu)],
        }
    }

    /// Short label in the style of power tables: `Burr_XII(1,1)`, `W(0.5)`,
    /// `IG(1.5)`, `HN`.
    pub fn label(&self) -> String {
        use Family::*;
        let f = fmt_num;
        match self.family {
            BurrXii { k, c, sigma } if sigma == 1.0 => format!("Burr_XII({},{})", f(k), f(c)),
            BurrXii { k, c, sigma } => format!("Burr_XII({},{},{})", f(k), f(c), f(sigma)),
            Exponential { rate } => format!("Exp({})", f(rate)),
            LinearFailureRate { theta } => format!("LF({})", f(theta)),
            HalfNormal => "HN".into(),
            HalfCauchy => "HC".into(),
            Gompertz { theta } => format!("GO({})", f(theta)),
            InverseGaussian { mu, lambda } if mu == 1.0 => format!("IG({})", f(lambda)),
            Weibull { k, lambda } if lambda == 1.0 => format!("W({})", f(k)),
            InverseWeibull { theta } => format!("IW({})", f(theta)),
            _ => {
                let inner: Vec<String> = self.params().iter().map(|(_, v)| f(*v)).collect();
                format!("{}({})", self.family_name(), inner.join(","))
            }
        }
    }
}
