//! Numeric evidence for the regularity conditions.
//!
//! * (C2) `κ_p(x) = |p'(x)| min{P(x), 1 - P(x)} / p(x)²` is bounded. Checked on
//!   quantiles whose tail levels are log-spaced in `[1e-12, 1/2]`; passes when
//!   the grid supremum is finite and at most [`KAPPA_MAX`].
//! * (C3) `∫ (1 + |x|) |p'(x)| dx < ∞`, or `∫ |x| |p'(x)| dx < ∞` for smooth
//!   densities whose min-type operator starts at 0 (max-type ending at 0).
//!   The central 99.8% is integrated between knots, the tails over decade
//!   shells toward each endpoint. Divergence is flagged when the running
//!   total exceeds [`C3_DIVERGENCE`] or the shell contributions stop
//!   shrinking geometrically.
//! * (C4)/(C5) `P(x)/p(x) → 0` at a finite left endpoint, `(1 - P(x))/p(x) → 0`
//!   at a finite right endpoint. Evaluated at distances `10⁻¹ … 10⁻⁸`.
//!
//! Endpoint limits (of these ratios and of `p` itself) are read off the last
//! three values of the sequence: they are zero when the sequence decreases by
//! at least 10% per decade, the common value when the three agree to 1e-3
//! relative, and nonexistent otherwise.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use super::OperatorKind;
use crate::distributions::{DistributionSpec, LocalPoint};
use crate::numeric::quad::{integrate_pieces, QuadOptions};

pub const KAPPA_MAX: f64 = 1e4;
pub const C3_DIVERGENCE: f64 = 1e6;
const SHELLS: i32 = 14;
const LIMIT_DECADES: i32 = 8;
const LIMIT_AGREEMENT: f64 = 1e-3;
const CORE_TAIL: f64 = 1e-3;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    NotApplicable,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum C3Form {
    /// `∫ (1 + |x|) |p'(x)| dx`
    Full,
    /// `∫ |x| |p'(x)| dx`
    Weighted,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdicts {
    pub c2: Verdict,
    pub c3: Verdict,
    pub c4: Verdict,
    pub c5: Verdict,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub distribution: String,
    /// `None` when no characterization covers the support.
    pub operator: Option<OperatorKind>,
    pub c2_sup_kappa: f64,
    pub c3_form: C3Form,
    /// Partial integral through the last shell; `None` when divergent.
    pub c3_integral: Option<f64>,
    pub c3_divergent: bool,
    pub c4_limit: Option<f64>,
    pub c5_limit: Option<f64>,
    pub left_density_limit: Option<f64>,
    pub right_density_limit: Option<f64>,
    pub verdicts: Verdicts,
    pub grid: String,
    pub notes: Vec<String>,
}

impl ConditionReport {
    pub fn supported(&self) -> bool {
        self.operator.is_some()
    }

    /// A characterization applies and no required condition failed.
    pub fn passes(&self) -> bool {
        let v = self.verdicts;
        self.supported() && [v.c2, v.c3, v.c4, v.c5].iter().all(|&x| x != Verdict::Fail)
    }
}

fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::Pass
    } else {
        Verdict::Fail
    }
}

pub fn check_conditions(dist: &DistributionSpec, grid_size: usize) -> ConditionReport {
    let grid_size = grid_size.max(100);
    let sup = dist.support().clone();
    let mut notes = Vec::new();
    let operator = match OperatorKind::for_distribution(dist) {
        Ok(kind) => Some(kind),
        Err(e) => {
            notes.push(format!("{e}"));
            None
        }
    };

    let c2_sup_kappa = sup_kappa(dist, grid_size);

    let smooth = sup.knots.is_empty();
    let weighted = smooth
        && match operator {
            Some(k) => k.lower() == Some(0.0) || k.upper() == Some(0.0),
            None => false,
        };
    let c3_form = if weighted { C3Form::Weighted } else { C3Form::Full };
    let c3 = c3_integral(dist, c3_form, &mut notes);
    let c3_divergent = c3.is_none();

    let left = |y: f64| dist.at_left_offset(y);
    let right = |y: f64| dist.at_right_offset(y);
    let ratio_left = |p: LocalPoint| (p.ln_cdf - p.ln_pdf).exp();
    let ratio_right = |p: LocalPoint| (p.ln_sf - p.ln_pdf).exp();
    let density = |p: LocalPoint| p.ln_pdf.exp();

    let c4_limit = sup.lower_bounded().then(|| endpoint_limit(left, ratio_left)).flatten();
    let c5_limit = sup.upper_bounded().then(|| endpoint_limit(right, ratio_right)).flatten();
    let left_density_limit = sup.lower_bounded().then(|| endpoint_limit(left, density)).flatten();
    let right_density_limit = sup.upper_bounded().then(|| endpoint_limit(right, density)).flatten();

    let at_zero = |limit: Option<f64>| verdict(limit == Some(0.0));
    let verdicts = Verdicts {
        c2: verdict(c2_sup_kappa.is_finite() && c2_sup_kappa <= KAPPA_MAX),
        c3: verdict(!c3_divergent),
        c4: if sup.lower_bounded() {
            at_zero(c4_limit)
        } else {
            Verdict::NotApplicable
        },
        c5: if sup.upper_bounded() {
            at_zero(c5_limit)
        } else {
            Verdict::NotApplicable
        },
    };
    if sup.lower_bounded() && sup.upper_bounded() && left_density_limit.is_none() && right_density_limit.is_none() {
        notes.push("numerically, the density has no finite limit at either endpoint".into());
    }

    ConditionReport {
        distribution: dist.label(),
        operator,
        c2_sup_kappa,
        c3_form,
        c3_integral: c3,
        c3_divergent,
        c4_limit,
        c5_limit,
        left_density_limit,
        right_density_limit,
        verdicts,
        grid: format!(
            "kappa: {grid_size} quantiles, tail levels log-spaced in [1e-12, 0.5]; \
             C3: central [q({CORE_TAIL}), q({})] split at knots plus {SHELLS} decade shells per tail, \
             divergence above {C3_DIVERGENCE:e}; limits: distances 1e-1..1e-{LIMIT_DECADES}",
            1.0 - CORE_TAIL
        ),
        notes,
    }
}

fn kappa_at(dist: &DistributionSpec, x: f64) -> Option<f64> {
    let sup = dist.support();
    if !sup.contains_interior(x) || sup.is_knot(x) {
        return None;
    }
    let ln_tail = dist.ln_cdf(x).min(dist.ln_sf(x));
    Some(dist.score_interior(x).abs() * (ln_tail - dist.ln_pdf_interior(x)).exp())
}

fn sup_kappa(dist: &DistributionSpec, grid_size: usize) -> f64 {
    let half = grid_size / 2;
    let (lo, hi) = (-12.0f64, 0.5f64.log10());
    let mut sup = 0.0f64;
    for i in 0..half {
        let u = 10f64.powf(lo + (hi - lo) * i as f64 / (half - 1) as f64);
        for level in [u, 1.0 - u] {
            let Ok(x) = dist.quantile(level) else { continue };
            if let Some(k) = kappa_at(dist, x) {
                if k.is_nan() {
                    return f64::INFINITY;
                }
                sup = sup.max(k);
            }
        }
    }
    sup
}

/// Integrates the C3 integrand; `None` signals divergence.
fn c3_integral(dist: &DistributionSpec, form: C3Form, notes: &mut Vec<String>) -> Option<f64> {
    let sup = dist.support();
    let weight = |x: f64| match form {
        C3Form::Full => 1.0 + x.abs(),
        C3Form::Weighted => x.abs(),
    };
    let integrand = |p: Option<LocalPoint>, x: f64| match p {
        Some(p) => {
            let v = weight(x) * p.score.abs() * p.ln_pdf.exp();
            if v.is_nan() {
                0.0
            } else {
                v
            }
        }
        None => 0.0,
    };
    let opts = QuadOptions {
        abs_tol: 0.0,
        rel_tol: 1e-8,
        max_intervals: 500,
    };
    let (Ok(a0), Ok(b0)) = (dist.quantile(CORE_TAIL), dist.quantile(1.0 - CORE_TAIL)) else {
        notes.push("C3: central quantiles unavailable".into());
        return None;
    };
    let mut points = alloc::vec![a0];
    points.extend(sup.knots.iter().copied().filter(|&k| k > a0 && k < b0));
    points.push(b0);
    let interior = |x: f64| {
        let p = dist
            .support()
            .contains_interior(x)
            .then(|| LocalPoint {
                ln_pdf: dist.ln_pdf_interior(x),
                score: dist.score_interior(x),
                ln_cdf: 0.0,
                ln_sf: 0.0,
            });
        integrand(p, x)
    };
    let mut total = match integrate_pieces(interior, &points, &opts) {
        Ok(i) => i.value,
        Err(e) => {
            notes.push(format!("C3 central piece: {e}"));
            return None;
        }
    };

    let width = (b0 - a0).max(f64::MIN_POSITIVE);
    let mut sides: Vec<(&str, Vec<f64>)> = Vec::new();

    // left tail
    let mut shells = Vec::new();
    for j in 0..SHELLS {
        let piece = if sup.lower_bounded() {
            let d = a0 - sup.left;
            let (near, far) = (d * 10f64.powi(-(j + 1)), d * 10f64.powi(-j));
            integrate_pieces(
                |y| integrand(dist.at_left_offset(y), sup.left + y),
                &[near, far],
                &opts,
            )
        } else {
            let (near, far) = (a0 - width * (10f64.powi(j) - 1.0), a0 - width * (10f64.powi(j + 1) - 1.0));
            integrate_pieces(interior, &[far, near], &opts)
        };
        shells.push(match piece {
            Ok(i) => i.value,
            Err(e) => {
                notes.push(format!("C3 left shell {j}: {e}"));
                return None;
            }
        });
    }
    sides.push(("left", shells));

    let mut shells = Vec::new();
    for j in 0..SHELLS {
        let piece = if sup.upper_bounded() {
            let d = sup.right - b0;
            let (near, far) = (d * 10f64.powi(-(j + 1)), d * 10f64.powi(-j));
            integrate_pieces(
                |y| integrand(dist.at_right_offset(y), sup.right - y),
                &[near, far],
                &opts,
            )
        } else {
            let (near, far) = (b0 + width * (10f64.powi(j) - 1.0), b0 + width * (10f64.powi(j + 1) - 1.0));
            integrate_pieces(interior, &[near, far], &opts)
        };
        shells.push(match piece {
            Ok(i) => i.value,
            Err(e) => {
                notes.push(format!("C3 right shell {j}: {e}"));
                return None;
            }
        });
    }
    sides.push(("right", shells));

    for (_, shells) in &sides {
        total += shells.iter().sum::<f64>();
    }
    if !(total <= C3_DIVERGENCE) {
        notes.push(format!("C3: running integral {total:e} exceeds {C3_DIVERGENCE:e}"));
        return None;
    }
    for (side, shells) in &sides {
        let c = &shells[shells.len() - 3..];
        let negligible = c[2] <= 1e-12 * total.max(1.0);
        let decaying = c[2] <= 0.9 * c[1] && c[1] <= 0.9 * c[0];
        if !(negligible || decaying) {
            notes.push(format!(
                "C3: {side} tail shells do not shrink ({:e}, {:e}, {:e})",
                c[0], c[1], c[2]
            ));
            return None;
        }
    }
    Some(total)
}

/// Limit of `value(at(y))` as the endpoint offset `y ↓ 0`.
fn endpoint_limit<A, V>(at: A, value: V) -> Option<f64>
where
    A: Fn(f64) -> Option<LocalPoint>,
    V: Fn(LocalPoint) -> f64,
{
    let seq: Vec<f64> = (1..=LIMIT_DECADES)
        .filter_map(|j| at(10f64.powi(-j)).map(&value))
        .filter(|v| v.is_finite())
        .collect();
    if seq.len() < 3 {
        return None;
    }
    let c = &seq[seq.len() - 3..];
    if c[2] == 0.0 || (c[2] <= 0.9 * c[1] && c[1] <= 0.9 * c[0]) {
        return Some(0.0);
    }
    let agree = |a: f64, b: f64| (a - b).abs() <= LIMIT_AGREEMENT * a.abs().max(b.abs());
    if agree(c[0], c[1]) && agree(c[1], c[2]) {
        Some(c[2])
    } else {
        None
    }
}
