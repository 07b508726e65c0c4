//! Weighted L² distance between a piecewise-linear operator and the ECDF,
//! integrated piece by piece in closed form.

#[allow(unused_imports)]
use num_traits::Float;
use serde::{Deserialize, Serialize};

use crate::characterization::PiecewiseLinear;
use crate::error::{Error, Result};
use crate::numeric::CompensatedSum;
use crate::special::{erf, erfc};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "weight", rename_all = "snake_case")]
pub enum Weight {
    /// `exp(-a t)`, for supports bounded below.
    Exponential { a: f64 },
    /// `exp(-a t²)`, for the real line.
    Gaussian { a: f64 },
}

impl Weight {
    pub fn a(&self) -> f64 {
        match *self {
            Weight::Exponential { a } | Weight::Gaussian { a } => a,
        }
    }
}

/// `n ∫_L^∞ |T(t) - F̂(t)|² w(t) dt` where the breaks of `op` are the order
/// statistics, so `F̂ = m/n` on piece `m`. `lower` may be `-∞` only for the
/// Gaussian weight.
pub fn generic_l2(op: &PiecewiseLinear, weight: Weight, lower: f64) -> Result<f64> {
    let a = weight.a();
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::param("a", a, "must be positive and finite"));
    }
    if matches!(weight, Weight::Exponential { .. }) && !lower.is_finite() {
        return Err(Error::InvalidInput(
            "the exponential weight needs a support bounded below".into(),
        ));
    }
    let breaks = op.breaks();
    let n = breaks.len();
    if n == 0 {
        return Ok(0.0);
    }
    if breaks[0] < lower {
        return Err(Error::domain("the L² statistic (order statistics ≥ L)", breaks[0]));
    }
    let inv_n = 1.0 / n as f64;
    let mut acc = CompensatedSum::new();
    for m in 0..=n {
        let lo = if m == 0 { lower } else { breaks[m - 1] };
        let hi = if m == n { f64::INFINITY } else { breaks[m] };
        if !(hi > lo) {
            continue;
        }
        let (intercept, slope) = op.piece(m);
        let alpha = intercept - m as f64 * inv_n;
        let piece = match weight {
            Weight::Exponential { a } => exp_piece(alpha, slope, lo, hi, a),
            Weight::Gaussian { a } => gauss_piece(alpha, slope, lo, hi, a),
        };
        acc.add(piece);
    }
    Ok(n as f64 * acc.value())
}

/// `∫_0^h u^k e^{-au} du` for `k = 0, 1, 2`.
fn exp_moments(h: f64, a: f64) -> [f64; 3] {
    if h.is_infinite() {
        return [1.0 / a, 1.0 / (a * a), 2.0 / (a * a * a)];
    }
    let x = a * h;
    if x < 1.0 {
        // h^{k+1} Σ_i (-x)^i / (i! (k+1+i))
        let mut out = [0.0; 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let mut term = 1.0;
            let mut sum = 0.0;
            for i in 0..40 {
                let add = term / (k + 1 + i) as f64;
                sum += add;
                if add.abs() <= 1e-18 * sum.abs() {
                    break;
                }
                term *= -x / (i + 1) as f64;
            }
            *slot = h.powi(k as i32 + 1) * sum;
        }
        return out;
    }
    let e = (-x).exp();
    [
        -(-x).exp_m1() / a,
        (1.0 - e * (1.0 + x)) / (a * a),
        (2.0 - e * (2.0 + x * (2.0 + x))) / (a * a * a),
    ]
}

/// `∫_lo^hi (α + βt)² e^{-at} dt`.
pub(crate) fn exp_piece(alpha: f64, beta: f64, lo: f64, hi: f64, a: f64) -> f64 {
    let d0 = alpha + beta * lo;
    let [m0, m1, m2] = exp_moments(hi - lo, a);
    (-a * lo).exp() * (d0 * d0 * m0 + 2.0 * d0 * beta * m1 + beta * beta * m2)
}

/// `∫_lo^hi (α + βt)² e^{-at²} dt`.
fn gauss_piece(alpha: f64, beta: f64, lo: f64, hi: f64, a: f64) -> f64 {
    let r = a.sqrt();
    let (zl, zh) = (r * lo, r * hi);
    let erf_diff = if zl >= 0.0 {
        erfc(zl) - erfc(zh)
    } else if zh <= 0.0 {
        erfc(-zh) - erfc(-zl)
    } else {
        erf(zh) - erf(zl)
    };
    let m0 = 0.5 * (core::f64::consts::PI / a).sqrt() * erf_diff;
    let g = |t: f64| if t.is_finite() { (-a * t * t).exp() } else { 0.0 };
    let tg = |t: f64| if t.is_finite() { t * (-a * t * t).exp() } else { 0.0 };
    let m1 = (g(lo) - g(hi)) / (2.0 * a);
    let m2 = (tg(lo) - tg(hi)) / (2.0 * a) + m0 / (2.0 * a);
    alpha * alpha * m0 + 2.0 * alpha * beta * m1 + beta * beta * m2
}
