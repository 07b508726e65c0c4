//! EDF statistics on fitted CDF values `u_j = F(X_(j))`.

#[allow(unused_imports)]
use num_traits::Float;

use crate::numeric::CompensatedSum;
use crate::sample::SortedSample;

/// Clamp applied to `F` before taking logs in [`ad`].
pub const AD_EPSILON: f64 = 1e-15;

/// `max(D⁺, D⁻)` without the `√n` factor.
pub fn ks<F: Fn(f64) -> f64>(s: &SortedSample, cdf: F) -> f64 {
    let n = s.len() as f64;
    let mut d = 0.0f64;
    for (j, &x) in s.values().iter().enumerate() {
        let u = cdf(x);
        let j = j as f64;
        d = d.max((j + 1.0) / n - u).max(u - j / n);
    }
    d
}

pub fn cvm<F: Fn(f64) -> f64>(s: &SortedSample, cdf: F) -> f64 {
    let n = s.len() as f64;
    let mut acc = CompensatedSum::new();
    acc.add(1.0 / (12.0 * n));
    for (j, &x) in s.values().iter().enumerate() {
        let r = cdf(x) - (2.0 * j as f64 + 1.0) / (2.0 * n);
        acc.add(r * r);
    }
    acc.value()
}

/// Anderson–Darling with `F` clamped to `[ε, 1 - ε]`; also returns how many
/// values were clamped.
pub fn ad_with_clamps<F: Fn(f64) -> f64>(s: &SortedSample, cdf: F) -> (f64, usize) {
    let len = s.len();
    let n = len as f64;
    let mut clamps = 0;
    let mut acc = CompensatedSum::new();
    for (j, &x) in s.values().iter().enumerate() {
        let raw = cdf(x);
        let u = raw.clamp(AD_EPSILON, 1.0 - AD_EPSILON);
        if u != raw {
            clamps += 1;
        }
        let j = j as f64 + 1.0;
        acc.add((2.0 * j - 1.0) * u.ln() + (2.0 * (n - j) + 1.0) * (-u).ln_1p());
    }
    (-n - acc.value() / n, clamps)
}

pub fn ad<F: Fn(f64) -> f64>(s: &SortedSample, cdf: F) -> f64 {
    ad_with_clamps(s, cdf).0
}

pub fn watson<F: Fn(f64) -> f64>(s: &SortedSample, cdf: F) -> f64 {
    let n = s.len() as f64;
    let mut cm = CompensatedSum::new();
    let mut mean = CompensatedSum::new();
    cm.add(1.0 / (12.0 * n));
    for (j, &x) in s.values().iter().enumerate() {
        let u = cdf(x);
        let r = u - (2.0 * j as f64 + 1.0) / (2.0 * n);
        cm.add(r * r);
        mean.add(u);
    }
    let shift = mean.value() / n - 0.5;
    cm.value() - n * shift * shift
}
