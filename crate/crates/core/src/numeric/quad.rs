//! Globally adaptive 15-point Gauss–Kronrod quadrature.
//!
//! Infinite endpoints are compactified with `x = a + (1-u)/u` (mirrored for a
//! lower infinite limit), which puts the tail at `u = 0` where floating point
//! is densest, so algebraic tails can be refined as far as needed. Several pieces may be handed in at once (split at
//! kinks or knots); the error budget is then shared across all of them.

use alloc::collections::BinaryHeap;
use core::cmp::Ordering;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_2,
    0.140_653_259_715_525_9,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_8,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadOptions {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_intervals: usize,
}

impl QuadOptions {
    pub fn absolute(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol: 0.0,
            max_intervals: 4000,
        }
    }
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self {
            abs_tol: 1e-9,
            rel_tol: 1e-12,
            max_intervals: 4000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Integral {
    pub value: f64,
    pub error: f64,
    pub intervals: usize,
}

#[derive(Clone, Copy, Debug)]
enum Map {
    Identity,
    /// `x = origin + (1-u)/u`, `u ∈ (0, 1]`.
    Upper { origin: f64 },
    /// `x = origin - (1-u)/u`, `u ∈ (0, 1]`.
    Lower { origin: f64 },
}

impl Map {
    #[inline]
    fn apply<F: Fn(f64) -> f64>(&self, f: &F, u: f64) -> f64 {
        match *self {
            Map::Identity => f(u),
            Map::Upper { origin } => {
                let y = f(origin + (1.0 - u) / u);
                if y == 0.0 {
                    0.0
                } else {
                    y / (u * u)
                }
            }
            Map::Lower { origin } => {
                let y = f(origin - (1.0 - u) / u);
                if y == 0.0 {
                    0.0
                } else {
                    y / (u * u)
                }
            }
        }
    }
}

#[derive(Clone, Copy, Debug)]
struct Segment {
    a: f64,
    b: f64,
    map: Map,
    value: f64,
    error: f64,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

fn kronrod<F: Fn(f64) -> f64>(f: &F, map: Map, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = map.apply(f, center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let x = half * XGK[j];
        let f1 = map.apply(f, center - x);
        let f2 = map.apply(f, center + x);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let value = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    if !value.is_finite() {
        err = f64::INFINITY;
    }
    (value, err)
}

fn segment<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64) -> Segment {
    let (map, a, b) = match (lo.is_finite(), hi.is_finite()) {
        (true, true) => (Map::Identity, lo, hi),
        (true, false) => (Map::Upper { origin: lo }, 0.0, 1.0),
        (false, true) => (Map::Lower { origin: hi }, 0.0, 1.0),
        (false, false) => unreachable!("doubly infinite pieces are split before mapping"),
    };
    let (value, error) = kronrod(f, map, a, b);
    Segment {
        a,
        b,
        map,
        value,
        error,
    }
}

/// Integrate `f` over `[a, b]`; either endpoint may be infinite.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, opts: &QuadOptions) -> Result<Integral> {
    integrate_pieces(f, &[a, b], opts)
}

/// Integrate `f` over `[points[0], points[last]]`, treating every interior
/// point as a place where the integrand may kink. `points` must be
/// non-decreasing; zero-length pieces are skipped.
pub fn integrate_pieces<F: Fn(f64) -> f64>(
    f: F,
    points: &[f64],
    opts: &QuadOptions,
) -> Result<Integral> {
    if points.len() < 2 {
        return Ok(Integral {
            value: 0.0,
            error: 0.0,
            intervals: 0,
        });
    }
    let mut heap = BinaryHeap::new();
    let mut settled_value = 0.0;
    let mut settled_error = 0.0;
    let mut settled = 0usize;
    for w in points.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if !(lo < hi) {
            if lo > hi {
                return Err(Error::InvalidInput(alloc::format!(
                    "quadrature breakpoints out of order: {lo} > {hi}"
                )));
            }
            continue;
        }
        if !lo.is_finite() && !hi.is_finite() {
            heap.push(segment(&f, lo, 0.0));
            heap.push(segment(&f, 0.0, hi));
        } else {
            heap.push(segment(&f, lo, hi));
        }
    }

    loop {
        let (total, err) = heap
            .iter()
            .fold((settled_value, settled_error), |(v, e), s| (v + s.value, e + s.error));
        let target = opts.abs_tol.max(opts.rel_tol * total.abs());
        let count = heap.len() + settled;
        if err <= target {
            return Ok(Integral {
                value: total,
                error: err,
                intervals: count,
            });
        }
        if count >= opts.max_intervals || !settled_error.is_finite() {
            return Err(Error::Quadrature {
                estimate: total,
                error: err,
            });
        }
        let Some(worst) = heap.pop() else {
            return Err(Error::Quadrature {
                estimate: total,
                error: err,
            });
        };
        let mid = 0.5 * (worst.a + worst.b);
        // Interval too small to split further: settle it and carry on.
        if !(worst.a < mid && mid < worst.b) || (worst.b - worst.a) < 1e-15 * mid.abs().max(1e-300) {
            settled_value += worst.value;
            settled_error += worst.error;
            settled += 1;
            if heap.is_empty() {
                let e = settled_error;
                return if e <= target {
                    Ok(Integral {
                        value: settled_value,
                        error: e,
                        intervals: count,
                    })
                } else {
                    Err(Error::Quadrature {
                        estimate: settled_value,
                        error: e,
                    })
                };
            }
            continue;
        }
        for (a, b) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = kronrod(&f, worst.map, a, b);
            heap.push(Segment {
                a,
                b,
                map: worst.map,
                value,
                error,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn opts() -> QuadOptions {
        QuadOptions {
            abs_tol: 1e-13,
            rel_tol: 1e-13,
            max_intervals: 4000,
        }
    }

    #[test]
    fn polynomials_are_exact() {
        let r = integrate(|x| 3.0 * x * x - x + 2.0, -1.0, 2.0, &opts()).unwrap();
        assert!((r.value - (8.0 + 1.0 - 1.5 + 6.0)).abs() < 1e-13);
    }

    #[test]
    fn upper_infinite_gaussian() {
        let r = integrate(|x| (-x * x).exp(), 0.0, f64::INFINITY, &opts()).unwrap();
        assert!((r.value - core::f64::consts::PI.sqrt() / 2.0).abs() < 1e-12);
    }

    #[test]
    fn doubly_infinite_and_lower_infinite() {
        let r = integrate(|x| 1.0 / (1.0 + x * x), f64::NEG_INFINITY, f64::INFINITY, &opts()).unwrap();
        assert!((r.value - core::f64::consts::PI).abs() < 1e-11);
        let r = integrate(|x| x.exp(), f64::NEG_INFINITY, 1.0, &opts()).unwrap();
        assert!((r.value - core::f64::consts::E).abs() < 1e-12);
    }

    #[test]
    fn kinks_at_breakpoints() {
        let r = integrate_pieces(|x| (x - 0.3).abs(), &[0.0, 0.3, 1.0], &opts()).unwrap();
        assert!((r.value - (0.045 + 0.245)).abs() < 1e-14);
    }

    #[test]
    fn endpoint_singularity() {
        let r = integrate(|x| 1.0 / x.sqrt(), 0.0, 1.0, &QuadOptions::absolute(1e-10)).unwrap();
        assert!((r.value - 2.0).abs() < 1e-9);
    }

    #[test]
    fn divergent_integral_reports_failure() {
        let err = integrate(|x| 1.0 / x, 0.0, 1.0, &QuadOptions::absolute(1e-10)).unwrap_err();
        assert!(matches!(err, Error::Quadrature { .. }));
    }
}
