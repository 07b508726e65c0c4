use alloc::format;
use alloc::vec::Vec;


use super::OperatorKind;
use crate::distributions::DistributionSpec;
use crate::error::{Error, Result};
use crate::numeric::quad::{integrate_pieces, Integral, QuadOptions};
use crate::numeric::CompensatedSum;
use crate::sample::{Sample, SortedSample};

pub(crate) const DEFAULT_QUAD_TOL: f64 = 1e-9;

/// `-(1/n) Σ s(Y_j) (min{Y_j, t} - L)` for a score function `s`.
pub fn empirical_t_min<S>(sample: &Sample, score: S, t: f64, lower: f64) -> Result<f64>
where
    S: Fn(f64) -> Result<f64>,
{
    if !(t > lower) {
        return Err(Error::domain("the operator argument (t > L)", t));
    }
    let mut acc = CompensatedSum::new();
    for &y in sample.values() {
        if !(y > lower) {
            return Err(Error::domain("the min-type operator (observations > L)", y));
        }
        acc.add(-score(y)? * (y.min(t) - lower));
    }
    Ok(acc.value() / sample.len() as f64)
}

/// `(1/(n σ²)) Σ Y_j (Y_j - t) 1{Y_j ≤ t}`.
pub fn empirical_t_zero_bias(sample: &Sample, t: f64, sigma2: f64) -> f64 {
    let mut acc = CompensatedSum::new();
    for &y in sample.values() {
        if y <= t {
            acc.add(y * (y - t));
        }
    }
    acc.value() / (sample.len() as f64 * sigma2)
}

/// A right-continuous function that is affine between consecutive breaks.
///
/// Piece `m` (for `m = 0..=breaks.len()`) covers `[breaks[m-1], breaks[m])`
/// with the convention `breaks[-1] = -∞`, `breaks[len] = +∞`. When the breaks
/// are order statistics, the empirical CDF equals `m / n` on piece `m`.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseLinear {
    breaks: Vec<f64>,
    intercept: Vec<f64>,
    slope: Vec<f64>,
}

impl PiecewiseLinear {
    /// `intercept` and `slope` need one entry per piece, `breaks.len() + 1`;
    /// `breaks` must be ascending.
    pub fn new(breaks: Vec<f64>, intercept: Vec<f64>, slope: Vec<f64>) -> Result<Self> {
        if intercept.len() != breaks.len() + 1 || slope.len() != breaks.len() + 1 {
            return Err(Error::InvalidInput(format!(
                "{} breaks need {} pieces, got {} intercepts and {} slopes",
                breaks.len(),
                breaks.len() + 1,
                intercept.len(),
                slope.len()
            )));
        }
        if breaks.windows(2).any(|w| !(w[0] <= w[1])) {
            return Err(Error::InvalidInput("breaks are not ascending".into()));
        }
        Ok(Self {
            breaks,
            intercept,
            slope,
        })
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    /// `(intercept, slope)` of piece `m`.
    pub fn piece(&self, m: usize) -> (f64, f64) {
        (self.intercept[m], self.slope[m])
    }

    pub fn pieces(&self) -> usize {
        self.intercept.len()
    }

    /// Index of the piece containing `t`.
    pub fn locate(&self, t: f64) -> usize {
        self.breaks.partition_point(|&b| b <= t)
    }

    pub fn eval(&self, t: f64) -> f64 {
        let m = self.locate(t);
        self.intercept[m] + self.slope[m] * t
    }
}

/// The empirical min-type operator `t ↦ (1/n) Σ a_j (min{Y_j, t} - L)` as a
/// piecewise-linear function, for coefficients `a_j = -s(Y_j)` aligned with
/// the order statistics. Evaluation is O(log n) after O(n) setup.
pub fn min_operator(sorted: &SortedSample, coefficients: &[f64], lower: f64) -> Result<PiecewiseLinear> {
    let y = sorted.values();
    let n = y.len();
    if coefficients.len() != n {
        return Err(Error::InvalidInput(format!(
            "{} coefficients for {} observations",
            coefficients.len(),
            n
        )));
    }
    if !(sorted.min() > lower) {
        return Err(Error::domain("the min-type operator (observations > L)", sorted.min()));
    }
    let inv_n = 1.0 / n as f64;
    // prefix[m] = Σ_{j<m} a_j (Y_j - L) / n,  tail[m] = Σ_{j≥m} a_j / n
    let mut prefix = Vec::with_capacity(n + 1);
    let mut acc = CompensatedSum::new();
    prefix.push(0.0);
    for (yj, aj) in y.iter().zip(coefficients) {
        acc.add(aj * (yj - lower));
        prefix.push(acc.value() * inv_n);
    }
    let mut tail = alloc::vec![0.0; n + 1];
    let mut acc = CompensatedSum::new();
    for j in (0..n).rev() {
        acc.add(coefficients[j]);
        tail[j] = acc.value() * inv_n;
    }
    let intercept = prefix.iter().zip(&tail).map(|(p, s)| p - lower * s).collect();
    Ok(PiecewiseLinear {
        breaks: y.to_vec(),
        intercept,
        slope: tail,
    })
}

/// The empirical zero-bias operator `t ↦ (1/(n σ²)) Σ Y_j (Y_j - t) 1{Y_j ≤ t}`
/// as a piecewise-linear function.
pub fn zero_bias_operator(sorted: &SortedSample, sigma2: f64) -> PiecewiseLinear {
    let y = sorted.values();
    let scale = 1.0 / (y.len() as f64 * sigma2);
    let mut intercept = Vec::with_capacity(y.len() + 1);
    let mut slope = Vec::with_capacity(y.len() + 1);
    let (mut sq, mut lin) = (CompensatedSum::new(), CompensatedSum::new());
    intercept.push(0.0);
    slope.push(0.0);
    for &v in y {
        sq.add(v * v);
        lin.add(v);
        intercept.push(sq.value() * scale);
        slope.push(-lin.value() * scale);
    }
    PiecewiseLinear {
        breaks: y.to_vec(),
        intercept,
        slope,
    }
}

/// `E_law[g(X)]` by adaptive quadrature over the support of `law`, with
/// breakpoints at the knots, a few quantiles and `breaks`.
pub(crate) fn expect_under<G>(law: &DistributionSpec, g: G, breaks: &[f64], opts: &QuadOptions) -> Result<Integral>
where
    G: Fn(f64) -> f64,
{
    let sup = law.support();
    let mut points: Vec<f64> = Vec::with_capacity(8 + breaks.len() + sup.knots.len());
    for u in [0.01, 0.5, 0.99] {
        if let Ok(q) = law.quantile(u) {
            points.push(q);
        }
    }
    points.extend(breaks.iter().copied());
    points.extend(sup.knots.iter().copied());
    points.retain(|&x| sup.contains_interior(x));
    points.push(sup.left);
    points.push(sup.right);
    points.sort_by(f64::total_cmp);
    points.dedup();
    integrate_pieces(
        |x| {
            let q = law.density(x);
            if q == 0.0 {
                return 0.0;
            }
            let v = g(x) * q;
            // score overflow where the density has already underflowed
            if v.is_finite() {
                v
            } else {
                0.0
            }
        },
        &points,
        opts,
    )
}

fn check_candidate(dist: &DistributionSpec, candidate: &DistributionSpec) -> Result<()> {
    let (d, c) = (dist.support(), candidate.support());
    if c.left < d.left || c.right > d.right {
        return Err(Error::InvalidInput(format!(
            "candidate {} is not supported inside the support of {}",
            candidate.label(),
            dist.label()
        )));
    }
    Ok(())
}

/// The exact operator of `dist` evaluated at `t` under `dist`'s own law.
pub fn exact_t(dist: &DistributionSpec, kind: &OperatorKind, t: f64, quad_tol: f64) -> Result<f64> {
    exact_t_under(dist, kind, dist, t, quad_tol)
}

/// The operator built from `dist`'s score, with the expectation taken under
/// `candidate`. Equals `candidate.cdf(t)` for all `t` only when the two laws
/// coincide.
pub fn exact_t_under(
    dist: &DistributionSpec,
    kind: &OperatorKind,
    candidate: &DistributionSpec,
    t: f64,
    quad_tol: f64,
) -> Result<f64> {
    kind.validate_for(dist)?;
    check_candidate(dist, candidate)?;
    if !t.is_finite() {
        return Err(Error::domain("the operator argument (finite t)", t));
    }
    if !(quad_tol > 0.0) {
        return Err(Error::param("quad_tol", quad_tol, "must be positive"));
    }
    let opts = QuadOptions::absolute(quad_tol);
    let s = |x: f64| dist.score_interior(x);
    let value = match *kind {
        OperatorKind::RealLine => {
            expect_under(candidate, |x| if x <= t { s(x) * (t - x) } else { 0.0 }, &[t], &opts)?.value
        }
        OperatorKind::PositiveAxisMin | OperatorKind::LowerBoundedMin { .. } => {
            let l = kind.lower().unwrap_or(0.0);
            expect_under(candidate, |x| -s(x) * (x.min(t) - l), &[t], &opts)?.value
        }
        OperatorKind::BoundedRightLimit {
            lower, density_limit, ..
        } => {
            expect_under(candidate, |x| -s(x) * (x.min(t) - lower), &[t], &opts)?.value
                + (t - lower) * density_limit
        }
        OperatorKind::UpperBoundedMax { upper } => {
            1.0 - expect_under(candidate, |x| s(x) * (upper - x.max(t)), &[t], &opts)?.value
        }
        OperatorKind::BoundedLeftLimit {
            upper, density_limit, ..
        } => {
            1.0 - expect_under(candidate, |x| s(x) * (upper - x.max(t)), &[t], &opts)?.value
                - (upper - t) * density_limit
        }
    };
    Ok(value)
}

/// Quantiles of `dist` at levels `(i + 1/2) / n`.
pub fn residual_grid(dist: &DistributionSpec, n: usize) -> Result<Vec<f64>> {
    (0..n).map(|i| dist.quantile((i as f64 + 0.5) / n as f64)).collect()
}

/// `max_t |T(t) - F(t)|` over `grid`, with `T` evaluated under `dist`.
pub fn fixed_point_residual(dist: &DistributionSpec, kind: &OperatorKind, grid: &[f64]) -> Result<f64> {
    fixed_point_residual_under(dist, kind, dist, grid, DEFAULT_QUAD_TOL)
}

/// `max_t |T_dist(t) - F_candidate(t)|` with the operator's expectation
/// under `candidate`.
pub fn fixed_point_residual_under(
    dist: &DistributionSpec,
    kind: &OperatorKind,
    candidate: &DistributionSpec,
    grid: &[f64],
    quad_tol: f64,
) -> Result<f64> {
    let mut worst = 0.0f64;
    for &t in grid {
        let r = (exact_t_under(dist, kind, candidate, t, quad_tol)? - candidate.cdf(t)).abs();
        worst = worst.max(r);
    }
    Ok(worst)
}

/// The density-form identity at `t` under `dist`'s own law, with the
/// operator variant chosen from the support.
pub fn density_identity(dist: &DistributionSpec, t: f64) -> Result<f64> {
    let kind = OperatorKind::for_distribution(dist)?;
    density_identity_under(dist, &kind, dist, t, DEFAULT_QUAD_TOL)
}

/// `E[s(X) 1{X ≤ t}]` on the real line or an upper-bounded support,
/// `E[-s(X) 1{X > t}]` on a lower-bounded one, plus the endpoint density
/// limit for the bounded variants; `X ~ candidate`.
pub fn density_identity_under(
    dist: &DistributionSpec,
    kind: &OperatorKind,
    candidate: &DistributionSpec,
    t: f64,
    quad_tol: f64,
) -> Result<f64> {
    kind.validate_for(dist)?;
    check_candidate(dist, candidate)?;
    dist.check_interior("the density identity (support interior)", t)?;
    let opts = QuadOptions::absolute(quad_tol);
    let s = |x: f64| dist.score_interior(x);
    let below = |opts: &QuadOptions| expect_under(candidate, |x| if x <= t { s(x) } else { 0.0 }, &[t], opts);
    let above = |opts: &QuadOptions| expect_under(candidate, |x| if x > t { -s(x) } else { 0.0 }, &[t], opts);
    Ok(match *kind {
        OperatorKind::RealLine | OperatorKind::UpperBoundedMax { .. } => below(&opts)?.value,
        OperatorKind::PositiveAxisMin | OperatorKind::LowerBoundedMin { .. } => above(&opts)?.value,
        OperatorKind::BoundedRightLimit { density_limit, .. } => above(&opts)?.value + density_limit,
        OperatorKind::BoundedLeftLimit { density_limit, .. } => below(&opts)?.value + density_limit,
    })
}
