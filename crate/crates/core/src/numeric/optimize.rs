#[allow(unused_imports)]
use num_traits::Float;

/// Result of a one-dimensional minimization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
    /// Final bracket width.
    pub bracket_width: f64,
    pub converged: bool,
}

/// Brent's method (golden section with parabolic steps) on `[lo, hi]`.
///
/// `x_tol` is an absolute tolerance on the abscissa.
pub fn brent_minimize<F>(mut f: F, lo: f64, hi: f64, x_tol: f64, max_iter: usize) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    const GOLDEN: f64 = 0.381_966_011_250_105_1;
    let (mut a, mut b) = if lo < hi { (lo, hi) } else { (hi, lo) };
    let mut x = a + GOLDEN * (b - a);
    let mut w = x;
    let mut v = x;
    let mut fx = f(x);
    let mut fw = fx;
    let mut fv = fx;
    let mut evaluations = 1;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for _ in 0..max_iter {
        let m = 0.5 * (a + b);
        let tol1 = x_tol + f64::EPSILON.sqrt() * 1e-3 * x.abs();
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            return Minimum {
                x,
                value: fx,
                evaluations,
                bracket_width: b - a,
                converged: true,
            };
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            } else {
                q = -q;
            }
            let e_prev = e;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(m - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= m { a - x } else { b - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else {
            x + tol1.copysign(d)
        };
        let fu = f(u);
        evaluations += 1;
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Minimum {
        x,
        value: fx,
        evaluations,
        bracket_width: b - a,
        converged: false,
    }
}
