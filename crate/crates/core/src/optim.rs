//! One-dimensional bounded minimization (Brent's method).

/// Outcome of a bounded scalar minimization.
#[derive(Debug, Clone, Copy)]
pub struct MinResult {
    /// Argmin found.
    pub x: f64,
    /// Objective value at `x`.
    pub fx: f64,
    /// Iterations used.
    pub iters: usize,
    /// False when the iteration budget ran out or the minimum sits on a
    /// bound of the search interval.
    pub converged: bool,
}

const GOLDEN: f64 = 0.381_966_011_250_105_1; // 2 - golden ratio
const SQRT_EPS: f64 = 1.490_116_119_384_765_6e-8;

/// Minimize `f` on `[lo, hi]` to absolute x-tolerance `tol`.
///
/// `x0`, when inside the interval, is used as the starting point; otherwise
/// the golden-section point is used. The minimum is never evaluated exactly
/// on a bound; a solution within `2 tol` of a bound reports `converged =
/// false` so callers can flag boundary estimates.
pub fn brent_min<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    x0: Option<f64>,
    tol: f64,
    max_iter: usize,
) -> MinResult {
    debug_assert!(lo < hi);
    let mut a = lo;
    let mut b = hi;
    let mut x = match x0 {
        Some(g) if g > lo && g < hi => g,
        _ => a + GOLDEN * (b - a),
    };
    let mut w = x;
    let mut v = x;
    let mut fx = f(x);
    let mut fw = fx;
    let mut fv = fx;
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for iter in 0..max_iter {
        let xm = 0.5 * (a + b);
        let tol1 = tol * x.abs() + SQRT_EPS * 1e-3 + tol;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            let on_bound = x - lo <= tol2 || hi - x <= tol2;
            return MinResult {
                x,
                fx,
                iters: iter,
                converged: !on_bound,
            };
        }
        let mut use_golden = true;
        if e.abs() > tol1 {
            // parabola through (v, fv), (w, fw), (x, fx)
            let r = (x - w) * (fx - fv);
            let q0 = (x - v) * (fx - fw);
            let mut p = (x - v) * q0 - (x - w) * r;
            let mut q = 2.0 * (q0 - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            let e_prev = e;
            e = d;
            if p.abs() < (0.5 * q * e_prev).abs() && p > q * (a - x) && p < q * (b - x) {
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if xm > x { tol1 } else { -tol1 };
                }
                use_golden = false;
            }
        }
        if use_golden {
            e = if x < xm { b - x } else { a - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else if d > 0.0 {
            x + tol1
        } else {
            x - tol1
        };
        let fu = f(u);
        if fu <= fx {
            if u < x {
                b = x;
            } else {
                a = x;
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
    MinResult {
        x,
        fx,
        iters: max_iter,
        converged: false,
    }
}
