//! Small scalar and 2-d solvers used by the M-steps and the moment initializer.

use crate::error::{Error, Result};

/// Root of `g` in [lo, hi] given g(lo) and g(hi) of opposite sign, by bisection
/// to a relative width of `rel_tol`.
pub(crate) fn bisect(
    g: impl Fn(f64) -> f64,
    mut lo: f64,
    mut hi: f64,
    rel_tol: f64,
) -> Result<f64> {
    let mut glo = g(lo);
    let ghi = g(hi);
    if !(glo * ghi <= 0.0) {
        return Err(Error::BracketFailure { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if hi - lo <= rel_tol * mid.abs() || mid == lo || mid == hi {
            return Ok(mid);
        }
        let gm = g(mid);
        if gm == 0.0 {
            return Ok(mid);
        }
        if (gm < 0.0) == (glo < 0.0) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Brent's parabolic/golden-section search for the maximum of `f` on [a, b].
pub(crate) fn brent_max(f: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const CGOLD: f64 = 0.381_966_011_250_105_1;
    let neg = |x: f64| {
        let v = -f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    let mut x = a + CGOLD * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = neg(x);
    let (mut fw, mut fv) = (fx, fx);
    let (mut d, mut e): (f64, f64) = (0.0, 0.0);
    for _ in 0..200 {
        let xm = 0.5 * (a + b);
        let tol1 = tol * x.abs() + 1e-300;
        let tol2 = 2.0 * tol1;
        if (x - xm).abs() <= tol2 - 0.5 * (b - a) {
            break;
        }
        let mut golden = true;
        if e.abs() > tol1 {
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = tol1.copysign(xm - x);
                }
                golden = false;
            }
        }
        if golden {
            e = if x >= xm { a - x } else { b - x };
            d = CGOLD * e;
        }
        let u = if d.abs() >= tol1 {
            x + d
        } else {
            x + tol1.copysign(d)
        };
        let fu = neg(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            (v, fv) = (w, fw);
            (w, fw) = (x, fx);
            (x, fx) = (u, fu);
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                (v, fv) = (w, fw);
                (w, fw) = (u, fu);
            } else if fu <= fv || v == x || v == w {
                (v, fv) = (u, fu);
            }
        }
    }
    (x, -fx)
}

/// Maximize `f` over a grid of `n` points spanning [lo, hi], then refine
/// between the neighbours of the best grid point. Returns (argmax, max).
pub(crate) fn grid_then_brent(
    f: impl Fn(f64) -> f64,
    lo: f64,
    hi: f64,
    n: usize,
    tol: f64,
) -> Result<(f64, f64)> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::BracketFailure { lo, hi });
    }
    let grid: Vec<f64> = (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect();
    let vals: Vec<f64> = grid.iter().map(|&x| f(x)).collect();
    let (k, &best) = vals
        .iter()
        .enumerate()
        .filter(|(_, v)| v.is_finite())
        .max_by(|a, b| a.1.total_cmp(b.1))
        .ok_or(Error::BracketFailure { lo, hi })?;
    let a = grid[k.saturating_sub(1)];
    let b = grid[(k + 1).min(n - 1)];
    let (x, fx) = brent_max(&f, a, b, tol);
    Ok(if fx >= best { (x, fx) } else { (grid[k], best) })
}

/// Levenberg–Marquardt for two residuals in two unknowns with a
/// forward-difference Jacobian. Returns the solution and its residual norm.
pub(crate) fn levenberg_marquardt2(
    r: impl Fn([f64; 2]) -> Option<[f64; 2]>,
    start: [f64; 2],
    max_iter: usize,
) -> Option<([f64; 2], f64)> {
    let norm = |v: [f64; 2]| (v[0] * v[0] + v[1] * v[1]).sqrt();
    let mut x = start;
    let mut rx = r(x)?;
    let mut lambda = 1e-3;
    for _ in 0..max_iter {
        if norm(rx) < 1e-12 {
            break;
        }
        let mut jac = [[0.0; 2]; 2];
        for j in 0..2 {
            let h = 1e-7 * x[j].abs().max(1.0);
            let mut xp = x;
            xp[j] += h;
            let rp = r(xp)?;
            jac[0][j] = (rp[0] - rx[0]) / h;
            jac[1][j] = (rp[1] - rx[1]) / h;
        }
        // (JᵀJ + λ diag) step = -Jᵀr
        let a11 = jac[0][0] * jac[0][0] + jac[1][0] * jac[1][0];
        let a22 = jac[0][1] * jac[0][1] + jac[1][1] * jac[1][1];
        let a12 = jac[0][0] * jac[0][1] + jac[1][0] * jac[1][1];
        let g1 = jac[0][0] * rx[0] + jac[1][0] * rx[1];
        let g2 = jac[0][1] * rx[0] + jac[1][1] * rx[1];
        let mut improved = false;
        for _ in 0..30 {
            let (m11, m22) = (a11 * (1.0 + lambda) + 1e-300, a22 * (1.0 + lambda) + 1e-300);
            let det = m11 * m22 - a12 * a12;
            if det == 0.0 || !det.is_finite() {
                lambda *= 10.0;
                continue;
            }
            let s1 = -(m22 * g1 - a12 * g2) / det;
            let s2 = -(m11 * g2 - a12 * g1) / det;
            let xn = [x[0] + s1, x[1] + s2];
            if let Some(rn) = r(xn) {
                if norm(rn) < norm(rx) {
                    x = xn;
                    rx = rn;
                    lambda = (lambda * 0.3).max(1e-12);
                    improved = true;
                    break;
                }
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    Some((x, norm(rx)))
}
