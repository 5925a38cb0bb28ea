//! Limits as the number of items grows, with time rescaled to `x = k/N`.
//!
//! - payoffs: `phi(x,1) = x^2 - 2x ln x - x`, `phi(x,2) = x(1-x)`
//! - stopping at the next candidate: `T phi(x) = 2(x^2 - x - x ln x)`
//! - `b` solves `T phi(b) = phi(b,2)`, i.e. `b = -(2/3) W0(-(3/2) e^{-3/2})`
//! - between the thresholds only a relatively best item is taken, and the
//!   first best after `x` arrives with density `x/t^2`, so the value of
//!   passing `x <= b` is
//!   `v(x) = int_x^b (x/t^2) phi(t,1) dt + (x/b) T phi(b)`
//! - `a` solves `v(a) = phi(a,1)` on `(0, b)` and the limit value is `v(a)`.

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::special::lambert_w0;

/// The limit thresholds `a < b` (as fractions of `N`) and value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AsymptoticSolution {
    pub a: f64,
    pub b: f64,
    pub value: f64,
}

/// Limit of `phi([Nx], r)`.
pub fn phi_limit(x: f64, rank: usize) -> Result<f64> {
    check_unit(x)?;
    match rank {
        1 => Ok(x * x - 2.0 * x * x.ln() - x),
        2 => Ok(x * (1.0 - x)),
        _ => domain(format!("phi_limit requires rank 1 or 2, got {rank}")),
    }
}

/// Limit of the one-step mean operator at `x`.
pub fn mean_operator_limit(x: f64) -> Result<f64> {
    check_unit(x)?;
    Ok(2.0 * (x * x - x - x * x.ln()))
}

fn check_unit(x: f64) -> Result<()> {
    if !(x > 0.0 && x <= 1.0) {
        return domain(format!("argument must lie in (0, 1], got {x}"));
    }
    Ok(())
}

/// Limit of `k2*/N` through the Lambert W function.
pub fn solve_b() -> f64 {
    let z = -1.5 * (-1.5f64).exp();
    -2.0 / 3.0 * lambert_w0(z).expect("-(3/2)e^(-3/2) lies above the branch point")
}

/// `v(x)` for `0 < x <= b`, using the antiderivative
/// `x (t - ln^2 t - ln t)` of `(x/t^2) phi(t, 1)`.
pub fn limit_value_function(x: f64, b: f64) -> Result<f64> {
    if !(x > 0.0 && x <= b) || b > 1.0 {
        return domain(format!("limit_value_function requires 0 < x <= b <= 1, got x={x}, b={b}"));
    }
    let primitive = |t: f64| {
        let l = t.ln();
        t - l * l - l
    };
    Ok(x * (primitive(b) - primitive(x)) + x / b * mean_operator_limit(b)?)
}

/// Limit of `k1*/N`: root of `v(x) - phi(x, 1)` on `[1e-4, b - 1e-4]`.
pub fn solve_a(b: f64) -> Result<f64> {
    let gap = |x: f64| -> f64 {
        limit_value_function(x, b).unwrap_or(f64::NAN) - phi_limit(x, 1).unwrap_or(f64::NAN)
    };
    brent(gap, 1e-4, b - 1e-4, 1e-12, 200)
}

/// Limit of `v_N`.
pub fn asymptotic_value() -> Result<f64> {
    Ok(solve()?.value)
}

pub fn solve() -> Result<AsymptoticSolution> {
    let b = solve_b();
    let a = solve_a(b)?;
    let value = limit_value_function(a, b)?;
    Ok(AsymptoticSolution { a, b, value })
}

/// `|T phi(b) - phi(b, 2)|`.
pub fn residual_b(b: f64) -> Result<f64> {
    Ok((mean_operator_limit(b)? - phi_limit(b, 2)?).abs())
}

/// `|v(a) - phi(a, 1)|`.
pub fn residual_a(a: f64, b: f64) -> Result<f64> {
    Ok((limit_value_function(a, b)? - phi_limit(a, 1)?).abs())
}

/// Brent's method on a bracketing interval.
pub(crate) fn brent<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    xtol: f64,
    max_iter: usize,
) -> Result<f64> {
    let (mut a, mut b) = (lo, hi);
    let (mut fa, mut fb) = (f(a), f(b));
    if !(fa.is_finite() && fb.is_finite()) {
        return Err(Error::Numeric(format!("non-finite value at bracket [{lo}, {hi}]")));
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if fa.signum() == fb.signum() {
        return Err(Error::Numeric(format!("no sign change on [{lo}, {hi}]")));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for _ in 0..max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb == 0.0 {
            return Ok(b);
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q) = if a == c {
                (2.0 * m * s, 1.0 - s)
            } else {
                let q = fa / fc;
                let r = fb / fc;
                (
                    s * (2.0 * m * q * (q - r) - (b - a) * (r - 1.0)),
                    (q - 1.0) * (r - 1.0) * (s - 1.0),
                )
            };
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b);
        if !fb.is_finite() {
            return Err(Error::Numeric(format!("non-finite value at {b}")));
        }
    }
    Err(Error::Numeric(format!("Brent did not converge in {max_iter} iterations")))
}
