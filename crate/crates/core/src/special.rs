//! Special functions needed by the payoff and threshold formulas.
//!
//! Digamma and trigamma only ever appear as differences at integer
//! arguments, so they are evaluated as finite sums:
//!
//! - `psi(n) - psi(k) = sum_{j=k}^{n-1} 1/j`
//! - `psi_1(s+1) - psi_1(k+1) = -sum_{j=k+1}^{s} 1/j^2`
//!
//! Sums run from the largest index down so the smallest terms are added first.

use std::f64::consts::E;

use crate::error::{domain, Result};

/// `psi(n) - psi(k)` for integers `1 <= k <= n`.
pub fn harmonic_diff(k: usize, n: usize) -> Result<f64> {
    if k < 1 || k > n {
        return domain(format!("harmonic_diff requires 1 <= k <= n, got k={k}, n={n}"));
    }
    Ok((k..n).rev().map(|j| 1.0 / j as f64).sum())
}

/// `psi_1(s+1) - psi_1(k+1)` for integers `1 <= k <= s`. Always `<= 0`.
pub fn trigamma_diff(k: usize, s: usize) -> Result<f64> {
    if k < 1 || k > s {
        return domain(format!("trigamma_diff requires 1 <= k <= s, got k={k}, s={s}"));
    }
    let sum: f64 = (k + 1..=s)
        .rev()
        .map(|j| {
            let j = j as f64;
            1.0 / (j * j)
        })
        .sum();
    Ok(-sum)
}

const MAX_HALLEY_ITERATIONS: usize = 50;

/// Principal branch `W0(z)` of the Lambert W function, `z >= -1/e`.
///
/// Halley iteration on `f(w) = w e^w - z`. Starting points: `z` itself near
/// the origin, the branch-point series `-1 + p - p^2/3` with
/// `p = sqrt(2(ez + 1))` close to `-1/e`, and `ln(1+z)` (less `ln ln` for
/// large `z`) elsewhere.
pub fn lambert_w0(z: f64) -> Result<f64> {
    let branch = -1.0 / E;
    if !z.is_finite() {
        return domain(format!("lambert_w0 requires a finite argument, got {z}"));
    }
    if z < branch {
        // -1/e is not exactly representable; allow for the rounding of the
        // caller's own evaluation of the branch point.
        if z >= branch - 4.0 * f64::EPSILON {
            return Ok(-1.0);
        }
        return domain(format!("lambert_w0 requires z >= -1/e, got {z}"));
    }
    if z == 0.0 {
        return Ok(0.0);
    }

    let mut w = if z.abs() < 0.3 {
        z
    } else if z < -0.25 {
        let p = (2.0 * (E * z + 1.0)).max(0.0).sqrt();
        -1.0 + p - p * p / 3.0
    } else if z < 3.0 {
        (1.0 + z).ln()
    } else {
        let l = z.ln();
        l - l.ln()
    };

    let tol = 1e-15 * z.abs().max(1.0);
    for _ in 0..MAX_HALLEY_ITERATIONS {
        let ew = w.exp();
        let f = w * ew - z;
        if f.abs() < tol {
            break;
        }
        let wp1 = w + 1.0;
        if wp1.abs() < 1e-300 {
            break;
        }
        let step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1));
        let next = w - step;
        if !next.is_finite() {
            break;
        }
        if (next - w).abs() <= f64::EPSILON * next.abs() {
            w = next;
            break;
        }
        w = next;
    }
    Ok(w.max(-1.0))
}
