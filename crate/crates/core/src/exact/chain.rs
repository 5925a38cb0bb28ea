//! The embedded chain observed only at candidate epochs.
//!
//! From a candidate at time `k >= 2` the next candidate arrives at `s > k`
//! with either rank, each with probability `k(k-1) / (s(s-1)(s-2))`. With
//! probability `k(k-1) / (n(n-1))` no further candidate arrives.

use super::{Horizon, PayoffTable};
use crate::error::{domain, Result};
use crate::special::harmonic_diff;

/// Target of one chain step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Epoch {
    /// Next candidate at this time (the probability is per rank).
    At(usize),
    /// No further candidate before the horizon.
    Absorbed,
}

/// One-step transition probability of the embedded chain from a candidate
/// at time `k`.
pub fn transition_prob(k: usize, next: Epoch, horizon: Horizon) -> Result<f64> {
    let n = horizon.n();
    if k < 2 || k > n {
        return domain(format!("transition_prob requires 2 <= k <= {n}, got k={k}"));
    }
    let kf = k as f64;
    match next {
        Epoch::At(s) => {
            if s <= k || s > n {
                return domain(format!("transition_prob requires {k} < s <= {n}, got s={s}"));
            }
            let sf = s as f64;
            Ok(kf * (kf - 1.0) / (sf * (sf - 1.0) * (sf - 2.0)))
        }
        Epoch::Absorbed => {
            let nf = n as f64;
            Ok(kf * (kf - 1.0) / (nf * (nf - 1.0)))
        }
    }
}

/// Expected payoff collected by stopping at the next candidate after time
/// `k`: `(2k/N^2) (k - N + N (psi(N) - psi(k)))`.
///
/// The value does not depend on the current rank. The same expression holds
/// at `k = 1`, where the next epoch is time 2 with certainty.
pub fn mean_operator(k: usize, horizon: Horizon) -> Result<f64> {
    horizon.check_time(k)?;
    let n = horizon.n();
    let kf = k as f64;
    let nf = n as f64;
    Ok(2.0 * kf / (nf * nf) * (kf - nf + nf * harmonic_diff(k, n)?))
}

/// [`mean_operator`] by summing transition probabilities against payoffs.
pub fn mean_operator_direct(k: usize, horizon: Horizon) -> Result<f64> {
    let n = horizon.n();
    if k < 2 || k > n {
        return domain(format!("mean_operator_direct requires 2 <= k <= {n}, got k={k}"));
    }
    let table = PayoffTable::new(horizon);
    let mut acc = 0.0;
    for s in (k + 1..=n).rev() {
        acc += transition_prob(k, Epoch::At(s), horizon)? * (table.best[s] + table.second[s]);
    }
    Ok(acc)
}
