use super::{CandidateState, Horizon, PayoffTable, PolicyThresholds};
use crate::error::{domain, Result};
use crate::special::{harmonic_diff, trigamma_diff};

/// Output of backward induction.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub horizon: Horizon,
    pub thresholds: PolicyThresholds,
    /// Optimal normalized value `v_N`.
    pub value: f64,
    /// `w(k, 1)` at index `k - 1`.
    best_values: Vec<f64>,
    /// `w(k, 2)` at index `k - 1`, `None` at `k = 1`.
    second_values: Vec<Option<f64>>,
    /// `w~(k) = E w(k, Y_k)` at index `k - 1`.
    continuation: Vec<f64>,
}

impl SolveResult {
    /// `w~(k)`, the optimal value from time `k` on before `Y_k` is seen.
    /// `continuation(n + 1)` is 0.
    pub fn continuation(&self, k: usize) -> f64 {
        if k == self.continuation.len() + 1 {
            return 0.0;
        }
        self.continuation[k - 1]
    }

    pub fn continuation_table(&self) -> &[f64] {
        &self.continuation
    }

    /// `w(k, r) = max(phi(k, r), w~(k + 1))` for a candidate state.
    pub fn state_value(&self, state: CandidateState) -> Option<f64> {
        if state.time > self.continuation.len() {
            return None;
        }
        match state.rank {
            1 => Some(self.best_values[state.time - 1]),
            _ => self.second_values[state.time - 1],
        }
    }
}

/// Backward induction over time and relative rank.
///
/// `w~(n+1) = 0`; for `k = n, ..., 1`:
/// `w(k, r) = max(phi(k, r), w~(k+1))` for the candidate ranks possible at
/// `k`, non-candidates continue, and `w~(k)` averages over the `k` equally
/// likely ranks. Ties stop.
pub fn solve(horizon: Horizon) -> SolveResult {
    let n = horizon.n();
    let table = PayoffTable::new(horizon);
    let mut best_values = vec![0.0; n];
    let mut second_values = vec![None; n];
    let mut continuation = vec![0.0; n];
    let mut k1 = 0;
    let mut k2 = 0;
    let mut next = 0.0;
    for k in (1..=n).rev() {
        let w1 = if table.best[k] < next {
            k1 = k1.max(k);
            next
        } else {
            table.best[k]
        };
        let mut sum = w1;
        let mut candidates = 1;
        best_values[k - 1] = w1;
        if k >= 2 {
            let w2 = if table.second[k] < next {
                k2 = k2.max(k);
                next
            } else {
                table.second[k]
            };
            sum += w2;
            candidates = 2;
            second_values[k - 1] = Some(w2);
        }
        sum += (k - candidates) as f64 * next;
        next = sum / k as f64;
        continuation[k - 1] = next;
    }
    // k2 in {0, 1} both mean "always stop on rank 2"
    let k2 = k2.max(k1);
    SolveResult {
        horizon,
        thresholds: PolicyThresholds { k1, k2 },
        value: continuation[0],
        best_values,
        second_values,
        continuation,
    }
}

/// Exact expected normalized duration of a threshold rule, by the same
/// backward recursion with the decisions forced.
pub fn policy_value(policy: PolicyThresholds, horizon: Horizon) -> Result<f64> {
    policy.check(horizon)?;
    let n = horizon.n();
    let table = PayoffTable::new(horizon);
    let mut next = 0.0;
    for k in (1..=n).rev() {
        let mut sum = if policy.stops_at(k, 1) { table.best[k] } else { next };
        let mut candidates = 1;
        if k >= 2 {
            sum += if policy.stops_at(k, 2) { table.second[k] } else { next };
            candidates = 2;
        }
        sum += (k - candidates) as f64 * next;
        next = sum / k as f64;
    }
    Ok(next)
}

/// Value of passing time `k1` and then following the thresholds `(k1, k2)`:
/// stop on the first relatively best item in `(k1, k2]`, otherwise on the
/// first candidate after `k2`.
///
/// With `H(a, b) = psi(b) - psi(a)` and `S = psi_1(k1) - psi_1(k2)`:
///
/// ```text
/// v = k1/N^2 [ 3 k2 - k1 - 2N + (2 - N) H(k1, k2)
///              + N (H(k1, N)^2 - H(k2, N)^2 - S) + 2N H(k2, N) ]
/// ```
///
/// At the optimal thresholds this is the problem value.
pub fn closed_form_value(k1: usize, k2: usize, horizon: Horizon) -> Result<f64> {
    let n = horizon.n();
    if k1 < 1 || k1 >= k2 || k2 > n {
        return domain(format!("closed_form_value requires 1 <= k1 < k2 <= {n}, got ({k1}, {k2})"));
    }
    let k = k1 as f64;
    let s = k2 as f64;
    let nf = n as f64;
    let h_ks = harmonic_diff(k1, k2)?;
    let h_kn = harmonic_diff(k1, n)?;
    let h_sn = harmonic_diff(k2, n)?;
    let inv_sq = 1.0 / (k * k) - trigamma_diff(k1, k2 - 1)?;
    let bracket = 3.0 * s - k - 2.0 * nf
        + (2.0 - nf) * h_ks
        + nf * ((h_kn - h_sn) * (h_kn + h_sn) - inv_sq)
        + 2.0 * nf * h_sn;
    Ok(k / (nf * nf) * bracket)
}
