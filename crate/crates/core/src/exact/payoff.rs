use serde::Serialize;

use super::Horizon;
use crate::error::{domain, Result};
use crate::special::harmonic_diff;

/// Distribution of the time `T_i` at which an item held from time `i` with
/// relative rank `rank` stops being a candidate. Mass at `n + 1` is the
/// probability that it stays a candidate through the last item.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DurationPmf {
    pub start: usize,
    pub rank: usize,
    pub n: usize,
    /// `mass[j]` is `P(T_i = start + 1 + j)`.
    mass: Vec<f64>,
}

impl DurationPmf {
    /// `P(T_i = k)`, zero outside `start+1..=n+1`.
    pub fn prob(&self, k: usize) -> f64 {
        if k <= self.start {
            return 0.0;
        }
        self.mass.get(k - self.start - 1).copied().unwrap_or(0.0)
    }

    /// `P(T_i = n + 1)`.
    pub fn survival(&self) -> f64 {
        *self.mass.last().expect("pmf always has a survival entry")
    }

    /// `(end_time, probability)` pairs, survival last.
    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        self.mass.iter().enumerate().map(move |(j, &p)| (self.start + 1 + j, p))
    }

    pub fn total(&self) -> f64 {
        self.mass.iter().rev().sum()
    }

    /// `E[(T_i - i) / n]`.
    pub fn expected_normalized_duration(&self) -> f64 {
        let steps: f64 = self
            .mass
            .iter()
            .enumerate()
            .rev()
            .map(|(j, &p)| (j + 1) as f64 * p)
            .sum();
        steps / self.n as f64
    }
}

/// Distribution of the candidacy end time for an item of relative rank
/// `rank` observed at time `i`.
pub fn duration_pmf(i: usize, rank: usize, horizon: Horizon) -> Result<DurationPmf> {
    let n = horizon.n();
    horizon.check_time(i)?;
    if !(1..=2).contains(&rank) || rank > i {
        return domain(format!("rank {rank} invalid at time {i}"));
    }
    let fi = i as f64;
    let nf = n as f64;
    let mut mass = Vec::with_capacity(n + 1 - i);
    for k in i + 1..=n {
        let kf = k as f64;
        let denom = (kf - 2.0) * (kf - 1.0) * kf;
        let p = match rank {
            2 => 2.0 * (fi - 1.0) * fi / denom,
            // the first step after a held best is never an end time
            _ if k == i + 1 => 0.0,
            _ => 2.0 * fi * (kf - fi - 1.0) / denom,
        };
        mass.push(p);
    }
    let survival = match rank {
        2 => fi * (fi - 1.0) / (nf * (nf - 1.0)),
        _ => (2.0 * nf * fi - fi * fi - fi) / (nf * (nf - 1.0)),
    };
    mass.push(survival);
    Ok(DurationPmf { start: i, rank, n, mass })
}

/// Expected normalized duration `phi(k, r)` of stopping on an item of
/// relative rank `r` at time `k`. Zero for non-candidate ranks.
pub fn payoff(k: usize, rank: usize, horizon: Horizon) -> Result<f64> {
    horizon.check_time(k)?;
    check_rank(k, rank)?;
    let n = horizon.n();
    let kf = k as f64;
    let nf = n as f64;
    Ok(match rank {
        1 => kf / (nf * nf) * (1.0 + kf - nf + 2.0 * nf * harmonic_diff(k, n)?),
        2 => kf * (nf - kf + 1.0) / (nf * nf),
        _ => 0.0,
    })
}

/// `phi(k, r)` as a direct expectation over [`duration_pmf`].
pub fn payoff_from_pmf(k: usize, rank: usize, horizon: Horizon) -> Result<f64> {
    horizon.check_time(k)?;
    check_rank(k, rank)?;
    if rank > 2 {
        return Ok(0.0);
    }
    Ok(duration_pmf(k, rank, horizon)?.expected_normalized_duration())
}

fn check_rank(k: usize, rank: usize) -> Result<()> {
    if rank < 1 || rank > k {
        return domain(format!("relative rank {rank} impossible at time {k}"));
    }
    Ok(())
}

/// `phi(k, 1)` and `phi(k, 2)` for every `k`, with the harmonic tails
/// accumulated in one backward pass. Index 0 is unused.
#[derive(Debug, Clone)]
pub(crate) struct PayoffTable {
    pub best: Vec<f64>,
    pub second: Vec<f64>,
}

impl PayoffTable {
    pub fn new(horizon: Horizon) -> Self {
        let n = horizon.n();
        let nf = n as f64;
        let mut best = vec![0.0; n + 1];
        let mut second = vec![0.0; n + 1];
        // tail = sum_{j=k}^{n-1} 1/j
        let mut tail = 0.0;
        for k in (1..=n).rev() {
            if k < n {
                tail += 1.0 / k as f64;
            }
            let kf = k as f64;
            best[k] = kf / (nf * nf) * (1.0 + kf - nf + 2.0 * nf * tail);
            second[k] = if k >= 2 { kf * (nf - kf + 1.0) / (nf * nf) } else { 0.0 };
        }
        PayoffTable { best, second }
    }
}
