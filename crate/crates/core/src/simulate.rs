//! Monte Carlo and exhaustive evaluation of threshold rules.
//!
//! Relative ranks are independent with `Y_k` uniform on `1..=k`, so trials
//! draw rank sequences directly. Permutations are accepted as a cross-check
//! path through [`permutation_to_ranks`].
//!
//! Random streams: ChaCha8 from `rand_chacha` 0.9.0 (pinned). The key is
//! `ChaCha8Rng::seed_from_u64(seed)`; trial `t` uses stream number `t` of that
//! key, so every trial's draws are fixed by `(seed, t)` whatever the thread
//! schedule. Ranks are drawn with `Rng::random_range(1..=k)` from `rand` 0.9.5.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::exact::{CandidateState, Horizon, PolicyThresholds};

/// Largest horizon accepted by [`exhaustive_policy_value`].
pub const EXHAUSTIVE_MAX_N: usize = 10;

/// Relative ranks `y_1, ..., y_n` with `1 <= y_k <= k`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct RankSequence {
    ranks: Vec<u32>,
}

impl RankSequence {
    pub fn new(ranks: Vec<u32>) -> Result<Self> {
        if ranks.is_empty() {
            return domain("rank sequence must be non-empty");
        }
        for (idx, &y) in ranks.iter().enumerate() {
            if y < 1 || y as usize > idx + 1 {
                return domain(format!("relative rank {y} invalid at time {}", idx + 1));
            }
        }
        Ok(RankSequence { ranks })
    }

    pub fn n(&self) -> usize {
        self.ranks.len()
    }

    pub fn ranks(&self) -> &[u32] {
        &self.ranks
    }
}

/// Result of running a threshold rule on one rank sequence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrialOutcome {
    /// Where the rule stopped, if it did.
    pub stop: Option<CandidateState>,
    /// Time the selected item stopped being a candidate (`n + 1` if never).
    pub end_time: Option<usize>,
    /// `(end_time - stop_time) / n`, or 0 without a selection.
    pub normalized_payoff: f64,
}

/// Mean and standard error of a Monte Carlo run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub trials: u64,
    pub seed: u64,
}

/// Draws `y_k` uniformly from `1..=k` for each `k`.
pub fn generate_rank_sequence<R: Rng + ?Sized>(n: usize, rng: &mut R) -> RankSequence {
    let mut ranks = Vec::with_capacity(n);
    fill_ranks(&mut ranks, n, rng);
    RankSequence { ranks }
}

fn fill_ranks<R: Rng + ?Sized>(buf: &mut Vec<u32>, n: usize, rng: &mut R) {
    buf.clear();
    buf.extend((1..=n as u32).map(|k| rng.random_range(1..=k)));
}

/// Relative ranks of a permutation of `1..=n`: `y_k = #{i <= k : perm[i] <= perm[k]}`.
pub fn permutation_to_ranks(perm: &[usize]) -> Result<RankSequence> {
    let n = perm.len();
    if n == 0 {
        return domain("permutation must be non-empty");
    }
    let mut seen = vec![false; n + 1];
    for &x in perm {
        if x < 1 || x > n {
            return domain(format!("permutation entry {x} outside 1..={n}"));
        }
        if seen[x] {
            return domain(format!("duplicate permutation entry {x}"));
        }
        seen[x] = true;
    }
    // Fenwick tree over values: counts of smaller-or-equal values seen so far.
    let mut tree = vec![0u32; n + 1];
    let mut ranks = Vec::with_capacity(n);
    for &x in perm {
        let mut i = x;
        while i <= n {
            tree[i] += 1;
            i += i & i.wrapping_neg();
        }
        let mut count = 0;
        let mut i = x;
        while i > 0 {
            count += tree[i];
            i -= i & i.wrapping_neg();
        }
        ranks.push(count);
    }
    Ok(RankSequence { ranks })
}

/// Runs the threshold rule on a rank sequence.
///
/// A held second-best item stops being a candidate at the next arrival of
/// rank 1 or 2. A held best item first has to be overtaken by a new best and
/// then loses candidacy at the next arrival of rank 1 or 2 after that.
pub fn realized_outcome(seq: &RankSequence, policy: PolicyThresholds) -> TrialOutcome {
    outcome_of(&seq.ranks, policy)
}

fn outcome_of(ranks: &[u32], policy: PolicyThresholds) -> TrialOutcome {
    match stop_and_end(ranks, policy) {
        None => TrialOutcome { stop: None, end_time: None, normalized_payoff: 0.0 },
        Some((stop, rank, end)) => TrialOutcome {
            stop: Some(CandidateState { time: stop, rank }),
            end_time: Some(end),
            normalized_payoff: (end - stop) as f64 / ranks.len() as f64,
        },
    }
}

/// `(stop_time, stop_rank, end_time)` using 1-based times.
fn stop_and_end(ranks: &[u32], policy: PolicyThresholds) -> Option<(usize, usize, usize)> {
    let n = ranks.len();
    let (stop_idx, rank) = ranks
        .iter()
        .enumerate()
        .find(|&(idx, &y)| policy.stops_at(idx + 1, y as usize))
        .map(|(idx, &y)| (idx, y as usize))?;
    let mut from = stop_idx + 1;
    if rank == 1 {
        match ranks[from..].iter().position(|&y| y == 1) {
            Some(offset) => from += offset + 1,
            None => return Some((stop_idx + 1, rank, n + 1)),
        }
    }
    let end = ranks[from..]
        .iter()
        .position(|&y| y <= 2)
        .map_or(n + 1, |offset| from + offset + 1);
    Some((stop_idx + 1, rank, end))
}

fn trial_rng(base: &ChaCha8Rng, trial: u64) -> ChaCha8Rng {
    let mut rng = base.clone();
    rng.set_stream(trial);
    rng
}

/// Monte Carlo estimate of a rule's expected normalized duration.
///
/// Trials run on the current rayon pool. Per-trial payoffs are reduced in
/// trial order with compensated summation, so the estimate is bit-identical
/// for a given `(seed, trials)`.
pub fn monte_carlo(
    horizon: Horizon,
    policy: PolicyThresholds,
    trials: u64,
    seed: u64,
) -> Result<McEstimate> {
    if trials == 0 {
        return domain("monte_carlo requires at least one trial");
    }
    policy.check(horizon)?;
    let n = horizon.n();
    let base = ChaCha8Rng::seed_from_u64(seed);
    let payoffs: Vec<f64> = (0..trials)
        .into_par_iter()
        .map_init(
            || Vec::with_capacity(n),
            |buf, t| {
                let mut rng = trial_rng(&base, t);
                fill_ranks(buf, n, &mut rng);
                outcome_of(buf, policy).normalized_payoff
            },
        )
        .collect();

    let count = trials as f64;
    let mean = neumaier_sum(payoffs.iter().copied()) / count;
    let std_error = if trials > 1 {
        let ss = neumaier_sum(payoffs.iter().map(|&x| (x - mean) * (x - mean)));
        (ss / (count - 1.0)).sqrt() / count.sqrt()
    } else {
        0.0
    };
    Ok(McEstimate { mean, std_error, trials, seed })
}

fn neumaier_sum(values: impl Iterator<Item = f64>) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

/// Exact expected normalized duration by enumerating all `n!` rank
/// sequences, each with probability `1/n!`.
///
/// Durations are accumulated as integers, so the only rounding is the final
/// division.
pub fn exhaustive_policy_value(horizon: Horizon, policy: PolicyThresholds) -> Result<f64> {
    let n = horizon.n();
    if n > EXHAUSTIVE_MAX_N {
        return Err(Error::Size { n, max: EXHAUSTIVE_MAX_N });
    }
    policy.check(horizon)?;
    let mut ranks = vec![1u32; n];
    let mut total: u64 = 0;
    let mut count: u64 = 0;
    loop {
        if let Some((stop, _, end)) = stop_and_end(&ranks, policy) {
            total += (end - stop) as u64;
        }
        count += 1;
        // mixed-radix increment over y_2 .. y_n
        let mut idx = 1;
        loop {
            if idx == n {
                let denom = count as f64 * n as f64;
                return Ok(total as f64 / denom);
            }
            if ranks[idx] < idx as u32 + 1 {
                ranks[idx] += 1;
                break;
            }
            ranks[idx] = 1;
            idx += 1;
        }
    }
}
