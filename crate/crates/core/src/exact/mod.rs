//! Finite-horizon machinery: duration distributions, payoffs, the embedded
//! candidate chain, backward induction and closed-form threshold values.

mod chain;
mod payoff;
mod solver;

pub use chain::{mean_operator, mean_operator_direct, transition_prob, Epoch};
pub use payoff::{duration_pmf, payoff, payoff_from_pmf, DurationPmf};
pub(crate) use payoff::PayoffTable;
pub use solver::{closed_form_value, policy_value, solve, SolveResult};

use serde::Serialize;

use crate::error::{domain, Result};

/// Number of items `N`, at least 2.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct Horizon(usize);

impl Horizon {
    pub fn new(n: usize) -> Result<Self> {
        if n < 2 {
            return domain(format!("horizon must be at least 2, got {n}"));
        }
        Ok(Horizon(n))
    }

    #[inline]
    pub fn n(self) -> usize {
        self.0
    }

    pub(crate) fn check_time(self, k: usize) -> Result<()> {
        if k < 1 || k > self.0 {
            return domain(format!("time {k} outside 1..={}", self.0));
        }
        Ok(())
    }
}

/// A candidate observed at `time` with relative rank `rank` (1 or 2).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CandidateState {
    pub time: usize,
    pub rank: usize,
}

impl CandidateState {
    pub fn new(time: usize, rank: usize) -> Result<Self> {
        if !(1..=2).contains(&rank) {
            return domain(format!("candidate rank must be 1 or 2, got {rank}"));
        }
        if time < rank {
            return domain(format!("relative rank {rank} impossible at time {time}"));
        }
        Ok(CandidateState { time, rank })
    }
}

/// Two-threshold stopping rule: stop on a relatively best item at time `k`
/// iff `k > k1`, on a relatively second-best item iff `k > k2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PolicyThresholds {
    pub k1: usize,
    pub k2: usize,
}

impl PolicyThresholds {
    pub fn new(k1: usize, k2: usize) -> Result<Self> {
        if k1 > k2 {
            return domain(format!("thresholds must satisfy k1 <= k2, got ({k1}, {k2})"));
        }
        Ok(PolicyThresholds { k1, k2 })
    }

    pub fn check(self, horizon: Horizon) -> Result<()> {
        if self.k1 > self.k2 || self.k2 > horizon.n() {
            return domain(format!(
                "thresholds ({}, {}) violate 0 <= k1 <= k2 <= {}",
                self.k1,
                self.k2,
                horizon.n()
            ));
        }
        Ok(())
    }

    /// Whether the rule stops at time `k` on an item of relative rank `rank`.
    #[inline]
    pub fn stops_at(self, k: usize, rank: usize) -> bool {
        match rank {
            1 => k > self.k1,
            2 => k > self.k2,
            _ => false,
        }
    }

    /// All pairs `0 <= k1 <= k2 <= n`.
    pub fn all(horizon: Horizon) -> impl Iterator<Item = PolicyThresholds> {
        let n = horizon.n();
        (0..=n).flat_map(move |k2| (0..=k2).map(move |k1| PolicyThresholds { k1, k2 }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn horizon_bounds() {
        assert!(Horizon::new(1).is_err());
        assert_eq!(Horizon::new(2).unwrap().n(), 2);
    }

    #[test]
    fn candidate_state_invariants() {
        assert!(CandidateState::new(1, 2).is_err());
        assert!(CandidateState::new(3, 3).is_err());
        assert!(CandidateState::new(2, 2).is_ok());
    }

    #[test]
    fn thresholds() {
        assert!(PolicyThresholds::new(3, 2).is_err());
        let h = Horizon::new(5).unwrap();
        assert!(PolicyThresholds::new(2, 6).unwrap().check(h).is_err());
        let p = PolicyThresholds::new(1, 4).unwrap();
        assert!(!p.stops_at(1, 1));
        assert!(p.stops_at(2, 1));
        assert!(!p.stops_at(4, 2));
        assert!(p.stops_at(5, 2));
        assert!(!p.stops_at(5, 3));
        assert_eq!(PolicyThresholds::all(h).count(), 21);
    }
}
