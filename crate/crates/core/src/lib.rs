//! Exact solver, Monte Carlo simulator and asymptotic analyzer for the
//! duration ("shelf life") variant of the no-information secretary problem.
//!
//! Items arrive in random order and only their relative ranks are observed.
//! A relatively best or relatively second-best item is a *candidate*. After
//! selecting a candidate we are paid, per step, for as long as it stays a
//! candidate; the goal is to maximize the expected normalized possession time.
//! The optimal rule has two thresholds `(k1, k2)`: take a relatively best item
//! strictly after `k1` and a relatively second-best item strictly after `k2`.
//!
//! Modules:
//! - [`special`]: harmonic and trigamma differences, Lambert W.
//! - [`exact`]: duration distributions, payoffs, embedded-chain transitions,
//!   backward induction and closed forms.
//! - [`simulate`]: rank-sequence simulation, exhaustive enumeration and
//!   Monte Carlo policy evaluation.
//! - [`asymptotic`]: infinite-horizon limits and the constants `a`, `b`, `v`.
//! - [`cli`]: command implementations behind the `duration-solver` binary.

pub mod asymptotic;
pub mod cli;
mod error;
pub mod exact;
pub mod simulate;
pub mod special;

pub use error::{Error, Result};
pub use exact::{
    closed_form_value, duration_pmf, mean_operator, mean_operator_direct, payoff,
    payoff_from_pmf, policy_value, solve, transition_prob, CandidateState, DurationPmf, Epoch,
    Horizon, PolicyThresholds, SolveResult,
};
