//! Fuzz target for rank-sequence validation and outcome scanning.
//!
//! The first two bytes are the thresholds, the rest are ranks.

#![no_main]

use duration_solver::simulate::{realized_outcome, RankSequence};
use duration_solver::PolicyThresholds;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if data.len() < 3 {
        return;
    }
    let ranks: Vec<u32> = data[2..].iter().map(|&b| b as u32).collect();
    let Ok(seq) = RankSequence::new(ranks) else {
        return;
    };
    let n = seq.n();
    let k1 = (data[0] as usize).min(n);
    let k2 = (data[1] as usize).min(n).max(k1);
    let Ok(policy) = PolicyThresholds::new(k1, k2) else {
        return;
    };
    let out = realized_outcome(&seq, policy);
    assert!((0.0..=1.0).contains(&out.normalized_payoff));
    match (out.stop, out.end_time) {
        (Some(stop), Some(end)) => {
            assert!(stop.time >= 1 && end > stop.time && end <= n + 1);
            assert!(policy.stops_at(stop.time, stop.rank));
        }
        (None, None) => assert_eq!(out.normalized_payoff, 0.0),
        _ => panic!("inconsistent outcome {out:?}"),
    }
});
