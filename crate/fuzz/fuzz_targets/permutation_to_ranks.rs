//! Fuzz target for decoding a permutation into relative ranks.
//!
//! Input bytes are read as little-endian u16 entries.

#![no_main]

use duration_solver::simulate::{permutation_to_ranks, RankSequence};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let perm: Vec<usize> = data
        .chunks_exact(2)
        .map(|c| u16::from_le_bytes([c[0], c[1]]) as usize)
        .collect();
    if let Ok(seq) = permutation_to_ranks(&perm) {
        // every decoded sequence must pass the rank-sequence validator
        let again = RankSequence::new(seq.ranks().to_vec()).expect("valid ranks");
        assert_eq!(again.n(), perm.len());
        // y_k counts items no larger than item k among the first k
        for (k, &y) in seq.ranks().iter().enumerate() {
            let count = perm[..=k].iter().filter(|&&x| x <= perm[k]).count();
            assert_eq!(y as usize, count);
        }
    }
});
