//! Fuzz target for the `--ns` horizon list parser.

#![no_main]

use duration_solver::cli::{parse_ns_list, MAX_CLI_N};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    if let Ok(input) = std::str::from_utf8(data) {
        if let Ok(ns) = parse_ns_list(input) {
            assert!(!ns.is_empty());
            assert!(ns.iter().all(|&n| (2..=MAX_CLI_N).contains(&n)));
        }
    }
});
