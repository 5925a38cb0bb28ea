//! Fuzz target for command-line parsing.
//!
//! Input is split on NUL bytes into arguments. Only parsing is exercised;
//! commands are not run.

#![no_main]

use clap::Parser;
use duration_solver::cli::Cli;
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(input) = std::str::from_utf8(data) else {
        return;
    };
    if input.len() > 512 {
        return;
    }
    let args = std::iter::once("duration-solver").chain(input.split('\0'));
    let _ = Cli::try_parse_from(args);
});
