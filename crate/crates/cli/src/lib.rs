//! Text format and benchmark harness behind the `vpa` binary.

pub mod bench;
pub mod format;

/// Default cap on stored rules and P-automaton transitions, roughly 750MB.
pub const DEFAULT_MAX_SPACE: u64 = 40_000_000;
