//! IO and CLI companion to `wedgehit-core`: parallel Monte Carlo
//! drivers, the named verification suites, run configuration and the
//! CSV/JSON output formats.

pub mod checks;
pub mod config;
pub mod output;
pub mod parallel;
