//! Config-driven experiment runner for the nctorus verification suite.
//!
//! [`config`] defines the TOML run specification, [`runner`] executes it
//! into the JSON report of [`report`], and the `nctorus` binary wraps the
//! two commands `run` and `dump-spectrum`.

pub mod config;
pub mod report;
pub mod runner;
