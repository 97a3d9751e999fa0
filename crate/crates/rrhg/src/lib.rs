//! Experiment drivers, statistics and output formats for the `rrhg` tool.

pub mod cli;
pub mod experiments;
pub mod report;
pub mod stats;
