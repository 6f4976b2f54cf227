//! Scenario runner and report emitter for the `defcoh` command.

pub mod commands;
pub mod params;
pub mod report;
pub mod scenarios;

pub use params::{Echo, HDesc, Params, QDesc};
pub use report::{Check, Format, Report, Verdict};
pub use scenarios::{run, SCENARIOS};
