//! Command-line surface, input parsing and report emission for the exact
//! toric-stack pipeline in `toristack-core`.

pub mod fixtures;
pub mod human;
pub mod input;
pub mod report;
pub mod runner;
