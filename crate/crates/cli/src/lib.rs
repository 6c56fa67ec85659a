//! JSON formats, invariant suites and command implementations behind the
//! `hortho` binary.

pub mod commands;
pub mod report;
pub mod suites;
pub mod wire;

pub use commands::{CommandError, Outcome};
pub use report::{Check, RunReport};
