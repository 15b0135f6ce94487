//! Library half of the `charburg` binary: flag definitions and command
//! bodies live here so they can be unit- and integration-tested directly.

pub mod args;
pub mod run;
