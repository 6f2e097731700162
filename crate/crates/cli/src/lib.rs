//! Document schema and task execution behind the `vgenus` binary.

pub mod doc;
pub mod tasks;
