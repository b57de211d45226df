//! Definition language, verb dispatch, the reproduction suite and reports
//! behind the `ordab` binary.

pub mod commands;
pub mod lang;
pub mod report;
pub mod suite;
