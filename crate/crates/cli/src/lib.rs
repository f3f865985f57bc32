//! Library surface of the command-line tool, so the pipelines are callable
//! from integration tests.

pub mod config;
pub mod pipeline;
