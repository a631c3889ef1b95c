//! Static analysis of Design-by-Contract constructs in Java and Kotlin.

pub mod error;
pub mod analytics;
pub mod catalog;
pub mod classify;
pub mod cli;
pub mod corpus;
pub mod detect;
pub mod evolution;
pub mod inheritance;
pub mod report;
pub mod snapshot;
pub mod source_model;

pub use error::{Error, Result};
