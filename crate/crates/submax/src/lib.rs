//! Instance files, corpus generation, experiments, reports and the `submax`
//! command line on top of [`submax_core`].

pub mod cli;
pub mod corpus;
pub mod error;
pub mod experiment;
pub mod instance;
pub mod report;
pub mod suite;

pub use error::{Result, SubmaxError};
