//! Command-line front end for the free-fall decoherence toolkit: config
//! parsing, command dispatch, and bit-stable report/CSV emission.
//!
//! The binary is a thin shell over [`run::execute`]; everything testable
//! lives here.

pub mod config;
pub mod error;
pub mod report;
pub mod run;
