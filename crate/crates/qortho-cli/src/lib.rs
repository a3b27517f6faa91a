//! Library surface of the command-line front end: configuration parsing,
//! artifact schemas and the command runners (kept in a lib so integration
//! tests can drive them directly).

pub mod artifact;
pub mod config;
pub mod run;
