//! Command-line front end for `tilecohom`: substitution analysis, regularity
//! certificates, convergence tables and matrix-only Perron reports.

pub mod commands;
pub mod report;
