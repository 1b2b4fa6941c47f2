//! Configuration files, curve CSVs and the command-line front end.

pub mod cli;
pub mod config;
pub mod curve_csv;
