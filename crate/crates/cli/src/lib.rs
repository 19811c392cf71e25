//! Library half of the `lbkd` command-line tool: file formats and the
//! subcommand implementations, kept here so tests can drive them in-process.

pub mod commands;
pub mod csv_io;
