//! Companion crate to `qflow-core`: everything that needs the OS or floating
//! point. JSON/CSV interchange, the lattice search engines, and the `qflow`
//! binary's subcommand plumbing.

pub mod commands;
pub mod explorer;
pub mod formats;
