//! IO, file formats, verification suites and the CLI front door for
//! `isoperimetrix-core`.

pub mod commands;
pub mod config;
pub mod formats;
pub mod report;
pub mod suites;

pub use isoperimetrix_core as core;
