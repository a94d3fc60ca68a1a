//! IO, file formats, the verification suite, and the command line for the
//! exact Seifert-matrix bound engine in `zgenus-core`.

pub mod acceptance;
pub mod cli;
pub mod formats;

pub use zgenus_core as core;
