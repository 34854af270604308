//! JSON wire formats and the `ttocheck` command-line front end.

pub mod app;
pub mod json;
pub mod report;

pub use app::{run, Outcome};
