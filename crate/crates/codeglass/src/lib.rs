//! Code files, experiment configuration, reports and parallel drivers on
//! top of `codeglass-core`.

pub mod checks;
pub mod cli;
pub mod codefile;
pub mod config;
pub mod driver;
pub mod error;
pub mod report;

pub use codefile::CodeFile;
pub use config::{CodeSpec, ExperimentConfig};
pub use error::{AppError, AppResult};
