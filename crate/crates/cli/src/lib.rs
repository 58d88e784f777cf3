pub mod config;
pub mod criteria;
pub mod error;
pub mod manifest;
pub mod presets;
pub mod report;
pub mod run;

pub use config::ExperimentConfig;
pub use error::{CliError, Result};
pub use manifest::RunManifest;
