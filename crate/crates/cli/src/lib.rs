//! Configuration, command execution and CSV output for the `fadecap` binary.

pub mod config;
pub mod error;
pub mod execute;
pub mod format;

pub use config::{parse_config, RunConfig};
pub use error::CliError;
pub use execute::{execute, Command, Output};

/// Reads and validates a configuration file.
pub fn load_config(path: &std::path::Path) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Read {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}
