//! Driver for the `robinlab` command and the acceptance suite.

pub mod commands;
pub mod config;
pub mod corpus;
pub mod error;
pub mod verify;

pub use config::RunConfig;
pub use error::{CliError, Result};

/// Environment variable that caps the worker threads.
pub const WORKERS_ENV: &str = "ROBINLAB_WORKERS";

/// Sizes the global thread pool from [`WORKERS_ENV`]; a no-op when unset.
pub fn init_workers() -> Result<()> {
    if let Ok(v) = std::env::var(WORKERS_ENV) {
        let n: usize = v
            .trim()
            .parse()
            .map_err(|_| CliError::Config(format!("{WORKERS_ENV} must be a positive integer, got {v:?}")))?;
        // A pool may already exist in test harnesses; the first setting wins.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
    Ok(())
}
