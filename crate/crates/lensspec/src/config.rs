//! Run configuration shared by the command-line surface.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum OutputFormat {
    Plain,
    Json,
    Csv,
}

/// Settings common to every subcommand.
///
/// A `cutoff_override` below the certified bound makes affected decisions
/// heuristic; every output derived from one is stamped as such.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub jobs: usize,
    pub cutoff_override: Option<usize>,
    pub output_format: OutputFormat,
    /// Reserved for randomized subcommands; the current command set is
    /// deterministic and only echoes it.
    pub seed: Option<u64>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            jobs: default_jobs(),
            cutoff_override: None,
            output_format: OutputFormat::Plain,
            seed: None,
        }
    }
}

/// Worker count: the `LENSSPEC_JOBS` environment variable when set,
/// otherwise the number of available CPUs.
pub fn default_jobs() -> usize {
    std::env::var("LENSSPEC_JOBS")
        .ok()
        .and_then(|v| v.parse().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| {
            std::thread::available_parallelism()
                .map(|n| n.get())
                .unwrap_or(1)
        })
}
