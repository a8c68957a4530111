//! Batch front end for `vipaug-core`: dataset augmentation with a replayable
//! manifest, fractal-pool caching, inspection panels and diagnostics.

use std::fs;
use std::path::Path;

pub mod augment;
pub mod diag;
pub mod error;
pub mod inspect;

pub use augment::{augment_dir, load_pool, replay, AugmentJob, ManifestEntry, RunManifest, StageRecord, MANIFEST_NAME};
pub use error::{CliError, Result};

use vipaug_core::augment::AugmentConfig;

/// Reads and validates a JSON config. A `seed` override replaces the file's.
pub fn load_config(path: &Path, seed: Option<u64>) -> Result<AugmentConfig> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut config =
        AugmentConfig::from_json(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    config
        .validate()
        .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
    Ok(config)
}
