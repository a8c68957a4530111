//! `augment` and `replay`.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use log::{debug, info};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use vipaug_core::augment::{vipaug_traced, AugmentConfig};
use vipaug_core::io::{encode_png, list_images, read_image};
use vipaug_core::pool::{build_pool, sample_phase, FractalPool};
use vipaug_core::{ImageTensor, RngStream, Shape};

use crate::error::{CliError, Result};

pub const MANIFEST_NAME: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageRecord {
    pub fractal: bool,
    pub amplitude_swap: bool,
    pub pixel_op: String,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub input: String,
    pub output: String,
    pub sample_index: usize,
    pub stages: StageRecord,
    pub partner: String,
    /// Pool entry drawn for this sample, whether or not substitution fired.
    pub fractal_index: Option<usize>,
}

/// Everything needed to regenerate an output directory. Output locations are
/// stored relative to the directory holding the manifest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub config: AugmentConfig,
    pub seed: u64,
    pub input_dir: String,
    pub pool: Option<String>,
    pub entries: Vec<ManifestEntry>,
}

impl RunManifest {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
    }
}

#[derive(Debug, Clone)]
pub struct AugmentJob {
    pub config: AugmentConfig,
    pub input_dir: PathBuf,
    /// Cache file or image directory.
    pub pool: Option<PathBuf>,
    pub out_dir: PathBuf,
    /// 0 lets the thread pool decide.
    pub workers: usize,
}

fn absolute(path: &Path) -> Result<PathBuf> {
    fs::canonicalize(path).map_err(|e| CliError::io(path, e))
}

fn file_name(path: &Path) -> String {
    path.file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default()
}

fn output_name(path: &Path) -> String {
    format!(
        "{}.png",
        path.file_stem().map(|s| s.to_string_lossy()).unwrap_or_default()
    )
}

/// Loads a cache file, or builds from a directory, and checks the shape.
pub fn load_pool(path: &Path, shape: Shape, config: &AugmentConfig) -> Result<FractalPool> {
    let pool = if path.is_dir() {
        build_pool(path, shape, config.dft_mode)?
    } else {
        FractalPool::load_cache(path)?
    };
    if pool.shape() != shape {
        return Err(CliError::Config(format!(
            "pool {} holds {} spectra but the inputs are {}",
            path.display(),
            pool.shape(),
            shape
        )));
    }
    Ok(pool)
}

fn partner_index(index: usize, n: usize, rng: &mut RngStream) -> usize {
    if n == 1 {
        return index;
    }
    let j = rng.index(n - 1);
    if j >= index {
        j + 1
    } else {
        j
    }
}

fn remove_outputs(out_dir: &Path, names: impl IntoIterator<Item = String>) {
    for name in names {
        let _ = fs::remove_file(out_dir.join(name));
    }
}

/// Augments every image in `job.input_dir` once and writes PNGs plus
/// [`MANIFEST_NAME`] into `job.out_dir`.
///
/// Sample `i` draws only from `RngStream::for_sample(seed, i)`, so results do
/// not depend on `workers`. On failure every output written by this call is
/// removed.
pub fn augment_dir(job: &AugmentJob) -> Result<RunManifest> {
    let config = &job.config;
    config.validate().map_err(|e| CliError::Config(e.to_string()))?;
    if config.p_fractal > 0.0 && job.pool.is_none() {
        return Err(CliError::Config("p_fractal > 0 requires --pool".into()));
    }

    let input_dir = absolute(&job.input_dir)?;
    let inputs = list_images(&input_dir)?;
    if inputs.is_empty() {
        return Err(CliError::Io(format!("{}: no images found", input_dir.display())));
    }
    let outputs: Vec<String> = inputs.iter().map(|p| output_name(p)).collect();
    let mut seen = HashSet::new();
    for (input, output) in inputs.iter().zip(&outputs) {
        if !seen.insert(output.as_str()) {
            return Err(CliError::Io(format!(
                "{} collides with another input on output name {output}",
                input.display()
            )));
        }
    }

    let threads = rayon::ThreadPoolBuilder::new()
        .num_threads(job.workers)
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;

    let images: Vec<ImageTensor> = threads.install(|| {
        inputs
            .par_iter()
            .map(|p| read_image(p))
            .collect::<vipaug_core::Result<_>>()
    })?;
    let shape = images[0].shape();
    if let Some(i) = images.iter().position(|img| img.shape() != shape) {
        return Err(CliError::Io(format!(
            "{} is {} but {} is {}",
            inputs[i].display(),
            images[i].shape(),
            inputs[0].display(),
            shape
        )));
    }

    let pool_path = job.pool.as_deref().map(absolute).transpose()?;
    let pool = pool_path.as_deref().map(|p| load_pool(p, shape, config)).transpose()?;

    fs::create_dir_all(&job.out_dir).map_err(|e| CliError::io(&job.out_dir, e))?;
    info!(
        "augmenting {} images of shape {shape} with seed {}",
        inputs.len(),
        config.seed
    );

    let n = images.len();
    let process = |i: usize| -> Result<ManifestEntry> {
        let mut rng = RngStream::for_sample(config.seed, i as u64);
        let mut select = rng.fork();
        let partner = partner_index(i, n, &mut select);
        let fractal = pool.as_ref().map(|p| sample_phase(p, &mut select)).transpose()?;
        let (out, trace) = vipaug_traced(&images[i], &images[partner], fractal.map(|f| f.1), config, &mut rng)?;
        let path = job.out_dir.join(&outputs[i]);
        if let Err(e) = fs::write(&path, encode_png(&out)?) {
            let _ = fs::remove_file(&path);
            return Err(CliError::io(&path, e));
        }
        debug!("{} -> {}", inputs[i].display(), path.display());
        Ok(ManifestEntry {
            input: file_name(&inputs[i]),
            output: outputs[i].clone(),
            sample_index: i,
            stages: StageRecord {
                fractal: trace.fractal,
                amplitude_swap: trace.amplitude_swap,
                pixel_op: trace.pixel_op.name().to_owned(),
                magnitude: trace.magnitude,
            },
            partner: file_name(&inputs[partner]),
            fractal_index: fractal.map(|f| f.0),
        })
    };
    let results: Vec<Result<ManifestEntry>> = threads.install(|| (0..n).into_par_iter().map(process).collect());

    let written = || results.iter().flatten().map(|e| e.output.clone()).collect::<Vec<_>>();
    if let Some(pos) = results.iter().position(|r| r.is_err()) {
        remove_outputs(&job.out_dir, written());
        let mut results = results;
        return Err(results.swap_remove(pos).unwrap_err());
    }

    let manifest = RunManifest {
        config: config.clone(),
        seed: config.seed,
        input_dir: input_dir.to_string_lossy().into_owned(),
        pool: pool_path.map(|p| p.to_string_lossy().into_owned()),
        entries: results.into_iter().flatten().collect(),
    };
    let manifest_path = job.out_dir.join(MANIFEST_NAME);
    let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes") + "\n";
    if let Err(e) = fs::write(&manifest_path, json) {
        remove_outputs(&job.out_dir, manifest.entries.iter().map(|e| e.output.clone()));
        let _ = fs::remove_file(&manifest_path);
        return Err(CliError::io(&manifest_path, e));
    }
    Ok(manifest)
}

/// Re-runs the job recorded in `manifest_path` into `out_dir` and checks the
/// manifest and every output byte-for-byte against the original run.
pub fn replay(manifest_path: &Path, out_dir: &Path, workers: usize) -> Result<RunManifest> {
    let recorded = RunManifest::load(manifest_path)?;
    let original_dir = manifest_path.parent().unwrap_or(Path::new("."));
    if out_dir.exists() && absolute(out_dir)? == absolute(original_dir)? {
        return Err(CliError::Config(
            "replay output must differ from the recorded directory".into(),
        ));
    }
    if recorded.config.seed != recorded.seed {
        return Err(CliError::Config(format!(
            "manifest seed {} disagrees with config seed {}",
            recorded.seed, recorded.config.seed
        )));
    }
    let job = AugmentJob {
        config: recorded.config.clone(),
        input_dir: PathBuf::from(&recorded.input_dir),
        pool: recorded.pool.as_ref().map(PathBuf::from),
        out_dir: out_dir.to_owned(),
        workers,
    };
    let fresh = augment_dir(&job)?;
    if fresh.entries != recorded.entries {
        return Err(CliError::Replay("per-sample records differ from the manifest".into()));
    }
    for entry in &recorded.entries {
        let a = original_dir.join(&entry.output);
        let b = out_dir.join(&entry.output);
        let before = fs::read(&a).map_err(|e| CliError::io(&a, e))?;
        let after = fs::read(&b).map_err(|e| CliError::io(&b, e))?;
        if before != after {
            return Err(CliError::Replay(format!("{} differs", entry.output)));
        }
    }
    Ok(fresh)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partner_never_self_unless_alone() {
        let mut rng = RngStream::new(1);
        assert_eq!(partner_index(0, 1, &mut rng), 0);
        for i in 0..5 {
            for _ in 0..200 {
                let p = partner_index(i, 5, &mut rng);
                assert!(p < 5 && p != i);
            }
        }
    }

    #[test]
    fn output_names_are_png() {
        assert_eq!(output_name(Path::new("/a/b/cat.jpeg")), "cat.png");
        assert_eq!(output_name(Path::new("dog.png")), "dog.png");
    }
}
