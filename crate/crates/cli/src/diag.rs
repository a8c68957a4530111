//! `fluct` and `mce`.

use std::fs::File;
use std::io::Write;
use std::path::Path;

use vipaug_core::analyzer::{compute_mce, count_phase_fluctuations, CorruptionErrorTable, MceReport};
use vipaug_core::io::{list_images, read_image};
use vipaug_core::spectrum::DftMode;

use crate::error::{CliError, Result};

/// Per-file counts for every image in `clean_dir` paired with the file of the
/// same name in `corrupted_dir`.
pub fn fluctuation_counts(
    clean_dir: &Path,
    corrupted_dir: &Path,
    thresholds: &[f64],
    mode: DftMode,
) -> Result<Vec<(String, Vec<usize>)>> {
    let clean = list_images(clean_dir)?;
    if clean.is_empty() {
        return Err(CliError::Io(format!("{}: no images found", clean_dir.display())));
    }
    let mut rows = Vec::with_capacity(clean.len());
    for path in clean {
        let name = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
        let other = corrupted_dir.join(&name);
        if !other.is_file() {
            return Err(CliError::Io(format!(
                "{}: missing corrupted counterpart",
                other.display()
            )));
        }
        let counts = count_phase_fluctuations(&read_image(&path)?, &read_image(&other)?, thresholds, mode)?;
        rows.push((name, counts));
    }
    Ok(rows)
}

/// Writes `file,threshold,count` rows followed by one `mean` row per threshold.
pub fn write_fluct_csv(rows: &[(String, Vec<usize>)], thresholds: &[f64], mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "file,threshold,count")?;
    for (name, counts) in rows {
        for (t, c) in thresholds.iter().zip(counts) {
            writeln!(out, "{name},{t},{c}")?;
        }
    }
    for (k, t) in thresholds.iter().enumerate() {
        let total: usize = rows.iter().map(|(_, c)| c[k]).sum();
        writeln!(out, "mean,{t},{}", total as f64 / rows.len() as f64)?;
    }
    Ok(())
}

pub fn parse_thresholds(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(|t| {
            let v: f64 = t
                .trim()
                .parse()
                .map_err(|e| CliError::Config(format!("threshold `{t}`: {e}")))?;
            if v.is_finite() && v >= 0.0 {
                Ok(v)
            } else {
                Err(CliError::Config(format!("threshold `{t}` must be non-negative")))
            }
        })
        .collect()
}

fn read_table(path: &Path) -> Result<CorruptionErrorTable> {
    let file = File::open(path).map_err(|e| CliError::io(path, e))?;
    let name = path.file_stem().unwrap_or_default().to_string_lossy().into_owned();
    Ok(CorruptionErrorTable::from_csv(file, name)?)
}

pub fn mce_from_files(network: &Path, reference: &Path) -> Result<MceReport> {
    Ok(compute_mce(&read_table(network)?, &read_table(reference)?)?)
}

pub fn write_mce(report: &MceReport, mut out: impl Write) -> std::io::Result<()> {
    writeln!(out, "corruption,ce")?;
    for (name, ce) in &report.per_corruption {
        writeln!(out, "{name},{ce:.1}")?;
    }
    writeln!(out, "mCE,{:.1}", report.mce)
}
