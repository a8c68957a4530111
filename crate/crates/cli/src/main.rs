use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use log::info;
use vipaug_cli::{augment_dir, diag, inspect, load_config, load_pool, replay, AugmentJob, CliError, Result};
use vipaug_core::io::{read_image, write_png};
use vipaug_core::pool::build_pool;
use vipaug_core::spectrum::DftMode;
use vipaug_core::Shape;

#[derive(Parser)]
#[command(name = "vipaug", version, about = "Vital-phase frequency-domain image augmentation")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Augment every image in a directory once and write a manifest.
    Augment {
        in_dir: PathBuf,
        out_dir: PathBuf,
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        /// Worker threads (0 = one per core).
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Pool cache file or directory of classless images.
        #[arg(long)]
        pool: Option<PathBuf>,
    },
    /// Regenerate a run from its manifest and verify the outputs match.
    Replay {
        manifest: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value_t = 0)]
        workers: usize,
    },
    /// Build a fractal pool cache from a directory of images.
    PoolBuild {
        dir: PathBuf,
        cache_out: PathBuf,
        /// HxWxC, e.g. 32x32x3.
        #[arg(long, value_parser = parse_shape)]
        shape: Shape,
        #[arg(long, default_value = "3d")]
        dft_mode: DftMode,
    },
    /// Write a 1x6 panel PNG of one image's augmentation stages.
    Inspect {
        image: PathBuf,
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        pool: Option<PathBuf>,
        /// Amplitude donor for the full-pipeline panel (default: the image).
        #[arg(long)]
        partner: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Count phase fluctuations between clean and corrupted image pairs.
    Fluct {
        clean_dir: PathBuf,
        corrupted_dir: PathBuf,
        #[arg(long, default_value = "0.1,0.5,1.0")]
        thresholds: String,
        #[arg(long, default_value = "3d")]
        dft_mode: DftMode,
    },
    /// Corruption error and mCE of a network against a reference network.
    Mce {
        network_csv: PathBuf,
        reference_csv: PathBuf,
    },
}

fn parse_shape(text: &str) -> std::result::Result<Shape, String> {
    let dims: Vec<usize> = text
        .split('x')
        .map(|d| d.trim().parse::<usize>().map_err(|e| format!("`{d}`: {e}")))
        .collect::<std::result::Result<_, _>>()?;
    match dims[..] {
        [h, w, c] => Shape::new(h, w, c).map_err(|e| e.to_string()),
        _ => Err(format!("expected HxWxC, got `{text}`")),
    }
}

fn stdout_err(e: io::Error) -> CliError {
    CliError::Io(format!("stdout: {e}"))
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Augment {
            in_dir,
            out_dir,
            config,
            seed,
            workers,
            pool,
        } => {
            let job = AugmentJob {
                config: load_config(&config, seed)?,
                input_dir: in_dir,
                pool,
                out_dir,
                workers,
            };
            let manifest = augment_dir(&job)?;
            info!("wrote {} images to {}", manifest.entries.len(), job.out_dir.display());
        }
        Command::Replay { manifest, out, workers } => {
            let fresh = replay(&manifest, &out, workers)?;
            println!("replayed {} outputs, all identical", fresh.entries.len());
        }
        Command::PoolBuild {
            dir,
            cache_out,
            shape,
            dft_mode,
        } => {
            let pool = build_pool(&dir, shape, dft_mode)?;
            pool.save_cache(&cache_out)?;
            println!("{} entries", pool.len());
        }
        Command::Inspect {
            image,
            config,
            out,
            pool,
            partner,
            seed,
        } => {
            let config = load_config(&config, seed)?;
            let image = read_image(&image)?;
            let pool = pool.map(|p| load_pool(&p, image.shape(), &config)).transpose()?;
            let partner = partner.map(|p| read_image(&p)).transpose()?;
            let panels = inspect::panels(&image, &config, pool.as_ref(), partner.as_ref(), config.seed)?;
            write_png(&out, &inspect::tile(&panels)?)?;
        }
        Command::Fluct {
            clean_dir,
            corrupted_dir,
            thresholds,
            dft_mode,
        } => {
            let thresholds = diag::parse_thresholds(&thresholds)?;
            let rows = diag::fluctuation_counts(&clean_dir, &corrupted_dir, &thresholds, dft_mode)?;
            let mut out = io::stdout().lock();
            diag::write_fluct_csv(&rows, &thresholds, &mut out).map_err(stdout_err)?;
            out.flush().map_err(stdout_err)?;
        }
        Command::Mce {
            network_csv,
            reference_csv,
        } => {
            let report = diag::mce_from_files(&network_csv, &reference_csv)?;
            diag::write_mce(&report, io::stdout().lock()).map_err(stdout_err)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
