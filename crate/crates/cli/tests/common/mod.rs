#![allow(dead_code)]

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use image::{DynamicImage, RgbImage};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};
use vipaug_core::augment::AugmentConfig;

pub fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_vipaug"))
}

pub fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

pub fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

pub fn write_noise_png(path: &Path, w: u32, h: u32, seed: u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let img = RgbImage::from_fn(w, h, |_, _| image::Rgb([rng.random(), rng.random(), rng.random()]));
    DynamicImage::ImageRgb8(img).save(path).unwrap();
}

/// `n` random PNGs named `img00.png`, `img01.png`, ...
pub fn image_dir(root: &Path, name: &str, n: usize, w: u32, h: u32, seed: u64) -> PathBuf {
    let dir = root.join(name);
    fs::create_dir_all(&dir).unwrap();
    for i in 0..n {
        write_noise_png(&dir.join(format!("img{i:02}.png")), w, h, seed * 1000 + i as u64);
    }
    dir
}

pub fn write_config(path: &Path, config: &AugmentConfig) {
    fs::write(path, serde_json::to_string_pretty(config).unwrap()).unwrap();
}

/// SHA-256 over sorted (file name, contents) pairs.
pub fn dir_hash(dir: &Path) -> String {
    let mut names: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    names.sort();
    let mut hasher = Sha256::new();
    for name in names {
        hasher.update(name.as_bytes());
        hasher.update([0]);
        hasher.update(fs::read(dir.join(&name)).unwrap());
    }
    hasher.finalize().iter().map(|b| format!("{b:02x}")).collect()
}
