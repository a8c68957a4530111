//! Image file ingestion and PNG output.
//!
//! Samples are scaled to `[0, 1]` on the way in and clamped, then rounded to
//! 8 bits, on the way out.

use std::fs;
use std::io::Cursor;
use std::path::{Path, PathBuf};

use image::imageops::{self, FilterType};
use image::{DynamicImage, ImageBuffer, ImageFormat, Pixel};

use crate::error::{Error, Result};
use crate::grid::{ImageTensor, Shape};

const IMAGE_EXTENSIONS: [&str; 3] = ["png", "jpg", "jpeg"];

pub fn is_image_path(path: &Path) -> bool {
    path.extension()
        .and_then(|e| e.to_str())
        .is_some_and(|e| IMAGE_EXTENSIONS.contains(&e.to_ascii_lowercase().as_str()))
}

/// Regular, non-hidden files directly inside `dir`, sorted by path.
pub fn list_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let entries = fs::read_dir(dir).map_err(|e| Error::io(dir, e))?;
    let mut files = Vec::new();
    for entry in entries {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        let path = entry.path();
        let hidden = path
            .file_name()
            .and_then(|n| n.to_str())
            .is_some_and(|n| n.starts_with('.'));
        if !hidden && path.is_file() {
            files.push(path);
        }
    }
    files.sort();
    Ok(files)
}

/// Image files (by extension) directly inside `dir`, sorted by path.
pub fn list_images(dir: &Path) -> Result<Vec<PathBuf>> {
    Ok(list_files(dir)?.into_iter().filter(|p| is_image_path(p)).collect())
}

pub fn decode(path: &Path) -> Result<DynamicImage> {
    let reader = image::ImageReader::open(path)
        .map_err(|e| Error::io(path, e))?
        .with_guessed_format()
        .map_err(|e| Error::io(path, e))?;
    reader.decode().map_err(|source| Error::Image {
        path: path.to_owned(),
        source,
    })
}

fn tensor_from_buffer<P>(buffer: &ImageBuffer<P, Vec<f32>>, channels: usize) -> Result<ImageTensor>
where
    P: Pixel<Subpixel = f32>,
{
    let shape = Shape::new(buffer.height() as usize, buffer.width() as usize, channels)?;
    let data = buffer.as_raw().iter().map(|&v| f64::from(v).clamp(0.0, 1.0)).collect();
    ImageTensor::new(shape, data)
}

/// Converts to `channels` (1 = luma, 3 = RGB, 4 = RGBA) without resizing.
pub fn from_dynamic(image: &DynamicImage, channels: usize) -> Result<ImageTensor> {
    match channels {
        1 => tensor_from_buffer(&image.to_luma32f(), 1),
        3 => tensor_from_buffer(&image.to_rgb32f(), 3),
        4 => tensor_from_buffer(&image.to_rgba32f(), 4),
        c => Err(Error::InvalidShape(format!("unsupported channel count {c}"))),
    }
}

/// Reads an image as RGB.
pub fn read_image(path: &Path) -> Result<ImageTensor> {
    from_dynamic(&decode(path)?, 3)
}

/// Center-crops to the aspect ratio of `shape`, then bilinear-resizes to it.
pub fn canonicalize(image: &DynamicImage, shape: Shape) -> Result<ImageTensor> {
    let (sw, sh) = (u64::from(image.width()), u64::from(image.height()));
    let (tw, th) = (shape.width() as u64, shape.height() as u64);
    let (cw, ch) = if sw * th > sh * tw {
        (((sh * tw) as f64 / th as f64).round().max(1.0) as u64, sh)
    } else {
        (sw, ((sw * th) as f64 / tw as f64).round().max(1.0) as u64)
    };
    let cropped = image.crop_imm(((sw - cw) / 2) as u32, ((sh - ch) / 2) as u32, cw as u32, ch as u32);
    let (w, h) = (shape.width() as u32, shape.height() as u32);
    match shape.channels() {
        1 => tensor_from_buffer(&imageops::resize(&cropped.to_luma32f(), w, h, FilterType::Triangle), 1),
        3 => tensor_from_buffer(&imageops::resize(&cropped.to_rgb32f(), w, h, FilterType::Triangle), 3),
        4 => tensor_from_buffer(&imageops::resize(&cropped.to_rgba32f(), w, h, FilterType::Triangle), 4),
        c => Err(Error::InvalidShape(format!("unsupported channel count {c}"))),
    }
}

pub fn to_u8_samples(image: &ImageTensor) -> Vec<u8> {
    image
        .data()
        .iter()
        .map(|v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect()
}

pub fn to_dynamic(image: &ImageTensor) -> Result<DynamicImage> {
    let shape = image.shape();
    let (w, h) = (shape.width() as u32, shape.height() as u32);
    let raw = to_u8_samples(image);
    let out = match shape.channels() {
        1 => ImageBuffer::from_raw(w, h, raw).map(DynamicImage::ImageLuma8),
        3 => ImageBuffer::from_raw(w, h, raw).map(DynamicImage::ImageRgb8),
        4 => ImageBuffer::from_raw(w, h, raw).map(DynamicImage::ImageRgba8),
        c => return Err(Error::InvalidShape(format!("cannot encode {c} channels"))),
    };
    Ok(out.expect("buffer length matches shape"))
}

pub fn encode_png(image: &ImageTensor) -> Result<Vec<u8>> {
    let mut bytes = Cursor::new(Vec::new());
    to_dynamic(image)?
        .write_to(&mut bytes, ImageFormat::Png)
        .map_err(|source| Error::Image {
            path: PathBuf::from("<png>"),
            source,
        })?;
    Ok(bytes.into_inner())
}

pub fn write_png(path: &Path, image: &ImageTensor) -> Result<()> {
    fs::write(path, encode_png(image)?).map_err(|e| Error::io(path, e))
}
