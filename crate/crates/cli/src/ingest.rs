//! Loading data into `[0, 1]`-valued tensors and writing images back out.

use std::path::{Path, PathBuf};

use image::{DynamicImage, ImageBuffer, Luma, Rgb};
use vtctf::Tensor3;

use crate::error::{CliError, Result};
use crate::rawio;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum DataKind {
    /// One RGB image; the channels become three frontal slices.
    ColorImage,
    /// A directory of frames, converted to grayscale, one slice per frame.
    GrayVideo,
    /// A directory of single-band images, one slice per band.
    Multispectral,
    /// A raw tensor file already scaled to [0, 1].
    RawTensor,
}

const IMAGE_EXTS: &[&str] = &["png", "ppm", "pgm", "pbm", "pnm", "bmp"];

fn open_image(path: &Path) -> Result<DynamicImage> {
    image::ImageReader::open(path)
        .map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?
        .with_guessed_format()
        .map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })?
        .decode()
        .map_err(|source| CliError::Image {
            path: path.to_path_buf(),
            source,
        })
}

/// 8-bit or 16-bit, else unsupported.
fn bit_depth(img: &DynamicImage, path: &Path) -> Result<u8> {
    use DynamicImage::*;
    match img {
        ImageLuma8(_) | ImageLumaA8(_) | ImageRgb8(_) | ImageRgba8(_) => Ok(8),
        ImageLuma16(_) | ImageLumaA16(_) | ImageRgb16(_) | ImageRgba16(_) => Ok(16),
        other => Err(CliError::format(
            path,
            format!("unsupported sample format {:?}", other.color()),
        )),
    }
}

/// RGB image as an `h × w × 3` tensor.
pub fn load_color_image(path: &Path) -> Result<Tensor3> {
    let img = open_image(path)?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    if bit_depth(&img, path)? == 8 {
        let rgb = img.to_rgb8();
        Ok(Tensor3::from_fn(h, w, 3, |i, j, k| {
            rgb.get_pixel(j as u32, i as u32)[k] as f64 / 255.0
        }))
    } else {
        let rgb = img.to_rgb16();
        Ok(Tensor3::from_fn(h, w, 3, |i, j, k| {
            rgb.get_pixel(j as u32, i as u32)[k] as f64 / 65535.0
        }))
    }
}

/// Grayscale version of one image as an `h × w` slice, row-major.
fn load_gray(path: &Path) -> Result<(usize, usize, Vec<f64>)> {
    let img = open_image(path)?;
    let (w, h) = (img.width() as usize, img.height() as usize);
    let values = if bit_depth(&img, path)? == 8 {
        img.to_luma8().pixels().map(|p| p[0] as f64 / 255.0).collect()
    } else {
        img.to_luma16().pixels().map(|p| p[0] as f64 / 65535.0).collect()
    };
    Ok((h, w, values))
}

/// Image files of a directory, in file-name order.
pub fn image_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let read_err = |source| CliError::Read {
        path: dir.to_path_buf(),
        source,
    };
    let mut files = Vec::new();
    for entry in std::fs::read_dir(dir).map_err(read_err)? {
        let path = entry.map_err(read_err)?.path();
        let ext = path
            .extension()
            .and_then(|e| e.to_str())
            .map(|e| e.to_ascii_lowercase());
        if path.is_file() && ext.is_some_and(|e| IMAGE_EXTS.contains(&e.as_str())) {
            files.push(path);
        }
    }
    files.sort();
    if files.is_empty() {
        return Err(CliError::format(dir, "no PNG/PNM/BMP images in directory"));
    }
    Ok(files)
}

/// Stack the grayscale images of `dir` as frontal slices.
pub fn load_image_stack(dir: &Path) -> Result<Tensor3> {
    let files = image_files(dir)?;
    let mut slices = Vec::with_capacity(files.len());
    let mut shape = None;
    for f in &files {
        let (h, w, vals) = load_gray(f)?;
        match shape {
            None => shape = Some((h, w)),
            Some(s) if s != (h, w) => {
                return Err(CliError::format(
                    f,
                    format!("is {h}x{w}, earlier images are {}x{}", s.0, s.1),
                ))
            }
            _ => {}
        }
        slices.push(vals);
    }
    let (h, w) = shape.expect("at least one image");
    Ok(Tensor3::from_fn(h, w, slices.len(), |i, j, k| slices[k][i * w + j]))
}

pub fn load_raw(path: &Path) -> Result<Tensor3> {
    let t = rawio::read_tensor(path)?;
    if t.as_slice().iter().any(|&x| !(0.0..=1.0).contains(&x)) {
        return Err(CliError::format(path, "raw tensor values must lie in [0, 1]"));
    }
    Ok(t)
}

pub fn ingest(path: &Path, kind: DataKind) -> Result<Tensor3> {
    match kind {
        DataKind::ColorImage => load_color_image(path),
        DataKind::GrayVideo | DataKind::Multispectral => load_image_stack(path),
        DataKind::RawTensor => load_raw(path),
    }
}

fn to_u8(x: f64) -> u8 {
    (x.clamp(0.0, 1.0) * 255.0).round() as u8
}

/// Writes a 1- or 3-slice tensor as an 8-bit PNG/PPM/BMP (chosen by extension).
pub fn save_image(t: &Tensor3, path: &Path) -> Result<()> {
    let (h, w, p) = t.dims();
    let (w32, h32) = (w as u32, h as u32);
    let res = match p {
        1 => ImageBuffer::<Luma<u8>, _>::from_fn(w32, h32, |x, y| Luma([to_u8(t.get(y as usize, x as usize, 0))]))
            .save(path),
        3 => ImageBuffer::<Rgb<u8>, _>::from_fn(w32, h32, |x, y| {
            let (i, j) = (y as usize, x as usize);
            Rgb([to_u8(t.get(i, j, 0)), to_u8(t.get(i, j, 1)), to_u8(t.get(i, j, 2))])
        })
        .save(path),
        _ => return Err(CliError::write(path, format!("cannot write a {p}-slice tensor as one image"))),
    };
    res.map_err(|e| CliError::write(path, e))
}
