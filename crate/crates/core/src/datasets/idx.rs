//! IDX container (the MNIST distribution format).
//!
//! Layout: a 4-byte big-endian magic (`0x00000803` for `u8` images with three
//! dimensions, `0x00000801` for `u8` labels with one), one big-endian `u32`
//! per dimension, then the raw unsigned bytes.

use std::collections::BTreeMap;
use std::io::{self, Read};
use std::path::Path;

use crate::datasets::MnistSet;
use crate::error::{Error, Result};
use crate::matrix::Matrix;

pub const IMAGES_MAGIC: u32 = 0x0000_0803;
pub const LABELS_MAGIC: u32 = 0x0000_0801;

fn read_u32(cur: &mut impl Read) -> io::Result<u32> {
    let mut buf = [0u8; 4];
    cur.read_exact(&mut buf)?;
    Ok(u32::from_be_bytes(buf))
}

/// Parsed image file: count, rows, cols and the raw pixel bytes.
struct RawImages {
    count: usize,
    rows: usize,
    cols: usize,
    pixels: Vec<u8>,
}

fn parse_images(bytes: &[u8], path: &Path) -> Result<RawImages> {
    let mut cur = bytes;
    let io_err = |e| Error::io(path, e);
    let magic = read_u32(&mut cur).map_err(io_err)?;
    if magic != IMAGES_MAGIC {
        return Err(Error::Format(format!(
            "{}: image magic {magic} ({magic:#010x}), expected {IMAGES_MAGIC}",
            path.display()
        )));
    }
    let count = read_u32(&mut cur).map_err(io_err)? as usize;
    let rows = read_u32(&mut cur).map_err(io_err)? as usize;
    let cols = read_u32(&mut cur).map_err(io_err)? as usize;
    let mut pixels = vec![0u8; count * rows * cols];
    cur.read_exact(&mut pixels).map_err(io_err)?;
    if !cur.is_empty() {
        return Err(Error::Format(format!(
            "{}: {} trailing bytes after image data",
            path.display(),
            cur.len()
        )));
    }
    Ok(RawImages {
        count,
        rows,
        cols,
        pixels,
    })
}

fn parse_labels(bytes: &[u8], path: &Path) -> Result<Vec<u8>> {
    let mut cur = bytes;
    let io_err = |e| Error::io(path, e);
    let magic = read_u32(&mut cur).map_err(io_err)?;
    if magic != LABELS_MAGIC {
        return Err(Error::Format(format!(
            "{}: label magic {magic} ({magic:#010x}), expected {LABELS_MAGIC}",
            path.display()
        )));
    }
    let count = read_u32(&mut cur).map_err(io_err)? as usize;
    let mut labels = vec![0u8; count];
    cur.read_exact(&mut labels).map_err(io_err)?;
    if !cur.is_empty() {
        return Err(Error::Format(format!(
            "{}: {} trailing bytes after label data",
            path.display(),
            cur.len()
        )));
    }
    if let Some(bad) = labels.iter().find(|&&l| l > 9) {
        return Err(Error::Format(format!("{}: label {bad} outside 0-9", path.display())));
    }
    Ok(labels)
}

/// Decodes an image/label pair already held in memory.
pub fn decode_mnist(
    images: &[u8],
    labels: &[u8],
    images_path: &Path,
    labels_path: &Path,
) -> Result<MnistSet> {
    let raw = parse_images(images, images_path)?;
    let labels = parse_labels(labels, labels_path)?;
    if raw.count != labels.len() {
        return Err(Error::Consistency(format!(
            "{} holds {} images but {} holds {} labels",
            images_path.display(),
            raw.count,
            labels_path.display(),
            labels.len()
        )));
    }
    let data = raw.pixels.iter().map(|&b| f64::from(b) / 255.0).collect();
    let images = Matrix::from_vec(raw.count, raw.rows * raw.cols, data)?;
    MnistSet::new(images, labels, raw.rows, raw.cols)
}

pub fn load_mnist_idx(images_path: impl AsRef<Path>, labels_path: impl AsRef<Path>) -> Result<MnistSet> {
    let (ip, lp) = (images_path.as_ref(), labels_path.as_ref());
    let images = std::fs::read(ip).map_err(|e| Error::io(ip, e))?;
    let labels = std::fs::read(lp).map_err(|e| Error::io(lp, e))?;
    decode_mnist(&images, &labels, ip, lp)
}

/// Encodes the images as an IDX `u8` tensor; values are mapped back with
/// `round(v * 255)`.
pub fn encode_images(set: &MnistSet) -> Vec<u8> {
    let mut out = Vec::with_capacity(16 + set.images.as_slice().len());
    out.extend_from_slice(&IMAGES_MAGIC.to_be_bytes());
    for dim in [set.len(), set.image_rows, set.image_cols] {
        out.extend_from_slice(&(dim as u32).to_be_bytes());
    }
    out.extend(set.images.as_slice().iter().map(|&v| (v * 255.0).round() as u8));
    out
}

pub fn encode_labels(set: &MnistSet) -> Vec<u8> {
    let mut out = Vec::with_capacity(8 + set.labels.len());
    out.extend_from_slice(&LABELS_MAGIC.to_be_bytes());
    out.extend_from_slice(&(set.labels.len() as u32).to_be_bytes());
    out.extend_from_slice(&set.labels);
    out
}

/// First-`k` images per requested digit, in file order, concatenated by
/// ascending digit.
pub fn subset_mnist(set: &MnistSet, wanted: &BTreeMap<u8, usize>) -> Result<MnistSet> {
    let total: usize = wanted.values().sum();
    if total == 0 {
        return Err(Error::Config("subset request selects no images".into()));
    }
    let mut indices = Vec::with_capacity(total);
    for (&digit, &count) in wanted {
        if digit > 9 {
            return Err(Error::Config(format!("digit {digit} outside 0-9")));
        }
        let picked: Vec<usize> = set
            .labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == digit)
            .map(|(i, _)| i)
            .take(count)
            .collect();
        if picked.len() < count {
            return Err(Error::Config(format!(
                "requested {count} images of digit {digit} but only {} available (short by {})",
                picked.len(),
                count - picked.len()
            )));
        }
        indices.extend(picked);
    }
    let labels = indices.iter().map(|&i| set.labels[i]).collect();
    MnistSet::new(set.images.select_rows(&indices), labels, set.image_rows, set.image_cols)
}

/// The digit-1/2/3 subset of sizes 5000/3000/2000.
pub fn digits_123_request() -> BTreeMap<u8, usize> {
    BTreeMap::from([(1, 5000), (2, 3000), (3, 2000)])
}
