//! Binary greymap (P5) rendering of noise vectors.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};

/// Grid shape for a vector of length `len`: `width` columns if given,
/// otherwise a square.
pub fn grid_shape(len: usize, width: Option<usize>) -> Result<(usize, usize)> {
    match width {
        Some(0) => Err(Error::Config("width must be positive".into())),
        Some(w) if len % w == 0 => Ok((w, len / w)),
        Some(w) => Err(Error::Config(format!("{len} values do not fill rows of width {w}"))),
        None => {
            let side = (len as f64).sqrt().round() as usize;
            if side * side == len && len > 0 {
                Ok((side, side))
            } else {
                Err(Error::Config(format!("{len} is not a perfect square; pass a width")))
            }
        }
    }
}

/// Min-max scales to `0..=255`; a constant vector maps to mid grey.
pub fn scale_to_bytes(values: &[f64]) -> Vec<u8> {
    let lo = values.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(hi > lo) {
        return vec![128; values.len()];
    }
    values
        .iter()
        .map(|v| (255.0 * (v - lo) / (hi - lo)).round() as u8)
        .collect()
}

pub fn encode_pgm(width: usize, height: usize, pixels: &[u8]) -> Vec<u8> {
    let mut out = format!("P5\n{width} {height}\n255\n").into_bytes();
    out.extend_from_slice(pixels);
    out
}

/// Parses a P5 image with maxval 255: `(width, height, pixels)`.
pub fn decode_pgm(bytes: &[u8]) -> Result<(usize, usize, Vec<u8>)> {
    let mut fields = Vec::new();
    let mut i = 0;
    while fields.len() < 4 {
        while i < bytes.len() && bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if i < bytes.len() && bytes[i] == b'#' {
            while i < bytes.len() && bytes[i] != b'\n' {
                i += 1;
            }
            continue;
        }
        let start = i;
        while i < bytes.len() && !bytes[i].is_ascii_whitespace() {
            i += 1;
        }
        if start == i {
            return Err(Error::format("truncated PGM header"));
        }
        fields.push(String::from_utf8_lossy(&bytes[start..i]).into_owned());
    }
    // one whitespace byte separates the header from the raster
    i += 1;
    if fields[0] != "P5" {
        return Err(Error::format(format!("not a P5 image: {}", fields[0])));
    }
    let num = |s: &str| s.parse::<usize>().map_err(|_| Error::format(format!("bad PGM field {s:?}")));
    let (w, h, max) = (num(&fields[1])?, num(&fields[2])?, num(&fields[3])?);
    if max != 255 {
        return Err(Error::format(format!("unsupported maxval {max}")));
    }
    let raster = bytes.get(i..).unwrap_or_default();
    if raster.len() != w * h {
        return Err(Error::format(format!("raster holds {} bytes, expected {}", raster.len(), w * h)));
    }
    Ok((w, h, raster.to_vec()))
}

pub fn render_pgm(values: &[f64], width: Option<usize>, path: &Path) -> Result<(usize, usize)> {
    let (w, h) = grid_shape(values.len(), width)?;
    fs::write(path, encode_pgm(w, h, &scale_to_bytes(values))).map_err(|e| Error::io(path, e))?;
    Ok((w, h))
}
