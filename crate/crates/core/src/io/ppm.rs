//! Binary PPM (`P6`, maxval 255) codec.
//!
//! The writer always emits `P6\n<width> <height>\n255\n` followed by the raw
//! RGB bytes, row-major from the top row. The reader also accepts arbitrary
//! whitespace and `#` comments between header tokens.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::io::RasterImage;

pub fn encode_ppm(image: &RasterImage) -> Vec<u8> {
    let header = format!("P6\n{} {}\n255\n", image.width(), image.height());
    let mut out = Vec::with_capacity(header.len() + image.pixels().len() * 3);
    out.extend_from_slice(header.as_bytes());
    for px in image.pixels() {
        out.extend_from_slice(px);
    }
    out
}

pub fn write_ppm(path: impl AsRef<Path>, image: &RasterImage) -> Result<()> {
    fs::write(path, encode_ppm(image))?;
    Ok(())
}

pub fn read_ppm(path: impl AsRef<Path>) -> Result<RasterImage> {
    decode_ppm(&fs::read(path)?)
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    self.pos += 1;
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                }
            } else if b.is_ascii_whitespace() {
                self.pos += 1;
            } else {
                break;
            }
        }
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        self.skip_space_and_comments();
        let start = self.pos;
        while self.bytes.get(self.pos).is_some_and(u8::is_ascii_digit) {
            self.pos += 1;
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::InvalidPpm(format!("missing or malformed {what}")))
    }
}

pub fn decode_ppm(bytes: &[u8]) -> Result<RasterImage> {
    match bytes.get(..2) {
        Some(b"P6") => {}
        Some(magic) if magic[0] == b'P' => {
            return Err(Error::UnsupportedFormat(format!(
                "PNM variant {:?}; only binary P6 is supported",
                String::from_utf8_lossy(magic)
            )))
        }
        _ => return Err(Error::UnsupportedFormat("not a PPM file".into())),
    }
    let mut header = Header { bytes, pos: 2 };
    let width = header.number("width")?;
    let height = header.number("height")?;
    let maxval = header.number("maxval")?;
    if maxval != 255 {
        return Err(Error::InvalidPpm(format!(
            "maxval {maxval} (only 255 is supported)"
        )));
    }
    // Exactly one whitespace byte separates the header from the raster.
    match bytes.get(header.pos) {
        Some(b) if b.is_ascii_whitespace() => header.pos += 1,
        _ => return Err(Error::InvalidPpm("missing separator after maxval".into())),
    }
    let needed = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(3))
        .ok_or_else(|| Error::InvalidPpm("image dimensions overflow".into()))?;
    let data = &bytes[header.pos..];
    if data.len() < needed {
        return Err(Error::InvalidPpm(format!(
            "truncated pixel data: expected {needed} bytes, found {}",
            data.len()
        )));
    }
    let pixels = data[..needed]
        .chunks_exact(3)
        .map(|c| [c[0], c[1], c[2]])
        .collect();
    RasterImage::new(width, height, pixels)
}
