//! 8-bit grayscale PGM reading (P2, P5) and writing (P5).

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::imaging::Image;

/// Maps an intensity to a byte: clamp to [0,1], scale, round half up.
pub fn quantize(v: f64) -> u8 {
    let v = if v.is_nan() { 0.0 } else { v.clamp(0.0, 1.0) };
    (v * 255.0 + 0.5).floor() as u8
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Header<'a> {
    fn skip_space(&mut self) {
        while self.pos < self.bytes.len() {
            match self.bytes[self.pos] {
                b'#' => {
                    while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                        self.pos += 1;
                    }
                }
                b if b.is_ascii_whitespace() => self.pos += 1,
                _ => break,
            }
        }
    }

    fn token(&mut self) -> Result<&'a str> {
        self.skip_space();
        let start = self.pos;
        while self.pos < self.bytes.len() && !self.bytes[self.pos].is_ascii_whitespace() && self.bytes[self.pos] != b'#' {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::InvalidImage("unexpected end of PGM data".into()));
        }
        std::str::from_utf8(&self.bytes[start..self.pos]).map_err(|_| Error::InvalidImage("non-ASCII PGM header".into()))
    }

    fn number(&mut self, what: &str) -> Result<usize> {
        let tok = self.token()?;
        tok.parse().map_err(|_| Error::InvalidImage(format!("bad {what} '{tok}' in PGM header")))
    }
}

pub fn decode(bytes: &[u8]) -> Result<Image> {
    let mut h = Header { bytes, pos: 0 };
    let magic = h.token()?;
    let binary = match magic {
        "P5" => true,
        "P2" => false,
        "P1" | "P3" | "P4" | "P6" | "P7" => return Err(Error::UnsupportedFormat(format!("{magic} is not a grayscale PGM"))),
        other => return Err(Error::InvalidImage(format!("unknown magic '{other}'"))),
    };
    let width = h.number("width")?;
    let height = h.number("height")?;
    let maxval = h.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::InvalidImage("zero image dimension".into()));
    }
    if maxval != 255 {
        return Err(Error::UnsupportedFormat(format!("maxval {maxval} (only 255 is supported)")));
    }
    let count = width
        .checked_mul(height)
        .ok_or_else(|| Error::InvalidImage("image dimensions overflow".into()))?;
    let pixels = if binary {
        // exactly one whitespace byte separates the header from the raster
        let start = h.pos + 1;
        if h.pos >= bytes.len() || !bytes[h.pos].is_ascii_whitespace() {
            return Err(Error::InvalidImage("missing raster separator".into()));
        }
        let data = bytes
            .get(start..start + count)
            .ok_or_else(|| Error::InvalidImage(format!("truncated raster: expected {count} bytes")))?;
        data.iter().map(|&b| f64::from(b) / 255.0).collect()
    } else {
        (0..count)
            .map(|_| {
                let v = h.number("sample").map_err(|_| Error::InvalidImage("truncated or malformed ASCII raster".into()))?;
                if v > 255 {
                    return Err(Error::InvalidImage(format!("sample {v} exceeds maxval")));
                }
                Ok(v as f64 / 255.0)
            })
            .collect::<Result<Vec<_>>>()?
    };
    Image::new(width, height, pixels)
}

pub fn encode(img: &Image) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", img.width(), img.height()).into_bytes();
    out.extend(img.pixels().iter().map(|&v| quantize(v)));
    out
}

pub fn load_image(path: impl AsRef<Path>) -> Result<Image> {
    decode(&fs::read(path)?)
}

pub fn save_image(img: &Image, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, encode(img))?;
    Ok(())
}
