//! Netpbm graymap (PGM) reading and writing.
//!
//! Reads binary `P5` and ASCII `P2` files with `maxval <= 255`, tolerating
//! `#` comments anywhere in the header. A file with `maxval = M` becomes an
//! image with `M + 1` gray levels. Writing always emits `P5` with
//! `maxval = levels - 1` and no comments.

use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::glcm::GrayImage;

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
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
        if start == self.pos {
            return Err(if self.pos >= self.bytes.len() {
                Error::parse(self.pos, format!("truncated header: missing {what}"))
            } else {
                Error::parse(self.pos, format!("expected {what}"))
            });
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .expect("ascii digits")
            .parse()
            .map_err(|_| Error::parse(start, format!("{what} out of range")))
    }
}

/// Decodes a `P5` or `P2` graymap.
pub fn load_pgm(bytes: &[u8]) -> Result<GrayImage> {
    let magic = bytes
        .get(..2)
        .ok_or_else(|| Error::parse(0, "file shorter than magic number"))?;
    let binary = match magic {
        b"P5" => true,
        b"P2" => false,
        _ => {
            return Err(Error::UnsupportedFormat(format!(
                "magic '{}' (only P5 and P2 graymaps are read)",
                String::from_utf8_lossy(magic)
            )))
        }
    };
    let mut cur = Cursor { bytes, pos: 2 };
    if !bytes
        .get(2)
        .is_some_and(|b| b.is_ascii_whitespace() || *b == b'#')
    {
        return Err(Error::parse(2, "expected whitespace after magic number"));
    }
    let width = cur.number("width")?;
    let height = cur.number("height")?;
    cur.skip_space_and_comments();
    let maxval_at = cur.pos;
    let maxval = cur.number("maxval")?;
    if width == 0 || height == 0 {
        return Err(Error::parse(
            maxval_at,
            format!("image size {width}x{height} must be positive"),
        ));
    }
    if maxval == 0 || maxval > 255 {
        return Err(Error::parse(
            maxval_at,
            format!("maxval {maxval} unsupported (must be 1..=255)"),
        ));
    }
    let n = width
        .checked_mul(height)
        .ok_or_else(|| Error::parse(maxval_at, "image dimensions overflow"))?;

    let pixels = if binary {
        // Exactly one whitespace byte separates the header from the raster.
        if !bytes.get(cur.pos).is_some_and(u8::is_ascii_whitespace) {
            return Err(Error::parse(
                cur.pos,
                "expected single whitespace before raster",
            ));
        }
        let start = cur.pos + 1;
        let end = start + n;
        if bytes.len() < end {
            return Err(Error::parse(
                bytes.len(),
                format!(
                    "truncated raster: expected {n} bytes, found {}",
                    bytes.len() - start.min(bytes.len())
                ),
            ));
        }
        let raster = &bytes[start..end];
        if let Some(i) = raster.iter().position(|&v| usize::from(v) > maxval) {
            return Err(Error::parse(
                start + i,
                format!("pixel {} exceeds maxval {maxval}", raster[i]),
            ));
        }
        raster.to_vec()
    } else {
        let mut pixels = Vec::with_capacity(n);
        for _ in 0..n {
            cur.skip_space_and_comments();
            let at = cur.pos;
            let v = cur.number("pixel value")?;
            if v > maxval {
                return Err(Error::parse(
                    at,
                    format!("pixel {v} exceeds maxval {maxval}"),
                ));
            }
            pixels.push(v as u8);
        }
        pixels
    };
    GrayImage::new(width, height, (maxval + 1) as u16, pixels)
}

/// Encodes an image as binary `P5`.
pub fn save_pgm(img: &GrayImage) -> Vec<u8> {
    let maxval = img.levels().max(2) - 1;
    let mut out = format!("P5\n{} {}\n{}\n", img.width(), img.height(), maxval).into_bytes();
    out.extend_from_slice(img.pixels());
    out
}

pub fn read_pgm_file(path: impl AsRef<Path>) -> Result<GrayImage> {
    let path = path.as_ref();
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    load_pgm(&bytes).map_err(|e| match e {
        Error::Parse { offset, msg } => Error::Parse {
            offset,
            msg: format!("{}: {msg}", path.display()),
        },
        Error::UnsupportedFormat(msg) => {
            Error::UnsupportedFormat(format!("{}: {msg}", path.display()))
        }
        other => other,
    })
}

pub fn write_pgm_file(path: impl AsRef<Path>, img: &GrayImage) -> Result<()> {
    let path = path.as_ref();
    fs::write(path, save_pgm(img)).map_err(|e| Error::io(path, e))
}
