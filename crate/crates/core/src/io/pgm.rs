use std::path::Path;

use crate::error::{Error, Result};
use crate::grid::Frame;

/// Luminance weights for color input.
pub fn luminance(r: u8, g: u8, b: u8) -> f64 {
    0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64
}

struct Header<'a> {
    bytes: &'a [u8],
    pos: usize,
    path: &'a Path,
}

impl Header<'_> {
    fn fail(&self, message: impl Into<String>) -> Error {
        Error::Format {
            path: self.path.to_path_buf(),
            offset: self.pos as u64,
            message: message.into(),
        }
    }

    fn skip_space_and_comments(&mut self) {
        while let Some(&b) = self.bytes.get(self.pos) {
            if b == b'#' {
                while let Some(&c) = self.bytes.get(self.pos) {
                    if c == b'\n' || c == b'\r' {
                        break;
                    }
                    self.pos += 1;
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
            return Err(self.fail(format!("expected {what}")));
        }
        std::str::from_utf8(&self.bytes[start..self.pos])
            .ok()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| {
                self.pos = start;
                self.fail(format!("{what} out of range"))
            })
    }
}

/// Decodes a binary PGM (P5) or PPM (P6) image with maxval 255 into
/// intensities in [0, 1]. Color is reduced to luminance.
pub fn decode_pnm(bytes: &[u8], path: &Path, t: usize) -> Result<Frame> {
    let mut h = Header {
        bytes,
        pos: 0,
        path,
    };
    let channels = match bytes.get(..2) {
        Some(b"P5") => 1,
        Some(b"P6") => 3,
        _ => return Err(h.fail("not a binary PGM (expected P5 magic)")),
    };
    h.pos = 2;
    if !bytes
        .get(2)
        .is_some_and(|b| b.is_ascii_whitespace() || *b == b'#')
    {
        return Err(h.fail("expected whitespace after magic"));
    }
    let width = h.number("width")?;
    let height = h.number("height")?;
    if width == 0 || height == 0 {
        return Err(h.fail("image dimensions must be positive"));
    }
    h.skip_space_and_comments();
    let maxval_at = h.pos;
    let maxval = h.number("maxval")?;
    if maxval != 255 {
        h.pos = maxval_at;
        return Err(h.fail(format!("maxval must be 255, got {maxval}")));
    }
    if !bytes.get(h.pos).is_some_and(u8::is_ascii_whitespace) {
        return Err(h.fail("expected a single whitespace byte before pixel data"));
    }
    h.pos += 1;
    let need = width
        .checked_mul(height)
        .and_then(|n| n.checked_mul(channels))
        .ok_or_else(|| h.fail("image too large"))?;
    let payload = &bytes[h.pos..];
    if payload.len() < need {
        h.pos = bytes.len();
        return Err(h.fail(format!(
            "pixel data truncated: need {need} bytes, found {}",
            payload.len()
        )));
    }
    if payload.len() > need {
        h.pos += need;
        return Err(h.fail("trailing bytes after pixel data"));
    }
    let data = if channels == 1 {
        payload.iter().map(|&b| b as f64 / 255.0).collect()
    } else {
        payload
            .chunks_exact(3)
            .map(|c| luminance(c[0], c[1], c[2]) / 255.0)
            .collect()
    };
    Frame::from_vec(width, height, t, data)
}

/// Quantizes [0, 1] intensities to bytes (clamped, round half away from zero).
pub fn quantize(frame: &Frame) -> Vec<u8> {
    frame
        .data()
        .iter()
        .map(|&v| (v.clamp(0.0, 1.0) * 255.0).round() as u8)
        .collect()
}

pub fn encode_pgm(frame: &Frame) -> Vec<u8> {
    let mut out = format!("P5\n{} {}\n255\n", frame.width(), frame.height()).into_bytes();
    out.extend(quantize(frame));
    out
}
