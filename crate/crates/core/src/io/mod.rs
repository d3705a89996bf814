//! Frame ingestion and export, configuration files and CSV results.
//!
//! Sequences are either a directory of `frame_%06d.pgm` files or a single
//! `.raw` dump: an 8-byte header (width, height as little-endian u32) then
//! `width × height` unsigned bytes per frame. Intensities are scaled to
//! [0, 1] on load.

mod config;
mod csv;
mod pgm;

use std::fs;
use std::path::Path;

pub use config::{
    load_stimulus_spec, parse_stimulus_spec, stimulus_spec_to_string, Model, RunConfig,
};
pub use csv::{
    format_sig9, merge_rows, normalize, parse_csv, save_csv, save_rows, write_csv, CsvRow, HEADER,
};
pub use pgm::{decode_pnm, encode_pgm, luminance, quantize};

use crate::error::{Error, Result};
use crate::grid::{Frame, FrameSequence};

const RAW_HEADER: usize = 8;

pub fn frame_file_name(index: usize) -> String {
    format!("frame_{index:06}.pgm")
}

/// Frame number of a `frame_NNNNNN.pgm` name.
fn frame_index(name: &str) -> Option<usize> {
    let digits = name.strip_prefix("frame_")?.strip_suffix(".pgm")?;
    if digits.len() == 6 && digits.bytes().all(|b| b.is_ascii_digit()) {
        digits.parse().ok()
    } else {
        None
    }
}

pub fn load_sequence(path: &Path) -> Result<FrameSequence> {
    let meta = fs::metadata(path).map_err(|e| Error::io(path, e))?;
    if meta.is_dir() {
        load_pgm_dir(path)
    } else if path.extension().is_some_and(|e| e == "raw") {
        load_raw(path)
    } else {
        Err(Error::invalid_input(format!(
            "{}: expected a directory of PGM frames or a .raw file",
            path.display()
        )))
    }
}

fn load_pgm_dir(dir: &Path) -> Result<FrameSequence> {
    let mut numbered = Vec::new();
    for entry in fs::read_dir(dir).map_err(|e| Error::io(dir, e))? {
        let entry = entry.map_err(|e| Error::io(dir, e))?;
        if let Some(n) = entry.file_name().to_str().and_then(frame_index) {
            numbered.push((n, entry.path()));
        }
    }
    if numbered.is_empty() {
        return Err(Error::invalid_input(format!(
            "{}: no frame_NNNNNN.pgm files",
            dir.display()
        )));
    }
    numbered.sort();
    let mut frames = Vec::with_capacity(numbered.len());
    for (t, (_, p)) in numbered.iter().enumerate() {
        let bytes = fs::read(p).map_err(|e| Error::io(p, e))?;
        let frame = decode_pnm(&bytes, p, t)?;
        if let Some(first) = frames.first() {
            check_same(first, &frame, p)?;
        }
        frames.push(frame);
    }
    FrameSequence::new(frames)
}

fn check_same(first: &Frame, frame: &Frame, p: &Path) -> Result<()> {
    if first.same_shape(frame) {
        Ok(())
    } else {
        Err(Error::invalid_input(format!(
            "{}: frame is {}x{}, earlier frames are {}x{}",
            p.display(),
            frame.width(),
            frame.height(),
            first.width(),
            first.height()
        )))
    }
}

fn load_raw(path: &Path) -> Result<FrameSequence> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    let fail = |offset: usize, message: String| Error::Format {
        path: path.to_path_buf(),
        offset: offset as u64,
        message,
    };
    if bytes.len() < RAW_HEADER {
        return Err(fail(
            bytes.len(),
            format!("header needs {RAW_HEADER} bytes, file has {}", bytes.len()),
        ));
    }
    let width = u32::from_le_bytes(bytes[0..4].try_into().unwrap()) as usize;
    let height = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    if width == 0 {
        return Err(fail(0, "width must be positive".into()));
    }
    if height == 0 {
        return Err(fail(4, "height must be positive".into()));
    }
    let size = width
        .checked_mul(height)
        .ok_or_else(|| fail(0, "frame size overflows".into()))?;
    let payload = &bytes[RAW_HEADER..];
    if payload.is_empty() {
        return Err(fail(RAW_HEADER, "no frame data".into()));
    }
    if payload.len() % size != 0 {
        let whole = payload.len() / size;
        return Err(fail(
            bytes.len(),
            format!(
                "frame {whole} truncated: {} of {size} bytes",
                payload.len() % size
            ),
        ));
    }
    let frames = payload
        .chunks_exact(size)
        .enumerate()
        .map(|(t, c)| {
            Frame::from_vec(
                width,
                height,
                t,
                c.iter().map(|&b| b as f64 / 255.0).collect(),
            )
        })
        .collect::<Result<Vec<_>>>()?;
    FrameSequence::new(frames)
}

/// Writes `frame_%06d.pgm` files into `dir` (created if missing).
pub fn save_sequence(seq: &FrameSequence, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (i, f) in seq.iter().enumerate() {
        let p = dir.join(frame_file_name(i));
        fs::write(&p, encode_pgm(f)).map_err(|e| Error::io(&p, e))?;
    }
    Ok(())
}

pub fn save_raw(seq: &FrameSequence, path: &Path) -> Result<()> {
    let mut out = Vec::with_capacity(RAW_HEADER + seq.len() * seq.width() * seq.height());
    out.extend((seq.width() as u32).to_le_bytes());
    out.extend((seq.height() as u32).to_le_bytes());
    for f in seq.iter() {
        out.extend(quantize(f));
    }
    fs::write(path, out).map_err(|e| Error::io(path, e))
}
