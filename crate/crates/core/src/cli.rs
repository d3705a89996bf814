//! `opplod` command line.
//!
//! Exit status: 0 on success, 1 on usage errors, 2 on data, format, config
//! or I/O errors. Every failure prints one `ERROR <code>: <message>` line to
//! standard error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::io::{
    format_sig9, load_sequence, load_stimulus_spec, merge_rows, normalize, save_rows,
    save_sequence, RunConfig,
};
use crate::pipeline::{run_dlgmd, run_opplod, OppLodParams, ResponseRecord};
use crate::rmo::{rmo, MotionVector, Point, VectorPair, DEFAULT_TOLERANCE};
use crate::stimuli::{render, StimulusSpec};

#[derive(Debug, Parser)]
#[command(
    name = "opplod",
    version,
    about = "Looming detection on grayscale frame sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Render a synthetic stimulus to numbered PGM frames.
    Synth {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the detector(s) over a frame sequence and write per-frame CSV.
    Run {
        #[arg(long)]
        config: Option<PathBuf>,
        /// Directory of frame_NNNNNN.pgm files or a .raw dump.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, value_parser = ["opplod", "dlgmd", "both"])]
        model: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Divide each response column by its maximum.
        #[arg(long)]
        normalize: bool,
    },
    /// Peak OppLoD response per expansion angle of a stimulus.
    Tuning {
        #[arg(long)]
        spec: PathBuf,
        /// Comma-separated angles in degrees.
        #[arg(
            long,
            value_delimiter = ',',
            allow_hyphen_values = true,
            required = true
        )]
        angles: Vec<f64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
    },
    /// Radial motion opponency of vector pairs.
    Rmo {
        /// One pair per line: x1 y1 theta1 mag1 x2 y2 theta2 mag2 (degrees).
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        tolerance_deg: Option<f64>,
    },
}

pub fn cli_main<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run_cli(argv, &mut stdout.lock(), &mut stderr.lock())
}

/// [`cli_main`] with explicit output streams.
pub fn run_cli<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let msg = e.to_string();
            let first = msg
                .lines()
                .next()
                .unwrap_or("")
                .trim_start_matches("error: ");
            let _ = writeln!(err, "ERROR E_USAGE: {first}");
            return 1;
        }
    };
    match dispatch(cli.command, out) {
        Ok(()) => 0,
        Err(e) => {
            let _ = writeln!(
                err,
                "ERROR {}: {}",
                e.code(),
                e.to_string().replace('\n', " ")
            );
            2
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write) -> Result<()> {
    match command {
        Command::Synth { spec, out: dir } => synth(&spec, &dir, out),
        Command::Run {
            config,
            input,
            model,
            out: csv,
            normalize,
        } => run(config, input, model, csv, normalize, out),
        Command::Tuning {
            spec,
            angles,
            out: csv,
            config,
        } => tuning(&spec, &angles, &csv, config.as_deref(), out),
        Command::Rmo {
            pairs,
            out: csv,
            tolerance_deg,
        } => rmo_pairs(&pairs, &csv, tolerance_deg, out),
    }
}

fn say(out: &mut dyn Write, msg: String) -> Result<()> {
    writeln!(out, "{msg}").map_err(|e| Error::io("<stdout>", e))
}

fn synth(spec: &Path, dir: &Path, out: &mut dyn Write) -> Result<()> {
    let spec = load_stimulus_spec(spec)?;
    let seq = render(&spec)?;
    save_sequence(&seq, dir)?;
    say(
        out,
        format!("wrote {} frames to {}", seq.len(), dir.display()),
    )
}

fn run(
    config: Option<PathBuf>,
    input: Option<PathBuf>,
    model: Option<String>,
    csv: Option<PathBuf>,
    normalize_rows: bool,
    out: &mut dyn Write,
) -> Result<()> {
    let cfg = match &config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let input = input
        .or_else(|| cfg.input.clone())
        .ok_or_else(|| Error::invalid_input("no input given (--in or `input` in the config)"))?;
    let csv = csv
        .or_else(|| cfg.output.clone())
        .ok_or_else(|| Error::invalid_input("no output given (--out or `output` in the config)"))?;
    let model = match model {
        Some(m) => m.parse()?,
        None => cfg.model.unwrap_or_default(),
    };

    let seq = load_sequence(&input)?;
    let opplod = if model.includes_opplod() {
        Some(run_opplod(&seq, &cfg.opplod_params()?)?)
    } else {
        None
    };
    let dlgmd = if model.includes_dlgmd() {
        Some(run_dlgmd(&seq, &cfg.dlgmd_params()?)?)
    } else {
        None
    };
    let mut rows = merge_rows(opplod.as_deref(), dlgmd.as_deref())?;
    if normalize_rows {
        normalize(&mut rows);
    }
    save_rows(&rows, &csv)?;
    say(
        out,
        format!(
            "{}: {} frames, model {model}, wrote {}",
            input.display(),
            seq.len(),
            csv.display()
        ),
    )
}

/// Largest post-warm-up response (0 when every frame is warm-up).
pub fn peak_response(records: &[ResponseRecord]) -> f64 {
    records
        .iter()
        .filter(|r| !r.warm_up)
        .map(|r| r.response)
        .fold(0.0, f64::max)
}

/// `(angle_deg, peak)` per angle, sorted by angle; sequences run in parallel.
pub fn tuning_peaks(
    base: &StimulusSpec,
    angles_deg: &[f64],
    params: &OppLodParams,
) -> Result<Vec<(f64, f64)>> {
    if angles_deg.is_empty() {
        return Err(Error::invalid_input("no tuning angles"));
    }
    if angles_deg.iter().any(|a| !a.is_finite()) {
        return Err(Error::invalid_input("tuning angles must be finite"));
    }
    let mut angles = angles_deg.to_vec();
    angles.sort_by(f64::total_cmp);
    angles
        .par_iter()
        .map(|&deg| {
            let seq = render(&StimulusSpec {
                bar_angle: deg.to_radians(),
                ..*base
            })?;
            Ok((deg, peak_response(&run_opplod(&seq, params)?)))
        })
        .collect()
}

fn tuning(
    spec: &Path,
    angles: &[f64],
    csv: &Path,
    config: Option<&Path>,
    out: &mut dyn Write,
) -> Result<()> {
    let base = load_stimulus_spec(spec)?;
    let cfg = match config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let peaks = tuning_peaks(&base, angles, &cfg.opplod_params()?)?;
    let mut text = String::from("angle_deg,peak_response\n");
    for (a, p) in &peaks {
        text.push_str(&format!("{},{}\n", format_sig9(*a), format_sig9(*p)));
    }
    fs::write(csv, text).map_err(|e| Error::io(csv, e))?;
    say(
        out,
        format!("{} angles, wrote {}", peaks.len(), csv.display()),
    )
}

fn parse_pairs(path: &Path, text: &str, tolerance: f64) -> Result<Vec<VectorPair>> {
    let mut pairs = Vec::new();
    let mut offset = 0usize;
    for line in text.split_inclusive('\n') {
        let start = offset;
        offset += line.len();
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let fail = |message: String| Error::Format {
            path: path.to_path_buf(),
            offset: start as u64,
            message,
        };
        let nums: Vec<f64> = content
            .split_whitespace()
            .map(|s| {
                s.parse::<f64>()
                    .map_err(|_| fail(format!("not a number: '{s}'")))
            })
            .collect::<Result<_>>()?;
        if nums.len() != 8 {
            return Err(fail(format!("expected 8 numbers, got {}", nums.len())));
        }
        let v = |i: usize| {
            MotionVector::new(
                Point::new(nums[i], nums[i + 1]),
                nums[i + 2].to_radians(),
                nums[i + 3],
            )
            .map_err(|e| fail(e.to_string()))
        };
        pairs.push(VectorPair::with_tolerance(v(0)?, v(4)?, tolerance)?);
    }
    Ok(pairs)
}

fn rmo_pairs(
    pairs: &Path,
    csv: &Path,
    tolerance_deg: Option<f64>,
    out: &mut dyn Write,
) -> Result<()> {
    let tolerance = tolerance_deg.map_or(DEFAULT_TOLERANCE, f64::to_radians);
    let text = fs::read_to_string(pairs).map_err(|e| Error::io(pairs, e))?;
    let parsed = parse_pairs(pairs, &text, tolerance)?;
    let mut body = String::from("pair_index,qualifies,rmo\n");
    for (i, p) in parsed.iter().enumerate() {
        let r = rmo(p);
        body.push_str(&format!(
            "{i},{},{}\n",
            u8::from(r.qualifies),
            format_sig9(r.rmo)
        ));
    }
    fs::write(csv, body).map_err(|e| Error::io(csv, e))?;
    say(
        out,
        format!("{} pairs, wrote {}", parsed.len(), csv.display()),
    )
}
