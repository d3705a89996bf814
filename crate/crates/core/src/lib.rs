//! Looming detection on grayscale image sequences.
//!
//! The detector fuses a distributed presynaptic connection (DPC) layer, which
//! filters for fast edge motion, with four direction-selective inhibition
//! channels and a zoned opponency stage that only passes radially opposing
//! (outward) motion. An isotropic D-LGMD baseline is provided for comparison.
//!
//! Module map:
//! - [`grid`]: frames, kernels, zero-padded convolution, delayed history lookup
//! - [`rmo`]: geometric radial-opponent-motion test and opponency ratio
//! - [`pipeline`]: the detector stages and the sequence runners
//! - [`stimuli`]: deterministic synthetic test sequences
//! - [`io`] and [`cli`]: PGM/raw ingestion, config files, CSV output, CLI

pub mod cli;
pub mod error;
pub mod grid;
pub mod io;
pub mod pipeline;
pub mod rmo;
pub mod stimuli;

pub use error::{Error, Result};
pub use grid::{Frame, FrameSequence, Kernel};
