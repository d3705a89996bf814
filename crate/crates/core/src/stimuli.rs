//! Synthetic looming and distractor sequences.
//!
//! Pixel `(i, j)` covers `[i, i+1) × [j, j+1)` with y pointing down; its value
//! is the background blended toward the foreground by the fraction of 2×2
//! sub-samples that fall inside the shape. Angles follow the math convention
//! (counterclockwise from +x, y up).

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::grid::{Frame, FrameSequence};
use crate::rmo::Point;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StimulusKind {
    ExpandingBar,
    ExpandingDisk,
    ContractingDisk,
    TranslatingBlock,
}

impl StimulusKind {
    pub fn as_str(&self) -> &'static str {
        match self {
            StimulusKind::ExpandingBar => "expanding_bar",
            StimulusKind::ExpandingDisk => "expanding_disk",
            StimulusKind::ContractingDisk => "contracting_disk",
            StimulusKind::TranslatingBlock => "translating_block",
        }
    }
}

impl fmt::Display for StimulusKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StimulusKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "expanding_bar" => Ok(StimulusKind::ExpandingBar),
            "expanding_disk" => Ok(StimulusKind::ExpandingDisk),
            "contracting_disk" => Ok(StimulusKind::ContractingDisk),
            "translating_block" => Ok(StimulusKind::TranslatingBlock),
            other => Err(Error::invalid_param(format!(
                "unknown stimulus kind '{other}'"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StimulusSpec {
    pub kind: StimulusKind,
    pub width: usize,
    pub height: usize,
    pub frames: usize,
    pub center: Point,
    /// Growth per frame of the radius / bar half-length, or block speed.
    pub rate: f64,
    /// Starting radius / bar half-length; half the side for blocks.
    pub initial_size: f64,
    pub foreground: f64,
    pub background: f64,
    /// Expansion axis of bars, direction of travel of blocks (radians).
    pub bar_angle: f64,
    /// Bar thickness as an angular-width analogue: `height · deg / 180`.
    pub bar_extent_deg: f64,
}

impl Default for StimulusSpec {
    fn default() -> Self {
        StimulusSpec {
            kind: StimulusKind::ExpandingDisk,
            width: 200,
            height: 200,
            frames: 50,
            center: Point::new(100.0, 100.0),
            rate: 2.0,
            initial_size: 10.0,
            foreground: 0.0,
            background: 1.0,
            bar_angle: 0.0,
            bar_extent_deg: 10.0,
        }
    }
}

impl StimulusSpec {
    pub fn validate(&self) -> Result<()> {
        if self.width == 0 || self.height == 0 {
            return Err(Error::invalid_input(format!(
                "stimulus frame must have positive area, got {}x{}",
                self.width, self.height
            )));
        }
        if self.frames < 2 {
            return Err(Error::invalid_param(format!(
                "stimulus needs at least 2 frames, got {}",
                self.frames
            )));
        }
        let finite = [
            self.center.x,
            self.center.y,
            self.rate,
            self.initial_size,
            self.bar_angle,
            self.bar_extent_deg,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid_param("stimulus geometry must be finite"));
        }
        if self.rate < 0.0 || self.initial_size < 0.0 || self.bar_extent_deg < 0.0 {
            return Err(Error::invalid_param(
                "rate, initial_size and bar_extent_deg must be non-negative",
            ));
        }
        for v in [self.foreground, self.background] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::invalid_param(format!(
                    "intensities must lie in [0, 1], got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Disk radius at frame `t` (for both disk kinds).
    pub fn radius_at(&self, t: usize) -> f64 {
        match self.kind {
            StimulusKind::ContractingDisk => {
                self.initial_size + self.rate * (self.frames - 1 - t) as f64
            }
            _ => self.initial_size + self.rate * t as f64,
        }
    }

    /// Shape center at frame `t`; only blocks move.
    pub fn center_at(&self, t: usize) -> Point {
        match self.kind {
            StimulusKind::TranslatingBlock => {
                let s = (t as f64 - (self.frames - 1) as f64 / 2.0) * self.rate;
                Point::new(
                    self.center.x + s * self.bar_angle.cos(),
                    self.center.y - s * self.bar_angle.sin(),
                )
            }
            _ => self.center,
        }
    }

    fn inside(&self, t: usize) -> impl Fn(f64, f64) -> bool + '_ {
        let c = self.center_at(t);
        let (sin, cos) = self.bar_angle.sin_cos();
        let r = self.radius_at(t);
        let half_len = self.initial_size + self.rate * t as f64;
        let half_thick = self.height as f64 * self.bar_extent_deg / 180.0 / 2.0;
        let half_side = self.initial_size;
        move |x, y| {
            let dx = x - c.x;
            let dy = y - c.y;
            match self.kind {
                StimulusKind::ExpandingDisk | StimulusKind::ContractingDisk => {
                    dx * dx + dy * dy <= r * r
                }
                StimulusKind::ExpandingBar => {
                    let up = -dy;
                    let along = dx * cos + up * sin;
                    let across = -dx * sin + up * cos;
                    along.abs() <= half_len && across.abs() <= half_thick
                }
                StimulusKind::TranslatingBlock => dx.abs() <= half_side && dy.abs() <= half_side,
            }
        }
    }

    fn render_frame(&self, t: usize) -> Result<Frame> {
        let inside = self.inside(t);
        let (fg, bg) = (self.foreground, self.background);
        Frame::from_fn(self.width, self.height, t, |i, j| {
            let mut hits = 0u32;
            for sy in [0.25, 0.75] {
                for sx in [0.25, 0.75] {
                    if inside(i as f64 + sx, j as f64 + sy) {
                        hits += 1;
                    }
                }
            }
            bg + (fg - bg) * (hits as f64 / 4.0)
        })
    }
}

pub fn render(spec: &StimulusSpec) -> Result<FrameSequence> {
    spec.validate()?;
    let frames = (0..spec.frames)
        .map(|t| spec.render_frame(t))
        .collect::<Result<Vec<_>>>()?;
    FrameSequence::new(frames)
}

/// One rendering per expansion-axis angle (radians), in the given order.
pub fn tuning_sweep(base: &StimulusSpec, angles: &[f64]) -> Result<Vec<FrameSequence>> {
    if angles.is_empty() {
        return Err(Error::invalid_input(
            "tuning sweep needs at least one angle",
        ));
    }
    angles
        .iter()
        .map(|&a| {
            render(&StimulusSpec {
                bar_angle: a,
                ..*base
            })
        })
        .collect()
}
