use std::collections::VecDeque;

use super::conv::accumulate_tap;
use super::{DelayMap, Frame, Kernel};
use crate::error::{Error, Result};

/// Fixed-capacity history of consecutive frames, indexed by frame number.
///
/// Indices before the first pushed frame read as all-zero frames; indices
/// that were evicted or not yet pushed are errors.
#[derive(Debug, Clone)]
pub struct FrameRing {
    capacity: usize,
    width: usize,
    height: usize,
    frames: VecDeque<Frame>,
    first_t: Option<usize>,
}

impl FrameRing {
    pub fn new(capacity: usize, width: usize, height: usize) -> Result<Self> {
        if capacity == 0 {
            return Err(Error::invalid_param("ring capacity must be at least 1"));
        }
        if width == 0 || height == 0 {
            return Err(Error::invalid_input(
                "ring frame dimensions must be positive",
            ));
        }
        Ok(FrameRing {
            capacity,
            width,
            height,
            frames: VecDeque::with_capacity(capacity),
            first_t: None,
        })
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn len(&self) -> usize {
        self.frames.len()
    }

    pub fn is_empty(&self) -> bool {
        self.frames.is_empty()
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn height(&self) -> usize {
        self.height
    }

    pub fn newest(&self) -> Option<usize> {
        self.frames.back().map(Frame::t)
    }

    /// Appends the next frame; its index must follow the newest one.
    pub fn push(&mut self, frame: Frame) -> Result<()> {
        if frame.width() != self.width || frame.height() != self.height {
            return Err(Error::invalid_input(format!(
                "ring holds {}x{} frames, got {}x{}",
                self.width,
                self.height,
                frame.width(),
                frame.height()
            )));
        }
        if let Some(newest) = self.newest() {
            if frame.t() != newest + 1 {
                return Err(Error::invalid_input(format!(
                    "ring expects frame {}, got {}",
                    newest + 1,
                    frame.t()
                )));
            }
        } else {
            self.first_t = Some(frame.t());
        }
        if self.frames.len() == self.capacity {
            self.frames.pop_front();
        }
        self.frames.push_back(frame);
        Ok(())
    }

    /// `Ok(None)` means "before the sequence started" (a zero frame).
    pub fn lookup(&self, t: isize) -> Result<Option<&Frame>> {
        let (Some(first), Some(oldest), Some(newest)) = (
            self.first_t,
            self.frames.front().map(Frame::t),
            self.newest(),
        ) else {
            return if t < 0 {
                Ok(None)
            } else {
                Err(Error::OutOfWindow {
                    requested: t,
                    oldest: 0,
                    newest: 0,
                })
            };
        };
        if t < first as isize {
            return Ok(None);
        }
        if t < oldest as isize || t > newest as isize {
            return Err(Error::OutOfWindow {
                requested: t,
                oldest,
                newest,
            });
        }
        Ok(Some(&self.frames[t as usize - oldest]))
    }
}

/// Spatio-temporal inhibition: `out(x,y) = Σ P(x−u, y−v, t − d(u,v))·w(u,v)`.
pub fn delayed_lookup(
    ring: &FrameRing,
    t: usize,
    delays: &DelayMap,
    kernel: &Kernel,
) -> Result<Frame> {
    if ring.capacity() < delays.max_delay() + 1 {
        return Err(Error::InsufficientHistory(format!(
            "ring capacity {} cannot serve delays up to {}",
            ring.capacity(),
            delays.max_delay()
        )));
    }
    if delays.radius() != kernel.radius() {
        return Err(Error::invalid_input(format!(
            "delay map radius {} does not match kernel radius {}",
            delays.radius(),
            kernel.radius()
        )));
    }
    let (width, height) = (ring.width(), ring.height());
    let mut out = Frame::zeros(width, height, t)?;

    // resolve each distinct delay once
    let mut sources: Vec<Option<&Frame>> = Vec::with_capacity(delays.max_delay() + 1);
    for d in 0..=delays.max_delay() {
        let src = ring.lookup(t as isize - d as isize)?;
        sources.push(src.filter(|f| !f.is_zero()));
    }
    for ((u, v, w), &d) in kernel.taps().zip(delays.delays()) {
        if let Some(src) = sources[d] {
            accumulate_tap(out.data_mut(), src.data(), width, height, u, v, w);
        }
    }
    Ok(out)
}
