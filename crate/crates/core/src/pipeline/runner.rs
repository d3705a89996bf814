use super::dpc::{photoreceptor, DirectionalDpc, DirectionalMaps, DpcKernels};
use super::omj::{enhance, Omj, UnitGrid};
use super::params::{DpcParams, OppLodParams};
use crate::error::{Error, Result};
use crate::grid::{Frame, FrameRing, FrameSequence};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Roi {
    pub x: usize,
    pub y: usize,
    pub w: usize,
    pub h: usize,
}

impl Roi {
    pub fn center(&self) -> (f64, f64) {
        (
            self.x as f64 + self.w as f64 / 2.0,
            self.y as f64 + self.h as f64 / 2.0,
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResponseRecord {
    pub t: usize,
    pub response: f64,
    pub roi: Option<Roi>,
    /// Inhibition still reads synthetic zero history at this frame.
    pub warm_up: bool,
}

/// Every intermediate of one OppLoD step.
#[derive(Debug, Clone)]
pub struct StepDetail {
    pub record: ResponseRecord,
    pub photoreceptor: Frame,
    pub directional: DirectionalMaps,
    pub opponency: Frame,
    pub enhanced: Frame,
}

/// Photoreceptor state shared by both models: previous luminance frame
/// and the ring of past photoreceptor outputs.
#[derive(Debug, Clone)]
struct Front {
    prev: Option<Frame>,
    ring: FrameRing,
    t: usize,
}

impl Front {
    fn new(capacity: usize, width: usize, height: usize) -> Result<Self> {
        Ok(Front {
            prev: None,
            ring: FrameRing::new(capacity, width, height)?,
            t: 0,
        })
    }

    fn push(&mut self, frame: &Frame) -> Result<(usize, Frame)> {
        if frame.width() != self.ring.width() || frame.height() != self.ring.height() {
            return Err(Error::invalid_input(format!(
                "expected {}x{} frame, got {}x{}",
                self.ring.width(),
                self.ring.height(),
                frame.width(),
                frame.height()
            )));
        }
        if !frame.is_finite() {
            return Err(Error::invalid_input("frame contains non-finite values"));
        }
        let t = self.t;
        let p = match &self.prev {
            Some(prev) => photoreceptor(frame, prev)?.with_t(t),
            None => Frame::zeros(frame.width(), frame.height(), t)?,
        };
        self.ring.push(p.clone())?;
        self.prev = Some(frame.clone());
        self.t += 1;
        Ok((t, p))
    }
}

/// Streaming OppLoD detector.
#[derive(Debug, Clone)]
pub struct OppLod {
    front: Front,
    dpc: DirectionalDpc,
    omj: Omj,
    params: OppLodParams,
}

impl OppLod {
    pub fn new(params: OppLodParams, width: usize, height: usize) -> Result<Self> {
        params.validate()?;
        let dpc = DirectionalDpc::new(&params.dpc, &params.mde)?;
        let grid = UnitGrid::new(width, height, &params.grid)?;
        let omj = Omj::new(grid, &params.mde, params.omj)?;
        Ok(OppLod {
            front: Front::new(dpc.base.ring_capacity(), width, height)?,
            dpc,
            omj,
            params,
        })
    }

    pub fn params(&self) -> &OppLodParams {
        &self.params
    }

    pub fn grid(&self) -> &UnitGrid {
        self.omj.grid()
    }

    pub fn omj(&self) -> &Omj {
        &self.omj
    }

    pub fn max_delay(&self) -> usize {
        self.dpc.base.max_delay()
    }

    /// Photoreceptor frames retained.
    pub fn history_capacity(&self) -> usize {
        self.front.ring.capacity()
    }

    pub fn step(&mut self, frame: &Frame) -> Result<ResponseRecord> {
        Ok(self.step_detailed(frame)?.record)
    }

    pub fn step_detailed(&mut self, frame: &Frame) -> Result<StepDetail> {
        let (t, p) = self.front.push(frame)?;
        let directional = self.dpc.step(&self.front.ring, t)?;
        let opponency = self.omj.step(&directional)?;
        let enhanced = enhance(&opponency, &self.params.enhance)?;
        let area = (enhanced.width() * enhanced.height()) as f64;
        let record = ResponseRecord {
            t,
            response: enhanced.sum() / area,
            roi: bounding_box(&opponency, self.params.omj.screen_threshold),
            warm_up: t < self.max_delay() + 1,
        };
        Ok(StepDetail {
            record,
            photoreceptor: p,
            directional,
            opponency,
            enhanced,
        })
    }
}

/// Streaming D-LGMD baseline.
#[derive(Debug, Clone)]
pub struct DLgmd {
    front: Front,
    dpc: DpcKernels,
}

impl DLgmd {
    pub fn new(params: &DpcParams, width: usize, height: usize) -> Result<Self> {
        let dpc = DpcKernels::new(params)?;
        Ok(DLgmd {
            front: Front::new(dpc.ring_capacity(), width, height)?,
            dpc,
        })
    }

    pub fn max_delay(&self) -> usize {
        self.dpc.max_delay()
    }

    pub fn step(&mut self, frame: &Frame) -> Result<ResponseRecord> {
        Ok(self.step_map(frame)?.0)
    }

    /// Record plus the rectified S map.
    pub fn step_map(&mut self, frame: &Frame) -> Result<(ResponseRecord, Frame)> {
        let (t, _) = self.front.push(frame)?;
        let s = self.dpc.step(&self.front.ring, t)?;
        let record = ResponseRecord {
            t,
            response: s.sum() / (s.width() * s.height()) as f64,
            roi: None,
            warm_up: t < self.max_delay() + 1,
        };
        Ok((record, s))
    }
}

/// Bounding box of pixels strictly above `threshold`.
fn bounding_box(map: &Frame, threshold: f64) -> Option<Roi> {
    let (mut x0, mut y0, mut x1, mut y1) = (usize::MAX, usize::MAX, 0, 0);
    for y in 0..map.height() {
        for (x, &v) in map.row(y).iter().enumerate() {
            if v > threshold {
                x0 = x0.min(x);
                y0 = y0.min(y);
                x1 = x1.max(x);
                y1 = y1.max(y);
            }
        }
    }
    (x0 != usize::MAX).then(|| Roi {
        x: x0,
        y: y0,
        w: x1 - x0 + 1,
        h: y1 - y0 + 1,
    })
}

fn check_len(seq: &FrameSequence) -> Result<()> {
    if seq.len() < 2 {
        return Err(Error::invalid_input(format!(
            "need at least 2 frames, got {}",
            seq.len()
        )));
    }
    Ok(())
}

pub fn run_opplod(seq: &FrameSequence, params: &OppLodParams) -> Result<Vec<ResponseRecord>> {
    check_len(seq)?;
    let mut model = OppLod::new(params.clone(), seq.width(), seq.height())?;
    seq.iter().map(|f| model.step(f)).collect()
}

pub fn run_dlgmd(seq: &FrameSequence, params: &DpcParams) -> Result<Vec<ResponseRecord>> {
    check_len(seq)?;
    let mut model = DLgmd::new(params, seq.width(), seq.height())?;
    seq.iter().map(|f| model.step(f)).collect()
}
