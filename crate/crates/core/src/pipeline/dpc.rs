use super::mde::build_direction_kernels;
use super::params::{DpcParams, MdeParams};
use crate::error::{Error, Result};
use crate::grid::{
    convolve, delay_map, delayed_lookup, gaussian_kernel, BoundaryPolicy, DelayMap, Frame,
    FrameRing, Kernel,
};

/// `|curr − prev|` per pixel.
pub fn photoreceptor(curr: &Frame, prev: &Frame) -> Result<Frame> {
    if !curr.same_shape(prev) {
        return Err(Error::invalid_input(format!(
            "photoreceptor frames differ in size: {}x{} vs {}x{}",
            curr.width(),
            curr.height(),
            prev.width(),
            prev.height()
        )));
    }
    Ok(curr.zip_map(prev, |a, b| (a - b).abs())?.with_t(curr.t()))
}

/// Excitation kernel, isotropic inhibition kernel and inhibition delays.
#[derive(Debug, Clone)]
pub struct DpcKernels {
    pub excitation: Kernel,
    pub inhibition: Kernel,
    pub delays: DelayMap,
    pub gain: f64,
}

impl DpcKernels {
    pub fn new(params: &DpcParams) -> Result<Self> {
        params.validate()?;
        Ok(DpcKernels {
            excitation: gaussian_kernel(params.sigma_e, params.kernel_radius)?,
            inhibition: gaussian_kernel(params.sigma_i, params.kernel_radius)?,
            delays: delay_map(
                params.tau_alpha,
                params.tau_beta,
                params.tau_lambda,
                params.kernel_radius,
            )?,
            gain: params.inhibition_gain,
        })
    }

    pub fn max_delay(&self) -> usize {
        self.delays.max_delay()
    }

    /// Frames of history (including the current one) the ring must hold.
    pub fn ring_capacity(&self) -> usize {
        self.delays.max_delay() + 1
    }

    pub fn excite(&self, ring: &FrameRing, t: usize) -> Result<Frame> {
        let p = current(ring, t)?;
        convolve(p, &self.excitation, BoundaryPolicy::ZeroPad)
    }

    pub fn inhibit(&self, ring: &FrameRing, t: usize) -> Result<Frame> {
        delayed_lookup(ring, t, &self.delays, &self.inhibition)
    }

    /// `ReLU(E − gain·I)` with the isotropic inhibition.
    pub fn step(&self, ring: &FrameRing, t: usize) -> Result<Frame> {
        let e = self.excite(ring, t)?;
        let i = self.inhibit(ring, t)?;
        Ok(rectified_difference(&e, &i, self.gain))
    }
}

fn current(ring: &FrameRing, t: usize) -> Result<&Frame> {
    ring.lookup(t as isize)?
        .ok_or_else(|| Error::InsufficientHistory(format!("frame {t} is not in the history ring")))
}

fn rectified_difference(e: &Frame, i: &Frame, gain: f64) -> Frame {
    let mut s = e.clone();
    for (o, &inh) in s.data_mut().iter_mut().zip(i.data()) {
        *o = (*o - gain * inh).max(0.0);
    }
    s
}

/// Isotropic DPC output `S = ReLU(E − gain·I)` for frame `t` of a ring of
/// photoreceptor frames.
pub fn dpc_step(ring: &FrameRing, t: usize, params: &DpcParams) -> Result<Frame> {
    DpcKernels::new(params)?.step(ring, t)
}

/// One rectified map per motion direction, in the order of the directions.
#[derive(Debug, Clone, PartialEq)]
pub struct DirectionalMaps {
    directions: Vec<f64>,
    maps: Vec<Frame>,
}

impl DirectionalMaps {
    pub fn new(directions: Vec<f64>, maps: Vec<Frame>) -> Result<Self> {
        if directions.len() != maps.len() || maps.is_empty() {
            return Err(Error::invalid_input(format!(
                "{} directions but {} maps",
                directions.len(),
                maps.len()
            )));
        }
        if maps.iter().any(|m| !m.same_shape(&maps[0])) {
            return Err(Error::invalid_input("directional maps differ in size"));
        }
        if maps
            .iter()
            .any(|m| m.data().iter().any(|&v| v.is_nan() || v < 0.0))
        {
            return Err(Error::invalid_input("directional maps must be nonnegative"));
        }
        Ok(DirectionalMaps { directions, maps })
    }

    pub fn directions(&self) -> &[f64] {
        &self.directions
    }

    pub fn maps(&self) -> &[Frame] {
        &self.maps
    }

    pub fn width(&self) -> usize {
        self.maps[0].width()
    }

    pub fn height(&self) -> usize {
        self.maps[0].height()
    }

    pub fn len(&self) -> usize {
        self.maps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.maps.is_empty()
    }
}

/// DPC front end with one direction-weighted inhibition kernel per channel.
#[derive(Debug, Clone)]
pub struct DirectionalDpc {
    pub base: DpcKernels,
    directions: Vec<f64>,
    kernels: Vec<Kernel>,
}

impl DirectionalDpc {
    pub fn new(params: &DpcParams, mde: &MdeParams) -> Result<Self> {
        Ok(DirectionalDpc {
            base: DpcKernels::new(params)?,
            directions: mde.directions().to_vec(),
            kernels: build_direction_kernels(params, mde)?,
        })
    }

    pub fn directions(&self) -> &[f64] {
        &self.directions
    }

    pub fn kernels(&self) -> &[Kernel] {
        &self.kernels
    }

    /// Unrectified `I_θ` per direction.
    pub fn inhibitions(&self, ring: &FrameRing, t: usize) -> Result<Vec<Frame>> {
        self.kernels
            .iter()
            .map(|k| delayed_lookup(ring, t, &self.base.delays, k))
            .collect()
    }

    pub fn step(&self, ring: &FrameRing, t: usize) -> Result<DirectionalMaps> {
        let e = self.base.excite(ring, t)?;
        let maps = self
            .inhibitions(ring, t)?
            .iter()
            .map(|i| rectified_difference(&e, i, self.base.gain))
            .collect();
        Ok(DirectionalMaps {
            directions: self.directions.clone(),
            maps,
        })
    }
}

/// `S_θ = ReLU(E − gain·I_θ)` for every direction.
pub fn directional_dpc_step(
    ring: &FrameRing,
    t: usize,
    params: &DpcParams,
    mde: &MdeParams,
) -> Result<DirectionalMaps> {
    DirectionalDpc::new(params, mde)?.step(ring, t)
}
