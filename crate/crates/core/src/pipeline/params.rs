use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::rmo::wrap_angle;

/// Excitation/inhibition constants of the DPC layer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DpcParams {
    pub sigma_e: f64,
    pub sigma_i: f64,
    pub kernel_radius: usize,
    /// Constant offset of the inhibition latency, in frames.
    pub tau_alpha: f64,
    pub tau_beta: f64,
    pub tau_lambda: f64,
    /// Weight of inhibition against excitation before rectification.
    pub inhibition_gain: f64,
}

/// Inhibition gain used by the directional (OppLoD) front end.
pub const OPPLOD_INHIBITION_GAIN: f64 = 5.0;

/// Inhibition gain used by the isotropic D-LGMD baseline.
pub const DLGMD_INHIBITION_GAIN: f64 = 1.0;

impl Default for DpcParams {
    fn default() -> Self {
        DpcParams {
            sigma_e: 1.0,
            sigma_i: 2.0,
            kernel_radius: 6,
            tau_alpha: 0.0,
            tau_beta: 1.0,
            tau_lambda: 0.25,
            inhibition_gain: OPPLOD_INHIBITION_GAIN,
        }
    }
}

impl DpcParams {
    /// Defaults for the isotropic baseline.
    pub fn baseline() -> Self {
        DpcParams {
            inhibition_gain: DLGMD_INHIBITION_GAIN,
            ..DpcParams::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        positive("sigma_e", self.sigma_e)?;
        positive("sigma_i", self.sigma_i)?;
        if self.kernel_radius < 1 {
            return Err(Error::invalid_param("kernel_radius must be at least 1"));
        }
        positive("tau_beta", self.tau_beta)?;
        finite("tau_alpha", self.tau_alpha)?;
        finite("tau_lambda", self.tau_lambda)?;
        if !(self.inhibition_gain.is_finite() && self.inhibition_gain >= 0.0) {
            return Err(Error::invalid_param(format!(
                "inhibition_gain must be finite and >= 0, got {}",
                self.inhibition_gain
            )));
        }
        Ok(())
    }
}

/// Preferred directions of the motion-direction channels (radians, y up).
#[derive(Debug, Clone, PartialEq)]
pub struct MdeParams {
    directions: Vec<f64>,
}

impl Default for MdeParams {
    fn default() -> Self {
        MdeParams {
            directions: vec![PI / 4.0, 3.0 * PI / 4.0, 5.0 * PI / 4.0, 7.0 * PI / 4.0],
        }
    }
}

impl MdeParams {
    /// Every direction needs its opposite (θ + π) in the set.
    pub fn new(directions: Vec<f64>) -> Result<Self> {
        let params = MdeParams {
            directions: directions.into_iter().map(wrap_angle).collect(),
        };
        params.opposing_pairs()?;
        Ok(params)
    }

    pub fn directions(&self) -> &[f64] {
        &self.directions
    }

    /// Index pairs `(i, j)` with `directions[j] = directions[i] + π`, `i < j`.
    pub fn opposing_pairs(&self) -> Result<Vec<(usize, usize)>> {
        if self.directions.is_empty() {
            return Err(Error::invalid_param(
                "at least one direction pair is required",
            ));
        }
        let mut partner = vec![None; self.directions.len()];
        for (i, &a) in self.directions.iter().enumerate() {
            for (j, &b) in self.directions.iter().enumerate() {
                if i != j && angular_distance(wrap_angle(a + PI), b) < 1e-9 {
                    partner[i] = Some(j);
                }
            }
        }
        let mut pairs = Vec::new();
        for (i, p) in partner.iter().enumerate() {
            match p {
                Some(j) if i < *j => pairs.push((i, *j)),
                Some(_) => {}
                None => {
                    return Err(Error::invalid_param(format!(
                        "direction {:.6} rad has no opposing direction",
                        self.directions[i]
                    )))
                }
            }
        }
        Ok(pairs)
    }
}

fn angular_distance(a: f64, b: f64) -> f64 {
    let d = wrap_angle(a - b);
    d.min(2.0 * PI - d)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmjParams {
    /// Opponency values at or below this are discarded as noise.
    pub screen_threshold: f64,
    pub periphery_strength: f64,
}

impl Default for OmjParams {
    fn default() -> Self {
        OmjParams {
            screen_threshold: 0.05,
            periphery_strength: 1.0,
        }
    }
}

impl OmjParams {
    pub fn validate(&self) -> Result<()> {
        if !(self.screen_threshold.is_finite() && self.screen_threshold >= 0.0) {
            return Err(Error::invalid_param(
                "screen_threshold must be finite and >= 0",
            ));
        }
        if !(self.periphery_strength.is_finite() && self.periphery_strength >= 0.0) {
            return Err(Error::invalid_param(
                "periphery_strength must be finite and >= 0",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnhanceParams {
    pub c2: f64,
}

impl Default for EnhanceParams {
    fn default() -> Self {
        EnhanceParams { c2: 10.0 }
    }
}

impl EnhanceParams {
    pub fn validate(&self) -> Result<()> {
        positive("c2", self.c2)
    }
}

/// How units are laid over the frame; resolved into a
/// [`UnitGrid`](super::UnitGrid) once frame dimensions are known.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub rows: usize,
    pub cols: usize,
    pub overlap: f64,
    /// Explicit receptive-field size; derived from the frame when `None`.
    pub rf_width: Option<usize>,
    pub rf_height: Option<usize>,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            rows: 5,
            cols: 5,
            overlap: 0.0,
            rf_width: None,
            rf_height: None,
        }
    }
}

/// Everything the OppLoD runner needs.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct OppLodParams {
    pub dpc: DpcParams,
    pub mde: MdeParams,
    pub omj: OmjParams,
    pub enhance: EnhanceParams,
    pub grid: GridSpec,
}

impl OppLodParams {
    pub fn validate(&self) -> Result<()> {
        self.dpc.validate()?;
        self.mde.opposing_pairs()?;
        self.omj.validate()?;
        self.enhance.validate()
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid_param(format!(
            "{name} must be positive, got {v}"
        )))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid_param(format!(
            "{name} must be finite, got {v}"
        )))
    }
}
