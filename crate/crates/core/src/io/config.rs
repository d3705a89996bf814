//! `key = value` configuration files.
//!
//! Blank lines and text after `#` are ignored. Keys may appear at most once;
//! unknown keys are rejected.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pipeline::{
    DpcParams, EnhanceParams, GridSpec, MdeParams, OmjParams, OppLodParams, DLGMD_INHIBITION_GAIN,
};
use crate::rmo::Point;
use crate::stimuli::StimulusSpec;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Model {
    OppLod,
    DLgmd,
    #[default]
    Both,
}

impl Model {
    pub fn as_str(&self) -> &'static str {
        match self {
            Model::OppLod => "opplod",
            Model::DLgmd => "dlgmd",
            Model::Both => "both",
        }
    }

    pub fn includes_opplod(&self) -> bool {
        matches!(self, Model::OppLod | Model::Both)
    }

    pub fn includes_dlgmd(&self) -> bool {
        matches!(self, Model::DLgmd | Model::Both)
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "opplod" => Ok(Model::OppLod),
            "dlgmd" => Ok(Model::DLgmd),
            "both" => Ok(Model::Both),
            other => Err(Error::invalid_param(format!(
                "unknown model '{other}' (expected opplod, dlgmd or both)"
            ))),
        }
    }
}

/// Every tunable of a run, plus optional default paths and model choice.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub dpc: DpcParams,
    pub dlgmd_inhibition_gain: f64,
    /// Channel directions in degrees.
    pub directions_deg: Vec<f64>,
    pub omj: OmjParams,
    pub enhance: EnhanceParams,
    pub grid: GridSpec,
    pub input: Option<PathBuf>,
    pub model: Option<Model>,
    pub output: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            dpc: DpcParams::default(),
            dlgmd_inhibition_gain: DLGMD_INHIBITION_GAIN,
            directions_deg: vec![45.0, 135.0, 225.0, 315.0],
            omj: OmjParams::default(),
            enhance: EnhanceParams::default(),
            grid: GridSpec::default(),
            input: None,
            model: None,
            output: None,
        }
    }
}

impl RunConfig {
    pub fn mde(&self) -> Result<MdeParams> {
        MdeParams::new(self.directions_deg.iter().map(|d| d.to_radians()).collect())
    }

    pub fn opplod_params(&self) -> Result<OppLodParams> {
        let p = OppLodParams {
            dpc: self.dpc,
            mde: self.mde()?,
            omj: self.omj,
            enhance: self.enhance,
            grid: self.grid,
        };
        p.validate()?;
        Ok(p)
    }

    pub fn dlgmd_params(&self) -> Result<DpcParams> {
        let p = DpcParams {
            inhibition_gain: self.dlgmd_inhibition_gain,
            ..self.dpc
        };
        p.validate()?;
        Ok(p)
    }

    pub fn validate(&self) -> Result<()> {
        self.opplod_params()?;
        self.dlgmd_params()?;
        if self.grid.rows == 0 || self.grid.cols == 0 {
            return Err(Error::invalid_param(
                "unit_rows and unit_cols must be positive",
            ));
        }
        if !(0.0..1.0).contains(&self.grid.overlap) {
            return Err(Error::invalid_param("overlap must be in [0, 1)"));
        }
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        text.parse()
    }

    pub fn to_config_string(&self) -> String {
        let mut s = String::new();
        let mut put = |k: &str, v: String| s.push_str(&format!("{k} = {v}\n"));
        put("sigma_e", self.dpc.sigma_e.to_string());
        put("sigma_i", self.dpc.sigma_i.to_string());
        put("kernel_radius", self.dpc.kernel_radius.to_string());
        put("tau_alpha", self.dpc.tau_alpha.to_string());
        put("tau_beta", self.dpc.tau_beta.to_string());
        put("tau_lambda", self.dpc.tau_lambda.to_string());
        put("inhibition_gain", self.dpc.inhibition_gain.to_string());
        put(
            "dlgmd_inhibition_gain",
            self.dlgmd_inhibition_gain.to_string(),
        );
        put(
            "directions_deg",
            self.directions_deg
                .iter()
                .map(f64::to_string)
                .collect::<Vec<_>>()
                .join(", "),
        );
        put("screen_threshold", self.omj.screen_threshold.to_string());
        put(
            "periphery_strength",
            self.omj.periphery_strength.to_string(),
        );
        put("c2", self.enhance.c2.to_string());
        put("unit_rows", self.grid.rows.to_string());
        put("unit_cols", self.grid.cols.to_string());
        put("overlap", self.grid.overlap.to_string());
        if let Some(w) = self.grid.rf_width {
            put("rf_width", w.to_string());
        }
        if let Some(h) = self.grid.rf_height {
            put("rf_height", h.to_string());
        }
        if let Some(p) = &self.input {
            put("input", p.display().to_string());
        }
        if let Some(m) = self.model {
            put("model", m.to_string());
        }
        if let Some(p) = &self.output {
            put("output", p.display().to_string());
        }
        s
    }
}

impl FromStr for RunConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut c = RunConfig::default();
        for entry in entries(text)? {
            let v = &entry;
            match entry.key.as_str() {
                "sigma_e" => c.dpc.sigma_e = v.float()?,
                "sigma_i" => c.dpc.sigma_i = v.float()?,
                "kernel_radius" => c.dpc.kernel_radius = v.uint()?,
                "tau_alpha" => c.dpc.tau_alpha = v.float()?,
                "tau_beta" => c.dpc.tau_beta = v.float()?,
                "tau_lambda" => c.dpc.tau_lambda = v.float()?,
                "inhibition_gain" => c.dpc.inhibition_gain = v.float()?,
                "dlgmd_inhibition_gain" => c.dlgmd_inhibition_gain = v.float()?,
                "directions_deg" => c.directions_deg = v.float_list()?,
                "screen_threshold" => c.omj.screen_threshold = v.float()?,
                "periphery_strength" => c.omj.periphery_strength = v.float()?,
                "c2" => c.enhance.c2 = v.float()?,
                "unit_rows" => c.grid.rows = v.uint()?,
                "unit_cols" => c.grid.cols = v.uint()?,
                "overlap" => c.grid.overlap = v.float()?,
                "rf_width" => c.grid.rf_width = Some(v.uint()?),
                "rf_height" => c.grid.rf_height = Some(v.uint()?),
                "input" => c.input = Some(PathBuf::from(&v.value)),
                "model" => c.model = Some(v.value.parse().map_err(|e| v.wrap(e))?),
                "output" => c.output = Some(PathBuf::from(&v.value)),
                _ => return Err(entry.unknown()),
            }
        }
        c.validate()?;
        Ok(c)
    }
}

pub fn load_stimulus_spec(path: &Path) -> Result<StimulusSpec> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_stimulus_spec(&text)
}

/// Missing keys keep the [`StimulusSpec`] defaults; angles are in degrees.
pub fn parse_stimulus_spec(text: &str) -> Result<StimulusSpec> {
    let mut s = StimulusSpec::default();
    let (mut cx, mut cy) = (s.center.x, s.center.y);
    for entry in entries(text)? {
        let v = &entry;
        match entry.key.as_str() {
            "kind" => s.kind = v.value.parse().map_err(|e| v.wrap(e))?,
            "width" => s.width = v.uint()?,
            "height" => s.height = v.uint()?,
            "frames" => s.frames = v.uint()?,
            "center_x" => cx = v.float()?,
            "center_y" => cy = v.float()?,
            "rate" => s.rate = v.float()?,
            "initial_size" => s.initial_size = v.float()?,
            "foreground" => s.foreground = v.float()?,
            "background" => s.background = v.float()?,
            "bar_angle_deg" => s.bar_angle = v.float()?.to_radians(),
            "bar_extent_deg" => s.bar_extent_deg = v.float()?,
            _ => return Err(entry.unknown()),
        }
    }
    s.center = Point::new(cx, cy);
    s.validate()?;
    Ok(s)
}

pub fn stimulus_spec_to_string(s: &StimulusSpec) -> String {
    format!(
        "kind = {}\nwidth = {}\nheight = {}\nframes = {}\ncenter_x = {}\ncenter_y = {}\n\
         rate = {}\ninitial_size = {}\nforeground = {}\nbackground = {}\n\
         bar_angle_deg = {}\nbar_extent_deg = {}\n",
        s.kind,
        s.width,
        s.height,
        s.frames,
        s.center.x,
        s.center.y,
        s.rate,
        s.initial_size,
        s.foreground,
        s.background,
        s.bar_angle.to_degrees(),
        s.bar_extent_deg
    )
}

struct Entry {
    line: usize,
    key: String,
    value: String,
}

impl Entry {
    fn err(&self, message: impl Into<String>) -> Error {
        Error::Config {
            line: self.line,
            message: message.into(),
        }
    }

    fn wrap(&self, e: Error) -> Error {
        self.err(e.to_string())
    }

    fn unknown(&self) -> Error {
        self.err(format!("unknown key '{}'", self.key))
    }

    fn float(&self) -> Result<f64> {
        match self.value.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => Err(self.err(format!(
                "'{}' expects a number, got '{}'",
                self.key, self.value
            ))),
        }
    }

    fn uint(&self) -> Result<usize> {
        self.value.parse().map_err(|_| {
            self.err(format!(
                "'{}' expects a non-negative integer, got '{}'",
                self.key, self.value
            ))
        })
    }

    fn float_list(&self) -> Result<Vec<f64>> {
        self.value
            .split(',')
            .map(|s| match s.trim().parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(self.err(format!("'{}' expects a list of numbers", self.key))),
            })
            .collect()
    }
}

fn entries(text: &str) -> Result<Vec<Entry>> {
    let mut out: Vec<Entry> = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((k, v)) = content.split_once('=') else {
            return Err(Error::Config {
                line,
                message: format!("expected 'key = value', got '{content}'"),
            });
        };
        let (key, value) = (k.trim(), v.trim());
        if key.is_empty() || value.is_empty() {
            return Err(Error::Config {
                line,
                message: "empty key or value".into(),
            });
        }
        if let Some(prev) = out.iter().find(|e| e.key == key) {
            return Err(Error::Config {
                line,
                message: format!("duplicate key '{key}' (first on line {})", prev.line),
            });
        }
        out.push(Entry {
            line,
            key: key.to_string(),
            value: value.to_string(),
        });
    }
    Ok(out)
}
