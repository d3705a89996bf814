use super::dpc::DirectionalMaps;
use super::params::{EnhanceParams, GridSpec, MdeParams, OmjParams};
use crate::error::{Error, Result};
use crate::grid::Frame;
use crate::rmo::Point;

/// Receptive field of one unit, in frame pixels. May extend past the frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct UnitField {
    pub x0: isize,
    pub y0: isize,
    pub width: usize,
    pub height: usize,
}

impl UnitField {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        x >= self.x0 as f64
            && x < (self.x0 + self.width as isize) as f64
            && y >= self.y0 as f64
            && y < (self.y0 + self.height as isize) as f64
    }

    /// Center in continuous pixel coordinates.
    pub fn center(&self) -> Point {
        Point::new(
            self.x0 as f64 + self.width as f64 / 2.0,
            self.y0 as f64 + self.height as f64 / 2.0,
        )
    }
}

/// Rows × cols of units tiling a frame, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitGrid {
    rows: usize,
    cols: usize,
    rf_width: usize,
    rf_height: usize,
    overlap: f64,
    frame_width: usize,
    frame_height: usize,
    fields: Vec<UnitField>,
}

impl UnitGrid {
    pub fn new(frame_width: usize, frame_height: usize, spec: &GridSpec) -> Result<Self> {
        if frame_width == 0 || frame_height == 0 {
            return Err(Error::invalid_input(
                "grid frame dimensions must be positive",
            ));
        }
        if spec.rows == 0 || spec.cols == 0 {
            return Err(Error::invalid_param(
                "unit grid needs at least one row and column",
            ));
        }
        if !(0.0..1.0).contains(&spec.overlap) {
            return Err(Error::invalid_param(format!(
                "overlap must be in [0, 1), got {}",
                spec.overlap
            )));
        }
        let rf_width = match spec.rf_width {
            Some(w) => w,
            None => derived_rf(frame_width, spec.cols, spec.overlap),
        };
        let rf_height = match spec.rf_height {
            Some(h) => h,
            None => derived_rf(frame_height, spec.rows, spec.overlap),
        };
        if rf_width == 0 || rf_height == 0 {
            return Err(Error::invalid_param(
                "receptive field size must be positive",
            ));
        }
        let xs = origins(frame_width, spec.cols, rf_width)?;
        let ys = origins(frame_height, spec.rows, rf_height)?;
        let mut fields = Vec::with_capacity(spec.rows * spec.cols);
        for &y0 in &ys {
            for &x0 in &xs {
                fields.push(UnitField {
                    x0,
                    y0,
                    width: rf_width,
                    height: rf_height,
                });
            }
        }
        Ok(UnitGrid {
            rows: spec.rows,
            cols: spec.cols,
            rf_width,
            rf_height,
            overlap: spec.overlap,
            frame_width,
            frame_height,
            fields,
        })
    }

    pub fn unit_count(&self) -> usize {
        self.fields.len()
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn rf_width(&self) -> usize {
        self.rf_width
    }

    pub fn rf_height(&self) -> usize {
        self.rf_height
    }

    pub fn overlap(&self) -> f64 {
        self.overlap
    }

    pub fn frame_size(&self) -> (usize, usize) {
        (self.frame_width, self.frame_height)
    }

    pub fn fields(&self) -> &[UnitField] {
        &self.fields
    }

    pub fn centers(&self) -> Vec<Point> {
        self.fields.iter().map(UnitField::center).collect()
    }
}

fn derived_rf(extent: usize, count: usize, overlap: f64) -> usize {
    let n = 1.0 + (count - 1) as f64 * (1.0 - overlap);
    (extent as f64 / n).ceil() as usize
}

/// Evenly spread origins; first at 0, last flush with the far edge.
fn origins(extent: usize, count: usize, rf: usize) -> Result<Vec<isize>> {
    let span = extent as f64 - rf as f64;
    let xs: Vec<isize> = if count == 1 {
        vec![(span / 2.0).round() as isize]
    } else {
        (0..count)
            .map(|i| (i as f64 * span / (count - 1) as f64).round() as isize)
            .collect()
    };
    let covered = xs[0] <= 0
        && xs[count - 1] + rf as isize >= extent as isize
        && xs.windows(2).all(|w| w[1] - w[0] <= rf as isize);
    if !covered {
        return Err(Error::invalid_param(format!(
            "{count} receptive fields of {rf} px leave gaps across {extent} px"
        )));
    }
    Ok(xs)
}

/// Inhibitory mask over a receptive field for channel `theta`.
///
/// Zero on the half the channel's motion heads toward; on the other half it
/// falls linearly from 0 at the center line to `−strength` at the border.
pub fn periphery_mask(
    rf_width: usize,
    rf_height: usize,
    theta: f64,
    strength: f64,
) -> Result<Frame> {
    if rf_width == 0 || rf_height == 0 {
        return Err(Error::invalid_input(
            "receptive field dimensions must be positive",
        ));
    }
    let (s, c) = theta.sin_cos();
    let extent = rf_width as f64 / 2.0 * c.abs() + rf_height as f64 / 2.0 * s.abs();
    let cx = (rf_width as f64 - 1.0) / 2.0;
    let cy = (rf_height as f64 - 1.0) / 2.0;
    Frame::from_fn(rf_width, rf_height, 0, |x, y| {
        // y flipped: the direction is in math convention
        let proj = (x as f64 - cx) * c - (y as f64 - cy) * s;
        if proj < 0.0 {
            -strength * (-proj / extent).min(1.0)
        } else {
            0.0
        }
    })
}

fn crop(map: &Frame, field: &UnitField) -> Frame {
    let mut out = vec![0.0; field.width * field.height];
    let (w, h) = (map.width() as isize, map.height() as isize);
    for j in 0..field.height {
        let y = field.y0 + j as isize;
        if y < 0 || y >= h {
            continue;
        }
        for i in 0..field.width {
            let x = field.x0 + i as isize;
            if x >= 0 && x < w {
                out[j * field.width + i] = map.get(x as usize, y as usize);
            }
        }
    }
    Frame::from_vec(field.width, field.height, map.t(), out).expect("crop dimensions are valid")
}

/// Opposing-motion stage with masks prepared for one grid and channel set.
#[derive(Debug, Clone)]
pub struct Omj {
    grid: UnitGrid,
    params: OmjParams,
    pairs: Vec<(usize, usize)>,
    masks: Vec<Frame>,
}

impl Omj {
    pub fn new(grid: UnitGrid, mde: &MdeParams, params: OmjParams) -> Result<Self> {
        params.validate()?;
        let pairs = mde.opposing_pairs()?;
        let masks = mde
            .directions()
            .iter()
            .map(|&th| periphery_mask(grid.rf_width, grid.rf_height, th, params.periphery_strength))
            .collect::<Result<_>>()?;
        Ok(Omj {
            grid,
            params,
            pairs,
            masks,
        })
    }

    pub fn grid(&self) -> &UnitGrid {
        &self.grid
    }

    /// Screened opponency of one unit over its own receptive field.
    pub fn unit_opponency(&self, maps: &DirectionalMaps, unit: usize) -> Result<Frame> {
        if maps.len() != self.masks.len() {
            return Err(Error::invalid_input(format!(
                "expected {} directional maps, got {}",
                self.masks.len(),
                maps.len()
            )));
        }
        let field = self
            .grid
            .fields
            .get(unit)
            .ok_or_else(|| Error::invalid_input(format!("unit {unit} out of range")))?;
        let crops: Vec<Frame> = maps
            .maps()
            .iter()
            .zip(&self.masks)
            .map(|(m, mask)| {
                let mut c = crop(m, field);
                for (v, &k) in c.data_mut().iter_mut().zip(mask.data()) {
                    *v = (*v + k * *v).max(0.0);
                }
                c
            })
            .collect();

        let n = field.width * field.height;
        let mut out = vec![0.0; n];
        for &(a, b) in &self.pairs {
            let (sa, sb) = (crops[a].data(), crops[b].data());
            for (i, o) in out.iter_mut().enumerate() {
                // 180° rotation about the unit center reverses row-major order
                let r = n - 1 - i;
                *o += sa[i] * sb[r] + sb[i] * sa[r];
            }
        }
        let thr = self.params.screen_threshold;
        for v in &mut out {
            if *v <= thr {
                *v = 0.0;
            }
        }
        Frame::from_vec(field.width, field.height, maps.maps()[0].t(), out)
    }

    /// Full-frame opponency; overlapping units combine by per-pixel max.
    pub fn step(&self, maps: &DirectionalMaps) -> Result<Frame> {
        let (w, h) = self.grid.frame_size();
        if maps.width() != w || maps.height() != h {
            return Err(Error::invalid_input(format!(
                "grid built for {w}x{h} frames, maps are {}x{}",
                maps.width(),
                maps.height()
            )));
        }
        let mut out = Frame::zeros(w, h, maps.maps()[0].t())?;
        for (u, field) in self.grid.fields.iter().enumerate() {
            let local = self.unit_opponency(maps, u)?;
            for j in 0..field.height {
                let y = field.y0 + j as isize;
                if y < 0 || y >= h as isize {
                    continue;
                }
                for i in 0..field.width {
                    let x = field.x0 + i as isize;
                    if x < 0 || x >= w as isize {
                        continue;
                    }
                    let v = local.get(i, j);
                    if v > out.get(x as usize, y as usize) {
                        out.set(x as usize, y as usize, v);
                    }
                }
            }
        }
        Ok(out)
    }
}

/// Zoned opposing-motion judgment over all units of `grid`.
pub fn omj_step(maps: &DirectionalMaps, grid: &UnitGrid, params: &OmjParams) -> Result<Frame> {
    let mde = MdeParams::new(maps.directions().to_vec())?;
    Omj::new(grid.clone(), &mde, *params)?.step(maps)
}

/// `S_E = S_e² · c2`.
pub fn enhance(opponency: &Frame, params: &EnhanceParams) -> Result<Frame> {
    params.validate()?;
    if opponency.data().iter().any(|&v| v.is_nan() || v < 0.0) {
        return Err(Error::invalid_input("opponency map must be nonnegative"));
    }
    Ok(opponency.map(|v| v * v * params.c2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn maps_with(w: usize, h: usize, active: &[(usize, usize, usize, f64)]) -> DirectionalMaps {
        let mut frames = vec![Frame::zeros(w, h, 0).unwrap(); 4];
        for &(ch, x, y, v) in active {
            frames[ch].set(x, y, v);
        }
        DirectionalMaps::new(MdeParams::default().directions().to_vec(), frames).unwrap()
    }

    #[test]
    fn default_grid_tiles_200() {
        let g = UnitGrid::new(200, 200, &GridSpec::default()).unwrap();
        assert_eq!(g.unit_count(), 25);
        assert_eq!((g.rf_width(), g.rf_height()), (40, 40));
        let xs: Vec<isize> = g.fields()[..5].iter().map(|f| f.x0).collect();
        assert_eq!(xs, vec![0, 40, 80, 120, 160]);
        assert_eq!(g.centers()[6], Point::new(60.0, 60.0));
    }

    #[test]
    fn every_pixel_covered() {
        for &(w, h, rows, cols, ov) in &[
            (200, 200, 5, 5, 0.0),
            (203, 97, 5, 5, 0.0),
            (64, 48, 3, 4, 0.5),
            (10, 10, 1, 1, 0.0),
            (17, 29, 7, 2, 0.25),
        ] {
            let spec = GridSpec {
                rows,
                cols,
                overlap: ov,
                ..GridSpec::default()
            };
            let g = UnitGrid::new(w, h, &spec).unwrap();
            assert_eq!(g.unit_count(), rows * cols);
            for y in 0..h {
                for x in 0..w {
                    let p = (x as f64 + 0.5, y as f64 + 0.5);
                    assert!(
                        g.fields().iter().any(|f| f.contains(p.0, p.1)),
                        "{w}x{h} ({x},{y})"
                    );
                }
            }
        }
    }

    #[test]
    fn explicit_small_rf_rejected() {
        let spec = GridSpec {
            rf_width: Some(10),
            rf_height: Some(10),
            ..GridSpec::default()
        };
        assert!(matches!(
            UnitGrid::new(200, 200, &spec),
            Err(Error::InvalidParam(_))
        ));
    }

    #[test]
    fn mask_half_plane() {
        // θ = π/2 (up): the lower half is where upward motion enters from
        let m = periphery_mask(40, 40, PI / 2.0, 1.0).unwrap();
        assert_eq!(m.get(20, 0), 0.0);
        assert!(m.get(20, 39) < 0.0);
        assert!((m.get(20, 39) + 1.0).abs() < 0.05);
        assert!(m.min() >= -1.0);
        let zero = periphery_mask(40, 40, PI / 4.0, 0.0).unwrap();
        assert!(zero.data().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn symmetric_pixel_pair_gives_square() {
        // unit 0 spans 0..40, local center 19.5; offsets ±d in local index space
        let a = 0.8;
        let maps = maps_with(200, 200, &[(0, 25, 14, a), (2, 14, 25, a)]);
        let omj = Omj::new(
            UnitGrid::new(200, 200, &GridSpec::default()).unwrap(),
            &MdeParams::default(),
            OmjParams {
                periphery_strength: 0.0,
                ..OmjParams::default()
            },
        )
        .unwrap();
        let out = omj.unit_opponency(&maps, 0).unwrap();
        assert_eq!(out.get(25, 14), a * a);
        assert_eq!(out.get(14, 25), a * a);
        assert_eq!(out.sum(), 2.0 * a * a);
    }

    #[test]
    fn single_channel_gives_nothing() {
        let maps = maps_with(
            200,
            200,
            &[(1, 25, 14, 3.0), (1, 14, 25, 3.0), (1, 100, 100, 2.0)],
        );
        let g = UnitGrid::new(200, 200, &GridSpec::default()).unwrap();
        assert!(omj_step(&maps, &g, &OmjParams::default())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn enhance_examples() {
        let f = Frame::filled(2, 2, 0, 0.5).unwrap();
        let e = enhance(&f, &EnhanceParams { c2: 4.0 }).unwrap();
        assert_eq!(e.get(1, 1), 1.0);
        assert!(
            enhance(&Frame::zeros(3, 3, 0).unwrap(), &EnhanceParams::default())
                .unwrap()
                .is_zero()
        );
        assert!(enhance(&f, &EnhanceParams { c2: 0.0 }).is_err());
    }
}
