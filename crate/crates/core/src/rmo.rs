//! Radial opponent motion (ROM) qualification and the radial motion
//! opponency (RMO) ratio of a pair of image motion vectors.
//!
//! Coordinates are plain Cartesian (y up), angles in radians counterclockwise
//! from +x. A qualifying pair is projected onto the bisector of the angle
//! formed by the two (extended) vector lines; the axis origin is the
//! projection of the midpoint between the two vector origins, so both
//! projected start points sit symmetrically about it. RMO is the mirrored
//! overlap of the two projected intervals over their total length.

use std::f64::consts::{PI, TAU};

use crate::error::{Error, Result};

/// Default angular tolerance, 30°.
pub const DEFAULT_TOLERANCE: f64 = PI / 6.0;

/// Slack for the strict interval bounds of the ROM test, so angles that are
/// the tolerance up to float rounding count as on the boundary.
const BOUNDARY_EPS: f64 = 1e-12;

const PARALLEL_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }

    fn scale(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }

    fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }
}

/// An image motion: where it starts, which way it points, how far it goes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionVector {
    origin: Point,
    direction: f64,
    magnitude: f64,
}

impl MotionVector {
    /// Direction is wrapped into `[0, 2π)`.
    pub fn new(origin: Point, direction: f64, magnitude: f64) -> Result<Self> {
        if !(magnitude.is_finite() && magnitude >= 0.0) {
            return Err(Error::invalid_input(format!(
                "vector magnitude must be finite and non-negative, got {magnitude}"
            )));
        }
        if !direction.is_finite() || !origin.x.is_finite() || !origin.y.is_finite() {
            return Err(Error::invalid_input(
                "vector origin and direction must be finite",
            ));
        }
        Ok(MotionVector {
            origin,
            direction: wrap_angle(direction),
            magnitude,
        })
    }

    pub fn origin(&self) -> Point {
        self.origin
    }

    pub fn direction(&self) -> f64 {
        self.direction
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    fn unit(&self) -> Point {
        Point::new(self.direction.cos(), self.direction.sin())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VectorPair {
    pub v1: MotionVector,
    pub v2: MotionVector,
    theta_t: f64,
}

impl VectorPair {
    pub fn new(v1: MotionVector, v2: MotionVector) -> Self {
        VectorPair {
            v1,
            v2,
            theta_t: DEFAULT_TOLERANCE,
        }
    }

    /// Tolerance must lie strictly inside `(0, π/2)`.
    pub fn with_tolerance(v1: MotionVector, v2: MotionVector, theta_t: f64) -> Result<Self> {
        if !(theta_t > 0.0 && theta_t < PI / 2.0) {
            return Err(Error::invalid_param(format!(
                "angle tolerance must be in (0, pi/2), got {theta_t}"
            )));
        }
        Ok(VectorPair { v1, v2, theta_t })
    }

    pub fn tolerance(&self) -> f64 {
        self.theta_t
    }

    pub fn swapped(&self) -> VectorPair {
        VectorPair {
            v1: self.v2,
            v2: self.v1,
            theta_t: self.theta_t,
        }
    }
}

/// A closed interval on the projection axis, oriented from the projected
/// start point to the projected end point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    pub start: f64,
    pub end: f64,
}

impl Interval {
    pub const fn new(start: f64, end: f64) -> Self {
        Interval { start, end }
    }

    pub fn length(&self) -> f64 {
        (self.end - self.start).abs()
    }

    fn lo(&self) -> f64 {
        self.start.min(self.end)
    }

    fn hi(&self) -> f64 {
        self.start.max(self.end)
    }
}

/// The projection line `l_e`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Line {
    pub point: Point,
    pub direction: Point,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Projection {
    pub bisector: Line,
    /// Projection of the origins' midpoint onto the bisector; the axis origin.
    pub center: Point,
    /// Runs toward the positive half-axis.
    pub proj1: Interval,
    /// Runs toward the negative half-axis.
    pub proj2: Interval,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RmoResult {
    pub qualifies: bool,
    /// Absent when the pair does not qualify.
    pub geometry: Option<Projection>,
    pub symmetric_length: f64,
    pub rmo: f64,
}

impl RmoResult {
    fn rejected() -> Self {
        RmoResult {
            qualifies: false,
            geometry: None,
            symmetric_length: 0.0,
            rmo: 0.0,
        }
    }
}

pub fn wrap_angle(theta: f64) -> f64 {
    let w = theta.rem_euclid(TAU);
    // rem_euclid can return TAU itself for tiny negative inputs
    if w >= TAU {
        0.0
    } else {
        w
    }
}

/// Whether the two motions point to opposite sides of a common radius, i.e.
/// `θ1 − θ2 ∈ (π − θ_T, π + θ_T)` taken modulo 2π, open at both ends.
pub fn qualifies_as_rom(pair: &VectorPair) -> Result<bool> {
    if pair.v1.magnitude == 0.0 || pair.v2.magnitude == 0.0 {
        return Err(Error::invalid_input(
            "zero-magnitude vector has no direction",
        ));
    }
    let diff = wrap_angle(pair.v1.direction - pair.v2.direction);
    Ok((diff - PI).abs() < pair.theta_t - BOUNDARY_EPS)
}

/// Outward-only variant: both motions must also head away from `reference`.
pub fn qualifies_outward(pair: &VectorPair, reference: Point) -> Result<bool> {
    if !qualifies_as_rom(pair)? {
        return Ok(false);
    }
    let away = |v: &MotionVector| v.unit().dot(v.origin.sub(reference)) > 0.0;
    Ok(away(&pair.v1) && away(&pair.v2))
}

/// Projects a qualifying pair onto the equal-angle bisector.
///
/// Parallel (non-intersecting) lines use the same bisector direction placed
/// through the origins' midpoint; only the axis direction affects the
/// projected intervals, since the axis origin is the projected midpoint.
pub fn bisector_projection(pair: &VectorPair) -> Result<Projection> {
    if !qualifies_as_rom(pair)? {
        return Err(Error::invalid_input(
            "pair does not qualify as radial opponent motion",
        ));
    }
    let (u1, u2) = (pair.v1.unit(), pair.v2.unit());
    let (o1, o2) = (pair.v1.origin, pair.v2.origin);
    let mid = o1.add(o2).scale(0.5);

    // bisector along which u1 projects positive and u2 negative
    let diff = u1.sub(u2);
    let diff_norm = diff.norm();
    let dir = if diff_norm > PARALLEL_EPS {
        diff.scale(1.0 / diff_norm)
    } else {
        u1
    };

    let denom = u1.cross(u2);
    let through = if denom.abs() > PARALLEL_EPS {
        let s = o2.sub(o1).cross(u2) / denom;
        o1.add(u1.scale(s))
    } else {
        mid
    };

    let center = through.add(dir.scale(mid.sub(through).dot(dir)));
    // (o − center)·dir == (o − mid)·dir; the latter is exactly antisymmetric
    // under swapping the two vectors
    let start1 = o1.sub(mid).dot(dir);
    let start2 = o2.sub(mid).dot(dir);
    // both vectors meet the bisector at the same angle α; u1·dir and −u2·dir
    // both equal |u1 − u2|/2, taken once so the two lengths scale identically
    let cos_alpha = if diff_norm > PARALLEL_EPS {
        (diff_norm / 2.0).min(1.0)
    } else {
        1.0
    };
    let proj1 = Interval::new(start1, start1 + pair.v1.magnitude * cos_alpha);
    let proj2 = Interval::new(start2, start2 - pair.v2.magnitude * cos_alpha);

    Ok(Projection {
        bisector: Line {
            point: through,
            direction: dir,
        },
        center,
        proj1,
        proj2,
    })
}

/// Twice the overlap of `proj1` with the point reflection of `proj2` about
/// the axis origin (each vector counts its symmetric part once).
pub fn symmetric_length(proj1: Interval, proj2: Interval) -> Result<f64> {
    let finite = [proj1.start, proj1.end, proj2.start, proj2.end]
        .iter()
        .all(|v| v.is_finite());
    if !finite || proj1.end < proj1.start || proj2.end > proj2.start {
        return Err(Error::invalid_input(format!(
            "malformed projections {proj1:?} / {proj2:?}: first must run up the axis, second down"
        )));
    }
    let (mirror_lo, mirror_hi) = (-proj2.hi(), -proj2.lo());
    let overlap = proj1.hi().min(mirror_hi) - proj1.lo().max(mirror_lo);
    Ok(2.0 * overlap.max(0.0))
}

/// Full ROM/RMO evaluation; non-qualifying pairs (including zero-magnitude
/// vectors) give `rmo = 0`.
pub fn rmo(pair: &VectorPair) -> RmoResult {
    match qualifies_as_rom(pair) {
        Ok(true) => {}
        _ => return RmoResult::rejected(),
    }
    let Ok(geometry) = bisector_projection(pair) else {
        return RmoResult::rejected();
    };
    let sym = symmetric_length(geometry.proj1, geometry.proj2).unwrap_or(0.0);
    let total = geometry.proj1.length() + geometry.proj2.length();
    let ratio = if total > 0.0 {
        (sym / total).clamp(0.0, 1.0)
    } else {
        0.0
    };
    RmoResult {
        qualifies: true,
        geometry: Some(geometry),
        symmetric_length: sym,
        rmo: ratio,
    }
}
