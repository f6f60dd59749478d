//! Planar geometry on the camera line.
//!
//! Cameras sit on the x-axis and are identified by their x-coordinate.
//! Targets are arbitrary points; [`project_targets`] reflects those below
//! the line, which changes neither objective.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A point in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 2]", into = "[f64; 2]")]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    fn sub(self, other: Point) -> (f64, f64) {
        (self.x - other.x, self.y - other.y)
    }

    pub fn distance(self, other: Point) -> f64 {
        let (dx, dy) = self.sub(other);
        dx.hypot(dy)
    }
}

impl From<[f64; 2]> for Point {
    fn from([x, y]: [f64; 2]) -> Self {
        Self { x, y }
    }
}

impl From<Point> for [f64; 2] {
    fn from(p: Point) -> Self {
        [p.x, p.y]
    }
}

/// Cameras on a line plus targets in the plane.
///
/// Construction only checks counts and finiteness. Ordering of the cameras
/// and the position of the targets are the business of [`crate::validate`];
/// every solver runs the matching validation gate before doing any work.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    cameras: Vec<f64>,
    targets: Vec<Point>,
}

impl Instance {
    pub fn new(cameras: Vec<f64>, targets: Vec<Point>) -> Result<Self> {
        if targets.is_empty() {
            return Err(Error::MalformedInstance("at least one target is required".into()));
        }
        if cameras.len() != 2 * targets.len() {
            return Err(Error::MalformedInstance(format!(
                "expected {} cameras for {} targets, got {}",
                2 * targets.len(),
                targets.len(),
                cameras.len()
            )));
        }
        if cameras.iter().any(|c| !c.is_finite()) || targets.iter().any(|t| !t.is_finite()) {
            return Err(Error::MalformedInstance("coordinates must be finite".into()));
        }
        Ok(Self { cameras, targets })
    }

    /// Number of targets; there are `2n` cameras.
    pub fn n(&self) -> usize {
        self.targets.len()
    }

    pub fn cameras(&self) -> &[f64] {
        &self.cameras
    }

    pub fn targets(&self) -> &[Point] {
        &self.targets
    }

    pub fn camera(&self, index: usize) -> f64 {
        self.cameras[index]
    }

    pub fn target(&self, index: usize) -> Point {
        self.targets[index]
    }

    /// Midpoint between the n-th and (n+1)-th camera.
    pub fn midpoint(&self) -> f64 {
        let n = self.n();
        0.5 * (self.cameras[n - 1] + self.cameras[n])
    }

    /// Distance from the leftmost camera to the midpoint.
    pub fn left_extent(&self) -> f64 {
        self.midpoint() - self.cameras[0]
    }

    /// Distance from the midpoint to the rightmost camera.
    pub fn right_extent(&self) -> f64 {
        self.cameras[2 * self.n() - 1] - self.midpoint()
    }

    pub fn baseline(&self, i: usize, j: usize) -> f64 {
        (self.cameras[j] - self.cameras[i]).abs()
    }

    /// Reflects every coordinate about the midpoint. Camera `i` of the result
    /// is camera `2n - 1 - i` of `self`; targets keep their indices.
    pub fn mirrored(&self) -> Instance {
        let m = self.midpoint();
        let cameras = self.cameras.iter().rev().map(|&c| 2.0 * m - c).collect();
        let targets = self
            .targets
            .iter()
            .map(|t| Point::new(2.0 * m - t.x, t.y))
            .collect();
        Instance { cameras, targets }
    }
}

/// Interior angle at `apex` between the rays towards `p` and `q`, in `[0, pi]`.
///
/// Uses `atan2(|cross|, dot)`, which stays accurate for angles near 0 and pi.
pub fn angle_at(apex: Point, p: Point, q: Point) -> f64 {
    let (ax, ay) = p.sub(apex);
    let (bx, by) = q.sub(apex);
    let cross = ax * by - ay * bx;
    let dot = ax * bx + ay * by;
    cross.abs().atan2(dot)
}

/// Angle subtended at `target` by the cameras at `cam_a` and `cam_b`.
pub fn tracking_angle(cam_a: f64, cam_b: f64, target: Point) -> Result<f64> {
    if cam_a == cam_b {
        return Err(Error::DegenerateGeometry(format!("coincident cameras at {cam_a}")));
    }
    if target.y == 0.0 {
        return Err(Error::DegenerateGeometry(format!(
            "target ({}, {}) lies on the camera line",
            target.x, target.y
        )));
    }
    Ok(angle_at(target, Point::new(cam_a, 0.0), Point::new(cam_b, 0.0)))
}

/// Depth of `target` over the baseline of the two cameras.
pub fn aspect_ratio(cam_a: f64, cam_b: f64, target: Point) -> Result<f64> {
    if cam_a == cam_b {
        return Err(Error::DegenerateGeometry(format!("coincident cameras at {cam_a}")));
    }
    Ok(target.y.abs() / (cam_b - cam_a).abs())
}

/// Reflects targets below the camera line into the upper half-plane.
pub fn project_targets(instance: &Instance) -> Instance {
    Instance {
        cameras: instance.cameras.clone(),
        targets: instance
            .targets
            .iter()
            .map(|t| Point::new(t.x, t.y.abs()))
            .collect(),
    }
}

/// Output of [`split_ratio`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Split {
    /// Point on `xy` with angle `x t z` equal to `epsilon * theta`.
    pub z: Point,
    /// Point on `xy` with angle `y t z'` equal to `epsilon * theta`.
    pub z_prime: Point,
    /// `|x z'| / |x z|`.
    pub ratio: f64,
}

/// Splits the angle `x t y` (of size `theta`) by the two rays that cut off
/// `epsilon * theta` next to `x` and next to `y`, and measures where they
/// hit segment `xy`. The returned ratio never exceeds `1 / epsilon^2`.
pub fn split_ratio(x: Point, y: Point, t: Point, epsilon: f64) -> Result<Split> {
    if !(epsilon > 0.0 && epsilon <= 0.5) {
        return Err(Error::InvalidRange(format!("epsilon must lie in (0, 1/2], got {epsilon}")));
    }
    let xy = x.distance(y);
    let tx = t.distance(x);
    let ty = t.distance(y);
    let (ux, uy) = y.sub(x);
    let (vx, vy) = t.sub(x);
    let cross = ux * vy - uy * vx;
    if xy == 0.0 || cross.abs() <= 1e-12 * xy * tx.max(ty) {
        return Err(Error::DegenerateGeometry("x, y and t are collinear".into()));
    }

    let theta = angle_at(t, x, y);
    let alpha = angle_at(x, t, y);
    let gamma = angle_at(y, t, x);
    let cut = epsilon * theta;

    // Law of sines in the triangles x-t-z and y-t-z'.
    let xz = tx * cut.sin() / (alpha + cut).sin();
    let yz_prime = ty * cut.sin() / (gamma + cut).sin();
    let xz_prime = xy - yz_prime;

    let along = |d: f64| Point::new(x.x + ux * d / xy, x.y + uy * d / xy);
    Ok(Split {
        z: along(xz),
        z_prime: along(xz_prime),
        ratio: xz_prime / xz,
    })
}
