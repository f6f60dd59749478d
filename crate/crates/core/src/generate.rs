//! Seeded random instances that pass both validation gates.

use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::{Instance, Point};
use crate::io::{GeneratorMeta, InstanceFile};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Profile {
    /// Cameras uniform on `[0, 1000)`.
    UniformCameras,
    /// Consecutive gaps of order `10^(i mod 13)`, shuffled, so that no single
    /// length scale describes the cameras.
    GeometricGaps,
}

impl Profile {
    pub fn name(self) -> &'static str {
        match self {
            Profile::UniformCameras => "uniform",
            Profile::GeometricGaps => "geometric",
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" | "uniform-cameras" => Ok(Profile::UniformCameras),
            "geometric" | "geometric-gaps" => Ok(Profile::GeometricGaps),
            other => Err(Error::InvalidRange(format!("unknown profile `{other}`"))),
        }
    }
}

fn draw_cameras(rng: &mut ChaCha8Rng, count: usize, profile: Profile) -> Vec<f64> {
    match profile {
        Profile::UniformCameras => (0..count).map(|_| rng.gen_range(0.0..1000.0)).collect(),
        Profile::GeometricGaps => {
            let mut gaps: Vec<f64> = (0..count.saturating_sub(1))
                .map(|i| 10f64.powi((i % 13) as i32) * rng.gen_range(0.5..1.5))
                .collect();
            gaps.shuffle(rng);
            let mut x = 0.0;
            let mut out = vec![x];
            for g in gaps {
                x += g;
                out.push(x);
            }
            out
        }
    }
}

/// Sorts and pushes each repeated value just past its predecessor.
fn separate(cameras: &mut [f64]) {
    cameras.sort_by(f64::total_cmp);
    for i in 1..cameras.len() {
        if cameras[i] <= cameras[i - 1] {
            cameras[i] = cameras[i - 1] + cameras[i - 1].abs().max(1.0) * 1e-9;
        }
    }
}

/// Random instance with `2n` cameras and `n` targets, each target at height
/// `margin * r * U(1, 2)` where `r` is the radius of the camera-span circle.
pub fn generate(n: usize, seed: u64, profile: Profile, margin: f64) -> Result<InstanceFile> {
    if n == 0 {
        return Err(Error::InvalidRange("n must be at least 1".into()));
    }
    if !(margin > 1.0 && margin.is_finite()) {
        return Err(Error::InvalidRange(format!("margin must exceed 1, got {margin}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut cameras = draw_cameras(&mut rng, 2 * n, profile);
    separate(&mut cameras);
    let lo = cameras[0];
    let hi = cameras[2 * n - 1];
    let radius = 0.5 * (hi - lo);
    let targets = (0..n)
        .map(|_| Point::new(rng.gen_range(lo..=hi), margin * radius * rng.gen_range(1.0..2.0)))
        .collect();
    let instance = Instance::new(cameras, targets)?;
    Ok(InstanceFile::from_instance(
        &instance,
        Some(GeneratorMeta { n, seed, profile: profile.name().into(), margin }),
    ))
}
