//! Bucketing of the camera line around the midpoint `M`.
//!
//! Both constructions are built as a ladder of distances from `M`
//! (ascending bucket edges) and then mirrored onto the requested side, so a
//! camera is classified by its distance `|x - M|` alone.

use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    LeftOfM,
    RightOfM,
}

/// A closed sub-interval `[lo, hi]` of the camera line on one side of `M`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Bucket {
    pub lo: f64,
    pub hi: f64,
    pub side: Side,
}

impl Bucket {
    pub fn len(&self) -> f64 {
        self.hi - self.lo
    }

    /// Distance from `M` to the endpoint nearer to `M`.
    pub fn near_distance(&self, midpoint: f64) -> f64 {
        match self.side {
            Side::LeftOfM => midpoint - self.hi,
            Side::RightOfM => self.lo - midpoint,
        }
    }
}

/// Ascending bucket edges measured as distance from `M`.
///
/// Bucket `i` covers distances `(edges[i], edges[i + 1]]`; a distance equal
/// to `edges[0]` also belongs to bucket 0.
#[derive(Debug, Clone, PartialEq)]
pub struct Ladder {
    edges: Vec<f64>,
}

impl Ladder {
    fn new(edges: Vec<f64>) -> Self {
        debug_assert!(edges.len() >= 2);
        debug_assert!(edges.windows(2).all(|w| w[0] < w[1]));
        Self { edges }
    }

    /// Prepends the bucket `[0, edges[0]]`.
    pub fn with_inner_bucket(mut self) -> Self {
        self.edges.insert(0, 0.0);
        self
    }

    /// Appends the buckets of `outer`, which must start where `self` ends.
    pub fn extended(mut self, outer: Ladder) -> Self {
        debug_assert_eq!(self.outer(), outer.inner());
        self.edges.extend_from_slice(&outer.edges[1..]);
        self
    }

    pub fn len(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn inner(&self) -> f64 {
        self.edges[0]
    }

    pub fn outer(&self) -> f64 {
        self.edges[self.edges.len() - 1]
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    /// Bucket index holding a point at `distance` from `M`, if covered.
    pub fn locate(&self, distance: f64) -> Option<usize> {
        if distance < self.inner() || distance > self.outer() {
            return None;
        }
        let k = self.edges.partition_point(|&e| e < distance);
        Some(k.saturating_sub(1))
    }

    pub fn buckets(&self, midpoint: f64, side: Side) -> Vec<Bucket> {
        self.edges
            .windows(2)
            .map(|w| match side {
                Side::LeftOfM => Bucket { lo: midpoint - w[1], hi: midpoint - w[0], side },
                Side::RightOfM => Bucket { lo: midpoint + w[0], hi: midpoint + w[1], side },
            })
            .collect()
    }
}

fn split_evenly(edges: &mut Vec<f64>, lo: f64, hi: f64, pieces: usize) {
    for k in 1..pieces {
        edges.push(lo + (hi - lo) * (k as f64) / (pieces as f64));
    }
    edges.push(hi);
}

/// Conforming ladder on distances `[gamma1, gamma2]`: every doubling range
/// `[2^i gamma1, 2^(i+1) gamma1]` (the last one clamped at `gamma2`) is cut
/// into `ceil(1 / epsilon^2)` equal buckets.
pub fn conforming_ladder(gamma1: f64, gamma2: f64, epsilon: f64) -> Result<Ladder> {
    if !(gamma1 > 0.0 && gamma2 > gamma1 && gamma2.is_finite()) {
        return Err(Error::InvalidRange(format!(
            "need 0 < gamma1 < gamma2, got gamma1 = {gamma1}, gamma2 = {gamma2}"
        )));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidRange(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    let pieces = ((1.0 / (epsilon * epsilon)).ceil() as usize).max(1);
    let mut edges = vec![gamma1];
    let mut lo = gamma1;
    while lo < gamma2 {
        let hi = (2.0 * lo).min(gamma2);
        split_evenly(&mut edges, lo, hi, pieces);
        lo = hi;
    }
    Ok(Ladder::new(edges))
}

/// A conforming partition of `[M + gamma1, M + gamma2]` or its mirror.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConformingPartition {
    pub buckets: Vec<Bucket>,
    pub epsilon: f64,
    pub midpoint: f64,
}

impl ConformingPartition {
    /// Checks `near_distance >= len / epsilon^2` for every bucket, allowing
    /// `slack` relative to the near distance.
    pub fn is_conforming(&self, slack: f64) -> bool {
        let scale = 1.0 / (self.epsilon * self.epsilon);
        self.buckets.iter().all(|b| {
            let near = b.near_distance(self.midpoint);
            near * (1.0 + slack) + slack >= b.len() * scale
        })
    }
}

/// Buckets ordered outward from `M`.
pub fn conforming_partition(
    midpoint: f64,
    gamma1: f64,
    gamma2: f64,
    epsilon: f64,
    side: Side,
) -> Result<ConformingPartition> {
    let ladder = conforming_ladder(gamma1, gamma2, epsilon)?;
    Ok(ConformingPartition {
        buckets: ladder.buckets(midpoint, side),
        epsilon,
        midpoint,
    })
}

/// Ladder on `[0, 2 n beta]` used by the ratio recursion.
///
/// Starting at `M`, intervals of length `2^i beta / n` for `i = -1, 0, 1, ...`
/// are laid down back to back (the last one clamped at `2 n beta`), and each
/// is cut into `ceil(2 / epsilon)` equal buckets.
pub fn ratio_ladder(beta: f64, n: usize, epsilon: f64) -> Result<Ladder> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::InvalidRange(format!("beta must be positive, got {beta}")));
    }
    if n == 0 {
        return Err(Error::InvalidRange("n must be at least 1".into()));
    }
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::InvalidRange(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    let nf = n as f64;
    let extent = 2.0 * nf * beta;
    let pieces = ((2.0 / epsilon).ceil() as usize).max(1);
    let mut edges = vec![0.0];
    let mut r = 0.0;
    let mut len = 0.5 * beta / nf;
    while r < extent {
        let next = (r + len).min(extent);
        split_evenly(&mut edges, r, next, pieces);
        r = next;
        len *= 2.0;
    }
    Ok(Ladder::new(edges))
}

/// Left and right bucket sets, each ordered outward from `M`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BucketSets {
    pub left: Vec<Bucket>,
    pub right: Vec<Bucket>,
}

pub fn ratio_discretization(midpoint: f64, beta: f64, n: usize, epsilon: f64) -> Result<BucketSets> {
    let ladder = ratio_ladder(beta, n, epsilon)?;
    Ok(BucketSets {
        left: ladder.buckets(midpoint, Side::LeftOfM),
        right: ladder.buckets(midpoint, Side::RightOfM),
    })
}
