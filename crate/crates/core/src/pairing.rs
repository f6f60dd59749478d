//! Camera pairings and their optimal association with targets.
//!
//! Camera and target indices are 0-based here; reports shift them to 1-based.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{angle_at, tracking_angle, Instance, Point};
use crate::hungarian::max_weight_assignment;

/// Which sum is being optimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Objective {
    /// Maximize the sum of tracking angles (radians).
    #[serde(rename = "angles")]
    SumAngles,
    /// Minimize the sum of aspect ratios.
    #[serde(rename = "ratios")]
    SumRatios,
}

impl Objective {
    /// `true` if `a` is strictly better than `b`.
    pub fn is_better(self, a: f64, b: f64) -> bool {
        match self {
            Objective::SumAngles => a > b,
            Objective::SumRatios => a < b,
        }
    }

    /// Value worse than any feasible one.
    pub fn worst(self) -> f64 {
        match self {
            Objective::SumAngles => f64::NEG_INFINITY,
            Objective::SumRatios => f64::INFINITY,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Objective::SumAngles => "angles",
            Objective::SumRatios => "ratios",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A perfect pairing of all `2n` cameras, kept in canonical form: each pair
/// is `(smaller, larger)` and pairs are sorted by their first index.
///
/// The derived ordering is the lexicographic order used for tie-breaks.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CameraPairing {
    pairs: Vec<(usize, usize)>,
}

impl CameraPairing {
    /// Validates that `pairs` covers `0..camera_count` exactly once.
    pub fn new(pairs: Vec<(usize, usize)>, camera_count: usize) -> Result<Self> {
        if camera_count != 2 * pairs.len() {
            return Err(Error::InvalidPairing(format!(
                "{} pairs cannot cover {camera_count} cameras",
                pairs.len()
            )));
        }
        let mut seen = vec![false; camera_count];
        for &(a, b) in &pairs {
            for c in [a, b] {
                if c >= camera_count {
                    return Err(Error::InvalidPairing(format!("camera index {c} out of range")));
                }
                if std::mem::replace(&mut seen[c], true) {
                    return Err(Error::InvalidPairing(format!("camera {c} used twice")));
                }
            }
        }
        Ok(Self::canonical(pairs))
    }

    /// Canonicalizes without checking coverage.
    pub(crate) fn canonical(mut pairs: Vec<(usize, usize)>) -> Self {
        for p in pairs.iter_mut() {
            if p.0 > p.1 {
                *p = (p.1, p.0);
            }
        }
        pairs.sort_unstable();
        Self { pairs }
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn baselines(&self, instance: &Instance) -> Vec<f64> {
        self.pairs.iter().map(|&(a, b)| instance.baseline(a, b)).collect()
    }

    /// Maps a pairing of the mirrored instance back (camera `i` becomes
    /// `camera_count - 1 - i`).
    pub fn unmirrored(&self, camera_count: usize) -> Self {
        let last = camera_count - 1;
        Self::canonical(self.pairs.iter().map(|&(a, b)| (last - b, last - a)).collect())
    }
}

/// Result of a search that may find no admissible pairing.
///
/// `Dummy` stands for "no pairing"; its cost is `+inf` against any targets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MaybePairing {
    Pairs(Vec<(usize, usize)>),
    Dummy,
}

impl MaybePairing {
    pub fn is_dummy(&self) -> bool {
        matches!(self, MaybePairing::Dummy)
    }

    /// Optimal sum of ratios of these pairs against `targets`.
    pub fn ratio_cost(&self, instance: &Instance, targets: &[usize]) -> f64 {
        match self {
            MaybePairing::Pairs(pairs) => ratio_cost(instance, pairs, targets),
            MaybePairing::Dummy => f64::INFINITY,
        }
    }
}

/// A pairing plus the target assigned to each pair.
#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub pairing: CameraPairing,
    /// `target_of_pair[k]` is the target watched by `pairing.pairs()[k]`.
    pub target_of_pair: Vec<usize>,
    pub objective: Objective,
    pub value: f64,
}

impl Assignment {
    /// Builds an assignment from `(left, right, target)` triples, recomputing
    /// the value. Fails unless the pairs form a perfect pairing and the
    /// targets a bijection.
    pub fn from_triples(
        triples: &[(usize, usize, usize)],
        objective: Objective,
        instance: &Instance,
    ) -> Result<Self> {
        let n = instance.n();
        let pairing = CameraPairing::new(triples.iter().map(|&(a, b, _)| (a, b)).collect(), 2 * n)?;
        let mut seen = vec![false; n];
        for &(_, _, t) in triples {
            if t >= n || std::mem::replace(&mut seen[t], true) {
                return Err(Error::InvalidPairing(format!("target {t} missing or repeated")));
            }
        }
        let target_of_pair = pairing
            .pairs()
            .iter()
            .map(|&(a, b)| {
                triples
                    .iter()
                    .find(|&&(x, y, _)| (x.min(y), x.max(y)) == (a, b))
                    .map(|&(_, _, t)| t)
                    .expect("pair present in triples")
            })
            .collect();
        let mut out = Assignment { pairing, target_of_pair, objective, value: 0.0 };
        out.value = evaluate(&out, instance);
        Ok(out)
    }

    /// `(left, right, target)` triples in pairing order.
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        self.pairing
            .pairs()
            .iter()
            .zip(&self.target_of_pair)
            .map(|(&(a, b), &t)| (a, b, t))
            .collect()
    }
}

/// Per-triple cost of `objective` (angle or ratio) without validity checks.
fn triple_value(objective: Objective, instance: &Instance, a: usize, b: usize, t: usize) -> f64 {
    let target = instance.target(t);
    match objective {
        Objective::SumAngles => angle_at(
            target,
            Point::new(instance.camera(a), 0.0),
            Point::new(instance.camera(b), 0.0),
        ),
        Objective::SumRatios => target.y.abs() / instance.baseline(a, b),
    }
}

/// Recomputes the objective value of `assignment` from scratch.
pub fn evaluate(assignment: &Assignment, instance: &Instance) -> f64 {
    assignment
        .pairing
        .pairs()
        .iter()
        .zip(&assignment.target_of_pair)
        .map(|(&(a, b), &t)| triple_value(assignment.objective, instance, a, b, t))
        .sum()
}

/// Every pair has one camera among the n leftmost and one among the n rightmost.
pub fn is_all_overlapping(pairing: &CameraPairing, instance: &Instance) -> bool {
    let n = instance.n();
    pairing.pairs().iter().all(|&(a, b)| a < n && b >= n)
}

/// Repeatedly replaces two disjoint pairs `(i, j), (i', j')` with
/// `i < j < i' < j'` by `(i, i'), (j, j')` until every two baselines overlap.
///
/// Each exchange strictly grows the total baseline length, so this
/// terminates. Pairs are scanned by left endpoint and the first disjoint
/// couple found is exchanged.
pub fn uncross(pairing: &CameraPairing, instance: &Instance) -> CameraPairing {
    let cams = instance.cameras();
    let mut pairs = pairing.pairs().to_vec();
    loop {
        pairs.sort_unstable();
        let mut hit = None;
        'scan: for a in 0..pairs.len() {
            for b in a + 1..pairs.len() {
                if cams[pairs[a].1] < cams[pairs[b].0] {
                    hit = Some((a, b));
                    break 'scan;
                }
            }
        }
        let Some((a, b)) = hit else { break };
        let (i, j) = pairs[a];
        let (i2, j2) = pairs[b];
        pairs[a] = (i, i2);
        pairs[b] = (j, j2);
    }
    CameraPairing::canonical(pairs)
}

/// Target of depth rank `k` goes to the pair of baseline rank `k`.
///
/// Returns, for each pair slot, the index into `depths` assigned to it.
/// Sorting is stable, so equal baselines or depths keep their input order.
pub fn sorted_rank_matching(baselines: &[f64], depths: &[f64]) -> Vec<usize> {
    debug_assert_eq!(baselines.len(), depths.len());
    let mut slots: Vec<usize> = (0..baselines.len()).collect();
    slots.sort_by(|&a, &b| baselines[a].partial_cmp(&baselines[b]).unwrap_or(Ordering::Equal));
    let mut ranked: Vec<usize> = (0..depths.len()).collect();
    ranked.sort_by(|&a, &b| depths[a].partial_cmp(&depths[b]).unwrap_or(Ordering::Equal));
    let mut out = vec![0; baselines.len()];
    for (slot, target) in slots.into_iter().zip(ranked) {
        out[slot] = target;
    }
    out
}

/// Optimal sum of ratios of `pairs` against the targets in `targets`.
///
/// Empty inputs cost 0. Lengths must agree.
pub fn ratio_cost(instance: &Instance, pairs: &[(usize, usize)], targets: &[usize]) -> f64 {
    debug_assert_eq!(pairs.len(), targets.len());
    let mut baselines: Vec<f64> = pairs.iter().map(|&(a, b)| instance.baseline(a, b)).collect();
    let mut depths: Vec<f64> = targets.iter().map(|&t| instance.target(t).y.abs()).collect();
    baselines.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    depths.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    depths.iter().zip(&baselines).map(|(z, b)| z / b).sum()
}

/// Best association of the pairs with the targets under the ratio objective.
pub fn assign_ratios(pairing: &CameraPairing, instance: &Instance) -> Assignment {
    let baselines = pairing.baselines(instance);
    let depths: Vec<f64> = instance.targets().iter().map(|t| t.y.abs()).collect();
    let target_of_pair = sorted_rank_matching(&baselines, &depths);
    let mut out = Assignment {
        pairing: pairing.clone(),
        target_of_pair,
        objective: Objective::SumRatios,
        value: 0.0,
    };
    out.value = evaluate(&out, instance);
    out
}

/// Angle matrix `w[pair][target]`.
pub fn angle_matrix(pairing: &CameraPairing, instance: &Instance) -> Result<Vec<Vec<f64>>> {
    pairing
        .pairs()
        .iter()
        .map(|&(a, b)| {
            instance
                .targets()
                .iter()
                .map(|&t| tracking_angle(instance.camera(a), instance.camera(b), t))
                .collect()
        })
        .collect()
}

/// Best association under the angle objective (maximum-weight assignment).
pub fn assign_angles(pairing: &CameraPairing, instance: &Instance) -> Result<Assignment> {
    let weights = angle_matrix(pairing, instance)?;
    let target_of_pair = max_weight_assignment(&weights);
    let value = target_of_pair.iter().enumerate().map(|(p, &t)| weights[p][t]).sum();
    Ok(Assignment {
        pairing: pairing.clone(),
        target_of_pair,
        objective: Objective::SumAngles,
        value,
    })
}

pub fn assign(objective: Objective, pairing: &CameraPairing, instance: &Instance) -> Result<Assignment> {
    match objective {
        Objective::SumAngles => assign_angles(pairing, instance),
        Objective::SumRatios => Ok(assign_ratios(pairing, instance)),
    }
}

/// `true` if `(value, pairing)` should replace the incumbent: strictly better
/// value, or equal value with a lexicographically smaller pairing.
pub(crate) fn improves(
    objective: Objective,
    value: f64,
    pairing: &CameraPairing,
    best: Option<&(f64, CameraPairing)>,
) -> bool {
    match best {
        None => true,
        Some((best_value, best_pairing)) => {
            objective.is_better(value, *best_value) || (value == *best_value && pairing < best_pairing)
        }
    }
}
