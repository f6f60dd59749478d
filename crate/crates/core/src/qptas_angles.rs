//! Approximation scheme for maximizing the sum of tracking angles.
//!
//! Cameras left of `M` are bucketed by a conforming ladder on `[0, a]`, those
//! right of `M` by one on `[0, a / eps^2]`, each with an inner bucket of
//! width `eps a / (100 n^2)`. Candidate pairings are generated by four nested
//! guesses:
//!
//! * `sigma`: per left bucket, how many of its leftmost cameras pair with the
//!   leftmost unpaired right cameras;
//! * `pi`: per right bucket, how many of its rightmost cameras pair with the
//!   rightmost unpaired left cameras;
//! * `mu`: per (left bucket, right bucket), how many cameras pair across;
//! * `lambda`: how many leftmost remaining left cameras pair with the leftmost
//!   remaining right cameras, after which the rest are paired in order.
//!
//! Every free choice pairs cameras in order (i-th with i-th). Only buckets
//! that hold unpaired cameras take part in a guess. The instance is mirrored
//! about `M` first whenever `a > d`.

use std::collections::HashSet;
use std::ops::ControlFlow;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::geometry::Instance;
use crate::pairing::{assign_angles, improves, Assignment, CameraPairing, Objective};
use crate::partition::{conforming_ladder, Bucket, Ladder, Side};
use crate::report::{Algorithm, Counters, Limits, SolveReport};
use crate::validate::require_valid;

/// Bucketing of an instance oriented so that `a <= d`.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleBuckets {
    /// The buckets were built on the mirror image of the input.
    pub mirrored: bool,
    pub midpoint: f64,
    /// Width of the two inner buckets around `M`.
    pub inner_width: f64,
    left: Ladder,
    right: Ladder,
}

impl AngleBuckets {
    /// Left buckets `B_0..B_k`, ordered outward from `M`.
    pub fn left_buckets(&self) -> Vec<Bucket> {
        self.left.buckets(self.midpoint, Side::LeftOfM)
    }

    /// Right buckets `B'_0..B'_j`, ordered outward from `M`.
    pub fn right_buckets(&self) -> Vec<Bucket> {
        self.right.buckets(self.midpoint, Side::RightOfM)
    }

    fn left_of(&self, x: f64) -> Option<usize> {
        self.left.locate(self.midpoint - x)
    }

    fn right_of(&self, x: f64) -> Option<usize> {
        self.right.locate(x - self.midpoint)
    }
}

fn oriented(instance: &Instance) -> (Instance, bool) {
    if instance.left_extent() > instance.right_extent() {
        (instance.mirrored(), true)
    } else {
        (instance.clone(), false)
    }
}

fn check_eps_internal(eps_internal: f64) -> Result<()> {
    if eps_internal > 0.0 && eps_internal < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidEpsilon(eps_internal))
    }
}

/// Builds the left and right buckets, mirroring the instance if `a > d`.
pub fn build_angle_buckets(instance: &Instance, eps_internal: f64) -> Result<AngleBuckets> {
    check_eps_internal(eps_internal)?;
    let (inst, mirrored) = oriented(instance);
    let n = inst.n() as f64;
    let a = inst.left_extent();
    let inner_width = eps_internal * a / (100.0 * n * n);
    let left = conforming_ladder(inner_width, a, eps_internal)?.with_inner_bucket();
    let right_reach = a / (eps_internal * eps_internal);
    let right = conforming_ladder(inner_width, right_reach, eps_internal)?.with_inner_bucket();
    Ok(AngleBuckets { mirrored, midpoint: inst.midpoint(), inner_width, left, right })
}

/// Partial pairing of the oriented instance during enumeration.
#[derive(Debug, Clone)]
struct AngleEnumState {
    partner: Vec<Option<usize>>,
}

impl AngleEnumState {
    fn pair(&mut self, a: usize, b: usize) {
        debug_assert!(self.partner[a].is_none() && self.partner[b].is_none());
        self.partner[a] = Some(b);
        self.partner[b] = Some(a);
    }

    fn pair_in_order(&mut self, lefts: &[usize], rights: &[usize]) {
        debug_assert_eq!(lefts.len(), rights.len());
        for (&l, &r) in lefts.iter().zip(rights) {
            self.pair(l, r);
        }
    }

    fn pairing(&self) -> CameraPairing {
        CameraPairing::canonical(
            self.partner
                .iter()
                .enumerate()
                .filter_map(|(a, b)| b.filter(|&b| a < b).map(|b| (a, b)))
                .collect(),
        )
    }
}

/// Static data shared by every enumeration level.
struct Enumerator<'a> {
    n: usize,
    /// Bucket of each left camera `0..n`.
    left_bucket: Vec<usize>,
    /// Bucket of each right camera `n..2n`, if any.
    right_bucket: Vec<Option<usize>>,
    left_count: usize,
    right_count: usize,
    mirrored: bool,
    visit: &'a mut dyn FnMut(&CameraPairing) -> ControlFlow<()>,
}

impl Enumerator<'_> {
    /// Unpaired left cameras in ascending position.
    fn free_left(&self, s: &AngleEnumState) -> Vec<usize> {
        (0..self.n).filter(|&c| s.partner[c].is_none()).collect()
    }

    fn free_right(&self, s: &AngleEnumState) -> Vec<usize> {
        (self.n..2 * self.n).filter(|&c| s.partner[c].is_none()).collect()
    }

    fn free_in_left_bucket(&self, s: &AngleEnumState, bucket: usize) -> Vec<usize> {
        (0..self.n)
            .filter(|&c| s.partner[c].is_none() && self.left_bucket[c] == bucket)
            .collect()
    }

    fn free_in_right_bucket(&self, s: &AngleEnumState, bucket: usize) -> Vec<usize> {
        (self.n..2 * self.n)
            .filter(|&c| s.partner[c].is_none() && self.right_bucket[c - self.n] == Some(bucket))
            .collect()
    }

    /// Nonempty buckets among `from..count` with their current sizes.
    fn occupied(&self, s: &AngleEnumState, left: bool, from: usize) -> Vec<(usize, usize)> {
        let count = if left { self.left_count } else { self.right_count };
        (from..count)
            .filter_map(|b| {
                let k = if left {
                    self.free_in_left_bucket(s, b).len()
                } else {
                    self.free_in_right_bucket(s, b).len()
                };
                (k > 0).then_some((b, k))
            })
            .collect()
    }

    fn run(&mut self) -> ControlFlow<()> {
        let state = AngleEnumState { partner: vec![None; 2 * self.n] };
        let buckets = self.occupied(&state, true, 1);
        let caps: Vec<usize> = buckets.iter().map(|&(_, k)| k).collect();
        for_each_capped_vector(&caps, &mut |sigma| {
            let mut s = state.clone();
            for (&(bucket, _), &count) in buckets.iter().zip(sigma) {
                let lefts = self.free_in_left_bucket(&s, bucket);
                let rights = self.free_right(&s);
                s.pair_in_order(&lefts[..count], &rights[..count]);
            }
            self.pi_stage(s)
        })
    }

    fn pi_stage(&mut self, state: AngleEnumState) -> ControlFlow<()> {
        let buckets = self.occupied(&state, false, 1);
        let caps: Vec<usize> = buckets.iter().map(|&(_, k)| k).collect();
        for_each_capped_vector(&caps, &mut |pi| {
            let mut s = state.clone();
            for (&(bucket, _), &count) in buckets.iter().zip(pi) {
                let rights = self.free_in_right_bucket(&s, bucket);
                let lefts = self.free_left(&s);
                s.pair_in_order(&lefts[lefts.len() - count..], &rights[rights.len() - count..]);
            }
            self.mu_stage(s)
        })
    }

    fn mu_stage(&mut self, state: AngleEnumState) -> ControlFlow<()> {
        let rows = self.occupied(&state, true, 0);
        let cols = self.occupied(&state, false, 0);
        let row_caps: Vec<usize> = rows.iter().map(|&(_, k)| k).collect();
        let col_caps: Vec<usize> = cols.iter().map(|&(_, k)| k).collect();
        for_each_capped_matrix(&row_caps, &col_caps, &mut |mu| {
            let mut s = state.clone();
            for (r, &(lb, _)) in rows.iter().enumerate() {
                for (c, &(rb, _)) in cols.iter().enumerate() {
                    let count = mu[r * cols.len() + c];
                    if count == 0 {
                        continue;
                    }
                    let lefts = self.free_in_left_bucket(&s, lb);
                    let rights = self.free_in_right_bucket(&s, rb);
                    s.pair_in_order(&lefts[..count], &rights[..count]);
                }
            }
            self.lambda_stage(s)
        })
    }

    fn lambda_stage(&mut self, state: AngleEnumState) -> ControlFlow<()> {
        let remaining = self.free_left(&state).len();
        for lambda in 0..=remaining {
            let mut s = state.clone();
            let lefts = self.free_left(&s);
            let rights = self.free_right(&s);
            s.pair_in_order(&lefts[..lambda], &rights[..lambda]);
            let lefts = self.free_left(&s);
            let rights = self.free_right(&s);
            s.pair_in_order(&lefts, &rights);
            let mut pairing = s.pairing();
            if self.mirrored {
                pairing = pairing.unmirrored(2 * self.n);
            }
            (self.visit)(&pairing)?;
        }
        ControlFlow::Continue(())
    }
}

/// Calls `f` on every vector `v` with `0 <= v[i] <= caps[i]`, in
/// lexicographic order.
fn for_each_capped_vector(
    caps: &[usize],
    f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    fn rec(
        caps: &[usize],
        cur: &mut Vec<usize>,
        f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if cur.len() == caps.len() {
            return f(cur);
        }
        for v in 0..=caps[cur.len()] {
            cur.push(v);
            rec(caps, cur, f)?;
            cur.pop();
        }
        ControlFlow::Continue(())
    }
    rec(caps, &mut Vec::with_capacity(caps.len()), f)
}

/// Calls `f` on every row-major matrix of non-negative integers whose row
/// sums respect `row_caps` and column sums respect `col_caps`.
pub(crate) fn for_each_capped_matrix(
    row_caps: &[usize],
    col_caps: &[usize],
    f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
) -> ControlFlow<()> {
    fn rec(
        cols: usize,
        rows_left: &mut [usize],
        cols_left: &mut [usize],
        cur: &mut Vec<usize>,
        total: usize,
        f: &mut dyn FnMut(&[usize]) -> ControlFlow<()>,
    ) -> ControlFlow<()> {
        if cur.len() == total {
            return f(cur);
        }
        let (r, c) = (cur.len() / cols, cur.len() % cols);
        let top = rows_left[r].min(cols_left[c]);
        for v in 0..=top {
            rows_left[r] -= v;
            cols_left[c] -= v;
            cur.push(v);
            let flow = rec(cols, rows_left, cols_left, cur, total, f);
            cur.pop();
            rows_left[r] += v;
            cols_left[c] += v;
            flow?;
        }
        ControlFlow::Continue(())
    }
    let total = row_caps.len() * col_caps.len();
    if total == 0 {
        return f(&[]);
    }
    rec(
        col_caps.len(),
        &mut row_caps.to_vec(),
        &mut col_caps.to_vec(),
        &mut Vec::with_capacity(total),
        total,
        f,
    )
}

/// Streams one pairing per `(sigma, pi, mu, lambda)` tuple to `visit`, in
/// the camera indices of `instance`. Stops early when `visit` breaks.
pub fn enumerate_candidates(
    instance: &Instance,
    eps_internal: f64,
    visit: &mut dyn FnMut(&CameraPairing) -> ControlFlow<()>,
) -> Result<ControlFlow<()>> {
    let buckets = build_angle_buckets(instance, eps_internal)?;
    let inst = if buckets.mirrored { instance.mirrored() } else { instance.clone() };
    let n = inst.n();
    let cams = inst.cameras();
    let left_bucket = (0..n)
        .map(|c| {
            buckets
                .left_of(cams[c])
                .ok_or_else(|| Error::InvalidRange(format!("camera {c} lies outside the left buckets")))
        })
        .collect::<Result<Vec<_>>>()?;
    let right_bucket = (n..2 * n).map(|c| buckets.right_of(cams[c])).collect();
    let mut e = Enumerator {
        n,
        left_bucket,
        right_bucket,
        left_count: buckets.left.len(),
        right_count: buckets.right.len(),
        mirrored: buckets.mirrored,
        visit,
    };
    Ok(e.run())
}

/// Best pairing found by the enumeration, with at least `(1 - epsilon)` of
/// the optimal angle sum when the enumeration completes.
pub fn solve_maxsum_angles(instance: &Instance, epsilon: f64, limits: Limits) -> Result<SolveReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    require_valid(instance, Objective::SumAngles)?;
    let start = Instant::now();
    let mut seen: HashSet<CameraPairing> = HashSet::new();
    let mut best: Option<(f64, CameraPairing)> = None;
    let mut best_assignment: Option<Assignment> = None;
    let mut candidates = 0u64;
    let mut budget_exceeded = false;
    let mut failure = None;

    let _flow = enumerate_candidates(instance, epsilon / 4.0, &mut |pairing| {
        if candidates >= limits.max_candidates {
            budget_exceeded = true;
            return ControlFlow::Break(());
        }
        candidates += 1;
        if !seen.insert(pairing.clone()) {
            return ControlFlow::Continue(());
        }
        match assign_angles(pairing, instance) {
            Ok(a) => {
                if improves(Objective::SumAngles, a.value, pairing, best.as_ref()) {
                    best = Some((a.value, pairing.clone()));
                    best_assignment = Some(a);
                }
                ControlFlow::Continue(())
            }
            Err(e) => {
                failure = Some(e);
                ControlFlow::Break(())
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(e);
    }
    let assignment = match best_assignment {
        Some(a) => a,
        None => assign_angles(&crate::heuristics::shift_pairing(instance), instance)?,
    };
    Ok(SolveReport {
        algorithm: Algorithm::Qptas,
        objective: Objective::SumAngles,
        epsilon: Some(epsilon),
        assignment,
        certified: !budget_exceeded,
        budget_exceeded,
        counters: Counters {
            candidates,
            recursion_depth: 0,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    })
}
