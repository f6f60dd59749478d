//! Recursive approximation scheme for minimizing the sum of aspect ratios.
//!
//! A call receives a balanced camera subset `X` (as many cameras left of `M`
//! as right of it), the `|X| / 2` targets it must serve sorted by depth, and
//! an admissible baseline range `[lower, upper]`. It guesses the median
//! baseline `beta` among the cross baselines of `X` in that range, buckets
//! the line within `2 n beta` of `M`, and guesses per bucket pair how many
//! medium pairs cross (`mu`) and per bucket how many cameras carry short
//! baselines (`sigma`). Medium pairs are fixed directly; short and long
//! cameras are solved recursively on disjoint halves of the targets.
//!
//! `n` and `M` are always those of the whole instance.

use std::collections::HashMap;
use std::ops::ControlFlow;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Instance;
use crate::heuristics::shift_pairing;
use crate::pairing::{assign_ratios, ratio_cost, CameraPairing, MaybePairing, Objective};
use crate::partition::{ratio_ladder, Ladder};
use crate::qptas_angles::for_each_capped_matrix;
use crate::report::{Algorithm, Counters, Limits, SolveReport};
use crate::validate::require_valid;

/// One invocation of the recursion.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioCall {
    /// Camera indices, ascending; half lie left of `M`.
    pub cameras: Vec<usize>,
    /// Target indices sorted by depth, `cameras.len() / 2` of them.
    pub targets: Vec<usize>,
    pub lower: f64,
    pub upper: f64,
    pub depth: usize,
}

/// Median guess tried by a call, with the bounds handed to its children.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TraceRecord {
    pub depth: usize,
    pub beta: f64,
    pub short_bounds: (f64, f64),
    pub long_bounds: (f64, f64),
}

/// Instrumentation gathered during one solve.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct RecursionTrace {
    /// Up to [`RecursionTrace::RECORD_CAP`] records in visiting order.
    pub records: Vec<TraceRecord>,
    pub records_dropped: u64,
    /// Deepest call reached, counting empty calls; the top call has depth 0.
    pub max_depth: usize,
    /// Number of (ancestor guess, descendant guess) pairs compared.
    pub nested_pairs_checked: u64,
    /// Nested guesses closer than a factor of two to an ancestor guess.
    pub factor2_violations: u64,
    /// Child calls whose lower bound shrank or whose upper bound grew by
    /// more than `1 + eps` relative to the parent.
    pub bound_violations: u64,
}

impl RecursionTrace {
    pub const RECORD_CAP: usize = 100_000;

    fn record(&mut self, rec: TraceRecord) {
        if self.records.len() < Self::RECORD_CAP {
            self.records.push(rec);
        } else {
            self.records_dropped += 1;
        }
    }
}

/// Cameras of one nonempty bucket, closest to `M` first.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BucketContents {
    pub bucket: usize,
    pub cameras: Vec<usize>,
}

/// Guessed counts for one `beta`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BucketMaps {
    /// Row-major `left.len() x right.len()` crossing counts.
    pub mu: Vec<usize>,
    pub sigma_left: Vec<usize>,
    pub sigma_right: Vec<usize>,
}

/// Split of the bucketed cameras of a call.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CameraClasses {
    pub short: Vec<usize>,
    pub mid: Vec<usize>,
    pub long: Vec<usize>,
    pub mid_pairs: Vec<(usize, usize)>,
}

/// Buckets the cameras of `subset` by distance from `midpoint`.
///
/// Returns the nonempty left buckets, the nonempty right buckets (each
/// ordered outward) and the cameras outside the ladder.
pub fn bucket_cameras(
    positions: &[f64],
    subset: &[usize],
    midpoint: f64,
    ladder: &Ladder,
) -> (Vec<BucketContents>, Vec<BucketContents>, Vec<usize>) {
    let mut left: Vec<(usize, f64, usize)> = Vec::new();
    let mut right: Vec<(usize, f64, usize)> = Vec::new();
    let mut outside = Vec::new();
    for &c in subset {
        let x = positions[c];
        let dist = (x - midpoint).abs();
        match ladder.locate(dist) {
            Some(b) if x < midpoint => left.push((b, dist, c)),
            Some(b) => right.push((b, dist, c)),
            None => outside.push(c),
        }
    }
    let group = |mut v: Vec<(usize, f64, usize)>| {
        v.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1)));
        let mut out: Vec<BucketContents> = Vec::new();
        for (b, _, c) in v {
            match out.last_mut() {
                Some(last) if last.bucket == b => last.cameras.push(c),
                _ => out.push(BucketContents { bucket: b, cameras: vec![c] }),
            }
        }
        out
    };
    (group(left), group(right), outside)
}

/// Applies one `(mu, sigma)` guess to the bucketed cameras.
///
/// Bucket pairs are processed in row-major order; each pairs its
/// `mu` cameras closest to `M` on both sides. Of what remains in each
/// bucket, the `sigma` cameras farthest from `M` become short and the rest
/// long. Cameras outside the buckets are not seen here.
pub fn assign_cameras_to_classes(
    left: &[BucketContents],
    right: &[BucketContents],
    maps: &BucketMaps,
) -> Result<CameraClasses> {
    let (rows, cols) = (left.len(), right.len());
    if maps.mu.len() != rows * cols || maps.sigma_left.len() != rows || maps.sigma_right.len() != cols {
        return Err(Error::ConstraintViolated("map shapes do not match the buckets".into()));
    }
    let sum_left: usize = maps.sigma_left.iter().sum();
    let sum_right: usize = maps.sigma_right.iter().sum();
    if sum_left != sum_right {
        return Err(Error::ConstraintViolated(format!(
            "short counts differ across M: {sum_left} left, {sum_right} right"
        )));
    }
    for (r, b) in left.iter().enumerate() {
        let used: usize = maps.mu[r * cols..(r + 1) * cols].iter().sum::<usize>() + maps.sigma_left[r];
        if used > b.cameras.len() {
            return Err(Error::ConstraintViolated(format!("left bucket {} is over-committed", b.bucket)));
        }
    }
    for (c, b) in right.iter().enumerate() {
        let used: usize = (0..rows).map(|r| maps.mu[r * cols + c]).sum::<usize>() + maps.sigma_right[c];
        if used > b.cameras.len() {
            return Err(Error::ConstraintViolated(format!("right bucket {} is over-committed", b.bucket)));
        }
    }

    let mut taken_left = vec![0usize; rows];
    let mut taken_right = vec![0usize; cols];
    let mut out = CameraClasses::default();
    for r in 0..rows {
        for c in 0..cols {
            let k = maps.mu[r * cols + c];
            for _ in 0..k {
                let a = left[r].cameras[taken_left[r]];
                let b = right[c].cameras[taken_right[c]];
                taken_left[r] += 1;
                taken_right[c] += 1;
                out.mid.extend([a, b]);
                out.mid_pairs.push((a.min(b), a.max(b)));
            }
        }
    }
    let mut split = |bucket: &BucketContents, taken: usize, sigma: usize| {
        let rest = &bucket.cameras[taken..];
        let cut = rest.len() - sigma;
        out.long.extend_from_slice(&rest[..cut]);
        out.short.extend_from_slice(&rest[cut..]);
    };
    for (r, b) in left.iter().enumerate() {
        split(b, taken_left[r], maps.sigma_left[r]);
    }
    for (c, b) in right.iter().enumerate() {
        split(b, taken_right[c], maps.sigma_right[c]);
    }
    out.short.sort_unstable();
    out.mid.sort_unstable();
    out.long.sort_unstable();
    out.mid_pairs.sort_unstable();
    Ok(out)
}

/// Every vector `v` with `0 <= v[i] <= caps[i]`, grouped by `sum(v)`.
fn capped_vectors_by_sum(caps: &[usize]) -> Vec<Vec<Vec<usize>>> {
    let total: usize = caps.iter().sum();
    let mut out = vec![Vec::new(); total + 1];
    fn rec(caps: &[usize], cur: &mut Vec<usize>, sum: usize, out: &mut [Vec<Vec<usize>>]) {
        if cur.len() == caps.len() {
            out[sum].push(cur.clone());
            return;
        }
        for v in 0..=caps[cur.len()] {
            cur.push(v);
            rec(caps, cur, sum + v, out);
            cur.pop();
        }
    }
    rec(caps, &mut Vec::with_capacity(caps.len()), 0, &mut out);
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum ChildKind {
    Short,
    Long,
}

/// Runs the recursion on one instance and collects its trace.
pub struct RatioSolver<'a> {
    instance: &'a Instance,
    eps: f64,
    limits: Limits,
    candidates: u64,
    budget_exceeded: bool,
    /// Guesses of the calls on the current recursion path.
    ancestors: Vec<f64>,
    trace: RecursionTrace,
}

impl<'a> RatioSolver<'a> {
    pub fn new(instance: &'a Instance, eps_internal: f64, limits: Limits) -> Result<Self> {
        if !(eps_internal > 0.0 && eps_internal < 0.5) {
            return Err(Error::InvalidEpsilon(eps_internal));
        }
        Ok(Self {
            instance,
            eps: eps_internal,
            limits,
            candidates: 0,
            budget_exceeded: false,
            ancestors: Vec::new(),
            trace: RecursionTrace::default(),
        })
    }

    /// Call on all cameras and targets with range `[b_{n,n+1}, b_{1,2n}]`.
    pub fn top_call(&self) -> RatioCall {
        let inst = self.instance;
        let n = inst.n();
        let mut targets: Vec<usize> = (0..n).collect();
        targets.sort_by(|&a, &b| inst.target(a).y.abs().total_cmp(&inst.target(b).y.abs()));
        RatioCall {
            cameras: (0..2 * n).collect(),
            targets,
            lower: inst.baseline(n - 1, n),
            upper: inst.baseline(0, 2 * n - 1),
            depth: 0,
        }
    }

    pub fn candidates(&self) -> u64 {
        self.candidates
    }

    pub fn budget_exceeded(&self) -> bool {
        self.budget_exceeded
    }

    pub fn trace(&self) -> &RecursionTrace {
        &self.trace
    }

    pub fn into_trace(self) -> RecursionTrace {
        self.trace
    }

    /// Cross baselines of `cameras` within `[lower, upper]`, ascending and distinct.
    fn baseline_guesses(&self, call: &RatioCall) -> Vec<f64> {
        let half = call.cameras.len() / 2;
        let (lefts, rights) = call.cameras.split_at(half);
        let mut out: Vec<f64> = lefts
            .iter()
            .flat_map(|&i| rights.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.instance.baseline(i, j))
            .filter(|&b| call.lower <= b && b <= call.upper)
            .collect();
        out.sort_by(f64::total_cmp);
        out.dedup();
        out
    }

    fn check_nesting(&mut self, beta: f64) {
        for &outer in &self.ancestors {
            self.trace.nested_pairs_checked += 1;
            if !(beta >= 2.0 * outer || beta <= outer / 2.0) {
                self.trace.factor2_violations += 1;
            }
        }
    }

    fn check_bounds(&mut self, parent: &RatioCall, lower: f64, upper: f64) {
        if lower < parent.lower || upper > parent.upper * (1.0 + self.eps) {
            self.trace.bound_violations += 1;
        }
    }

    /// Best pairing of `call.cameras` found by the recursion, or `Dummy` if
    /// no guess admits a pairing within the bounds.
    pub fn min_ratio_pair(&mut self, call: &RatioCall) -> MaybePairing {
        self.trace.max_depth = self.trace.max_depth.max(call.depth);
        if call.cameras.is_empty() {
            return MaybePairing::Pairs(Vec::new());
        }
        let inst = self.instance;
        let n = inst.n();
        let midpoint = inst.midpoint();
        let m = call.targets.len();
        let mut best_cost = f64::INFINITY;
        let mut best: Option<Vec<(usize, usize)>> = None;

        for beta in self.baseline_guesses(call) {
            if self.budget_exceeded {
                break;
            }
            self.check_nesting(beta);
            let short_bounds = (call.lower, (1.0 + self.eps) * beta / (2.0 * n as f64));
            let long_bounds = ((1.0 - self.eps) * 2.0 * n as f64 * beta, call.upper * (1.0 + self.eps));
            self.check_bounds(call, short_bounds.0, short_bounds.1);
            self.check_bounds(call, long_bounds.0, long_bounds.1);
            self.trace.record(TraceRecord { depth: call.depth, beta, short_bounds, long_bounds });

            let ladder = ratio_ladder(beta, n, self.eps).expect("positive beta and valid epsilon");
            let (left, right, outside) = bucket_cameras(inst.cameras(), &call.cameras, midpoint, &ladder);
            let row_caps: Vec<usize> = left.iter().map(|b| b.cameras.len()).collect();
            let col_caps: Vec<usize> = right.iter().map(|b| b.cameras.len()).collect();
            let mut memo: HashMap<(ChildKind, Vec<usize>), MaybePairing> = HashMap::new();

            self.ancestors.push(beta);
            let _flow = for_each_capped_matrix(&row_caps, &col_caps, &mut |mu| {
                let cols = col_caps.len();
                let rest_left: Vec<usize> = (0..row_caps.len())
                    .map(|r| row_caps[r] - mu[r * cols..(r + 1) * cols].iter().sum::<usize>())
                    .collect();
                let rest_right: Vec<usize> = (0..cols)
                    .map(|c| col_caps[c] - (0..row_caps.len()).map(|r| mu[r * cols + c]).sum::<usize>())
                    .collect();
                let m_mid: usize = mu.iter().sum();
                let by_sum_left = capped_vectors_by_sum(&rest_left);
                let by_sum_right = capped_vectors_by_sum(&rest_right);
                for (m_s, (lefts, rights)) in by_sum_left.iter().zip(&by_sum_right).enumerate() {
                    for sigma_left in lefts {
                        for sigma_right in rights {
                            if self.candidates >= self.limits.max_candidates {
                                self.budget_exceeded = true;
                                return ControlFlow::Break(());
                            }
                            self.candidates += 1;
                            if 2 * m_s > m || m_s + m_mid > m || 2 * (m - m_s - m_mid) > m {
                                continue;
                            }
                            let maps = BucketMaps {
                                mu: mu.to_vec(),
                                sigma_left: sigma_left.clone(),
                                sigma_right: sigma_right.clone(),
                            };
                            let mut classes = assign_cameras_to_classes(&left, &right, &maps)
                                .expect("enumerated maps satisfy the bucket constraints");
                            classes.long.extend_from_slice(&outside);
                            classes.long.sort_unstable();

                            let short_call = RatioCall {
                                cameras: classes.short,
                                targets: call.targets[..m_s].to_vec(),
                                lower: short_bounds.0,
                                upper: short_bounds.1,
                                depth: call.depth + 1,
                            };
                            let long_call = RatioCall {
                                cameras: classes.long,
                                targets: call.targets[m_s + m_mid..].to_vec(),
                                lower: long_bounds.0,
                                upper: long_bounds.1,
                                depth: call.depth + 1,
                            };
                            let short = self.child(&mut memo, ChildKind::Short, &short_call);
                            let long = self.child(&mut memo, ChildKind::Long, &long_call);
                            let (MaybePairing::Pairs(sp), MaybePairing::Pairs(lp)) = (short, long) else {
                                continue;
                            };
                            let mut pairs = classes.mid_pairs.clone();
                            pairs.extend(sp);
                            pairs.extend(lp);
                            pairs.sort_unstable();
                            let cost = ratio_cost(inst, &pairs, &call.targets);
                            let better = cost < best_cost
                                || (cost == best_cost && best.as_ref().is_some_and(|b| pairs < *b));
                            if better && cost.is_finite() {
                                best_cost = cost;
                                best = Some(pairs);
                            }
                        }
                    }
                }
                ControlFlow::Continue(())
            });
            self.ancestors.pop();
        }
        best.map_or(MaybePairing::Dummy, MaybePairing::Pairs)
    }

    fn child(
        &mut self,
        memo: &mut HashMap<(ChildKind, Vec<usize>), MaybePairing>,
        kind: ChildKind,
        call: &RatioCall,
    ) -> MaybePairing {
        let key = (kind, call.cameras.clone());
        if let Some(hit) = memo.get(&key) {
            return hit.clone();
        }
        let out = self.min_ratio_pair(call);
        memo.insert(key, out.clone());
        out
    }
}

/// Report plus the recursion trace of one solve.
#[derive(Debug, Clone, PartialEq)]
pub struct RatioSolution {
    pub report: SolveReport,
    pub trace: RecursionTrace,
}

/// Sum of ratios within `(1 + epsilon)` of optimal when the recursion
/// completes. If it is cut short without a pairing, the shift pairing is
/// returned uncertified.
pub fn solve_minsum_ratios(instance: &Instance, epsilon: f64, limits: Limits) -> Result<SolveReport> {
    solve_minsum_ratios_traced(instance, epsilon, limits).map(|s| s.report)
}

pub fn solve_minsum_ratios_traced(instance: &Instance, epsilon: f64, limits: Limits) -> Result<RatioSolution> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::InvalidEpsilon(epsilon));
    }
    require_valid(instance, Objective::SumRatios)?;
    let start = Instant::now();
    let mut solver = RatioSolver::new(instance, epsilon / 10.0, limits)?;
    let top = solver.top_call();
    let found = solver.min_ratio_pair(&top);
    let budget_exceeded = solver.budget_exceeded();
    let (pairing, certified) = match found {
        MaybePairing::Pairs(pairs) => (CameraPairing::new(pairs, 2 * instance.n())?, !budget_exceeded),
        MaybePairing::Dummy => (shift_pairing(instance), false),
    };
    let candidates = solver.candidates();
    let trace = solver.into_trace();
    let report = SolveReport {
        algorithm: Algorithm::Qptas,
        objective: Objective::SumRatios,
        epsilon: Some(epsilon),
        assignment: assign_ratios(&pairing, instance),
        certified,
        budget_exceeded,
        counters: Counters {
            candidates,
            recursion_depth: trace.max_depth,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    };
    Ok(RatioSolution { report, trace })
}
