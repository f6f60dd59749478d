//! Exhaustive search over camera pairings, used as ground truth.
//!
//! `AllOverlapping` enumerates the `n!` bijections between the `n` leftmost
//! and `n` rightmost cameras; some optimum always has that shape.
//! `AllPairings` enumerates all `(2n - 1)!!` perfect pairings and exists to
//! check that claim. Both visit pairings in lexicographic order and keep the
//! first best one, so ties resolve to the smallest canonical pairing.

use std::time::Instant;

use crate::error::{Error, Result};
use crate::geometry::Instance;
use crate::pairing::{assign, improves, Assignment, CameraPairing, Objective};
use crate::report::{Algorithm, Counters, SolveReport};
use crate::validate::require_valid;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchSpace {
    AllOverlapping,
    AllPairings,
}

/// Largest `n` each search space accepts.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleCaps {
    pub all_overlapping: usize,
    pub all_pairings: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        Self { all_overlapping: 8, all_pairings: 6 }
    }
}

impl OracleCaps {
    pub fn cap(&self, space: SearchSpace) -> usize {
        match space {
            SearchSpace::AllOverlapping => self.all_overlapping,
            SearchSpace::AllPairings => self.all_pairings,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    pub best: Assignment,
    pub pairings_examined: u64,
    pub objective: Objective,
}

/// Rearranges `v` into the next permutation in lexicographic order.
/// Returns `false` (leaving `v` sorted ascending) after the last one.
fn next_permutation(v: &mut [usize]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        v.reverse();
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

type PairingVisitor<'a> = dyn FnMut(&[(usize, usize)]) -> Result<()> + 'a;

fn for_each_perfect_pairing(
    used: &mut [bool],
    current: &mut Vec<(usize, usize)>,
    visit: &mut PairingVisitor<'_>,
) -> Result<()> {
    let Some(first) = used.iter().position(|&u| !u) else {
        return visit(current);
    };
    used[first] = true;
    for partner in first + 1..used.len() {
        if used[partner] {
            continue;
        }
        used[partner] = true;
        current.push((first, partner));
        for_each_perfect_pairing(used, current, visit)?;
        current.pop();
        used[partner] = false;
    }
    used[first] = false;
    Ok(())
}

pub fn solve_exact(instance: &Instance, objective: Objective, space: SearchSpace) -> Result<OracleResult> {
    solve_exact_with_caps(instance, objective, space, OracleCaps::default())
}

pub fn solve_exact_with_caps(
    instance: &Instance,
    objective: Objective,
    space: SearchSpace,
    caps: OracleCaps,
) -> Result<OracleResult> {
    require_valid(instance, objective)?;
    let n = instance.n();
    let cap = caps.cap(space);
    if n > cap {
        return Err(Error::InstanceTooLarge { n, cap });
    }

    let mut best: Option<(f64, CameraPairing)> = None;
    let mut best_assignment: Option<Assignment> = None;
    let mut examined = 0u64;
    let mut consider = |pairs: Vec<(usize, usize)>| -> Result<()> {
        let pairing = CameraPairing::canonical(pairs);
        let a = assign(objective, &pairing, instance)?;
        examined += 1;
        if improves(objective, a.value, &pairing, best.as_ref()) {
            best = Some((a.value, pairing));
            best_assignment = Some(a);
        }
        Ok(())
    };

    match space {
        SearchSpace::AllOverlapping => {
            let mut right: Vec<usize> = (n..2 * n).collect();
            loop {
                consider(right.iter().enumerate().map(|(i, &j)| (i, j)).collect())?;
                if !next_permutation(&mut right) {
                    break;
                }
            }
        }
        SearchSpace::AllPairings => {
            let mut used = vec![false; 2 * n];
            for_each_perfect_pairing(&mut used, &mut Vec::with_capacity(n), &mut |pairs| {
                consider(pairs.to_vec())
            })?;
        }
    }

    Ok(OracleResult {
        best: best_assignment.expect("at least one pairing exists"),
        pairings_examined: examined,
        objective,
    })
}

/// Exact optimum over all-overlapping pairings, wrapped as a report.
pub fn exact_report(instance: &Instance, objective: Objective, caps: OracleCaps) -> Result<SolveReport> {
    let start = Instant::now();
    let result = solve_exact_with_caps(instance, objective, SearchSpace::AllOverlapping, caps)?;
    Ok(SolveReport {
        algorithm: Algorithm::Exact,
        objective,
        epsilon: None,
        assignment: result.best,
        certified: true,
        budget_exceeded: false,
        counters: Counters {
            candidates: result.pairings_examined,
            recursion_depth: 0,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    })
}
