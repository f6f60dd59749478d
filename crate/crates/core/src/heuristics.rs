//! Two fixed all-overlapping pairings used as comparison baselines.

use std::time::Instant;

use crate::error::Result;
use crate::geometry::Instance;
use crate::pairing::{assign, improves, CameraPairing, Objective};
use crate::report::{Algorithm, Counters, SolveReport};
use crate::validate::require_valid;

/// `c_i` with `c_{2n+1-i}`: maximally nested baselines.
pub fn nested_pairing(instance: &Instance) -> CameraPairing {
    let n = instance.n();
    CameraPairing::canonical((0..n).map(|i| (i, 2 * n - 1 - i)).collect())
}

/// `c_i` with `c_{n+i}`: every pair shifted by `n`.
pub fn shift_pairing(instance: &Instance) -> CameraPairing {
    let n = instance.n();
    CameraPairing::canonical((0..n).map(|i| (i, n + i)).collect())
}

/// Better of the two canonical pairings under `objective`, each with its
/// optimal target association. Never certified.
pub fn best_heuristic(instance: &Instance, objective: Objective) -> Result<SolveReport> {
    require_valid(instance, objective)?;
    let start = Instant::now();
    let mut best = None;
    let mut best_assignment = None;
    for pairing in [shift_pairing(instance), nested_pairing(instance)] {
        let a = assign(objective, &pairing, instance)?;
        if improves(objective, a.value, &pairing, best.as_ref()) {
            best = Some((a.value, pairing));
            best_assignment = Some(a);
        }
    }
    Ok(SolveReport {
        algorithm: Algorithm::Heuristic,
        objective,
        epsilon: None,
        assignment: best_assignment.expect("two candidates evaluated"),
        certified: false,
        budget_exceeded: false,
        counters: Counters {
            candidates: 2,
            recursion_depth: 0,
            wall_ms: start.elapsed().as_secs_f64() * 1e3,
        },
    })
}
