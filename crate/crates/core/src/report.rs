use std::fmt;

use serde::{Deserialize, Serialize};

use crate::pairing::{Assignment, Objective};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Exact,
    Qptas,
    Heuristic,
}

impl Algorithm {
    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Exact => "exact",
            Algorithm::Qptas => "qptas",
            Algorithm::Heuristic => "heuristic",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Enumeration budget for the approximation schemes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Stop after this many candidate tuples; the result is then not certified.
    pub max_candidates: u64,
}

impl Default for Limits {
    fn default() -> Self {
        Self { max_candidates: 10_000_000 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Counters {
    /// Candidate tuples (or pairings, for the oracle) examined.
    pub candidates: u64,
    /// Deepest recursion level reached (0 for non-recursive solvers).
    pub recursion_depth: usize,
    pub wall_ms: f64,
}

/// Outcome of any solver.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub algorithm: Algorithm,
    pub objective: Objective,
    pub epsilon: Option<f64>,
    pub assignment: Assignment,
    /// The solver's guarantee applies: exact optimum, or a full enumeration
    /// of the approximation scheme. Heuristics are never certified.
    pub certified: bool,
    /// The enumeration stopped at `Limits::max_candidates`.
    pub budget_exceeded: bool,
    pub counters: Counters,
}

impl SolveReport {
    pub fn value(&self) -> f64 {
        self.assignment.value
    }
}
