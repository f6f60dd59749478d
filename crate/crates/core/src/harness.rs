//! Solver dispatch plus the comparison and benchmark tables.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::generate::{generate, Profile};
use crate::geometry::Instance;
use crate::heuristics::best_heuristic;
use crate::oracle::{exact_report, OracleCaps};
use crate::pairing::Objective;
use crate::qptas_angles::solve_maxsum_angles;
use crate::qptas_ratios::solve_minsum_ratios;
use crate::report::{Algorithm, Limits, SolveReport};
use crate::validate::{validate_for_angles, validate_for_ratios};

/// Runs one solver. `epsilon` is required by the approximation schemes and
/// ignored by the others.
pub fn run_solver(
    instance: &Instance,
    objective: Objective,
    algorithm: Algorithm,
    epsilon: Option<f64>,
    limits: Limits,
) -> Result<SolveReport> {
    match algorithm {
        Algorithm::Exact => exact_report(instance, objective, OracleCaps::default()),
        Algorithm::Heuristic => best_heuristic(instance, objective),
        Algorithm::Qptas => {
            let eps = epsilon.ok_or(Error::InvalidEpsilon(f64::NAN))?;
            match objective {
                Objective::SumAngles => solve_maxsum_angles(instance, eps, limits),
                Objective::SumRatios => solve_minsum_ratios(instance, eps, limits),
            }
        }
    }
}

/// Objectives whose validation gate accepts `instance`.
pub fn admissible_objectives(instance: &Instance) -> Vec<Objective> {
    let mut out = Vec::new();
    if validate_for_angles(instance).is_accept() {
        out.push(Objective::SumAngles);
    }
    if validate_for_ratios(instance).is_accept() {
        out.push(Objective::SumRatios);
    }
    out
}

/// One row of a comparison or benchmark table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub seed: Option<u64>,
    pub algorithm: Algorithm,
    pub objective: Objective,
    pub epsilon: Option<f64>,
    pub value: f64,
    /// Value divided by the exact optimum, when the oracle ran.
    pub ratio_to_exact: Option<f64>,
    pub wall_ms: f64,
    pub candidates: u64,
    pub certified: bool,
}

impl BenchRow {
    pub const HEADER: &'static str = "n,seed,algorithm,objective,epsilon,value,ratio_to_exact,wall_ms,candidates,certified";
}

/// Runs exact (when within the oracle cap), the approximation scheme and the
/// heuristic on one instance and objective.
pub fn compare(
    instance: &Instance,
    objective: Objective,
    epsilon: f64,
    limits: Limits,
    seed: Option<u64>,
) -> Result<Vec<BenchRow>> {
    let n = instance.n();
    let exact = if n <= OracleCaps::default().all_overlapping {
        Some(run_solver(instance, objective, Algorithm::Exact, None, limits)?)
    } else {
        None
    };
    let exact_value = exact.as_ref().map(SolveReport::value);
    let mut rows = Vec::new();
    let mut push = |r: SolveReport| {
        let ratio_to_exact = exact_value.map(|opt| if opt == 0.0 { 1.0 } else { r.value() / opt });
        rows.push(BenchRow {
            n,
            seed,
            algorithm: r.algorithm,
            objective,
            epsilon: r.epsilon,
            value: r.value(),
            ratio_to_exact,
            wall_ms: r.counters.wall_ms,
            candidates: r.counters.candidates,
            certified: r.certified,
        });
    };
    if let Some(r) = exact {
        push(r);
    }
    push(run_solver(instance, objective, Algorithm::Qptas, Some(epsilon), limits)?);
    push(run_solver(instance, objective, Algorithm::Heuristic, None, limits)?);
    Ok(rows)
}

/// Parameters of a benchmark sweep. Ranges are inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchPlan {
    pub n_range: (usize, usize),
    pub seed_range: (u64, u64),
    pub epsilon: f64,
    pub objectives: Vec<Objective>,
    pub profile: Profile,
    pub margin: f64,
    pub limits: Limits,
}

pub fn bench(plan: &BenchPlan) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for n in plan.n_range.0..=plan.n_range.1 {
        for seed in plan.seed_range.0..=plan.seed_range.1 {
            let instance = generate(n, seed, plan.profile, plan.margin)?.to_instance()?;
            for &objective in &plan.objectives {
                rows.extend(compare(&instance, objective, plan.epsilon, plan.limits, Some(seed))?);
            }
        }
    }
    Ok(rows)
}

/// Writes rows as CSV with [`BenchRow::HEADER`]; absent values are empty.
pub fn rows_to_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(BenchRow::HEADER.split(',')).expect("in-memory write");
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in rows {
        w.write_record([
            r.n.to_string(),
            r.seed.map(|s| s.to_string()).unwrap_or_default(),
            r.algorithm.name().to_string(),
            r.objective.name().to_string(),
            opt(r.epsilon),
            r.value.to_string(),
            opt(r.ratio_to_exact),
            format!("{:.3}", r.wall_ms),
            r.candidates.to_string(),
            r.certified.to_string(),
        ])
        .expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv output is utf-8")
}

/// Parses `"a..b"`, `"a-b"` or a single number into an inclusive range.
pub fn parse_range<T: std::str::FromStr + PartialOrd + Copy>(text: &str) -> Result<(T, T)> {
    let bad = || Error::InvalidRange(format!("cannot parse range `{text}`"));
    let parse = |s: &str| s.trim().parse::<T>().map_err(|_| bad());
    let (lo, hi) = if let Some((a, b)) = text.split_once("..") {
        (parse(a.trim_start_matches('=').trim())?, parse(b.trim_start_matches('='))?)
    } else if let Some((a, b)) = text.split_once('-') {
        (parse(a)?, parse(b)?)
    } else {
        let v = parse(text)?;
        (v, v)
    };
    if lo > hi {
        return Err(bad());
    }
    Ok((lo, hi))
}
