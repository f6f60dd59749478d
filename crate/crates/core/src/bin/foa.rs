//! Command-line front end: validate, generate, solve, compare, bench.
//!
//! Exit codes: 0 success, 1 the instance failed validation, 2 usage or
//! input error, 3 the enumeration budget was exhausted (output still
//! written). Errors are printed to stderr as a JSON object.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::json;

use foa::generate::{generate, Profile};
use foa::harness::{admissible_objectives, bench, compare, parse_range, rows_to_csv, run_solver, BenchPlan};
use foa::io::{write_text, InstanceFile, ReportFile};
use foa::validate::{validate_for_angles, validate_for_ratios};
use foa::{Algorithm, Error, Instance, Limits, Objective};

#[derive(Parser)]
#[command(name = "foa", version, about = "Pair collinear cameras and assign them to targets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum ObjectiveArg {
    Angles,
    Ratios,
}

impl From<ObjectiveArg> for Objective {
    fn from(o: ObjectiveArg) -> Self {
        match o {
            ObjectiveArg::Angles => Objective::SumAngles,
            ObjectiveArg::Ratios => Objective::SumRatios,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgorithmArg {
    Exact,
    Qptas,
    Heuristic,
}

impl From<AlgorithmArg> for Algorithm {
    fn from(a: AlgorithmArg) -> Self {
        match a {
            AlgorithmArg::Exact => Algorithm::Exact,
            AlgorithmArg::Qptas => Algorithm::Qptas,
            AlgorithmArg::Heuristic => Algorithm::Heuristic,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum ProfileArg {
    Uniform,
    Geometric,
}

impl From<ProfileArg> for Profile {
    fn from(p: ProfileArg) -> Self {
        match p {
            ProfileArg::Uniform => Profile::UniformCameras,
            ProfileArg::Geometric => Profile::GeometricGaps,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check an instance against an objective's preconditions.
    Validate {
        file: PathBuf,
        #[arg(long, value_enum)]
        objective: ObjectiveArg,
    },
    /// Write a seeded random instance.
    Generate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "uniform")]
        profile: ProfileArg,
        #[arg(long, default_value_t = 1.5)]
        margin: f64,
        /// Output path; stdout if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Solve one instance and write a JSON report.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum)]
        objective: ObjectiveArg,
        #[arg(long, value_enum, default_value = "qptas")]
        algorithm: AlgorithmArg,
        #[arg(long)]
        epsilon: Option<f64>,
        #[arg(long, default_value_t = Limits::default().max_candidates)]
        max_candidates: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run exact, approximation and heuristic on one instance.
    Compare {
        file: PathBuf,
        #[arg(long)]
        epsilon: f64,
        /// Restrict to one objective; default is every admissible one.
        #[arg(long, value_enum)]
        objective: Option<ObjectiveArg>,
        #[arg(long, default_value_t = Limits::default().max_candidates)]
        max_candidates: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Sweep generated instances and write a CSV table.
    Bench {
        /// Inclusive range such as `2..4`.
        #[arg(long)]
        n_range: String,
        /// Inclusive seed range such as `0..9`.
        #[arg(long)]
        seeds: String,
        #[arg(long)]
        epsilon: f64,
        #[arg(long, value_enum)]
        objective: Option<ObjectiveArg>,
        #[arg(long, value_enum, default_value = "uniform")]
        profile: ProfileArg,
        #[arg(long, default_value_t = 1.5)]
        margin: f64,
        #[arg(long, default_value_t = Limits::default().max_candidates)]
        max_candidates: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure with its exit code.
struct Failure {
    code: u8,
    kind: &'static str,
    message: String,
    details: serde_json::Value,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let (code, kind, details) = match &e {
            Error::InvalidInstance(v) => (1, "invalid_instance", json!(v)),
            Error::MalformedInstance(_) => (1, "malformed_instance", json!(null)),
            Error::InstanceTooLarge { n, cap } => (2, "instance_too_large", json!({"n": n, "cap": cap})),
            Error::InvalidEpsilon(_) => (2, "invalid_epsilon", json!(null)),
            Error::Io(_) => (2, "io", json!(null)),
            _ => (2, "error", json!(null)),
        };
        Failure { code, kind, message: e.to_string(), details }
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_text(path, text).map_err(Failure::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load(path: &Path) -> Result<(Instance, Option<u64>), Failure> {
    let file = InstanceFile::read(path)?;
    let seed = file.generator.as_ref().map(|g| g.seed);
    Ok((file.to_instance()?, seed))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Validate { file, objective } => {
            let (instance, _) = load(&file)?;
            let verdict = match Objective::from(objective) {
                Objective::SumAngles => validate_for_angles(&instance),
                Objective::SumRatios => validate_for_ratios(&instance),
            };
            let body = json!({
                "accept": verdict.is_accept(),
                "objective": Objective::from(objective),
                "issues": verdict.issues,
                "offending_targets": verdict.offending_targets().iter().map(|t| t + 1).collect::<Vec<_>>(),
            });
            println!("{}", serde_json::to_string_pretty(&body).expect("verdicts serialize"));
            Ok(if verdict.is_accept() { 0 } else { 1 })
        }
        Command::Generate { n, seed, profile, margin, out } => {
            let file = generate(n, seed, profile.into(), margin)?;
            emit(out.as_deref(), &(file.to_json() + "\n"))?;
            Ok(0)
        }
        Command::Solve { file, objective, algorithm, epsilon, max_candidates, out } => {
            let (instance, seed) = load(&file)?;
            let limits = Limits { max_candidates };
            let report = run_solver(&instance, objective.into(), algorithm.into(), epsilon, limits)?;
            let file = ReportFile::new(&report, instance.n(), limits, seed);
            emit(out.as_deref(), &(file.to_json() + "\n"))?;
            Ok(if report.budget_exceeded { 3 } else { 0 })
        }
        Command::Compare { file, epsilon, objective, max_candidates, out } => {
            let (instance, seed) = load(&file)?;
            let objectives = match objective {
                Some(o) => vec![o.into()],
                None => admissible_objectives(&instance),
            };
            let limits = Limits { max_candidates };
            let mut rows = Vec::new();
            for o in objectives {
                rows.extend(compare(&instance, o, epsilon, limits, seed)?);
            }
            emit(out.as_deref(), &rows_to_csv(&rows))?;
            Ok(0)
        }
        Command::Bench { n_range, seeds, epsilon, objective, profile, margin, max_candidates, out } => {
            let plan = BenchPlan {
                n_range: parse_range(&n_range)?,
                seed_range: parse_range(&seeds)?,
                epsilon,
                objectives: match objective {
                    Some(o) => vec![o.into()],
                    None => vec![Objective::SumAngles, Objective::SumRatios],
                },
                profile: profile.into(),
                margin,
                limits: Limits { max_candidates },
            };
            emit(out.as_deref(), &rows_to_csv(&bench(&plan)?))?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let body = json!({"error": {"kind": "usage", "message": e.to_string().trim_end()}});
            eprintln!("{body}");
            return ExitCode::from(2);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            let body = json!({"error": {"kind": f.kind, "message": f.message, "details": f.details}});
            eprintln!("{body}");
            ExitCode::from(f.code)
        }
    }
}
