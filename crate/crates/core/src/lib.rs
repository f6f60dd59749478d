//! Camera-pair to target assignment with collinear cameras.
//!
//! Two objectives are supported: maximize the sum of tracking angles and
//! minimize the sum of aspect ratios. Each has a quasi-polynomial
//! approximation scheme, an exhaustive oracle for small instances, and two
//! fixed-pairing heuristics for comparison.

pub mod error;
pub mod generate;
pub mod geometry;
pub mod harness;
pub mod heuristics;
pub mod hungarian;
pub mod io;
pub mod oracle;
pub mod pairing;
pub mod partition;
pub mod qptas_angles;
pub mod qptas_ratios;
pub mod report;
pub mod validate;

pub use error::{Error, Result};
pub use geometry::{Instance, Point};
pub use pairing::{Assignment, CameraPairing, Objective};
pub use report::{Algorithm, Counters, Limits, SolveReport};
