//! JSON instance and report files.
//!
//! Report indices are 1-based; everything in memory is 0-based. The
//! `payload` section of a report is deterministic for a given instance and
//! set of flags, while `timing` holds the wall-clock measurement.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{project_targets, Instance, Point};
use crate::pairing::{Assignment, Objective};
use crate::report::{Algorithm, Limits, SolveReport};

pub const FORMAT_VERSION: u32 = 1;

/// Parameters that produced a generated instance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorMeta {
    pub n: usize,
    pub seed: u64,
    pub profile: String,
    pub margin: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub version: u32,
    pub cameras: Vec<f64>,
    pub targets: Vec<Point>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<GeneratorMeta>,
}

impl InstanceFile {
    pub fn from_instance(instance: &Instance, generator: Option<GeneratorMeta>) -> Self {
        Self {
            version: FORMAT_VERSION,
            cameras: instance.cameras().to_vec(),
            targets: instance.targets().to_vec(),
            generator,
        }
    }

    /// Sorts the cameras, reflects targets below the line, and rejects odd
    /// or duplicate cameras.
    pub fn to_instance(&self) -> Result<Instance> {
        if self.version != FORMAT_VERSION {
            return Err(Error::MalformedInstance(format!("unsupported version {}", self.version)));
        }
        if !self.cameras.len().is_multiple_of(2) {
            return Err(Error::MalformedInstance(format!("odd camera count {}", self.cameras.len())));
        }
        let mut cameras = self.cameras.clone();
        if cameras.iter().any(|c| !c.is_finite()) {
            return Err(Error::MalformedInstance("coordinates must be finite".into()));
        }
        cameras.sort_by(f64::total_cmp);
        if let Some(w) = cameras.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::MalformedInstance(format!("duplicate camera at {}", w[0])));
        }
        Ok(project_targets(&Instance::new(cameras, self.targets.clone())?))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedInstance(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&read_text(path)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        write_text(path, &(self.to_json() + "\n"))
    }
}

pub fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

pub fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportCounters {
    pub candidates: u64,
    pub recursion_depth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportConfig {
    pub n: usize,
    pub max_candidates: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

/// Deterministic part of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportPayload {
    pub algorithm: Algorithm,
    pub objective: Objective,
    pub epsilon: Option<f64>,
    pub value: f64,
    /// `[left camera, right camera, target]`, 1-based.
    pub pairs: Vec<[usize; 3]>,
    pub certified: bool,
    pub budget_exceeded: bool,
    pub counters: ReportCounters,
    pub config: ReportConfig,
}

impl ReportPayload {
    /// Rebuilds the assignment against `instance`, recomputing its value.
    pub fn decode(&self, instance: &Instance) -> Result<Assignment> {
        let triples = self
            .pairs
            .iter()
            .map(|&[a, b, t]| {
                if a == 0 || b == 0 || t == 0 {
                    Err(Error::InvalidPairing("report indices are 1-based".into()))
                } else {
                    Ok((a - 1, b - 1, t - 1))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Assignment::from_triples(&triples, self.objective, instance)
    }

    /// Canonical bytes compared by determinism checks.
    pub fn canonical_bytes(&self) -> Vec<u8> {
        serde_json::to_vec(self).expect("payloads always serialize")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReportTiming {
    pub wall_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportFile {
    pub version: u32,
    pub payload: ReportPayload,
    pub timing: ReportTiming,
}

impl ReportFile {
    pub fn new(report: &SolveReport, n: usize, limits: Limits, seed: Option<u64>) -> Self {
        let pairs = report
            .assignment
            .triples()
            .into_iter()
            .map(|(a, b, t)| [a + 1, b + 1, t + 1])
            .collect();
        Self {
            version: FORMAT_VERSION,
            payload: ReportPayload {
                algorithm: report.algorithm,
                objective: report.objective,
                epsilon: report.epsilon,
                value: report.value(),
                pairs,
                certified: report.certified,
                budget_exceeded: report.budget_exceeded,
                counters: ReportCounters {
                    candidates: report.counters.candidates,
                    recursion_depth: report.counters.recursion_depth,
                },
                config: ReportConfig { n, max_candidates: limits.max_candidates, seed },
            },
            timing: ReportTiming { wall_ms: report.counters.wall_ms },
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::MalformedInstance(format!("report: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::heuristics::best_heuristic;

    fn file(cameras: Vec<f64>, targets: Vec<[f64; 2]>) -> InstanceFile {
        InstanceFile {
            version: 1,
            cameras,
            targets: targets.into_iter().map(Point::from).collect(),
            generator: None,
        }
    }

    #[test]
    fn parses_and_normalizes() {
        let text = r#"{"version":1,"cameras":[3,0,2,1],"targets":[[1.5,-4],[1.5,8]]}"#;
        let inst = InstanceFile::from_json(text).unwrap().to_instance().unwrap();
        assert_eq!(inst.cameras(), &[0.0, 1.0, 2.0, 3.0]);
        assert_eq!(inst.target(0), Point::new(1.5, 4.0));
    }

    #[test]
    fn rejects_bad_files() {
        assert!(file(vec![0.0, 1.0, 2.0], vec![[0.0, 1.0]]).to_instance().is_err());
        assert!(file(vec![0.0, 1.0, 1.0, 2.0], vec![[0.0, 9.0]; 2]).to_instance().is_err());
        assert!(file(vec![0.0, 1.0], vec![[0.0, 9.0]; 2]).to_instance().is_err());
        let mut v2 = file(vec![0.0, 1.0], vec![[0.0, 9.0]]);
        v2.version = 2;
        assert!(v2.to_instance().is_err());
        assert!(InstanceFile::from_json("{\"version\":1}").is_err());
        assert!(InstanceFile::from_json("not json").is_err());
    }

    #[test]
    fn doubles_round_trip_exactly() {
        let cams = vec![0.1 + 0.2, 1.0 / 3.0, 2.0f64.sqrt(), 1e300, 5e-324, 123456.78901234567, -0.0, 7.0];
        let f = file(cams.clone(), vec![[std::f64::consts::PI, 1e-7]; 4]);
        let back = InstanceFile::from_json(&f.to_json()).unwrap();
        assert_eq!(back.cameras.iter().map(|c| c.to_bits()).collect::<Vec<_>>(),
                   cams.iter().map(|c| c.to_bits()).collect::<Vec<_>>());
        assert_eq!(back.targets, f.targets);
    }

    #[test]
    fn report_round_trip() {
        let inst = file(vec![0.0, 1.0, 2.0, 3.0], vec![[1.5, 4.0], [1.5, 8.0]]).to_instance().unwrap();
        let report = best_heuristic(&inst, Objective::SumRatios).unwrap();
        let f = ReportFile::new(&report, 2, Limits::default(), Some(7));
        let back = ReportFile::from_json(&f.to_json()).unwrap();
        assert_eq!(back, f);
        let decoded = back.payload.decode(&inst).unwrap();
        assert!((decoded.value - back.payload.value).abs() < 1e-9);
        assert_eq!(back.payload.pairs, vec![[1, 3, 1], [2, 4, 2]]);
    }
}
