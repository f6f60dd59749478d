//! Instance validation gates for the two objectives.

use std::fmt;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry::Instance;
use crate::pairing::Objective;

/// A single reason an instance was rejected. Indices are 0-based.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Issue {
    /// `cameras[index]` is not strictly greater than `cameras[index - 1]`.
    CameraOrder { index: usize },
    /// Target lies on the camera line.
    TargetOnLine { target: usize },
    /// Target lies below the camera line (instance was not projected).
    TargetBelowLine { target: usize },
    /// Target lies inside or on the circle with diameter `[c_1, c_2n]`.
    InsideThalesCircle { target: usize },
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Issue::CameraOrder { index } => write!(f, "camera {index} does not increase strictly"),
            Issue::TargetOnLine { target } => write!(f, "target {target} lies on the camera line"),
            Issue::TargetBelowLine { target } => write!(f, "target {target} lies below the camera line"),
            Issue::InsideThalesCircle { target } => {
                write!(f, "target {target} is not strictly outside the camera-span circle")
            }
        }
    }
}

/// Outcome of a validation gate.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub issues: Vec<Issue>,
}

impl Verdict {
    pub fn is_accept(&self) -> bool {
        self.issues.is_empty()
    }

    /// Targets named by any issue, deduplicated and ascending.
    pub fn offending_targets(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .issues
            .iter()
            .filter_map(|issue| match issue {
                Issue::TargetOnLine { target }
                | Issue::TargetBelowLine { target }
                | Issue::InsideThalesCircle { target } => Some(*target),
                Issue::CameraOrder { .. } => None,
            })
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_accept() {
            return f.write_str("accept");
        }
        f.write_str("reject: ")?;
        for (k, issue) in self.issues.iter().enumerate() {
            if k > 0 {
                f.write_str("; ")?;
            }
            write!(f, "{issue}")?;
        }
        Ok(())
    }
}

fn camera_issues(instance: &Instance) -> Vec<Issue> {
    instance
        .cameras()
        .windows(2)
        .enumerate()
        .filter(|(_, w)| w[1] <= w[0])
        .map(|(k, _)| Issue::CameraOrder { index: k + 1 })
        .collect()
}

/// Gate for the angle objective.
///
/// Every target must lie strictly above the line and strictly outside the
/// circle with diameter `[c_1, c_2n]`. That circle contains the Thales circle
/// of every camera pair, so accepted instances have all tracking angles
/// below 90 degrees. Points on the circle are rejected.
pub fn validate_for_angles(instance: &Instance) -> Verdict {
    let mut issues = camera_issues(instance);
    let cams = instance.cameras();
    let lo = cams.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = cams.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let center = 0.5 * (lo + hi);
    let radius = 0.5 * (hi - lo);
    for (k, t) in instance.targets().iter().enumerate() {
        if t.y == 0.0 {
            issues.push(Issue::TargetOnLine { target: k });
        } else if t.y < 0.0 {
            issues.push(Issue::TargetBelowLine { target: k });
        }
        let dx = t.x - center;
        if dx * dx + t.y * t.y <= radius * radius {
            issues.push(Issue::InsideThalesCircle { target: k });
        }
    }
    Verdict { issues }
}

/// Gate for the ratio objective: ordered cameras and non-negative depths.
pub fn validate_for_ratios(instance: &Instance) -> Verdict {
    let mut issues = camera_issues(instance);
    for (k, t) in instance.targets().iter().enumerate() {
        if t.y < 0.0 {
            issues.push(Issue::TargetBelowLine { target: k });
        }
    }
    Verdict { issues }
}

/// Runs the gate for `objective` and turns a rejection into an error.
pub fn require_valid(instance: &Instance, objective: Objective) -> Result<()> {
    let verdict = match objective {
        Objective::SumAngles => validate_for_angles(instance),
        Objective::SumRatios => validate_for_ratios(instance),
    };
    if verdict.is_accept() {
        Ok(())
    } else {
        Err(Error::InvalidInstance(verdict))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::Point;

    fn inst(cams: &[f64], targets: &[(f64, f64)]) -> Instance {
        Instance::new(cams.to_vec(), targets.iter().map(|&(x, y)| Point::new(x, y)).collect()).unwrap()
    }

    #[test]
    fn far_target_accepted() {
        let i = inst(&[-1.0, 0.0, 1.0, 2.0], &[(0.5, 10.0), (0.5, 10.0)]);
        assert!(validate_for_angles(&i).is_accept());
    }

    #[test]
    fn near_target_rejected() {
        let i = inst(&[-1.0, 0.0, 1.0, 2.0], &[(0.5, 10.0), (0.5, 1.0)]);
        let v = validate_for_angles(&i);
        assert!(!v.is_accept());
        assert_eq!(v.offending_targets(), vec![1]);
    }

    #[test]
    fn boundary_target_rejected() {
        let i = inst(&[-1.0, 0.0, 1.0, 2.0], &[(0.5, 1.5), (0.5, 10.0)]);
        assert_eq!(validate_for_angles(&i).offending_targets(), vec![0]);
    }

    #[test]
    fn zero_depth_target() {
        let i = inst(&[-1.0, 0.0, 1.0, 2.0], &[(1.0, 0.0), (0.5, 10.0)]);
        assert!(!validate_for_angles(&i).is_accept());
        assert!(validate_for_ratios(&i).is_accept());
    }

    #[test]
    fn duplicate_camera_rejected() {
        let i = inst(&[0.0, 0.0, 1.0, 2.0], &[(0.5, 10.0), (0.5, 10.0)]);
        let v = validate_for_ratios(&i);
        assert_eq!(v.issues, vec![Issue::CameraOrder { index: 1 }]);
        assert!(!validate_for_angles(&i).is_accept());
    }

    #[test]
    fn angle_valid_implies_ratio_valid() {
        let i = inst(&[-1.0, 0.0, 1.0, 2.0], &[(0.5, 10.0), (3.0, 20.0)]);
        assert!(validate_for_angles(&i).is_accept());
        assert!(validate_for_ratios(&i).is_accept());
    }
}
