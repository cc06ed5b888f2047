use serde::{Deserialize, Serialize};

use crate::error::{CobiError, Result};
use crate::transform::{MonotoneTransform, SignPreservingTransform};

pub const DEFAULT_SUBPROBLEM_BUDGET: usize = 10_000;
pub const ANCHOR_MARGIN: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConvexKind {
    Linear,
    Quadratic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintRecipe {
    Linear,
    Quadratic,
    /// Union of the listed parts.
    Multipeak { parts: Vec<ConvexKind> },
    /// `lower <= x_i <= upper` for every coordinate, as `2n` linear constraints.
    Box { lower: f64, upper: f64 },
}

impl ConstraintRecipe {
    pub fn parse_list(s: &str) -> Result<Vec<ConstraintRecipe>> {
        let mut out = Vec::new();
        for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
            let recipe = match item {
                "linear" | "l" => ConstraintRecipe::Linear,
                "quadratic" | "q" => ConstraintRecipe::Quadratic,
                "none" => continue,
                other => {
                    if let Some(parts) = other.strip_prefix("multipeak:") {
                        let parts = parts
                            .chars()
                            .map(|c| match c {
                                'l' => Ok(ConvexKind::Linear),
                                'q' => Ok(ConvexKind::Quadratic),
                                _ => Err(CobiError::Config(format!("unknown multipeak part `{c}` (use l or q)"))),
                            })
                            .collect::<Result<Vec<_>>>()?;
                        ConstraintRecipe::Multipeak { parts }
                    } else {
                        return Err(CobiError::Config(format!(
                            "unknown constraint `{other}` (linear, quadratic, multipeak:<l|q>...)"
                        )));
                    }
                }
            };
            out.push(recipe);
        }
        Ok(out)
    }

    fn member_count(&self, n: usize) -> usize {
        match self {
            ConstraintRecipe::Box { .. } => 2 * n,
            _ => 1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum FeasibilityMode {
    #[default]
    Anchor,
    None,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize, Default)]
pub struct TransformRecipe {
    /// Outer transform of `f1` and `f2`.
    #[serde(default)]
    pub objectives: [MonotoneTransform; 2],
    /// Applied to every constraint.
    #[serde(default)]
    pub constraints: SignPreservingTransform,
}

fn default_peaks() -> (usize, usize) {
    (1, 1)
}
fn default_kappa() -> (f64, f64) {
    (1.0, 1.0)
}
fn default_center_box() -> (f64, f64) {
    (-1.0, 1.0)
}
fn default_budget() -> usize {
    DEFAULT_SUBPROBLEM_BUDGET
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeneratorConfig {
    pub dimension: usize,
    #[serde(default = "default_peaks")]
    pub peaks: (usize, usize),
    #[serde(default)]
    pub constraints: Vec<ConstraintRecipe>,
    /// Condition numbers are drawn log-uniformly from this range.
    #[serde(default = "default_kappa")]
    pub kappa: (f64, f64),
    /// Every coordinate of a center is drawn uniformly from this interval.
    #[serde(default = "default_center_box")]
    pub center_box: (f64, f64),
    #[serde(default)]
    pub offsets: (f64, f64),
    #[serde(default)]
    pub transforms: TransformRecipe,
    #[serde(default)]
    pub feasibility: FeasibilityMode,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_budget")]
    pub subproblem_budget: usize,
}

impl GeneratorConfig {
    pub fn new(dimension: usize, seed: u64) -> Self {
        GeneratorConfig {
            dimension,
            peaks: default_peaks(),
            constraints: Vec::new(),
            kappa: default_kappa(),
            center_box: default_center_box(),
            offsets: (0.0, 0.0),
            transforms: TransformRecipe::default(),
            feasibility: FeasibilityMode::Anchor,
            seed,
            subproblem_budget: DEFAULT_SUBPROBLEM_BUDGET,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(CobiError::Config(m));
        if self.dimension < 2 {
            return bad(format!("dimension must be at least 2, got {}", self.dimension));
        }
        if self.peaks.0 == 0 || self.peaks.1 == 0 {
            return bad("each objective needs at least one peak".into());
        }
        let (k0, k1) = self.kappa;
        if !(k0 >= 1.0 && k1 >= k0 && k1 <= 1e6) {
            return bad(format!("condition number range must satisfy 1 <= min <= max <= 1e6, got [{k0}, {k1}]"));
        }
        let (c0, c1) = self.center_box;
        if !(c0.is_finite() && c1.is_finite() && c0 < c1) {
            return bad(format!("center box [{c0}, {c1}] is degenerate"));
        }
        let (v0, v1) = self.offsets;
        if !(v0 >= 0.0 && v1 >= v0 && v1.is_finite()) {
            return bad(format!("offset range must satisfy 0 <= min <= max, got [{v0}, {v1}]"));
        }
        for r in &self.constraints {
            match r {
                ConstraintRecipe::Multipeak { parts } if parts.is_empty() => {
                    return bad("multipeak constraint needs at least one part".into())
                }
                ConstraintRecipe::Box { lower, upper } if !(lower < upper) => {
                    return bad(format!("box constraint [{lower}, {upper}] is degenerate"))
                }
                _ => {}
            }
        }
        self.transforms.objectives[0].validate()?;
        self.transforms.objectives[1].validate()?;
        self.transforms.constraints.validate()?;
        let selections = self.constraints.iter().try_fold(1usize, |acc, r| match r {
            ConstraintRecipe::Multipeak { parts } => acc.checked_mul(parts.len()),
            _ => Some(acc),
        });
        let subproblems = selections.and_then(|s| s.checked_mul(self.peaks.0)).and_then(|s| s.checked_mul(self.peaks.1));
        match subproblems {
            Some(s) if s <= self.subproblem_budget => {}
            _ => {
                return bad(format!(
                    "peaks x selections exceeds the subproblem budget of {}",
                    self.subproblem_budget
                ))
            }
        }
        Ok(())
    }

    /// Number of constraints after expanding box shorthands.
    pub fn constraint_count(&self) -> usize {
        self.constraints.iter().map(|r| r.member_count(self.dimension)).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        assert!(GeneratorConfig::new(2, 0).validate().is_ok());
        assert!(GeneratorConfig::new(1, 0).validate().is_err());
        let mut c = GeneratorConfig::new(2, 0);
        c.kappa = (0.5, 2.0);
        assert!(c.validate().is_err());
        let mut c = GeneratorConfig::new(2, 0);
        c.peaks = (100, 100);
        c.constraints = vec![ConstraintRecipe::Multipeak { parts: vec![ConvexKind::Linear; 2] }];
        assert!(matches!(c.validate(), Err(CobiError::Config(_))));
    }

    #[test]
    fn recipe_list() {
        let r = ConstraintRecipe::parse_list("linear, q,multipeak:lq").unwrap();
        assert_eq!(r.len(), 3);
        assert_eq!(r[2], ConstraintRecipe::Multipeak { parts: vec![ConvexKind::Linear, ConvexKind::Quadratic] });
        assert!(ConstraintRecipe::parse_list("cubic").is_err());
        assert!(ConstraintRecipe::parse_list("none").unwrap().is_empty());
    }

    #[test]
    fn json_defaults() {
        let c: GeneratorConfig = serde_json::from_str(r#"{"dimension": 3, "constraints": [{"kind": "linear"}]}"#).unwrap();
        assert_eq!(c.peaks, (1, 1));
        assert_eq!(c.constraints, vec![ConstraintRecipe::Linear]);
        assert!(serde_json::from_str::<GeneratorConfig>(r#"{"dimension": 3, "bogus": 1}"#).is_err());
    }
}
