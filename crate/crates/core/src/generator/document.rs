//! Versioned JSON instance documents.
//!
//! Every float is written twice: as the shortest decimal that round-trips and
//! as a hexadecimal float. On load the hex field, when present, is
//! authoritative and must agree with the decimal. Matrices are row-major.

use std::path::Path;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::config::GeneratorConfig;
use super::hexfloat::{from_hex, to_hex};
use crate::constraint::{
    Constraint, ConstraintKind, ConstraintSet, ConvexConstraint, LinearConstraint, MultipeakConstraint,
    QuadraticConstraint,
};
use crate::error::{CobiError, Result};
use crate::linalg::SpdMatrix;
use crate::objective::{MultipeakObjective, QuadraticPeak};
use crate::problem::{CobiProblem, ProblemMeta, SearchBox};
use crate::transform::{MonotoneTransform, SignPreservingTransform};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Real {
    pub value: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hex: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealVec {
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hex: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RealMatrix {
    pub rows: usize,
    pub cols: usize,
    /// Row-major.
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hex: Option<Vec<String>>,
}

fn decode(field: &str, value: f64, hex: Option<&String>) -> Result<f64> {
    let Some(h) = hex else {
        if !value.is_finite() {
            return Err(CobiError::validation(field, "not a finite number"));
        }
        return Ok(value);
    };
    let exact = from_hex(h).ok_or_else(|| CobiError::validation(field, format!("`{h}` is not a hex float")))?;
    if exact.to_bits() != value.to_bits() && !(exact == 0.0 && value == 0.0) {
        return Err(CobiError::validation(field, format!("decimal {value:e} disagrees with hex {h}")));
    }
    if !exact.is_finite() {
        return Err(CobiError::validation(field, "not a finite number"));
    }
    Ok(exact)
}

fn decode_all(field: &str, values: &[f64], hex: Option<&Vec<String>>) -> Result<Vec<f64>> {
    if let Some(h) = hex {
        if h.len() != values.len() {
            return Err(CobiError::validation(field, format!("{} hex entries for {} values", h.len(), values.len())));
        }
    }
    values
        .iter()
        .enumerate()
        .map(|(i, &v)| decode(&format!("{field}[{i}]"), v, hex.map(|h| &h[i])))
        .collect()
}

impl Real {
    pub fn new(v: f64) -> Self {
        Real { value: v, hex: Some(to_hex(v)) }
    }

    pub fn decode(&self, field: &str) -> Result<f64> {
        decode(field, self.value, self.hex.as_ref())
    }
}

impl RealVec {
    pub fn new(v: &[f64]) -> Self {
        RealVec { values: v.to_vec(), hex: Some(v.iter().map(|&x| to_hex(x)).collect()) }
    }

    pub fn decode(&self, field: &str) -> Result<Vec<f64>> {
        decode_all(field, &self.values, self.hex.as_ref())
    }

    fn decode_dim(&self, field: &str, n: usize) -> Result<DVector<f64>> {
        let v = self.decode(field)?;
        if v.len() != n {
            return Err(CobiError::validation(field, format!("expected {n} entries, found {}", v.len())));
        }
        Ok(DVector::from_vec(v))
    }
}

impl RealMatrix {
    pub fn new(m: &DMatrix<f64>) -> Self {
        let values: Vec<f64> = (0..m.nrows()).flat_map(|i| (0..m.ncols()).map(move |j| m[(i, j)])).collect();
        RealMatrix { rows: m.nrows(), cols: m.ncols(), hex: Some(values.iter().map(|&x| to_hex(x)).collect()), values }
    }

    pub fn decode(&self, field: &str) -> Result<DMatrix<f64>> {
        if self.values.len() != self.rows * self.cols {
            return Err(CobiError::validation(field, format!("{}x{} matrix with {} values", self.rows, self.cols, self.values.len())));
        }
        let v = decode_all(field, &self.values, self.hex.as_ref())?;
        Ok(DMatrix::from_row_slice(self.rows, self.cols, &v))
    }

    fn decode_spd(&self, field: &str, n: usize) -> Result<SpdMatrix> {
        if self.rows != n || self.cols != n {
            return Err(CobiError::validation(field, format!("expected {n}x{n}, found {}x{}", self.rows, self.cols)));
        }
        SpdMatrix::new(self.decode(field)?).map_err(|e| CobiError::validation(field, e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PeakDoc {
    pub center: RealVec,
    pub hessian: RealMatrix,
    pub offset: Real,
    #[serde(default)]
    pub inner: MonotoneTransform,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveDoc {
    #[serde(default)]
    pub outer: MonotoneTransform,
    pub peaks: Vec<PeakDoc>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConstraintBody {
    /// `normalᵀ x + intercept <= 0`.
    Linear { normal: RealVec, intercept: Real },
    /// `½ (x − center)ᵀ hessian (x − center) − level <= 0`.
    Quadratic { center: RealVec, hessian: RealMatrix, level: Real },
    Multipeak { parts: Vec<ConstraintDoc> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstraintDoc {
    #[serde(default)]
    pub transform: SignPreservingTransform,
    #[serde(flatten)]
    pub body: ConstraintBody,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoxDoc {
    pub lower: RealVec,
    pub upper: RealVec,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InstanceDocument {
    pub schema_version: u32,
    pub id: String,
    #[serde(default)]
    pub name: String,
    #[serde(default)]
    pub seed: Option<u64>,
    #[serde(default)]
    pub config: Option<GeneratorConfig>,
    pub dimension: usize,
    pub objectives: Vec<ObjectiveDoc>,
    #[serde(default)]
    pub constraints: Vec<ConstraintDoc>,
    pub anchor: RealVec,
    pub search_box: BoxDoc,
}

fn convex_doc(c: &ConvexConstraint) -> ConstraintBody {
    match c {
        ConvexConstraint::Linear(l) => ConstraintBody::Linear {
            normal: RealVec::new(l.normal().as_slice()),
            intercept: Real::new(l.intercept()),
        },
        ConvexConstraint::Quadratic(q) => ConstraintBody::Quadratic {
            center: RealVec::new(q.center().as_slice()),
            hessian: RealMatrix::new(q.hessian().matrix()),
            level: Real::new(q.level()),
        },
    }
}

fn convex_from_doc(body: &ConstraintBody, field: &str, n: usize) -> Result<ConvexConstraint> {
    let wrap = |e: CobiError| match e {
        CobiError::Validation { .. } => e,
        other => CobiError::validation(field, other.to_string()),
    };
    match body {
        ConstraintBody::Linear { normal, intercept } => {
            let a = normal.decode_dim(&format!("{field}.normal"), n)?;
            let b = intercept.decode(&format!("{field}.intercept"))?;
            Ok(LinearConstraint::new(a, b).map_err(wrap)?.into())
        }
        ConstraintBody::Quadratic { center, hessian, level } => {
            let c = center.decode_dim(&format!("{field}.center"), n)?;
            let h = hessian.decode_spd(&format!("{field}.hessian"), n)?;
            let d = level.decode(&format!("{field}.level"))?;
            Ok(QuadraticConstraint::new(c, h, d).map_err(wrap)?.into())
        }
        ConstraintBody::Multipeak { .. } => Err(CobiError::validation(field, "multipeak parts must be linear or quadratic")),
    }
}

impl InstanceDocument {
    pub fn from_problem(prob: &CobiProblem) -> Self {
        let objectives = prob
            .objectives()
            .iter()
            .map(|o| ObjectiveDoc {
                outer: o.outer_transform(),
                peaks: o
                    .peaks()
                    .iter()
                    .map(|p| PeakDoc {
                        center: RealVec::new(p.center().as_slice()),
                        hessian: RealMatrix::new(p.hessian().matrix()),
                        offset: Real::new(p.offset()),
                        inner: p.inner_transform(),
                    })
                    .collect(),
            })
            .collect();
        let constraints = prob
            .constraints()
            .constraints()
            .iter()
            .map(|c| ConstraintDoc {
                transform: c.transform,
                body: match &c.kind {
                    ConstraintKind::Convex(cc) => convex_doc(cc),
                    ConstraintKind::Multipeak(m) => ConstraintBody::Multipeak {
                        parts: m.parts().iter().map(|(p, t)| ConstraintDoc { transform: *t, body: convex_doc(p) }).collect(),
                    },
                },
            })
            .collect();
        InstanceDocument {
            schema_version: SCHEMA_VERSION,
            id: prob.meta.id.clone(),
            name: prob.meta.name.clone(),
            seed: prob.meta.seed,
            config: None,
            dimension: prob.dim(),
            objectives,
            constraints,
            anchor: RealVec::new(prob.anchor().as_slice()),
            search_box: BoxDoc {
                lower: RealVec::new(&prob.search_box().lower),
                upper: RealVec::new(&prob.search_box().upper),
            },
        }
    }

    pub fn with_config(mut self, config: GeneratorConfig) -> Self {
        self.config = Some(config);
        self
    }

    /// Rebuilds the problem, re-validating every invariant.
    pub fn to_problem(&self) -> Result<CobiProblem> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(CobiError::Schema { found: self.schema_version, supported: SCHEMA_VERSION });
        }
        let n = self.dimension;
        if n < 1 {
            return Err(CobiError::validation("dimension", "must be positive"));
        }
        if self.objectives.len() != 2 {
            return Err(CobiError::validation("objectives", format!("expected 2, found {}", self.objectives.len())));
        }
        let mut objectives = Vec::with_capacity(2);
        for (i, o) in self.objectives.iter().enumerate() {
            let mut peaks = Vec::with_capacity(o.peaks.len());
            for (k, p) in o.peaks.iter().enumerate() {
                let field = format!("objectives[{i}].peaks[{k}]");
                let c = p.center.decode_dim(&format!("{field}.center"), n)?;
                let h = p.hessian.decode_spd(&format!("{field}.hessian"), n)?;
                let v = p.offset.decode(&format!("{field}.offset"))?;
                let peak = QuadraticPeak::new(c, h, v, p.inner).map_err(|e| CobiError::validation(&field, e.to_string()))?;
                peaks.push(peak);
            }
            let obj = MultipeakObjective::new(peaks, o.outer)
                .map_err(|e| CobiError::validation(&format!("objectives[{i}]"), e.to_string()))?;
            objectives.push(obj);
        }
        let mut constraints = Vec::with_capacity(self.constraints.len());
        for (k, c) in self.constraints.iter().enumerate() {
            let field = format!("constraints[{k}]");
            let kind = match &c.body {
                ConstraintBody::Multipeak { parts } => {
                    let parts = parts
                        .iter()
                        .enumerate()
                        .map(|(u, p)| Ok((convex_from_doc(&p.body, &format!("{field}.parts[{u}]"), n)?, p.transform)))
                        .collect::<Result<Vec<_>>>()?;
                    ConstraintKind::Multipeak(
                        MultipeakConstraint::new(parts).map_err(|e| CobiError::validation(&field, e.to_string()))?,
                    )
                }
                body => ConstraintKind::Convex(convex_from_doc(body, &field, n)?),
            };
            constraints.push(Constraint::new(kind, c.transform).map_err(|e| CobiError::validation(&field, e.to_string()))?);
        }
        let constraints = ConstraintSet::new(n, constraints)?;
        let anchor = self.anchor.decode_dim("anchor", n)?;
        let lower = self.search_box.lower.decode_dim("search_box.lower", n)?;
        let upper = self.search_box.upper.decode_dim("search_box.upper", n)?;
        let search_box = SearchBox::new(lower.iter().copied().collect(), upper.iter().copied().collect())
            .map_err(|e| CobiError::validation("search_box", e.to_string()))?;
        let objectives: [MultipeakObjective; 2] = objectives.try_into().expect("checked length");
        let meta = ProblemMeta { id: self.id.clone(), name: self.name.clone(), seed: self.seed };
        CobiProblem::new(objectives, constraints, anchor, search_box, meta)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let raw: serde_json::Value = serde_json::from_str(text)?;
        match raw.get("schema_version").and_then(|v| v.as_u64()) {
            Some(v) if v == SCHEMA_VERSION as u64 => {}
            Some(v) => return Err(CobiError::Schema { found: v.min(u32::MAX as u64) as u32, supported: SCHEMA_VERSION }),
            None => return Err(CobiError::validation("schema_version", "missing or not an integer")),
        }
        Ok(serde_json::from_value(raw)?)
    }
}

pub fn save(prob: &CobiProblem) -> InstanceDocument {
    InstanceDocument::from_problem(prob)
}

pub fn load(doc: &InstanceDocument) -> Result<CobiProblem> {
    doc.to_problem()
}

pub fn save_file(path: &Path, doc: &InstanceDocument) -> Result<()> {
    std::fs::write(path, doc.to_json())?;
    Ok(())
}

pub fn load_file(path: &Path) -> Result<(InstanceDocument, CobiProblem)> {
    let text = std::fs::read_to_string(path)?;
    let doc = InstanceDocument::from_json(&text)?;
    let prob = doc.to_problem()?;
    Ok((doc, prob))
}
