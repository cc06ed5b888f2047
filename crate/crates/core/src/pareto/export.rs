use std::fmt::Write as _;
use std::path::Path;

use serde::Serialize;

use super::approx::{ParetoApproximation, SubproblemReport};
use crate::archive::BiArchive;
use crate::dominance::ObjectivePair;
use crate::error::{CobiError, Result};

/// Reference set as CSV: `x1,…,xn,f1,f2`, 17 significant digits, rows in
/// increasing `f1`.
pub fn reference_csv(archive: &BiArchive, dim: usize) -> String {
    let mut out = String::new();
    let header: Vec<String> = (1..=dim).map(|i| format!("x{i}")).chain(["f1".into(), "f2".into()]).collect();
    out.push_str(&header.join(","));
    out.push('\n');
    for e in archive.entries() {
        let mut first = true;
        let mut field = |out: &mut String, v: f64| {
            if !first {
                out.push(',');
            }
            first = false;
            let _ = write!(out, "{v:.16e}");
        };
        match &e.x {
            Some(x) => x.iter().for_each(|&v| field(&mut out, v)),
            None => (0..dim).for_each(|_| field(&mut out, f64::NAN)),
        }
        field(&mut out, e.f.f1);
        field(&mut out, e.f.f2);
        out.push('\n');
    }
    out
}

pub fn write_reference_csv(path: &Path, archive: &BiArchive, dim: usize) -> Result<()> {
    std::fs::write(path, reference_csv(archive, dim))?;
    Ok(())
}

/// Reads the `f1,f2` columns of any CSV with a header naming them.
pub fn read_reference_csv(text: &str) -> Result<Vec<ObjectivePair>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or_else(|| CobiError::validation("csv", "missing header"))?;
    let cols: Vec<&str> = header.split(',').map(str::trim).collect();
    let find = |name: &str| {
        cols.iter()
            .position(|c| *c == name)
            .ok_or_else(|| CobiError::validation("csv", format!("no `{name}` column in header")))
    };
    let (i1, i2) = (find("f1")?, find("f2")?);
    let mut out = Vec::new();
    for (row, line) in lines.enumerate() {
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != cols.len() {
            return Err(CobiError::validation("csv", format!("row {} has {} fields, expected {}", row + 1, fields.len(), cols.len())));
        }
        let parse = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| CobiError::validation("csv", format!("row {}: `{s}` is not a finite number", row + 1)))
        };
        out.push(ObjectivePair::new(parse(fields[i1])?, parse(fields[i2])?));
    }
    Ok(out)
}

#[derive(Clone, Debug, Serialize)]
pub struct KeyCount {
    pub peak1: usize,
    pub peak2: usize,
    pub selection: usize,
    pub points: usize,
}

/// Machine-readable summary of one approximation run.
#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub instance_id: String,
    pub epsilon: f64,
    pub archive_size: usize,
    pub ideal: ObjectivePair,
    pub nadir: ObjectivePair,
    pub per_key_point_counts: Vec<KeyCount>,
    pub skipped_weights: usize,
    pub degenerate: bool,
    pub empty_selections: usize,
}

impl RunSummary {
    pub fn new(instance_id: &str, approx: &ParetoApproximation) -> Self {
        let count = |s: &SubproblemReport| KeyCount {
            peak1: s.key.peak1,
            peak2: s.key.peak2,
            selection: s.key.selection,
            points: s.points,
        };
        let mut empty: Vec<usize> = approx.subproblems.iter().filter(|s| s.empty).map(|s| s.key.selection).collect();
        empty.sort_unstable();
        empty.dedup();
        RunSummary {
            instance_id: instance_id.to_string(),
            epsilon: approx.epsilon,
            archive_size: approx.archive.len(),
            ideal: approx.ideal,
            nadir: approx.nadir,
            per_key_point_counts: approx.subproblems.iter().map(count).collect(),
            skipped_weights: approx.skipped_weights(),
            degenerate: approx.degenerate,
            empty_selections: empty.len(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("summary serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut a = BiArchive::new();
        a.insert(ObjectivePair::new(0.1, 2.0 / 3.0), Some(nalgebra::DVector::from_vec(vec![1.0 / 3.0, -2.5])));
        a.insert(ObjectivePair::new(1.0, 0.0), Some(nalgebra::DVector::from_vec(vec![0.0, 1e-300])));
        let text = reference_csv(&a, 2);
        assert!(text.starts_with("x1,x2,f1,f2\n"));
        let back = read_reference_csv(&text).unwrap();
        assert_eq!(back, a.objectives());
        assert!(text.contains("6.6666666666666663e-1"));
    }

    #[test]
    fn csv_rejects_garbage() {
        assert!(read_reference_csv("").is_err());
        assert!(read_reference_csv("a,b\n1,2\n").is_err());
        assert!(read_reference_csv("f1,f2\n1,x\n").is_err());
        assert!(read_reference_csv("f1,f2\n1\n").is_err());
    }
}
