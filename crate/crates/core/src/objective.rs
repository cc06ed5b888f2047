//! Convex-quadratic peaks and multipeak objectives.

use nalgebra::DVector;

use crate::error::{check_dim, CobiError, Result};
use crate::linalg::{Point, SpdMatrix};
use crate::transform::MonotoneTransform;

const MIN_CENTER_DISTANCE: f64 = 1e-9;

/// `Υ(½ (x − c)ᵀ H (x − c)) + v`.
///
/// The inner transform wraps the quadratic form only; the offset is added
/// afterwards, so the minimum value of a peak is always its offset.
#[derive(Clone, Debug)]
pub struct QuadraticPeak {
    center: Point,
    hessian: SpdMatrix,
    offset: f64,
    inner: MonotoneTransform,
}

impl QuadraticPeak {
    pub fn new(center: Point, hessian: SpdMatrix, offset: f64, inner: MonotoneTransform) -> Result<Self> {
        check_dim(hessian.dim(), center.len())?;
        if center.iter().any(|v| !v.is_finite()) {
            return Err(CobiError::NonFinite("peak center".into()));
        }
        if !offset.is_finite() {
            return Err(CobiError::NonFinite("peak offset".into()));
        }
        inner.validate()?;
        Ok(QuadraticPeak { center, hessian, offset, inner })
    }

    /// Plain convex quadratic with no transform.
    pub fn quadratic(center: Point, hessian: SpdMatrix, offset: f64) -> Result<Self> {
        Self::new(center, hessian, offset, MonotoneTransform::Identity)
    }

    /// `½ |x − c|²`.
    pub fn sphere(center: &[f64]) -> Self {
        let c = DVector::from_column_slice(center);
        let n = c.len();
        Self::quadratic(c, SpdMatrix::identity(n), 0.0).expect("valid sphere")
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &Point {
        &self.center
    }

    pub fn hessian(&self) -> &SpdMatrix {
        &self.hessian
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn inner_transform(&self) -> MonotoneTransform {
        self.inner
    }

    pub fn with_inner_transform(mut self, inner: MonotoneTransform) -> Result<Self> {
        inner.validate()?;
        self.inner = inner;
        Ok(self)
    }

    /// `½ (x − c)ᵀ H (x − c)`, without offset.
    pub fn quadratic_form(&self, x: &Point) -> f64 {
        0.5 * self.hessian.quad_form(&(x - &self.center))
    }

    /// Untransformed value `½ (x − c)ᵀ H (x − c) + v`.
    pub fn raw_value(&self, x: &Point) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(self.quadratic_form(x) + self.offset)
    }

    /// `Υ(½ (x − c)ᵀ H (x − c)) + v`.
    pub fn value(&self, x: &Point) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(self.inner.apply(self.quadratic_form(x), "peak inner transform")? + self.offset)
    }

    /// Gradient of the raw value, `H (x − c)`.
    pub fn gradient(&self, x: &Point) -> Point {
        self.hessian.mul_vec(&(x - &self.center))
    }
}

/// `Φ(min_i peak_i(x))`.
#[derive(Clone, Debug)]
pub struct MultipeakObjective {
    peaks: Vec<QuadraticPeak>,
    outer: MonotoneTransform,
}

impl MultipeakObjective {
    pub fn new(peaks: Vec<QuadraticPeak>, outer: MonotoneTransform) -> Result<Self> {
        let Some(first) = peaks.first() else {
            return Err(CobiError::InvalidArgument("objective needs at least one peak".into()));
        };
        let n = first.dim();
        for p in &peaks {
            check_dim(n, p.dim())?;
        }
        for i in 0..peaks.len() {
            for j in (i + 1)..peaks.len() {
                let d = (peaks[i].center() - peaks[j].center()).norm();
                if d <= MIN_CENTER_DISTANCE {
                    return Err(CobiError::InvalidArgument(format!(
                        "peak centers {i} and {j} coincide (distance {d:e})"
                    )));
                }
            }
        }
        outer.validate()?;
        Ok(MultipeakObjective { peaks, outer })
    }

    pub fn single(peak: QuadraticPeak) -> Self {
        MultipeakObjective { peaks: vec![peak], outer: MonotoneTransform::Identity }
    }

    pub fn dim(&self) -> usize {
        self.peaks[0].dim()
    }

    pub fn peaks(&self) -> &[QuadraticPeak] {
        &self.peaks
    }

    pub fn outer_transform(&self) -> MonotoneTransform {
        self.outer
    }

    pub fn with_outer_transform(mut self, outer: MonotoneTransform) -> Result<Self> {
        outer.validate()?;
        self.outer = outer;
        Ok(self)
    }

    /// True when some peak carries a non-identity inner transform.
    pub fn has_inner_transforms(&self) -> bool {
        self.peaks.iter().any(|p| !p.inner_transform().is_identity())
    }

    /// With transforms: `Φ(min_i (Υ_i(q_i(x)) + v_i))`. Without: `min_i (q_i(x) + v_i)`.
    pub fn value(&self, x: &Point, apply_transforms: bool) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        if !apply_transforms {
            return Ok(self.raw_min(x).1);
        }
        let (active, inner_min) = self.ranking_min(x)?;
        self.outer
            .apply(inner_min, &format!("outer transform (active peak {active})"))
    }

    /// `min_i (Υ_i(q_i(x)) + v_i)`: the objective up to its outer transform.
    ///
    /// Orders points exactly like the fully transformed objective and is the
    /// value used to filter candidate Pareto points. It equals the raw value
    /// whenever every inner transform is the identity.
    pub fn ranking_value(&self, x: &Point) -> Result<f64> {
        check_dim(self.dim(), x.len())?;
        Ok(self.ranking_min(x)?.1)
    }

    /// Index of the peak with the smallest raw value; ties go to the lowest index.
    pub fn active_peak(&self, x: &Point) -> Result<usize> {
        check_dim(self.dim(), x.len())?;
        Ok(self.raw_min(x).0)
    }

    fn raw_min(&self, x: &Point) -> (usize, f64) {
        let mut best = (0, f64::INFINITY);
        for (i, p) in self.peaks.iter().enumerate() {
            let v = p.quadratic_form(x) + p.offset();
            if v < best.1 {
                best = (i, v);
            }
        }
        best
    }

    fn ranking_min(&self, x: &Point) -> Result<(usize, f64)> {
        if !self.has_inner_transforms() {
            return Ok(self.raw_min(x));
        }
        let mut best = (0, f64::INFINITY);
        for (i, p) in self.peaks.iter().enumerate() {
            let v = p
                .inner_transform()
                .apply(p.quadratic_form(x), &format!("inner transform of peak {i}"))?
                + p.offset();
            if v < best.1 {
                best = (i, v);
            }
        }
        Ok(best)
    }

    /// A radius `r` such that every `x` with `|x| >= r` has a raw value above
    /// the raw value at every peak center.
    pub fn coercivity_radius(&self) -> f64 {
        let centers: Vec<&Point> = self.peaks.iter().map(|p| p.center()).collect();
        let top = centers
            .iter()
            .map(|c| self.raw_min(c).1)
            .fold(f64::NEG_INFINITY, f64::max);
        // q_i(x) >= ½ λ_min,i (|x| − |c_i|)², so each peak exceeds `top` beyond this radius.
        self.peaks
            .iter()
            .map(|p| {
                let lmin = p.hessian().eigenvalues().min();
                let slack = (top - p.offset()).max(0.0);
                p.center().norm() + (2.0 * slack / lmin).sqrt() + 1.0
            })
            .fold(0.0, f64::max)
    }
}
