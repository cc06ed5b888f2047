//! Strictly increasing objective transforms and sign-preserving constraint transforms.

use serde::{Deserialize, Serialize};

use crate::error::{CobiError, Result};

/// Strictly increasing map applied to objective values (or to a peak's quadratic form).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonotoneTransform {
    #[default]
    Identity,
    /// `u^exponent`, defined for `u >= 0`.
    Power { exponent: f64 },
    /// `ln(1 + u / scale)`, defined for `u > -scale`.
    Log1pScale { scale: f64 },
    /// `slope * u + intercept`.
    Affine { slope: f64, intercept: f64 },
}

impl MonotoneTransform {
    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str, v: f64| {
            Err(CobiError::InvalidArgument(format!("{what} must be finite and > 0, got {v}")))
        };
        match *self {
            MonotoneTransform::Identity => Ok(()),
            MonotoneTransform::Power { exponent } if !(exponent > 0.0 && exponent.is_finite()) => {
                bad("power exponent", exponent)
            }
            MonotoneTransform::Log1pScale { scale } if !(scale > 0.0 && scale.is_finite()) => {
                bad("log1p scale", scale)
            }
            MonotoneTransform::Affine { slope, intercept } => {
                if !(slope > 0.0 && slope.is_finite()) {
                    bad("affine slope", slope)
                } else if !intercept.is_finite() {
                    Err(CobiError::NonFinite("affine intercept".into()))
                } else {
                    Ok(())
                }
            }
            _ => Ok(()),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, MonotoneTransform::Identity)
    }

    /// Smallest admissible input and whether it is itself admissible.
    pub fn domain(&self) -> (f64, bool) {
        match *self {
            MonotoneTransform::Power { .. } => (0.0, true),
            MonotoneTransform::Log1pScale { scale } => (-scale, false),
            _ => (f64::NEG_INFINITY, false),
        }
    }

    pub fn in_domain(&self, u: f64) -> bool {
        let (min, closed) = self.domain();
        u > min || (closed && u == min)
    }

    pub fn apply(&self, u: f64, context: &str) -> Result<f64> {
        if !self.in_domain(u) {
            return Err(CobiError::Domain { context: context.to_string(), input: u, minimum: self.domain().0 });
        }
        Ok(match *self {
            MonotoneTransform::Identity => u,
            MonotoneTransform::Power { exponent } => u.powf(exponent),
            MonotoneTransform::Log1pScale { scale } => (u / scale).ln_1p(),
            MonotoneTransform::Affine { slope, intercept } => slope * u + intercept,
        })
    }
}

/// Map with `T(x) > 0` exactly when `x > 0`; leaves `{x : g(x) <= 0}` unchanged.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SignPreservingTransform {
    #[default]
    Identity,
    PositiveScale { factor: f64 },
    /// 1 for positive input, 0 otherwise.
    BinaryStep,
    /// `sign(x) |x|^exponent`.
    SignedPower { exponent: f64 },
}

impl SignPreservingTransform {
    pub fn validate(&self) -> Result<()> {
        match *self {
            SignPreservingTransform::PositiveScale { factor } if !(factor > 0.0 && factor.is_finite()) => {
                Err(CobiError::InvalidArgument(format!("positive-scale factor must be > 0, got {factor}")))
            }
            SignPreservingTransform::SignedPower { exponent } if !(exponent > 0.0 && exponent.is_finite()) => {
                Err(CobiError::InvalidArgument(format!("signed-power exponent must be > 0, got {exponent}")))
            }
            _ => Ok(()),
        }
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, SignPreservingTransform::Identity)
    }

    pub fn apply(&self, x: f64) -> f64 {
        match *self {
            SignPreservingTransform::Identity => x,
            SignPreservingTransform::PositiveScale { factor } => factor * x,
            SignPreservingTransform::BinaryStep => {
                if x > 0.0 {
                    1.0
                } else {
                    0.0
                }
            }
            SignPreservingTransform::SignedPower { exponent } => {
                if x == 0.0 {
                    0.0
                } else {
                    x.signum() * x.abs().powf(exponent)
                }
            }
        }
    }
}
