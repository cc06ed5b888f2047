//! Dense linear algebra shared by objectives, constraints and the projection solvers.

use nalgebra::{Cholesky, DMatrix, DVector, Dyn, SymmetricEigen};
use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{check_dim, CobiError, Result};

/// A point of the search space.
pub type Point = DVector<f64>;

const SYMMETRY_TOL: f64 = 1e-12;
const ORTHOGONALITY_TOL: f64 = 1e-10;

/// Symmetric positive definite matrix together with its lower Cholesky factor.
#[derive(Clone, Debug)]
pub struct SpdMatrix {
    matrix: DMatrix<f64>,
    factor: Cholesky<f64, Dyn>,
}

impl SpdMatrix {
    /// Validates symmetry and positive definiteness. The stored matrix is the
    /// exact symmetrization `(A + A^T) / 2` of the input.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if !matrix.is_square() {
            return Err(CobiError::DimensionMismatch { expected: matrix.nrows(), found: matrix.ncols() });
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(CobiError::NonFinite("matrix".into()));
        }
        let n = matrix.nrows();
        for i in 0..n {
            for j in (i + 1)..n {
                let (a, b) = (matrix[(i, j)], matrix[(j, i)]);
                let diff = (a - b).abs();
                if diff > SYMMETRY_TOL * a.abs().max(1.0) {
                    return Err(CobiError::NotSymmetric { row: i, col: j, difference: diff });
                }
            }
        }
        let matrix = symmetrize(matrix);
        let factor = Cholesky::new(matrix.clone()).ok_or(CobiError::NotPositiveDefinite)?;
        // nalgebra only checks the pivots for being positive, which lets
        // subnormal pivots through.
        if factor.l_dirty().diagonal().iter().any(|d| !(*d > 0.0) || !d.is_normal()) {
            return Err(CobiError::NotPositiveDefinite);
        }
        Ok(SpdMatrix { matrix, factor })
    }

    pub fn identity(n: usize) -> Self {
        Self::new(DMatrix::identity(n, n)).expect("identity is SPD")
    }

    pub fn diagonal(diag: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&DVector::from_column_slice(diag)))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Lower-triangular factor `L` with `A = L L^T`.
    pub fn factor(&self) -> DMatrix<f64> {
        self.factor.l()
    }

    /// Solves `A y = rhs` with the cached factorization.
    pub fn solve(&self, rhs: &DVector<f64>) -> DVector<f64> {
        self.factor.solve(rhs)
    }

    pub fn quad_form(&self, v: &DVector<f64>) -> f64 {
        let n = self.dim();
        let mut acc = 0.0;
        for j in 0..n {
            let mut col = 0.0;
            for i in 0..n {
                col += self.matrix[(i, j)] * v[i];
            }
            acc += col * v[j];
        }
        acc
    }

    pub fn mul_vec(&self, v: &DVector<f64>) -> DVector<f64> {
        &self.matrix * v
    }

    /// `L^T x`, so that `|L^T x|_2 = |x|_A`.
    pub fn factor_transpose_mul(&self, x: &DVector<f64>) -> DVector<f64> {
        lower_transpose_mul(self.factor.l_dirty(), x)
    }

    pub fn eigenvalues(&self) -> DVector<f64> {
        SymmetricEigen::new(self.matrix.clone()).eigenvalues
    }

    pub fn condition_number(&self) -> f64 {
        let ev = self.eigenvalues();
        ev.max() / ev.min()
    }

    /// `theta * a + (1 - theta) * b`; endpoints return exact copies.
    pub fn convex_combination(a: &SpdMatrix, b: &SpdMatrix, theta: f64) -> Result<SpdMatrix> {
        check_dim(a.dim(), b.dim())?;
        if theta == 1.0 {
            return Ok(a.clone());
        }
        if theta == 0.0 {
            return Ok(b.clone());
        }
        SpdMatrix::new(&a.matrix * theta + &b.matrix * (1.0 - theta))
    }
}

// `l_dirty` may carry garbage above the diagonal, so the product is formed
// from the lower triangle only.
fn lower_transpose_mul(l: &DMatrix<f64>, x: &DVector<f64>) -> DVector<f64> {
    let n = l.nrows();
    DVector::from_fn(n, |j, _| (j..n).map(|i| l[(i, j)] * x[i]).sum())
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    let t = m.transpose();
    (m + t) * 0.5
}

/// Builds `R diag(eigenvalues) R^T`.
pub fn spd_from_spectrum(eigenvalues: &[f64], rotation: &DMatrix<f64>) -> Result<SpdMatrix> {
    for (index, &value) in eigenvalues.iter().enumerate() {
        if !(value > 0.0) || !value.is_finite() {
            return Err(CobiError::InvalidSpectrum { index, value });
        }
    }
    let n = eigenvalues.len();
    if rotation.nrows() != n || rotation.ncols() != n {
        return Err(CobiError::DimensionMismatch { expected: n, found: rotation.nrows() });
    }
    let gram = rotation.tr_mul(rotation) - DMatrix::identity(n, n);
    let deviation = gram.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    if !(deviation <= ORTHOGONALITY_TOL) {
        return Err(CobiError::InvalidRotation { deviation });
    }
    let scaled = DMatrix::from_fn(n, n, |i, j| rotation[(i, j)] * eigenvalues[j]);
    SpdMatrix::new(symmetrize(scaled * rotation.transpose()))
}

/// `sqrt(x^T A x)`.
pub fn norm_a(x: &DVector<f64>, a: &SpdMatrix) -> Result<f64> {
    check_dim(a.dim(), x.len())?;
    Ok(a.factor_transpose_mul(x).norm())
}

pub fn spd_solve(a: &SpdMatrix, rhs: &DVector<f64>) -> Result<DVector<f64>> {
    check_dim(a.dim(), rhs.len())?;
    Ok(a.solve(rhs))
}

/// Haar-distributed orthogonal matrix: QR of a standard normal matrix with the
/// signs of `R`'s diagonal folded into `Q`.
pub fn random_rotation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let (mut q, r) = qr.unpack();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            q.column_mut(j).neg_mut();
        }
    }
    q
}

/// Eigenvalues log-uniformly spaced from 1 to `kappa`.
pub fn log_uniform_spectrum(n: usize, kappa: f64) -> Vec<f64> {
    if n == 1 {
        return vec![1.0];
    }
    (0..n).map(|i| kappa.powf(i as f64 / (n - 1) as f64)).collect()
}

pub(crate) fn max_abs(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}
