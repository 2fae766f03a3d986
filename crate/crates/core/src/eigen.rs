//! Dense symmetric eigendecomposition by cyclic Jacobi rotations.
//!
//! Jacobi was chosen over Householder-plus-QL for its unconditionally
//! orthogonal eigenvectors and short correctness argument; every matrix in
//! this crate is desk-scale. One computation is single-threaded and
//! deterministic for a fixed input and sweep order.

use ndarray::Array2;

use crate::error::{Error, Result};
use crate::tol;

/// Eigenvalues in ascending order with matching orthonormal eigenvector
/// columns.
///
/// Ties in the sort are broken by the original (pre-sort) column index, so
/// repeated eigenvalues keep a stable column order. Within a degenerate
/// eigenspace the individual vectors are an arbitrary orthonormal basis;
/// consumers must only use basis-independent quantities (projections onto
/// eigenspaces).
#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<f64>,
    /// Column `i` pairs with `eigenvalues[i]`.
    pub eigenvectors: Array2<f64>,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// Entry `x` of the eigenvector for `eigenvalues[k]`.
    pub fn vector_entry(&self, x: usize, k: usize) -> f64 {
        self.eigenvectors[[x, k]]
    }

    /// Max deviation of `Ξ^T Ξ` from the identity.
    pub fn orthonormality_defect(&self) -> f64 {
        let n = self.dim();
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                let mut dot = 0.0;
                for r in 0..n {
                    dot += self.eigenvectors[[r, i]] * self.eigenvectors[[r, j]];
                }
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((dot - target).abs());
            }
        }
        worst
    }
}

fn check_square_symmetric(a: &Array2<f64>) -> Result<usize> {
    let (n, m) = a.dim();
    if n != m {
        return Err(Error::DimensionMismatch(format!("{n}x{m} is not square")));
    }
    if n == 0 {
        return Err(Error::DimensionMismatch("empty matrix".to_string()));
    }
    let mut scale: f64 = 0.0;
    for v in a.iter() {
        if !v.is_finite() {
            return Err(Error::NonFinite);
        }
        scale = scale.max(v.abs());
    }
    let mut dev: f64 = 0.0;
    for i in 0..n {
        for j in i + 1..n {
            dev = dev.max((a[[i, j]] - a[[j, i]]).abs());
        }
    }
    if dev > tol::SYMMETRY_ABS * scale.max(1.0) {
        return Err(Error::Asymmetric(dev));
    }
    Ok(n)
}

fn off_diagonal_frobenius(a: &Array2<f64>) -> f64 {
    let n = a.nrows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[[i, j]] * a[[i, j]];
            }
        }
    }
    acc.sqrt()
}

/// Eigenvalues and orthonormal eigenvectors of a symmetric real matrix.
///
/// Cyclic sweeps of plane rotations run until the off-diagonal Frobenius
/// mass falls below `1e-14 * ||A||_F` or [`tol::JACOBI_MAX_SWEEPS`] sweeps
/// have been spent. Eigenpairs are returned ascending.
pub fn symmetric_eig(a: &Array2<f64>) -> Result<SpectralDecomposition> {
    let n = check_square_symmetric(a)?;
    // Work on the symmetrized copy so that the tolerated asymmetry cannot
    // bias one triangle.
    let mut m = Array2::zeros((n, n));
    for i in 0..n {
        for j in 0..n {
            m[[i, j]] = 0.5 * (a[[i, j]] + a[[j, i]]);
        }
    }
    let mut v = Array2::eye(n);
    let norm = m.iter().map(|x| x * x).sum::<f64>().sqrt();
    if norm > 0.0 {
        for _sweep in 0..tol::JACOBI_MAX_SWEEPS {
            if off_diagonal_frobenius(&m) <= tol::JACOBI_OFF_REL * norm {
                break;
            }
            for p in 0..n - 1 {
                for q in p + 1..n {
                    let apq = m[[p, q]];
                    if apq == 0.0 {
                        continue;
                    }
                    let theta = (m[[q, q]] - m[[p, p]]) / (2.0 * apq);
                    let t = if theta.abs() > 1e150 {
                        // Avoid overflow in theta^2; the rotation is tiny.
                        0.5 / theta
                    } else {
                        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
                    };
                    let c = 1.0 / (t * t + 1.0).sqrt();
                    let s = t * c;
                    // A <- J^T A J on rows/columns p, q.
                    for k in 0..n {
                        let (akp, akq) = (m[[k, p]], m[[k, q]]);
                        m[[k, p]] = c * akp - s * akq;
                        m[[k, q]] = s * akp + c * akq;
                    }
                    for k in 0..n {
                        let (apk, aqk) = (m[[p, k]], m[[q, k]]);
                        m[[p, k]] = c * apk - s * aqk;
                        m[[q, k]] = s * apk + c * aqk;
                    }
                    m[[p, q]] = 0.0;
                    m[[q, p]] = 0.0;
                    for k in 0..n {
                        let (vkp, vkq) = (v[[k, p]], v[[k, q]]);
                        v[[k, p]] = c * vkp - s * vkq;
                        v[[k, q]] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| {
        m[[i, i]]
            .partial_cmp(&m[[j, j]])
            .expect("finite eigenvalues")
            .then(i.cmp(&j))
    });
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[[i, i]]).collect();
    let mut eigenvectors = Array2::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        for r in 0..n {
            eigenvectors[[r, dst]] = v[[r, src]];
        }
    }
    Ok(SpectralDecomposition {
        eigenvalues,
        eigenvectors,
    })
}

/// `max_k ||A ξ_k − λ_k ξ_k||_∞` over all eigenpairs of `d`.
pub fn eig_residual(a: &Array2<f64>, d: &SpectralDecomposition) -> Result<f64> {
    let n = a.nrows();
    if a.ncols() != n || d.dim() != n || d.eigenvectors.nrows() != n {
        return Err(Error::DimensionMismatch(format!(
            "matrix {}x{} vs decomposition of dim {}",
            a.nrows(),
            a.ncols(),
            d.dim()
        )));
    }
    let mut worst: f64 = 0.0;
    for k in 0..n {
        for i in 0..n {
            let mut acc = 0.0;
            for j in 0..n {
                acc += a[[i, j]] * d.eigenvectors[[j, k]];
            }
            worst = worst.max((acc - d.eigenvalues[k] * d.eigenvectors[[i, k]]).abs());
        }
    }
    Ok(worst)
}
