//! Real symmetric embedding and Hermitian eigendecomposition.
//!
//! A quaternion `q = a + bi + cj + dk` acts on `H ≅ R⁴` by left
//! multiplication, giving the 4×4 block
//!
//! ```text
//! [ a  -b  -c  -d ]
//! [ b   a  -d   c ]
//! [ c   d   a  -b ]
//! [ d  -c   b   a ]
//! ```
//!
//! Tiling these blocks gives an algebra homomorphism `R(PQ) = R(P)R(Q)` with
//! `R(Pᴴ) = R(P)ᵀ`. Each eigenvalue of a Hermitian `X` appears four times in
//! `R(X)`; its real eigenspace is the right span `{x, xi, xj, xk}`.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, QuaternionMatrix, QuaternionVector};
use crate::quaternion::Quaternion;

pub const DEFAULT_RANK_TOL: f64 = 1e-10;

const JACOBI_REL_TOL: f64 = 1e-12;
const JACOBI_MAX_SWEEPS: usize = 100;
const CLUSTER_SPREAD_TOL: f64 = 1e-8;

/// `R(M)` together with the quaternion dimension it came from.
#[derive(Debug, Clone, PartialEq)]
pub struct RealEmbedding {
    pub matrix: DMatrix<f64>,
    pub n: usize,
}

/// Eigenpairs of a quaternion Hermitian matrix, eigenvalues descending.
#[derive(Debug, Clone)]
pub struct EigenDecomposition {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Vec<QuaternionVector>,
    /// Largest within-cluster spread of the 4-fold real eigenvalues, relative to `1 + |λ|`.
    pub cluster_spread: f64,
}

/// 4×4 real block of left multiplication by `q`.
pub fn quaternion_block(q: Quaternion) -> [[f64; 4]; 4] {
    let Quaternion { a, b, c, d } = q;
    [[a, -b, -c, -d], [b, a, -d, c], [c, d, a, -b], [d, -c, b, a]]
}

/// Real embedding of an arbitrary `n × m` quaternion matrix into `4n × 4m`.
pub fn real_embed(m: &QuaternionMatrix) -> RealEmbedding {
    let (rows, cols) = m.shape();
    let mut out = DMatrix::zeros(4 * rows, 4 * cols);
    for i in 0..rows {
        for j in 0..cols {
            let blk = quaternion_block(m[(i, j)]);
            for (r, row) in blk.iter().enumerate() {
                for (c, &v) in row.iter().enumerate() {
                    out[(4 * i + r, 4 * j + c)] = v;
                }
            }
        }
    }
    RealEmbedding { matrix: out, n: rows }
}

/// Cyclic Jacobi eigensolver for a real symmetric matrix.
///
/// Returns eigenvalues in descending order and the matching orthonormal
/// eigenvectors as columns.
pub fn jacobi_eigen(a: &DMatrix<f64>) -> Result<(Vec<f64>, DMatrix<f64>)> {
    let n = a.nrows();
    if n != a.ncols() {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", n, a.ncols())));
    }
    let mut a = a.clone();
    let mut v = DMatrix::<f64>::identity(n, n);
    let total = a.norm();
    let threshold = JACOBI_REL_TOL * total;

    let off_norm = |a: &DMatrix<f64>| -> f64 {
        let mut s = 0.0;
        for j in 0..n {
            for i in 0..n {
                if i != j {
                    s += a[(i, j)] * a[(i, j)];
                }
            }
        }
        s.sqrt()
    };

    let mut converged = total == 0.0 || off_norm(&a) <= threshold;
    let mut sweeps = 0;
    while !converged && sweeps < JACOBI_MAX_SWEEPS {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                // skip rotations that cannot change the diagonal in floating point
                if sweeps > 4 && apq.abs() * 1e17 < app.abs().min(aqq.abs()) {
                    a[(p, q)] = 0.0;
                    a[(q, p)] = 0.0;
                    continue;
                }
                let theta = (aqq - app) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;

                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                a[(p, q)] = 0.0;
                a[(q, p)] = 0.0;
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
        converged = off_norm(&a) <= threshold;
    }
    if !converged {
        return Err(Error::Numerical(format!(
            "Jacobi eigensolver did not converge in {JACOBI_MAX_SWEEPS} sweeps"
        )));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].total_cmp(&a[(i, i)]));
    let values = order.iter().map(|&i| a[(i, i)]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok((values, vectors))
}

/// Quaternion modified Gram–Schmidt: removes the components of `v` along
/// each orthonormal `basis` vector, `v ← v − b·(bᴴv)`.
fn orthogonalize(v: &mut QuaternionVector, basis: &[QuaternionVector]) {
    // two passes recover the orthogonality lost to cancellation
    for _ in 0..2 {
        for b in basis {
            let coeff = b.dot_h(v);
            v.axpy_right(b, -coeff);
        }
    }
}

/// Eigendecomposition of a quaternion Hermitian matrix via cyclic Jacobi on
/// its real embedding.
pub fn eig_hermitian(x: &HermitianMatrix) -> Result<EigenDecomposition> {
    let n = x.dim();
    if n == 0 {
        return Ok(EigenDecomposition { eigenvalues: vec![], eigenvectors: vec![], cluster_spread: 0.0 });
    }
    let emb = real_embed(x.as_matrix());
    let (values, vectors) = jacobi_eigen(&emb.matrix)?;

    let mut eigenvalues = Vec::with_capacity(n);
    let mut eigenvectors: Vec<QuaternionVector> = Vec::with_capacity(n);
    let mut cluster_spread: f64 = 0.0;

    for cluster in 0..n {
        let lo = 4 * cluster;
        let group = &values[lo..lo + 4];
        let mean = group.iter().sum::<f64>() / 4.0;
        let spread = (group[0] - group[3]).abs() / (1.0 + mean.abs());
        cluster_spread = cluster_spread.max(spread);
        if spread > CLUSTER_SPREAD_TOL {
            return Err(Error::Numerical(format!(
                "eigenvalue cluster {cluster} has spread {spread:e}; 4-fold multiplicity lost"
            )));
        }

        // any vector of the 4-dim real eigenspace reads as a quaternion eigenvector;
        // keep the candidate that survives orthogonalization best
        let mut best: Option<(f64, QuaternionVector)> = None;
        for col in lo..lo + 4 {
            let reals: Vec<f64> = vectors.column(col).iter().copied().collect();
            let mut cand = QuaternionVector::from_real_blocks(&reals);
            orthogonalize(&mut cand, &eigenvectors);
            let norm = cand.norm();
            if best.as_ref().is_none_or(|(b, _)| norm > *b) {
                best = Some((norm, cand));
            }
        }
        let (norm, cand) = best.expect("cluster has four candidates");
        if norm < 1e-6 {
            return Err(Error::Numerical(format!(
                "no usable eigenvector in cluster {cluster} (residual norm {norm:e})"
            )));
        }
        let v = cand.scale(1.0 / norm);
        eigenvalues.push(x.quad_form(&v));
        eigenvectors.push(v);
    }

    Ok(EigenDecomposition { eigenvalues, eigenvectors, cluster_spread })
}

/// Count of eigenvalues above `rel_tol · max(λ_max, 1e-300)`.
pub fn numerical_rank(eigenvalues: &[f64], rel_tol: f64) -> usize {
    let lmax = eigenvalues.first().copied().unwrap_or(0.0);
    let cut = rel_tol * lmax.max(1e-300);
    eigenvalues.iter().filter(|&&l| l > cut).count()
}

/// Factors a PSD `X` as `Σ uᵢuᵢᴴ` with `uᵢ = vᵢ·√λᵢ` over the numerically
/// positive eigenpairs. Slightly negative eigenvalues (within
/// `rel_tol·(1 + λ_max)`) are treated as zero.
pub fn psd_factorize(x: &HermitianMatrix, rel_tol: f64) -> Result<Vec<QuaternionVector>> {
    let eig = eig_hermitian(x)?;
    let lmax = eig.eigenvalues.first().copied().unwrap_or(0.0);
    let lmin = eig.eigenvalues.last().copied().unwrap_or(0.0);
    let threshold = -rel_tol * (1.0 + lmax.max(0.0));
    if lmin < threshold {
        return Err(Error::NotPsd { min_eig: lmin, threshold });
    }
    let r = numerical_rank(&eig.eigenvalues, rel_tol);
    Ok(eig
        .eigenvalues
        .iter()
        .zip(&eig.eigenvectors)
        .take(r)
        .map(|(&l, v)| v.scale(l.sqrt()))
        .collect())
}

/// Smallest eigenvalue, or 0 for an empty matrix.
pub fn min_eigenvalue(x: &HermitianMatrix) -> Result<f64> {
    Ok(eig_hermitian(x)?.eigenvalues.last().copied().unwrap_or(0.0))
}
