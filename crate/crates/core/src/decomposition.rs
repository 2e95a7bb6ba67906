//! Equal-inner-product rank-one decomposition.
//!
//! Given `X ⪰ 0` of rank `r` and up to four Hermitian matrices `A₁..A₄`,
//! produces `X = Σ xᵢxᵢᴴ` with `xᵢᴴ A_k xᵢ = A_k • X / r` for every `i`
//! and `k`. The construction runs one phase per matrix. Phase `ℓ` starts from
//! vectors that already equalize `A₁..A_{ℓ−1}` and repeatedly rotates a pair
//! `(û₁, û₂)` lying on opposite sides of the `A_ℓ` mean:
//!
//! ```text
//! v₁ = (û₁ω + û₂) / √(1 + |ω|²),   v₂ = (−û₁ + û₂ω̄) / √(1 + |ω|²)
//! ```
//!
//! This keeps `v₁v₁ᴴ + v₂v₂ᴴ = û₁û₁ᴴ + û₂û₂ᴴ`. Choosing the direction of `ω`
//! in the null space of the earlier cross terms `Re(ω̄ · û₁ᴴA_kû₂) = 0` and
//! its length from a scalar quadratic puts `v₁` exactly on every mean.

use nalgebra::Matrix4;

use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, QuaternionVector};
use crate::quaternion::Quaternion;
use crate::spectral::{psd_factorize, DEFAULT_RANK_TOL};

/// Maximum number of constraint matrices the decomposition supports.
pub const MAX_CONSTRAINTS: usize = 4;

/// Scale-relative tolerance of the "already on the mean" test.
pub const EQUALITY_TOL: f64 = 1e-9;

/// Unit quaternion `ω_*` orthogonal (as a 4-vector) to each supplied pairing scalar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaDirection(Quaternion);

impl OmegaDirection {
    pub fn quaternion(self) -> Quaternion {
        self.0
    }
}

/// Solves `a_k ω_a + b_k ω_b + c_k ω_c + d_k ω_d = 0` for every
/// `τ_k = a_k + b_k i + c_k j + d_k k`, returning a unit solution.
///
/// The solution is the right singular vector of the smallest singular value
/// of the coefficient matrix; an empty list gives `ω = 1`.
pub fn nullspace_direction(taus: &[Quaternion]) -> Result<OmegaDirection> {
    if taus.len() > 3 {
        return Err(Error::Contract(format!(
            "at most 3 pairing scalars admit a guaranteed nonzero solution, got {}",
            taus.len()
        )));
    }
    if taus.is_empty() {
        return Ok(OmegaDirection(Quaternion::ONE));
    }
    let mut m = Matrix4::<f64>::zeros();
    for (row, tau) in taus.iter().enumerate() {
        for (col, v) in tau.to_array().into_iter().enumerate() {
            m[(row, col)] = v;
        }
    }
    let svd = m.svd(false, true);
    let v_t = svd.v_t.ok_or_else(|| Error::Numerical("SVD did not return right singular vectors".into()))?;
    let (idx, _) = svd
        .singular_values
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.total_cmp(b.1))
        .expect("four singular values");
    let row = v_t.row(idx);
    let w = Quaternion::new(row[0], row[1], row[2], row[3]);
    let norm = w.norm();
    if !(norm > 0.0) {
        return Err(Error::Numerical("degenerate null-space direction".into()));
    }
    Ok(OmegaDirection(w / norm))
}

/// Positive root of `p α² + 2ι α + c = 0` for `p > 0 > c`.
///
/// Uses the cancellation-free branch of the quadratic formula.
pub fn positive_root(p: f64, iota: f64, c: f64) -> Result<f64> {
    if !(p > 0.0) || !(c < 0.0) || !iota.is_finite() {
        return Err(Error::Contract(format!(
            "positive_root needs p > 0 > c, got p = {p:e}, c = {c:e}, iota = {iota:e}"
        )));
    }
    let disc = (iota * iota - p * c).sqrt();
    Ok(if iota >= 0.0 { -c / (iota + disc) } else { (disc - iota) / p })
}

/// Pair rotation `(u₁, u₂) ↦ (v₁, v₂)` for an arbitrary quaternion `ω`.
pub fn rotate_pair(
    u1: &QuaternionVector,
    u2: &QuaternionVector,
    omega: Quaternion,
) -> (QuaternionVector, QuaternionVector) {
    let s = 1.0 / (1.0 + omega.norm_sqr()).sqrt();
    let mut v1 = u2.clone();
    v1.axpy_right(u1, omega);
    let mut v2 = u2.mul_right(omega.conj());
    v2.axpy_right(u1, -Quaternion::ONE);
    (v1.scale(s), v2.scale(s))
}

/// Options shared by [`acqrd_step`] and [`decompose`].
#[derive(Debug, Clone, Copy)]
pub struct DecomposeOptions {
    /// Relative eigenvalue cutoff for the initial factorization.
    pub rank_tol: f64,
    /// Relative tolerance for the equalities carried into and out of each phase.
    pub tol: f64,
}

impl Default for DecomposeOptions {
    fn default() -> Self {
        Self { rank_tol: DEFAULT_RANK_TOL, tol: 1e-7 }
    }
}

/// Counters from one phase of [`acqrd_step`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub rotations: usize,
    /// Vectors that were already on the mean before any rotation.
    pub passed_through: usize,
}

struct Working {
    vector: QuaternionVector,
    deviation: f64,
}

/// One phase of the decomposition: extends the equal-inner-product
/// property from `A₁..A_{ℓ−1}` to `A₁..A_ℓ` (`ell` is 1-based).
///
/// `means[k]` is the target `A_k • X / r`. The returned vectors have the same
/// outer-product sum as `u`.
pub fn acqrd_step(
    u: Vec<QuaternionVector>,
    a: &[HermitianMatrix],
    ell: usize,
    means: &[f64],
    tol: f64,
) -> Result<Vec<QuaternionVector>> {
    acqrd_step_with_stats(u, a, ell, means, tol).map(|(v, _)| v)
}

/// [`acqrd_step`] that also reports how many rotations were performed.
pub fn acqrd_step_with_stats(
    u: Vec<QuaternionVector>,
    a: &[HermitianMatrix],
    ell: usize,
    means: &[f64],
    tol: f64,
) -> Result<(Vec<QuaternionVector>, StepStats)> {
    if ell == 0 || ell > MAX_CONSTRAINTS || ell > a.len() || means.len() < ell {
        return Err(Error::Contract(format!(
            "phase index {ell} needs 1 <= ell <= min(4, {}) and {} means",
            a.len(),
            means.len()
        )));
    }
    let r = u.len() as f64;
    for (k, (ak, &mean)) in a.iter().zip(means).take(ell - 1).enumerate() {
        let bound = tol * (1.0 + (r * mean).abs());
        for (i, ui) in u.iter().enumerate() {
            let dev = ak.quad_form(ui) - mean;
            if dev.abs() > bound {
                return Err(Error::Contract(format!(
                    "vector {i} misses the mean of A_{} by {dev:e} (bound {bound:e})",
                    k + 1
                )));
            }
        }
    }

    let target = &a[ell - 1];
    let mean = means[ell - 1];
    let scale = 1.0 + (r * mean).abs();
    let eq_bound = EQUALITY_TOL * scale;
    let deviation = |v: &QuaternionVector| target.quad_form(v) - mean;

    let mut stats = StepStats::default();
    let mut output = Vec::with_capacity(u.len());
    let mut work: Vec<Working> = Vec::new();
    for v in u {
        let d = deviation(&v);
        if d.abs() <= eq_bound {
            output.push(v);
            stats.passed_through += 1;
        } else {
            work.push(Working { vector: v, deviation: d });
        }
    }

    while !work.is_empty() {
        let (imax, imin) = extreme_indices(&work);
        let (dmax, dmin) = (work[imax].deviation, work[imin].deviation);
        if !(dmax > eq_bound && dmin < -eq_bound) {
            // deviations sum to zero in exact arithmetic; what is left is drift
            let worst = work.iter().map(|w| w.deviation.abs()).fold(0.0, f64::max);
            if worst <= tol * scale {
                output.extend(work.drain(..).map(|w| w.vector));
                break;
            }
            return Err(Error::Numerical(format!(
                "{} working vectors all deviate to one side of the A_{ell} mean (worst {worst:e}); \
                 means are inconsistent with the factors",
                work.len()
            )));
        }

        let u1 = &work[imax].vector;
        let u2 = &work[imin].vector;
        let taus: Vec<Quaternion> = a[..ell - 1].iter().map(|ak| ak.bilinear(u1, u2)).collect();
        let direction = nullspace_direction(&taus)?.quaternion();
        let tau_l = target.bilinear(u1, u2);
        let iota = (direction.conj() * tau_l).a;
        let alpha = positive_root(dmax, iota, dmin)?;
        let (v1, v2) = rotate_pair(u1, u2, direction * alpha);
        stats.rotations += 1;

        let (hi, lo) = if imax > imin { (imax, imin) } else { (imin, imax) };
        work.swap_remove(hi);
        work.swap_remove(lo);

        output.push(v1);
        let d2 = deviation(&v2);
        if d2.abs() <= eq_bound {
            output.push(v2);
        } else {
            work.push(Working { vector: v2, deviation: d2 });
        }
    }

    Ok((output, stats))
}

fn extreme_indices(work: &[Working]) -> (usize, usize) {
    let mut imax = 0;
    let mut imin = 0;
    for (i, w) in work.iter().enumerate() {
        if w.deviation > work[imax].deviation {
            imax = i;
        }
        if w.deviation < work[imin].deviation {
            imin = i;
        }
    }
    (imax, imin)
}

/// `X = Σ xᵢxᵢᴴ` with equal values `xᵢᴴ A_k xᵢ` across `i`.
#[derive(Debug, Clone)]
pub struct RankOneDecomposition {
    pub vectors: Vec<QuaternionVector>,
    pub target: HermitianMatrix,
    pub constraint_matrices: Vec<HermitianMatrix>,
    /// `A_k • X / r` for each constraint matrix.
    pub means: Vec<f64>,
}

impl RankOneDecomposition {
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn reconstruction(&self) -> HermitianMatrix {
        HermitianMatrix::sum_outer(self.target.dim(), &self.vectors)
    }

    /// `‖X − Σ xᵢxᵢᴴ‖_F`.
    pub fn reconstruction_error(&self) -> f64 {
        self.reconstruction().sub(&self.target).frobenius_norm()
    }

    /// `residuals[i][k] = xᵢᴴ A_k xᵢ − A_k • X / r`, recomputed from the target.
    pub fn equality_residuals(&self) -> Vec<Vec<f64>> {
        let r = self.rank().max(1) as f64;
        let targets: Vec<f64> = self.constraint_matrices.iter().map(|ak| ak.inner(&self.target) / r).collect();
        self.vectors
            .iter()
            .map(|x| self.constraint_matrices.iter().zip(&targets).map(|(ak, t)| ak.quad_form(x) - t).collect())
            .collect()
    }

    /// Largest `|xᵢᴴA_kxᵢ − A_k•X/r| / (1 + |A_k•X|)` over all `i, k`.
    pub fn max_relative_violation(&self) -> f64 {
        let res = self.equality_residuals();
        let scales: Vec<f64> = self.constraint_matrices.iter().map(|ak| 1.0 + ak.inner(&self.target).abs()).collect();
        res.iter()
            .flat_map(|row| row.iter().zip(&scales).map(|(d, s)| d.abs() / s))
            .fold(0.0, f64::max)
    }
}

/// Rank-one decomposition of `x` equalizing up to four matrices.
pub fn decompose(x: &HermitianMatrix, a: &[HermitianMatrix]) -> Result<RankOneDecomposition> {
    decompose_with(x, a, DecomposeOptions::default(), |_, _, _| Ok(()))
}

/// [`decompose`] with explicit options and a hook called after each phase
/// with `(ℓ, vectors, stats)`. An error from the hook aborts the run.
pub fn decompose_with<F>(
    x: &HermitianMatrix,
    a: &[HermitianMatrix],
    opts: DecomposeOptions,
    mut after_phase: F,
) -> Result<RankOneDecomposition>
where
    F: FnMut(usize, &[QuaternionVector], StepStats) -> Result<()>,
{
    if a.len() > MAX_CONSTRAINTS {
        return Err(Error::Contract(format!(
            "at most {MAX_CONSTRAINTS} constraint matrices are supported, got {}",
            a.len()
        )));
    }
    let n = x.dim();
    if let Some(bad) = a.iter().find(|ak| ak.dim() != n) {
        return Err(Error::Dimension(format!(
            "constraint matrix is {0}x{0}, target is {n}x{n}",
            bad.dim()
        )));
    }

    let mut vectors = psd_factorize(x, opts.rank_tol)?;
    let r = vectors.len();
    let means: Vec<f64> = a
        .iter()
        .map(|ak| if r == 0 { 0.0 } else { vectors.iter().map(|v| ak.quad_form(v)).sum::<f64>() / r as f64 })
        .collect();

    if r > 1 {
        for ell in 1..=a.len() {
            let (next, stats) = acqrd_step_with_stats(vectors, a, ell, &means, opts.tol)?;
            vectors = next;
            after_phase(ell, &vectors, stats)?;
        }
    }

    Ok(RankOneDecomposition {
        vectors,
        target: x.clone(),
        constraint_matrices: a.to_vec(),
        means,
    })
}
