//! Points of the joint numerical range of five Hermitian matrices.
//!
//! A target `v` is reachable as `(x^H A_k x)_k` exactly when some `X ⪰ 0` has
//! `A_k • X = v_k`. The feasible `X` is found by an SDP and then collapsed to
//! a single vector with the rank-one decomposition.

use crate::decomposition::decompose;
use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, QuaternionVector};
use crate::sdp::{embed_hermitian, project_first_block, solve_sdp, SdpBuilder, SdpOptions, SdpSummary, Sense};

/// Number of matrices in a query.
pub const JNR_SIZE: usize = 5;

/// Largest relative residual `|A_k • X − v_k| / (1 + |v_k|)` accepted as
/// membership.
pub const MEMBERSHIP_TOL: f64 = 1e-6;

#[derive(Debug, Clone, PartialEq)]
pub struct JnrQuery {
    matrices: Vec<HermitianMatrix>,
    target: [f64; JNR_SIZE],
}

impl JnrQuery {
    pub fn new(matrices: Vec<HermitianMatrix>, target: [f64; JNR_SIZE]) -> Result<Self> {
        if matrices.len() != JNR_SIZE {
            return Err(Error::Dimension(format!("expected {JNR_SIZE} matrices, got {}", matrices.len())));
        }
        let n = matrices[0].dim();
        if matrices.iter().any(|m| m.dim() != n) {
            return Err(Error::Dimension("matrices differ in size".into()));
        }
        if target.iter().any(|v| !v.is_finite()) || matrices.iter().any(|m| !m.as_matrix().is_finite()) {
            return Err(Error::Domain("query has non-finite data".into()));
        }
        Ok(Self { matrices, target })
    }

    pub fn matrices(&self) -> &[HermitianMatrix] {
        &self.matrices
    }

    pub fn target(&self) -> [f64; JNR_SIZE] {
        self.target
    }

    pub fn dim(&self) -> usize {
        self.matrices[0].dim()
    }

    /// `(A_k • X)_k`.
    pub fn lifted_values(&self, x: &HermitianMatrix) -> [f64; JNR_SIZE] {
        std::array::from_fn(|k| self.matrices[k].inner(x))
    }

    /// `(x^H A_k x)_k`.
    pub fn values(&self, x: &QuaternionVector) -> [f64; JNR_SIZE] {
        std::array::from_fn(|k| self.matrices[k].quad_form(x))
    }

    /// Largest `|value_k − v_k| / (1 + |v_k|)`.
    pub fn relative_residual(&self, values: &[f64; JNR_SIZE]) -> f64 {
        values
            .iter()
            .zip(&self.target)
            .map(|(got, want)| (got - want).abs() / (1.0 + want.abs()))
            .fold(0.0, f64::max)
    }
}

/// Outcome of the lifted feasibility problem.
#[derive(Debug, Clone)]
pub enum JnrFeasibility {
    Feasible { x: HermitianMatrix, residual: f64, sdp: Option<SdpSummary> },
    /// No PSD matrix reproduces the target within [`MEMBERSHIP_TOL`].
    Infeasible { residual: f64, sdp: SdpSummary },
}

impl JnrFeasibility {
    pub fn is_feasible(&self) -> bool {
        matches!(self, JnrFeasibility::Feasible { .. })
    }
}

/// Finds `X ⪰ 0` with `A_k • X = v_k` for all five `k`.
///
/// A solve that stops short of full convergence is still accepted when the
/// best iterate meets [`MEMBERSHIP_TOL`], since only primal feasibility
/// matters here.
pub fn jnr_feasible_point(query: &JnrQuery, opts: &SdpOptions) -> Result<JnrFeasibility> {
    let n = query.dim();
    if query.target.iter().all(|&v| v == 0.0) {
        return Ok(JnrFeasibility::Feasible { x: HermitianMatrix::zeros(n), residual: 0.0, sdp: None });
    }
    let mut builder = SdpBuilder::new(nalgebra::DMatrix::zeros(4 * n, 4 * n), false);
    for (a, &v) in query.matrices.iter().zip(&query.target) {
        builder.push(embed_hermitian(a), Sense::Equal, v);
    }
    let sol = solve_sdp(&builder.build(), opts)?;
    let x = project_first_block(&sol.x)?;
    if !x.as_matrix().is_finite() {
        return Err(Error::Numerical("feasibility solve produced non-finite iterates".into()));
    }
    let residual = query.relative_residual(&query.lifted_values(&x));
    if residual > MEMBERSHIP_TOL {
        return Ok(JnrFeasibility::Infeasible { residual, sdp: sol.summary() });
    }
    Ok(JnrFeasibility::Feasible { x, residual, sdp: Some(sol.summary()) })
}

/// Collapses a feasible `X` to one vector with `x^H A_k x = v_k`.
pub fn jnr_recover(query: &JnrQuery, x: &HermitianMatrix) -> Result<QuaternionVector> {
    let n = query.dim();
    if x.dim() != n {
        return Err(Error::Dimension(format!("X is {0}x{0}, query matrices are {n}x{n}", x.dim())));
    }
    let v = query.target;
    if v.iter().all(|&t| t == 0.0) {
        return Ok(QuaternionVector::zeros(n));
    }
    let pivot = (0..JNR_SIZE).fold(0, |best, k| if v[k].abs() > v[best].abs() { k } else { best });
    let a_pivot = &query.matrices[pivot];

    let xnorm = x.frobenius_norm();
    let mut reduced = Vec::with_capacity(JNR_SIZE - 1);
    for k in (0..JNR_SIZE).filter(|&k| k != pivot) {
        let d = query.matrices[k].sub(&a_pivot.scale(v[k] / v[pivot]));
        let lifted = d.inner(x);
        if lifted.abs() > MEMBERSHIP_TOL * (1.0 + d.frobenius_norm() * xnorm) {
            return Err(Error::Contract(format!(
                "X does not match the target: reduced constraint {k} has value {lifted:e}"
            )));
        }
        reduced.push(d);
    }

    let dec = decompose(x, &reduced)?;
    let sign = v[pivot].signum();
    let (best, value) = dec
        .vectors
        .iter()
        .map(|xi| a_pivot.quad_form(xi))
        .enumerate()
        .fold((None, 0.0), |(bi, bv), (i, val)| if sign * val > sign * bv { (Some(i), val) } else { (bi, bv) });
    let Some(best) = best else {
        return Err(Error::Numerical("no rank-one component shares the sign of the pivot target".into()));
    };
    let rho = (v[pivot] / value).sqrt();
    Ok(dec.vectors[best].scale(rho))
}

/// Reachable point together with the lifted matrix that produced it.
#[derive(Debug, Clone)]
pub struct JnrPoint {
    pub x: QuaternionVector,
    pub lifted: HermitianMatrix,
    pub residual: f64,
    pub sdp: Option<SdpSummary>,
}

/// [`jnr_feasible_point`] followed by [`jnr_recover`]. Returns `Ok(None)`
/// when the target is not reachable.
pub fn jnr_solve(query: &JnrQuery, opts: &SdpOptions) -> Result<Option<JnrPoint>> {
    match jnr_feasible_point(query, opts)? {
        JnrFeasibility::Infeasible { .. } => Ok(None),
        JnrFeasibility::Feasible { x: lifted, sdp, .. } => {
            let x = jnr_recover(query, &lifted)?;
            let residual = query.relative_residual(&query.values(&x));
            Ok(Some(JnrPoint { x, lifted, residual, sdp }))
        }
    }
}
