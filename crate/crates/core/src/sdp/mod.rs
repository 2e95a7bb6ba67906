//! Dense block semidefinite programming over the real embedding of the
//! quaternion Hermitian PSD cone.
//!
//! Quaternion data enter through [`embed_hermitian_constraint`], which maps
//! `A` to `R(A)/4` so that `A • X = R(A)/4 • R(X)` for Hermitian `X`. The
//! solver then works over the full real symmetric cone, and
//! [`project_to_quaternion`] maps a real solution back. Because all data lie
//! in the embedded subspace, the projection keeps every constraint value, the
//! objective and positive semidefiniteness.

mod block;
mod solver;

use nalgebra::DMatrix;

pub use block::{Block, BlockKind, BlockMatrix};

use crate::error::{Error, Result};
use crate::matrix::{is_hermitian, HermitianMatrix, QuaternionMatrix};
use crate::quaternion::Quaternion;
use crate::spectral::{quaternion_block, real_embed};

/// One linear equality `A • X = b`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constraint {
    pub a: BlockMatrix,
    pub b: f64,
}

/// Standard-form problem: optimize `C • X` subject to `A_i • X = b_i` and
/// `X` in the product of the declared cones.
///
/// The dual reported in [`SdpSolution`] is, for minimization,
/// `max bᵀy s.t. C − Σ yᵢAᵢ = Z ⪰ 0`, and for maximization
/// `min bᵀy s.t. Σ yᵢAᵢ − C = Z ⪰ 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    pub blocks: Vec<BlockKind>,
    pub objective: BlockMatrix,
    pub constraints: Vec<Constraint>,
    pub maximize: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SdpOptions {
    pub gap_tol: f64,
    pub feas_tol: f64,
    pub max_iter: usize,
    pub step_fraction: f64,
}

impl Default for SdpOptions {
    fn default() -> Self {
        Self { gap_tol: 1e-8, feas_tol: 1e-8, max_iter: 200, step_fraction: 0.98 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SdpStatus {
    Converged,
    MaxIterations,
    NumericalFailure,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub x: BlockMatrix,
    pub y: Vec<f64>,
    pub z: BlockMatrix,
    pub status: SdpStatus,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// `|pobj − dobj| / (1 + |pobj| + |dobj|)`.
    pub gap: f64,
    /// `X • Z`.
    pub complementarity: f64,
    /// `‖b − A(X)‖ / (1 + ‖b‖)`.
    pub primal_residual: f64,
    /// Relative dual residual in the internal minimization form.
    pub dual_residual: f64,
    pub iterations: usize,
}

impl SdpSolution {
    pub fn is_converged(&self) -> bool {
        self.status == SdpStatus::Converged
    }

    pub fn summary(&self) -> SdpSummary {
        SdpSummary {
            status: self.status,
            primal_objective: self.primal_objective,
            dual_objective: self.dual_objective,
            gap: self.gap,
            complementarity: self.complementarity,
            primal_residual: self.primal_residual,
            dual_residual: self.dual_residual,
            iterations: self.iterations,
        }
    }
}

/// Scalar diagnostics of a solve, without the iterates.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct SdpSummary {
    pub status: SdpStatus,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub gap: f64,
    pub complementarity: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
}

impl SdpProblem {
    pub fn new(blocks: Vec<BlockKind>, objective: BlockMatrix, maximize: bool) -> Self {
        Self { blocks, objective, constraints: Vec::new(), maximize }
    }

    pub fn add_constraint(&mut self, a: BlockMatrix, b: f64) {
        self.constraints.push(Constraint { a, b });
    }

    /// Checks shapes, finiteness and symmetry of all data.
    pub fn validate(&self) -> Result<()> {
        if self.constraints.is_empty() {
            return Err(Error::Contract("SDP needs at least one constraint".into()));
        }
        let check = |name: &str, m: &BlockMatrix| -> Result<()> {
            if m.kinds() != self.blocks {
                return Err(Error::Dimension(format!("{name} does not match the block structure")));
            }
            if !m.is_finite() {
                return Err(Error::Domain(format!("{name} has non-finite entries")));
            }
            let asym = m.max_asymmetry();
            if asym > 1e-12 * (1.0 + m.norm()) {
                return Err(Error::Domain(format!("{name} is not symmetric (asymmetry {asym:e})")));
            }
            Ok(())
        };
        check("objective", &self.objective)?;
        for (i, c) in self.constraints.iter().enumerate() {
            check(&format!("constraint {i}"), &c.a)?;
            if !c.b.is_finite() {
                return Err(Error::Domain(format!("constraint {i} has non-finite right-hand side")));
            }
        }
        Ok(())
    }

    /// `A_i • X − b_i` for every constraint.
    pub fn constraint_residuals(&self, x: &BlockMatrix) -> Vec<f64> {
        self.constraints.iter().map(|c| c.a.inner(x) - c.b).collect()
    }
}

/// Solves `problem` with a primal-dual interior-point method.
///
/// Non-convergence is reported through [`SdpSolution::status`] together with
/// the best iterate seen; only malformed input is an error.
pub fn solve_sdp(problem: &SdpProblem, opts: &SdpOptions) -> Result<SdpSolution> {
    problem.validate()?;
    Ok(solver::solve(problem, opts))
}

/// Sense of a constraint given to [`SdpBuilder`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Equal,
    LessEqual,
    GreaterEqual,
}

/// Assembles a standard-form problem with one dense PSD block and converts
/// each inequality into an equality with its own nonnegative slack.
#[derive(Debug, Clone)]
pub struct SdpBuilder {
    size: usize,
    objective: DMatrix<f64>,
    maximize: bool,
    rows: Vec<(DMatrix<f64>, Sense, f64)>,
}

impl SdpBuilder {
    pub fn new(objective: DMatrix<f64>, maximize: bool) -> Self {
        Self { size: objective.nrows(), objective, maximize, rows: Vec::new() }
    }

    pub fn constraint(mut self, a: DMatrix<f64>, sense: Sense, b: f64) -> Self {
        self.push(a, sense, b);
        self
    }

    pub fn push(&mut self, a: DMatrix<f64>, sense: Sense, b: f64) {
        assert_eq!(a.shape(), (self.size, self.size), "constraint shape");
        self.rows.push((a, sense, b));
    }

    /// Number of slack scalars the built problem carries.
    pub fn slack_count(&self) -> usize {
        self.rows.iter().filter(|(_, s, _)| *s != Sense::Equal).count()
    }

    pub fn build(self) -> SdpProblem {
        let slacks = self.slack_count();
        let mut blocks = vec![BlockKind::Psd(self.size)];
        if slacks > 0 {
            blocks.push(BlockKind::Nonneg(slacks));
        }
        let with_slack = |m: DMatrix<f64>, slack: Option<(usize, f64)>| -> BlockMatrix {
            let mut out = vec![Block::Dense(m)];
            if slacks > 0 {
                let mut v = nalgebra::DVector::zeros(slacks);
                if let Some((i, s)) = slack {
                    v[i] = s;
                }
                out.push(Block::Diag(v));
            }
            BlockMatrix::new(out)
        };
        let objective = with_slack(self.objective, None);
        let mut problem = SdpProblem::new(blocks, objective, self.maximize);
        let mut k = 0;
        for (a, sense, b) in self.rows {
            let slack = match sense {
                Sense::Equal => None,
                Sense::LessEqual => Some((k, 1.0)),
                Sense::GreaterEqual => Some((k, -1.0)),
            };
            if slack.is_some() {
                k += 1;
            }
            problem.add_constraint(with_slack(a, slack), b);
        }
        problem
    }
}

/// `R(A)/4`, so that `A • X = embedded(A) • R(X)` for Hermitian `X`.
pub fn embed_hermitian_constraint(a: &QuaternionMatrix) -> Result<DMatrix<f64>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("{}x{} matrix is not square", a.rows(), a.cols())));
    }
    let tol = HermitianMatrix::DEFAULT_REL_TOL * (1.0 + a.max_modulus());
    if !is_hermitian(a, tol) {
        return Err(Error::Domain("constraint matrix is not Hermitian".into()));
    }
    Ok(real_embed(a).matrix * 0.25)
}

/// [`embed_hermitian_constraint`] for an already validated matrix.
pub fn embed_hermitian(a: &HermitianMatrix) -> DMatrix<f64> {
    real_embed(a.as_matrix()).matrix * 0.25
}

/// Orthogonal projection of a real symmetric `4n × 4n` matrix onto the
/// embedded quaternion subspace, returned as the quaternion matrix.
///
/// Each 4×4 block is correlated against `R(1), R(i), R(j), R(k)`, which are
/// mutually orthogonal with squared Frobenius norm 4.
pub fn project_to_quaternion(xreal: &DMatrix<f64>) -> Result<HermitianMatrix> {
    let (rows, cols) = xreal.shape();
    if rows != cols || rows % 4 != 0 {
        return Err(Error::Dimension(format!("{rows}x{cols} matrix is not square with size divisible by 4")));
    }
    let n = rows / 4;
    let basis = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K].map(quaternion_block);
    let m = QuaternionMatrix::from_fn(n, n, |i, j| {
        let mut coef = [0.0; 4];
        for (c, blk) in coef.iter_mut().zip(&basis) {
            let mut s = 0.0;
            for r in 0..4 {
                for q in 0..4 {
                    s += blk[r][q] * xreal[(4 * i + r, 4 * j + q)];
                }
            }
            *c = s / 4.0;
        }
        Quaternion::from_array(coef)
    });
    Ok(HermitianMatrix::from_hermitian_part(&m))
}

/// Quaternion form of the first block of `x`, which must be a dense block of
/// size divisible by 4.
pub fn project_first_block(x: &BlockMatrix) -> Result<HermitianMatrix> {
    match x.blocks.first() {
        Some(Block::Dense(m)) => project_to_quaternion(m),
        _ => Err(Error::Dimension("first block is not a dense PSD block".into())),
    }
}
