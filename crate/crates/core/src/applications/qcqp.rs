//! Quadratically constrained quadratic programs with at most four
//! constraints, solved exactly through the SDP relaxation of their
//! homogenization and a rank-one recovery.
//!
//! ```text
//! maximize  x^H Q x + 2 Re(x^H q)
//! s.t.      x^H A_j x + 2 Re(x^H b_j) + c_j ≤ 0,   j = 1..m ≤ 4
//! ```

use crate::decomposition::{decompose, MAX_CONSTRAINTS};
use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, QuaternionMatrix, QuaternionVector};
use crate::quaternion::Quaternion;
use crate::random;
use crate::sdp::{embed_hermitian, project_first_block, solve_sdp, SdpBuilder, SdpOptions, SdpSummary, Sense};
use crate::spectral::min_eigenvalue;

/// Points drawn when searching for a strictly feasible point.
pub const SLATER_SAMPLES: usize = 1_000;

/// Required strict-feasibility margin of a sampled point.
pub const SLATER_MARGIN: f64 = 1e-6;

/// `|t_k|` below this cannot be used for dehomogenization.
pub const MIN_HOMOGENEOUS_WEIGHT: f64 = 1e-8;

/// `x^H A x + 2 Re(x^H b) + c`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadraticForm {
    pub quadratic: HermitianMatrix,
    pub linear: QuaternionVector,
    pub constant: f64,
}

impl QuadraticForm {
    pub fn new(quadratic: HermitianMatrix, linear: QuaternionVector, constant: f64) -> Result<Self> {
        if linear.len() != quadratic.dim() {
            return Err(Error::Dimension(format!(
                "linear term has length {}, quadratic term is {}x{}",
                linear.len(),
                quadratic.dim(),
                quadratic.dim()
            )));
        }
        Ok(Self { quadratic, linear, constant })
    }

    pub fn dim(&self) -> usize {
        self.quadratic.dim()
    }

    pub fn eval(&self, x: &QuaternionVector) -> f64 {
        self.quadratic.quad_form(x) + 2.0 * x.dot_h(&self.linear).re() + self.constant
    }

    /// `[[c, b^H], [b, A]]`.
    pub fn homogenized(&self) -> HermitianMatrix {
        let n = self.dim();
        let a = self.quadratic.as_matrix();
        let m = QuaternionMatrix::from_fn(n + 1, n + 1, |i, j| match (i, j) {
            (0, 0) => Quaternion::real(self.constant),
            (0, j) => self.linear[j - 1].conj(),
            (i, 0) => self.linear[i - 1],
            (i, j) => a[(i - 1, j - 1)],
        });
        HermitianMatrix::from_hermitian_part(&m)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QcqpProblem {
    /// Maximized; its constant term is ignored.
    pub objective: QuadraticForm,
    /// Each must be `≤ 0`.
    pub constraints: Vec<QuadraticForm>,
    pub slater_point: Option<QuaternionVector>,
}

impl QcqpProblem {
    pub fn new(objective: QuadraticForm, constraints: Vec<QuadraticForm>, slater_point: Option<QuaternionVector>) -> Result<Self> {
        if constraints.len() > MAX_CONSTRAINTS {
            return Err(Error::Contract(format!(
                "at most {MAX_CONSTRAINTS} constraints are supported, got {}",
                constraints.len()
            )));
        }
        let n = objective.dim();
        if constraints.iter().any(|c| c.dim() != n) || slater_point.as_ref().is_some_and(|x| x.len() != n) {
            return Err(Error::Dimension("problem data differ in size".into()));
        }
        let finite = |f: &QuadraticForm| f.quadratic.as_matrix().is_finite() && f.linear.is_finite() && f.constant.is_finite();
        if !finite(&objective) || !constraints.iter().all(finite) {
            return Err(Error::Domain("problem has non-finite data".into()));
        }
        Ok(Self { objective, constraints, slater_point })
    }

    pub fn dim(&self) -> usize {
        self.objective.dim()
    }

    /// `x^H Q x + 2 Re(x^H q)`.
    pub fn objective_value(&self, x: &QuaternionVector) -> f64 {
        self.objective.quadratic.quad_form(x) + 2.0 * x.dot_h(&self.objective.linear).re()
    }

    pub fn constraint_values(&self, x: &QuaternionVector) -> Vec<f64> {
        self.constraints.iter().map(|c| c.eval(x)).collect()
    }

    fn max_violation(&self, x: &QuaternionVector) -> f64 {
        self.constraint_values(x).into_iter().fold(f64::NEG_INFINITY, f64::max)
    }
}

/// `B₀, B₁..B_m, B_{m+1}` of the homogenized problem, all `(n+1)×(n+1)`.
pub fn homogenize(p: &QcqpProblem) -> Vec<HermitianMatrix> {
    let n = p.dim();
    let objective = QuadraticForm { constant: 0.0, ..p.objective.clone() };
    let mut out = vec![objective.homogenized()];
    out.extend(p.constraints.iter().map(QuadraticForm::homogenized));
    let mut corner = vec![0.0; n + 1];
    corner[0] = 1.0;
    out.push(HermitianMatrix::diag(&corner));
    out
}

/// Returns a strictly feasible point: the supplied one if it qualifies,
/// otherwise the best of [`SLATER_SAMPLES`] seeded draws (including 0).
pub fn find_slater_point(p: &QcqpProblem, seed: u64) -> Result<QuaternionVector> {
    if p.constraints.is_empty() {
        return Ok(QuaternionVector::zeros(p.dim()));
    }
    if let Some(x0) = &p.slater_point {
        let worst = p.max_violation(x0);
        if worst < 0.0 {
            return Ok(x0.clone());
        }
        return Err(Error::Domain(format!("supplied point is not strictly feasible (max constraint {worst:e})")));
    }
    let n = p.dim();
    let mut rng = random::rng_from_seed(seed);
    let mut best = QuaternionVector::zeros(n);
    let mut best_val = p.max_violation(&best);
    for i in 1..SLATER_SAMPLES {
        let radius = 10f64.powf(-2.0 + 3.0 * i as f64 / SLATER_SAMPLES as f64);
        let x = random::unit_vector(&mut rng, n).scale(radius);
        let val = p.max_violation(&x);
        if val < best_val {
            best = x;
            best_val = val;
        }
    }
    if best_val <= -SLATER_MARGIN {
        Ok(best)
    } else {
        Err(Error::Domain(format!("no strictly feasible point found (best max constraint {best_val:e})")))
    }
}

/// Dual solution of the relaxation with its complementarity checks.
#[derive(Debug, Clone)]
pub struct QcqpCertificate {
    /// Multiplier of `B_{m+1} • X = 1`; equals the optimal value.
    pub y0: f64,
    /// Multipliers of the inequality constraints, all `≥ 0`.
    pub multipliers: Vec<f64>,
    /// `Σ y_j B_j − B₀ + y0 B_{m+1}`.
    pub dual_matrix: HermitianMatrix,
    pub dual_min_eig: f64,
    /// `Y • X*` for the relaxation optimum.
    pub complementarity: f64,
    /// `Y • x̃x̃^H` for the lifted recovered point `x̃ = (1; x*)`.
    pub lifted_complementarity: f64,
    /// `y_j · q_j(x*)`.
    pub constraint_complementarity: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct QcqpSolution {
    pub x_star: QuaternionVector,
    pub value: f64,
    pub sdp_value: f64,
    /// Rank-one component used for dehomogenization.
    pub recovery_index: usize,
    /// First entries `t_k` of all rank-one components.
    pub homogeneous_weights: Vec<Quaternion>,
    pub constraint_values: Vec<f64>,
    pub relaxation: HermitianMatrix,
    pub certificate: QcqpCertificate,
    pub sdp: SdpSummary,
}

/// Solves `p` through its relaxation. `seed` drives the strict-feasibility
/// search when no point is supplied.
pub fn qcqp_solve(p: &QcqpProblem, seed: u64, opts: &SdpOptions) -> Result<QcqpSolution> {
    find_slater_point(p, seed)?;
    let n = p.dim();
    let m = p.constraints.len();
    let bs = homogenize(p);

    let mut builder = SdpBuilder::new(embed_hermitian(&bs[0]), true);
    for bj in &bs[1..=m] {
        builder.push(embed_hermitian(bj), Sense::LessEqual, 0.0);
    }
    builder.push(embed_hermitian(&bs[m + 1]), Sense::Equal, 1.0);
    let sol = solve_sdp(&builder.build(), opts)?;
    if !sol.is_converged() {
        return Err(Error::Numerical(format!("relaxation stopped with status {:?}", sol.status)));
    }
    let relaxation = project_first_block(&sol.x)?;

    let mut against: Vec<HermitianMatrix> = bs[1..=m].to_vec();
    against.resize(MAX_CONSTRAINTS, HermitianMatrix::zeros(n + 1));
    let dec = decompose(&relaxation, &against)?;

    let weights: Vec<Quaternion> = dec.vectors.iter().map(|v| v[0]).collect();
    let max_weight = weights.iter().map(|t| t.norm()).fold(0.0, f64::max);
    if max_weight <= MIN_HOMOGENEOUS_WEIGHT {
        return Err(Error::Contract("no rank-one component has a usable homogeneous entry".into()));
    }
    let recovery_index = weights.iter().position(|t| t.norm() >= max_weight - 1e-12).expect("maximum exists");
    let t_inv = weights[recovery_index].inverse()?;
    let x_star: QuaternionVector = dec.vectors[recovery_index].iter().skip(1).map(|&e| e * t_inv).collect();

    let y0 = sol.y[m];
    let multipliers = sol.y[..m].to_vec();
    let mut dual_matrix = bs[m + 1].scale(y0).sub(&bs[0]);
    for (bj, &yj) in bs[1..=m].iter().zip(&multipliers) {
        dual_matrix = dual_matrix.add(&bj.scale(yj));
    }
    let lifted: QuaternionVector = std::iter::once(Quaternion::ONE).chain(x_star.iter().copied()).collect();
    let constraint_values = p.constraint_values(&x_star);
    let certificate = QcqpCertificate {
        y0,
        dual_min_eig: min_eigenvalue(&dual_matrix)?,
        complementarity: dual_matrix.inner(&relaxation),
        lifted_complementarity: dual_matrix.quad_form(&lifted),
        constraint_complementarity: multipliers.iter().zip(&constraint_values).map(|(y, q)| y * q).collect(),
        multipliers,
        dual_matrix,
    };
    Ok(QcqpSolution {
        value: p.objective_value(&x_star),
        sdp_value: sol.primal_objective,
        x_star,
        recovery_index,
        homogeneous_weights: weights,
        constraint_values,
        relaxation,
        certificate,
        sdp: sol.summary(),
    })
}
