//! Subcommand drivers and the independent verification pass.
//!
//! Each driver returns a typed output that is stored in the result file as
//! JSON. Verification reads only the problem file and that JSON, and
//! recomputes every reported residual from scratch.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::format::{parse_problem_str, MatrixEntry, ProblemFile, VectorEntry};
use super::report::{CommandEcho, Residual, ResultFile, Status};
use crate::applications::{
    homogenize, jnr_feasible_point, jnr_recover, qcqp_solve, sproc_certificate, JnrFeasibility, JnrQuery,
    QcqpProblem, QuadraticForm, SProcOutcome,
};
use crate::decomposition::{decompose_with, DecomposeOptions, MAX_CONSTRAINTS};
use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, QuaternionVector};
use crate::quaternion::Quaternion;
use crate::sdp::{SdpOptions, SdpSummary};
use crate::spectral::min_eigenvalue;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Decompose,
    Jnr,
    Sproc,
    Qcqp,
    Check,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Decompose => "decompose",
            Command::Jnr => "jnr",
            Command::Sproc => "sproc",
            Command::Qcqp => "qcqp",
            Command::Check => "check",
        }
    }
}

/// Flags shared by all subcommands. Every tolerance in the residual report
/// is derived from `tol`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RunOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub seed: u64,
    pub verify: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        Self { tol: 1e-8, max_iter: 200, seed: 0, verify: true }
    }
}

impl RunOptions {
    pub fn sdp(&self) -> SdpOptions {
        SdpOptions { gap_tol: self.tol, feas_tol: self.tol, max_iter: self.max_iter, ..SdpOptions::default() }
    }

    fn reconstruction_tol(&self) -> f64 {
        self.tol
    }

    fn equality_tol(&self) -> f64 {
        10.0 * self.tol
    }

    fn psd_tol(&self) -> f64 {
        10.0 * self.tol
    }

    fn feasibility_tol(&self) -> f64 {
        100.0 * self.tol
    }

    fn value_tol(&self) -> f64 {
        1000.0 * self.tol
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecomposeOutput {
    pub rank: usize,
    pub vectors: Vec<VectorEntry>,
    /// `A_k • X / r`.
    pub means: Vec<f64>,
    /// `x_i^H A_k x_i − A_k • X / r`, row `i`, column `k`.
    pub equality_residuals: Vec<Vec<f64>>,
    pub reconstruction_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum JnrOutput {
    Reachable { x: VectorEntry, values: Vec<f64>, sdp: Option<SdpSummary> },
    /// Best lifted residual, above the membership tolerance.
    Unreachable { residual: f64, sdp: SdpSummary },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "kebab-case")]
pub enum SprocOutput {
    Certificate { bound: f64, taus: Vec<f64>, slack: MatrixEntry, min_eig: f64, sdp: SdpSummary },
    Refuted { bound: f64, witness: VectorEntry, objective: f64, constraints: Vec<f64>, sdp: SdpSummary },
    Inconclusive { bound: f64, sdp: SdpSummary },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QcqpOutput {
    pub x_star: VectorEntry,
    pub value: f64,
    pub sdp_value: f64,
    pub recovery_index: usize,
    pub constraint_values: Vec<f64>,
    pub y0: f64,
    pub multipliers: Vec<f64>,
    pub dual_matrix: MatrixEntry,
    pub dual_min_eig: f64,
    pub complementarity: f64,
    pub lifted_complementarity: f64,
    pub sdp: SdpSummary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub hermitian: bool,
    pub psd: bool,
    pub min_eig: Option<f64>,
}

/// `prefix{first}, prefix{first+1}, ...` up to the first missing name.
fn indexed(problem: &ProblemFile, prefix: &str, first: usize, max: usize) -> Result<Vec<HermitianMatrix>> {
    let mut out = Vec::new();
    let mut k = first;
    while problem.has_matrix(&format!("{prefix}{k}")) {
        if out.len() == max {
            return Err(Error::Contract(format!("at most {max} matrices {prefix}{first}.. are supported")));
        }
        out.push(problem.hermitian(&format!("{prefix}{k}"))?);
        k += 1;
    }
    Ok(out)
}

fn require_vector(problem: &ProblemFile, name: &str) -> Result<QuaternionVector> {
    problem
        .vector(name)
        .ok_or_else(|| Error::Parse { context: format!("vectors.{name}"), message: "missing".into() })
}

fn decompose_inputs(problem: &ProblemFile) -> Result<(HermitianMatrix, Vec<HermitianMatrix>)> {
    let x = problem.hermitian("X")?;
    let a = indexed(problem, "A", 1, MAX_CONSTRAINTS)?;
    if a.is_empty() {
        return Err(Error::Parse { context: "matrices.A1".into(), message: "at least one constraint matrix is required".into() });
    }
    Ok((x, a))
}

pub fn run_decompose(problem: &ProblemFile, opts: &RunOptions) -> Result<DecomposeOutput> {
    let (x, a) = decompose_inputs(problem)?;
    let dopts = DecomposeOptions { tol: opts.equality_tol(), ..DecomposeOptions::default() };
    let dec = decompose_with(&x, &a, dopts, |_, _, _| Ok(()))?;
    Ok(DecomposeOutput {
        rank: dec.rank(),
        vectors: dec.vectors.iter().map(VectorEntry::from_vector).collect(),
        means: dec.means.clone(),
        equality_residuals: dec.equality_residuals(),
        reconstruction_error: dec.reconstruction_error(),
    })
}

fn jnr_query(problem: &ProblemFile) -> Result<JnrQuery> {
    let mats = (1..=5).map(|k| problem.hermitian(&format!("A{k}"))).collect::<Result<Vec<_>>>()?;
    let v = problem
        .reals("v")
        .ok_or_else(|| Error::Parse { context: "reals.v".into(), message: "missing".into() })?;
    let target: [f64; 5] = v
        .try_into()
        .map_err(|_| Error::Parse { context: "reals.v".into(), message: format!("expected 5 values, found {}", v.len()) })?;
    JnrQuery::new(mats, target)
}

pub fn run_jnr(problem: &ProblemFile, opts: &RunOptions) -> Result<JnrOutput> {
    let query = jnr_query(problem)?;
    Ok(match jnr_feasible_point(&query, &opts.sdp())? {
        JnrFeasibility::Infeasible { residual, sdp } => JnrOutput::Unreachable { residual, sdp },
        JnrFeasibility::Feasible { x: lifted, sdp, .. } => {
            let x = jnr_recover(&query, &lifted)?;
            JnrOutput::Reachable { values: query.values(&x).to_vec(), x: VectorEntry::from_vector(&x), sdp }
        }
    })
}

fn sproc_inputs(problem: &ProblemFile) -> Result<(HermitianMatrix, Vec<HermitianMatrix>, QuaternionVector)> {
    let a0 = problem.hermitian("A0")?;
    let n = a0.dim();
    let a = (1..=4)
        .map(|k| {
            let name = format!("A{k}");
            if problem.has_matrix(&name) { problem.hermitian(&name) } else { Ok(HermitianMatrix::zeros(n)) }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((a0, a, require_vector(problem, "x0")?))
}

pub fn run_sproc(problem: &ProblemFile, opts: &RunOptions) -> Result<SprocOutput> {
    let (a0, a, x0) = sproc_inputs(problem)?;
    Ok(match sproc_certificate(&a0, &a, &x0, opts.seed, &opts.sdp())? {
        SProcOutcome::Certificate { certificate, bound, sdp } => SprocOutput::Certificate {
            bound,
            taus: certificate.taus.to_vec(),
            slack: MatrixEntry::from_matrix(certificate.slack.as_matrix()),
            min_eig: certificate.min_eig,
            sdp,
        },
        SProcOutcome::Refuted { witness, bound, sdp } => SprocOutput::Refuted {
            bound,
            witness: VectorEntry::from_vector(&witness.x),
            objective: witness.objective,
            constraints: witness.constraints.to_vec(),
            sdp,
        },
        SProcOutcome::Inconclusive { bound, sdp } => SprocOutput::Inconclusive { bound, sdp },
    })
}

fn qcqp_problem(problem: &ProblemFile) -> Result<QcqpProblem> {
    let q = problem.hermitian("Q")?;
    let n = q.dim();
    let linear = |name: &str| problem.vector(name).unwrap_or_else(|| QuaternionVector::zeros(n));
    let objective = QuadraticForm::new(q, linear("q"), 0.0)?;
    let constraints = indexed(problem, "A", 1, MAX_CONSTRAINTS)?
        .into_iter()
        .enumerate()
        .map(|(j, a)| {
            let j = j + 1;
            QuadraticForm::new(a, linear(&format!("b{j}")), problem.scalar(&format!("c{j}")).unwrap_or(0.0))
        })
        .collect::<Result<Vec<_>>>()?;
    QcqpProblem::new(objective, constraints, problem.vector("x0"))
}

pub fn run_qcqp(problem: &ProblemFile, opts: &RunOptions) -> Result<QcqpOutput> {
    let p = qcqp_problem(problem)?;
    let s = qcqp_solve(&p, opts.seed, &opts.sdp())?;
    Ok(QcqpOutput {
        x_star: VectorEntry::from_vector(&s.x_star),
        value: s.value,
        sdp_value: s.sdp_value,
        recovery_index: s.recovery_index,
        constraint_values: s.constraint_values,
        y0: s.certificate.y0,
        multipliers: s.certificate.multipliers,
        dual_matrix: MatrixEntry::from_matrix(s.certificate.dual_matrix.as_matrix()),
        dual_min_eig: s.certificate.dual_min_eig,
        complementarity: s.certificate.complementarity,
        lifted_complementarity: s.certificate.lifted_complementarity,
        sdp: s.sdp,
    })
}

pub fn run_check(problem: &ProblemFile) -> Result<std::collections::BTreeMap<String, CheckEntry>> {
    problem
        .matrices
        .iter()
        .map(|(name, entry)| {
            let min_eig = if entry.hermitian { Some(min_eigenvalue(&problem.hermitian(name)?)?) } else { None };
            Ok((name.clone(), CheckEntry { hermitian: entry.hermitian, psd: entry.psd, min_eig }))
        })
        .collect()
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("output types serialize to JSON")
}

fn from_value<T: DeserializeOwned>(v: &serde_json::Value) -> Result<T> {
    T::deserialize(v).map_err(|e| Error::Parse { context: "outputs".into(), message: e.to_string() })
}

/// Runs `cmd` and returns its outputs as JSON.
pub fn compute_outputs(cmd: Command, problem: &ProblemFile, opts: &RunOptions) -> Result<serde_json::Value> {
    Ok(match cmd {
        Command::Decompose => to_value(&run_decompose(problem, opts)?),
        Command::Jnr => to_value(&run_jnr(problem, opts)?),
        Command::Sproc => to_value(&run_sproc(problem, opts)?),
        Command::Qcqp => to_value(&run_qcqp(problem, opts)?),
        Command::Check => to_value(&run_check(problem)?),
    })
}

fn negative_part(v: f64) -> f64 {
    (-v).max(0.0)
}

/// Recomputes every invariant of `cmd` from the problem and the outputs.
pub fn verify_outputs(cmd: Command, problem: &ProblemFile, outputs: &serde_json::Value, opts: &RunOptions) -> Result<Vec<Residual>> {
    match cmd {
        Command::Decompose => verify_decompose(problem, &from_value(outputs)?, opts),
        Command::Jnr => verify_jnr(problem, &from_value(outputs)?, opts),
        Command::Sproc => verify_sproc(problem, &from_value(outputs)?, opts),
        Command::Qcqp => verify_qcqp(problem, &from_value(outputs)?, opts),
        Command::Check => verify_check(problem, opts),
    }
}

fn verify_decompose(problem: &ProblemFile, out: &DecomposeOutput, opts: &RunOptions) -> Result<Vec<Residual>> {
    let (x, a) = decompose_inputs(problem)?;
    let vectors: Vec<QuaternionVector> = out.vectors.iter().map(VectorEntry::to_vector).collect();
    if vectors.iter().any(|v| v.len() != x.dim()) {
        return Err(Error::Dimension("output vectors do not match the problem size".into()));
    }
    let mut res = Vec::new();
    let recon = HermitianMatrix::sum_outer(x.dim(), &vectors).sub(&x).frobenius_norm();
    let scale = x.frobenius_norm();
    let rel = if scale > 0.0 { recon / scale } else { recon };
    res.push(Residual::new("reconstruction", rel, opts.reconstruction_tol()));
    let r = vectors.len().max(1) as f64;
    let lifted: Vec<f64> = a.iter().map(|ak| ak.inner(&x)).collect();
    for (i, v) in vectors.iter().enumerate() {
        for (k, ak) in a.iter().enumerate() {
            let gap = (ak.quad_form(v) - lifted[k] / r).abs() / (1.0 + lifted[k].abs());
            res.push(Residual::new(format!("equality[{i}][{k}]"), gap, opts.equality_tol()));
        }
    }
    Ok(res)
}

fn verify_jnr(problem: &ProblemFile, out: &JnrOutput, opts: &RunOptions) -> Result<Vec<Residual>> {
    let query = jnr_query(problem)?;
    let JnrOutput::Reachable { x, .. } = out else { return Ok(Vec::new()) };
    let x = x.to_vector();
    let target = query.target();
    Ok(query
        .values(&x)
        .iter()
        .zip(&target)
        .enumerate()
        .map(|(k, (got, want))| Residual::new(format!("value[{k}]"), (got - want).abs() / (1.0 + want.abs()), opts.feasibility_tol()))
        .collect())
}

fn verify_sproc(problem: &ProblemFile, out: &SprocOutput, opts: &RunOptions) -> Result<Vec<Residual>> {
    let (a0, a, _) = sproc_inputs(problem)?;
    let mut res = Vec::new();
    match out {
        SprocOutput::Certificate { taus, .. } => {
            if taus.len() != a.len() {
                return Err(Error::Dimension("expected 4 multipliers".into()));
            }
            let min_tau = taus.iter().copied().fold(f64::INFINITY, f64::min);
            res.push(Residual::new("multipliers_nonnegative", negative_part(min_tau), 0.0));
            let mut slack = a0.clone();
            for (ak, &t) in a.iter().zip(taus) {
                slack = slack.sub(&ak.scale(t));
            }
            let lam = min_eigenvalue(&slack)?;
            res.push(Residual::new("slack_psd", negative_part(lam), opts.psd_tol() * (1.0 + a0.frobenius_norm())));
        }
        SprocOutput::Refuted { witness, .. } => {
            let x = witness.to_vector();
            res.push(Residual::new("witness_objective", a0.quad_form(&x), 0.0));
            for (k, ak) in a.iter().enumerate() {
                res.push(Residual::new(format!("witness_constraint[{k}]"), -ak.quad_form(&x), 0.0));
            }
        }
        SprocOutput::Inconclusive { .. } => {}
    }
    Ok(res)
}

fn verify_qcqp(problem: &ProblemFile, out: &QcqpOutput, opts: &RunOptions) -> Result<Vec<Residual>> {
    let p = qcqp_problem(problem)?;
    let x = out.x_star.to_vector();
    if x.len() != p.dim() || out.multipliers.len() != p.constraints.len() {
        return Err(Error::Dimension("outputs do not match the problem size".into()));
    }
    let mut res = Vec::new();
    for (j, c) in p.constraints.iter().enumerate() {
        res.push(Residual::new(format!("constraint[{j}]"), c.eval(&x), opts.feasibility_tol()));
    }
    let value = p.objective_value(&x);
    res.push(Residual::new(
        "objective_gap",
        (value - out.sdp_value).abs() / (1.0 + out.sdp_value.abs()),
        opts.value_tol(),
    ));
    let min_mult = out.multipliers.iter().copied().fold(f64::INFINITY, f64::min);
    res.push(Residual::new("multipliers_nonnegative", negative_part(min_mult), 0.0));

    let bs = homogenize(&p);
    let m = p.constraints.len();
    let mut y = bs[m + 1].scale(out.y0).sub(&bs[0]);
    for (bj, &yj) in bs[1..=m].iter().zip(&out.multipliers) {
        y = y.add(&bj.scale(yj));
    }
    res.push(Residual::new("dual_psd", negative_part(min_eigenvalue(&y)?), opts.psd_tol() * (1.0 + y.frobenius_norm())));
    let lifted: QuaternionVector = std::iter::once(Quaternion::ONE).chain(x.iter().copied()).collect();
    res.push(Residual::new("lifted_complementarity", y.quad_form(&lifted).abs(), opts.feasibility_tol()));
    res.push(Residual::new(
        "dual_value_gap",
        (out.y0 - value).abs() / (1.0 + out.y0.abs()),
        opts.value_tol(),
    ));
    Ok(res)
}

fn verify_check(problem: &ProblemFile, opts: &RunOptions) -> Result<Vec<Residual>> {
    let mut res = Vec::new();
    for (name, entry) in &problem.matrices {
        if entry.psd {
            let m = problem.hermitian(name)?;
            let lam = min_eigenvalue(&m)?;
            res.push(Residual::new(format!("psd:{name}"), negative_part(lam) / (1.0 + m.frobenius_norm()), opts.tol));
        }
    }
    Ok(res)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

fn blank_result(cmd: Command, input_label: &str, digest: String, opts: &RunOptions) -> ResultFile {
    ResultFile {
        command: CommandEcho {
            subcommand: cmd.name().into(),
            input: input_label.into(),
            tol: opts.tol,
            max_iter: opts.max_iter,
            seed: opts.seed,
            verify: opts.verify,
        },
        input_sha256: digest,
        status: Status::Ok,
        message: None,
        outputs: serde_json::Value::Null,
        residuals: Vec::new(),
        timestamp: SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()),
    }
}

fn failed(mut result: ResultFile, e: &Error) -> ResultFile {
    result.status = Status::from_error(e);
    result.message = Some(e.to_string());
    result
}

/// Full run on raw input bytes. Bad input never panics; failures are
/// reported through the result status.
pub fn execute_bytes(cmd: Command, input_label: &str, bytes: &[u8], opts: &RunOptions) -> ResultFile {
    let mut result = blank_result(cmd, input_label, sha256_hex(bytes), opts);
    let problem = match std::str::from_utf8(bytes)
        .map_err(|e| Error::Parse { context: "input".into(), message: e.to_string() })
        .and_then(parse_problem_str)
    {
        Ok(p) => p,
        Err(e) => return failed(result, &e),
    };
    result.outputs = match compute_outputs(cmd, &problem, opts) {
        Ok(v) => v,
        Err(e) => return failed(result, &e),
    };
    if opts.verify || cmd == Command::Check {
        match verify_outputs(cmd, &problem, &result.outputs, opts) {
            Ok(r) => result.residuals = r,
            Err(e) => {
                result.status = Status::VerificationFailure;
                result.message = Some(format!("verification could not run: {e}"));
                return result;
            }
        }
    }
    if let Some(bad) = result.residuals.iter().find(|r| !r.ok) {
        result.status = Status::VerificationFailure;
        result.message = Some(format!("{} = {:e} exceeds {:e}", bad.name, bad.value, bad.tolerance));
    }
    result
}

/// [`execute_bytes`] on a file.
pub fn execute(cmd: Command, input: &Path, opts: &RunOptions) -> ResultFile {
    let label = input.display().to_string();
    match std::fs::read(input) {
        Ok(bytes) => execute_bytes(cmd, &label, &bytes, opts),
        Err(e) => failed(blank_result(cmd, &label, String::new(), opts), &Error::Io(format!("{label}: {e}"))),
    }
}
