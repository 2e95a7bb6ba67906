//! Multiplier certificates for the implication
//! `x^H A_k x ≥ 0 (k = 1..4)  ⇒  x^H A₀ x ≥ 0`.
//!
//! The largest `t` with `A₀ − Σ τ_k A_k − t·I ⪰ 0`, `τ ≥ 0` is computed by an
//! SDP. A nonnegative optimum yields multipliers; a negative one means the
//! implication fails, and a witness vector is constructed from the primal
//! solution.

use crate::applications::jnr::{jnr_recover, JnrQuery};
use crate::error::{Error, Result};
use crate::matrix::{HermitianMatrix, QuaternionVector};
use crate::random;
use crate::sdp::{
    embed_hermitian, project_first_block, solve_sdp, SdpBuilder, SdpOptions, SdpSummary, Sense,
};
use crate::spectral::min_eigenvalue;

/// Number of constraint forms.
pub const SPROC_SIZE: usize = 4;

/// Margin below which the optimal `t` counts as nonnegative.
pub const CERTIFICATE_TOL: f64 = 1e-7;

/// Random directions tried when the constructive witness fails.
pub const WITNESS_SAMPLES: usize = 10_000;

/// `τ ≥ 0` with `A₀ − Σ τ_k A_k ⪰ 0`.
#[derive(Debug, Clone)]
pub struct SProcCertificate {
    pub taus: [f64; SPROC_SIZE],
    pub slack: HermitianMatrix,
    pub min_eig: f64,
}

impl SProcCertificate {
    /// Recomputes the slack from the multipliers.
    pub fn from_taus(a0: &HermitianMatrix, a: &[HermitianMatrix], taus: [f64; SPROC_SIZE]) -> Result<Self> {
        let mut slack = a0.clone();
        for (ak, &t) in a.iter().zip(&taus) {
            slack = slack.sub(&ak.scale(t));
        }
        let min_eig = min_eigenvalue(&slack)?;
        Ok(Self { taus, slack, min_eig })
    }

    /// `min_eig ≥ −CERTIFICATE_TOL·(1 + ‖A₀‖_F)` and all `τ_k ≥ 0`.
    pub fn is_valid(&self, a0: &HermitianMatrix) -> bool {
        self.taus.iter().all(|&t| t >= 0.0) && self.min_eig >= -CERTIFICATE_TOL * (1.0 + a0.frobenius_norm())
    }
}

/// Vector with every `G_k(x) ≥ 0` and `F(x) < 0`.
#[derive(Debug, Clone)]
pub struct SProcWitness {
    pub x: QuaternionVector,
    pub objective: f64,
    pub constraints: [f64; SPROC_SIZE],
}

#[derive(Debug, Clone)]
pub enum SProcOutcome {
    Certificate { certificate: SProcCertificate, bound: f64, sdp: SdpSummary },
    Refuted { witness: SProcWitness, bound: f64, sdp: SdpSummary },
    /// The SDP bound is negative but no witness was found.
    Inconclusive { bound: f64, sdp: SdpSummary },
}

impl SProcOutcome {
    pub fn certificate(&self) -> Option<&SProcCertificate> {
        match self {
            SProcOutcome::Certificate { certificate, .. } => Some(certificate),
            _ => None,
        }
    }

    pub fn bound(&self) -> f64 {
        match self {
            SProcOutcome::Certificate { bound, .. }
            | SProcOutcome::Refuted { bound, .. }
            | SProcOutcome::Inconclusive { bound, .. } => *bound,
        }
    }

    pub fn sdp(&self) -> &SdpSummary {
        match self {
            SProcOutcome::Certificate { sdp, .. } | SProcOutcome::Refuted { sdp, .. } | SProcOutcome::Inconclusive { sdp, .. } => {
                sdp
            }
        }
    }
}

fn is_zero(m: &HermitianMatrix) -> bool {
    m.as_matrix().max_abs() == 0.0
}

/// Certifies or refutes the implication for `A₀` against `a[0..4]`.
///
/// `x0` must satisfy `x0^H A_k x0 > 0` for every nonzero `A_k`; zero matrices
/// impose no condition and receive multiplier 0. `seed` drives the fallback
/// witness search.
pub fn sproc_certificate(
    a0: &HermitianMatrix,
    a: &[HermitianMatrix],
    x0: &QuaternionVector,
    seed: u64,
    opts: &SdpOptions,
) -> Result<SProcOutcome> {
    if a.len() != SPROC_SIZE {
        return Err(Error::Dimension(format!("expected {SPROC_SIZE} constraint forms, got {}", a.len())));
    }
    let n = a0.dim();
    if a.iter().any(|m| m.dim() != n) || x0.len() != n {
        return Err(Error::Dimension("forms and x0 differ in size".into()));
    }
    for (k, ak) in a.iter().enumerate() {
        if !is_zero(ak) && !(ak.quad_form(x0) > 0.0) {
            return Err(Error::Domain(format!("x0 is not strictly feasible for constraint {}", k + 1)));
        }
    }
    let active: Vec<usize> = (0..SPROC_SIZE).filter(|&k| !is_zero(&a[k])).collect();

    // min A₀•X  s.t.  A_k•X ≥ 0,  I•X = 1;  its dual is the bound problem
    let mut builder = SdpBuilder::new(embed_hermitian(a0), false);
    for &k in &active {
        builder.push(embed_hermitian(&a[k]), Sense::GreaterEqual, 0.0);
    }
    builder.push(embed_hermitian(&HermitianMatrix::identity(n)), Sense::Equal, 1.0);
    let sol = solve_sdp(&builder.build(), opts)?;
    if !sol.is_converged() {
        return Err(Error::Numerical(format!("bound SDP stopped with status {:?}", sol.status)));
    }
    let bound = *sol.y.last().expect("trace constraint");
    let sdp = sol.summary();

    if bound >= -CERTIFICATE_TOL {
        let mut taus = [0.0; SPROC_SIZE];
        for (i, &k) in active.iter().enumerate() {
            taus[k] = sol.y[i].max(0.0);
        }
        let certificate = SProcCertificate::from_taus(a0, a, taus)?;
        if certificate.is_valid(a0) {
            return Ok(SProcOutcome::Certificate { certificate, bound, sdp });
        }
    }

    let lifted = project_first_block(&sol.x)?;
    let witness = lifted_witness(a0, a, x0, &lifted).or_else(|| sampled_witness(a0, a, seed));
    Ok(match witness {
        Some(witness) => SProcOutcome::Refuted { witness, bound, sdp },
        None => SProcOutcome::Inconclusive { bound, sdp },
    })
}

fn evaluate(a0: &HermitianMatrix, a: &[HermitianMatrix], x: &QuaternionVector) -> Option<SProcWitness> {
    let objective = a0.quad_form(x);
    let constraints: [f64; SPROC_SIZE] = std::array::from_fn(|k| a[k].quad_form(x));
    (objective < 0.0 && constraints.iter().all(|&g| g >= 0.0)).then(|| SProcWitness {
        x: x.clone(),
        objective,
        constraints,
    })
}

/// Mixes the primal solution with `x0 x0^H` so every constraint is strictly
/// positive while `A₀ • X` stays negative, then collapses to one vector.
fn lifted_witness(
    a0: &HermitianMatrix,
    a: &[HermitianMatrix],
    x0: &QuaternionVector,
    lifted: &HermitianMatrix,
) -> Option<SProcWitness> {
    let n = a0.dim();
    let f_lift = a0.inner(lifted);
    if !(f_lift < 0.0) {
        return None;
    }
    let unit = x0.scale(1.0 / x0.norm());
    let f0 = a0.quad_form(&unit);
    let s = if f0 <= f_lift { 0.5 } else { (0.5 * (-f_lift) / (f0 - f_lift)).min(0.5) };
    let mixed = lifted.scale(1.0 - s).add(&HermitianMatrix::sum_outer(n, &[unit.scale(s.sqrt())]));
    let mut mats = vec![a0.clone()];
    mats.extend(a.iter().cloned());
    let target = std::array::from_fn(|k| mats[k].inner(&mixed));
    let query = JnrQuery::new(mats, target).ok()?;
    let x = jnr_recover(&query, &mixed).ok()?;
    evaluate(a0, a, &x)
}

fn sampled_witness(a0: &HermitianMatrix, a: &[HermitianMatrix], seed: u64) -> Option<SProcWitness> {
    let n = a0.dim();
    let coordinates = (0..n).map(|i| QuaternionVector::basis(n, i));
    if let Some(w) = coordinates.filter_map(|x| evaluate(a0, a, &x)).next() {
        return Some(w);
    }
    let mut rng = random::rng_from_seed(seed);
    (0..WITNESS_SAMPLES).find_map(|_| {
        let x = random::unit_vector(&mut rng, n);
        evaluate(a0, a, &x)
    })
}
