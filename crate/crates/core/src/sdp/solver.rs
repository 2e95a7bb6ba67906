//! Infeasible-start primal-dual path-following solver.
//!
//! Internally every problem is the minimization
//!
//! ```text
//! min C•X  s.t.  A_i•X = b_i,  X ⪰ 0        max bᵀy  s.t.  Σ y_i A_i + Z = C,  Z ⪰ 0
//! ```
//!
//! The search direction linearizes the symmetrized centrality condition
//! `(XZ + ZX)/2 = μI`. With `L_M(V) = (MV + VM)/2` the Newton system reduces
//! to a (nonsymmetric) Schur complement `M_ij = A_i • L_Z⁻¹(L_X(A_j))`; the
//! Lyapunov inverse `L_Z⁻¹` is applied in the eigenbasis of `Z`. Each
//! iteration takes a Mehrotra predictor and a corrector step.

use nalgebra::{DMatrix, DVector};

use super::block::{Block, BlockMatrix};
use super::{SdpOptions, SdpProblem, SdpSolution, SdpStatus};

/// Eigenbasis of one block of `Z`, or its entries for a scalar block.
enum ZFactor {
    Dense { q: DMatrix<f64>, lam: DVector<f64> },
    Diag(DVector<f64>),
}

fn factor_z(z: &BlockMatrix) -> Option<Vec<ZFactor>> {
    z.blocks
        .iter()
        .map(|b| match b {
            Block::Dense(m) => {
                let eig = m.clone().symmetric_eigen();
                if eig.eigenvalues.iter().any(|&l| !(l > 0.0)) {
                    return None;
                }
                Some(ZFactor::Dense { q: eig.eigenvectors, lam: eig.eigenvalues })
            }
            Block::Diag(v) => {
                if v.iter().any(|&l| !(l > 0.0)) {
                    return None;
                }
                Some(ZFactor::Diag(v.clone()))
            }
        })
        .collect()
}

/// `(XW + WX) / 2`, blockwise.
fn sym_prod(x: &BlockMatrix, w: &BlockMatrix) -> BlockMatrix {
    BlockMatrix::new(
        x.blocks
            .iter()
            .zip(&w.blocks)
            .map(|(xb, wb)| match (xb, wb) {
                (Block::Dense(x), Block::Dense(w)) => {
                    let xw = x * w;
                    let t = xw.transpose();
                    Block::Dense((xw + t) * 0.5)
                }
                (Block::Diag(x), Block::Diag(w)) => Block::Diag(x.component_mul(w)),
                _ => panic!("block kind mismatch"),
            })
            .collect(),
    )
}

/// Solves `(ZV + VZ)/2 = W` for `V`.
fn lyap_solve(zf: &[ZFactor], w: &BlockMatrix) -> BlockMatrix {
    BlockMatrix::new(
        zf.iter()
            .zip(&w.blocks)
            .map(|(f, wb)| match (f, wb) {
                (ZFactor::Dense { q, lam }, Block::Dense(w)) => {
                    let mut t = q.transpose() * w * q;
                    let s = lam.len();
                    for j in 0..s {
                        for i in 0..s {
                            t[(i, j)] *= 2.0 / (lam[i] + lam[j]);
                        }
                    }
                    let v = q * t * q.transpose();
                    let vt = v.transpose();
                    Block::Dense((v + vt) * 0.5)
                }
                (ZFactor::Diag(z), Block::Diag(w)) => Block::Diag(w.component_div(z)),
                _ => panic!("block kind mismatch"),
            })
            .collect(),
    )
}

/// Largest `α` with `X + α·ΔX ⪰ 0` (infinite when `ΔX ⪰ 0`); `None` if `X`
/// is not numerically positive definite.
fn max_step(x: &BlockMatrix, dx: &BlockMatrix) -> Option<f64> {
    let mut alpha = f64::INFINITY;
    for (xb, db) in x.blocks.iter().zip(&dx.blocks) {
        match (xb, db) {
            (Block::Dense(x), Block::Dense(d)) => {
                if x.nrows() == 0 {
                    continue;
                }
                let l = x.clone().cholesky()?.unpack();
                let t = l.solve_lower_triangular(d)?;
                let s = l.solve_lower_triangular(&t.transpose())?;
                let s = (&s + s.transpose()) * 0.5;
                let lmin = s.symmetric_eigenvalues().min();
                if lmin < 0.0 {
                    alpha = alpha.min(-1.0 / lmin);
                }
            }
            (Block::Diag(x), Block::Diag(d)) => {
                for (xi, di) in x.iter().zip(d.iter()) {
                    if *xi <= 0.0 {
                        return None;
                    }
                    if *di < 0.0 {
                        alpha = alpha.min(-xi / di);
                    }
                }
            }
            _ => panic!("block kind mismatch"),
        }
    }
    Some(alpha)
}

struct Residuals {
    rp: DVector<f64>,
    rd: BlockMatrix,
    pobj: f64,
    dobj: f64,
    rel_gap: f64,
    rel_compl: f64,
    pres: f64,
    dres: f64,
}

impl Residuals {
    fn merit(&self) -> f64 {
        self.rel_gap.max(self.rel_compl).max(self.pres).max(self.dres)
    }
}

/// Standard-form data after sign normalization and presolve.
struct Internal<'a> {
    c: BlockMatrix,
    a: Vec<&'a BlockMatrix>,
    b: DVector<f64>,
    /// Index into the original constraint list for each kept row.
    rows: Vec<usize>,
    b_norm: f64,
    c_norm: f64,
}

impl Internal<'_> {
    fn apply_a(&self, x: &BlockMatrix) -> DVector<f64> {
        DVector::from_iterator(self.a.len(), self.a.iter().map(|ai| ai.inner(x)))
    }

    fn apply_at(&self, y: &DVector<f64>) -> BlockMatrix {
        let mut out = BlockMatrix::zeros(&self.c.kinds());
        for (ai, &yi) in self.a.iter().zip(y.iter()) {
            out.axpy(yi, ai);
        }
        out
    }

    fn residuals(&self, x: &BlockMatrix, y: &DVector<f64>, z: &BlockMatrix) -> Residuals {
        let rp = &self.b - self.apply_a(x);
        let mut rd = self.c.clone();
        rd.axpy(-1.0, &self.apply_at(y));
        rd.axpy(-1.0, z);
        let pobj = self.c.inner(x);
        let dobj = self.b.dot(y);
        let denom = 1.0 + pobj.abs() + dobj.abs();
        Residuals {
            pres: rp.norm() / (1.0 + self.b_norm),
            dres: rd.norm() / (1.0 + self.c_norm),
            rel_gap: (pobj - dobj).abs() / denom,
            rel_compl: x.inner(z).abs() / denom,
            rp,
            rd,
            pobj,
            dobj,
        }
    }
}

/// Drops constraints whose matrix is a linear combination of earlier ones
/// and whose right-hand side agrees with that combination. Inconsistent
/// duplicates are kept so the solver reports the infeasibility.
fn independent_rows(constraints: &[(&BlockMatrix, f64)]) -> Vec<usize> {
    // modified Gram–Schmidt with coefficient tracking: q_k = Σ_j coef[k][j] A_j
    let m = constraints.len();
    let mut basis: Vec<(BlockMatrix, Vec<f64>)> = Vec::new();
    let mut keep = Vec::new();
    for (i, (ai, bi)) in constraints.iter().enumerate() {
        let norm_i = ai.norm();
        let mut r = (*ai).clone();
        let mut coef = vec![0.0; m];
        coef[i] = 1.0;
        for (q, qc) in &basis {
            let proj = q.inner(&r);
            r.axpy(-proj, q);
            for (c, qcj) in coef.iter_mut().zip(qc) {
                *c -= proj * qcj;
            }
        }
        let rn = r.norm();
        if rn > 1e-10 * norm_i.max(1e-300) && norm_i > 0.0 {
            let inv = 1.0 / rn;
            basis.push((r.scaled(inv), coef.iter().map(|c| c * inv).collect()));
            keep.push(i);
        } else {
            // A_i ≈ Σ_{j≠i} (−coef_j) A_j, so consistency needs b_i ≈ Σ (−coef_j) b_j
            let implied: f64 = constraints
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .map(|(j, (_, bj))| -coef[j] * bj)
                .sum();
            let scale = 1.0 + bi.abs() + implied.abs();
            if (bi - implied).abs() > 1e-9 * scale {
                keep.push(i);
            }
        }
    }
    keep
}

pub(super) fn solve(problem: &SdpProblem, opts: &SdpOptions) -> SdpSolution {
    let kinds = problem.blocks.clone();
    let sign = if problem.maximize { -1.0 } else { 1.0 };
    let c = problem.objective.scaled(sign);

    let all: Vec<(&BlockMatrix, f64)> = problem.constraints.iter().map(|k| (&k.a, k.b)).collect();
    let rows = independent_rows(&all);
    let a: Vec<&BlockMatrix> = rows.iter().map(|&i| &problem.constraints[i].a).collect();
    let b = DVector::from_iterator(rows.len(), rows.iter().map(|&i| problem.constraints[i].b));
    let data = Internal { b_norm: b.norm(), c_norm: c.norm(), c, a, b, rows };
    let m = data.a.len();
    let dim: usize = kinds.iter().map(|k| k.size()).sum();

    let max_b = data.b.iter().fold(0.0f64, |acc, v| acc.max(v.abs()));
    let max_a = data.a.iter().map(|ai| ai.norm()).fold(0.0f64, f64::max);
    let xi = 1.0 + max_b + max_a;
    let mut x = BlockMatrix::identity(&kinds).scaled(xi);
    let mut z = BlockMatrix::identity(&kinds).scaled(xi);
    let mut y = DVector::zeros(m);
    let blowup = 1e12 * (xi + data.c_norm);

    let mut best: Option<(f64, BlockMatrix, DVector<f64>, BlockMatrix)> = None;
    let mut status = SdpStatus::MaxIterations;
    let mut iterations = 0;

    for iter in 0..=opts.max_iter {
        let res = data.residuals(&x, &y, &z);
        let merit = res.merit();
        if best.as_ref().is_none_or(|(bm, ..)| merit < *bm) {
            best = Some((merit, x.clone(), y.clone(), z.clone()));
        }
        if res.rel_gap.max(res.rel_compl) <= opts.gap_tol && res.pres <= opts.feas_tol && res.dres <= opts.feas_tol {
            status = SdpStatus::Converged;
            iterations = iter;
            break;
        }
        if iter == opts.max_iter {
            iterations = iter;
            break;
        }
        if !x.is_finite() || !z.is_finite() || x.norm() > blowup || y.norm() > blowup || z.norm() > blowup {
            status = SdpStatus::NumericalFailure;
            iterations = iter;
            break;
        }

        match safeguarded_step(&data, &x, &z, &res, dim, opts) {
            Some((dx, dy, dz, ap, ad)) => {
                x.axpy(ap, &dx);
                y.axpy(ad, &dy, 1.0);
                z.axpy(ad, &dz);
                x.symmetrize();
                z.symmetrize();
                if ap.max(ad) < 1e-12 {
                    status = SdpStatus::NumericalFailure;
                    iterations = iter + 1;
                    break;
                }
            }
            None => {
                status = SdpStatus::NumericalFailure;
                iterations = iter;
                break;
            }
        }
    }

    if status != SdpStatus::Converged {
        if let Some((_, bx, by, bz)) = best {
            x = bx;
            y = by;
            z = bz;
        }
    }
    let res = data.residuals(&x, &y, &z);

    // map back to the user's constraint indexing and sign convention
    let mut y_full = vec![0.0; problem.constraints.len()];
    for (&row, &v) in data.rows.iter().zip(y.iter()) {
        y_full[row] = sign * v;
    }
    SdpSolution {
        primal_objective: sign * res.pobj,
        dual_objective: sign * res.dobj,
        gap: res.rel_gap,
        complementarity: x.inner(&z),
        primal_residual: res.pres,
        dual_residual: res.dres,
        x,
        y: y_full,
        z,
        status,
        iterations,
    }
}

type Step = (BlockMatrix, DVector<f64>, BlockMatrix, f64, f64);

/// Linearization of the centrality condition.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
enum Scheme {
    /// `(XZ + ZX)/2 = μI`.
    Aho,
    /// `XZ = μI` with `ΔX` symmetrized; always well defined, used when the
    /// AHO step is short.
    Hkm,
}

/// `sym(A·B·C)`, blockwise.
fn sym_triple(a: &BlockMatrix, b: &BlockMatrix, c: &BlockMatrix) -> BlockMatrix {
    BlockMatrix::new(
        a.blocks
            .iter()
            .zip(&b.blocks)
            .zip(&c.blocks)
            .map(|((a, b), c)| match (a, b, c) {
                (Block::Dense(a), Block::Dense(b), Block::Dense(c)) => {
                    let p = a * b * c;
                    let t = p.transpose();
                    Block::Dense((p + t) * 0.5)
                }
                (Block::Diag(a), Block::Diag(b), Block::Diag(c)) => Block::Diag(a.component_mul(b).component_mul(c)),
                _ => panic!("block kind mismatch"),
            })
            .collect(),
    )
}

fn z_inverse(zf: &[ZFactor]) -> BlockMatrix {
    BlockMatrix::new(
        zf.iter()
            .map(|f| match f {
                ZFactor::Dense { q, lam } => {
                    let d = DMatrix::from_diagonal(&lam.map(|l| 1.0 / l));
                    Block::Dense(q * d * q.transpose())
                }
                ZFactor::Diag(z) => Block::Diag(z.map(|l| 1.0 / l)),
            })
            .collect(),
    )
}

fn newton_step(
    data: &Internal<'_>,
    x: &BlockMatrix,
    z: &BlockMatrix,
    res: &Residuals,
    dim: usize,
    opts: &SdpOptions,
    scheme: Scheme,
) -> Option<Step> {
    let m = data.a.len();
    let zf = factor_z(z)?;
    let zinv = z_inverse(&zf);
    let kinds = x.kinds();
    // ΔX = W₀ + Σ Δy_j G_j; the Schur complement is M_ij = A_i • G_j
    let g: Vec<BlockMatrix> = match scheme {
        Scheme::Aho => data.a.iter().map(|aj| lyap_solve(&zf, &sym_prod(x, aj))).collect(),
        Scheme::Hkm => data.a.iter().map(|aj| sym_triple(x, aj, &zinv)).collect(),
    };
    let schur = DMatrix::from_fn(m, m, |i, j| data.a[i].inner(&g[j]));
    let lu = schur.lu();
    if m > 0 && !lu.is_invertible() {
        return None;
    }
    let mu = x.inner(z) / dim as f64;

    // W₀ for target σμ and optional second-order correction
    let base = |sigma_mu: f64, corr: Option<(&BlockMatrix, &BlockMatrix)>| -> BlockMatrix {
        match scheme {
            Scheme::Aho => {
                let mut t = BlockMatrix::identity(&kinds).scaled(sigma_mu);
                t.axpy(-1.0, &sym_prod(x, z));
                if let Some((dxa, dza)) = corr {
                    t.axpy(-1.0, &sym_prod(dxa, dza));
                }
                t.axpy(-1.0, &sym_prod(x, &res.rd));
                lyap_solve(&zf, &t)
            }
            Scheme::Hkm => {
                let mut w = zinv.scaled(sigma_mu);
                w.axpy(-1.0, x);
                if let Some((dxa, dza)) = corr {
                    w.axpy(-1.0, &sym_triple(dxa, dza, &zinv));
                }
                w.axpy(-1.0, &sym_triple(x, &res.rd, &zinv));
                w
            }
        }
    };
    let direction = |w0: BlockMatrix| -> Option<(BlockMatrix, DVector<f64>, BlockMatrix)> {
        let rhs = DVector::from_iterator(m, (0..m).map(|i| res.rp[i] - data.a[i].inner(&w0)));
        let dy = if m > 0 { lu.solve(&rhs)? } else { DVector::zeros(0) };
        if dy.iter().any(|v| !v.is_finite()) {
            return None;
        }
        let mut dx = w0;
        for (gj, &d) in g.iter().zip(dy.iter()) {
            dx.axpy(d, gj);
        }
        dx.symmetrize();
        let mut dz = res.rd.clone();
        dz.axpy(-1.0, &data.apply_at(&dy));
        Some((dx, dy, dz))
    };

    // predictor: σ = 0
    let (dxa, _, dza) = direction(base(0.0, None))?;
    let ap_aff = max_step(x, &dxa)?.min(1.0);
    let ad_aff = max_step(z, &dza)?.min(1.0);
    let mut xa = x.clone();
    xa.axpy(ap_aff, &dxa);
    let mut za = z.clone();
    za.axpy(ad_aff, &dza);
    let mu_aff = xa.inner(&za) / dim as f64;
    // short affine steps signal poor centrality: center harder and skip the
    // second-order term, which is unreliable there
    let short = ap_aff.min(ad_aff);
    let expon = (3.0 * short * short).max(1.0);
    let sigma = if mu > 0.0 { (mu_aff / mu).clamp(0.0, 1.0).powf(expon) } else { 0.0 };

    // corrector
    let corr = (short > 0.1).then_some((&dxa, &dza));
    let (dx, dy, dz) = direction(base(sigma * mu, corr))?;
    let ap = (opts.step_fraction * max_step(x, &dx)?).min(1.0);
    let ad = (opts.step_fraction * max_step(z, &dz)?).min(1.0);
    Some((dx, dy, dz, ap, ad))
}

/// AHO step, replaced by the HKM step when that one goes further.
fn safeguarded_step(
    data: &Internal<'_>,
    x: &BlockMatrix,
    z: &BlockMatrix,
    res: &Residuals,
    dim: usize,
    opts: &SdpOptions,
) -> Option<Step> {
    const SHORT_STEP: f64 = 0.1;
    let aho = newton_step(data, x, z, res, dim, opts, Scheme::Aho);
    if let Some(step) = &aho {
        if step.3.min(step.4) >= SHORT_STEP {
            return aho;
        }
    }
    let hkm = newton_step(data, x, z, res, dim, opts, Scheme::Hkm);
    match (aho, hkm) {
        (Some(a), Some(h)) => Some(if h.3.min(h.4) > a.3.min(a.4) { h } else { a }),
        (a, h) => a.or(h),
    }
}
