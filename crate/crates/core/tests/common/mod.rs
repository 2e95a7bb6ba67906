//! Reference arithmetic for integration tests, written against plain
//! `[f64; 4]` components so it shares no code with the library.
#![allow(dead_code)]

use nalgebra::DMatrix;
use quatdecomp::random;
use quatdecomp::sdp::{embed_hermitian, SdpBuilder, SdpProblem, Sense};
use rand::Rng;
use quatdecomp::matrix::{HermitianMatrix, QuaternionMatrix, QuaternionVector};
use quatdecomp::quaternion::Quaternion;

pub type Q = [f64; 4];
pub type Grid = Vec<Vec<Q>>;

pub fn q(x: Quaternion) -> Q {
    [x.a, x.b, x.c, x.d]
}

pub fn mul(p: Q, r: Q) -> Q {
    let [a1, b1, c1, d1] = p;
    let [a2, b2, c2, d2] = r;
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

pub fn conj(p: Q) -> Q {
    [p[0], -p[1], -p[2], -p[3]]
}

pub fn add(p: Q, r: Q) -> Q {
    [p[0] + r[0], p[1] + r[1], p[2] + r[2], p[3] + r[3]]
}

pub fn norm(p: Q) -> f64 {
    p.iter().map(|v| v * v).sum::<f64>().sqrt()
}

pub fn grid(m: &QuaternionMatrix) -> Grid {
    let (rows, cols) = m.shape();
    (0..rows).map(|i| (0..cols).map(|j| q(m[(i, j)])).collect()).collect()
}

pub fn hgrid(m: &HermitianMatrix) -> Grid {
    grid(m.as_matrix())
}

pub fn vec(x: &QuaternionVector) -> Vec<Q> {
    x.iter().map(|&e| q(e)).collect()
}

/// `Re Σ conj(x_i) A_ij x_j`.
pub fn quad(a: &Grid, x: &[Q]) -> f64 {
    let mut s = 0.0;
    for (i, row) in a.iter().enumerate() {
        for (j, &aij) in row.iter().enumerate() {
            s += mul(conj(x[i]), mul(aij, x[j]))[0];
        }
    }
    s
}

/// `Re tr(A^H B)`.
pub fn inner(a: &Grid, b: &Grid) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).map(|(&x, &y)| mul(conj(x), y)[0]))
        .sum()
}

/// `Σ x x^H`.
pub fn outer_sum(n: usize, xs: &[Vec<Q>]) -> Grid {
    let mut out = vec![vec![[0.0; 4]; n]; n];
    for x in xs {
        for i in 0..n {
            for j in 0..n {
                out[i][j] = add(out[i][j], mul(x[i], conj(x[j])));
            }
        }
    }
    out
}

pub fn frob_diff(a: &Grid, b: &Grid) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(ra, rb)| ra.iter().zip(rb).flat_map(|(x, y)| x.iter().zip(y).map(|(u, v)| (u - v) * (u - v))))
        .sum::<f64>()
        .sqrt()
}

pub fn frob(a: &Grid) -> f64 {
    a.iter().flatten().flatten().map(|v| v * v).sum::<f64>().sqrt()
}

/// Left-multiplication real matrix of a quaternion matrix.
pub fn embed(a: &Grid) -> DMatrix<f64> {
    let n = a.len();
    let mut out = DMatrix::zeros(4 * n, 4 * n);
    for (i, row) in a.iter().enumerate() {
        for (j, &[w, x, y, z]) in row.iter().enumerate() {
            let block = [[w, -x, -y, -z], [x, w, -z, y], [y, z, w, -x], [z, -y, x, w]];
            for r in 0..4 {
                for c in 0..4 {
                    out[(4 * i + r, 4 * j + c)] = block[r][c];
                }
            }
        }
    }
    out
}

/// Eigenvalues of a Hermitian grid via its real embedding, ascending, each
/// repeated four times.
pub fn embedded_eigenvalues(a: &Grid) -> Vec<f64> {
    let mut e: Vec<f64> = embed(a).symmetric_eigenvalues().iter().copied().collect();
    e.sort_by(f64::total_cmp);
    e
}

pub fn min_eig(a: &Grid) -> f64 {
    embedded_eigenvalues(a)[0]
}

pub fn sub(a: &Grid, b: &Grid) -> Grid {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| [x[0] - y[0], x[1] - y[1], x[2] - y[2], x[3] - y[3]]).collect())
        .collect()
}

pub fn scale(a: &Grid, s: f64) -> Grid {
    a.iter().map(|r| r.iter().map(|x| [x[0] * s, x[1] * s, x[2] * s, x[3] * s]).collect()).collect()
}

/// Strictly feasible equality SDP with known interior primal and dual points.
pub fn random_sdp_instance(rng: &mut impl Rng, n: usize, m: usize, maximize: bool) -> SdpProblem {
    let x0 = random::psd(rng, n, n).add(&HermitianMatrix::identity(n));
    let z0 = random::psd(rng, n, n).add(&HermitianMatrix::identity(n));
    let mut c = z0.clone();
    let mut rows = Vec::new();
    for _ in 0..m {
        let a = random::hermitian(rng, n);
        let y0: f64 = rng.random_range(-1.0..1.0);
        c = c.add(&a.scale(y0));
        rows.push((a.inner(&x0), a));
    }
    let objective = if maximize { c.scale(-1.0) } else { c };
    let mut b = SdpBuilder::new(embed_hermitian(&objective), maximize);
    for (rhs, a) in rows {
        b.push(embed_hermitian(&a), Sense::Equal, rhs);
    }
    b.build()
}
