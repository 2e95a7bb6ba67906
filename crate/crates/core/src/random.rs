//! Seeded generators for random quaternion instances.
//!
//! All generators draw independent standard normal components, so the
//! distributions are invariant under quaternion unitary congruence.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{HermitianMatrix, QuaternionMatrix, QuaternionVector};
use crate::quaternion::Quaternion;
use crate::spectral::eig_hermitian;

/// Deterministic RNG used throughout the crate.
pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn quaternion<R: Rng + ?Sized>(rng: &mut R) -> Quaternion {
    Quaternion::new(
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
        rng.sample(StandardNormal),
    )
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QuaternionVector {
    (0..n).map(|_| quaternion(rng)).collect()
}

/// Vector drawn uniformly from the unit sphere of `Hⁿ ≅ R⁴ⁿ`.
pub fn unit_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QuaternionVector {
    loop {
        let v = vector(rng, n);
        let norm = v.norm();
        if norm > 1e-12 {
            return v.scale(1.0 / norm);
        }
    }
}

pub fn matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> QuaternionMatrix {
    QuaternionMatrix::from_fn(rows, cols, |_, _| quaternion(rng))
}

/// Hermitian part of a Gaussian matrix.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> HermitianMatrix {
    HermitianMatrix::from_hermitian_part(&matrix(rng, n, n))
}

/// `Σ gᵢgᵢᴴ` over `rank` Gaussian vectors; rank `min(rank, n)` almost surely.
pub fn psd<R: Rng + ?Sized>(rng: &mut R, n: usize, rank: usize) -> HermitianMatrix {
    let gs: Vec<_> = (0..rank).map(|_| vector(rng, n)).collect();
    HermitianMatrix::sum_outer(n, &gs)
}

/// Random quaternion unitary matrix, taken from the eigenvectors of a
/// random Hermitian matrix.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> QuaternionMatrix {
    let eig = eig_hermitian(&hermitian(rng, n)).expect("eigensolver on a random Hermitian matrix");
    QuaternionMatrix::from_fn(n, n, |i, j| eig.eigenvectors[j][i])
}
