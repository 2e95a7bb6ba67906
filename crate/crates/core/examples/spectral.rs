//! Eigendecomposition of a random quaternion Hermitian matrix.

use quatdecomp::matrix::HermitianMatrix;
use quatdecomp::random;
use quatdecomp::spectral::{eig_hermitian, numerical_rank, psd_factorize};

fn main() -> quatdecomp::error::Result<()> {
    let mut rng = random::rng_from_seed(1);
    let h = random::hermitian(&mut rng, 5);
    let eig = eig_hermitian(&h)?;
    println!("eigenvalues: {:?}", eig.eigenvalues.iter().map(|l| format!("{l:.6}")).collect::<Vec<_>>());
    println!("4-fold cluster spread of the real embedding: {:.2e}", eig.cluster_spread);

    // each pair satisfies H u = u λ
    let worst = eig
        .eigenvectors
        .iter()
        .zip(&eig.eigenvalues)
        .map(|(u, &l)| {
            let hu = h.as_matrix().mul_vec(u).expect("shapes agree");
            let mut r = hu;
            r.axpy_right(u, (-l).into());
            r.norm()
        })
        .fold(0.0, f64::max);
    println!("max ‖Hu − uλ‖ = {worst:.2e}");

    let x = random::psd(&mut rng, 6, 3);
    let eig = eig_hermitian(&x)?;
    println!("rank of a rank-3 PSD matrix: {}", numerical_rank(&eig.eigenvalues, 1e-10));
    let factors = psd_factorize(&x, 1e-10)?;
    let err = HermitianMatrix::sum_outer(6, &factors).sub(&x).frobenius_norm();
    println!("‖X − Σ vvᴴ‖_F over {} factors = {err:.2e}", factors.len());
    Ok(())
}
