//! S-procedure: certify x^H A0 x ≥ 0 whenever x^H A_k x ≥ 0, or refute it.

use quatdecomp::applications::{sproc_certificate, SProcOutcome};
use quatdecomp::matrix::{HermitianMatrix, QuaternionVector};
use quatdecomp::sdp::SdpOptions;

fn main() -> quatdecomp::error::Result<()> {
    let opts = SdpOptions::default();
    let x0 = QuaternionVector::from_reals(&[1.0, 0.1, 0.1]);
    let a1 = HermitianMatrix::diag(&[1.0, -1.0, -1.0]);
    let a2 = HermitianMatrix::diag(&[1.0, -2.0, 0.0]);
    let zero = HermitianMatrix::zeros(3);
    let forms = [a1.clone(), a2, zero.clone(), zero];

    // |x1|² ≥ |x2|² + |x3|² implies 2|x1|² − |x2|² − |x3|² ≥ 0
    let implied = HermitianMatrix::diag(&[2.0, -1.0, -1.0]);
    report("implied form", &sproc_certificate(&implied, &forms, &x0, 0, &opts)?);

    // but not |x2|² − |x3|² ≥ 0
    let not_implied = HermitianMatrix::diag(&[0.0, 1.0, -1.0]);
    report("non-implied form", &sproc_certificate(&not_implied, &forms, &x0, 0, &opts)?);
    Ok(())
}

fn report(label: &str, outcome: &SProcOutcome) {
    match outcome {
        SProcOutcome::Certificate { certificate, bound, .. } => {
            println!("{label}: certified, taus {:.6?}, slack min eigenvalue {:.2e}, bound {bound:.2e}", certificate.taus, certificate.min_eig)
        }
        SProcOutcome::Refuted { witness, .. } => {
            println!("{label}: refuted, objective {:.6} with constraints {:.6?}", witness.objective, witness.constraints)
        }
        SProcOutcome::Inconclusive { bound, .. } => println!("{label}: inconclusive, bound {bound:.2e}"),
    }
}
