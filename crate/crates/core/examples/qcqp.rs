//! Nonconvex QCQP with four constraints solved exactly through its SDP relaxation.

use quatdecomp::applications::{qcqp_solve, QcqpProblem, QuadraticForm};
use quatdecomp::matrix::{HermitianMatrix, QuaternionVector};
use quatdecomp::random;
use quatdecomp::sdp::SdpOptions;

fn main() -> quatdecomp::error::Result<()> {
    let mut rng = random::rng_from_seed(4);
    let n = 5;
    // maximize an indefinite form inside a ball cut by three random quadrics
    let objective = QuadraticForm::new(random::hermitian(&mut rng, n), random::vector(&mut rng, n), 0.0)?;
    let mut constraints = vec![QuadraticForm::new(HermitianMatrix::identity(n), QuaternionVector::zeros(n), -4.0)?];
    for _ in 0..3 {
        constraints.push(QuadraticForm::new(random::hermitian(&mut rng, n).scale(0.3), random::vector(&mut rng, n).scale(0.1), -1.0)?);
    }
    let problem = QcqpProblem::new(objective, constraints, None)?;
    let sol = qcqp_solve(&problem, 0, &SdpOptions::default())?;

    println!("value at x*      {:.10}", sol.value);
    println!("relaxation value {:.10}", sol.sdp_value);
    println!("constraints at x* {:?}", sol.constraint_values.iter().map(|v| format!("{v:.3e}")).collect::<Vec<_>>());
    println!("multipliers {:.6?}", sol.certificate.multipliers);
    println!("dual matrix min eigenvalue {:.2e}", sol.certificate.dual_min_eig);
    Ok(())
}
