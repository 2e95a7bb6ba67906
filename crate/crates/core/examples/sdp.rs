//! Largest eigenvalue of a symmetric matrix as an SDP: max C • X s.t. tr X = 1.

use nalgebra::DMatrix;
use quatdecomp::sdp::{solve_sdp, SdpBuilder, SdpOptions, Sense};

fn main() -> quatdecomp::error::Result<()> {
    let c = DMatrix::from_row_slice(3, 3, &[2.0, -1.0, 0.0, -1.0, 2.0, -1.0, 0.0, -1.0, 2.0]);
    let problem = SdpBuilder::new(c.clone(), true).constraint(DMatrix::identity(3, 3), Sense::Equal, 1.0).build();
    let sol = solve_sdp(&problem, &SdpOptions::default())?;

    let lmax = c.symmetric_eigenvalues().max();
    println!("{:?} after {} iterations", sol.status, sol.iterations);
    println!("primal {:.10}  dual {:.10}  λmax {:.10}", sol.primal_objective, sol.dual_objective, lmax);
    println!("relative gap {:.2e}, X•Z {:.2e}", sol.gap, sol.complementarity);
    Ok(())
}
