//! Reaching a target in the joint numerical range of five Hermitian forms.

use quatdecomp::applications::{jnr_solve, JnrQuery};
use quatdecomp::random;
use quatdecomp::sdp::SdpOptions;

fn main() -> quatdecomp::error::Result<()> {
    let mut rng = random::rng_from_seed(3);
    let n = 4;
    let mats: Vec<_> = (0..5).map(|_| random::hermitian(&mut rng, n)).collect();

    // a target known to be reachable: the values of a random vector
    let x0 = random::vector(&mut rng, n);
    let target: [f64; 5] = std::array::from_fn(|k| mats[k].quad_form(&x0));
    let query = JnrQuery::new(mats.clone(), target)?;
    let point = jnr_solve(&query, &SdpOptions::default())?.expect("target is reachable");
    println!("target   {target:.6?}");
    println!("achieved {:.6?}", query.values(&point.x));
    println!("relative residual {:.2e}", point.residual);

    // x^H I x = -1 is impossible
    let mut far = mats;
    far[4] = quatdecomp::matrix::HermitianMatrix::identity(n);
    let query = JnrQuery::new(far, [0.0, 0.0, 0.0, 0.0, -1.0])?;
    println!("negative norm reachable: {}", jnr_solve(&query, &SdpOptions::default())?.is_some());
    Ok(())
}
