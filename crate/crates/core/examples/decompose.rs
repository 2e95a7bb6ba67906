//! Rank-one decomposition of a PSD matrix equalizing four quadratic forms.

use quatdecomp::decomposition::decompose;
use quatdecomp::random;

fn main() -> quatdecomp::error::Result<()> {
    let mut rng = random::rng_from_seed(2);
    let x = random::psd(&mut rng, 6, 4);
    let a: Vec<_> = (0..4).map(|_| random::hermitian(&mut rng, 6)).collect();
    let dec = decompose(&x, &a)?;

    println!("rank {} decomposition", dec.rank());
    println!("targets A_k • X / r: {:?}", dec.means.iter().map(|m| format!("{m:.6}")).collect::<Vec<_>>());
    for (i, v) in dec.vectors.iter().enumerate() {
        let vals: Vec<String> = a.iter().map(|ak| format!("{:.6}", ak.quad_form(v))).collect();
        println!("x{i}: x^H A_k x = {vals:?}");
    }
    println!("reconstruction error {:.2e}", dec.reconstruction_error());
    println!("worst relative equality violation {:.2e}", dec.max_relative_violation());
    Ok(())
}
