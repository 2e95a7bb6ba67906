//! Hamilton products, conjugation, inverses and the polar form.

use quatdecomp::quaternion::Quaternion;

fn main() -> quatdecomp::error::Result<()> {
    let (i, j, k) = (Quaternion::I, Quaternion::J, Quaternion::K);
    println!("i*j = {}   j*i = {}   i*j*k = {}", i * j, j * i, i * j * k);

    let p = Quaternion::new(1.0, 2.0, -0.5, 3.0);
    let q = Quaternion::new(-0.3, 0.7, 1.1, 0.2);
    println!("p*q = {}", p * q);
    println!("q*p = {}  (products do not commute)", q * p);
    println!("|p*q| = {:.12}   |p||q| = {:.12}", (p * q).norm(), p.norm() * q.norm());
    println!("conj(p*q) = {}   conj(q)*conj(p) = {}", (p * q).conj(), q.conj() * p.conj());

    let inv = p.inverse()?;
    println!("p * p^-1 = {}", p * inv);

    let t = p.triangle();
    println!(
        "polar form: |p| = {:.6}, cos = {:.6}, sin = {:.6}, axis = {}",
        t.modulus, t.cos_theta, t.sin_theta, t.axis
    );
    Ok(())
}
