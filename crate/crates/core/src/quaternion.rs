//! Quaternion scalars over `f64`.
//!
//! Multiplication follows the Hamilton table `i² = j² = k² = ijk = −1`,
//! `ij = −ji = k`. The product is noncommutative, so every vector and
//! matrix routine in this crate scales from the right (`x·ω`).

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A quaternion `a + b·i + c·j + d·k`.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Quaternion {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

/// Polar form `q = |q|·(cos θ + axis·sin θ)` with a unit pure-imaginary axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleRep {
    pub modulus: f64,
    pub cos_theta: f64,
    pub sin_theta: f64,
    pub axis: Quaternion,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    pub const fn new(a: f64, b: f64, c: f64, d: f64) -> Self {
        Self { a, b, c, d }
    }

    pub const fn real(a: f64) -> Self {
        Self::new(a, 0.0, 0.0, 0.0)
    }

    pub fn from_array(v: [f64; 4]) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn to_array(self) -> [f64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    /// Real part.
    pub fn re(self) -> f64 {
        self.a
    }

    /// Imaginary part as a pure quaternion.
    pub fn im(self) -> Quaternion {
        Self::new(0.0, self.b, self.c, self.d)
    }

    /// `Re q − Im q`.
    pub fn conj(self) -> Self {
        Self::new(self.a, -self.b, -self.c, -self.d)
    }

    pub fn norm_sqr(self) -> f64 {
        self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d
    }

    /// Modulus `|q|`.
    pub fn norm(self) -> f64 {
        // hypot-style scaling is unnecessary at the magnitudes used here
        self.norm_sqr().sqrt()
    }

    pub fn is_zero(self) -> bool {
        self.a == 0.0 && self.b == 0.0 && self.c == 0.0 && self.d == 0.0
    }

    /// `q̄ / |q|²`; fails on zero.
    pub fn inverse(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::Domain("inverse of zero quaternion".into()));
        }
        Ok(self.conj() * (1.0 / n2))
    }

    /// Triangle (polar) representation. A real or zero quaternion gets the
    /// axis `i` with `sin θ = 0`.
    pub fn triangle(self) -> TriangleRep {
        let modulus = self.norm();
        let im_norm = (self.b * self.b + self.c * self.c + self.d * self.d).sqrt();
        if modulus == 0.0 {
            return TriangleRep { modulus: 0.0, cos_theta: 1.0, sin_theta: 0.0, axis: Self::I };
        }
        if im_norm == 0.0 {
            return TriangleRep {
                modulus,
                cos_theta: self.a.signum(),
                sin_theta: 0.0,
                axis: Self::I,
            };
        }
        TriangleRep {
            modulus,
            cos_theta: self.a / modulus,
            sin_theta: im_norm / modulus,
            axis: Self::new(0.0, self.b / im_norm, self.c / im_norm, self.d / im_norm),
        }
    }

    /// Componentwise dot product, equal to `Re(p̄·q)`.
    pub fn dot(self, other: Self) -> f64 {
        self.a * other.a + self.b * other.b + self.c * other.c + self.d * other.d
    }

    pub fn is_finite(self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite() && self.d.is_finite()
    }

    pub fn max_abs(self) -> f64 {
        self.a.abs().max(self.b.abs()).max(self.c.abs()).max(self.d.abs())
    }
}

impl TriangleRep {
    pub fn to_quaternion(&self) -> Quaternion {
        (Quaternion::real(self.cos_theta) + self.axis * self.sin_theta) * self.modulus
    }
}

/// Hamilton product.
pub fn qmul(p: Quaternion, q: Quaternion) -> Quaternion {
    p * q
}

pub fn qconj(q: Quaternion) -> Quaternion {
    q.conj()
}

pub fn qinv(q: Quaternion) -> Result<Quaternion> {
    q.inverse()
}

pub fn triangle_rep(q: Quaternion) -> TriangleRep {
    q.triangle()
}

impl Mul for Quaternion {
    type Output = Quaternion;

    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        let p = self;
        Quaternion::new(
            p.a * q.a - p.b * q.b - p.c * q.c - p.d * q.d,
            p.a * q.b + p.b * q.a + p.c * q.d - p.d * q.c,
            p.a * q.c - p.b * q.d + p.c * q.a + p.d * q.b,
            p.a * q.d + p.b * q.c - p.c * q.b + p.d * q.a,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Quaternion;

    #[inline]
    fn mul(self, s: f64) -> Quaternion {
        Quaternion::new(self.a * s, self.b * s, self.c * s, self.d * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;

    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Quaternion;

    #[inline]
    fn div(self, s: f64) -> Quaternion {
        Quaternion::new(self.a / s, self.b / s, self.c / s, self.d / s)
    }
}

impl MulAssign for Quaternion {
    fn mul_assign(&mut self, rhs: Quaternion) {
        *self = *self * rhs;
    }
}

impl Add for Quaternion {
    type Output = Quaternion;

    #[inline]
    fn add(self, q: Quaternion) -> Quaternion {
        Quaternion::new(self.a + q.a, self.b + q.b, self.c + q.c, self.d + q.d)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, q: Quaternion) {
        self.a += q.a;
        self.b += q.b;
        self.c += q.c;
        self.d += q.d;
    }
}

impl Sub for Quaternion {
    type Output = Quaternion;

    #[inline]
    fn sub(self, q: Quaternion) -> Quaternion {
        Quaternion::new(self.a - q.a, self.b - q.b, self.c - q.c, self.d - q.d)
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, q: Quaternion) {
        self.a -= q.a;
        self.b -= q.b;
        self.c -= q.c;
        self.d -= q.d;
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    #[inline]
    fn neg(self) -> Quaternion {
        Quaternion::new(-self.a, -self.b, -self.c, -self.d)
    }
}

impl From<f64> for Quaternion {
    fn from(a: f64) -> Self {
        Quaternion::real(a)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.a)?;
        for (v, unit) in [(self.b, 'i'), (self.c, 'j'), (self.d, 'k')] {
            if v.is_sign_negative() {
                write!(f, " - {}{}", -v, unit)?;
            } else {
                write!(f, " + {}{}", v, unit)?;
            }
        }
        Ok(())
    }
}
