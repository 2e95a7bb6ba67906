//! Dense quaternion vectors and matrices.
//!
//! Storage is row-major. Scalars multiply vectors from the right, matching
//! the right-module structure used by every construction in the crate.

use std::ops::{Add, Index, IndexMut, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::quaternion::Quaternion;

/// Column vector in `Hⁿ`.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QuaternionVector {
    entries: Vec<Quaternion>,
}

impl QuaternionVector {
    pub fn new(entries: Vec<Quaternion>) -> Self {
        Self { entries }
    }

    pub fn zeros(n: usize) -> Self {
        Self { entries: vec![Quaternion::ZERO; n] }
    }

    /// Standard basis vector `e_i`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = Self::zeros(n);
        v.entries[i] = Quaternion::ONE;
        v
    }

    pub fn from_reals(values: &[f64]) -> Self {
        Self { entries: values.iter().map(|&a| Quaternion::real(a)).collect() }
    }

    /// Reads `4n` reals as consecutive `(a, b, c, d)` blocks.
    pub fn from_real_blocks(values: &[f64]) -> Self {
        assert!(values.len().is_multiple_of(4), "length must be a multiple of 4");
        Self {
            entries: values
                .chunks_exact(4)
                .map(|c| Quaternion::new(c[0], c[1], c[2], c[3]))
                .collect(),
        }
    }

    pub fn to_real_blocks(&self) -> Vec<f64> {
        self.entries.iter().flat_map(|q| q.to_array()).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[Quaternion] {
        &self.entries
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Quaternion> {
        self.entries.iter()
    }

    /// `selfᴴ · other`.
    pub fn dot_h(&self, other: &QuaternionVector) -> Quaternion {
        debug_assert_eq!(self.len(), other.len());
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(Quaternion::ZERO, |acc, (&p, &q)| acc + p.conj() * q)
    }

    /// Real inner product `Re(selfᴴ other)`.
    pub fn real_dot(&self, other: &QuaternionVector) -> f64 {
        self.entries.iter().zip(&other.entries).map(|(p, q)| p.dot(*q)).sum()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.entries.iter().map(|q| q.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// `self · q`, scaling every entry from the right.
    pub fn mul_right(&self, q: Quaternion) -> QuaternionVector {
        Self { entries: self.entries.iter().map(|&e| e * q).collect() }
    }

    pub fn scale(&self, s: f64) -> QuaternionVector {
        Self { entries: self.entries.iter().map(|&e| e * s).collect() }
    }

    /// `self ← self + other·q`.
    pub fn axpy_right(&mut self, other: &QuaternionVector, q: Quaternion) {
        for (e, &o) in self.entries.iter_mut().zip(&other.entries) {
            *e += o * q;
        }
    }

    /// Rank-one matrix `self · selfᴴ`.
    pub fn outer_h(&self) -> QuaternionMatrix {
        self.outer_with(self)
    }

    /// `self · otherᴴ`.
    pub fn outer_with(&self, other: &QuaternionVector) -> QuaternionMatrix {
        let n = self.len();
        let m = other.len();
        let mut out = QuaternionMatrix::zeros(n, m);
        for i in 0..n {
            for j in 0..m {
                out[(i, j)] = self.entries[i] * other.entries[j].conj();
            }
        }
        out
    }

    /// Conjugate transpose as a `1 × n` matrix.
    pub fn conj_transpose(&self) -> QuaternionMatrix {
        QuaternionMatrix::from_fn(1, self.len(), |_, j| self.entries[j].conj())
    }

    /// The vector as an `n × 1` matrix.
    pub fn to_column(&self) -> QuaternionMatrix {
        QuaternionMatrix::from_fn(self.len(), 1, |i, _| self.entries[i])
    }

    pub fn max_abs(&self) -> f64 {
        self.entries.iter().map(|q| q.max_abs()).fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.entries.iter().all(|q| q.is_finite())
    }
}

impl Index<usize> for QuaternionVector {
    type Output = Quaternion;

    fn index(&self, i: usize) -> &Quaternion {
        &self.entries[i]
    }
}

impl IndexMut<usize> for QuaternionVector {
    fn index_mut(&mut self, i: usize) -> &mut Quaternion {
        &mut self.entries[i]
    }
}

impl Add for &QuaternionVector {
    type Output = QuaternionVector;

    fn add(self, rhs: &QuaternionVector) -> QuaternionVector {
        QuaternionVector::new(self.entries.iter().zip(&rhs.entries).map(|(&p, &q)| p + q).collect())
    }
}

impl Sub for &QuaternionVector {
    type Output = QuaternionVector;

    fn sub(self, rhs: &QuaternionVector) -> QuaternionVector {
        QuaternionVector::new(self.entries.iter().zip(&rhs.entries).map(|(&p, &q)| p - q).collect())
    }
}

impl Neg for &QuaternionVector {
    type Output = QuaternionVector;

    fn neg(self) -> QuaternionVector {
        QuaternionVector::new(self.entries.iter().map(|&q| -q).collect())
    }
}

impl FromIterator<Quaternion> for QuaternionVector {
    fn from_iter<I: IntoIterator<Item = Quaternion>>(iter: I) -> Self {
        Self::new(iter.into_iter().collect())
    }
}

/// Dense `rows × cols` quaternion matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct QuaternionMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Quaternion>,
}

impl QuaternionMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Quaternion::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Quaternion::ONE } else { Quaternion::ZERO })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Quaternion) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<Quaternion>>) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    pub fn diag(values: &[f64]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { Quaternion::real(values[i]) } else { Quaternion::ZERO })
    }

    /// Assembles `A_a + A_b·i + A_c·j + A_d·k` from four real grids.
    pub fn from_components(a: &[Vec<f64>], b: &[Vec<f64>], c: &[Vec<f64>], d: &[Vec<f64>]) -> Result<Self> {
        let rows = a.len();
        let cols = a.first().map_or(0, Vec::len);
        for (name, g) in [("a", a), ("b", b), ("c", c), ("d", d)] {
            if g.len() != rows || g.iter().any(|row| row.len() != cols) {
                return Err(Error::Dimension(format!(
                    "component {name} is not a {rows}x{cols} grid"
                )));
            }
        }
        Ok(Self::from_fn(rows, cols, |i, j| Quaternion::new(a[i][j], b[i][j], c[i][j], d[i][j])))
    }

    /// The four real component grids `(A_a, A_b, A_c, A_d)`.
    pub fn components(&self) -> [Vec<Vec<f64>>; 4] {
        let grid = |f: fn(&Quaternion) -> f64| -> Vec<Vec<f64>> {
            (0..self.rows).map(|i| (0..self.cols).map(|j| f(&self[(i, j)])).collect()).collect()
        };
        [grid(|q| q.a), grid(|q| q.b), grid(|q| q.c), grid(|q| q.d)]
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[Quaternion] {
        &self.data
    }

    pub fn column(&self, j: usize) -> QuaternionVector {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn matmul(&self, rhs: &QuaternionMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn mul_vec(&self, x: &QuaternionVector) -> Result<QuaternionVector> {
        if self.cols != x.len() {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by vector of length {}",
                self.rows,
                self.cols,
                x.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(x.iter())
                    .fold(Quaternion::ZERO, |acc, (&a, &v)| acc + a * v)
            })
            .collect())
    }

    /// `xᴴ · self · x`.
    pub fn quad_form(&self, x: &QuaternionVector) -> Result<Quaternion> {
        Ok(x.dot_h(&self.mul_vec(x)?))
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&q| q * s).collect() }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|q| q.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry modulus.
    pub fn max_modulus(&self) -> f64 {
        self.data.iter().map(|q| q.norm()).fold(0.0, f64::max)
    }

    /// Largest absolute real component over all entries.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|q| q.max_abs()).fold(0.0, f64::max)
    }

    pub fn trace(&self) -> Quaternion {
        (0..self.rows.min(self.cols)).fold(Quaternion::ZERO, |acc, i| acc + self[(i, i)])
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|q| q.is_finite())
    }

    /// `(self + selfᴴ) / 2`; square matrices only.
    pub fn hermitian_part(&self) -> Self {
        assert!(self.is_square());
        Self::from_fn(self.rows, self.cols, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    fn zip_with(&self, rhs: &Self, f: impl Fn(Quaternion, Quaternion) -> Quaternion) -> Self {
        assert_eq!(self.shape(), rhs.shape(), "shape mismatch");
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&p, &q)| f(p, q)).collect(),
        }
    }
}

impl Index<(usize, usize)> for QuaternionMatrix {
    type Output = Quaternion;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Quaternion {
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for QuaternionMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Quaternion {
        &mut self.data[i * self.cols + j]
    }
}

impl Add for &QuaternionMatrix {
    type Output = QuaternionMatrix;

    fn add(self, rhs: &QuaternionMatrix) -> QuaternionMatrix {
        self.zip_with(rhs, |p, q| p + q)
    }
}

impl Sub for &QuaternionMatrix {
    type Output = QuaternionMatrix;

    fn sub(self, rhs: &QuaternionMatrix) -> QuaternionMatrix {
        self.zip_with(rhs, |p, q| p - q)
    }
}

impl Mul for &QuaternionMatrix {
    type Output = QuaternionMatrix;

    /// Panics on a shape mismatch; use [`QuaternionMatrix::matmul`] for a checked product.
    fn mul(self, rhs: &QuaternionMatrix) -> QuaternionMatrix {
        self.matmul(rhs).expect("shape mismatch in matrix product")
    }
}

/// `A • B = Re tr(Aᴴ B)`.
pub fn inner_product(a: &QuaternionMatrix, b: &QuaternionMatrix) -> Result<f64> {
    if a.shape() != b.shape() {
        return Err(Error::Dimension(format!(
            "inner product of {}x{} and {}x{}",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    Ok(a.data.iter().zip(&b.data).map(|(p, q)| p.dot(*q)).sum())
}

/// True iff `max |X − Xᴴ| ≤ tol` (largest entry modulus of the difference).
pub fn is_hermitian(x: &QuaternionMatrix, tol: f64) -> bool {
    if !x.is_square() {
        return false;
    }
    let n = x.rows;
    for i in 0..n {
        for j in i..n {
            if (x[(i, j)] - x[(j, i)].conj()).norm() > tol {
                return false;
            }
        }
    }
    true
}

/// Square quaternion matrix with `X = Xᴴ`.
///
/// Construction validates against `1e-12·(1 + max entry modulus)` and then
/// stores the exact Hermitian part, so downstream quadratic forms have no
/// imaginary residue beyond round-off.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianMatrix {
    inner: QuaternionMatrix,
}

impl HermitianMatrix {
    pub const DEFAULT_REL_TOL: f64 = 1e-12;

    pub fn new(m: QuaternionMatrix) -> Result<Self> {
        let tol = Self::DEFAULT_REL_TOL * (1.0 + m.max_modulus());
        Self::with_tolerance(m, tol)
    }

    /// Validates with an absolute tolerance on `max |X − Xᴴ|`.
    pub fn with_tolerance(m: QuaternionMatrix, tol: f64) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("{}x{} matrix is not square", m.rows, m.cols)));
        }
        if !m.is_finite() {
            return Err(Error::Domain("matrix has non-finite entries".into()));
        }
        if !is_hermitian(&m, tol) {
            let dev = (&m - &m.conj_transpose()).max_modulus();
            return Err(Error::Domain(format!(
                "matrix is not Hermitian: max |X - X^H| = {dev:e} exceeds {tol:e}"
            )));
        }
        Ok(Self { inner: m.hermitian_part() })
    }

    /// Takes the Hermitian part `(M + Mᴴ)/2` without validation.
    pub fn from_hermitian_part(m: &QuaternionMatrix) -> Self {
        Self { inner: m.hermitian_part() }
    }

    pub fn zeros(n: usize) -> Self {
        Self { inner: QuaternionMatrix::zeros(n, n) }
    }

    pub fn identity(n: usize) -> Self {
        Self { inner: QuaternionMatrix::identity(n) }
    }

    pub fn diag(values: &[f64]) -> Self {
        Self { inner: QuaternionMatrix::diag(values) }
    }

    /// `Σ xᵢxᵢᴴ` over the given vectors.
    pub fn sum_outer(n: usize, vectors: &[QuaternionVector]) -> Self {
        let mut m = QuaternionMatrix::zeros(n, n);
        for v in vectors {
            for i in 0..n {
                for j in 0..n {
                    m[(i, j)] += v[i] * v[j].conj();
                }
            }
        }
        Self::from_hermitian_part(&m)
    }

    pub fn dim(&self) -> usize {
        self.inner.rows
    }

    pub fn as_matrix(&self) -> &QuaternionMatrix {
        &self.inner
    }

    pub fn into_matrix(self) -> QuaternionMatrix {
        self.inner
    }

    /// `xᴴ X x`, which is real for Hermitian `X`.
    pub fn quad_form(&self, x: &QuaternionVector) -> f64 {
        self.inner.quad_form(x).expect("vector length must match matrix dimension").a
    }

    /// Full quaternion bilinear form `xᴴ X y`.
    pub fn bilinear(&self, x: &QuaternionVector, y: &QuaternionVector) -> Quaternion {
        x.dot_h(&self.inner.mul_vec(y).expect("vector length must match matrix dimension"))
    }

    /// `self • other`.
    pub fn inner(&self, other: &HermitianMatrix) -> f64 {
        inner_product(&self.inner, &other.inner).expect("dimension mismatch in inner product")
    }

    pub fn scale(&self, s: f64) -> Self {
        Self { inner: self.inner.scale(s) }
    }

    pub fn add(&self, other: &HermitianMatrix) -> Self {
        Self { inner: &self.inner + &other.inner }
    }

    pub fn sub(&self, other: &HermitianMatrix) -> Self {
        Self { inner: &self.inner - &other.inner }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.inner.frobenius_norm()
    }

    /// `P X Pᴴ` for any conformable `P`.
    pub fn congruence(&self, p: &QuaternionMatrix) -> Result<Self> {
        let m = p.matmul(&self.inner)?.matmul(&p.conj_transpose())?;
        Ok(Self::from_hermitian_part(&m))
    }
}

impl Index<(usize, usize)> for HermitianMatrix {
    type Output = Quaternion;

    fn index(&self, idx: (usize, usize)) -> &Quaternion {
        &self.inner[idx]
    }
}

impl AsRef<QuaternionMatrix> for HermitianMatrix {
    fn as_ref(&self) -> &QuaternionMatrix {
        &self.inner
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quaternion::Quaternion as Q;

    fn e11(q: Q) -> QuaternionMatrix {
        let mut m = QuaternionMatrix::zeros(2, 2);
        m[(0, 0)] = q;
        m
    }

    #[test]
    fn inner_product_examples() {
        let i3 = QuaternionMatrix::identity(3);
        assert_eq!(inner_product(&i3, &i3).unwrap(), 3.0);
        assert_eq!(inner_product(&e11(Q::I), &e11(Q::I)).unwrap(), 1.0);
        assert_eq!(inner_product(&e11(Q::I), &e11(Q::J)).unwrap(), 0.0);
        let bad = QuaternionMatrix::zeros(2, 3);
        assert!(matches!(inner_product(&i3, &bad), Err(Error::Dimension(_))));
    }

    #[test]
    fn is_hermitian_examples() {
        assert!(is_hermitian(&QuaternionMatrix::diag(&[1.0, -2.0, 3.5]), 0.0));
        let good = QuaternionMatrix::from_rows(vec![vec![Q::ZERO, Q::J], vec![-Q::J, Q::ZERO]]).unwrap();
        assert!(is_hermitian(&good, 0.0));
        let bad = QuaternionMatrix::from_rows(vec![vec![Q::ZERO, Q::I], vec![Q::I, Q::ZERO]]).unwrap();
        assert!(!is_hermitian(&bad, 1e-9));
        assert!(!is_hermitian(&QuaternionMatrix::zeros(2, 3), 1.0));
    }

    #[test]
    fn hermitian_constructor_rejects_and_symmetrizes() {
        let bad = QuaternionMatrix::from_rows(vec![vec![Q::ZERO, Q::I], vec![Q::I, Q::ZERO]]).unwrap();
        assert!(matches!(HermitianMatrix::new(bad), Err(Error::Domain(_))));
        assert!(matches!(HermitianMatrix::new(QuaternionMatrix::zeros(1, 2)), Err(Error::Dimension(_))));

        let mut near = QuaternionMatrix::diag(&[1.0, 1.0]);
        near[(0, 1)] = Q::new(0.5, 0.0, 0.0, 1e-14);
        near[(1, 0)] = Q::new(0.5, 0.0, 0.0, -1e-14 + 1e-15);
        let h = HermitianMatrix::new(near).unwrap();
        assert_eq!(h[(0, 1)], h[(1, 0)].conj());
    }

    #[test]
    fn vector_conj_transpose_is_involution() {
        let v = QuaternionVector::new(vec![Q::new(1.0, 2.0, 3.0, 4.0), Q::new(-1.0, 0.5, 0.0, 2.0)]);
        assert_eq!(v.conj_transpose().conj_transpose(), v.to_column());
    }

    #[test]
    fn quad_form_of_outer_product() {
        let v = QuaternionVector::new(vec![Q::new(1.0, 2.0, 0.0, 0.0), Q::new(0.0, 0.0, 1.0, -1.0)]);
        let x = HermitianMatrix::sum_outer(2, std::slice::from_ref(&v));
        // vᴴ (v vᴴ) v = |v|⁴
        assert!((x.quad_form(&v) - v.norm_sqr().powi(2)).abs() < 1e-12);
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn quat() -> impl Strategy<Value = Q> {
            prop::array::uniform4(-2.0f64..2.0).prop_map(Q::from_array)
        }

        fn matrix(r: usize, c: usize) -> impl Strategy<Value = QuaternionMatrix> {
            prop::collection::vec(quat(), r * c).prop_map(move |d| {
                QuaternionMatrix::from_fn(r, c, |i, j| d[i * c + j])
            })
        }

        fn component_inner(a: &QuaternionMatrix, b: &QuaternionMatrix) -> f64 {
            let ca = a.components();
            let cb = b.components();
            let mut s = 0.0;
            for k in 0..4 {
                // tr(Xᵀ Y) = Σ_ij X_ij Y_ij
                for i in 0..a.rows() {
                    for j in 0..a.cols() {
                        s += ca[k][i][j] * cb[k][i][j];
                    }
                }
            }
            s
        }

        proptest! {
            #[test]
            fn product_conj_transpose_reverses(a in matrix(3, 4), b in matrix(4, 2)) {
                let lhs = a.matmul(&b).unwrap().conj_transpose();
                let rhs = b.conj_transpose().matmul(&a.conj_transpose()).unwrap();
                prop_assert!((&lhs - &rhs).max_modulus() <= 1e-12);
            }

            #[test]
            fn inner_product_matches_components(a in matrix(3, 3), b in matrix(3, 3)) {
                let direct = inner_product(&a, &b).unwrap();
                let trace_form = (a.conj_transpose().matmul(&b).unwrap()).trace().a;
                let comp = component_inner(&a, &b);
                prop_assert!((direct - comp).abs() <= 1e-12 * (1.0 + comp.abs()));
                prop_assert!((direct - trace_form).abs() <= 1e-12 * (1.0 + comp.abs()));
            }

            #[test]
            fn hermitian_quadratic_forms_are_real(m in matrix(4, 4), u in prop::collection::vec(quat(), 4)) {
                let x = HermitianMatrix::from_hermitian_part(&m);
                let u = QuaternionVector::new(u);
                let val = x.as_matrix().quad_form(&u).unwrap();
                prop_assert!(val.im().norm() <= 1e-10 * (1.0 + val.norm()));
            }
        }
    }
}
