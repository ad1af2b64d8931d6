//! Invertible affine maps x ↦ gx + v with exact entries.

use alloc::vec::Vec;
use core::fmt;

use crate::error::Error;
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;

/// Affine transformation m(x) = g·x + v with g invertible.
#[derive(Clone, PartialEq, Eq)]
pub struct AffineMap {
    g: Matrix,
    v: Vector,
}

impl AffineMap {
    /// Builds the map x ↦ gx + v, rejecting singular linear parts.
    pub fn new(g: Matrix, v: Vector) -> Result<AffineMap, Error> {
        if !g.is_square() || g.rows() != v.dim() {
            return Err(Error::Dimension("affine map shape mismatch"));
        }
        if g.det().is_zero() {
            return Err(Error::Singular);
        }
        Ok(AffineMap { g, v })
    }

    pub fn identity(n: usize) -> AffineMap {
        AffineMap {
            g: Matrix::identity(n),
            v: Vector::zeros(n),
        }
    }

    /// Pure translation x ↦ x + v.
    pub fn translation(v: Vector) -> AffineMap {
        AffineMap {
            g: Matrix::identity(v.dim()),
            v,
        }
    }

    /// Linear map x ↦ gx.
    pub fn linear(g: Matrix) -> Result<AffineMap, Error> {
        let n = g.rows();
        AffineMap::new(g, Vector::zeros(n))
    }

    pub fn dim(&self) -> usize {
        self.v.dim()
    }

    pub fn linear_part(&self) -> &Matrix {
        &self.g
    }

    pub fn translation_part(&self) -> &Vector {
        &self.v
    }

    pub fn act(&self, x: &Vector) -> Vector {
        self.g.mul_vec(x).add(&self.v)
    }

    /// Composition (self ∘ other)(x) = self(other(x)).
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        assert_eq!(self.dim(), other.dim(), "dimension mismatch");
        AffineMap {
            g: self.g.mul(&other.g),
            v: self.g.mul_vec(&other.v).add(&self.v),
        }
    }

    /// Inverse map; always exists since g is invertible by construction.
    pub fn inverse(&self) -> AffineMap {
        let ginv = self.g.inverse().expect("linear part invertible");
        let v = ginv.mul_vec(&self.v).neg();
        AffineMap { g: ginv, v }
    }

    /// True when g and v have integer entries (the map need not be in
    /// GL_n(Z); the inverse can be non-integral).
    pub fn is_integral(&self) -> bool {
        self.g.is_integral() && self.v.is_integral()
    }

    /// True when all entries are rational.
    pub fn is_rational(&self) -> bool {
        self.g.is_rational() && self.v.is_rational()
    }

    pub fn det(&self) -> Scalar {
        self.g.det()
    }

    /// Conjugation self ∘ inner ∘ self⁻¹.
    pub fn conjugate(&self, inner: &AffineMap) -> AffineMap {
        self.compose(inner).compose(&self.inverse())
    }

    /// Orbit point m^k(x) for k ≥ 0 without forming the k-th power map.
    pub fn iterate(&self, x: &Vector, k: usize) -> Vector {
        let mut y = x.clone();
        for _ in 0..k {
            y = self.act(&y);
        }
        y
    }
}

impl fmt::Debug for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AffineMap {{ g: {:?}, v: {:?} }}", self.g, self.v)
    }
}

/// Smallest-index nonzero entry used to normalize direction vectors.
pub fn first_nonzero(v: &Vector) -> Option<usize> {
    (0..v.dim()).find(|&i| !v[i].is_zero())
}

/// Collects integer points of the standard lattice Z^n within sup-norm
/// bound h, in lexicographic order. Intended for small h only.
pub fn lattice_box(n: usize, h: i64) -> Vec<Vector> {
    assert!(h >= 0);
    let mut out = Vec::new();
    let width = (2 * h + 1) as usize;
    let total = width.pow(n as u32);
    for idx in 0..total {
        let mut rem = idx;
        let mut coords = Vec::with_capacity(n);
        for _ in 0..n {
            coords.push((rem % width) as i64 - h);
            rem /= width;
        }
        coords.reverse();
        out.push(Vector::from_ints(&coords));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn map(g: &[&[i64]], v: &[i64]) -> AffineMap {
        AffineMap::new(Matrix::from_ints(g), Vector::from_ints(v)).unwrap()
    }

    #[test]
    fn act_and_compose() {
        let m1 = map(&[&[1, 1], &[0, 1]], &[1, 0]);
        let m2 = map(&[&[0, 1], &[1, 0]], &[0, 2]);
        let x = Vector::from_ints(&[3, 4]);
        // m1(m2(x)) computed both ways.
        let composed = m1.compose(&m2);
        assert_eq!(composed.act(&x), m1.act(&m2.act(&x)));
        // Composition is associative with a third map.
        let m3 = map(&[&[2, 0], &[0, 1]], &[-1, 5]);
        assert_eq!(
            m1.compose(&m2).compose(&m3),
            m1.compose(&m2.compose(&m3))
        );
    }

    #[test]
    fn inverse_round_trip() {
        let m = map(&[&[2, 1], &[1, 1]], &[7, -3]);
        let e = m.compose(&m.inverse());
        assert_eq!(e, AffineMap::identity(2));
        let e2 = m.inverse().compose(&m);
        assert_eq!(e2, AffineMap::identity(2));
    }

    #[test]
    fn singular_rejected() {
        let g = Matrix::from_ints(&[&[1, 2], &[2, 4]]);
        assert!(matches!(
            AffineMap::new(g, Vector::zeros(2)),
            Err(Error::Singular)
        ));
    }

    #[test]
    fn integrality() {
        let m = map(&[&[2, 1], &[1, 1]], &[0, 0]);
        assert!(m.is_integral());
        assert!(m.inverse().is_integral()); // det = 1
        let half = AffineMap::new(
            Matrix::from_ints(&[&[2, 0], &[0, 1]]),
            Vector::zeros(2),
        )
        .unwrap();
        assert!(half.is_integral());
        assert!(!half.inverse().is_integral());
    }

    #[test]
    fn lattice_box_counts() {
        assert_eq!(lattice_box(2, 1).len(), 9);
        assert_eq!(lattice_box(3, 2).len(), 125);
        assert!(lattice_box(2, 1)
            .iter()
            .any(|v| v == &Vector::from_ints(&[-1, 1])));
    }

    #[test]
    fn iterate_matches_repeated_act() {
        let m = map(&[&[1, 1], &[0, 1]], &[0, 1]);
        let x = Vector::from_ints(&[0, 0]);
        let mut y = x.clone();
        for _ in 0..5 {
            y = m.act(&y);
        }
        assert_eq!(m.iterate(&x, 5), y);
    }
}
