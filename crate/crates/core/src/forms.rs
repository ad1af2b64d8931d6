//! Quadratic, linear, and shifted quadratic forms: evaluation, signature,
//! tangency, equivalence transforms, and rational-hyperplane restriction.

use alloc::vec::Vec;

use crate::affine::AffineMap;
use crate::error::Error;
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;

/// Homogeneous quadratic form Q(x) = xᵀAx with A symmetric.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticForm {
    gram: Matrix,
}

/// Linear form L(x) = ℓ·x.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    ell: Vector,
}

/// Shifted quadratic form F(x) = (x+ξ)ᵀA(x+ξ).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InhomogeneousForm {
    gram: Matrix,
    shift: Vector,
}

/// Degree-one polynomial x ↦ ℓ·x + c, produced when affine substitution
/// into a linear form picks up a constant term.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineFunctional {
    pub coeffs: Vector,
    pub constant: Scalar,
}

impl QuadraticForm {
    pub fn new(gram: Matrix) -> Result<QuadraticForm, Error> {
        if !gram.is_square() {
            return Err(Error::Dimension("gram matrix must be square"));
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(QuadraticForm { gram })
    }

    pub fn from_ints(rows: &[&[i64]]) -> QuadraticForm {
        QuadraticForm::new(Matrix::from_ints(rows)).unwrap()
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn eval(&self, x: &Vector) -> Scalar {
        self.bilinear(x, x)
    }

    /// Symmetric bilinear form B(x, y) = xᵀAy.
    pub fn bilinear(&self, x: &Vector, y: &Vector) -> Scalar {
        x.dot(&self.gram.mul_vec(y))
    }

    pub fn det(&self) -> Scalar {
        self.gram.det()
    }

    pub fn is_degenerate(&self) -> bool {
        self.det().is_zero()
    }

    /// Symmetric congruence diagonalization: returns (S, diag) with
    /// SᵀAS = diag(diag), S invertible, all arithmetic exact.
    pub fn congruence_diagonalize(&self) -> (Matrix, Vec<Scalar>) {
        let n = self.dim();
        let mut a = self.gram.clone();
        let mut s = Matrix::identity(n);
        // Column operation col_j += f·col_k applied congruently, with the
        // matching row operation, and recorded in s.
        let add_col = |a: &mut Matrix, s: &mut Matrix, j: usize, k: usize, f: &Scalar| {
            for i in 0..n {
                let d = f.mul(&a[(i, k)]);
                a[(i, j)] = a[(i, j)].add(&d);
            }
            for i in 0..n {
                let d = f.mul(&a[(k, i)]);
                a[(j, i)] = a[(j, i)].add(&d);
            }
            for i in 0..n {
                let d = f.mul(&s[(i, k)]);
                s[(i, j)] = s[(i, j)].add(&d);
            }
        };
        let swap_cols = |a: &mut Matrix, s: &mut Matrix, j: usize, k: usize| {
            for i in 0..n {
                let tmp = a[(i, j)].clone();
                a[(i, j)] = a[(i, k)].clone();
                a[(i, k)] = tmp;
            }
            for i in 0..n {
                let tmp = a[(j, i)].clone();
                a[(j, i)] = a[(k, i)].clone();
                a[(k, i)] = tmp;
            }
            for i in 0..n {
                let tmp = s[(i, j)].clone();
                s[(i, j)] = s[(i, k)].clone();
                s[(i, k)] = tmp;
            }
        };
        for k in 0..n {
            if a[(k, k)].is_zero() {
                if let Some(j) = ((k + 1)..n).find(|&j| !a[(j, j)].is_zero()) {
                    swap_cols(&mut a, &mut s, k, j);
                } else if let Some(j) = ((k + 1)..n).find(|&j| !a[(k, j)].is_zero()) {
                    // All later diagonal entries vanish; a[(k,j)] ≠ 0 makes
                    // col_k += col_j produce 2·a[(k,j)] on the diagonal.
                    let one = Scalar::one();
                    add_col(&mut a, &mut s, k, j, &one);
                } else {
                    continue;
                }
            }
            let pivot = a[(k, k)].clone();
            for j in (k + 1)..n {
                if !a[(k, j)].is_zero() {
                    let f = a[(k, j)].div(&pivot).neg();
                    add_col(&mut a, &mut s, j, k, &f);
                }
            }
        }
        let diag = (0..n).map(|i| a[(i, i)].clone()).collect();
        (s, diag)
    }

    /// Counts of (positive, negative, zero) entries in an exact congruence
    /// diagonalization; well defined by Sylvester's law of inertia.
    pub fn signature(&self) -> (usize, usize, usize) {
        let (_, diag) = self.congruence_diagonalize();
        let mut sig = (0usize, 0usize, 0usize);
        for v in &diag {
            match v.sign() {
                1 => sig.0 += 1,
                -1 => sig.1 += 1,
                _ => sig.2 += 1,
            }
        }
        sig
    }

    pub fn is_indefinite(&self) -> bool {
        let (p, m, _) = self.signature();
        p > 0 && m > 0
    }

    /// Pullback along a linear map of column space: gram BᵀAB.
    pub fn restrict(&self, b: &Matrix) -> QuadraticForm {
        assert_eq!(b.rows(), self.dim(), "dimension mismatch");
        QuadraticForm {
            gram: b.transpose().mul(&self.gram).mul(b),
        }
    }

    /// Monomial coefficients of Q as a polynomial: squares x_i² first,
    /// then cross terms x_i x_j (i < j, lexicographic) with coefficient
    /// 2A_ij.
    pub fn monomial_coeffs(&self) -> Vec<Scalar> {
        let n = self.dim();
        let two = Scalar::from_int(2);
        let mut out = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            out.push(self.gram[(i, i)].clone());
        }
        for i in 0..n {
            for j in (i + 1)..n {
                out.push(two.mul(&self.gram[(i, j)]));
            }
        }
        out
    }
}

impl LinearForm {
    pub fn new(ell: Vector) -> LinearForm {
        LinearForm { ell }
    }

    pub fn from_ints(coeffs: &[i64]) -> LinearForm {
        LinearForm::new(Vector::from_ints(coeffs))
    }

    pub fn dim(&self) -> usize {
        self.ell.dim()
    }

    pub fn coeffs(&self) -> &Vector {
        &self.ell
    }

    pub fn eval(&self, x: &Vector) -> Scalar {
        self.ell.dot(x)
    }

    pub fn is_zero(&self) -> bool {
        self.ell.is_zero()
    }

    /// The rank-one quadratic form L(x)² with gram ℓᵀℓ.
    pub fn square(&self) -> QuadraticForm {
        let n = self.dim();
        let mut gram = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                gram[(i, j)] = self.ell[i].mul(&self.ell[j]);
            }
        }
        QuadraticForm { gram }
    }
}

impl InhomogeneousForm {
    pub fn new(gram: Matrix, shift: Vector) -> Result<InhomogeneousForm, Error> {
        if !gram.is_square() || gram.rows() != shift.dim() {
            return Err(Error::Dimension("form shape mismatch"));
        }
        if !gram.is_symmetric() {
            return Err(Error::NotSymmetric);
        }
        Ok(InhomogeneousForm { gram, shift })
    }

    pub fn from_form(q: &QuadraticForm, shift: Vector) -> InhomogeneousForm {
        assert_eq!(q.dim(), shift.dim(), "dimension mismatch");
        InhomogeneousForm {
            gram: q.gram.clone(),
            shift,
        }
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix {
        &self.gram
    }

    pub fn shift(&self) -> &Vector {
        &self.shift
    }

    pub fn quadratic_form(&self) -> QuadraticForm {
        QuadraticForm {
            gram: self.gram.clone(),
        }
    }

    /// F(x) = (x+ξ)ᵀA(x+ξ), exact.
    pub fn eval(&self, x: &Vector) -> Scalar {
        let y = x.add(&self.shift);
        y.dot(&self.gram.mul_vec(&y))
    }

    /// Coefficient vector of the degree-one part: F(x) expands to
    /// xᵀAx + (2Aξ)·x + ξᵀAξ.
    pub fn linear_coeffs(&self) -> Vector {
        self.gram.mul_vec(&self.shift).scale(&Scalar::from_int(2))
    }

    pub fn constant(&self) -> Scalar {
        self.shift.dot(&self.gram.mul_vec(&self.shift))
    }

    /// Quadratic and linear polynomial coefficients, concatenated; the
    /// constant term is deliberately excluded (rationality tests ignore it).
    pub fn poly_coeffs(&self) -> Vec<Scalar> {
        let mut out = self.quadratic_form().monomial_coeffs();
        out.extend(self.linear_coeffs().iter().cloned());
        out
    }

    /// Equality as polynomials (quadratic, linear, and constant parts).
    pub fn poly_eq(&self, other: &InhomogeneousForm) -> bool {
        self.gram == other.gram
            && self.linear_coeffs() == other.linear_coeffs()
            && self.constant() == other.constant()
    }

    pub fn is_degenerate(&self) -> bool {
        self.gram.det().is_zero()
    }

    pub fn is_indefinite(&self) -> bool {
        self.quadratic_form().is_indefinite()
    }
}

impl AffineFunctional {
    pub fn eval(&self, x: &Vector) -> Scalar {
        self.coeffs.dot(x).add(&self.constant)
    }

    pub fn is_linear(&self) -> bool {
        self.constant.is_zero()
    }

    /// Forgets a vanishing constant term.
    pub fn linear_form(&self) -> Option<LinearForm> {
        if self.is_linear() {
            Some(LinearForm::new(self.coeffs.clone()))
        } else {
            None
        }
    }
}

/// Exact tangency of the plane {L = 0} to the cone {Q = 0}, decided
/// division-free via the adjugate: ℓ·adj(A)·ℓᵀ = 0.
pub fn is_tangent(q: &QuadraticForm, l: &LinearForm) -> Result<bool, Error> {
    if q.dim() != l.dim() {
        return Err(Error::Dimension("form dimensions differ"));
    }
    if q.is_degenerate() {
        return Err(Error::Degenerate);
    }
    if l.is_zero() {
        return Err(Error::ZeroLinearForm);
    }
    let adj = q.gram().adjugate();
    Ok(l.coeffs().dot(&adj.mul_vec(l.coeffs())).is_zero())
}

/// Exact coefficient-level substitution: returns (F′, L′) with
/// F′(x) = λ·F(m(x)) and L′(x) = μ·L(m(x)).
///
/// F′ has gram λ·gᵀAg and shift g⁻¹(ξ+v). The substituted linear form
/// acquires the constant μ·ℓ·v, so it is returned as an affine functional.
pub fn transform_pair(
    f: &InhomogeneousForm,
    l: &LinearForm,
    lambda: &Scalar,
    mu: &Scalar,
    m: &AffineMap,
) -> (InhomogeneousForm, AffineFunctional) {
    assert!(!lambda.is_zero() && !mu.is_zero(), "scales must be nonzero");
    assert_eq!(f.dim(), m.dim(), "dimension mismatch");
    assert_eq!(l.dim(), m.dim(), "dimension mismatch");
    let g = m.linear_part();
    let v = m.translation_part();
    let gram = g.transpose().mul(f.gram()).mul(g).scale(lambda);
    let ginv = g.inverse().expect("affine map has invertible linear part");
    let shift = ginv.mul_vec(&f.shift().add(v));
    let f2 = InhomogeneousForm { gram, shift };
    let lt = AffineFunctional {
        coeffs: g.transpose().mul_vec(l.coeffs()).scale(mu),
        constant: l.eval(v).mul(mu),
    };
    (f2, lt)
}

/// Exact data of the pullback F(Bx) as a polynomial on the hyperplane
/// coordinates: (gram BᵀAB, half-linear coefficient BᵀAξ, constant ξᵀAξ).
/// The degree-one coefficient of the polynomial is 2·BᵀAξ.
pub fn restriction_triple(
    f: &InhomogeneousForm,
    b: &Matrix,
) -> Result<(Matrix, Vector, Scalar), Error> {
    let n = f.dim();
    if b.rows() != n || b.cols() + 1 != n {
        return Err(Error::Dimension("hyperplane basis must be n×(n−1)"));
    }
    if b.rank() + 1 != n {
        return Err(Error::Dimension("hyperplane basis is rank deficient"));
    }
    let bt = b.transpose();
    let gram = bt.mul(f.gram()).mul(b);
    let half_linear = bt.mul_vec(&f.gram().mul_vec(f.shift()));
    Ok((gram, half_linear, f.constant()))
}

/// Restriction of F to the hyperplane spanned by the columns of B, in the
/// (gram, shift) shape. Requires the restricted gram to be nondegenerate,
/// so the degree-one part can be folded into a shift: ξ′ = A′⁻¹·BᵀAξ.
/// The constant term is dropped; the values of F on the hyperplane and of
/// the returned form differ by the fixed offset ξᵀAξ − ξ′ᵀA′ξ′.
pub fn restrict_to_hyperplane(
    f: &InhomogeneousForm,
    b: &Matrix,
) -> Result<InhomogeneousForm, Error> {
    let (gram, half_linear, _) = restriction_triple(f, b)?;
    let inv = gram.inverse().map_err(|_| Error::Degenerate)?;
    let shift = inv.mul_vec(&half_linear);
    Ok(InhomogeneousForm { gram, shift })
}

/// Value offset between F on the hyperplane and the public restricted
/// form: F(Bx) − F|_B(x), a constant.
pub fn restriction_offset(f: &InhomogeneousForm, b: &Matrix) -> Result<Scalar, Error> {
    let restricted = restrict_to_hyperplane(f, b)?;
    Ok(f.constant().sub(&restricted.constant()))
}

/// Integer sequence 0, 1, −1, 2, −2, … used to order search coordinates
/// so that small entries come first.
fn balanced_values(h: i64) -> Vec<i64> {
    let mut vals = Vec::with_capacity((2 * h + 1) as usize);
    vals.push(0);
    for k in 1..=h {
        vals.push(k);
        vals.push(-k);
    }
    vals
}

/// All nonzero integer vectors with entries bounded by h, ordered
/// lexicographically by per-coordinate balanced order.
fn balanced_vectors(n: usize, h: i64) -> Vec<Vector> {
    let vals = balanced_values(h);
    let mut out = Vec::new();
    let total = vals.len().pow(n as u32);
    for idx in 0..total {
        let mut rem = idx;
        let mut coords = Vec::with_capacity(n);
        for _ in 0..n {
            coords.push(vals[rem % vals.len()]);
            rem /= vals.len();
        }
        coords.reverse();
        if coords.iter().any(|&c| c != 0) {
            out.push(Vector::from_ints(&coords));
        }
    }
    out
}

/// Integer n×(n−1) matrices whose columns extend to a basis of Z^n have
/// coprime maximal minors.
fn has_coprime_maximal_minors(b: &Matrix) -> bool {
    use num_bigint::BigInt;
    use num_integer::Integer;
    use num_traits::Zero;
    let n = b.rows();
    let mut g = BigInt::zero();
    for skip in 0..n {
        let mut sub = Matrix::zeros(n - 1, n - 1);
        let mut r = 0;
        for i in 0..n {
            if i == skip {
                continue;
            }
            for j in 0..(n - 1) {
                sub[(r, j)] = b[(i, j)].clone();
            }
            r += 1;
        }
        let det = sub.det();
        debug_assert!(det.is_integer());
        g = g.gcd(&det.as_rational().expect("integer minor").to_integer());
    }
    g == BigInt::from(1)
}

/// Searches integral hyperplane bases with entries bounded by
/// height_bound whose restriction stays indefinite, nondegenerate, and
/// irrational. Candidates are enumerated deterministically: columns are
/// drawn from the balanced-lexicographic vector order and combined in
/// lexicographic index order, so repeated runs return the same basis.
pub fn find_good_hyperplane(f: &InhomogeneousForm, height_bound: i64) -> Result<Matrix, Error> {
    let n = f.dim();
    if f.is_degenerate() {
        return Err(Error::Degenerate);
    }
    if !f.is_indefinite() {
        return Err(Error::Definite);
    }
    if !crate::rationality::is_irrational_inhom(f) {
        return Err(Error::RationalForm);
    }
    if height_bound <= 0 || n < 3 {
        return Err(Error::NotFound("no admissible hyperplane basis"));
    }
    let candidates = balanced_vectors(n, height_bound);
    let k = n - 1;
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        let cols: Vec<Vector> = idx.iter().map(|&i| candidates[i].clone()).collect();
        let b = Matrix::from_columns(&cols);
        if b.rank() == k && has_coprime_maximal_minors(&b) {
            if let Ok(restricted) = restrict_to_hyperplane(f, &b) {
                if restricted.is_indefinite()
                    && crate::rationality::is_irrational_inhom(&restricted)
                {
                    return Ok(b);
                }
            }
        }
        // Advance the index combination in lexicographic order.
        let mut pos = k;
        while pos > 0 {
            pos -= 1;
            if idx[pos] + (k - pos) < candidates.len() {
                idx[pos] += 1;
                for p in (pos + 1)..k {
                    idx[p] = idx[p - 1] + 1;
                }
                break;
            }
            if pos == 0 {
                return Err(Error::NotFound("no admissible hyperplane basis"));
            }
        }
    }
}
