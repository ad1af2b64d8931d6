//! Symmetry flows of pairs (F, L): the one-parameter unipotent flow of
//! the normal pair, affine lifts of linear stabilizer elements,
//! conjugation back to original coordinates, and the exact centralizer
//! computation in GL(3)⋉R³.

use alloc::vec::Vec;

use crate::affine::AffineMap;
use crate::error::Error;
use crate::forms::{transform_pair, InhomogeneousForm, LinearForm, QuadraticForm};
use crate::linalg::{in_span, spans_equal, LinearSolution, Matrix, Vector};
use crate::normalize::NormalizationCertificate;
use crate::scalar::Scalar;

/// The affine flow element preserving the normal pair (2x₁x₃ − x₂²
/// shifted by (0,0,α), x₃):
/// linear part (1, t, t²/2; 0, 1, t; 0, 0, 1), translation (αt²/2, αt, 0).
pub fn h_alpha(alpha: &Scalar, t: &Scalar) -> AffineMap {
    let two = Scalar::from_int(2);
    let t2h = t.mul(t).div(&two);
    let mut g = Matrix::identity(3);
    g[(0, 1)] = t.clone();
    g[(0, 2)] = t2h.clone();
    g[(1, 2)] = t.clone();
    let v = Vector::new(alloc::vec![
        alpha.mul(&t2h),
        alpha.mul(t),
        Scalar::zero(),
    ]);
    AffineMap::new(g, v).expect("unipotent linear part")
}

/// Exact invariance check: F(m(x)) = F(x) as polynomials, and likewise
/// for L when given (with no constant term picked up).
pub fn preserves_pair(m: &AffineMap, f: &InhomogeneousForm, l: Option<&LinearForm>) -> bool {
    let one = Scalar::one();
    let probe = l.cloned().unwrap_or_else(|| LinearForm::new(Vector::zeros(f.dim())));
    let (f2, l2) = transform_pair(f, &probe, &one, &one, m);
    if !f2.poly_eq(f) {
        return false;
    }
    match l {
        Some(l) => l2.coeffs == *l.coeffs() && l2.constant.is_zero(),
        None => true,
    }
}

/// Lifts a linear stabilizer element to the affine stabilizer of the
/// shifted form: g with gᵀAg = A (and ℓg = ℓ when L is given) lifts to
/// (g, gξ − ξ).
pub fn lift_joint(
    q: &QuadraticForm,
    l: Option<&LinearForm>,
    g: &Matrix,
    xi: &Vector,
) -> Result<AffineMap, Error> {
    if g.rows() != q.dim() || g.cols() != q.dim() || xi.dim() != q.dim() {
        return Err(Error::Dimension("lift shape mismatch"));
    }
    if g.transpose().mul(q.gram()).mul(g) != *q.gram() {
        return Err(Error::InvalidGenerator("gᵀAg ≠ A"));
    }
    if let Some(l) = l {
        if g.transpose().mul_vec(l.coeffs()) != *l.coeffs() {
            return Err(Error::InvalidGenerator("ℓg ≠ ℓ"));
        }
    }
    let v = g.mul_vec(xi).sub(xi);
    let lifted = AffineMap::new(g.clone(), v).map_err(|_| Error::Singular)?;
    debug_assert!(preserves_pair(
        &lifted,
        &InhomogeneousForm::from_form(q, xi.clone()),
        l
    ));
    Ok(lifted)
}

/// The stabilizer flow of the original pair, obtained by conjugating the
/// normal-pair flow through the normalization certificate:
/// m ∘ h_α(t) ∘ m⁻¹.
pub fn conjugated_flow(cert: &NormalizationCertificate, t: &Scalar) -> AffineMap {
    cert.map
        .compose(&h_alpha(&cert.alpha, t))
        .compose(&cert.map.inverse())
}

/// Exact description of the affine subspace of GL(3)⋉R³ elements
/// commuting with every generator (invertibility of the matrix part is
/// not imposed by the linear system and must be checked by consumers).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralizerSolution {
    pub particular: (Matrix, Vector),
    pub basis: Vec<(Matrix, Vector)>,
}

fn flatten(h: &Matrix, u: &Vector) -> Vector {
    let mut out = Vector::zeros(12);
    for i in 0..3 {
        for j in 0..3 {
            out[3 * i + j] = h[(i, j)].clone();
        }
    }
    for i in 0..3 {
        out[9 + i] = u[i].clone();
    }
    out
}

fn unflatten(z: &Vector) -> (Matrix, Vector) {
    let mut h = Matrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            h[(i, j)] = z[3 * i + j].clone();
        }
    }
    let mut u = Vector::zeros(3);
    for i in 0..3 {
        u[i] = z[9 + i].clone();
    }
    (h, u)
}

impl CentralizerSolution {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// True when the solution set is exactly the line {(c·I, (c−1)·ξ)}.
    pub fn is_scalar_shift_line(&self, xi: &Vector) -> bool {
        if self.basis.len() != 1 {
            return false;
        }
        let direction = flatten(&Matrix::identity(3), xi);
        let base = flatten(&Matrix::zeros(3, 3), &xi.neg());
        let kernel: Vec<Vector> = self
            .basis
            .iter()
            .map(|(h, u)| flatten(h, u))
            .collect();
        if !spans_equal(&kernel, &[direction]) {
            return false;
        }
        let p = flatten(&self.particular.0, &self.particular.1);
        in_span(&kernel, &p.sub(&base))
    }
}

/// Solves the exact linear system making (h, u) commute with every
/// generator (g, w): gh = hg and gu + w = hw + u, 12 unknowns. Every
/// generator must preserve F.
pub fn centralizer_solve(
    f: &InhomogeneousForm,
    generators: &[AffineMap],
) -> CentralizerSolution {
    assert_eq!(f.dim(), 3, "centralizer computation is three-dimensional");
    for m in generators {
        assert!(preserves_pair(m, f, None), "generator must preserve the form");
    }
    let rows_per = 12;
    let mut mat = Matrix::zeros(rows_per * generators.len().max(1), 12);
    let mut rhs = Vector::zeros(rows_per * generators.len().max(1));
    for (gi, m) in generators.iter().enumerate() {
        let g = m.linear_part();
        let w = m.translation_part();
        let base = gi * rows_per;
        // gh − hg = 0, entry (i, j).
        for i in 0..3 {
            for j in 0..3 {
                let r = base + 3 * i + j;
                for k in 0..3 {
                    let c_hkj = g[(i, k)].clone();
                    mat[(r, 3 * k + j)] = mat[(r, 3 * k + j)].add(&c_hkj);
                    let c_hik = g[(k, j)].clone();
                    mat[(r, 3 * i + k)] = mat[(r, 3 * i + k)].sub(&c_hik);
                }
            }
        }
        // (g − I)u − hw = −w, row i.
        for i in 0..3 {
            let r = base + 9 + i;
            for k in 0..3 {
                let mut c = g[(i, k)].clone();
                if i == k {
                    c = c.sub(&Scalar::one());
                }
                mat[(r, 9 + k)] = c;
                mat[(r, 3 * i + k)] = w[k].neg();
            }
            rhs[r] = w[i].neg();
        }
    }
    match mat.solve(&rhs) {
        LinearSolution::Solution { particular, kernel } => CentralizerSolution {
            particular: unflatten(&particular),
            basis: kernel.iter().map(unflatten).collect(),
        },
        LinearSolution::Inconsistent => {
            unreachable!("(I, 0) always satisfies the commutation system")
        }
    }
}

/// Exact element of SO(Q) moving the plane spanned by the i-th and j-th
/// congruence-diagonalization axes, rationally parametrized: on a block
/// a·x² + c·y² the matrix (A, −2cpq; 2apq, A)/N with A = p² − acq²,
/// N = p² + acq² preserves the form and has determinant one. Signs of
/// a·c decide rotation versus boost. Fails when N = 0 or a diagonal
/// entry vanishes.
pub fn so_plane_element(
    q: &QuadraticForm,
    i: usize,
    j: usize,
    p: &Scalar,
    t: &Scalar,
) -> Result<Matrix, Error> {
    let n = q.dim();
    if i >= n || j >= n || i == j {
        return Err(Error::Dimension("plane indices out of range"));
    }
    let (s, diag) = q.congruence_diagonalize();
    let a = diag[i].clone();
    let c = diag[j].clone();
    if a.is_zero() || c.is_zero() {
        return Err(Error::Degenerate);
    }
    let ac = a.mul(&c);
    let p2 = p.mul(p);
    let t2 = t.mul(t);
    let nn = p2.add(&ac.mul(&t2));
    if nn.is_zero() {
        return Err(Error::InvalidGenerator("parameter on the null cone"));
    }
    let aa = p2.sub(&ac.mul(&t2));
    let pt = p.mul(t);
    let two = Scalar::from_int(2);
    let mut block = Matrix::identity(n);
    block[(i, i)] = aa.div(&nn);
    block[(i, j)] = two.mul(&c).mul(&pt).div(&nn).neg();
    block[(j, i)] = two.mul(&a).mul(&pt).div(&nn);
    block[(j, j)] = aa.div(&nn);
    let g = s.mul(&block).mul(&s.inverse().expect("congruence basis"));
    debug_assert_eq!(g.transpose().mul(q.gram()).mul(&g), *q.gram());
    debug_assert_eq!(g.det(), Scalar::one());
    Ok(g)
}
