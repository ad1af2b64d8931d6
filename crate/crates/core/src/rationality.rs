//! Exact rationality decisions: rational rays, irrationality of shifted
//! forms, and the all-nonzero-combinations condition on pairs (F, L).

use alloc::vec::Vec;

use crate::forms::{is_tangent, InhomogeneousForm, LinearForm, QuadraticForm};
use crate::linalg::{Matrix, Vector};
use crate::scalar::Scalar;

/// Aggregated hypothesis checks for a pair (Q, ξ, L).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypothesisReport {
    pub tangent: bool,
    pub q_irrational: bool,
    pub xi_irrational: bool,
    pub combo_condition: bool,
    /// Pair (a, b) with a·F + b·L² rational, present iff combo_condition
    /// is false.
    pub witnesses: Option<(Scalar, Scalar)>,
}

impl HypothesisReport {
    pub fn all_pass(&self) -> bool {
        self.tangent && self.combo_condition
    }
}

/// True iff some real t ≠ 0 makes every t·cᵢ rational; equivalently all
/// ratios of nonzero entries lie in Q. The zero tuple counts as rational.
pub fn is_rational_ray(coeffs: &[Scalar]) -> bool {
    let Some(pivot) = coeffs.iter().find(|c| !c.is_zero()) else {
        return true;
    };
    let inv = pivot.inv();
    coeffs.iter().all(|c| c.mul(&inv).is_rational())
}

/// Irrationality of F(x) = (x+ξ)ᵀA(x+ξ) as a polynomial: the quadratic
/// and linear coefficients, taken together, do not lie on a rational ray.
/// The constant term is ignored. For nondegenerate A this is equivalent
/// to: A is not proportional to a rational matrix, or ξ ∉ Qⁿ.
pub fn is_irrational_inhom(f: &InhomogeneousForm) -> bool {
    !is_rational_ray(&f.poly_coeffs())
}

/// Quadratic-and-linear coefficient vector of a·F + b·L².
pub fn combo_coeffs(
    f: &InhomogeneousForm,
    l: &LinearForm,
    a: &Scalar,
    b: &Scalar,
) -> Vec<Scalar> {
    assert_eq!(f.dim(), l.dim(), "dimension mismatch");
    let fa = f.poly_coeffs();
    let mut sb = l.square().monomial_coeffs();
    sb.resize(fa.len(), Scalar::zero());
    fa.iter()
        .zip(sb.iter())
        .map(|(x, y)| x.mul(a).add(&y.mul(b)))
        .collect()
}

/// Decides whether every combination a·F + b·L² with (a, b) ≠ (0, 0) is
/// irrational; returns a witness pair otherwise.
///
/// Coefficients are searched over Q(√d)², which loses nothing: the bad
/// set is cut out by linear conditions with Q(√d) coefficients, so when
/// it is nonempty over R it already contains a Q(√d) point. Since ray
/// rationality is invariant under scaling the whole combination, the
/// search reduces to b = 0 or a = 0 rays plus, writing every coefficient
/// vector as (rational part) + (radical part)·√d, a rational 4-unknown
/// kernel computation for a = 1, b = p + q√d.
pub fn check_combo_condition(
    f: &InhomogeneousForm,
    l: &LinearForm,
) -> (bool, Option<(Scalar, Scalar)>) {
    let a_hat = f.poly_coeffs();
    let mut s_hat = l.square().monomial_coeffs();
    s_hat.resize(a_hat.len(), Scalar::zero());

    if is_rational_ray(&a_hat) {
        return (false, Some((Scalar::one(), Scalar::zero())));
    }
    if is_rational_ray(&s_hat) {
        return (false, Some((Scalar::zero(), Scalar::one())));
    }
    // Both rays irrational forces a genuine radical somewhere.
    let d = a_hat
        .iter()
        .chain(s_hat.iter())
        .map(Scalar::discriminant)
        .find(|&d| d != 1)
        .expect("irrational entries carry a nontrivial discriminant");

    // Rational ray of A + bS with b = p + q√d means the rational and
    // radical parts of the combined vector are parallel over Q:
    // c₁(A_r + pS_r + qdS_s) = c₂(A_s + pS_s + qS_r) for some (c₁,c₂)≠0.
    // Rearranged, (c₁, c₂, x, y) with x = c₁p − c₂q, y = c₁qd − c₂p lies
    // in the kernel of [A_r | −A_s | S_r | S_s]. Because the S-ray is
    // irrational, S_r and S_s are independent, so every nonzero kernel
    // vector has (c₁, c₂) ≠ 0 and (p, q) can be recovered: the 2×2 system
    // has determinant c₁²d − c₂² ≠ 0 (d is not a rational square).
    let n = a_hat.len();
    let mut m = Matrix::zeros(n, 4);
    for i in 0..n {
        m[(i, 0)] = Scalar::rational(a_hat[i].rational_part().clone());
        m[(i, 1)] = Scalar::rational(a_hat[i].radical_in(d)).neg();
        m[(i, 2)] = Scalar::rational(s_hat[i].rational_part().clone());
        m[(i, 3)] = Scalar::rational(s_hat[i].radical_in(d));
    }
    let kernel = m.kernel();
    let Some(k) = kernel.first() else {
        return (true, None);
    };
    let (c1, c2, x, y) = (&k[0], &k[1], &k[2], &k[3]);
    debug_assert!(!c1.is_zero() || !c2.is_zero());
    let drat = Scalar::from_int(d as i64);
    let det = c1.mul(c1).mul(&drat).sub(&c2.mul(c2));
    let p = c1.mul(&drat).mul(x).add(&c2.mul(y)).div(&det);
    let q = c2.mul(x).add(&c1.mul(y)).div(&det);
    let b = Scalar::new(
        p.as_rational().expect("rational solve").clone(),
        q.as_rational().expect("rational solve").clone(),
        d,
    )
    .expect("valid discriminant");
    debug_assert!(is_rational_ray(&combo_coeffs(f, l, &Scalar::one(), &b)));
    (false, Some((Scalar::one(), b)))
}

/// Runs all hypothesis checks for the pair (Q, ξ, L).
pub fn check_hypotheses(q: &QuadraticForm, xi: &Vector, l: &LinearForm) -> HypothesisReport {
    let f = InhomogeneousForm::from_form(q, xi.clone());
    let tangent = is_tangent(q, l).unwrap_or(false);
    let q_irrational = !is_rational_ray(&q.monomial_coeffs());
    let xi_irrational = !xi.is_rational();
    let (combo_condition, witnesses) = check_combo_condition(&f, l);
    HypothesisReport {
        tangent,
        q_irrational,
        xi_irrational,
        combo_condition,
        witnesses,
    }
}
