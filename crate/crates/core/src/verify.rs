//! Re-derives the algebraic facts the library rests on and reports one
//! outcome per check: generation of so(2,1) by nilpotents, the sl(2)
//! triple, ad-kernel dimensions, semidirect bracket values, the
//! unimodular subalgebra sweeps, identification of the conjugated
//! so(Q₀) family, the congruence between the two so conventions, flow
//! invariance, stabilizer lifts, the centralizer line, and the normal
//! form round trip.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::Error;
use crate::forms::{InhomogeneousForm, LinearForm, QuadraticForm};
use crate::lie::{
    ad_kernel, algebras_h_alpha, bracket, bracket_closure, catalog, exp_nilpotent, sl2_triple,
    so21_element, so_of, unimodular_algebras_h0, verify_sl2_relations, LieElement, Subalgebra,
};
use crate::linalg::{Matrix, Vector};
use crate::normalize::{
    certificate_is_valid, normal_linear, normal_quadratic, normal_target, normalize_pair,
    normalize_single,
};
use crate::scalar::Scalar;
use crate::stabilizer::{
    centralizer_solve, conjugated_flow, h_alpha, lift_joint, preserves_pair, so_plane_element,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LemmaCheck {
    pub id: &'static str,
    pub pass: bool,
    pub detail: String,
}

fn check(id: &'static str, pass: bool, detail: String) -> LemmaCheck {
    LemmaCheck { id, pass, detail }
}

fn sc(text: &str) -> Scalar {
    text.parse().expect("literal scalar")
}

fn sample_alphas() -> [Scalar; 3] {
    [Scalar::one(), Scalar::sqrt_of(2).unwrap(), sc("-3/2")]
}

fn unipotent_generators_span_so21() -> LemmaCheck {
    let one = Scalar::one();
    let zero = Scalar::zero();
    let h110 = so21_element(&one, &one, &zero);
    let h101 = so21_element(&one, &zero, &one);
    let h111 = so21_element(&one, &one, &one);
    let sigma = QuadraticForm::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
    let closure = bracket_closure(&[h110.clone(), h101.clone()]);
    let pass = h110.is_nilpotent()
        && h101.is_nilpotent()
        && closure.dim() == 3
        && closure.contains_element(&h111)
        && closure.span_equals(&so_of(&sigma).unwrap());
    check(
        "unipotent_generators_span_so21",
        pass,
        format!(
            "closure of two nilpotent generators has dimension {} and matches so(2,1)",
            closure.dim()
        ),
    )
}

fn sl2_triple_relations() -> LemmaCheck {
    let results = verify_sl2_relations();
    let failed: Vec<&str> = results
        .iter()
        .filter(|(_, ok)| !ok)
        .map(|(label, _)| *label)
        .collect();
    check(
        "sl2_triple_relations",
        failed.is_empty(),
        if failed.is_empty() {
            format!("{} relations verified exactly", results.len())
        } else {
            format!("failed: {}", failed.join(", "))
        },
    )
}

fn ad_kernel_dimensions() -> LemmaCheck {
    let sl3 = catalog("sl3/0", &[]).unwrap();
    let (_, u, _) = sl2_triple();
    let ker = ad_kernel(&u, &sl3);
    let display = Subalgebra::new(alloc::vec![
        LieElement::linear(Matrix::from_ints(&[&[0, 1, 1], &[-1, 0, 0], &[1, 0, 0]])).unwrap(),
        LieElement::linear(Matrix::from_ints(&[&[0, 0, 0], &[0, 1, 1], &[0, -1, -1]])).unwrap(),
    ])
    .unwrap();
    let sigma = QuadraticForm::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
    let inside_so = ad_kernel(&u, &so_of(&sigma).unwrap());
    let kernel_matches = match Subalgebra::new(ker.clone()) {
        Ok(alg) => alg.span_equals(&display),
        Err(_) => false,
    };
    let pass = ker.len() == 2
        && kernel_matches
        && inside_so.len() == 1
        && Subalgebra::new(inside_so.clone())
            .map(|alg| alg.contains_element(&u))
            .unwrap_or(false);
    check(
        "ad_kernel_dimensions",
        pass,
        format!(
            "ker(ad u) has dimension {} in sl(3) and {} inside so(2,1)",
            ker.len(),
            inside_so.len()
        ),
    )
}

fn semidirect_translation_brackets() -> LemmaCheck {
    let g = LieElement::new(
        Matrix::from_ints(&[&[1, 0, 1], &[6, 1, 0], &[1, 0, -2]]),
        Vector::from_ints(&[1, 1, 0]),
    )
    .unwrap();
    let g1 = LieElement::new(
        Matrix::diagonal(&[Scalar::one(), Scalar::one(), Scalar::from_int(-2)]),
        Vector::from_ints(&[0, 0, 2]),
    )
    .unwrap();
    let g2 = LieElement::new(
        Matrix::from_ints(&[&[1, 0, 1], &[0, 1, 0], &[1, 0, -2]]),
        Vector::from_ints(&[0, 0, 5]),
    )
    .unwrap();
    let corner = Matrix::from_ints(&[&[0, 0, -3], &[0, 0, 0], &[3, 0, 0]]);
    let br = bracket(&g, &g1);
    let br2 = bracket(&g2, &g1);
    let difference = br2.sub(&br);
    let pure_translation = difference.matrix_part().is_zero()
        && !difference.translation_part().is_zero();
    let pass = br.matrix_part() == &corner
        && br.translation_part() == &Vector::from_ints(&[1, -1, -4])
        && br2.matrix_part() == &corner
        && br2.translation_part() == &Vector::from_ints(&[2, 0, 6])
        && pure_translation;
    check(
        "semidirect_translation_brackets",
        pass,
        String::from("two explicit brackets agree entrywise; their difference is a pure translation"),
    )
}

fn unimodular_family_sweep() -> LemmaCheck {
    let h0 = catalog("H", &[Scalar::zero()]).unwrap();
    let samples = [
        (Scalar::zero(), Scalar::one()),
        (Scalar::one(), Scalar::sqrt_of(2).unwrap()),
        (Scalar::from_int(-2), sc("-3/2")),
    ];
    let mut entries = 0usize;
    for (t, beta) in &samples {
        for alg in unimodular_algebras_h0(t, beta) {
            entries += 1;
            if !alg.is_unimodular() || !alg.contains(&h0) {
                return check(
                    "unimodular_family_sweep",
                    false,
                    format!("failed entry: {alg:?} at t = {t}, beta = {beta}"),
                );
            }
        }
    }
    check(
        "unimodular_family_sweep",
        true,
        format!("{entries} materialized algebras are unimodular and contain the flow line"),
    )
}

fn flow_line_containment_sweep() -> LemmaCheck {
    let t = Scalar::one();
    let beta = sc("1/2");
    let mut entries = 0usize;
    for alpha in sample_alphas() {
        let h = catalog("H", core::slice::from_ref(&alpha)).unwrap();
        for alg in algebras_h_alpha(&alpha, &t, &beta) {
            entries += 1;
            if !alg.contains(&h) {
                return check(
                    "flow_line_containment_sweep",
                    false,
                    format!("failed entry: {alg:?} at alpha = {alpha}"),
                );
            }
        }
    }
    let negative = !catalog("V1/0", &[])
        .unwrap()
        .contains(&catalog("H", &[Scalar::one()]).unwrap());
    check(
        "flow_line_containment_sweep",
        negative,
        format!("{entries} algebras contain their flow line; sheared line escapes V1/0"),
    )
}

fn conjugated_so_q0_identification() -> LemmaCheck {
    let q0 = QuadraticForm::from_ints(&[&[0, 0, 1], &[0, -1, 0], &[1, 0, 0]]);
    let so = match so_of(&q0) {
        Ok(s) => s,
        Err(e) => {
            return check(
                "conjugated_so_q0_identification",
                false,
                format!("so solver failed: {e}"),
            )
        }
    };
    for t in [Scalar::zero(), Scalar::one(), Scalar::from_int(-2)] {
        let mut v = Matrix::identity(3);
        v[(0, 2)] = t.clone();
        let vinv = v.inverse().unwrap();
        let conjugated: Vec<LieElement> = so
            .basis()
            .iter()
            .map(|x| LieElement::linear(v.mul(x.matrix_part()).mul(&vinv)).unwrap())
            .collect();
        let family = catalog("R/0", core::slice::from_ref(&t)).unwrap();
        let ok = match Subalgebra::new(conjugated) {
            Ok(alg) => alg.span_equals(&family),
            Err(_) => false,
        };
        if !ok {
            return check(
                "conjugated_so_q0_identification",
                false,
                format!("conjugated family mismatch at t = {t}"),
            );
        }
    }
    check(
        "conjugated_so_q0_identification",
        true,
        String::from("conjugating so(Q0) by the corner shear reproduces the catalog family at three parameters"),
    )
}

fn so_convention_congruence() -> LemmaCheck {
    let q0 = normal_quadratic();
    let (lambda, map) = match normalize_single(&q0, &Vector::zeros(3), 2) {
        Ok(pair) => pair,
        Err(e) => {
            return check(
                "so_convention_congruence",
                false,
                format!("single-form normalization failed: {e}"),
            )
        }
    };
    let t = map.linear_part();
    let sigma = Matrix::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
    let congruent = t.transpose().mul(q0.gram()).mul(t).scale(&lambda) == sigma;
    let tinv = t.inverse().unwrap();
    let sigma_form = QuadraticForm::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
    let so_sigma = so_of(&sigma_form).unwrap();
    let so_q0 = so_of(&q0).unwrap();
    let conjugated: Vec<LieElement> = so_sigma
        .basis()
        .iter()
        .map(|x| LieElement::linear(t.mul(x.matrix_part()).mul(&tinv)).unwrap())
        .collect();
    let carried = match Subalgebra::new(conjugated) {
        Ok(alg) => alg.span_equals(&so_q0),
        Err(_) => false,
    };
    check(
        "so_convention_congruence",
        congruent && carried,
        format!("TᵀAT = (1/λ)·diag(1,1,-1) with λ = {lambda}; conjugation carries one so onto the other"),
    )
}

fn flow_preserves_normal_pair() -> LemmaCheck {
    let samples = [
        (Scalar::zero(), Scalar::one()),
        (Scalar::one(), Scalar::one()),
        (Scalar::sqrt_of(2).unwrap(), Scalar::from_int(3)),
        (Scalar::from_int(-2), sc("1/2")),
    ];
    for (alpha, t) in &samples {
        let (f, l) = normal_target(alpha);
        if !preserves_pair(&h_alpha(alpha, t), &f, Some(&l)) {
            return check(
                "flow_preserves_normal_pair",
                false,
                format!("flow fails at alpha = {alpha}, t = {t}"),
            );
        }
        let gen = catalog("H", core::slice::from_ref(alpha)).unwrap().basis()[0].clone();
        if exp_nilpotent(&gen.scale(t)).ok() != Some(h_alpha(alpha, t)) {
            return check(
                "flow_preserves_normal_pair",
                false,
                format!("exponential mismatch at alpha = {alpha}, t = {t}"),
            );
        }
    }
    check(
        "flow_preserves_normal_pair",
        true,
        format!("{} parameter pairs preserved; flow equals the exponential of its generator", samples.len()),
    )
}

fn joint_stabilizer_lift() -> LemmaCheck {
    let q = normal_quadratic();
    let l = normal_linear();
    let xi = Vector::from_ints(&[0, 0, 5]);
    let g = h_alpha(&Scalar::zero(), &Scalar::one());
    let lifted = match lift_joint(&q, Some(&l), g.linear_part(), &xi) {
        Ok(m) => m,
        Err(e) => {
            return check(
                "joint_stabilizer_lift",
                false,
                format!("lift rejected a linear stabilizer element: {e}"),
            )
        }
    };
    let expected = Vector::new(alloc::vec![
        sc("5/2"),
        Scalar::from_int(5),
        Scalar::zero(),
    ]);
    let translation_ok = lifted.translation_part() == &expected;
    let f = InhomogeneousForm::from_form(&q, xi.clone());
    let preserved = preserves_pair(&lifted, &f, Some(&l));
    let bad = Matrix::from_ints(&[&[2, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
    let rejected = matches!(
        lift_joint(&q, Some(&l), &bad, &xi),
        Err(Error::InvalidGenerator(_))
    );
    check(
        "joint_stabilizer_lift",
        translation_ok && preserved && rejected,
        format!("lifted translation {:?}; invariance holds; non-stabilizer rejected", lifted.translation_part()),
    )
}

fn centralizer_scalar_line() -> LemmaCheck {
    let alpha = Scalar::sqrt_of(2).unwrap();
    let (f, l) = normal_target(&alpha);
    let q = f.quadratic_form();
    let xi = f.shift().clone();
    let cert = match normalize_pair(&q, &xi, &l) {
        Ok(c) => c,
        Err(e) => {
            return check(
                "centralizer_scalar_line",
                false,
                format!("normalization failed: {e}"),
            )
        }
    };
    let mut gens = alloc::vec![
        conjugated_flow(&cert, &Scalar::one()),
        conjugated_flow(&cert, &Scalar::sqrt_of(2).unwrap()),
        conjugated_flow(&cert, &Scalar::from_int(-1)),
    ];
    for (i, j) in [(0usize, 1usize), (0, 2)] {
        match so_plane_element(&q, i, j, &Scalar::from_int(2), &Scalar::one()) {
            Ok(g) => match lift_joint(&q, None, &g, &xi) {
                Ok(m) => gens.push(m),
                Err(e) => {
                    return check(
                        "centralizer_scalar_line",
                        false,
                        format!("lift failed: {e}"),
                    )
                }
            },
            Err(e) => {
                return check(
                    "centralizer_scalar_line",
                    false,
                    format!("plane element failed: {e}"),
                )
            }
        }
    }
    let sol = centralizer_solve(&f, &gens);
    check(
        "centralizer_scalar_line",
        sol.dim() == 1 && sol.is_scalar_shift_line(&xi),
        format!("solution space has dimension {}", sol.dim()),
    )
}

fn normal_form_roundtrip() -> LemmaCheck {
    let q = QuadraticForm::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
    let xi = Vector::new(alloc::vec![
        Scalar::zero(),
        Scalar::zero(),
        Scalar::sqrt_of(2).unwrap(),
    ]);
    let l = LinearForm::new(Vector::new(alloc::vec![
        Scalar::one(),
        Scalar::one(),
        Scalar::sqrt_of(2).unwrap(),
    ]));
    let cert = match normalize_pair(&q, &xi, &l) {
        Ok(c) => c,
        Err(e) => {
            return check(
                "normal_form_roundtrip",
                false,
                format!("normalization failed: {e}"),
            )
        }
    };
    let valid = certificate_is_valid(&q, &xi, &l, &cert);
    let f = InhomogeneousForm::from_form(&q, xi.clone());
    let flow_ok = [Scalar::one(), Scalar::sqrt_of(2).unwrap()]
        .iter()
        .all(|t| preserves_pair(&conjugated_flow(&cert, t), &f, Some(&l)));
    check(
        "normal_form_roundtrip",
        valid && flow_ok,
        format!("certificate alpha = {}; conjugated flow preserves the original pair", cert.alpha),
    )
}

/// Runs every check and returns the reports in a stable order.
pub fn run_all() -> Vec<LemmaCheck> {
    alloc::vec![
        unipotent_generators_span_so21(),
        sl2_triple_relations(),
        ad_kernel_dimensions(),
        semidirect_translation_brackets(),
        unimodular_family_sweep(),
        flow_line_containment_sweep(),
        conjugated_so_q0_identification(),
        so_convention_congruence(),
        flow_preserves_normal_pair(),
        joint_stabilizer_lift(),
        centralizer_scalar_line(),
        normal_form_roundtrip(),
    ]
}
