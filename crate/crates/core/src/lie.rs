//! Exact Lie theory of the affine group: elements of sl(3)⋉R³, the
//! semidirect bracket, bracket closures, ad-kernels, unimodularity, the
//! catalog of subalgebras acting on the normal-pair flow, and the
//! nilpotent exponential back to the group.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::affine::AffineMap;
use crate::error::Error;
use crate::forms::QuadraticForm;
use crate::linalg::{in_span, spans_equal, LinearSolution, Matrix, Vector};
use crate::scalar::Scalar;

/// Element (X, u) of sl(3,R)⋉R³; the trace of X vanishes exactly.
#[derive(Clone, PartialEq, Eq)]
pub struct LieElement {
    x: Matrix,
    u: Vector,
}

impl LieElement {
    pub fn new(x: Matrix, u: Vector) -> Result<LieElement, Error> {
        if !x.is_square() || x.rows() != 3 || u.dim() != 3 {
            return Err(Error::Dimension("Lie elements are 3-dimensional"));
        }
        if !x.trace().is_zero() {
            return Err(Error::InvalidGenerator("matrix part has nonzero trace"));
        }
        Ok(LieElement { x, u })
    }

    pub fn linear(x: Matrix) -> Result<LieElement, Error> {
        LieElement::new(x, Vector::zeros(3))
    }

    pub fn translation(u: Vector) -> Result<LieElement, Error> {
        LieElement::new(Matrix::zeros(3, 3), u)
    }

    pub fn zero() -> LieElement {
        LieElement {
            x: Matrix::zeros(3, 3),
            u: Vector::zeros(3),
        }
    }

    pub fn matrix_part(&self) -> &Matrix {
        &self.x
    }

    pub fn translation_part(&self) -> &Vector {
        &self.u
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.u.is_zero()
    }

    pub fn add(&self, other: &LieElement) -> LieElement {
        LieElement {
            x: self.x.add(&other.x),
            u: self.u.add(&other.u),
        }
    }

    pub fn sub(&self, other: &LieElement) -> LieElement {
        LieElement {
            x: self.x.sub(&other.x),
            u: self.u.sub(&other.u),
        }
    }

    pub fn neg(&self) -> LieElement {
        LieElement {
            x: self.x.neg(),
            u: self.u.neg(),
        }
    }

    pub fn scale(&self, c: &Scalar) -> LieElement {
        LieElement {
            x: self.x.scale(c),
            u: self.u.scale(c),
        }
    }

    /// X³ = 0, the nilpotency bound in dimension three.
    pub fn is_nilpotent(&self) -> bool {
        self.x.mul(&self.x).mul(&self.x).is_zero()
    }

    fn flat(&self) -> Vector {
        let mut out = Vector::zeros(12);
        for i in 0..3 {
            for j in 0..3 {
                out[3 * i + j] = self.x[(i, j)].clone();
            }
        }
        for i in 0..3 {
            out[9 + i] = self.u[i].clone();
        }
        out
    }
}

impl core::fmt::Debug for LieElement {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "({:?}, {:?})", self.x, self.u)
    }
}

/// Semidirect bracket [(X,u),(Y,w)] = ([X,Y], Xw − Yu).
pub fn bracket(a: &LieElement, b: &LieElement) -> LieElement {
    let xy = a.x.mul(&b.x).sub(&b.x.mul(&a.x));
    let t = a.x.mul_vec(&b.u).sub(&b.x.mul_vec(&a.u));
    LieElement { x: xy, u: t }
}

/// Bracket-closed subspace with an exactly independent basis.
#[derive(Clone)]
pub struct Subalgebra {
    basis: Vec<LieElement>,
    catalog_id: Option<String>,
}

impl Subalgebra {
    /// Validates independence and bracket closure of the basis.
    pub fn new(basis: Vec<LieElement>) -> Result<Subalgebra, Error> {
        Subalgebra::named(basis, None)
    }

    fn named(basis: Vec<LieElement>, catalog_id: Option<String>) -> Result<Subalgebra, Error> {
        if !basis.is_empty() {
            let flats: Vec<Vector> = basis.iter().map(LieElement::flat).collect();
            if Matrix::from_columns(&flats).rank() != basis.len() {
                return Err(Error::InvalidGenerator("dependent basis"));
            }
            for (i, a) in basis.iter().enumerate() {
                for b in basis.iter().skip(i + 1) {
                    if !in_span(&flats, &bracket(a, b).flat()) {
                        return Err(Error::NotClosed);
                    }
                }
            }
        }
        Ok(Subalgebra { basis, catalog_id })
    }

    pub fn basis(&self) -> &[LieElement] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn catalog_id(&self) -> Option<&str> {
        self.catalog_id.as_deref()
    }

    fn flat_basis(&self) -> Vec<Vector> {
        self.basis.iter().map(LieElement::flat).collect()
    }

    pub fn contains_element(&self, e: &LieElement) -> bool {
        in_span(&self.flat_basis(), &e.flat())
    }

    pub fn contains(&self, other: &Subalgebra) -> bool {
        let flats = self.flat_basis();
        other.basis.iter().all(|e| in_span(&flats, &e.flat()))
    }

    pub fn span_equals(&self, other: &Subalgebra) -> bool {
        spans_equal(&self.flat_basis(), &other.flat_basis())
    }

    /// Vanishing trace of ad restricted to the algebra, on every basis
    /// element; the Lie-algebra criterion for unimodularity of the
    /// corresponding connected group.
    pub fn is_unimodular(&self) -> bool {
        if self.basis.is_empty() {
            return true;
        }
        let m = Matrix::from_columns(&self.flat_basis());
        for x in &self.basis {
            let mut trace = Scalar::zero();
            for (i, b) in self.basis.iter().enumerate() {
                match m.solve(&bracket(x, b).flat()) {
                    LinearSolution::Solution { particular, .. } => {
                        trace = trace.add(&particular[i]);
                    }
                    LinearSolution::Inconsistent => {
                        unreachable!("bracket of basis elements stays in a closed algebra")
                    }
                }
            }
            if !trace.is_zero() {
                return false;
            }
        }
        true
    }
}

impl core::fmt::Debug for Subalgebra {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match &self.catalog_id {
            Some(id) => write!(f, "Subalgebra[{id}; dim {}]", self.dim()),
            None => write!(f, "Subalgebra[dim {}]", self.dim()),
        }
    }
}

fn push_independent(basis: &mut Vec<LieElement>, flats: &mut Vec<Vector>, e: &LieElement) -> bool {
    if e.is_zero() || in_span(flats, &e.flat()) {
        return false;
    }
    flats.push(e.flat());
    basis.push(e.clone());
    true
}

/// Smallest bracket-closed subspace containing the generators: iterated
/// bracket-and-span until the rank stabilizes.
pub fn bracket_closure(gens: &[LieElement]) -> Subalgebra {
    assert!(!gens.is_empty(), "closure needs at least one generator");
    let mut basis: Vec<LieElement> = Vec::new();
    let mut flats: Vec<Vector> = Vec::new();
    for g in gens {
        push_independent(&mut basis, &mut flats, g);
    }
    loop {
        let snapshot = basis.clone();
        let mut added = false;
        for (i, a) in snapshot.iter().enumerate() {
            for b in snapshot.iter().skip(i + 1) {
                if push_independent(&mut basis, &mut flats, &bracket(a, b)) {
                    added = true;
                }
            }
        }
        if !added {
            break;
        }
    }
    Subalgebra::new(basis).expect("iterated closure is bracket-closed")
}

/// Exact basis of {y ∈ ambient : [x, y] = 0}.
pub fn ad_kernel(x: &LieElement, ambient: &Subalgebra) -> Vec<LieElement> {
    assert!(ambient.contains_element(x), "x must lie in the ambient algebra");
    if ambient.dim() == 0 {
        return Vec::new();
    }
    let images: Vec<Vector> = ambient
        .basis()
        .iter()
        .map(|b| bracket(x, b).flat())
        .collect();
    Matrix::from_columns(&images)
        .kernel()
        .iter()
        .map(|c| {
            let mut acc = LieElement::zero();
            for (i, b) in ambient.basis().iter().enumerate() {
                acc = acc.add(&b.scale(&c[i]));
            }
            acc
        })
        .collect()
}

fn e(i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(3, 3);
    m[(i, j)] = Scalar::one();
    m
}

/// Generic element ((0,a,b; −a,0,c; b,c,0), 0) of so(2,1)⋉{0}, the
/// stabilizer algebra of x₁²+x₂²−x₃².
pub fn so21_element(a: &Scalar, b: &Scalar, c: &Scalar) -> LieElement {
    let mut m = Matrix::zeros(3, 3);
    m[(0, 1)] = a.clone();
    m[(0, 2)] = b.clone();
    m[(1, 0)] = a.neg();
    m[(1, 2)] = c.clone();
    m[(2, 0)] = b.clone();
    m[(2, 1)] = c.clone();
    LieElement::linear(m).expect("skew pattern is traceless")
}

/// The sl(2)-triple (a, u, v) inside so(2,1) with 2s and √2 entries,
/// satisfying [u,a] = 2u, [v,a] = −2v, [v,u] = a.
pub fn sl2_triple() -> (LieElement, LieElement, LieElement) {
    let two = Scalar::from_int(2);
    let rt2 = Scalar::sqrt_of(2).unwrap();
    let a = so21_element(&two, &two, &two);
    let u = so21_element(&rt2, &rt2, &Scalar::zero());
    let v = so21_element(&rt2.neg(), &Scalar::zero(), &rt2.neg());
    (a, u, v)
}

/// Recomputes the defining relations of the sl(2)-triple and its
/// membership in so(2,1); returns one labelled outcome per relation.
pub fn verify_sl2_relations() -> Vec<(&'static str, bool)> {
    let (a, u, v) = sl2_triple();
    let two = Scalar::from_int(2);
    let sigma = Matrix::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
    let in_so = |x: &LieElement| {
        x.matrix_part()
            .transpose()
            .mul(&sigma)
            .add(&sigma.mul(x.matrix_part()))
            .is_zero()
    };
    alloc::vec![
        ("[u,a] = 2u", bracket(&u, &a) == u.scale(&two)),
        ("[v,a] = -2v", bracket(&v, &a) == v.scale(&two.neg())),
        ("[v,u] = a", bracket(&v, &u) == a),
        (
            "traces vanish",
            a.matrix_part().trace().is_zero()
                && u.matrix_part().trace().is_zero()
                && v.matrix_part().trace().is_zero(),
        ),
        ("so(2,1) membership", in_so(&a) && in_so(&u) && in_so(&v)),
    ]
}

/// Exact basis of {X : XᵀA + AX = 0} for the gram matrix of q, as a
/// subalgebra with zero translation parts.
pub fn so_of(q: &QuadraticForm) -> Result<Subalgebra, Error> {
    if q.is_degenerate() {
        return Err(Error::Degenerate);
    }
    let a = q.gram();
    let n = q.dim();
    let mut m = Matrix::zeros(n * n, n * n);
    for i in 0..n {
        for j in 0..n {
            let r = n * i + j;
            for k in 0..n {
                m[(r, n * k + i)] = m[(r, n * k + i)].add(&a[(k, j)]);
                m[(r, n * k + j)] = m[(r, n * k + j)].add(&a[(i, k)]);
            }
        }
    }
    let basis = m
        .kernel()
        .iter()
        .map(|v| {
            let mut x = Matrix::zeros(n, n);
            for k in 0..n {
                for l in 0..n {
                    x[(k, l)] = v[n * k + l].clone();
                }
            }
            LieElement::linear(x)
        })
        .collect::<Result<Vec<_>, _>>()?;
    Subalgebra::new(basis)
}

/// Group element reached by the affine flow of a nilpotent element:
/// (exp X, (I + X/2 + X²/6)u).
pub fn exp_nilpotent(elem: &LieElement) -> Result<AffineMap, Error> {
    if !elem.is_nilpotent() {
        return Err(Error::InvalidGenerator("matrix part is not nilpotent"));
    }
    let x = elem.matrix_part();
    let x2 = x.mul(x);
    let id = Matrix::identity(3);
    let g = id.add(x).add(&x2.scale(&Scalar::ratio(1, 2)));
    let series = id
        .add(&x.scale(&Scalar::ratio(1, 2)))
        .add(&x2.scale(&Scalar::ratio(1, 6)));
    let v = series.mul_vec(elem.translation_part());
    AffineMap::new(g, v)
}

fn diag(a: i64, b: i64, c: i64) -> Matrix {
    Matrix::diagonal(&[Scalar::from_int(a), Scalar::from_int(b), Scalar::from_int(c)])
}

fn linear_family(id: &str, t: Option<&Scalar>) -> Option<Vec<Matrix>> {
    let two = Scalar::from_int(2);
    Some(match id {
        "V1" => alloc::vec![e(0, 1).add(&e(1, 2))],
        "V" => alloc::vec![e(0, 1).add(&e(1, 2)), e(0, 2)],
        "W" => alloc::vec![e(0, 1), e(0, 2), e(1, 2)],
        "N" => alloc::vec![diag(1, -2, 1), e(0, 1), e(0, 2), e(1, 2)],
        "N1" => alloc::vec![diag(2, -5, 3), e(0, 1), e(0, 2), e(1, 2)],
        "N2" => alloc::vec![diag(3, -5, 2), e(0, 1), e(0, 2), e(1, 2)],
        "Q1" => alloc::vec![diag(0, 1, -1), e(0, 1), e(0, 2), e(1, 2), e(2, 1)],
        "Q2" => alloc::vec![diag(1, -1, 0), e(0, 1), e(0, 2), e(1, 2), e(1, 0)],
        "sl3" => alloc::vec![
            e(0, 1),
            e(0, 2),
            e(1, 0),
            e(1, 2),
            e(2, 0),
            e(2, 1),
            diag(1, -1, 0),
            diag(0, 1, -1),
        ],
        // Conjugate of so of 2x₁x₃−x₂² by I + tE₁₃; the conjugation
        // forces the (1,3) entry −2ta alongside the (2,3) entry b−2tc.
        "R" => {
            let t = t?;
            let m2t = two.mul(t).neg();
            alloc::vec![
                e(0, 0).sub(&e(2, 2)).add(&e(0, 2).scale(&m2t)),
                e(0, 1).add(&e(1, 2)),
                e(1, 0).add(&e(2, 1)).add(&e(1, 2).scale(&m2t)),
            ]
        }
        _ => return None,
    })
}

fn translation_gens(suffix: &str) -> Option<Vec<Vector>> {
    Some(match suffix {
        "0" => Vec::new(),
        "R" => alloc::vec![Vector::basis(0, 3)],
        "R2" => alloc::vec![Vector::basis(0, 3), Vector::basis(1, 3)],
        "R3" => alloc::vec![
            Vector::basis(0, 3),
            Vector::basis(1, 3),
            Vector::basis(2, 3),
        ],
        _ => return None,
    })
}

/// Materializes a catalog subalgebra at concrete parameter values.
///
/// Linear families take a translation suffix: `V1/0`, `V1/R`, `V1/R2`,
/// `V1/R3`, likewise `V`, `W`, `N`, `N1`, `N2`, `Q1`, `Q2`, `sl3`, and
/// `R/…` with one parameter t. The affine families `P` (one nonzero
/// parameter β), `H`, `A`, `B` (one parameter α each) carry their own
/// translation structure.
pub fn catalog(id: &str, params: &[Scalar]) -> Result<Subalgebra, Error> {
    let arity_err = |msg: &str| Error::Parse(format!("catalog {id}: {msg}"));
    let label: String;
    let basis: Vec<LieElement>;
    match id {
        "P" => {
            let [beta] = params else {
                return Err(arity_err("expects exactly one parameter"));
            };
            if beta.is_zero() {
                return Err(arity_err("parameter must be nonzero"));
            }
            label = format!("P({beta})");
            let mut v3 = Vector::zeros(3);
            v3[2] = beta.clone();
            basis = alloc::vec![
                LieElement::linear(e(0, 1).add(&e(1, 2))).unwrap(),
                LieElement::new(e(0, 2), v3).unwrap(),
                LieElement::translation(Vector::basis(0, 3)).unwrap(),
                LieElement::translation(Vector::basis(1, 3)).unwrap(),
            ];
        }
        "H" | "A" | "B" => {
            let [alpha] = params else {
                return Err(arity_err("expects exactly one parameter"));
            };
            label = format!("{id}({alpha})");
            let mut shear = Vector::zeros(3);
            shear[1] = alpha.clone();
            basis = match id {
                "H" => alloc::vec![LieElement::new(e(0, 1).add(&e(1, 2)), shear).unwrap()],
                "A" => alloc::vec![
                    LieElement::new(e(0, 1), shear).unwrap(),
                    LieElement::linear(e(0, 2)).unwrap(),
                    LieElement::linear(e(1, 2)).unwrap(),
                ],
                _ => alloc::vec![
                    LieElement::new(e(0, 1), shear).unwrap(),
                    LieElement::linear(e(0, 2)).unwrap(),
                    LieElement::linear(e(1, 2)).unwrap(),
                    LieElement::translation(Vector::basis(0, 3)).unwrap(),
                ],
            };
        }
        _ => {
            let Some((family, suffix)) = id.split_once('/') else {
                return Err(Error::Parse(format!("unknown catalog id: {id}")));
            };
            let (mats, shown) = if family == "R" {
                let [t] = params else {
                    return Err(arity_err("expects exactly one parameter"));
                };
                (linear_family("R", Some(t)), format!("R({t})"))
            } else {
                if !params.is_empty() {
                    return Err(arity_err("takes no parameters"));
                }
                (linear_family(family, None), String::from(family))
            };
            let Some(mats) = mats else {
                return Err(Error::Parse(format!("unknown catalog id: {id}")));
            };
            let Some(trans) = translation_gens(suffix) else {
                return Err(Error::Parse(format!("unknown catalog id: {id}")));
            };
            label = format!("{shown}/{suffix}");
            let mut b: Vec<LieElement> = mats
                .into_iter()
                .map(|m| LieElement::linear(m).unwrap())
                .collect();
            for v in trans {
                b.push(LieElement::translation(v).unwrap());
            }
            basis = b;
        }
    }
    Subalgebra::named(basis, Some(label))
}

/// The 27 closed unimodular families containing the α = 0 flow line,
/// with the conjugation parameter t and the shear parameter β fixed.
pub fn unimodular_algebras_h0(t: &Scalar, beta: &Scalar) -> Vec<Subalgebra> {
    let mut out = Vec::new();
    for id in [
        "V1/0", "V1/R", "V1/R2", "V1/R3", "V/0", "V/R", "V/R2", "V/R3", "W/0", "W/R", "W/R2",
        "W/R3", "Q1/0", "Q1/R", "Q1/R3", "Q2/0", "Q2/R2", "Q2/R3", "N/0", "N/R3", "N1/R",
        "N2/R2", "sl3/0", "sl3/R3",
    ] {
        out.push(catalog(id, &[]).unwrap());
    }
    out.push(catalog("R/0", core::slice::from_ref(t)).unwrap());
    out.push(catalog("R/R3", core::slice::from_ref(t)).unwrap());
    out.push(catalog("P", core::slice::from_ref(beta)).unwrap());
    out
}

/// The 16 closed families containing the flow line at α ≠ 0.
pub fn algebras_h_alpha(alpha: &Scalar, t: &Scalar, beta: &Scalar) -> Vec<Subalgebra> {
    let mut out = Vec::new();
    for id in [
        "V1/R2", "V1/R3", "V/R2", "V/R3", "W/R2", "W/R3", "Q1/R3", "Q2/R2", "Q2/R3", "N/R3",
        "N2/R2", "sl3/R3",
    ] {
        out.push(catalog(id, &[]).unwrap());
    }
    out.push(catalog("R/R3", core::slice::from_ref(t)).unwrap());
    out.push(catalog("A", core::slice::from_ref(alpha)).unwrap());
    out.push(catalog("B", core::slice::from_ref(alpha)).unwrap());
    out.push(catalog("P", core::slice::from_ref(beta)).unwrap());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::stabilizer::h_alpha;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn sc(text: &str) -> Scalar {
        text.parse().unwrap()
    }

    fn random_element(rng: &mut StdRng) -> LieElement {
        let mut x = Matrix::zeros(3, 3);
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    x[(i, j)] = Scalar::from_int(rng.gen_range(-4..=4));
                }
            }
        }
        let d1 = rng.gen_range(-4..=4);
        let d2 = rng.gen_range(-4..=4);
        x[(0, 0)] = Scalar::from_int(d1);
        x[(1, 1)] = Scalar::from_int(d2);
        x[(2, 2)] = Scalar::from_int(-d1 - d2);
        let u = Vector::from_ints(&[
            rng.gen_range(-4..=4),
            rng.gen_range(-4..=4),
            rng.gen_range(-4..=4),
        ]);
        LieElement::new(x, u).unwrap()
    }

    #[test]
    fn bracket_rules() {
        let mut rng = StdRng::seed_from_u64(61);
        for _ in 0..20 {
            let a = random_element(&mut rng);
            let b = random_element(&mut rng);
            assert!(bracket(&a, &a).is_zero());
            assert_eq!(bracket(&a, &b), bracket(&b, &a).neg());
        }
        // [(g,0),(0,v)] = (0, gv).
        let g = random_element(&mut rng);
        let g = LieElement::linear(g.matrix_part().clone()).unwrap();
        let v = Vector::from_ints(&[3, -1, 2]);
        let tv = LieElement::translation(v.clone()).unwrap();
        let br = bracket(&g, &tv);
        assert!(br.matrix_part().is_zero());
        assert_eq!(br.translation_part(), &g.matrix_part().mul_vec(&v));
    }

    #[test]
    fn jacobi_identity_holds() {
        let mut rng = StdRng::seed_from_u64(62);
        for _ in 0..200 {
            let a = random_element(&mut rng);
            let b = random_element(&mut rng);
            let c = random_element(&mut rng);
            let total = bracket(&a, &bracket(&b, &c))
                .add(&bracket(&b, &bracket(&c, &a)))
                .add(&bracket(&c, &bracket(&a, &b)));
            assert!(total.is_zero());
        }
    }

    #[test]
    fn worked_semidirect_brackets() {
        let g = LieElement::new(
            Matrix::from_ints(&[&[1, 0, 1], &[6, 1, 0], &[1, 0, -2]]),
            Vector::from_ints(&[1, 1, 0]),
        )
        .unwrap();
        let g1 = LieElement::new(diag(1, 1, -2), Vector::from_ints(&[0, 0, 2])).unwrap();
        let br = bracket(&g, &g1);
        assert_eq!(
            br.matrix_part(),
            &Matrix::from_ints(&[&[0, 0, -3], &[0, 0, 0], &[3, 0, 0]])
        );
        assert_eq!(br.translation_part(), &Vector::from_ints(&[1, -1, -4]));

        let g2 = LieElement::new(
            Matrix::from_ints(&[&[1, 0, 1], &[0, 1, 0], &[1, 0, -2]]),
            Vector::from_ints(&[0, 0, 5]),
        )
        .unwrap();
        let br2 = bracket(&g2, &g1);
        assert_eq!(br2.matrix_part(), br.matrix_part());
        assert_eq!(br2.translation_part(), &Vector::from_ints(&[2, 0, 6]));
    }

    #[test]
    fn cross_brackets_land_in_so21() {
        let sigma = QuadraticForm::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
        let so = so_of(&sigma).unwrap();
        let h = LieElement::linear(Matrix::from_ints(&[&[0, 1, 0], &[-1, 0, 0], &[0, 0, 0]]))
            .unwrap();
        let k = LieElement::linear(Matrix::from_ints(&[&[0, 0, 1], &[0, 0, -1], &[1, -1, 0]]))
            .unwrap();
        assert!(so.contains_element(&h));
        assert!(so.contains_element(&k));
        let g1 = LieElement::linear(diag(1, 1, -2)).unwrap();
        let g2 = LieElement::linear(Matrix::from_ints(&[&[1, 0, 1], &[0, 1, 0], &[1, 0, -2]]))
            .unwrap();
        let g = LieElement::linear(Matrix::from_ints(&[&[1, 0, 1], &[6, 1, 0], &[1, 0, -2]]))
            .unwrap();
        for (x, y) in [(&h, &g1), (&h, &g2), (&k, &g)] {
            assert!(so.contains_element(&bracket(x, y)));
        }
    }

    #[test]
    fn sl2_triple_checks() {
        for (label, pass) in verify_sl2_relations() {
            assert!(pass, "failed: {label}");
        }
        let (a, u, v) = sl2_triple();
        let sigma = QuadraticForm::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
        let so = so_of(&sigma).unwrap();
        assert_eq!(so.dim(), 3);
        let triple = Subalgebra::new(alloc::vec![a, u, v]).unwrap();
        assert!(triple.span_equals(&so));
    }

    #[test]
    fn ad_kernels() {
        let sl3 = catalog("sl3/0", &[]).unwrap();
        let (_, u, _) = sl2_triple();
        let ker = ad_kernel(&u, &sl3);
        assert_eq!(ker.len(), 2);
        // The kernel display: (0,a,a; −a,b,b; a,−b,−b).
        let gen_a = LieElement::linear(Matrix::from_ints(&[
            &[0, 1, 1],
            &[-1, 0, 0],
            &[1, 0, 0],
        ]))
        .unwrap();
        let gen_b = LieElement::linear(Matrix::from_ints(&[
            &[0, 0, 0],
            &[0, 1, 1],
            &[0, -1, -1],
        ]))
        .unwrap();
        let display = Subalgebra::new(alloc::vec![gen_a, gen_b]).unwrap();
        let computed = Subalgebra::new(ker).unwrap();
        assert!(computed.span_equals(&display));

        assert_eq!(ad_kernel(&LieElement::zero(), &sl3).len(), 8);

        let sigma = QuadraticForm::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
        let so = so_of(&sigma).unwrap();
        let ker_so = ad_kernel(&u, &so);
        assert_eq!(ker_so.len(), 1);
        assert!(in_span(
            &alloc::vec![ker_so[0].clone().flat()],
            &u.flat()
        ));
    }

    #[test]
    fn nilpotent_generator_closure() {
        let one = Scalar::one();
        let zero = Scalar::zero();
        let h110 = so21_element(&one, &one, &zero);
        let h101 = so21_element(&one, &zero, &one);
        let h111 = so21_element(&one, &one, &one);
        assert!(h110.is_nilpotent());
        assert!(h101.is_nilpotent());
        let closed = bracket_closure(&[h110.clone(), h101.clone()]);
        assert_eq!(closed.dim(), 3);
        assert!(closed.contains_element(&h111));
        let direct = Subalgebra::new(alloc::vec![h110.clone(), h101, h111]).unwrap();
        assert!(closed.span_equals(&direct));

        assert_eq!(bracket_closure(&[h110]).dim(), 1);

        let flow_gen = catalog("H", &[sc("sqrt(2)")]).unwrap();
        let closure = bracket_closure(flow_gen.basis());
        assert_eq!(closure.dim(), 1);
    }

    #[test]
    fn closure_idempotent() {
        let sl3 = catalog("sl3/0", &[]).unwrap();
        let again = bracket_closure(sl3.basis());
        assert!(again.span_equals(&sl3));
        assert_eq!(again.dim(), 8);
    }

    #[test]
    fn catalog_entries() {
        let v1 = catalog("V1/0", &[]).unwrap();
        assert_eq!(v1.dim(), 1);
        let expected = LieElement::linear(Matrix::from_ints(&[
            &[0, 1, 0],
            &[0, 0, 1],
            &[0, 0, 0],
        ]))
        .unwrap();
        assert_eq!(v1.basis()[0], expected);

        let p1 = catalog("P", &[Scalar::one()]).unwrap();
        assert_eq!(p1.dim(), 4);
        let shear = LieElement::new(e(0, 2), Vector::from_ints(&[0, 0, 1])).unwrap();
        assert!(p1.contains_element(&shear));
        let p2 = catalog("P", &[Scalar::from_int(2)]).unwrap();
        assert!(!p2.contains_element(&shear));

        let h0 = catalog("H", &[Scalar::zero()]).unwrap();
        assert!(h0.span_equals(&v1));

        assert_eq!(catalog("R/0", &[Scalar::zero()]).unwrap().dim(), 3);
        assert_eq!(catalog("B", &[sc("-3/2")]).unwrap().dim(), 4);
    }

    #[test]
    fn catalog_errors() {
        assert!(matches!(catalog("X9/0", &[]), Err(Error::Parse(_))));
        assert!(matches!(catalog("V1/R4", &[]), Err(Error::Parse(_))));
        assert!(matches!(catalog("V1", &[]), Err(Error::Parse(_))));
        assert!(matches!(
            catalog("V1/0", &[Scalar::one()]),
            Err(Error::Parse(_))
        ));
        assert!(matches!(catalog("P", &[]), Err(Error::Parse(_))));
        assert!(matches!(catalog("P", &[Scalar::zero()]), Err(Error::Parse(_))));
        assert!(matches!(catalog("R/0", &[]), Err(Error::Parse(_))));
    }

    #[test]
    fn unimodularity_examples() {
        let stretch = LieElement::linear(diag(1, 0, -1)).unwrap();
        let corner = LieElement::linear(e(0, 2)).unwrap();
        let alg = Subalgebra::new(alloc::vec![stretch, corner]).unwrap();
        assert!(!alg.is_unimodular());

        let abelian = catalog("V/0", &[]).unwrap();
        assert!(abelian.is_unimodular());

        // A closed family that the unimodular list rightly omits.
        let n_r = Subalgebra::new(alloc::vec![
            LieElement::linear(diag(1, -2, 1)).unwrap(),
            LieElement::linear(e(0, 1)).unwrap(),
            LieElement::linear(e(0, 2)).unwrap(),
            LieElement::linear(e(1, 2)).unwrap(),
            LieElement::translation(Vector::basis(0, 3)).unwrap(),
        ])
        .unwrap();
        assert!(!n_r.is_unimodular());
    }

    #[test]
    fn dependent_or_open_bases_rejected() {
        let a = LieElement::linear(e(0, 1)).unwrap();
        let b = LieElement::linear(e(0, 1).scale(&Scalar::from_int(2))).unwrap();
        assert!(matches!(
            Subalgebra::new(alloc::vec![a.clone(), b]),
            Err(Error::InvalidGenerator(_))
        ));
        let c = LieElement::linear(e(1, 0)).unwrap();
        assert!(matches!(
            Subalgebra::new(alloc::vec![a, c]),
            Err(Error::NotClosed)
        ));
        assert!(LieElement::linear(diag(1, 0, 0)).is_err());
    }

    #[test]
    fn unimodular_sweep_h0() {
        let table = unimodular_algebras_h0(&Scalar::one(), &sc("1/2"));
        assert_eq!(table.len(), 27);
        let h0 = catalog("H", &[Scalar::zero()]).unwrap();
        for entry in &table {
            assert!(entry.is_unimodular(), "not unimodular: {entry:?}");
            assert!(entry.contains(&h0), "missing flow line: {entry:?}");
        }
    }

    #[test]
    fn containment_sweep_h_alpha() {
        for alpha in [sc("1"), sc("sqrt(2)"), sc("-3/2")] {
            let table = algebras_h_alpha(&alpha, &sc("-2"), &sc("3"));
            assert_eq!(table.len(), 16);
            let h = catalog("H", core::slice::from_ref(&alpha)).unwrap();
            for entry in &table {
                assert!(entry.contains(&h), "missing flow line: {entry:?}");
            }
        }
        let v1 = catalog("V1/0", &[]).unwrap();
        let h1 = catalog("H", &[Scalar::one()]).unwrap();
        assert!(!v1.contains(&h1));
    }

    #[test]
    fn conjugated_so_family() {
        let q0 = QuadraticForm::from_ints(&[&[0, 0, 1], &[0, -1, 0], &[1, 0, 0]]);
        let so = so_of(&q0).unwrap();
        assert_eq!(so.dim(), 3);
        for t in [sc("0"), sc("1"), sc("-2")] {
            let mut v = Matrix::identity(3);
            v[(0, 2)] = t.clone();
            let vinv = v.inverse().unwrap();
            let conjugated: Vec<LieElement> = so
                .basis()
                .iter()
                .map(|x| {
                    LieElement::linear(v.mul(x.matrix_part()).mul(&vinv)).unwrap()
                })
                .collect();
            let family = catalog("R/0", core::slice::from_ref(&t)).unwrap();
            let conj = Subalgebra::new(conjugated).unwrap();
            assert!(conj.span_equals(&family), "t = {t}");
        }
    }

    #[test]
    fn exponential_of_nilpotents() {
        let alpha = sc("sqrt(2)");
        let gen = catalog("H", core::slice::from_ref(&alpha)).unwrap().basis()[0].clone();
        for t in [sc("1"), sc("-3/2"), sc("sqrt(2)")] {
            let exp = exp_nilpotent(&gen.scale(&t)).unwrap();
            assert_eq!(exp, h_alpha(&alpha, &t));
        }
        let semisimple = LieElement::linear(diag(1, -1, 0)).unwrap();
        assert!(matches!(
            exp_nilpotent(&semisimple),
            Err(Error::InvalidGenerator(_))
        ));
    }

    #[test]
    fn so_solver_matches_displays() {
        let sigma = QuadraticForm::from_ints(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, -1]]);
        let so = so_of(&sigma).unwrap();
        let display = Subalgebra::new(alloc::vec![
            so21_element(&Scalar::one(), &Scalar::zero(), &Scalar::zero()),
            so21_element(&Scalar::zero(), &Scalar::one(), &Scalar::zero()),
            so21_element(&Scalar::zero(), &Scalar::zero(), &Scalar::one()),
        ])
        .unwrap();
        assert!(so.span_equals(&display));

        let degenerate = QuadraticForm::from_ints(&[&[1, 0, 0], &[0, 0, 0], &[0, 0, 1]]);
        assert!(matches!(so_of(&degenerate), Err(Error::Degenerate)));
    }
}
