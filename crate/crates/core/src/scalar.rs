//! The coefficient field Q(√d).
//!
//! A [`Scalar`] is r + s√d with arbitrary-precision rational r, s and a
//! squarefree discriminant d ≥ 1. Equality, sign, and all field operations
//! are exact. d = 1 degenerates to plain rationals (s is folded into r), and
//! plain rationals embed into every Q(√d), so values with d = 1 combine
//! freely with values of any single other discriminant. Combining two
//! genuinely irrational scalars from different fields is a programming error
//! and panics; fallible construction paths reject it up front.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// Arbitrary-precision rational, the component type of [`Scalar`].
pub type Rational = num_rational::BigRational;

/// Largest accepted discriminant; keeps the squarefreeness check (trial
/// division) cheap. Every constant in scope lives in tiny fields anyway.
pub const MAX_DISCRIMINANT: u64 = 1_000_000;

/// Exact element r + s√d of the real quadratic field Q(√d).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Scalar {
    r: Rational,
    s: Rational,
    d: u64,
}

fn is_squarefree(d: u64) -> bool {
    let mut n = d;
    let mut p = 2u64;
    while p * p <= n {
        if n % (p * p) == 0 {
            return false;
        }
        while n % p == 0 {
            n /= p;
        }
        p += 1;
    }
    true
}

/// Exact square root of a nonnegative rational, if it is a perfect square.
fn sqrt_rational(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let n = q.numer().sqrt();
    let m = q.denom().sqrt();
    if &(&n * &n) == q.numer() && &(&m * &m) == q.denom() {
        Some(Rational::new(n, m))
    } else {
        None
    }
}

/// Exact cube root of a rational, if it is a perfect cube.
fn cbrt_rational(q: &Rational) -> Option<Rational> {
    let n = q.numer().cbrt();
    let m = q.denom().cbrt();
    if &(&n * &n * &n) == q.numer() && &(&m * &m * &m) == q.denom() {
        Some(Rational::new(n, m))
    } else {
        None
    }
}

/// √x for f64 without `std`, by Newton iteration. Accurate to ~1 ulp, which
/// is far below every reporting tolerance in the workspace.
pub(crate) fn sqrt_f64(x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    let mut g = if x >= 1.0 { x } else { 1.0 };
    for _ in 0..64 {
        let n = 0.5 * (g + x / g);
        if n == g {
            break;
        }
        g = n;
    }
    g
}

impl Scalar {
    /// Builds r + s√d, validating the discriminant.
    pub fn new(r: Rational, s: Rational, d: u64) -> Result<Scalar, Error> {
        if d == 0 || d > MAX_DISCRIMINANT || !is_squarefree(d) {
            return Err(Error::BadDiscriminant(d));
        }
        Ok(Scalar::raw(r, s, d))
    }

    /// Internal constructor; assumes d squarefree, restores canonical shape.
    fn raw(mut r: Rational, mut s: Rational, mut d: u64) -> Scalar {
        if d == 1 {
            r += &s;
            s = Rational::zero();
        }
        if s.is_zero() {
            d = 1;
            s = Rational::zero();
        }
        Scalar { r, s, d }
    }

    /// The rational number q as a scalar (d = 1).
    pub fn rational(q: Rational) -> Scalar {
        Scalar::raw(q, Rational::zero(), 1)
    }

    /// The integer n as a scalar.
    pub fn from_int(n: i64) -> Scalar {
        Scalar::rational(Rational::from_integer(BigInt::from(n)))
    }

    /// The fraction p/q as a scalar. Panics if q = 0.
    pub fn ratio(p: i64, q: i64) -> Scalar {
        assert!(q != 0, "zero denominator");
        Scalar::rational(Rational::new(BigInt::from(p), BigInt::from(q)))
    }

    /// √d itself; d must be squarefree and ≥ 1 (√1 = 1).
    pub fn sqrt_of(d: u64) -> Result<Scalar, Error> {
        Scalar::new(Rational::zero(), Rational::one(), d)
    }

    pub fn zero() -> Scalar {
        Scalar::from_int(0)
    }

    pub fn one() -> Scalar {
        Scalar::from_int(1)
    }

    /// Rational part r.
    pub fn rational_part(&self) -> &Rational {
        &self.r
    }

    /// Radical coefficient s.
    pub fn radical_part(&self) -> &Rational {
        &self.s
    }

    /// Radical coefficient relative to an ambient field: s when the value
    /// lives in Q(√ambient), 0 for plain rationals; panics on a genuine
    /// field mix.
    pub fn radical_in(&self, ambient: u64) -> Rational {
        if self.d == ambient {
            self.s.clone()
        } else if self.d == 1 {
            Rational::from_integer(0.into())
        } else {
            panic!(
                "mixed quadratic fields: sqrt({}) vs sqrt({ambient})",
                self.d
            );
        }
    }

    /// Field discriminant (1 for plain rationals).
    pub fn discriminant(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.r.is_zero() && self.s.is_zero()
    }

    /// True when the value lies in Q.
    pub fn is_rational(&self) -> bool {
        self.s.is_zero()
    }

    /// The value as a rational, when it is one.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.s.is_zero() {
            Some(&self.r)
        } else {
            None
        }
    }

    /// True when the value is a rational integer.
    pub fn is_integer(&self) -> bool {
        self.s.is_zero() && self.r.is_integer()
    }

    /// Resolves the common field of two scalars; panics on a genuine mix.
    fn unify(&self, other: &Scalar) -> u64 {
        match self.try_unify(other) {
            Ok(d) => d,
            Err(e) => panic!("{e}"),
        }
    }

    /// Resolves the common field of two scalars.
    pub fn try_unify(&self, other: &Scalar) -> Result<u64, Error> {
        if self.d == other.d {
            Ok(self.d)
        } else if self.d == 1 {
            Ok(other.d)
        } else if other.d == 1 {
            Ok(self.d)
        } else {
            Err(Error::MixedField(self.d, other.d))
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        let d = self.unify(other);
        Scalar::raw(&self.r + &other.r, &self.s + &other.s, d)
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        let d = self.unify(other);
        Scalar::raw(&self.r - &other.r, &self.s - &other.s, d)
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        let d = self.unify(other);
        let dq = Rational::from_integer(BigInt::from(d));
        let r = &self.r * &other.r + &(&self.s * &other.s) * &dq;
        let s = &self.r * &other.s + &self.s * &other.r;
        Scalar::raw(r, s, d)
    }

    pub fn neg(&self) -> Scalar {
        Scalar::raw(-self.r.clone(), -self.s.clone(), self.d)
    }

    /// Field norm r² − s²d (the product with the conjugate).
    pub fn norm(&self) -> Rational {
        let dq = Rational::from_integer(BigInt::from(self.d));
        &self.r * &self.r - &(&self.s * &self.s) * &dq
    }

    /// Galois conjugate r − s√d.
    pub fn conjugate(&self) -> Scalar {
        Scalar::raw(self.r.clone(), -self.s.clone(), self.d)
    }

    /// Multiplicative inverse; fails on zero.
    pub fn try_inv(&self) -> Result<Scalar, Error> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        // 1/(r+s√d) = (r−s√d)/(r²−s²d); the norm is nonzero for nonzero
        // values because √d is irrational for squarefree d > 1.
        let n = self.norm();
        debug_assert!(!n.is_zero());
        Ok(Scalar::raw(&self.r / &n, -(&self.s / &n), self.d))
    }

    /// Multiplicative inverse; panics on zero.
    pub fn inv(&self) -> Scalar {
        match self.try_inv() {
            Ok(v) => v,
            Err(e) => panic!("{e}"),
        }
    }

    pub fn div(&self, other: &Scalar) -> Scalar {
        self.mul(&other.inv())
    }

    pub fn try_div(&self, other: &Scalar) -> Result<Scalar, Error> {
        Ok(self.mul(&other.try_inv()?))
    }

    /// Exact sign of the real number r + s√d: −1, 0, or +1.
    ///
    /// Decided by case analysis: when r and s agree in sign the answer is
    /// immediate; when they compete, compare r² with s²d (equality is
    /// impossible for squarefree d > 1 with both parts nonzero, since it
    /// would make √d rational).
    pub fn sign(&self) -> i32 {
        let sr = rational_sign(&self.r);
        if self.s.is_zero() {
            return sr;
        }
        let ss = rational_sign(&self.s);
        if sr == 0 {
            return ss;
        }
        if sr == ss {
            return sr;
        }
        let dq = Rational::from_integer(BigInt::from(self.d));
        let r2 = &self.r * &self.r;
        let s2d = &(&self.s * &self.s) * &dq;
        match r2.cmp(&s2d) {
            Ordering::Greater => sr,
            Ordering::Less => ss,
            Ordering::Equal => {
                debug_assert!(false, "sqrt({}) would be rational", self.d);
                0
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.sign() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.sign() < 0
    }

    pub fn abs(&self) -> Scalar {
        if self.is_negative() {
            self.neg()
        } else {
            self.clone()
        }
    }

    /// Total order on the underlying real numbers.
    pub fn cmp_real(&self, other: &Scalar) -> Ordering {
        match self.sub(other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// Exact square root within the scalar's own field, if one exists.
    /// Plain rationals only know about rational roots; use
    /// [`Scalar::sqrt_exact_in`] to search a larger ambient field.
    pub fn sqrt_exact(&self) -> Option<Scalar> {
        self.sqrt_exact_in(self.d)
    }

    /// Exact square root within Q(√ambient), if one exists. The result is
    /// the nonnegative root. Returns `None` when `ambient` conflicts with
    /// the value's own field.
    pub fn sqrt_exact_in(&self, ambient: u64) -> Option<Scalar> {
        let d = if self.d == 1 {
            ambient.max(1)
        } else if ambient == 1 || ambient == self.d {
            self.d
        } else {
            return None;
        };
        if self.is_zero() {
            return Some(Scalar::zero());
        }
        if self.is_negative() {
            return None;
        }
        if self.s.is_zero() {
            // (x)² = r or (y√d)² = y²d = r; with d = 1 the second family
            // collapses into the first.
            if let Some(x) = sqrt_rational(&self.r) {
                return Some(Scalar::rational(x));
            }
            if d > 1 {
                let dq = Rational::from_integer(BigInt::from(d));
                if let Some(y) = sqrt_rational(&(&self.r / &dq)) {
                    return Some(Scalar::raw(Rational::zero(), y, d));
                }
            }
            return None;
        }
        // (x + y√d)² = (x² + y²d) + 2xy√d: the norm of the root squares to
        // the norm of self, and x² = (r ± √(r²−s²d))/2.
        let m = sqrt_rational(&self.norm())?;
        let two = Rational::from_integer(BigInt::from(2));
        for x2 in [(&self.r + &m) / &two, (&self.r - &m) / &two] {
            if let Some(x) = sqrt_rational(&x2) {
                if x.is_zero() {
                    continue;
                }
                let y = &self.s / &(&two * &x);
                let cand = Scalar::raw(x, y, self.d);
                if cand.mul(&cand) == *self {
                    return Some(if cand.is_negative() { cand.neg() } else { cand });
                }
            }
        }
        None
    }

    /// Exact cube root within Q(√d) for purely rational (s = 0) or purely
    /// radical (r = 0) values; the cube of u + v√d with u, v ≠ 0 has both
    /// components nonzero, so these two families are closed under cube
    /// roots. Mixed-component values are reported as rootless rather than
    /// solving the general cubic.
    pub fn cbrt_exact(&self) -> Option<Scalar> {
        if self.s.is_zero() {
            return cbrt_rational(&self.r).map(Scalar::rational);
        }
        if self.r.is_zero() {
            // (v√d)³ = v³d·√d.
            let dq = Rational::from_integer(BigInt::from(self.d));
            let v = cbrt_rational(&(&self.s / &dq))?;
            return Some(Scalar::raw(Rational::zero(), v, self.d));
        }
        None
    }

    /// Double-precision approximation (for reporting and search ranking).
    pub fn to_f64(&self) -> f64 {
        let r = self.r.to_f64().unwrap_or(f64::NAN);
        if self.s.is_zero() {
            return r;
        }
        let s = self.s.to_f64().unwrap_or(f64::NAN);
        r + s * sqrt_f64(self.d as f64)
    }
}

fn rational_sign(q: &Rational) -> i32 {
    if q.is_zero() {
        0
    } else if q.is_negative() {
        -1
    } else {
        1
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Canonical text form: `p/q` for rationals (`p` when q = 1), otherwise
/// `[r…][±]c*sqrt(d)` with the coefficient omitted when it is ±1, e.g.
/// `1/2-3/4*sqrt(2)`, `sqrt(5)`, `-7`. Parsing accepts exactly the emitted
/// grammar plus redundant explicit coefficients; round-trips are exact.
impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.s.is_zero() {
            return write!(f, "{}", self.r);
        }
        if !self.r.is_zero() {
            write!(f, "{}", self.r)?;
            if !self.s.is_negative() {
                write!(f, "+")?;
            }
        }
        let a = self.s.abs();
        if self.s.is_negative() {
            write!(f, "-")?;
        }
        if a.is_one() {
            write!(f, "sqrt({})", self.d)
        } else {
            write!(f, "{}*sqrt({})", a, self.d)
        }
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(text: &str) -> Result<Scalar, Error> {
        parse_scalar(text)
    }
}

fn parse_scalar(text: &str) -> Result<Scalar, Error> {
    let trimmed: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if trimmed.is_empty() {
        return Err(Error::Parse("empty scalar".to_string()));
    }
    // Split into signed terms at top-level + and −; the only parentheses in
    // the grammar are the sqrt(...) ones, which never contain signs.
    let bytes = trimmed.as_bytes();
    let mut terms: Vec<(i32, &str)> = Vec::new();
    let mut start = 0usize;
    let mut sign = 1i32;
    let mut i = 0usize;
    if bytes[0] == b'+' || bytes[0] == b'-' {
        sign = if bytes[0] == b'-' { -1 } else { 1 };
        start = 1;
        i = 1;
    }
    let mut depth = 0i32;
    while i < bytes.len() {
        match bytes[i] {
            b'(' => depth += 1,
            b')' => depth -= 1,
            b'+' | b'-' if depth == 0 && i > start => {
                terms.push((sign, &trimmed[start..i]));
                sign = if bytes[i] == b'-' { -1 } else { 1 };
                start = i + 1;
            }
            _ => {}
        }
        i += 1;
    }
    if start >= trimmed.len() {
        return Err(Error::Parse(format_parse_err(text)));
    }
    terms.push((sign, &trimmed[start..]));

    let mut acc = Scalar::zero();
    for (sg, term) in terms {
        let parsed = parse_term(term).ok_or_else(|| Error::Parse(format_parse_err(text)))?;
        let signed = if sg < 0 { parsed.neg() } else { parsed };
        acc = match acc.try_unify(&signed) {
            Ok(_) => acc.add(&signed),
            Err(e) => return Err(e),
        };
    }
    Ok(acc)
}

fn format_parse_err(text: &str) -> String {
    let mut msg = String::from("unreadable scalar: ");
    msg.push_str(text);
    msg
}

fn parse_term(term: &str) -> Option<Scalar> {
    if let Some(d) = parse_radical(term) {
        return Scalar::sqrt_of(d).ok();
    }
    if let Some(star) = term.find('*') {
        let coeff = Rational::from_str(&term[..star]).ok()?;
        let d = parse_radical(&term[star + 1..])?;
        let root = Scalar::sqrt_of(d).ok()?;
        return Some(root.mul(&Scalar::rational(coeff)));
    }
    Rational::from_str(term).ok().map(Scalar::rational)
}

fn parse_radical(part: &str) -> Option<u64> {
    let inner = part.strip_prefix("sqrt(")?.strip_suffix(')')?;
    if inner.is_empty() || !inner.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    inner.parse::<u64>().ok()
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $inherent:ident) => {
        impl core::ops::$trait for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar::$inherent(&self, &rhs)
            }
        }
        impl core::ops::$trait<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar::$inherent(&self, rhs)
            }
        }
        impl core::ops::$trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                Scalar::$inherent(self, rhs)
            }
        }
        impl core::ops::$trait<Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                Scalar::$inherent(self, &rhs)
            }
        }
    };
}

scalar_binop!(Add, add, add);
scalar_binop!(Sub, sub, sub);
scalar_binop!(Mul, mul, mul);
scalar_binop!(Div, div, div);

impl core::ops::Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(&self)
    }
}

impl core::ops::Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::neg(self)
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Scalar) -> Option<Ordering> {
        Some(self.cmp_real(other))
    }
}
