//! Domain errors shared across the crate.

use alloc::string::String;
use core::fmt;

/// Domain error raised by exact operations.
///
/// Every variant carries a stable machine-readable code (see [`Error::code`])
/// so front ends can map failures without string matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Error {
    /// Division by zero in the scalar field or a singular pivot request.
    DivisionByZero,
    /// Operands from different quadratic fields Q(√d₁), Q(√d₂).
    MixedField(u64, u64),
    /// A discriminant that is zero, negative, or not squarefree.
    BadDiscriminant(u64),
    /// Operand dimensions do not match the operation.
    Dimension(&'static str),
    /// A matrix required to be invertible is singular.
    Singular,
    /// A quadratic form required to be nondegenerate is degenerate.
    Degenerate,
    /// A quadratic form required to be indefinite is definite.
    Definite,
    /// A matrix required to be symmetric is not.
    NotSymmetric,
    /// A form required to be irrational is rational.
    RationalForm,
    /// The plane {L = 0} is not tangent to the cone {Q = 0}.
    NotTangent,
    /// A linear form required to be nonzero is zero.
    ZeroLinearForm,
    /// A generator failed its required invariance property.
    InvalidGenerator(&'static str),
    /// A set of Lie algebra elements is not closed under the bracket.
    NotClosed,
    /// The requested exact value (square or cube root, scaling factor)
    /// does not exist inside Q(√d).
    NotInField(&'static str),
    /// Search exhausted its height bound without finding a witness.
    NotFound(&'static str),
    /// Text that does not parse as a scalar.
    Parse(String),
}

impl Error {
    /// Stable machine-readable code for this error.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DivisionByZero => "division_by_zero",
            Error::MixedField(..) => "mixed_field",
            Error::BadDiscriminant(..) => "bad_discriminant",
            Error::Dimension(..) => "dimension_mismatch",
            Error::Singular => "singular_matrix",
            Error::Degenerate => "degenerate_form",
            Error::Definite => "definite_form",
            Error::NotSymmetric => "not_symmetric",
            Error::RationalForm => "rational_form",
            Error::NotTangent => "not_tangent",
            Error::ZeroLinearForm => "zero_linear_form",
            Error::InvalidGenerator(..) => "invalid_generator",
            Error::NotClosed => "not_bracket_closed",
            Error::NotInField(..) => "not_in_field",
            Error::NotFound(..) => "not_found",
            Error::Parse(..) => "parse_error",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByZero => write!(f, "division by zero"),
            Error::MixedField(a, b) => {
                write!(f, "mixed quadratic fields: sqrt({a}) vs sqrt({b})")
            }
            Error::BadDiscriminant(d) => {
                write!(f, "discriminant {d} is not a squarefree positive integer")
            }
            Error::Dimension(what) => write!(f, "dimension mismatch: {what}"),
            Error::Singular => write!(f, "matrix is singular"),
            Error::Degenerate => write!(f, "quadratic form is degenerate"),
            Error::Definite => write!(f, "quadratic form is definite"),
            Error::NotSymmetric => write!(f, "matrix is not symmetric"),
            Error::RationalForm => write!(f, "form is rational"),
            Error::NotTangent => write!(f, "plane is not tangent to the cone"),
            Error::ZeroLinearForm => write!(f, "linear form is zero"),
            Error::InvalidGenerator(what) => write!(f, "invalid generator: {what}"),
            Error::NotClosed => write!(f, "set is not closed under the Lie bracket"),
            Error::NotInField(what) => write!(f, "value does not exist in Q(sqrt(d)): {what}"),
            Error::NotFound(what) => write!(f, "search exhausted: {what}"),
            Error::Parse(what) => write!(f, "{what}"),
        }
    }
}

impl core::error::Error for Error {}
