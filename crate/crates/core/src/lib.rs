//! Exact computation toolkit for inhomogeneous quadratic forms on affine
//! lattices.
//!
//! Everything in this crate is exact: scalars live in a real quadratic field
//! Q(√d), linear algebra is done over that field, and every geometric
//! predicate (signature, tangency, irrationality, bracket closure, ...) is
//! decided by exact case analysis rather than floating point. Floating-point
//! search lives in the companion CLI crate; this crate is `no_std` + `alloc`.
//!
//! Module map:
//! - [`scalar`]: the coefficient field Q(√d) with decidable equality and sign
//! - [`linalg`]: dense small matrices/vectors and exact linear solving
//! - [`affine`]: the affine group GL(3)⋉R³ acting by x ↦ gx + v, with the
//!   integral subgroup SL(3,Z)⋉Z³
//! - [`forms`]: quadratic/linear/inhomogeneous forms, signature, tangency,
//!   equivalence transforms, hyperplane restriction
//! - [`normalize`]: reduction of a tangent pair (Q_ξ, L) to the normal form
//!   ((Q₀)_{(0,0,α)}, x₃) with Q₀ = 2x₁x₃ − x₂², plus the single-form
//!   reduction to x₁² + x₂² − x₃²
//! - [`stabilizer`]: the one-parameter unipotent flows H_α, lifts of linear
//!   stabilizers to affine ones, and centralizer computation
//! - [`lie`]: the Lie algebra sl(3)⋉R³, bracket closure, ad-kernels,
//!   unimodularity, and the catalog of special subalgebras
//! - [`rationality`]: exact deciders for the irrationality hypotheses,
//!   including the "every combination aQ_ξ + bL² is irrational" condition
//! - [`verify`]: a self-contained suite of named exact checks over the
//!   algebraic facts the rest of the crate relies on

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod affine;
pub mod error;
pub mod forms;
pub mod lie;
pub mod linalg;
pub mod normalize;
pub mod rationality;
pub mod scalar;
pub mod stabilizer;
pub mod verify;

pub use error::Error;
pub use scalar::{Rational, Scalar};
