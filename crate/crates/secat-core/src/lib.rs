//! Sectional-category invariants of Sullivan models over the rationals.
//!
//! This crate computes cohomological and module-level lower bounds for the
//! topological complexity of a space from a finitely presented Sullivan model
//! `(ΛV, d)`:
//!
//! * degreewise cohomology of the model and of derived complexes, with exact
//!   rational arithmetic throughout;
//! * the zero-divisor cup length `nil ker ∪`;
//! * the Toomer invariant `e₀` via word-length quotients;
//! * `htc`, the least `n` such that the projection
//!   `pₙ: ΛV ⊗ ΛV → (ΛV ⊗ ΛV)/(ker μ)^{n+1}` is injective on cohomology;
//! * `mtc` attempts: explicit construction of a module homotopy retraction
//!   for `pₙ` through the Poincaré duality pipeline (surjective trick,
//!   duality quasi-isomorphism, semifree factorization, lifting), together
//!   with machine verification of the produced witness.
//!
//! When the cohomology of the model is a Poincaré duality algebra, `htc` and
//! the least `n` admitting a retraction must agree; `verify_theorem` checks
//! this equality on concrete inputs and reports witnesses either way.
//!
//! All computations are performed degreewise up to a caller-supplied degree
//! cap and certified only within it. Every structure is immutable after
//! construction, so values can be shared freely across threads.

pub mod catalog;
pub mod cohomology;
pub mod dga;
pub mod error;
pub mod graded;
pub mod invariants;
pub mod linalg;
pub mod model;
pub mod module;
pub mod poincare;
pub mod poly;
pub mod quotient;
pub mod rational;
pub mod retraction;

pub use error::Error;
pub use rational::Scalar;
