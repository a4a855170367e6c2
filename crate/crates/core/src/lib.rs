//! Verification toolkit for finitely presented 2-groups.
//!
//! Each module is an independent route to a property of a presented group:
//! [`coset`] and [`rewriting`] compute orders, [`pquotient`] builds
//! power-commutator presentations of the lower exponent-p central series,
//! [`multiplier`] decides whether the Schur multiplier is trivial, and
//! [`abelian`] handles abelianisations. [`pipeline`] runs them all over a
//! dataset and cross-checks the answers.

pub mod abelian;
pub mod coset;
mod gf;
pub mod matrix;
pub mod multiplier;
pub mod perm;
pub mod pipeline;
pub mod pquotient;
pub mod presentation;
pub mod rewriting;

pub use matrix::IntMatrix;
pub use presentation::{cyclic_reduce, free_reduce, Letter, ParseError, Presentation, Word};
