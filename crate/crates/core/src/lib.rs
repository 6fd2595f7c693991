//! Exact symbolic engine for graded components of free nonassociative algebras.
//!
//! The crate builds multidegree components of the free algebra of a variety
//! defined by multilinear identities, decides whether an identity follows
//! from the defining ones, verifies candidate monomial bases, and computes the
//! identities satisfied by the commutator and anti-commutator algebras of a
//! host variety. All arithmetic is over the rationals.

pub mod bases;
pub mod derived;
pub mod error;
pub mod linalg;
pub mod monomial;
pub mod parser;
pub mod polynomial;
pub mod registry;
pub mod repro;
pub mod rewrite;
pub mod variety;

pub use error::{Error, Result};
pub use monomial::{Generator, Monomial, MultiDegree, TermOrder};
pub use polynomial::{Polynomial, Rational};
