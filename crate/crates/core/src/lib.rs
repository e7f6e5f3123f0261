//! Finite graded-commutative ring models of Chow rings and cohomology rings over the
//! rationals, with exact checks of Hard-Lefschetz-type injectivity statements.
//!
//! The building blocks are
//! - [`linalg`]: exact rational matrices (rank, kernel, determinant, solve);
//! - [`ring`]: presentations by generators and triangular rewrite rules;
//! - [`abelian`]: theta, two-divisor and exterior-cohomology models of an abelian variety;
//! - [`sympow`]: symmetric products of a curve as projective bundles over its Jacobian;
//! - [`constructions`]: blow-ups along linear centers, projective bundles, products;
//! - [`lefschetz`]: the injectivity and isomorphism checks themselves.

pub mod abelian;
pub mod constructions;
pub mod error;
pub mod lefschetz;
pub mod linalg;
pub mod model;
pub mod ring;
pub mod sympow;

pub use error::{Error, Result};
pub use lefschetz::{CheckKind, IsoReport, LefschetzReport, Verdict};
pub use linalg::{Matrix, Rational};
pub use model::{CycleClass, Model, ModelKind};
pub use ring::{Element, GeneratorSpec, GradedRing, LinearMapMatrix, Monomial, Parity, PresentationBuilder, RingMap};
