//! Finite relations, generalized incidence rings over them, and the good
//! gradings induced by relation homomorphisms.

mod error;
mod util;

pub mod coefficient;
pub mod compression;
pub mod demo;
pub mod extension;
pub mod fixtures;
pub mod grading;
pub mod grading_sets;
pub mod incidence;
pub mod io;
pub mod relation;
pub mod semigroup;

pub use coefficient::{Coefficient, CoefficientRing, ModInt};
pub use compression::{CompressionMap, GradedEmbedding};
pub use error::{Error, Result};
pub use grading::{GoodGrading, RelationHomomorphism};
pub use grading_sets::{Budget, GradingSubset};
pub use incidence::{Element, IncidenceRing};
pub use relation::{Atom, FiniteRelation, Pair};
pub use semigroup::{Degree, Semigroup};

/// Incidence ring element with integer coefficients.
pub type IntElement = Element<num_bigint::BigInt>;
/// Incidence ring element with rational coefficients.
pub type RatElement = Element<num_rational::BigRational>;
/// Incidence ring element with coefficients modulo a runtime modulus.
pub type ModElement = Element<ModInt>;
