//! Exact toric geometry: fans, class groups, projectivized split bundles,
//! Demazure roots and Cayley forms.

pub mod bundle;
pub mod cayley;
pub mod cli;
pub mod divisor;
pub mod error;
pub mod fan;
pub mod grading;
pub mod io;
pub mod lattice;
pub mod poly;
pub mod polyhedra;
pub mod roots;
pub mod scalar;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use error::{Error, Result};
pub use poly::QPolynomial;

/// Arbitrary-precision integer matrix used for every class-group computation.
pub type IntMatrix = lattice::Matrix<BigInt>;
/// Class groups and Picard groups.
pub type ClassGroup = lattice::AbelianGroupPresentation<BigInt>;
/// Exact rational scalar.
pub type Rational = BigRational;
