//! Exact arithmetic substrate: scalars, truncated Laurent series, symmetric
//! Laurent polynomials in `z`, polynomials and rational functions in `q`,
//! and series graded by the class degree.

mod gaussian;
mod graded;
mod poly;
mod ratfn;
mod scalar;
mod series;
mod sympoly;

pub use gaussian::GaussianRational;
pub use graded::{Algebra, GradedSeries, Module};
pub use poly::Polynomial;
pub use ratfn::RationalFunction;
pub use scalar::{rat, Scalar};
pub use series::{Series, Var};
pub use sympoly::SymLaurentPoly;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;
