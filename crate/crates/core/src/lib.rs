//! Exact embedded Q-resolutions by weighted blow-ups on abelian quotient charts.
//!
//! The crate resolves plane curve germs with weighted blow-ups, lifts the result to
//! superisolated and Yomdin-Le surface singularities, and assembles the characteristic
//! polynomial of the monodromy with A'Campo's formula. Every quantity is exact: integers,
//! `BigRational` coefficients and formal products of cyclotomic binomials.
//!
//! Module map, bottom-up:
//! - [`wpoly`]: sparse polynomials over a scalar field, weighted orders, univariate
//!   factorization over the rationals.
//! - [`quotient_kernel`]: quotient types `X(d;A)`, normalization, weighted blow-up charts.
//! - [`intersection_theory`]: rational intersection numbers on V-surfaces.
//! - [`monodromy`]: formal characteristic-polynomial products.
//! - [`curve_resolver`]: the embedded Q-resolution of a plane curve germ.
//! - [`surface_lifter`]: the lift to SIS/YLS surfaces and its chart-level verification.
//! - [`oracles`]: independent ground truth (Jacobian algebra, classical resolution).

pub mod curve_resolver;
pub mod intersection_theory;
pub mod monodromy;
pub mod oracles;
pub mod quotient_kernel;
pub mod surface_lifter;
pub mod wpoly;

pub use num_bigint::BigInt;
pub use num_rational::BigRational;

/// Exact rational scalar used for coefficients and intersection numbers.
pub type Rat = BigRational;
/// Arbitrary-precision integer.
pub type Int = BigInt;

pub use curve_resolver::{resolve_curve, CurveResolution, Strategy};
pub use monodromy::CharProduct;
pub use quotient_kernel::QuotientType;
pub use wpoly::{Poly, WPoly};

/// Builds a rational from a machine integer.
pub fn rat(n: i64) -> Rat {
    Rat::from_integer(Int::from(n))
}

/// Builds the rational `num/den`; `den` must be nonzero.
pub fn ratio(num: i64, den: i64) -> Rat {
    Rat::new(Int::from(num), Int::from(den))
}
