//! Quasideterminant calculus and noncommutative spectral decomposition.
//!
//! The crate computes Gelfand–Retakh quasideterminants, per-row
//! noncommutative characteristic polynomials, eigen-diagonals, spectral
//! projectors, and matrix functions (notably exponentials) for matrices
//! over noncommutative rings. Concrete backends: exact rationals,
//! floating complex numbers, quaternions (exact and floating), and the
//! weighted-shift operator algebra of the harmonic oscillator.

pub mod charpoly;
pub mod error;
pub mod fock;
pub mod matrix;
pub mod oracle;
pub mod qdet;
pub mod quaternion;
pub mod ring;
pub mod spectral;
pub mod tolerance;

pub use error::{Error, Result};
pub use matrix::NcMatrix;
pub use quaternion::{quaternion_exp, Quaternion};
pub use ring::Ring;
pub use tolerance::ToleranceConfig;

pub use num_bigint::BigInt;
pub use num_complex::Complex64;
pub use num_rational::BigRational;

/// Exact rational scalar.
pub type Rational = BigRational;
/// Exact-rational quaternion flavor.
pub type QuaternionExact = Quaternion<BigRational>;
/// Floating quaternion flavor.
pub type QuaternionF64 = Quaternion<f64>;

pub type RationalMatrix = NcMatrix<Rational>;
pub type ComplexMatrix = NcMatrix<Complex64>;
pub type QuaternionMatrix = NcMatrix<QuaternionExact>;
pub type QuaternionMatrixF64 = NcMatrix<QuaternionF64>;
pub type BandMatrix = NcMatrix<fock::BandOperator>;

/// Convenience constructor for exact rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}
