//! The ring-element contract every backend satisfies.
//!
//! All of the quasideterminant and spectral machinery is generic over
//! this trait, so the same elimination code runs on rationals,
//! quaternions, floating complex numbers, weighted-shift operators, and
//! square matrices over any of those (matrices over a ring form a ring).

use std::fmt::Debug;

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::tolerance::ToleranceConfig;

/// A (not necessarily commutative) associative unital ring element.
///
/// `zero_like`/`one_like` take a prototype receiver so that rings whose
/// identity depends on runtime shape (square matrices of a given size)
/// can participate; scalar backends ignore the receiver.
pub trait Ring: Clone + Debug {
    /// Whether equality and inversion are exact for this backend.
    const EXACT: bool;

    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;

    fn add(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;

    fn sub(&self, rhs: &Self) -> Self {
        self.add(&rhs.neg())
    }

    /// Two-sided inverse, or `Error::NotInvertible`.
    fn try_inverse(&self, cfg: &ToleranceConfig) -> Result<Self>;

    /// Backend equality: exact for exact backends, componentwise
    /// `|delta| <= abs_tol` for approximate ones.
    fn approx_eq(&self, rhs: &Self, cfg: &ToleranceConfig) -> bool;

    fn is_zero_el(&self, cfg: &ToleranceConfig) -> bool {
        self.approx_eq(&self.zero_like(), cfg)
    }

    /// Max-abs magnitude used in residual reports. For the
    /// weighted-shift backend this probes matrix elements on the window.
    fn norm_max(&self, cfg: &ToleranceConfig) -> f64;
}

// --- exact rationals -------------------------------------------------

impl Ring for BigRational {
    const EXACT: bool = true;

    fn zero_like(&self) -> Self {
        BigRational::zero()
    }

    fn one_like(&self) -> Self {
        BigRational::one()
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn try_inverse(&self, _cfg: &ToleranceConfig) -> Result<Self> {
        if self.is_zero() {
            Err(Error::NotInvertible)
        } else {
            Ok(self.recip())
        }
    }

    fn approx_eq(&self, rhs: &Self, _cfg: &ToleranceConfig) -> bool {
        self == rhs
    }

    fn norm_max(&self, _cfg: &ToleranceConfig) -> f64 {
        self.to_f64().map(f64::abs).unwrap_or(f64::INFINITY)
    }
}

// --- floating complex numbers ----------------------------------------

impl Ring for Complex64 {
    const EXACT: bool = false;

    fn zero_like(&self) -> Self {
        Complex64::new(0.0, 0.0)
    }

    fn one_like(&self) -> Self {
        Complex64::new(1.0, 0.0)
    }

    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }

    fn neg(&self) -> Self {
        -self
    }

    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }

    fn try_inverse(&self, cfg: &ToleranceConfig) -> Result<Self> {
        if self.norm() <= cfg.abs_tol {
            Err(Error::NotInvertible)
        } else {
            Ok(self.inv())
        }
    }

    fn approx_eq(&self, rhs: &Self, cfg: &ToleranceConfig) -> bool {
        (self.re - rhs.re).abs() <= cfg.abs_tol && (self.im - rhs.im).abs() <= cfg.abs_tol
    }

    fn norm_max(&self, _cfg: &ToleranceConfig) -> f64 {
        self.re.abs().max(self.im.abs())
    }
}
