//! Quaternions over a generic coefficient field.
//!
//! Two flavors are used throughout: `Quaternion<BigRational>` for exact
//! algebraic identities and `Quaternion<f64>` where transcendental
//! functions are unavoidable. The flavors are never mixed.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::tolerance::ToleranceConfig;

/// Coefficient field for quaternion components.
pub trait Coeff:
    Clone
    + fmt::Debug
    + PartialEq
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
    + Div<Output = Self>
{
    const EXACT: bool;

    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;

    /// `|self| <= tol`; exact types ignore `tol` and test for zero.
    fn abs_le(&self, tol: f64) -> bool;
}

impl Coeff for f64 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f64
    }

    fn to_f64(&self) -> f64 {
        *self
    }

    fn abs_le(&self, tol: f64) -> bool {
        self.abs() <= tol
    }
}

impl Coeff for f32 {
    const EXACT: bool = false;

    fn from_i64(v: i64) -> Self {
        v as f32
    }

    fn to_f64(&self) -> f64 {
        *self as f64
    }

    fn abs_le(&self, tol: f64) -> bool {
        (*self as f64).abs() <= tol
    }
}

impl Coeff for BigRational {
    const EXACT: bool = true;

    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }

    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }

    fn abs_le(&self, _tol: f64) -> bool {
        self.is_zero()
    }
}

/// `q = w + x i + y j + z k` with `i^2 = j^2 = k^2 = -1`, `ij = k`.
#[derive(Clone, PartialEq)]
pub struct Quaternion<T> {
    pub w: T,
    pub x: T,
    pub y: T,
    pub z: T,
}

impl<T: fmt::Debug> fmt::Debug for Quaternion<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{:?} + {:?}i + {:?}j + {:?}k",
            self.w, self.x, self.y, self.z
        )
    }
}

impl<T: Coeff> Quaternion<T> {
    pub fn new(w: T, x: T, y: T, z: T) -> Self {
        Quaternion { w, x, y, z }
    }

    pub fn from_real(w: T) -> Self {
        Quaternion::new(w, T::zero(), T::zero(), T::zero())
    }

    pub fn from_i64(w: i64, x: i64, y: i64, z: i64) -> Self {
        Quaternion::new(
            T::from_i64(w),
            T::from_i64(x),
            T::from_i64(y),
            T::from_i64(z),
        )
    }

    pub fn zero() -> Self {
        Quaternion::from_i64(0, 0, 0, 0)
    }

    pub fn one() -> Self {
        Quaternion::from_i64(1, 0, 0, 0)
    }

    pub fn i() -> Self {
        Quaternion::from_i64(0, 1, 0, 0)
    }

    pub fn j() -> Self {
        Quaternion::from_i64(0, 0, 1, 0)
    }

    pub fn k() -> Self {
        Quaternion::from_i64(0, 0, 0, 1)
    }

    pub fn conjugate(&self) -> Self {
        Quaternion::new(
            self.w.clone(),
            -self.x.clone(),
            -self.y.clone(),
            -self.z.clone(),
        )
    }

    /// `w^2 + x^2 + y^2 + z^2`.
    pub fn norm_sq(&self) -> T {
        let ww = self.w.clone() * self.w.clone();
        let xx = self.x.clone() * self.x.clone();
        let yy = self.y.clone() * self.y.clone();
        let zz = self.z.clone() * self.z.clone();
        ww + xx + yy + zz
    }

    pub fn scale(&self, s: &T) -> Self {
        Quaternion::new(
            self.w.clone() * s.clone(),
            self.x.clone() * s.clone(),
            self.y.clone() * s.clone(),
            self.z.clone() * s.clone(),
        )
    }

    pub fn components(&self) -> [T; 4] {
        [
            self.w.clone(),
            self.x.clone(),
            self.y.clone(),
            self.z.clone(),
        ]
    }
}

impl Quaternion<BigRational> {
    /// Lossless conversion to the floating flavor.
    pub fn to_f64_flavor(&self) -> Quaternion<f64> {
        Quaternion::new(
            Coeff::to_f64(&self.w),
            Coeff::to_f64(&self.x),
            Coeff::to_f64(&self.y),
            Coeff::to_f64(&self.z),
        )
    }
}

impl<T: Coeff> Add for Quaternion<T> {
    type Output = Quaternion<T>;
    fn add(self, rhs: Self) -> Self {
        Quaternion::new(
            self.w + rhs.w,
            self.x + rhs.x,
            self.y + rhs.y,
            self.z + rhs.z,
        )
    }
}

impl<T: Coeff> Sub for Quaternion<T> {
    type Output = Quaternion<T>;
    fn sub(self, rhs: Self) -> Self {
        Quaternion::new(
            self.w - rhs.w,
            self.x - rhs.x,
            self.y - rhs.y,
            self.z - rhs.z,
        )
    }
}

impl<T: Coeff> Neg for Quaternion<T> {
    type Output = Quaternion<T>;
    fn neg(self) -> Self {
        Quaternion::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl<T: Coeff> Mul for Quaternion<T> {
    type Output = Quaternion<T>;
    fn mul(self, rhs: Self) -> Self {
        let (a, b, c, d) = (self.w, self.x, self.y, self.z);
        let (e, f, g, h) = (rhs.w, rhs.x, rhs.y, rhs.z);
        Quaternion::new(
            a.clone() * e.clone()
                - b.clone() * f.clone()
                - c.clone() * g.clone()
                - d.clone() * h.clone(),
            a.clone() * f.clone() + b.clone() * e.clone() + c.clone() * h.clone()
                - d.clone() * g.clone(),
            a.clone() * g.clone() - b.clone() * h.clone()
                + c.clone() * e.clone()
                + d.clone() * f.clone(),
            a * h + b * g - c * f + d * e,
        )
    }
}

impl<T: Coeff> Ring for Quaternion<T> {
    const EXACT: bool = T::EXACT;

    fn zero_like(&self) -> Self {
        Quaternion::zero()
    }

    fn one_like(&self) -> Self {
        Quaternion::one()
    }

    fn add(&self, rhs: &Self) -> Self {
        self.clone() + rhs.clone()
    }

    fn neg(&self) -> Self {
        -self.clone()
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.clone() * rhs.clone()
    }

    fn try_inverse(&self, cfg: &ToleranceConfig) -> Result<Self> {
        let n = self.norm_sq();
        let vanishes = if T::EXACT {
            n.is_zero()
        } else {
            // Guard against catastrophically small norms only.
            n.to_f64() <= cfg.abs_tol * cfg.abs_tol
        };
        if vanishes {
            return Err(Error::NotInvertible);
        }
        let conj = self.conjugate();
        Ok(Quaternion::new(
            conj.w / n.clone(),
            conj.x / n.clone(),
            conj.y / n.clone(),
            conj.z / n,
        ))
    }

    fn approx_eq(&self, rhs: &Self, cfg: &ToleranceConfig) -> bool {
        if T::EXACT {
            self == rhs
        } else {
            (self.w.clone() - rhs.w.clone()).abs_le(cfg.abs_tol)
                && (self.x.clone() - rhs.x.clone()).abs_le(cfg.abs_tol)
                && (self.y.clone() - rhs.y.clone()).abs_le(cfg.abs_tol)
                && (self.z.clone() - rhs.z.clone()).abs_le(cfg.abs_tol)
        }
    }

    fn norm_max(&self, _cfg: &ToleranceConfig) -> f64 {
        self.components()
            .iter()
            .map(|c| c.to_f64().abs())
            .fold(0.0, f64::max)
    }
}

/// Quaternion exponential in closed form:
/// `exp(a + v) = e^a (cos|v| + (v/|v|) sin|v|)` for pure-imaginary `v`.
pub fn quaternion_exp(q: &Quaternion<f64>) -> Quaternion<f64> {
    let vnorm = (q.x * q.x + q.y * q.y + q.z * q.z).sqrt();
    let ea = q.w.exp();
    if vnorm == 0.0 {
        return Quaternion::new(ea, 0.0, 0.0, 0.0);
    }
    let s = ea * vnorm.sin() / vnorm;
    Quaternion::new(ea * vnorm.cos(), s * q.x, s * q.y, s * q.z)
}
