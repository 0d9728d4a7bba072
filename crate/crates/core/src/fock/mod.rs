//! Exact banded weighted-shift representation of the harmonic
//! oscillator algebra.
//!
//! An operator is a finite map from integer shift degree `s` to a weight
//! `d_s(n)`, acting as `X|n> = sum_s d_s(n) |n+s>` with `d_s(n)` read as
//! zero whenever `n + s < 0`. The generators `a`, `a†`, `N` and every
//! matrix entry appearing in the oscillator computations live here.

mod weight;

pub use weight::{ScalarFunc, WeightExpr};
pub(crate) use weight::divide_weights;

use std::collections::BTreeMap;
use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::ring::Ring;
use crate::tolerance::ToleranceConfig;

/// Bands identically zero on this window are pruned after products.
const PRUNE_TOP: i64 = 31;
/// Length of tables substituted for oversized weight trees.
const TABLE_LEN: usize = 48;
/// Weight trees above this node count are tabulated on the window.
const TABULATE_THRESHOLD: usize = 4000;

#[derive(Clone, PartialEq)]
pub struct BandOperator {
    bands: BTreeMap<i64, WeightExpr>,
}

impl fmt::Debug for BandOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bands.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (s, w) in &self.bands {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "[{w}]·S^{s}")?;
        }
        Ok(())
    }
}

impl BandOperator {
    pub fn zero() -> Self {
        BandOperator {
            bands: BTreeMap::new(),
        }
    }

    pub fn identity() -> Self {
        BandOperator::diagonal(WeightExpr::one())
    }

    /// Annihilation operator `a`: bands `{-1 -> sqrt(n)}`.
    pub fn annihilation() -> Self {
        BandOperator::single_band(-1, WeightExpr::sqrt(&WeightExpr::level()))
    }

    /// Creation operator `a†`: bands `{+1 -> sqrt(n+1)}`.
    pub fn creation() -> Self {
        BandOperator::single_band(
            1,
            WeightExpr::sqrt(&WeightExpr::add(&WeightExpr::level(), &WeightExpr::one())),
        )
    }

    /// Number operator `N`: bands `{0 -> n}`.
    pub fn number() -> Self {
        BandOperator::diagonal(WeightExpr::level())
    }

    pub fn diagonal(w: WeightExpr) -> Self {
        BandOperator::single_band(0, w)
    }

    pub fn diagonal_table(values: Vec<Complex64>) -> Self {
        BandOperator::diagonal(WeightExpr::table(values))
    }

    pub fn constant(v: crate::BigRational) -> Self {
        BandOperator::diagonal(WeightExpr::rational(v))
    }

    pub fn constant_complex(v: Complex64) -> Self {
        BandOperator::diagonal(WeightExpr::float(v))
    }

    pub fn single_band(shift: i64, w: WeightExpr) -> Self {
        let mut bands = BTreeMap::new();
        if !w.is_const_zero() {
            bands.insert(shift, w);
        }
        BandOperator { bands }
    }

    pub fn from_bands(bands: Vec<(i64, WeightExpr)>) -> Self {
        let mut op = BandOperator::zero();
        for (s, w) in bands {
            if !w.is_const_zero() {
                let entry = op
                    .bands
                    .entry(s)
                    .or_insert_with(WeightExpr::zero);
                *entry = WeightExpr::add(entry, &w);
            }
        }
        op
    }

    pub fn bands(&self) -> &BTreeMap<i64, WeightExpr> {
        &self.bands
    }

    pub fn band(&self, shift: i64) -> Option<&WeightExpr> {
        self.bands.get(&shift)
    }

    pub fn is_structurally_zero(&self) -> bool {
        self.bands.is_empty()
    }

    pub fn is_diagonal(&self) -> bool {
        self.bands.keys().all(|&s| s == 0)
    }

    /// `Some((shift, weight))` when exactly one band is present.
    pub fn as_single_band(&self) -> Option<(i64, &WeightExpr)> {
        if self.bands.len() == 1 {
            self.bands.iter().next().map(|(s, w)| (*s, w))
        } else {
            None
        }
    }

    /// `<m| X |n>`; zero when no band connects the levels.
    pub fn matrix_element(&self, m: i64, n: i64) -> Result<Complex64> {
        if m < 0 || n < 0 {
            return Err(Error::IndexOutOfRange(format!(
                "matrix element ({m},{n}) below vacuum"
            )));
        }
        match self.bands.get(&(m - n)) {
            Some(w) => w.eval(n),
            None => Ok(Complex64::new(0.0, 0.0)),
        }
    }

    pub fn add_op(&self, rhs: &Self) -> Self {
        let mut bands = self.bands.clone();
        for (s, w) in &rhs.bands {
            match bands.get_mut(s) {
                Some(existing) => *existing = WeightExpr::add(existing, w),
                None => {
                    bands.insert(*s, w.clone());
                }
            }
        }
        BandOperator { bands }.normalized()
    }

    pub fn neg_op(&self) -> Self {
        BandOperator {
            bands: self
                .bands
                .iter()
                .map(|(s, w)| (*s, w.neg()))
                .collect(),
        }
    }

    pub fn sub_op(&self, rhs: &Self) -> Self {
        self.add_op(&rhs.neg_op())
    }

    /// Pointwise weight multiple: each band weight gains the factor
    /// `w(n)` at the input level, i.e. `X · diag(w)`. For constants this
    /// is the ordinary scalar multiple.
    pub fn scale(&self, w: &WeightExpr) -> Self {
        BandOperator {
            bands: self
                .bands
                .iter()
                .map(|(s, d)| (*s, WeightExpr::mul(w, d)))
                .collect(),
        }
        .normalized()
    }

    /// Band multiplication: the result band at shift `s` has weight
    /// `sum_{j+k=s} d_k(n+j) e_j(n)` as an exact shifted expression.
    pub fn multiply(&self, rhs: &Self) -> Self {
        let mut bands: BTreeMap<i64, WeightExpr> = BTreeMap::new();
        for (k, d) in &self.bands {
            for (j, e) in &rhs.bands {
                let s = k + j;
                let term = WeightExpr::mul(&d.shift_by(*j), e);
                if term.is_const_zero() {
                    continue;
                }
                match bands.get_mut(&s) {
                    Some(existing) => *existing = WeightExpr::add(existing, &term),
                    None => {
                        bands.insert(s, term);
                    }
                }
            }
        }
        BandOperator { bands }.normalized()
    }

    /// Drop structurally-zero bands, bands that vanish at every window
    /// level, and tabulate oversized trees on the evaluation window.
    fn normalized(mut self) -> Self {
        self.bands.retain(|_, w| !w.is_const_zero());
        let keys: Vec<i64> = self.bands.keys().copied().collect();
        for s in keys {
            let w = &self.bands[&s];
            if w.vanishes_on(PRUNE_TOP) {
                self.bands.remove(&s);
                continue;
            }
            if w.node_count() > TABULATE_THRESHOLD {
                let mut values = Vec::with_capacity(TABLE_LEN);
                let mut ok = true;
                for n in 0..TABLE_LEN as i64 {
                    match w.eval(n) {
                        Ok(v) => values.push(v),
                        Err(_) => {
                            ok = false;
                            break;
                        }
                    }
                }
                if ok {
                    self.bands.insert(s, WeightExpr::table(values));
                }
            }
        }
        self
    }

    /// Equality on the probe window: all matrix elements with
    /// `0 <= m, n <= probe_levels` agree within `abs_tol`.
    pub fn band_equal(&self, rhs: &Self, cfg: &ToleranceConfig) -> bool {
        let top = cfg.probe_levels as i64;
        for m in 0..=top {
            for n in 0..=top {
                let a = match self.matrix_element(m, n) {
                    Ok(v) => v,
                    Err(_) => return false,
                };
                let b = match rhs.matrix_element(m, n) {
                    Ok(v) => v,
                    Err(_) => return false,
                };
                if (a - b).norm() > cfg.abs_tol {
                    return false;
                }
            }
        }
        true
    }

    /// Inverse of a purely diagonal operator with nonvanishing weight on
    /// the probed window (plus guard).
    pub fn try_inverse_diag(&self, cfg: &ToleranceConfig) -> Result<Self> {
        if self.bands.is_empty() {
            return Err(Error::NotInvertible);
        }
        if !self.is_diagonal() {
            return Err(Error::NotInvertible);
        }
        let w = &self.bands[&0];
        for n in 0..=cfg.window_top() {
            match w.eval(n) {
                Ok(v) if v.norm() > cfg.abs_tol => {}
                _ => return Err(Error::NotInvertible),
            }
        }
        Ok(BandOperator::diagonal(WeightExpr::div(
            &WeightExpr::one(),
            w,
        )))
    }

    /// Max |matrix element| over the probe window.
    pub fn norm_window(&self, cfg: &ToleranceConfig) -> f64 {
        let top = cfg.probe_levels as i64;
        let mut best = 0.0f64;
        for m in 0..=top {
            for n in 0..=top {
                match self.matrix_element(m, n) {
                    Ok(v) => best = best.max(v.norm()),
                    Err(_) => return f64::INFINITY,
                }
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DivideSide {
    Left,
    Right,
}

/// Result of a band division; `kernel_levels` lists `(shift, level)`
/// pairs the divisor left unconstrained, where the quotient extends by
/// its own closed form.
#[derive(Debug, Clone)]
pub struct BandDivision {
    pub quotient: BandOperator,
    pub kernel_levels: Vec<(i64, i64)>,
}

impl BandDivision {
    pub fn kernel_flag(&self) -> bool {
        !self.kernel_levels.is_empty()
    }
}

/// Solve `X·c = b` (`side = Right`) or `c·X = b` (`side = Left`)
/// band-by-band for a single-band divisor `c`.
pub fn band_divide(
    b: &BandOperator,
    c: &BandOperator,
    side: DivideSide,
    cfg: &ToleranceConfig,
) -> Result<BandDivision> {
    let (t, w) = c.as_single_band().ok_or_else(|| {
        Error::UnsupportedDivision(format!(
            "divisor must have exactly one band, found {}",
            c.bands.len()
        ))
    })?;

    let top = cfg.window_top();
    let mut bands: BTreeMap<i64, WeightExpr> = BTreeMap::new();
    let mut kernel_levels: Vec<(i64, i64)> = Vec::new();

    for (beta, bw) in &b.bands {
        let s = beta - t;
        let quotient = match side {
            // X·c = b: x_s(m) = B_{s+t}(m - t) / w(m - t)
            DivideSide::Right => divide_weights(bw, w, 0, -t),
            // c·X = b: x_s(n) = B_{s+t}(n) / w(n + s)
            DivideSide::Left => divide_weights(bw, w, s, 0),
        };

        // Scan the window for unconstrained levels.
        for out_level in 0..=top {
            let (src, wv) = match side {
                DivideSide::Right => {
                    let n = out_level - t;
                    if n < 0 {
                        kernel_levels.push((s, out_level));
                        continue;
                    }
                    (n, w.eval(n))
                }
                DivideSide::Left => {
                    let n = out_level;
                    if n + s < 0 {
                        // This component of X maps from a nonexistent
                        // state; the band convention already zeroes it.
                        continue;
                    }
                    (n, w.eval(n + s))
                }
            };
            let wv = wv.map_err(|e| {
                Error::UnsupportedDivision(format!("divisor weight not evaluable: {e}"))
            })?;
            if wv.norm() <= cfg.abs_tol {
                let bv = bw.eval(src).map_err(|e| {
                    Error::UnsupportedDivision(format!("dividend weight not evaluable: {e}"))
                })?;
                if bv.norm() > cfg.abs_tol {
                    return Err(Error::NoSolution(format!(
                        "divisor vanishes at level {src} but dividend band {beta} does not"
                    )));
                }
                kernel_levels.push((s, out_level));
            }
        }

        if !quotient.is_const_zero() {
            bands.insert(s, quotient);
        }
    }

    let quotient = BandOperator { bands }.normalized();

    // Verify the reconstruction; kernel levels cannot disturb it.
    let reconstructed = match side {
        DivideSide::Right => quotient.multiply(c),
        DivideSide::Left => c.multiply(&quotient),
    };
    if !reconstructed.band_equal(b, cfg) {
        return Err(Error::NoSolution(
            "band division verification failed on the probe window".into(),
        ));
    }

    kernel_levels.sort_unstable();
    kernel_levels.dedup();
    Ok(BandDivision {
        quotient,
        kernel_levels,
    })
}

impl Ring for BandOperator {
    const EXACT: bool = false;

    fn zero_like(&self) -> Self {
        BandOperator::zero()
    }

    fn one_like(&self) -> Self {
        BandOperator::identity()
    }

    fn add(&self, rhs: &Self) -> Self {
        self.add_op(rhs)
    }

    fn neg(&self) -> Self {
        self.neg_op()
    }

    fn mul(&self, rhs: &Self) -> Self {
        self.multiply(rhs)
    }

    fn try_inverse(&self, cfg: &ToleranceConfig) -> Result<Self> {
        self.try_inverse_diag(cfg)
    }

    fn approx_eq(&self, rhs: &Self, cfg: &ToleranceConfig) -> bool {
        self.band_equal(rhs, cfg)
    }

    fn norm_max(&self, cfg: &ToleranceConfig) -> f64 {
        self.norm_window(cfg)
    }
}
