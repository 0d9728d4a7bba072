//! Independent commutative and dense-numeric oracles.
//!
//! These validate the noncommutative machinery on instances where
//! classical answers exist: exact determinants for the commutative
//! reduction of quasideterminants, the classical characteristic
//! polynomial and Lagrange basis, and a dense truncated matrix
//! exponential for the oscillator backend.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::fock::BandOperator;
use crate::matrix::NcMatrix;
use crate::ring::Ring;
use crate::tolerance::ToleranceConfig;
use crate::RationalMatrix;

/// Exact determinant of a rational matrix by Gaussian elimination.
pub fn det_exact(a: &RationalMatrix) -> Result<BigRational> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("determinant of non-square".into()));
    }
    let n = a.rows();
    let mut m: Vec<Vec<BigRational>> = (1..=n)
        .map(|i| (1..=n).map(|j| a.entry(i, j).clone()).collect())
        .collect();
    let mut det = BigRational::one();
    for col in 0..n {
        let pivot_row = match (col..n).find(|&r| !m[r][col].is_zero()) {
            Some(r) => r,
            None => return Ok(BigRational::zero()),
        };
        if pivot_row != col {
            m.swap(pivot_row, col);
            det = -det;
        }
        let pivot = m[col][col].clone();
        det *= &pivot;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pivot;
            for c in col..n {
                let sub = &f * &m[col][c];
                m[r][c] -= sub;
            }
        }
    }
    Ok(det)
}

/// Cofactor-expansion determinant, for cross-checking `det_exact` on
/// small matrices.
pub fn det_cofactor(a: &RationalMatrix) -> Result<BigRational> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("determinant of non-square".into()));
    }
    let n = a.rows();
    if n == 1 {
        return Ok(a.entry(1, 1).clone());
    }
    let mut acc = BigRational::zero();
    for j in 1..=n {
        if a.entry(1, j).is_zero() {
            continue;
        }
        let minor = a.delete_row_col(1, j)?;
        let term = a.entry(1, j) * det_cofactor(&minor)?;
        if j % 2 == 1 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    Ok(acc)
}

/// Adjugate-over-determinant inverse for exact rational matrices.
pub fn inverse_adjugate(a: &RationalMatrix) -> Result<RationalMatrix> {
    let n = a.rows();
    let det = det_exact(a)?;
    if det.is_zero() {
        return Err(Error::Singular("zero determinant".into()));
    }
    if n == 1 {
        return Ok(NcMatrix::from_rows(vec![vec![det.recip()]]));
    }
    let mut out = NcMatrix::zeros(n, n, a.proto());
    for i in 1..=n {
        for j in 1..=n {
            let minor = a.delete_row_col(j, i)?;
            let mut c = det_exact(&minor)? / &det;
            if (i + j) % 2 == 1 {
                c = -c;
            }
            out.set_entry(i, j, c);
        }
    }
    Ok(out)
}

/// Classical characteristic polynomial by Faddeev–LeVerrier, returned
/// in the convention `det(λI - A) = λ^n - Σ_k C_k λ^{n-k}`.
pub fn classical_charpoly(a: &RationalMatrix) -> Result<Vec<BigRational>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("charpoly of non-square".into()));
    }
    let n = a.rows();
    let trace =
        |m: &RationalMatrix| -> BigRational { (1..=n).map(|i| m.entry(i, i).clone()).sum() };
    let id = RationalMatrix::identity(n, a.proto());
    // p(λ) = λ^n + a_{n-1} λ^{n-1} + ... + a_0 via
    // M_k = A·M_{k-1} + a_{n-k+1} I, a_{n-k} = -tr(A·M_k)/k.
    let mut coeffs: Vec<BigRational> = Vec::with_capacity(n);
    let mut m = id.clone();
    for k in 1..=n {
        let am = a.mul(&m)?;
        let ak = -(trace(&am) / BigRational::from_integer(k.into()));
        coeffs.push(ak.clone());
        m = am.add(&id.scale_left(&ak))?;
    }
    // coeffs[k-1] = a_{n-k}; C_k = -a_{n-k}
    Ok(coeffs.into_iter().map(|c| -c).collect())
}

/// Classical Lagrange basis polynomial `f_j(z) = Π_{i≠j} (z-x_i)/(x_j-x_i)`.
pub fn classical_lagrange(xs: &[BigRational], j: usize, z: &BigRational) -> Result<BigRational> {
    if j < 1 || j > xs.len() {
        return Err(Error::IndexOutOfRange(format!("lagrange index {j}")));
    }
    let mut acc = BigRational::one();
    for (idx, xi) in xs.iter().enumerate() {
        if idx == j - 1 {
            continue;
        }
        let den = &xs[j - 1] - xi;
        if den.is_zero() {
            return Err(Error::VandermondeSingular);
        }
        acc *= (z - xi) / den;
    }
    Ok(acc)
}

// --- dense complex matrices -------------------------------------------

/// Minimal dense complex matrix for oracle computations.
#[derive(Debug, Clone, PartialEq)]
pub struct CMat {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl CMat {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMat {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMat::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn get(&self, r: usize, c: usize) -> Complex64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: Complex64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn mul(&self, rhs: &CMat) -> CMat {
        assert_eq!(self.cols, rhs.rows);
        let mut out = CMat::zeros(self.rows, rhs.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if a.norm() == 0.0 {
                    continue;
                }
                for c in 0..rhs.cols {
                    let v = out.get(r, c) + a * rhs.get(k, c);
                    out.set(r, c, v);
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &CMat) -> CMat {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn scale(&self, s: Complex64) -> CMat {
        CMat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    /// Max row sum of absolute values (induced infinity norm).
    pub fn norm_inf(&self) -> f64 {
        (0..self.rows)
            .map(|r| (0..self.cols).map(|c| self.get(r, c).norm()).sum::<f64>())
            .fold(0.0, f64::max)
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }
}

/// Dense matrix exponential by scaling-and-squaring with a Taylor core.
pub fn dense_expm(m: &CMat) -> CMat {
    assert_eq!(m.rows, m.cols);
    let norm = m.norm_inf();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m.scale(Complex64::new(1.0 / f64::powi(2.0, squarings as i32), 0.0));

    // At ||scaled|| <= 0.5 the Taylor tail after 24 terms is below
    // machine precision.
    let mut sum = CMat::identity(m.rows);
    let mut term = CMat::identity(m.rows);
    for k in 1..=24 {
        term = term.mul(&scaled).scale(Complex64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
    }
    for _ in 0..squarings {
        sum = sum.mul(&sum);
    }
    sum
}

// --- dense truncations of band operators -------------------------------

/// Dense truncation of a single band operator on levels `0..dim`.
pub fn truncate_band(x: &BandOperator, dim: usize) -> Result<CMat> {
    let mut out = CMat::zeros(dim, dim);
    for m in 0..dim {
        for n in 0..dim {
            out.set(m, n, x.matrix_element(m as i64, n as i64)?);
        }
    }
    Ok(out)
}

/// Dense truncation of a matrix of band operators, in block layout:
/// block (i,j) holds the truncation of entry (i,j).
pub fn truncate_band_matrix(a: &NcMatrix<BandOperator>, dim: usize) -> Result<CMat> {
    let rows = a.rows();
    let cols = a.cols();
    let mut out = CMat::zeros(rows * dim, cols * dim);
    for i in 1..=rows {
        for j in 1..=cols {
            let block = truncate_band(a.entry(i, j), dim)?;
            for m in 0..dim {
                for n in 0..dim {
                    out.set((i - 1) * dim + m, (j - 1) * dim + n, block.get(m, n));
                }
            }
        }
    }
    Ok(out)
}

/// Dense truncation built per the guard-band convention: dimension
/// `probe_levels + guard_band + 1`.
pub struct DenseTruncation {
    pub dim: usize,
    pub matrix: CMat,
}

impl DenseTruncation {
    pub fn of_band_matrix(a: &NcMatrix<BandOperator>, cfg: &ToleranceConfig) -> Result<Self> {
        let dim = (cfg.probe_levels + cfg.guard_band + 1) as usize;
        Ok(DenseTruncation {
            dim,
            matrix: truncate_band_matrix(a, dim)?,
        })
    }

    /// Block entry `<m| (i,j) |n>` of the truncation.
    pub fn block_element(&self, i: usize, j: usize, m: usize, n: usize) -> Complex64 {
        self.matrix
            .get((i - 1) * self.dim + m, (j - 1) * self.dim + n)
    }
}

/// Windowed check that band multiplication agrees with dense truncated
/// multiplication; returns the max deviation over in-window elements.
pub fn band_product_vs_dense(
    x: &BandOperator,
    y: &BandOperator,
    cfg: &ToleranceConfig,
) -> Result<f64> {
    let dim = (cfg.window_top() + 1) as usize;
    let dx = truncate_band(x, dim)?;
    let dy = truncate_band(y, dim)?;
    let dense = dx.mul(&dy);
    let banded = x.mul(y);
    let top = cfg.probe_levels as i64;
    let mut worst = 0.0f64;
    for m in 0..=top {
        for n in 0..=top {
            let b = banded.matrix_element(m, n)?;
            let d = dense.get(m as usize, n as usize);
            worst = worst.max((b - d).norm());
        }
    }
    Ok(worst)
}
