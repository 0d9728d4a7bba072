//! Noncommutative spectral decomposition.
//!
//! Vandermonde quasideterminants, noncommutative Lagrange interpolating
//! polynomials, eigen-diagonal assembly, spectral projectors, the
//! `V_m = 0` residual checks, and matrix functions built from the
//! decomposition. Everything runs through the ring contract, so the
//! same code serves scalar backends and `M(n, base)`: for a matrix
//! decomposition the Vandermonde matrix has matrix-valued entries and
//! is inverted by the ordinary elimination routine.

use num_complex::Complex64;
use num_rational::BigRational;

use crate::charpoly::{pow_ring, CharPolyRing, RowCharPoly};
use crate::error::{Error, Result};
use crate::fock::{BandOperator, ScalarFunc, WeightExpr};
use crate::matrix::NcMatrix;
use crate::qdet::quasideterminant;
use crate::quaternion::{Coeff, Quaternion};
use crate::ring::Ring;
use crate::tolerance::ToleranceConfig;

/// Eigen-diagonal matrices `x_1..x_n`: the (i,i) entry of `x_j` is a
/// root of row i's characteristic polynomial.
#[derive(Debug, Clone)]
pub struct EigenDiagonals<R> {
    pub xs: Vec<NcMatrix<R>>,
}

/// Max-residual summary of the projector algebra and the `V_m` checks.
#[derive(Debug, Clone, Copy, Default)]
pub struct ResidualReport {
    pub idempotence: f64,
    pub orthogonality: f64,
    pub completeness: f64,
    /// max over m of the bordered-quasideterminant `V_m` norm
    pub vandermonde_bordered: f64,
    /// max over m of the expanded `z^m - Σ x_k^m f_k(z)` norm
    pub vandermonde_expanded: f64,
}

#[derive(Debug, Clone)]
pub struct SpectralDecomposition<R> {
    pub xs: EigenDiagonals<R>,
    pub projectors: Vec<NcMatrix<R>>,
    pub residual_report: ResidualReport,
}

/// `V_m` bordered quasideterminant: the `(n+1)x(n+1)` matrix with top
/// row `(x_1^m, ..., x_n^m, z^m)` over the Vandermonde rows of powers
/// `n-1..0`, boxed at `(1, n+1)`.
pub fn vandermonde_qdet_power<R: Ring>(
    xs: &[R],
    z: &R,
    m: usize,
    cfg: &ToleranceConfig,
) -> Result<R> {
    let n = xs.len();
    if n == 0 {
        return Err(Error::DimensionMismatch("empty Vandermonde".into()));
    }
    let bordered = NcMatrix::from_fn(n + 1, n + 1, |r, c| {
        let p = if r == 1 { m } else { n + 1 - r };
        if c <= n {
            pow_ring(&xs[c - 1], p)
        } else {
            pow_ring(z, p)
        }
    });
    quasideterminant(&bordered, 1, n + 1, cfg)
}

/// `V(x_1, ..., x_k, z)`: the Vandermonde quasideterminant with `z`'s
/// powers in the last column.
pub fn vandermonde_qdet<R: Ring>(xs: &[R], z: &R, cfg: &ToleranceConfig) -> Result<R> {
    vandermonde_qdet_power(xs, z, xs.len(), cfg)
}

/// Left coefficients of the noncommutative Lagrange interpolating
/// polynomials: row `i` of the inverse Vandermonde matrix, so that
/// `f_i(z) = Σ_k W_{ik} z^{n-k}`.
pub fn lagrange_coeffs<R: Ring>(xs: &[R], cfg: &ToleranceConfig) -> Result<NcMatrix<R>> {
    let n = xs.len();
    if n == 0 {
        return Err(Error::DimensionMismatch("empty node list".into()));
    }
    let vdm = NcMatrix::from_fn(n, n, |p, j| pow_ring(&xs[j - 1], n - p));
    vdm.inverse_elimination(cfg)
        .map_err(|_| Error::VandermondeSingular)
}

/// Evaluate `f_i` at `z` with left coefficients.
pub fn lagrange_eval<R: Ring>(w: &NcMatrix<R>, i: usize, z: &R) -> R {
    let n = w.cols();
    let mut acc = z.zero_like();
    for k in 1..=n {
        acc = acc.add(&w.entry(i, k).mul(&pow_ring(z, n - k)));
    }
    acc
}

/// Root-finding strategy for `solve_eigen_diagonals`.
#[derive(Debug, Clone)]
pub enum RootStrategy<R> {
    /// Zero-root factoring for division-ring backends; pointwise
    /// numerical roots for the oscillator backend.
    Auto,
    /// User-supplied roots, one list of `n` roots per row; verified.
    Supplied(Vec<Vec<R>>),
}

/// Backends that can produce the roots of a row polynomial.
pub trait SpectralRing: CharPolyRing {
    fn roots_of_row_poly(poly: &RowCharPoly<Self>, cfg: &ToleranceConfig) -> Result<Vec<Self>>;
}

/// Zero-root factoring: while the constant term vanishes, split off a
/// zero root; a remaining degree-1 factor `λ - C` contributes `C`.
/// Anything of degree >= 2 with a nonzero constant term is out of reach
/// without supplied roots.
fn roots_by_zero_factoring<R: Ring>(poly: &RowCharPoly<R>, cfg: &ToleranceConfig) -> Result<Vec<R>> {
    let mut coeffs = poly.coeffs.clone();
    let mut zeros = 0usize;
    while let Some(last) = coeffs.last() {
        if last.is_zero_el(cfg) {
            zeros += 1;
            coeffs.pop();
        } else {
            break;
        }
    }
    let proto = poly
        .coeffs
        .first()
        .cloned()
        .ok_or_else(|| Error::RootNotFound("empty polynomial".into()))?;
    let mut roots = match coeffs.len() {
        0 => Vec::new(),
        1 => vec![coeffs[0].clone()],
        d => {
            return Err(Error::RootNotFound(format!(
                "residual factor of degree {d} has a nonzero constant term; supply roots"
            )))
        }
    };
    for _ in 0..zeros {
        roots.push(proto.zero_like());
    }
    Ok(roots)
}

impl SpectralRing for BigRational {
    fn roots_of_row_poly(poly: &RowCharPoly<Self>, cfg: &ToleranceConfig) -> Result<Vec<Self>> {
        roots_by_zero_factoring(poly, cfg)
    }
}

impl<T: Coeff> SpectralRing for Quaternion<T> {
    fn roots_of_row_poly(poly: &RowCharPoly<Self>, cfg: &ToleranceConfig) -> Result<Vec<Self>> {
        roots_by_zero_factoring(poly, cfg)
    }
}

impl SpectralRing for Complex64 {
    /// Scalar complex coefficients: all roots numerically.
    fn roots_of_row_poly(poly: &RowCharPoly<Self>, _cfg: &ToleranceConfig) -> Result<Vec<Self>> {
        let roots = scalar_poly_roots(&poly.coeffs)?;
        Ok(roots)
    }
}

impl SpectralRing for BandOperator {
    /// Pointwise roots: the coefficients are diagonal, so solve the
    /// scalar polynomial at each level and assemble diagonal tables,
    /// ordering roots per level by descending real then imaginary part.
    fn roots_of_row_poly(poly: &RowCharPoly<Self>, cfg: &ToleranceConfig) -> Result<Vec<Self>> {
        let d = poly.coeffs.len();
        let table_len = (cfg.window_top() + 16) as usize;
        let mut per_root: Vec<Vec<Complex64>> = vec![Vec::with_capacity(table_len); d];
        for c in &poly.coeffs {
            if !c.is_diagonal() {
                return Err(Error::RootNotFound(
                    "row polynomial coefficients are not diagonal".into(),
                ));
            }
        }
        for level in 0..table_len as i64 {
            let coeffs: Vec<Complex64> = poly
                .coeffs
                .iter()
                .map(|c| c.matrix_element(level, level))
                .collect::<Result<_>>()?;
            let roots = scalar_poly_roots(&coeffs)?;
            for (j, r) in roots.into_iter().enumerate() {
                per_root[j].push(r);
            }
        }
        Ok(per_root
            .into_iter()
            .map(BandOperator::diagonal_table)
            .collect())
    }
}

/// All roots of `λ^d - Σ_k coeffs[k-1] λ^{d-k}` by Durand–Kerner,
/// sorted by descending real then imaginary part.
fn scalar_poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let d = coeffs.len();
    if d == 0 {
        return Ok(Vec::new());
    }
    let eval = |z: Complex64| -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for c in coeffs {
            acc = acc * z - c;
        }
        acc
    };
    let scale = coeffs
        .iter()
        .map(|c| c.norm())
        .fold(1.0f64, f64::max)
        .max(1.0);

    let seed = Complex64::new(0.4, 0.9);
    let mut roots: Vec<Complex64> = (0..d).map(|k| seed.powu(k as u32 + 1)).collect();
    for _ in 0..400 {
        let mut worst = 0.0f64;
        let prev = roots.clone();
        for k in 0..d {
            let mut denom = Complex64::new(1.0, 0.0);
            for (l, r) in prev.iter().enumerate() {
                if l != k {
                    denom *= prev[k] - r;
                }
            }
            if denom.norm() == 0.0 {
                // perturb coincident iterates
                roots[k] += Complex64::new(1e-6, 1e-6);
                worst = f64::INFINITY;
                continue;
            }
            let delta = eval(prev[k]) / denom;
            roots[k] = prev[k] - delta;
            worst = worst.max(delta.norm());
        }
        if worst < 1e-14 * scale {
            break;
        }
    }
    for r in &mut roots {
        // snap tiny components so ordering and tables stay clean
        if r.re.abs() < 1e-12 * scale {
            r.re = 0.0;
        }
        if r.im.abs() < 1e-12 * scale {
            r.im = 0.0;
        }
    }
    for r in &roots {
        if eval(*r).norm() > 1e-8 * scale {
            return Err(Error::RootNotFound(format!(
                "iteration left residual {} at root {r}",
                eval(*r).norm()
            )));
        }
    }
    roots.sort_by(|a, b| {
        b.re.partial_cmp(&a.re)
            .unwrap()
            .then(b.im.partial_cmp(&a.im).unwrap())
    });
    Ok(roots)
}

/// Produce the eigen-diagonals `x_j = diag_i(root_j of Φ_i)`, verifying
/// every root against its row polynomial and the Vandermonde matrix of
/// the result for invertibility.
pub fn solve_eigen_diagonals<R: SpectralRing>(
    a: &NcMatrix<R>,
    polys: &[RowCharPoly<R>],
    strategy: &RootStrategy<R>,
    cfg: &ToleranceConfig,
) -> Result<EigenDiagonals<R>> {
    let n = a.rows();
    if polys.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "need {n} row polynomials, got {}",
            polys.len()
        )));
    }
    let mut row_roots: Vec<Vec<R>> = Vec::with_capacity(n);
    for (idx, poly) in polys.iter().enumerate() {
        let roots = match strategy {
            RootStrategy::Auto => R::roots_of_row_poly(poly, cfg)?,
            RootStrategy::Supplied(all) => all
                .get(idx)
                .cloned()
                .ok_or_else(|| Error::RootNotFound(format!("no roots supplied for row {}", idx + 1)))?,
        };
        if roots.len() != n {
            return Err(Error::RootNotFound(format!(
                "row {} needs {n} roots, got {}",
                idx + 1,
                roots.len()
            )));
        }
        for r in &roots {
            let resid = poly.eval(r);
            if !resid.is_zero_el(cfg) {
                return Err(Error::RootRejected(format!(
                    "root of row {} leaves residual {:.3e}",
                    idx + 1,
                    resid.norm_max(cfg)
                )));
            }
        }
        row_roots.push(roots);
    }

    let proto = a.proto();
    let xs: Vec<NcMatrix<R>> = (0..n)
        .map(|j| {
            NcMatrix::from_fn(n, n, |r, c| {
                if r == c {
                    row_roots[r - 1][j].clone()
                } else {
                    proto.zero_like()
                }
            })
        })
        .collect();

    // The Vandermonde matrix of the eigen-diagonals must be invertible.
    lagrange_coeffs(&xs, cfg)?;

    Ok(EigenDiagonals { xs })
}

/// Projectors `P_k = f_k(A)` over the matrix ring, with the residual
/// diagnostics of the projector algebra and the `V_m` identities.
pub fn spectral_decompose<R: Ring>(
    a: &NcMatrix<R>,
    xs: &EigenDiagonals<R>,
    cfg: &ToleranceConfig,
) -> Result<SpectralDecomposition<R>> {
    let n = a.rows();
    if xs.xs.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "need {n} eigen-diagonals, got {}",
            xs.xs.len()
        )));
    }
    let w = lagrange_coeffs(&xs.xs, cfg)?;
    let projectors: Vec<NcMatrix<R>> = (1..=n).map(|k| lagrange_eval(&w, k, a)).collect();

    let id = NcMatrix::identity(n, a.proto());
    let mut report = ResidualReport::default();

    for (k, p) in projectors.iter().enumerate() {
        let idem = Ring::mul(p, p).sub(p).expect("same dims");
        report.idempotence = report.idempotence.max(idem.norm_max_mat(cfg));
        for (l, q) in projectors.iter().enumerate() {
            if k != l {
                let orth = Ring::mul(p, q);
                report.orthogonality = report.orthogonality.max(orth.norm_max_mat(cfg));
            }
        }
    }
    let mut total = projectors[0].zero_like();
    for p in &projectors {
        total = total.add(p).expect("same dims");
    }
    report.completeness = total.sub(&id).expect("same dims").norm_max_mat(cfg);

    for m in 0..=n + 5 {
        if let Ok(v) = vandermonde_qdet_power(&xs.xs, a, m, cfg) {
            report.vandermonde_bordered = report.vandermonde_bordered.max(v.norm_max(cfg));
        }
        let mut recon = a.power(m)?;
        for (k, p) in projectors.iter().enumerate() {
            let xm = pow_ring(&xs.xs[k], m);
            recon = recon.sub(&xm.mul(p)?)?;
        }
        report.vandermonde_expanded = report.vandermonde_expanded.max(recon.norm_max_mat(cfg));
    }

    Ok(SpectralDecomposition {
        xs: xs.clone(),
        projectors,
        residual_report: report,
    })
}

/// Residual of the proof identity
/// `V_{m-1} z - V_m + c_{1,n+1} c_{2,n+1}^{-1} V_n`, every factor
/// computed from its bordered-quasideterminant definition. Zero as an
/// identity, whether or not `V_n` vanishes.
pub fn main_identity_residual<R: Ring>(
    xs: &[R],
    z: &R,
    m: usize,
    cfg: &ToleranceConfig,
) -> Result<R> {
    let n = xs.len();
    if m < 1 {
        return Err(Error::IndexOutOfRange("m must be at least 1".into()));
    }
    let v_m_minus_1 = vandermonde_qdet_power(xs, z, m - 1, cfg)?;
    let v_m = vandermonde_qdet_power(xs, z, m, cfg)?;
    let v_n = vandermonde_qdet_power(xs, z, n, cfg)?;
    let c1 = power_border_qdet(xs, m, cfg)?;
    let c2 = power_border_qdet(xs, n, cfg)?;
    let c2inv = c2
        .try_inverse(cfg)
        .map_err(|_| Error::Undefined("c_{2,n+1} not invertible".into()))?;
    Ok(v_m_minus_1
        .mul(z)
        .sub(&v_m)
        .add(&c1.mul(&c2inv).mul(&v_n)))
}

/// The bordered quasideterminant `c_{p,n+1}` from the Sylvester step of
/// the main-theorem proof: the Vandermonde block `A_0` bordered by the
/// power-`m` row and the column `(0,...,0,1)^T`, boxed at the corner.
fn power_border_qdet<R: Ring>(xs: &[R], m: usize, cfg: &ToleranceConfig) -> Result<R> {
    let n = xs.len();
    let proto = &xs[0];
    let bordered = NcMatrix::from_fn(n + 1, n + 1, |r, c| {
        if r <= n {
            // Vandermonde rows: powers n-1 down to 0, plus the 0/1 column.
            if c <= n {
                pow_ring(&xs[c - 1], n - r)
            } else if r == n {
                proto.one_like()
            } else {
                proto.zero_like()
            }
        } else if c <= n {
            pow_ring(&xs[c - 1], m)
        } else {
            proto.zero_like()
        }
    });
    quasideterminant(&bordered, n + 1, n + 1, cfg)
}

/// `Σ_k g(x_k) · P_k` where `g` maps each diagonal entry of `x_k`.
/// This is the generic core of every matrix function: pass the scalar
/// function (already folded with its scale) as `diag_map`.
pub fn matrix_function_with<R: Ring>(
    decomp: &SpectralDecomposition<R>,
    diag_map: impl Fn(&R) -> Result<R>,
) -> Result<NcMatrix<R>> {
    let n = decomp.projectors.len();
    let mut acc: Option<NcMatrix<R>> = None;
    for (k, p) in decomp.projectors.iter().enumerate() {
        let x = &decomp.xs.xs[k];
        let fx = {
            let mut out = x.zero_like();
            for i in 1..=n {
                out.set_entry(i, i, diag_map(x.entry(i, i))?);
            }
            out
        };
        let term = fx.mul(p)?;
        acc = Some(match acc {
            Some(a) => a.add(&term)?,
            None => term,
        });
    }
    Ok(acc.expect("at least one projector"))
}

/// Scalar function tags the CLI and the convenience wrappers accept.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FunctionTag {
    Identity,
    Exp,
}

/// `exp(t·A)` for a floating-quaternion decomposition.
pub fn matrix_exp_quaternion(
    decomp: &SpectralDecomposition<Quaternion<f64>>,
    t: f64,
) -> Result<NcMatrix<Quaternion<f64>>> {
    matrix_function_with(decomp, |q| Ok(crate::quaternion::quaternion_exp(&q.scale(&t))))
}

/// `exp(scale·A)` for an oscillator decomposition; `scale` may be
/// complex (e.g. `-i t g`). Each diagonal entry must be a diagonal band
/// operator; the scalar exponential is applied to its weight.
pub fn matrix_exp_band(
    decomp: &SpectralDecomposition<BandOperator>,
    scale: Complex64,
) -> Result<NcMatrix<BandOperator>> {
    matrix_function_with(decomp, |d| band_apply_scaled(d, ScalarFunc::Exp, scale))
}

/// Apply `func(scale · w)` to the weight of a diagonal band operator.
pub fn band_apply_scaled(
    op: &BandOperator,
    func: ScalarFunc,
    scale: Complex64,
) -> Result<BandOperator> {
    if !op.is_diagonal() {
        return Err(Error::UnsupportedFunction(
            "matrix functions need diagonal eigen-entries".into(),
        ));
    }
    let w = op.band(0).cloned().unwrap_or_else(WeightExpr::zero);
    let scaled = WeightExpr::mul(&WeightExpr::float(scale), &w);
    Ok(BandOperator::diagonal(WeightExpr::apply(func, &scaled)))
}
