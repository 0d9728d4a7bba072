//! Per-row noncommutative characteristic polynomials.
//!
//! Row `i` of a square matrix gets its own monic polynomial
//! `Φ_i(λ) = λ^n - Σ_k C_{(i)k} λ^{n-k}` with left coefficients solved
//! from the right-linear system `(C_{(i)1},...,C_{(i)n}) · M = b`, where
//! `M` stacks row `i` of `A^{n-1}, ..., A^0` and `b` is row `i` of
//! `A^n`. Substituting the solved coefficients back annihilates row `i`
//! of the Cayley–Hamilton identity.

use crate::error::{Error, Result};
use crate::fock::{band_divide, BandOperator, DivideSide};
use crate::matrix::NcMatrix;
use crate::quaternion::{Coeff, Quaternion};
use crate::ring::Ring;
use crate::tolerance::ToleranceConfig;

use num_complex::Complex64;
use num_rational::BigRational;

/// `x^m` in the ring, with `x^0 = 1`.
pub fn pow_ring<R: Ring>(x: &R, m: usize) -> R {
    let mut acc = x.one_like();
    for _ in 0..m {
        acc = acc.mul(x);
    }
    acc
}

#[derive(Debug, Clone)]
pub struct RowCharPoly<R> {
    pub row: usize,
    /// `C_{(i)1..n}`; the polynomial is `λ^n - Σ_k coeffs[k-1] λ^{n-k}`.
    pub coeffs: Vec<R>,
    pub degenerate: bool,
    pub free_parameter_note: Option<String>,
}

impl<R: Ring> RowCharPoly<R> {
    /// Evaluate `Φ_i` at a ring element (left coefficients).
    pub fn eval(&self, lambda: &R) -> R {
        let n = self.coeffs.len();
        let mut acc = pow_ring(lambda, n);
        for (k, c) in self.coeffs.iter().enumerate() {
            acc = acc.sub(&c.mul(&pow_ring(lambda, n - (k + 1))));
        }
        acc
    }
}

#[derive(Debug, Clone)]
pub struct RowSolution<R> {
    pub coeffs: Vec<R>,
    pub degenerate: bool,
    pub note: Option<String>,
}

/// Backends that can solve the row-wise coefficient system.
pub trait CharPolyRing: Ring {
    fn solve_row_system(
        m: &NcMatrix<Self>,
        rhs: &[Self],
        cfg: &ToleranceConfig,
    ) -> Result<RowSolution<Self>>;
}

/// Column elimination over a division ring: combine equations (columns)
/// by right multiplications until each unknown owns a pivot column.
/// Unknowns with no invertible entry left are free and set to zero.
pub fn solve_row_system_division_ring<R: Ring>(
    m: &NcMatrix<R>,
    rhs: &[R],
    cfg: &ToleranceConfig,
) -> Result<RowSolution<R>> {
    let n = m.rows();
    assert_eq!(m.cols(), n);
    assert_eq!(rhs.len(), n);

    // Augmented (n+1) x n array: rows 0..n-1 are M, row n is b.
    let mut g: Vec<Vec<R>> = (0..n)
        .map(|r| (0..n).map(|c| m.at(r, c).clone()).collect())
        .collect();
    g.push(rhs.to_vec());

    let mut pivot_col: Vec<Option<usize>> = vec![None; n];
    let mut used = vec![false; n];
    let mut free: Vec<usize> = Vec::new();

    for k in 0..n {
        let found = (0..n)
            .filter(|&j| !used[j])
            .find_map(|j| g[k][j].try_inverse(cfg).ok().map(|e| (j, e)));
        let (j, e) = match found {
            Some(v) => v,
            None => {
                free.push(k);
                continue;
            }
        };
        // Normalize column j so the pivot becomes 1 (right scaling).
        for row in g.iter_mut() {
            row[j] = row[j].mul(&e);
        }
        // Clear row k in every other column.
        for l in 0..n {
            if l == j {
                continue;
            }
            let f = g[k][l].clone();
            if f.is_zero_el(cfg) {
                continue;
            }
            for r in 0..=n {
                let sub = g[r][j].mul(&f);
                g[r][l] = g[r][l].sub(&sub);
            }
        }
        pivot_col[k] = Some(j);
        used[j] = true;
    }

    // Unused columns are pure constraints; with free unknowns zeroed
    // their right-hand side must vanish.
    for l in 0..n {
        if used[l] {
            continue;
        }
        if !g[n][l].is_zero_el(cfg) {
            return Err(Error::Inconsistent(format!(
                "equation {} has no solution with free parameters set to zero",
                l + 1
            )));
        }
    }

    let proto = m.at(0, 0);
    let coeffs: Vec<R> = (0..n)
        .map(|k| match pivot_col[k] {
            Some(j) => g[n][j].clone(),
            None => proto.zero_like(),
        })
        .collect();

    let degenerate = !free.is_empty();
    let note = if degenerate {
        Some(format!(
            "free coefficients (1-based) {:?} set to zero",
            free.iter().map(|k| k + 1).collect::<Vec<_>>()
        ))
    } else {
        None
    };
    Ok(RowSolution {
        coeffs,
        degenerate,
        note,
    })
}

impl CharPolyRing for BigRational {
    fn solve_row_system(
        m: &NcMatrix<Self>,
        rhs: &[Self],
        cfg: &ToleranceConfig,
    ) -> Result<RowSolution<Self>> {
        solve_row_system_division_ring(m, rhs, cfg)
    }
}

impl CharPolyRing for Complex64 {
    fn solve_row_system(
        m: &NcMatrix<Self>,
        rhs: &[Self],
        cfg: &ToleranceConfig,
    ) -> Result<RowSolution<Self>> {
        solve_row_system_division_ring(m, rhs, cfg)
    }
}

impl<T: Coeff> CharPolyRing for Quaternion<T> {
    fn solve_row_system(
        m: &NcMatrix<Self>,
        rhs: &[Self],
        cfg: &ToleranceConfig,
    ) -> Result<RowSolution<Self>> {
        solve_row_system_division_ring(m, rhs, cfg)
    }
}

/// Oscillator backend: repeatedly solve equations with exactly one
/// undetermined unknown via `band_divide`, substituting as coefficients
/// become known. When no such equation remains, the lowest stuck
/// unknown is a free parameter and is set to zero; finite kernel
/// levels inside a division extend by the quotient's closed form and
/// are noted, not flagged.
impl CharPolyRing for BandOperator {
    fn solve_row_system(
        m: &NcMatrix<Self>,
        rhs: &[Self],
        cfg: &ToleranceConfig,
    ) -> Result<RowSolution<Self>> {
        let n = m.rows();
        let mut coeffs: Vec<Option<BandOperator>> = vec![None; n];
        let mut consumed = vec![false; n];
        let mut degenerate = false;
        let mut notes: Vec<String> = Vec::new();

        loop {
            let mut progress = false;
            for j in 0..n {
                if consumed[j] {
                    continue;
                }
                let undetermined: Vec<usize> = (0..n)
                    .filter(|&k| coeffs[k].is_none() && !m.at(k, j).is_zero_el(cfg))
                    .collect();
                if undetermined.len() != 1 {
                    if undetermined.is_empty() {
                        consumed[j] = true;
                    }
                    continue;
                }
                let k = undetermined[0];
                let mut target = rhs[j].clone();
                for (r, c) in coeffs.iter().enumerate() {
                    if let Some(c) = c {
                        target = target.sub(&c.mul(m.at(r, j)));
                    }
                }
                let division = band_divide(&target, m.at(k, j), DivideSide::Right, cfg)?;
                if division.kernel_flag() {
                    notes.push(format!(
                        "C_{} extended by closed form at unconstrained levels {:?}",
                        k + 1,
                        division
                            .kernel_levels
                            .iter()
                            .map(|&(_, lvl)| lvl)
                            .collect::<Vec<_>>()
                    ));
                }
                coeffs[k] = Some(division.quotient);
                consumed[j] = true;
                progress = true;
            }
            if progress {
                continue;
            }
            match coeffs.iter().position(|c| c.is_none()) {
                Some(k) => {
                    coeffs[k] = Some(BandOperator::zero());
                    degenerate = true;
                    notes.push(format!("C_{} is a free parameter, set to zero", k + 1));
                }
                None => break,
            }
        }

        let note = if notes.is_empty() {
            None
        } else {
            Some(notes.join("; "))
        };
        Ok(RowSolution {
            coeffs: coeffs.into_iter().map(|c| c.unwrap()).collect(),
            degenerate,
            note,
        })
    }
}

/// Solve the coefficient system for row `i` (1-based) and verify the
/// solution against every entry of the row identity.
pub fn char_poly_row<R: CharPolyRing>(
    a: &NcMatrix<R>,
    i: usize,
    cfg: &ToleranceConfig,
) -> Result<RowCharPoly<R>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("charpoly of non-square".into()));
    }
    let n = a.rows();
    if i < 1 || i > n {
        return Err(Error::IndexOutOfRange(format!("row {i} of {n}x{n}")));
    }

    let powers: Vec<NcMatrix<R>> = (0..=n).map(|p| a.power(p).unwrap()).collect();
    // M[k][j] = (A^{n-k})_{ij} for k = 1..n.
    let m = NcMatrix::from_fn(n, n, |k, j| powers[n - k].entry(i, j).clone());
    let rhs: Vec<R> = (1..=n).map(|j| powers[n].entry(i, j).clone()).collect();

    let solution = R::solve_row_system(&m, &rhs, cfg)?;

    // Residual of the defining row identity, entry by entry.
    for j in 1..=n {
        let mut acc = powers[n].entry(i, j).clone();
        for (k, c) in solution.coeffs.iter().enumerate() {
            acc = acc.sub(&c.mul(powers[n - (k + 1)].entry(i, j)));
        }
        if !acc.is_zero_el(cfg) {
            return Err(Error::Inconsistent(format!(
                "row {i} residual at column {j} is nonzero after solving"
            )));
        }
    }

    Ok(RowCharPoly {
        row: i,
        coeffs: solution.coeffs,
        degenerate: solution.degenerate,
        free_parameter_note: solution.note,
    })
}

/// Evaluate the bordered-quasideterminant form of `Φ_i` at `λ_probe`:
/// the `(n+1)x(n+1)` matrix of row-`i` power entries with the λ powers
/// in the last column, boxed at `(1, n+1)`.
pub fn char_poly_row_bordered<R: Ring>(
    a: &NcMatrix<R>,
    i: usize,
    lambda_probe: &R,
    cfg: &ToleranceConfig,
) -> Result<R> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("charpoly of non-square".into()));
    }
    let n = a.rows();
    if i < 1 || i > n {
        return Err(Error::IndexOutOfRange(format!("row {i} of {n}x{n}")));
    }
    let powers: Vec<NcMatrix<R>> = (0..=n).map(|p| a.power(p).unwrap()).collect();
    let lambda_powers: Vec<R> = (0..=n).map(|p| pow_ring(lambda_probe, p)).collect();

    let bordered = NcMatrix::from_fn(n + 1, n + 1, |r, c| {
        let p = n + 1 - r; // power for this row: n, n-1, ..., 0
        if c <= n {
            powers[p].entry(i, c).clone()
        } else {
            lambda_powers[p].clone()
        }
    });
    crate::qdet::quasideterminant(&bordered, 1, n + 1, cfg)
}

/// `A^n - Σ_k diag(C_{(1)k},...,C_{(n)k}) A^{n-k}`; the zero matrix
/// whenever the row polynomials solve their systems.
pub fn cayley_hamilton_residual<R: Ring>(
    a: &NcMatrix<R>,
    polys: &[RowCharPoly<R>],
    cfg: &ToleranceConfig,
) -> Result<NcMatrix<R>> {
    let n = a.rows();
    if polys.len() != n {
        return Err(Error::DimensionMismatch(format!(
            "need {n} row polynomials, got {}",
            polys.len()
        )));
    }
    for (idx, p) in polys.iter().enumerate() {
        if p.row != idx + 1 || p.coeffs.len() != n {
            return Err(Error::DimensionMismatch(
                "row polynomials must cover rows 1..n in order".into(),
            ));
        }
    }
    let _ = cfg;
    let mut acc = a.power(n)?;
    for k in 1..=n {
        let diag = NcMatrix::from_fn(n, n, |r, c| {
            if r == c {
                polys[r - 1].coeffs[k - 1].clone()
            } else {
                a.proto().zero_like()
            }
        });
        let term = diag.mul(&a.power(n - k)?)?;
        acc = acc.sub(&term)?;
    }
    Ok(acc)
}

/// True iff some pair of rows has unequal coefficient lists, i.e. the
/// matrix admits no scalar-coefficient Cayley–Hamilton identity.
pub fn row_poly_divergence<R: Ring>(polys: &[RowCharPoly<R>], cfg: &ToleranceConfig) -> bool {
    for a in 0..polys.len() {
        for b in a + 1..polys.len() {
            let same = polys[a]
                .coeffs
                .iter()
                .zip(&polys[b].coeffs)
                .all(|(x, y)| x.approx_eq(y, cfg));
            if !same {
                return true;
            }
        }
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::WeightExpr;
    use crate::oracle::classical_charpoly;
    use crate::quaternion::Quaternion;
    use crate::{rat, BandMatrix, QuaternionExact, QuaternionMatrix, RationalMatrix};
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    const CFG: ToleranceConfig = ToleranceConfig {
        abs_tol: 1e-9,
        probe_levels: 16,
        guard_band: 4,
    };

    fn q(w: i64, x: i64, y: i64, z: i64) -> QuaternionExact {
        Quaternion::from_i64(w, x, y, z)
    }

    fn sp2_matrix() -> QuaternionMatrix {
        NcMatrix::from_rows(vec![
            vec![q(0, 1, 0, 0), q(0, 0, 1, 0)],
            vec![q(0, 0, 1, 0), q(0, -1, 0, 0)],
        ])
    }

    /// √2 [[0, a, 0], [a†, 0, a], [0, a†, 0]]
    fn oscillator_matrix() -> BandMatrix {
        let rt2 = WeightExpr::sqrt(&WeightExpr::int(2));
        let a = BandOperator::annihilation().scale(&rt2);
        let ad = BandOperator::creation().scale(&rt2);
        let z = BandOperator::zero;
        NcMatrix::from_rows(vec![
            vec![z(), a.clone(), z()],
            vec![ad.clone(), z(), a],
            vec![z(), ad, z()],
        ])
    }

    #[test]
    fn sp2_row_polynomials() {
        // Φ1 = λ² - 2iλ, Φ2 = λ² + 2iλ
        let a = sp2_matrix();
        let p1 = char_poly_row(&a, 1, &CFG).unwrap();
        assert_eq!(p1.coeffs, vec![q(0, 2, 0, 0), q(0, 0, 0, 0)]);
        assert!(!p1.degenerate);
        let p2 = char_poly_row(&a, 2, &CFG).unwrap();
        assert_eq!(p2.coeffs, vec![q(0, -2, 0, 0), q(0, 0, 0, 0)]);

        assert!(row_poly_divergence(&[p1.clone(), p2.clone()], &CFG));

        // Cayley–Hamilton residual vanishes exactly.
        let resid = cayley_hamilton_residual(&a, &[p1, p2], &CFG).unwrap();
        assert!(resid.approx_eq_mat(&resid.zero_like(), &CFG));
    }

    #[test]
    fn generic_two_by_two_closed_form() {
        // C1 = a11 + a12 a22 a12^{-1},
        // C2 = -(a12 a22 a12^{-1} a11 - a12 a21)
        let mut rng = StdRng::seed_from_u64(71);
        for _ in 0..15 {
            let a = QuaternionMatrix::from_fn(2, 2, |_, _| {
                Quaternion::new(
                    rat(rng.gen_range(-5..=5), 1),
                    rat(rng.gen_range(-5..=5), 1),
                    rat(rng.gen_range(-5..=5), 1),
                    rat(rng.gen_range(-5..=5), 1),
                )
            });
            let a12inv = match a.entry(1, 2).try_inverse(&CFG) {
                Ok(v) => v,
                Err(_) => continue,
            };
            let conj = a.entry(1, 2).mul(a.entry(2, 2)).mul(&a12inv);
            let c1 = a.entry(1, 1).add(&conj);
            let c2 = conj
                .mul(a.entry(1, 1))
                .sub(&a.entry(1, 2).mul(a.entry(2, 1)))
                .neg();
            let p = match char_poly_row(&a, 1, &CFG) {
                Ok(p) => p,
                Err(_) => continue,
            };
            assert_eq!(p.coeffs, vec![c1, c2]);
        }
    }

    #[test]
    fn commutative_rows_match_classical_charpoly() {
        let mut rng = StdRng::seed_from_u64(73);
        for n in 2..=5 {
            let a = RationalMatrix::from_fn(n, n, |_, _| {
                rat(rng.gen_range(-9..=9), rng.gen_range(1..=3))
            });
            let classical = classical_charpoly(&a).unwrap();
            for i in 1..=n {
                match char_poly_row(&a, i, &CFG) {
                    Ok(p) => {
                        assert!(!p.degenerate);
                        assert_eq!(p.coeffs, classical, "row {i}, n={n}");
                    }
                    Err(Error::Inconsistent(_)) => panic!("solver inconsistency"),
                    Err(_) => {}
                }
            }
        }
    }

    #[test]
    fn diagonal_commutative_cayley_hamilton() {
        // Each row of a diagonal matrix sees a rank-1 system, so the
        // rows come back degenerate with free parameters zeroed; the
        // Cayley–Hamilton residual still vanishes exactly.
        let a = RationalMatrix::from_fn(3, 3, |i, j| {
            if i == j {
                rat(i as i64, 1)
            } else {
                rat(0, 1)
            }
        });
        let polys: Vec<_> = (1..=3)
            .map(|i| char_poly_row(&a, i, &CFG).unwrap())
            .collect();
        assert!(polys.iter().all(|p| p.degenerate));
        for (i, p) in polys.iter().enumerate() {
            assert!(p.eval(a.entry(i + 1, i + 1)).is_zero_el(&CFG));
        }
        let resid = cayley_hamilton_residual(&a, &polys, &CFG).unwrap();
        assert!(resid.approx_eq_mat(&resid.zero_like(), &CFG));
    }

    #[test]
    fn nondegenerate_commutative_rows_coincide() {
        let a = NcMatrix::from_rows(vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(3, 1), rat(4, 1)],
        ]);
        let polys: Vec<_> = (1..=2)
            .map(|i| char_poly_row(&a, i, &CFG).unwrap())
            .collect();
        assert!(polys.iter().all(|p| !p.degenerate));
        assert!(!row_poly_divergence(&polys, &CFG));
        assert_eq!(polys[0].coeffs, classical_charpoly(&a).unwrap());
    }

    #[test]
    fn bordered_form_agrees_with_coefficients() {
        let a = sp2_matrix();
        let p1 = char_poly_row(&a, 1, &CFG).unwrap();

        // λ = 1 gives 1 - 2i.
        let v = char_poly_row_bordered(&a, 1, &q(1, 0, 0, 0), &CFG).unwrap();
        assert_eq!(v, q(1, -2, 0, 0));
        assert_eq!(p1.eval(&q(1, 0, 0, 0)), q(1, -2, 0, 0));

        // λ = 0 gives -C_{(i)n}.
        let v0 = char_poly_row_bordered(&a, 1, &q(0, 0, 0, 0), &CFG).unwrap();
        assert_eq!(v0, p1.coeffs[1].neg());

        // five random probes
        let mut rng = StdRng::seed_from_u64(79);
        let mut checked = 0;
        while checked < 5 {
            let probe = Quaternion::new(
                rat(rng.gen_range(-4..=4), 1),
                rat(rng.gen_range(-4..=4), 1),
                rat(rng.gen_range(-4..=4), 1),
                rat(rng.gen_range(-4..=4), 1),
            );
            match char_poly_row_bordered(&a, 1, &probe, &CFG) {
                Ok(v) => {
                    assert_eq!(v, p1.eval(&probe));
                    checked += 1;
                }
                Err(_) => continue,
            }
        }
    }

    #[test]
    fn bordered_form_on_commutative_matches_classical() {
        let a = NcMatrix::from_rows(vec![
            vec![rat(1, 1), rat(2, 1)],
            vec![rat(3, 1), rat(4, 1)],
        ]);
        let classical = classical_charpoly(&a).unwrap();
        let probe = rat(7, 2);
        let expect = &probe * &probe - &classical[0] * &probe - &classical[1];
        let v = char_poly_row_bordered(&a, 1, &probe, &CFG).unwrap();
        assert_eq!(v, expect);
    }

    #[test]
    fn oscillator_row_one_and_three() {
        let a = oscillator_matrix();

        // Row 1: λ³ - 2(2N+3)λ
        let p1 = char_poly_row(&a, 1, &CFG).unwrap();
        assert!(!p1.degenerate, "note: {:?}", p1.free_parameter_note);
        for n in 0..=12i64 {
            let c1 = p1.coeffs[0].matrix_element(n, n).unwrap();
            let c2 = p1.coeffs[1].matrix_element(n, n).unwrap();
            let c3 = p1.coeffs[2].matrix_element(n, n).unwrap();
            assert!(c1.norm() < 1e-9);
            assert!((c2.re - 2.0 * (2.0 * n as f64 + 3.0)).abs() < 1e-9);
            assert!(c2.im.abs() < 1e-9);
            assert!(c3.norm() < 1e-9);
        }

        // Row 3: λ³ - 2(2N-1)λ, including the closed-form level 0 value -2.
        let p3 = char_poly_row(&a, 3, &CFG).unwrap();
        assert!(!p3.degenerate, "note: {:?}", p3.free_parameter_note);
        for n in 0..=12i64 {
            let c2 = p3.coeffs[1].matrix_element(n, n).unwrap();
            assert!(
                (c2.re - 2.0 * (2.0 * n as f64 - 1.0)).abs() < 1e-9,
                "level {n}: {c2}"
            );
        }
    }

    #[test]
    fn oscillator_row_two_is_degenerate_with_u_zero() {
        let a = oscillator_matrix();
        let p2 = char_poly_row(&a, 2, &CFG).unwrap();
        assert!(p2.degenerate);
        assert!(p2.free_parameter_note.is_some());
        for n in 0..=12i64 {
            let c1 = p2.coeffs[0].matrix_element(n, n).unwrap();
            let c2 = p2.coeffs[1].matrix_element(n, n).unwrap();
            let c3 = p2.coeffs[2].matrix_element(n, n).unwrap();
            assert!(c1.norm() < 1e-9);
            assert!((c2.re - 2.0 * (2.0 * n as f64 + 1.0)).abs() < 1e-9);
            assert!(c3.norm() < 1e-9);
        }

        // The bordered form fails on the same row (its minor has rank
        // 2): degeneracy and Undefined are the same failure.
        let zero = BandOperator::zero();
        let bordered = char_poly_row_bordered(&a, 2, &zero, &CFG);
        assert!(matches!(bordered, Err(Error::Undefined(_))));
    }

    #[test]
    fn oscillator_cayley_hamilton_residual() {
        let a = oscillator_matrix();
        let polys: Vec<_> = (1..=3)
            .map(|i| char_poly_row(&a, i, &CFG).unwrap())
            .collect();
        assert!(row_poly_divergence(&polys, &CFG));
        let resid = cayley_hamilton_residual(&a, &polys, &CFG).unwrap();
        assert!(resid.norm_max_mat(&CFG) < 1e-9);
    }

    #[test]
    fn oscillator_powers_closed_form() {
        // A² = 2 [[N+1, 0, a²], [0, 2N+1, 0], [(a†)², 0, N]]
        let a = oscillator_matrix();
        let a2 = a.power(2).unwrap();
        let two = |w: WeightExpr| {
            BandOperator::diagonal(WeightExpr::mul(&WeightExpr::int(2), &w))
        };
        let n_plus_1 = WeightExpr::add(&WeightExpr::level(), &WeightExpr::int(1));
        let two_n_plus_1 = WeightExpr::add(
            &WeightExpr::mul(&WeightExpr::int(2), &WeightExpr::level()),
            &WeightExpr::int(1),
        );
        assert!(a2.entry(1, 1).band_equal(&two(n_plus_1), &CFG));
        assert!(a2.entry(2, 2).band_equal(&two(two_n_plus_1), &CFG));
        assert!(a2
            .entry(2, 1)
            .band_equal(&BandOperator::zero(), &CFG));
        let aa = BandOperator::annihilation();
        let a_sq_twice = aa.multiply(&aa).scale(&WeightExpr::int(2));
        assert!(a2.entry(1, 3).band_equal(&a_sq_twice, &CFG));
    }
}
