//! The quasideterminant calculus.
//!
//! `|A|_{ij} = a_{ij} - r_i^j (A^{ij})^{-1} c_j^i`, plus Sylvester
//! reduction and executable forms of the homological and scaling
//! identities. Quasideterminants that fail because the minor is not
//! invertible surface as `Error::Undefined`, a value-level outcome the
//! sweep operations skip and tally.

use crate::error::{Error, Result};
use crate::matrix::NcMatrix;
use crate::ring::Ring;
use crate::tolerance::ToleranceConfig;

/// The `(i,j)`-quasideterminant of a square matrix (1-based position).
///
/// The minor inverse goes through Gaussian elimination, which succeeds
/// whenever the minor is invertible; the recursive expansion is kept in
/// `quasideterminant_recursive` for cross-checks.
pub fn quasideterminant<R: Ring>(
    a: &NcMatrix<R>,
    i: usize,
    j: usize,
    cfg: &ToleranceConfig,
) -> Result<R> {
    check_square_pos(a, i, j)?;
    let n = a.rows();
    if n == 1 {
        return Ok(a.entry(1, 1).clone());
    }
    let minor = a.delete_row_col(i, j)?;
    let minor_inv = minor
        .inverse_elimination(cfg)
        .map_err(|e| Error::Undefined(format!("minor A^{{{i}{j}}} not invertible: {e}")))?;
    let row = a.extract_row_without(i, j)?;
    let col = a.extract_col_without(j, i)?;

    // r · (A^{ij})^{-1} · c, noncommutative order preserved.
    let mut acc = a.entry(i, j).zero_like();
    for (p, rp) in row.iter().enumerate() {
        for (q, cq) in col.iter().enumerate() {
            acc = acc.add(&rp.mul(minor_inv.at(p, q)).mul(cq));
        }
    }
    Ok(a.entry(i, j).sub(&acc))
}

/// Recursive expansion of the quasideterminant via the inverse-matrix
/// proposition: `|A|_{ij} = a_ij - Σ_{l≠j, s≠i} a_il |A^{ij}|_{sl}^{-1} a_sj`.
pub fn quasideterminant_recursive<R: Ring>(
    a: &NcMatrix<R>,
    i: usize,
    j: usize,
    cfg: &ToleranceConfig,
) -> Result<R> {
    check_square_pos(a, i, j)?;
    let n = a.rows();
    if n == 1 {
        return Ok(a.entry(1, 1).clone());
    }
    let mut acc = a.entry(i, j).zero_like();
    for l in 1..=n {
        if l == j {
            continue;
        }
        for s in 1..=n {
            if s == i {
                continue;
            }
            let q = minor_quasidet(a, i, j, s, l, cfg)?;
            let qinv = q.try_inverse(cfg).map_err(|_| {
                Error::Undefined(format!("|A^{{{i}{j}}}|_{{{s}{l}}} not invertible"))
            })?;
            acc = acc.add(&a.entry(i, l).mul(&qinv).mul(a.entry(s, j)));
        }
    }
    Ok(a.entry(i, j).sub(&acc))
}

/// Quasideterminant of the minor `A^{del_i, del_j}` at the position
/// labeled by the original matrix indices `(s, l)`.
pub fn minor_quasidet<R: Ring>(
    a: &NcMatrix<R>,
    del_i: usize,
    del_j: usize,
    s: usize,
    l: usize,
    cfg: &ToleranceConfig,
) -> Result<R> {
    if s == del_i || l == del_j {
        return Err(Error::IndexOutOfRange(format!(
            "position ({s},{l}) was deleted"
        )));
    }
    let minor = a.delete_row_col(del_i, del_j)?;
    let si = if s > del_i { s - 1 } else { s };
    let li = if l > del_j { l - 1 } else { l };
    quasideterminant(&minor, si, li, cfg)
}

/// Sylvester reduction: compress the leading invertible `k×k` pivot
/// block `A_0` into the `(n-k)×(n-k)` matrix `C` of bordered
/// quasideterminants; `|A|_{ij} = |C|_{ij}` for `i,j > k`.
pub fn sylvester_reduce<R: Ring>(
    a: &NcMatrix<R>,
    k: usize,
    cfg: &ToleranceConfig,
) -> Result<NcMatrix<R>> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch("sylvester on non-square".into()));
    }
    let n = a.rows();
    if k == 0 {
        return Ok(a.clone());
    }
    if k >= n {
        return Err(Error::IndexOutOfRange(format!(
            "pivot size {k} too large for {n}x{n}"
        )));
    }
    // The bordered quasideterminants exist iff A_0 is invertible.
    let a0 = NcMatrix::from_fn(k, k, |r, c| a.entry(r, c).clone());
    a0.inverse_elimination(cfg)
        .map_err(|_| Error::PivotSingular)?;

    let mut c = NcMatrix::zeros(n - k, n - k, a.proto());
    for p in k + 1..=n {
        for q in k + 1..=n {
            // (k+1)x(k+1) bordered matrix: A_0, column q, row p, corner.
            let bordered = NcMatrix::from_fn(k + 1, k + 1, |r, s| {
                let rr = if r <= k { r } else { p };
                let ss = if s <= k { s } else { q };
                a.entry(rr, ss).clone()
            });
            let val = quasideterminant(&bordered, k + 1, k + 1, cfg)?;
            c.set_entry(p - k, q - k, val);
        }
    }
    Ok(c)
}

/// Outcome of an identity sweep: residuals that should all be zero,
/// plus the tuples skipped because some factor was undefined.
#[derive(Debug, Clone)]
pub struct IdentityReport<R> {
    pub residuals: Vec<R>,
    pub skipped: usize,
    pub total: usize,
}

impl<R: Ring> IdentityReport<R> {
    pub fn max_residual(&self, cfg: &ToleranceConfig) -> f64 {
        self.residuals
            .iter()
            .map(|r| r.norm_max(cfg))
            .fold(0.0, f64::max)
    }

    pub fn all_zero(&self, cfg: &ToleranceConfig) -> bool {
        self.residuals.iter().all(|r| r.is_zero_el(cfg))
    }
}

/// Row and column homological relations, swept over index tuples.
///
/// Row form: `-|A|_{ij} |A^{il}|_{sj}^{-1} = |A|_{il} |A^{ij}|_{sl}^{-1}`
/// for `s ≠ i`; column form is the transpose-flavored analogue. For
/// matrices larger than 3x3 the tuples are subsampled deterministically.
pub fn homological_residuals<R: Ring>(
    a: &NcMatrix<R>,
    cfg: &ToleranceConfig,
) -> Result<IdentityReport<R>> {
    if !a.is_square() || a.rows() < 2 {
        return Err(Error::DimensionMismatch(
            "homological relations need a square matrix of order >= 2".into(),
        ));
    }
    let n = a.rows();
    let mut tuples: Vec<(usize, usize, usize, usize)> = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            for l in 1..=n {
                if l == j {
                    continue;
                }
                for s in 1..=n {
                    if s == i {
                        continue;
                    }
                    tuples.push((i, j, l, s));
                }
            }
        }
    }
    let max_tuples = 12;
    let stride = (tuples.len() / max_tuples).max(1);
    let sampled: Vec<_> = tuples.into_iter().step_by(stride).collect();

    // The full-matrix quasideterminants recur across tuples; memoize.
    let mut memo: Vec<Vec<Option<Result<R>>>> = vec![vec![None; n + 1]; n + 1];
    let mut qdet_at = |i: usize, j: usize| -> Result<R> {
        if memo[i][j].is_none() {
            memo[i][j] = Some(quasideterminant(a, i, j, cfg));
        }
        memo[i][j].clone().unwrap()
    };

    let mut report = IdentityReport {
        residuals: Vec::new(),
        skipped: 0,
        total: 2 * sampled.len(),
    };

    for &(i, j, l, s) in &sampled {
        // Row relation at (i, j, l, s).
        let row_residual = (|| -> Result<R> {
            let qij = qdet_at(i, j)?;
            let qil = qdet_at(i, l)?;
            let m1 = minor_quasidet(a, i, l, s, j, cfg)?
                .try_inverse(cfg)
                .map_err(|_| Error::Undefined("row factor not invertible".into()))?;
            let m2 = minor_quasidet(a, i, j, s, l, cfg)?
                .try_inverse(cfg)
                .map_err(|_| Error::Undefined("row factor not invertible".into()))?;
            Ok(qij.mul(&m1).neg().sub(&qil.mul(&m2)))
        })();
        match row_residual {
            Ok(r) => report.residuals.push(r),
            Err(_) => report.skipped += 1,
        }

        // Column relation: reuse the tuple as (i, j, k=s, t=l).
        let (k, t) = (s, l);
        let col_residual = (|| -> Result<R> {
            let qij = qdet_at(i, j)?;
            let qkj = qdet_at(k, j)?;
            let m1 = minor_quasidet(a, k, j, i, t, cfg)?
                .try_inverse(cfg)
                .map_err(|_| Error::Undefined("column factor not invertible".into()))?;
            let m2 = minor_quasidet(a, i, j, k, t, cfg)?
                .try_inverse(cfg)
                .map_err(|_| Error::Undefined("column factor not invertible".into()))?;
            Ok(m1.mul(&qij).neg().sub(&m2.mul(&qkj)))
        })();
        match col_residual {
            Ok(r) => report.residuals.push(r),
            Err(_) => report.skipped += 1,
        }
    }
    Ok(report)
}

/// Verify the row/column multiplication laws at position `(i,j)`:
/// left-multiplying row `i` by `λ` maps `|A|_{ij}` to `λ|A|_{ij}` and
/// leaves the other rows' quasideterminants alone; right-multiplying
/// column `j` by `μ` maps `|A|_{ij}` to `|A|_{ij} μ`.
pub fn scaling_check<R: Ring>(
    a: &NcMatrix<R>,
    lambda: &R,
    mu: &R,
    i: usize,
    j: usize,
    cfg: &ToleranceConfig,
) -> Result<IdentityReport<R>> {
    check_square_pos(a, i, j)?;
    let n = a.rows();

    let mut b = a.clone();
    for c in 1..=n {
        b.set_entry(i, c, lambda.mul(a.entry(i, c)));
    }
    let mut cmat = a.clone();
    for r in 1..=n {
        cmat.set_entry(r, j, a.entry(r, j).mul(mu));
    }

    let mut report = IdentityReport {
        residuals: Vec::new(),
        skipped: 0,
        total: 2 * n,
    };

    for k in 1..=n {
        let pair = (|| -> Result<R> {
            let qb = quasideterminant(&b, k, j, cfg)?;
            let qa = quasideterminant(a, if k == i { i } else { k }, j, cfg)?;
            let expect = if k == i { lambda.mul(&qa) } else { qa };
            Ok(qb.sub(&expect))
        })();
        match pair {
            Ok(r) => report.residuals.push(r),
            Err(_) => report.skipped += 1,
        }
    }
    for l in 1..=n {
        let pair = (|| -> Result<R> {
            let qc = quasideterminant(&cmat, i, l, cfg)?;
            let qa = quasideterminant(a, i, l, cfg)?;
            let expect = if l == j { qa.mul(mu) } else { qa };
            Ok(qc.sub(&expect))
        })();
        match pair {
            Ok(r) => report.residuals.push(r),
            Err(_) => report.skipped += 1,
        }
    }
    Ok(report)
}

fn check_square_pos<R: Ring>(a: &NcMatrix<R>, i: usize, j: usize) -> Result<()> {
    if !a.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "quasideterminant of non-square {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if i < 1 || i > a.rows() || j < 1 || j > a.cols() {
        return Err(Error::IndexOutOfRange(format!(
            "({i},{j}) in {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    Ok(())
}
