//! Symbolic weight expressions over the Fock-level variable `n`.
//!
//! A weight is a scalar function of the level, built from exact rational
//! constants, the level variable, field operations, square roots, and
//! exact integer level-shifts. Evaluation is to floating complex; the
//! trees themselves stay exact so operator identities hold at every
//! level with no truncation artifacts.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Scalar functions applied pointwise to diagonal weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ScalarFunc {
    Exp,
    Cos,
    Sin,
}

impl ScalarFunc {
    pub fn apply(&self, v: Complex64) -> Complex64 {
        match self {
            ScalarFunc::Exp => v.exp(),
            ScalarFunc::Cos => v.cos(),
            ScalarFunc::Sin => v.sin(),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ScalarFunc::Exp => "exp",
            ScalarFunc::Cos => "cos",
            ScalarFunc::Sin => "sin",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightExpr {
    Rational(BigRational),
    Float(Complex64),
    /// The Fock-level variable `n`.
    Level,
    Add(Arc<WeightExpr>, Arc<WeightExpr>),
    Sub(Arc<WeightExpr>, Arc<WeightExpr>),
    Mul(Arc<WeightExpr>, Arc<WeightExpr>),
    Div(Arc<WeightExpr>, Arc<WeightExpr>),
    Sqrt(Arc<WeightExpr>),
    /// Evaluate the inner expression at `n + k`; zero when `n + k < 0`
    /// (states below the vacuum do not exist).
    Shift(Arc<WeightExpr>, i64),
    /// Pointwise application of a scalar function.
    Apply(ScalarFunc, Arc<WeightExpr>),
    /// Tabulated values by level, for weights produced by pointwise
    /// numerical solves.
    Table(Arc<Vec<Complex64>>),
}

impl WeightExpr {
    pub fn rational(r: BigRational) -> Self {
        WeightExpr::Rational(r)
    }

    pub fn int(v: i64) -> Self {
        WeightExpr::Rational(BigRational::from_integer(BigInt::from(v)))
    }

    pub fn float(v: Complex64) -> Self {
        WeightExpr::Float(v)
    }

    pub fn level() -> Self {
        WeightExpr::Level
    }

    pub fn zero() -> Self {
        WeightExpr::int(0)
    }

    pub fn one() -> Self {
        WeightExpr::int(1)
    }

    pub fn is_const_zero(&self) -> bool {
        match self {
            WeightExpr::Rational(r) => r.is_zero(),
            WeightExpr::Float(v) => v.re == 0.0 && v.im == 0.0,
            _ => false,
        }
    }

    pub fn is_const_one(&self) -> bool {
        match self {
            WeightExpr::Rational(r) => r.is_one(),
            WeightExpr::Float(v) => v.re == 1.0 && v.im == 0.0,
            _ => false,
        }
    }

    pub fn add(a: &WeightExpr, b: &WeightExpr) -> WeightExpr {
        if a.is_const_zero() {
            return b.clone();
        }
        if b.is_const_zero() {
            return a.clone();
        }
        if let (WeightExpr::Rational(x), WeightExpr::Rational(y)) = (a, b) {
            return WeightExpr::Rational(x + y);
        }
        WeightExpr::Add(Arc::new(a.clone()), Arc::new(b.clone()))
    }

    pub fn sub(a: &WeightExpr, b: &WeightExpr) -> WeightExpr {
        if b.is_const_zero() {
            return a.clone();
        }
        if let (WeightExpr::Rational(x), WeightExpr::Rational(y)) = (a, b) {
            return WeightExpr::Rational(x - y);
        }
        WeightExpr::Sub(Arc::new(a.clone()), Arc::new(b.clone()))
    }

    pub fn mul(a: &WeightExpr, b: &WeightExpr) -> WeightExpr {
        if a.is_const_zero() || b.is_const_zero() {
            return WeightExpr::zero();
        }
        if a.is_const_one() {
            return b.clone();
        }
        if b.is_const_one() {
            return a.clone();
        }
        if let (WeightExpr::Rational(x), WeightExpr::Rational(y)) = (a, b) {
            return WeightExpr::Rational(x * y);
        }
        WeightExpr::Mul(Arc::new(a.clone()), Arc::new(b.clone()))
    }

    pub fn div(a: &WeightExpr, b: &WeightExpr) -> WeightExpr {
        if a.is_const_zero() {
            return WeightExpr::zero();
        }
        if b.is_const_one() {
            return a.clone();
        }
        if let (WeightExpr::Rational(x), WeightExpr::Rational(y)) = (a, b) {
            if !y.is_zero() {
                return WeightExpr::Rational(x / y);
            }
        }
        WeightExpr::Div(Arc::new(a.clone()), Arc::new(b.clone()))
    }

    pub fn sqrt(a: &WeightExpr) -> WeightExpr {
        WeightExpr::Sqrt(Arc::new(a.clone()))
    }

    pub fn neg(&self) -> WeightExpr {
        WeightExpr::sub(&WeightExpr::zero(), self)
    }

    /// Exact level-shift composition `n -> n + k`.
    ///
    /// Positive shifts of constants skip the wrapper (the sub-vacuum
    /// guard can never fire there); negative shifts always keep it,
    /// since the guard encodes that states below the vacuum vanish.
    pub fn shift_by(&self, k: i64) -> WeightExpr {
        if k == 0 {
            return self.clone();
        }
        if k > 0 {
            if let WeightExpr::Rational(_) | WeightExpr::Float(_) = self {
                return self.clone();
            }
        }
        WeightExpr::Shift(Arc::new(self.clone()), k)
    }

    pub fn apply(func: ScalarFunc, a: &WeightExpr) -> WeightExpr {
        WeightExpr::Apply(func, Arc::new(a.clone()))
    }

    pub fn table(values: Vec<Complex64>) -> WeightExpr {
        WeightExpr::Table(Arc::new(values))
    }

    /// Evaluate at a nonnegative integer level.
    pub fn eval(&self, level: i64) -> Result<Complex64> {
        if level < 0 {
            return Err(Error::Eval {
                level,
                reason: "negative level".into(),
            });
        }
        self.eval_inner(level).map_err(|reason| Error::Eval { level, reason })
    }

    fn eval_inner(&self, n: i64) -> std::result::Result<Complex64, String> {
        match self {
            WeightExpr::Rational(r) => Ok(Complex64::new(
                r.to_f64().ok_or("rational out of f64 range")?,
                0.0,
            )),
            WeightExpr::Float(v) => Ok(*v),
            WeightExpr::Level => Ok(Complex64::new(n as f64, 0.0)),
            WeightExpr::Add(a, b) => Ok(a.eval_inner(n)? + b.eval_inner(n)?),
            WeightExpr::Sub(a, b) => Ok(a.eval_inner(n)? - b.eval_inner(n)?),
            WeightExpr::Mul(a, b) => Ok(a.eval_inner(n)? * b.eval_inner(n)?),
            WeightExpr::Div(a, b) => {
                let den = b.eval_inner(n)?;
                if den.re == 0.0 && den.im == 0.0 {
                    return Err("division by zero".into());
                }
                Ok(a.eval_inner(n)? / den)
            }
            WeightExpr::Sqrt(a) => {
                let v = a.eval_inner(n)?;
                if v.im == 0.0 {
                    if v.re < 0.0 {
                        return Err("negative radicand".into());
                    }
                    Ok(Complex64::new(v.re.sqrt(), 0.0))
                } else {
                    Ok(v.sqrt())
                }
            }
            WeightExpr::Shift(a, k) => {
                let shifted = n + k;
                if shifted < 0 {
                    Ok(Complex64::new(0.0, 0.0))
                } else {
                    a.eval_inner(shifted)
                }
            }
            WeightExpr::Apply(f, a) => Ok(f.apply(a.eval_inner(n)?)),
            WeightExpr::Table(t) => {
                let idx = usize::try_from(n).map_err(|_| "negative table index".to_string())?;
                t.get(idx)
                    .copied()
                    .ok_or_else(|| format!("level outside tabulated range (len {})", t.len()))
            }
        }
    }

    /// True when evaluation gives exactly 0.0 at every level in
    /// `0..=top` without errors. Used only to prune spurious bands.
    pub fn vanishes_on(&self, top: i64) -> bool {
        (0..=top).all(|n| match self.eval(n) {
            Ok(v) => v.re == 0.0 && v.im == 0.0,
            Err(_) => false,
        })
    }

    pub fn node_count(&self) -> usize {
        match self {
            WeightExpr::Rational(_)
            | WeightExpr::Float(_)
            | WeightExpr::Level
            | WeightExpr::Table(_) => 1,
            WeightExpr::Add(a, b)
            | WeightExpr::Sub(a, b)
            | WeightExpr::Mul(a, b)
            | WeightExpr::Div(a, b) => 1 + a.node_count() + b.node_count(),
            WeightExpr::Sqrt(a) | WeightExpr::Shift(a, _) | WeightExpr::Apply(_, a) => {
                1 + a.node_count()
            }
        }
    }
}

impl fmt::Display for WeightExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightExpr::Rational(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            WeightExpr::Float(v) => {
                if v.im == 0.0 {
                    write!(f, "{}", v.re)
                } else {
                    write!(f, "({}{:+}im)", v.re, v.im)
                }
            }
            WeightExpr::Level => write!(f, "N"),
            WeightExpr::Add(a, b) => write!(f, "({} + {})", a, b),
            WeightExpr::Sub(a, b) => write!(f, "({} - {})", a, b),
            WeightExpr::Mul(a, b) => write!(f, "{}*{}", a, b),
            WeightExpr::Div(a, b) => write!(f, "({})/({})", a, b),
            WeightExpr::Sqrt(a) => write!(f, "sqrt({})", a),
            WeightExpr::Shift(a, k) => write!(f, "[{}]@(N{:+})", a, k),
            WeightExpr::Apply(func, a) => write!(f, "{}({})", func.name(), a),
            WeightExpr::Table(t) => write!(f, "table(len {})", t.len()),
        }
    }
}

// --- exact polynomial canonicalization --------------------------------
//
// Used by band division to cancel common factors so quotients extend to
// the levels the raw quotient would leave as 0/0.

/// Dense polynomial in the level variable, coefficient k of n^k.
pub(crate) type Poly = Vec<BigRational>;

pub(crate) fn poly_trim(mut p: Poly) -> Poly {
    while p.len() > 1 && p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

pub(crate) fn poly_const(c: BigRational) -> Poly {
    vec![c]
}

pub(crate) fn poly_is_zero(p: &Poly) -> bool {
    p.iter().all(|c| c.is_zero())
}

pub(crate) fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    poly_trim(out)
}

pub(crate) fn poly_sub(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] -= c;
    }
    poly_trim(out)
}

pub(crate) fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    poly_trim(out)
}

/// Substitute `n -> n + k` exactly via binomial expansion.
pub(crate) fn poly_shift(p: &Poly, k: i64) -> Poly {
    let kk = BigRational::from_integer(BigInt::from(k));
    let mut out = vec![BigRational::zero(); p.len()];
    for (deg, c) in p.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        // (n + k)^deg = sum_m C(deg, m) k^(deg-m) n^m
        let mut binom = BigRational::one();
        let mut kpow = BigRational::one();
        // walk m from deg down to 0 so k powers accumulate
        let mut terms = vec![BigRational::zero(); deg + 1];
        for m in (0..=deg).rev() {
            terms[m] = c * &binom * &kpow;
            if m > 0 {
                // C(deg, m-1) = C(deg, m) * m / (deg - m + 1)
                binom = binom * BigRational::from_integer(BigInt::from(m as i64))
                    / BigRational::from_integer(BigInt::from((deg - m + 1) as i64));
                kpow *= &kk;
            }
        }
        for (m, t) in terms.into_iter().enumerate() {
            out[m] += t;
        }
    }
    poly_trim(out)
}

/// Exact polynomial division; `None` when the remainder is nonzero.
pub(crate) fn poly_div_exact(num: &Poly, den: &Poly) -> Option<Poly> {
    let den = poly_trim(den.clone());
    if poly_is_zero(&den) {
        return None;
    }
    let mut rem = poly_trim(num.clone());
    if poly_is_zero(&rem) {
        return Some(poly_const(BigRational::zero()));
    }
    if rem.len() < den.len() {
        return None;
    }
    let mut quot = vec![BigRational::zero(); rem.len() - den.len() + 1];
    let lead = den.last().unwrap().clone();
    while !poly_is_zero(&rem) && rem.len() >= den.len() {
        let deg = rem.len() - den.len();
        let c = rem.last().unwrap() / &lead;
        quot[deg] = c.clone();
        let mut shifted = vec![BigRational::zero(); deg];
        shifted.extend(den.iter().map(|d| d * &c));
        rem = poly_sub(&rem, &shifted);
        if rem.len() == 1 && rem[0].is_zero() {
            break;
        }
    }
    if poly_is_zero(&rem) {
        Some(poly_trim(quot))
    } else {
        None
    }
}

pub(crate) fn poly_to_expr(p: &Poly) -> WeightExpr {
    // Horner form keeps the tree small.
    let mut acc = WeightExpr::Rational(p.last().cloned().unwrap_or_else(BigRational::zero));
    for c in p.iter().rev().skip(1) {
        acc = WeightExpr::add(
            &WeightExpr::mul(&acc, &WeightExpr::Level),
            &WeightExpr::Rational(c.clone()),
        );
    }
    acc
}

/// Try to express a weight as an exact polynomial in the level.
///
/// `Shift` is treated as pure substitution here; the caller (band
/// division) wants the closed form that extends across guard levels.
pub(crate) fn to_poly(e: &WeightExpr) -> Option<Poly> {
    match e {
        WeightExpr::Rational(r) => Some(poly_const(r.clone())),
        WeightExpr::Level => Some(vec![BigRational::zero(), BigRational::one()]),
        WeightExpr::Add(a, b) => Some(poly_add(&to_poly(a)?, &to_poly(b)?)),
        WeightExpr::Sub(a, b) => Some(poly_sub(&to_poly(a)?, &to_poly(b)?)),
        WeightExpr::Mul(a, b) => Some(poly_mul(&to_poly(a)?, &to_poly(b)?)),
        WeightExpr::Div(a, b) => {
            let num = to_poly(a)?;
            let den = to_poly(b)?;
            poly_div_exact(&num, &den)
        }
        WeightExpr::Shift(a, k) => Some(poly_shift(&to_poly(a)?, *k)),
        _ => None,
    }
}

// --- sum-of-sqrt-products canonical form -------------------------------
//
// Weights built from the oscillator generators are sums of terms
// `c(n) · Π sqrt(Q_l(n))` with rational polynomial radicands. This form
// merges such sums exactly (folding sqrt(Q)·sqrt(Q) -> Q), which is what
// lets band division cancel a divisor out of a product-sum dividend.

type SqrtMultiset = std::collections::BTreeMap<Vec<BigRational>, u32>;

fn poly_neg(p: &Poly) -> Poly {
    p.iter().map(|c| -c).collect()
}

fn merge_terms(
    mut acc: std::collections::BTreeMap<SqrtMultiset, Poly>,
    other: Vec<(Poly, SqrtMultiset)>,
) -> std::collections::BTreeMap<SqrtMultiset, Poly> {
    for (p, ms) in other {
        match acc.get_mut(&ms) {
            Some(existing) => *existing = poly_add(existing, &p),
            None => {
                acc.insert(ms, p);
            }
        }
    }
    acc.retain(|_, p| !poly_is_zero(p));
    acc
}

fn terms_from_map(map: std::collections::BTreeMap<SqrtMultiset, Poly>) -> Vec<(Poly, SqrtMultiset)> {
    map.into_iter().map(|(ms, p)| (p, ms)).collect()
}

fn mul_term(a: &(Poly, SqrtMultiset), b: &(Poly, SqrtMultiset)) -> (Poly, SqrtMultiset) {
    let mut poly = poly_mul(&a.0, &b.0);
    let mut ms = a.1.clone();
    for (rad, cnt) in &b.1 {
        *ms.entry(rad.clone()).or_insert(0) += cnt;
    }
    // fold even sqrt powers into the polynomial part
    let mut folded = SqrtMultiset::new();
    for (rad, cnt) in ms {
        for _ in 0..cnt / 2 {
            poly = poly_mul(&poly, &rad);
        }
        if cnt % 2 == 1 {
            folded.insert(rad, 1);
        }
    }
    (poly, folded)
}

/// Canonicalize into merged `Σ c(n)·Π sqrt(Q(n))` terms. `Shift` is pure
/// substitution here (the caller verifies the result on the window).
pub(crate) fn to_sqrt_terms(e: &WeightExpr) -> Option<Vec<(Poly, SqrtMultiset)>> {
    let one_term = |p: Poly| Some(vec![(p, SqrtMultiset::new())]);
    match e {
        WeightExpr::Rational(r) => one_term(poly_const(r.clone())),
        WeightExpr::Level => one_term(vec![BigRational::zero(), BigRational::one()]),
        WeightExpr::Float(_) | WeightExpr::Table(_) | WeightExpr::Apply(_, _) => None,
        WeightExpr::Add(a, b) => {
            let ta = to_sqrt_terms(a)?;
            let tb = to_sqrt_terms(b)?;
            Some(terms_from_map(merge_terms(
                merge_terms(Default::default(), ta),
                tb,
            )))
        }
        WeightExpr::Sub(a, b) => {
            let ta = to_sqrt_terms(a)?;
            let tb: Vec<_> = to_sqrt_terms(b)?
                .into_iter()
                .map(|(p, ms)| (poly_neg(&p), ms))
                .collect();
            Some(terms_from_map(merge_terms(
                merge_terms(Default::default(), ta),
                tb,
            )))
        }
        WeightExpr::Mul(a, b) => {
            let ta = to_sqrt_terms(a)?;
            let tb = to_sqrt_terms(b)?;
            let mut out = Vec::with_capacity(ta.len() * tb.len());
            for x in &ta {
                for y in &tb {
                    out.push(mul_term(x, y));
                }
            }
            Some(terms_from_map(merge_terms(Default::default(), out)))
        }
        WeightExpr::Div(a, b) => {
            let ta = to_sqrt_terms(a)?;
            let tb = to_sqrt_terms(b)?;
            divide_terms(&ta, &tb)
        }
        WeightExpr::Sqrt(inner) => {
            let p = poly_trim(to_poly(inner)?);
            if p.len() == 1 && p[0].is_one() {
                return one_term(poly_const(BigRational::one()));
            }
            let mut ms = SqrtMultiset::new();
            ms.insert(p, 1);
            Some(vec![(poly_const(BigRational::one()), ms)])
        }
        WeightExpr::Shift(inner, k) => Some(
            to_sqrt_terms(inner)?
                .into_iter()
                .map(|(p, ms)| {
                    let sp = poly_shift(&p, *k);
                    let sms: SqrtMultiset = ms
                        .into_iter()
                        .map(|(rad, cnt)| (poly_trim(poly_shift(&rad, *k)), cnt))
                        .collect();
                    (sp, sms)
                })
                .collect(),
        ),
    }
}

/// Exact term-by-term division when the divisor is a single term that
/// divides every dividend term.
fn divide_terms(
    num: &[(Poly, SqrtMultiset)],
    den: &[(Poly, SqrtMultiset)],
) -> Option<Vec<(Poly, SqrtMultiset)>> {
    if den.len() != 1 {
        return None;
    }
    let (dp, dms) = &den[0];
    if poly_is_zero(dp) {
        return None;
    }
    let mut out = Vec::with_capacity(num.len());
    for (np, nms) in num {
        let q = poly_div_exact(np, dp)?;
        let mut ms = nms.clone();
        for (rad, cnt) in dms {
            let have = ms.get_mut(rad)?;
            if *have < *cnt {
                return None;
            }
            *have -= cnt;
            if *have == 0 {
                ms.remove(rad);
            }
        }
        out.push((q, ms));
    }
    Some(out)
}

fn terms_to_expr(terms: &[(Poly, SqrtMultiset)], post_shift: i64) -> WeightExpr {
    if terms.is_empty() {
        return WeightExpr::zero();
    }
    let mut acc: Option<WeightExpr> = None;
    for (p, ms) in terms {
        let mut t = poly_to_expr(&poly_shift(p, post_shift));
        for (rad, cnt) in ms {
            let s = WeightExpr::sqrt(&poly_to_expr(&poly_shift(rad, post_shift)));
            for _ in 0..*cnt {
                t = WeightExpr::mul(&t, &s);
            }
        }
        acc = Some(match acc {
            Some(a) => WeightExpr::add(&a, &t),
            None => t,
        });
    }
    acc.unwrap()
}

/// Multiplicative factorization of a weight expression.
#[derive(Debug, Clone, Default)]
pub(crate) struct Factors {
    pub coef_num: Option<BigRational>,
    pub coef_den: Option<BigRational>,
    pub num_polys: Vec<Poly>,
    pub num_sqrts: Vec<Poly>,
    pub num_rest: Vec<WeightExpr>,
    pub den_polys: Vec<Poly>,
    pub den_sqrts: Vec<Poly>,
    pub den_rest: Vec<WeightExpr>,
}

impl Factors {
    fn merge(mut self, other: Factors) -> Factors {
        self.coef_num = mul_opt(self.coef_num, other.coef_num);
        self.coef_den = mul_opt(self.coef_den, other.coef_den);
        self.num_polys.extend(other.num_polys);
        self.num_sqrts.extend(other.num_sqrts);
        self.num_rest.extend(other.num_rest);
        self.den_polys.extend(other.den_polys);
        self.den_sqrts.extend(other.den_sqrts);
        self.den_rest.extend(other.den_rest);
        self
    }

    fn reciprocal(self) -> Factors {
        Factors {
            coef_num: self.coef_den,
            coef_den: self.coef_num,
            num_polys: self.den_polys,
            num_sqrts: self.den_sqrts,
            num_rest: self.den_rest,
            den_polys: self.num_polys,
            den_sqrts: self.num_sqrts,
            den_rest: self.num_rest,
        }
    }

    fn shift_all(mut self, k: i64) -> Factors {
        if k == 0 {
            return self;
        }
        for p in self
            .num_polys
            .iter_mut()
            .chain(self.den_polys.iter_mut())
            .chain(self.num_sqrts.iter_mut())
            .chain(self.den_sqrts.iter_mut())
        {
            *p = poly_shift(p, k);
        }
        self.num_rest = self.num_rest.iter().map(|e| e.shift_by(k)).collect();
        self.den_rest = self.den_rest.iter().map(|e| e.shift_by(k)).collect();
        self
    }
}

fn mul_opt(a: Option<BigRational>, b: Option<BigRational>) -> Option<BigRational> {
    match (a, b) {
        (None, x) => x,
        (x, None) => x,
        (Some(x), Some(y)) => Some(x * y),
    }
}

pub(crate) fn factorize(e: &WeightExpr) -> Factors {
    match e {
        WeightExpr::Mul(a, b) => factorize(a).merge(factorize(b)),
        WeightExpr::Div(a, b) => factorize(a).merge(factorize(b).reciprocal()),
        WeightExpr::Rational(r) => Factors {
            coef_num: Some(r.clone()),
            ..Factors::default()
        },
        WeightExpr::Sqrt(inner) => match to_poly(inner) {
            Some(p) => Factors {
                num_sqrts: vec![p],
                ..Factors::default()
            },
            None => Factors {
                num_rest: vec![e.clone()],
                ..Factors::default()
            },
        },
        WeightExpr::Shift(inner, k) => factorize(inner).shift_all(*k),
        other => match to_poly(other) {
            Some(p) => Factors {
                num_polys: vec![p],
                ..Factors::default()
            },
            None => Factors {
                num_rest: vec![other.clone()],
                ..Factors::default()
            },
        },
    }
}

/// `num(n + den_pre_shift-aware) / den(n + den_pre_shift)`, then
/// substitute `n -> n + post_shift` in the quotient, cancelling common
/// factors exactly so the result extends past kernel levels by its own
/// closed form.
pub(crate) fn divide_weights(
    num: &WeightExpr,
    den: &WeightExpr,
    den_pre_shift: i64,
    post_shift: i64,
) -> WeightExpr {
    if num.is_const_zero() {
        return WeightExpr::zero();
    }

    // Preferred route: both sides canonicalize to sums of
    // sqrt-products and the divisor divides term by term.
    if let (Some(nt), Some(dt)) = (to_sqrt_terms(num), to_sqrt_terms(den)) {
        let dt_shifted: Vec<_> = dt
            .into_iter()
            .map(|(p, ms)| {
                let sp = poly_shift(&p, den_pre_shift);
                let sms: SqrtMultiset = ms
                    .into_iter()
                    .map(|(rad, cnt)| (poly_trim(poly_shift(&rad, den_pre_shift)), cnt))
                    .collect();
                (sp, sms)
            })
            .collect();
        if let Some(q) = divide_terms(&nt, &dt_shifted) {
            return terms_to_expr(&q, post_shift);
        }
    }

    // Fallback: multiplicative factor cancellation.
    let f = factorize(num).merge(factorize(den).shift_all(den_pre_shift).reciprocal());

    let mut coef = f.coef_num.unwrap_or_else(BigRational::one);
    if let Some(cd) = f.coef_den {
        if !cd.is_zero() {
            coef /= cd;
        }
    }

    // Collapse polynomial factors and divide exactly when possible.
    let mut num_poly = poly_const(BigRational::one());
    for p in &f.num_polys {
        num_poly = poly_mul(&num_poly, p);
    }
    let mut den_poly = poly_const(BigRational::one());
    for p in &f.den_polys {
        den_poly = poly_mul(&den_poly, p);
    }
    let (num_poly, den_poly) = match poly_div_exact(&num_poly, &den_poly) {
        Some(q) => (q, poly_const(BigRational::one())),
        None => (num_poly, den_poly),
    };

    // Cancel matching square-root factors.
    let mut num_sqrts = f.num_sqrts.clone();
    let mut den_sqrts: Vec<Poly> = Vec::new();
    'outer: for d in f.den_sqrts {
        for i in 0..num_sqrts.len() {
            if poly_trim(num_sqrts[i].clone()) == poly_trim(d.clone()) {
                num_sqrts.remove(i);
                continue 'outer;
            }
        }
        // sqrt of a positive rational constant: rationalize.
        let dt = poly_trim(d.clone());
        if dt.len() == 1 && dt[0].is_positive() {
            num_sqrts.push(dt.clone());
            coef /= &dt[0];
            continue;
        }
        den_sqrts.push(d);
    }

    let apply_post = |p: &Poly| poly_shift(p, post_shift);

    // Rebuild the quotient.
    let mut out = WeightExpr::Rational(coef);
    let np = apply_post(&num_poly);
    if !(np.len() == 1 && np[0].is_one()) {
        out = WeightExpr::mul(&out, &poly_to_expr(&np));
    }
    for s in &num_sqrts {
        out = WeightExpr::mul(&out, &WeightExpr::sqrt(&poly_to_expr(&apply_post(s))));
    }
    for r in &f.num_rest {
        out = WeightExpr::mul(&out, &r.shift_by(post_shift));
    }

    let mut den_expr: Option<WeightExpr> = None;
    let dp = apply_post(&den_poly);
    if !(dp.len() == 1 && dp[0].is_one()) {
        den_expr = Some(poly_to_expr(&dp));
    }
    for s in &den_sqrts {
        let sq = WeightExpr::sqrt(&poly_to_expr(&apply_post(s)));
        den_expr = Some(match den_expr {
            Some(d) => WeightExpr::mul(&d, &sq),
            None => sq,
        });
    }
    for r in &f.den_rest {
        let shifted = r.shift_by(post_shift);
        den_expr = Some(match den_expr {
            Some(d) => WeightExpr::mul(&d, &shifted),
            None => shifted,
        });
    }

    match den_expr {
        Some(d) => WeightExpr::div(&out, &d),
        None => out,
    }
}
