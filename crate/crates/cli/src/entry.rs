//! Entry-literal parsers for every ring.
//!
//! Oscillator entries use the expression grammar
//!
//! ```text
//! EXPR   := TERM (('+'|'-') TERM)*
//! TERM   := FACTOR (('*'|'/') FACTOR)*
//! FACTOR := NUMBER | 'a' | 'ad' | 'N' | 'sqrt' '(' EXPR ')'
//!         | '(' EXPR ')' | FACTOR '^' UINT | '-' FACTOR
//! ```
//!
//! Product order in the source string is operator composition order
//! (leftmost acts last); `ad` denotes the creation operator. Division
//! is restricted to diagonal-invertible right factors.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde_json::Value;

use quasidet::fock::{BandOperator, WeightExpr};
use quasidet::quaternion::Quaternion;
use quasidet::tolerance::ToleranceConfig;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError {
    pub pos: usize,
    pub expected: String,
    pub found: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "parse error at position {}: expected {}, found {}",
            self.pos, self.expected, self.found
        )
    }
}

impl std::error::Error for ParseError {}

fn err<T>(pos: usize, expected: &str, found: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError {
        pos,
        expected: expected.to_string(),
        found: found.into(),
    })
}

/// Exact rational from "p/q", an integer, or a plain decimal.
pub fn parse_rational(text: &str) -> Result<BigRational, ParseError> {
    let t = text.trim();
    if t.is_empty() {
        return err(0, "a number", "empty string");
    }
    if let Some((num, den)) = t.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| ParseError {
                pos: 0,
                expected: "integer numerator".into(),
                found: num.into(),
            })?;
        let d: BigInt = den.trim().parse().map_err(|_| ParseError {
            pos: num.len() + 1,
            expected: "integer denominator".into(),
            found: den.into(),
        })?;
        if d.is_zero() {
            return err(num.len() + 1, "nonzero denominator", "0");
        }
        return Ok(BigRational::new(n, d));
    }
    parse_decimal(t)
}

/// Exact decimal: "-12.375" -> -99/8. Exponents are not accepted.
fn parse_decimal(t: &str) -> Result<BigRational, ParseError> {
    let (sign, rest) = match t.strip_prefix('-') {
        Some(r) => (-1, r),
        None => (1, t),
    };
    let rest = rest.strip_prefix('+').unwrap_or(rest);
    let (int_part, frac_part) = match rest.split_once('.') {
        Some((a, b)) => (a, b),
        None => (rest, ""),
    };
    if int_part.is_empty() && frac_part.is_empty() {
        return err(0, "digits", t);
    }
    if !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return err(0, "a decimal number (use p/q for exact fractions)", t);
    }
    let digits = format!("{int_part}{frac_part}");
    let n: BigInt = if digits.is_empty() {
        BigInt::zero()
    } else {
        digits.parse().unwrap()
    };
    let mut den = BigInt::one();
    for _ in 0..frac_part.len() {
        den *= 10;
    }
    Ok(BigRational::new(n * sign, den))
}

fn value_to_rational(v: &Value) -> Result<BigRational, ParseError> {
    match v {
        Value::Number(n) => parse_rational(&n.to_string()),
        Value::String(s) => parse_rational(s),
        other => err(0, "a number or numeric string", format!("{other}")),
    }
}

fn value_to_f64(v: &Value) -> Result<f64, ParseError> {
    match v {
        Value::Number(n) => n
            .as_f64()
            .ok_or_else(|| ParseError {
                pos: 0,
                expected: "a float".into(),
                found: n.to_string(),
            }),
        Value::String(s) => {
            let r = parse_rational(s)?;
            Ok(num_traits::ToPrimitive::to_f64(&r).unwrap_or(f64::NAN))
        }
        other => err(0, "a number", format!("{other}")),
    }
}

pub fn parse_complex(v: &Value) -> Result<Complex64, ParseError> {
    match v {
        Value::Array(parts) if parts.len() == 2 => Ok(Complex64::new(
            value_to_f64(&parts[0])?,
            value_to_f64(&parts[1])?,
        )),
        other => Ok(Complex64::new(value_to_f64(other)?, 0.0)),
    }
}

/// Quaternion literal: a bare number, a `[w,x,y,z]` array, or a string
/// like "1/2 + 3 i - j + 2 k".
pub fn parse_quaternion_exact(v: &Value) -> Result<Quaternion<BigRational>, ParseError> {
    match v {
        Value::Array(parts) if parts.len() == 4 => Ok(Quaternion::new(
            value_to_rational(&parts[0])?,
            value_to_rational(&parts[1])?,
            value_to_rational(&parts[2])?,
            value_to_rational(&parts[3])?,
        )),
        Value::String(s) if s.contains(['i', 'j', 'k']) => parse_quaternion_string(s),
        other => Ok(Quaternion::from_real(value_to_rational(other)?)),
    }
}

pub fn parse_quaternion_float(v: &Value) -> Result<Quaternion<f64>, ParseError> {
    let q = parse_quaternion_exact(v)?;
    Ok(q.to_f64_flavor())
}

fn parse_quaternion_string(s: &str) -> Result<Quaternion<BigRational>, ParseError> {
    let mut w = BigRational::zero();
    let mut x = BigRational::zero();
    let mut y = BigRational::zero();
    let mut z = BigRational::zero();
    let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bytes = compact.as_bytes();
    let mut pos = 0usize;
    while pos < bytes.len() {
        let mut sign = BigRational::one();
        loop {
            match bytes.get(pos) {
                Some(b'+') => pos += 1,
                Some(b'-') => {
                    sign = -sign;
                    pos += 1;
                }
                _ => break,
            }
        }
        let start = pos;
        while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'.' || bytes[pos] == b'/') {
            pos += 1;
        }
        let num_text = &compact[start..pos];
        let coeff = if num_text.is_empty() {
            BigRational::one()
        } else {
            parse_rational(num_text)?
        };
        // optional explicit multiplication sign before the unit
        if bytes.get(pos) == Some(&b'*') {
            pos += 1;
        }
        let coeff = coeff * sign;
        match bytes.get(pos) {
            Some(b'i') => {
                x += coeff;
                pos += 1;
            }
            Some(b'j') => {
                y += coeff;
                pos += 1;
            }
            Some(b'k') => {
                z += coeff;
                pos += 1;
            }
            _ if !num_text.is_empty() => w += coeff,
            other => {
                return err(
                    pos,
                    "a coefficient or unit i/j/k",
                    format!("{:?}", other.map(|b| *b as char)),
                )
            }
        }
    }
    Ok(Quaternion::new(w, x, y, z))
}

// --- oscillator entry grammar ------------------------------------------

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(BigRational),
    A,
    Ad,
    BigN,
    Sqrt,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Num(r) => write!(f, "number {r}"),
            Tok::A => write!(f, "'a'"),
            Tok::Ad => write!(f, "'ad'"),
            Tok::BigN => write!(f, "'N'"),
            Tok::Sqrt => write!(f, "'sqrt'"),
            Tok::Plus => write!(f, "'+'"),
            Tok::Minus => write!(f, "'-'"),
            Tok::Star => write!(f, "'*'"),
            Tok::Slash => write!(f, "'/'"),
            Tok::Caret => write!(f, "'^'"),
            Tok::LParen => write!(f, "'('"),
            Tok::RParen => write!(f, "')'"),
            Tok::Eof => write!(f, "end of input"),
        }
    }
}

struct Lexer {
    toks: Vec<(usize, Tok)>,
    cursor: usize,
}

impl Lexer {
    fn new(text: &str) -> Result<Self, ParseError> {
        let bytes = text.as_bytes();
        let mut toks = Vec::new();
        let mut pos = 0usize;
        while pos < bytes.len() {
            let c = bytes[pos] as char;
            match c {
                ' ' | '\t' | '\n' | '\r' => pos += 1,
                '+' => {
                    toks.push((pos, Tok::Plus));
                    pos += 1;
                }
                '-' => {
                    toks.push((pos, Tok::Minus));
                    pos += 1;
                }
                '*' => {
                    toks.push((pos, Tok::Star));
                    pos += 1;
                }
                '/' => {
                    toks.push((pos, Tok::Slash));
                    pos += 1;
                }
                '^' => {
                    toks.push((pos, Tok::Caret));
                    pos += 1;
                }
                '(' => {
                    toks.push((pos, Tok::LParen));
                    pos += 1;
                }
                ')' => {
                    toks.push((pos, Tok::RParen));
                    pos += 1;
                }
                '0'..='9' | '.' => {
                    let start = pos;
                    while pos < bytes.len()
                        && ((bytes[pos] as char).is_ascii_digit() || bytes[pos] == b'.')
                    {
                        pos += 1;
                    }
                    let r = parse_decimal(&text[start..pos]).map_err(|mut e| {
                        e.pos += start;
                        e
                    })?;
                    toks.push((start, Tok::Num(r)));
                }
                'a'..='z' | 'A'..='Z' => {
                    let start = pos;
                    while pos < bytes.len() && (bytes[pos] as char).is_ascii_alphanumeric() {
                        pos += 1;
                    }
                    let word = &text[start..pos];
                    let tok = match word {
                        "a" => Tok::A,
                        "ad" => Tok::Ad,
                        "N" => Tok::BigN,
                        "sqrt" => Tok::Sqrt,
                        other => return err(start, "'a', 'ad', 'N', or 'sqrt'", other),
                    };
                    toks.push((start, tok));
                }
                other => return err(pos, "an operator, number, or symbol", other.to_string()),
            }
        }
        toks.push((text.len(), Tok::Eof));
        Ok(Lexer { toks, cursor: 0 })
    }

    fn peek(&self) -> &(usize, Tok) {
        &self.toks[self.cursor]
    }

    fn bump(&mut self) -> (usize, Tok) {
        let t = self.toks[self.cursor].clone();
        if self.cursor + 1 < self.toks.len() {
            self.cursor += 1;
        }
        t
    }

    fn expect(&mut self, want: &Tok, expected: &str) -> Result<(), ParseError> {
        let (pos, tok) = self.bump();
        if &tok == want {
            Ok(())
        } else {
            err(pos, expected, tok.to_string())
        }
    }
}

/// Parse an oscillator entry expression into a band operator.
pub fn parse_band(text: &str, cfg: &ToleranceConfig) -> Result<BandOperator, ParseError> {
    let mut lx = Lexer::new(text)?;
    let op = parse_band_expr(&mut lx, cfg)?;
    let (pos, tok) = lx.bump();
    if tok != Tok::Eof {
        return err(pos, "end of input", tok.to_string());
    }
    Ok(op)
}

fn parse_band_expr(lx: &mut Lexer, cfg: &ToleranceConfig) -> Result<BandOperator, ParseError> {
    let mut acc = parse_band_term(lx, cfg)?;
    loop {
        match lx.peek().1 {
            Tok::Plus => {
                lx.bump();
                acc = acc.add_op(&parse_band_term(lx, cfg)?);
            }
            Tok::Minus => {
                lx.bump();
                acc = acc.sub_op(&parse_band_term(lx, cfg)?);
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_band_term(lx: &mut Lexer, cfg: &ToleranceConfig) -> Result<BandOperator, ParseError> {
    let mut acc = parse_band_factor(lx, cfg)?;
    loop {
        match lx.peek().1 {
            Tok::Star => {
                lx.bump();
                acc = acc.multiply(&parse_band_factor(lx, cfg)?);
            }
            Tok::Slash => {
                let (pos, _) = lx.bump();
                let divisor = parse_band_factor(lx, cfg)?;
                let inv = divisor.try_inverse_diag(cfg).map_err(|_| ParseError {
                    pos,
                    expected: "a diagonal-invertible divisor".into(),
                    found: "an operator with no diagonal inverse".into(),
                })?;
                acc = acc.multiply(&inv);
            }
            _ => return Ok(acc),
        }
    }
}

fn parse_band_factor(lx: &mut Lexer, cfg: &ToleranceConfig) -> Result<BandOperator, ParseError> {
    let (pos, tok) = lx.bump();
    let mut base = match tok {
        Tok::Num(r) => BandOperator::constant(r),
        Tok::A => BandOperator::annihilation(),
        Tok::Ad => BandOperator::creation(),
        Tok::BigN => BandOperator::number(),
        Tok::Minus => parse_band_factor(lx, cfg)?.neg_op(),
        Tok::Sqrt => {
            lx.expect(&Tok::LParen, "'(' after sqrt")?;
            let inner = parse_band_expr(lx, cfg)?;
            lx.expect(&Tok::RParen, "')'")?;
            if !inner.is_diagonal() {
                return err(pos, "a diagonal operator inside sqrt", "a shift operator");
            }
            let w = inner.band(0).cloned().unwrap_or_else(WeightExpr::zero);
            BandOperator::diagonal(WeightExpr::sqrt(&w))
        }
        Tok::LParen => {
            let inner = parse_band_expr(lx, cfg)?;
            lx.expect(&Tok::RParen, "')'")?;
            inner
        }
        other => return err(pos, "a factor", other.to_string()),
    };
    // postfix integer powers
    while lx.peek().1 == Tok::Caret {
        lx.bump();
        let (pos, tok) = lx.bump();
        let exp = match tok {
            Tok::Num(r) if r.is_integer() && r >= BigRational::zero() => {
                num_traits::ToPrimitive::to_u32(r.numer()).ok_or_else(|| ParseError {
                    pos,
                    expected: "a small nonnegative integer exponent".into(),
                    found: "an oversized exponent".into(),
                })?
            }
            other => return err(pos, "a nonnegative integer exponent", other.to_string()),
        };
        let mut acc = BandOperator::identity();
        for _ in 0..exp {
            acc = acc.multiply(&base);
        }
        base = acc;
    }
    Ok(base)
}

/// Parse one matrix entry according to the ring.
pub fn parse_band_entry(v: &Value, cfg: &ToleranceConfig) -> Result<BandOperator, ParseError> {
    match v {
        Value::String(s) => parse_band(s, cfg),
        Value::Number(n) => Ok(BandOperator::constant(parse_rational(&n.to_string())?)),
        other => err(0, "an expression string or number", format!("{other}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    const CFG: ToleranceConfig = ToleranceConfig {
        abs_tol: 1e-9,
        probe_levels: 16,
        guard_band: 4,
    };

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("3/4").unwrap(), BigRational::new(3.into(), 4.into()));
        assert_eq!(parse_rational("-0.25").unwrap(), BigRational::new((-1).into(), 4.into()));
        assert_eq!(parse_rational("7").unwrap(), BigRational::from_integer(7.into()));
        assert!(parse_rational("1e3").is_err());
    }

    #[test]
    fn quaternion_literals() {
        let i = parse_quaternion_exact(&json!([0, 1, 0, 0])).unwrap();
        assert_eq!(i, Quaternion::from_i64(0, 1, 0, 0));
        let q = parse_quaternion_exact(&json!("1/2 + 3 i - j + 2 k")).unwrap();
        assert_eq!(
            q,
            Quaternion::new(
                BigRational::new(1.into(), 2.into()),
                BigRational::from_integer(3.into()),
                BigRational::from_integer((-1).into()),
                BigRational::from_integer(2.into()),
            )
        );
        let w = parse_quaternion_exact(&json!("5")).unwrap();
        assert_eq!(w, Quaternion::from_i64(5, 0, 0, 0));
    }

    #[test]
    fn band_grammar_basics() {
        // sqrt(2)*a has band {-1 -> sqrt(2) sqrt(n)}
        let op = parse_band("sqrt(2)*a", &CFG).unwrap();
        let e = op.matrix_element(3, 4).unwrap();
        assert!((e.re - (2.0f64).sqrt() * 2.0).abs() < 1e-12);

        // the commutator collapses to the identity
        let op = parse_band("a*ad - ad*a", &CFG).unwrap();
        assert!(op.band_equal(&BandOperator::identity(), &CFG));

        // powers and division by diagonals
        let op = parse_band("ad^2 * (2*N+3) / (2*N+3)", &CFG).unwrap();
        let adad = BandOperator::creation().multiply(&BandOperator::creation());
        assert!(op.band_equal(&adad, &CFG));
    }

    #[test]
    fn band_grammar_errors_carry_position() {
        let e = parse_band("sqrt(2*a", &CFG).unwrap_err();
        assert!(e.expected.contains("')'"), "{e}");
        let e = parse_band("2 + qq", &CFG).unwrap_err();
        assert_eq!(e.pos, 4);
    }
}
