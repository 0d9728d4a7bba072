//! Report serialization: per-ring element rendering, stable float
//! formatting (12 significant digits, negative zero normalized), and
//! the grammar-compatible band-operator rendering used for round-trips.

use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::Zero;
use serde_json::{json, Value};

use quasidet::fock::{BandOperator, WeightExpr};
use quasidet::matrix::NcMatrix;
use quasidet::quaternion::{Coeff, Quaternion};
use quasidet::tolerance::ToleranceConfig;

/// Round to 12 significant digits and normalize negative zero.
pub fn round_sig(v: f64) -> f64 {
    if v == 0.0 || !v.is_finite() {
        return if v == 0.0 { 0.0 } else { v };
    }
    let formatted = format!("{v:.11e}");
    let rounded: f64 = formatted.parse().unwrap_or(v);
    if rounded == 0.0 {
        0.0
    } else {
        rounded
    }
}

pub fn json_f64(v: f64) -> Value {
    json!(round_sig(v))
}

pub fn rational_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn complex_json(c: &Complex64) -> Value {
    json!([round_sig(c.re), round_sig(c.im)])
}

pub fn quaternion_exact_json(q: &Quaternion<BigRational>) -> Value {
    json!([
        rational_string(&q.w),
        rational_string(&q.x),
        rational_string(&q.y),
        rational_string(&q.z)
    ])
}

pub fn quaternion_float_json(q: &Quaternion<f64>) -> Value {
    json!([
        round_sig(q.w),
        round_sig(q.x),
        round_sig(q.y),
        round_sig(q.z)
    ])
}

pub fn quaternion_pretty<T: Coeff + std::fmt::Display>(q: &Quaternion<T>) -> String {
    format!("{} + {} i + {} j + {} k", q.w, q.x, q.y, q.z)
}

/// Whether a weight stays inside the entry grammar.
fn weight_renderable(w: &WeightExpr) -> bool {
    match w {
        WeightExpr::Rational(_) | WeightExpr::Level => true,
        WeightExpr::Float(v) => v.im == 0.0,
        WeightExpr::Add(a, b)
        | WeightExpr::Sub(a, b)
        | WeightExpr::Mul(a, b)
        | WeightExpr::Div(a, b) => weight_renderable(a) && weight_renderable(b),
        WeightExpr::Sqrt(a) => weight_renderable(a),
        WeightExpr::Shift(a, _) => weight_renderable(a),
        WeightExpr::Apply(_, _) | WeightExpr::Table(_) => false,
    }
}

/// Render a weight as a grammar expression in `N`, with shifts folded
/// into the level variable.
fn render_weight(w: &WeightExpr, offset: i64) -> String {
    match w {
        WeightExpr::Rational(r) => {
            if r < &BigRational::zero() {
                format!("(0 - {})", rational_string(&-r.clone()))
            } else {
                rational_string(r)
            }
        }
        WeightExpr::Float(v) => {
            let rounded = round_sig(v.re);
            if rounded < 0.0 {
                format!("(0 - {})", -rounded)
            } else {
                format!("{rounded}")
            }
        }
        WeightExpr::Level => match offset.cmp(&0) {
            std::cmp::Ordering::Equal => "N".to_string(),
            std::cmp::Ordering::Greater => format!("(N + {offset})"),
            std::cmp::Ordering::Less => format!("(N - {})", -offset),
        },
        WeightExpr::Add(a, b) => format!(
            "({} + {})",
            render_weight(a, offset),
            render_weight(b, offset)
        ),
        WeightExpr::Sub(a, b) => format!(
            "({} - {})",
            render_weight(a, offset),
            render_weight(b, offset)
        ),
        WeightExpr::Mul(a, b) => format!(
            "({})*({})",
            render_weight(a, offset),
            render_weight(b, offset)
        ),
        WeightExpr::Div(a, b) => format!(
            "({})/({})",
            render_weight(a, offset),
            render_weight(b, offset)
        ),
        WeightExpr::Sqrt(a) => format!("sqrt({})", render_weight(a, offset)),
        WeightExpr::Shift(a, k) => render_weight(a, offset + k),
        WeightExpr::Apply(_, _) | WeightExpr::Table(_) => unreachable!("filtered upstream"),
    }
}

/// Render a band operator as a grammar expression: each band becomes a
/// shift power times a diagonal weight, with the generator weights
/// divided back out through diagonal-invertible square roots.
fn render_band(op: &BandOperator) -> Option<String> {
    if op.bands().is_empty() {
        return Some("0".to_string());
    }
    let mut parts = Vec::new();
    for (s, w) in op.bands() {
        if !weight_renderable(w) {
            return None;
        }
        let part = match s.cmp(&0) {
            std::cmp::Ordering::Equal => render_weight(w, 0),
            std::cmp::Ordering::Greater => {
                // ad^s ∘ h(N) with h = d / Π sqrt(N+r)
                let divisors: Vec<String> =
                    (1..=*s).map(|r| format!("sqrt(N + {r})")).collect();
                format!(
                    "ad^{} * ({}) / ({})",
                    s,
                    render_weight(w, 0),
                    divisors.join("*")
                )
            }
            std::cmp::Ordering::Less => {
                // h(N) ∘ a^k with h(m) = d(m+k) / Π sqrt(m+r)
                let k = -s;
                let divisors: Vec<String> =
                    (1..=k).map(|r| format!("sqrt(N + {r})")).collect();
                format!(
                    "({}) / ({}) * a^{}",
                    render_weight(w, k),
                    divisors.join("*"),
                    k
                )
            }
        };
        parts.push(part);
    }
    Some(parts.join(" + "))
}

/// Band operators serialize as a grammar string when possible, else as
/// a numeric table of in-window matrix elements per band.
pub fn band_to_json(op: &BandOperator, cfg: &ToleranceConfig) -> Value {
    if let Some(s) = render_band(op) {
        return json!(s);
    }
    let mut bands = serde_json::Map::new();
    for s in op.bands().keys() {
        let mut values = Vec::new();
        for n in 0..=cfg.probe_levels as i64 {
            let m = n + s;
            if m < 0 {
                values.push(json!(null));
                continue;
            }
            match op.matrix_element(m, n) {
                Ok(v) => values.push(complex_json(&v)),
                Err(_) => values.push(json!(null)),
            }
        }
        bands.insert(s.to_string(), Value::Array(values));
    }
    json!({ "bands": Value::Object(bands) })
}

pub fn band_pretty(op: &BandOperator) -> String {
    if op.bands().is_empty() {
        return "0".to_string();
    }
    op.bands()
        .iter()
        .map(|(s, w)| format!("[{w}]·S^{s}"))
        .collect::<Vec<_>>()
        .join(" + ")
}

/// Serialize a matrix entrywise.
pub fn matrix_json<R>(m: &NcMatrix<R>, f: impl Fn(&R) -> Value) -> Value {
    let mut rows = Vec::with_capacity(m.rows());
    for i in 1..=m.rows() {
        let mut row = Vec::with_capacity(m.cols());
        for j in 1..=m.cols() {
            row.push(f(m.entry(i, j)));
        }
        rows.push(Value::Array(row));
    }
    Value::Array(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::entry::parse_band;

    const CFG: ToleranceConfig = ToleranceConfig {
        abs_tol: 1e-9,
        probe_levels: 16,
        guard_band: 4,
    };

    #[test]
    fn rounding_is_stable() {
        assert_eq!(round_sig(-0.0), 0.0);
        assert_eq!(round_sig(1.0 / 3.0), 0.333333333333);
        assert_eq!(round_sig(2.0), 2.0);
    }

    #[test]
    fn band_rendering_round_trips() {
        let cases = [
            "sqrt(2)*a",
            "a*ad - ad*a",
            "2*N + 3",
            "ad^2",
            "sqrt(2*(2*N+3))",
            "a*a",
            "5",
            "N*a + ad",
        ];
        for text in cases {
            let op = parse_band(text, &CFG).unwrap();
            let rendered = render_band(&op).unwrap_or_else(|| panic!("{text} not renderable"));
            let back = parse_band(&rendered, &CFG)
                .unwrap_or_else(|e| panic!("reparse of {rendered:?} failed: {e}"));
            assert!(
                back.band_equal(&op, &CFG),
                "round-trip failed: {text} -> {rendered}"
            );
        }
    }
}
