//! JSON front end: parse a job specification, dispatch to the library,
//! and emit a machine-readable report.
//!
//! Exit codes: 0 ok, 2 degenerate/undefined (partial results included),
//! 1 error.

pub mod entry;
pub mod report;

use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use quasidet::charpoly::{
    cayley_hamilton_residual, char_poly_row, row_poly_divergence, CharPolyRing, RowCharPoly,
};
use quasidet::fock::BandOperator;
use quasidet::matrix::NcMatrix;
use quasidet::qdet::{homological_residuals, quasideterminant, scaling_check, sylvester_reduce};
use quasidet::quaternion::Quaternion;
use quasidet::spectral::{
    matrix_exp_band, matrix_exp_quaternion, matrix_function_with, solve_eigen_diagonals,
    spectral_decompose, EigenDiagonals, RootStrategy, SpectralDecomposition, SpectralRing,
};
use quasidet::tolerance::ToleranceConfig;
use quasidet::Error;

use report::{
    band_pretty, band_to_json, complex_json, json_f64, matrix_json, quaternion_exact_json,
    quaternion_float_json, quaternion_pretty, rational_string,
};

/// A job: ring, matrix, command, and command-specific options.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JobSpec {
    pub ring: Option<String>,
    pub command: Option<String>,
    pub matrix: Option<Vec<Vec<Value>>>,
    pub tolerance: Option<f64>,
    pub probe_levels: Option<u32>,
    pub guard_band: Option<u32>,
    /// charpoly: 1-based row index
    pub row: Option<usize>,
    /// qdet: 1-based position
    pub i: Option<usize>,
    pub j: Option<usize>,
    /// funcmat: "exp" or "identity", plus a real or [re, im] scale
    pub function: Option<String>,
    pub scale: Option<Value>,
    /// spectral/funcmat: user-supplied roots, one list per row
    pub roots: Option<Vec<Vec<Value>>>,
    /// identities: "homological" | "scaling" | "sylvester" | "all"
    pub which: Option<String>,
    /// identities: pivot size for the sylvester check
    pub k: Option<usize>,
    /// identities: row/column multipliers for the scaling check
    pub lambda: Option<Value>,
    pub mu: Option<Value>,
}

#[derive(Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub ring: String,
    pub status: String,
    pub results: Value,
    pub residuals: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub message: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pretty: Option<Value>,
}

pub struct RunOutcome {
    pub report: Report,
    pub exit_code: i32,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RingTag {
    Rational,
    Complex,
    QuaternionExact,
    QuaternionFloat,
    Fock,
}

impl RingTag {
    pub fn parse(s: &str) -> Option<RingTag> {
        match s {
            "rational" => Some(RingTag::Rational),
            "complex" => Some(RingTag::Complex),
            "quaternion-exact" => Some(RingTag::QuaternionExact),
            "quaternion-float" => Some(RingTag::QuaternionFloat),
            "fock" => Some(RingTag::Fock),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            RingTag::Rational => "rational",
            RingTag::Complex => "complex",
            RingTag::QuaternionExact => "quaternion-exact",
            RingTag::QuaternionFloat => "quaternion-float",
            RingTag::Fock => "fock",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Command {
    Qdet,
    Inverse,
    Charpoly,
    ChVerify,
    Spectral,
    Funcmat,
    Identities,
}

impl Command {
    fn parse(s: &str) -> Option<Command> {
        match s {
            "qdet" => Some(Command::Qdet),
            "inverse" => Some(Command::Inverse),
            "charpoly" => Some(Command::Charpoly),
            "ch-verify" => Some(Command::ChVerify),
            "spectral" => Some(Command::Spectral),
            "funcmat" => Some(Command::Funcmat),
            "identities" => Some(Command::Identities),
            _ => None,
        }
    }
}

/// Ring backends the CLI can drive.
trait CliRing: SpectralRing + CharPolyRing {
    fn parse_entry(v: &Value, cfg: &ToleranceConfig) -> Result<Self, String>;
    fn to_json(&self, cfg: &ToleranceConfig) -> Value;
    fn pretty_str(&self, cfg: &ToleranceConfig) -> String;
    /// Exponential of the decomposition, already serialized (the output
    /// ring may differ, e.g. exact quaternions exponentiate in floats).
    fn exp_json(
        decomp: &SpectralDecomposition<Self>,
        scale: Complex64,
        cfg: &ToleranceConfig,
    ) -> Result<Value, Error>;
}

impl CliRing for BigRational {
    fn parse_entry(v: &Value, _cfg: &ToleranceConfig) -> Result<Self, String> {
        match v {
            Value::Number(n) => entry::parse_rational(&n.to_string()).map_err(|e| e.to_string()),
            Value::String(s) => entry::parse_rational(s).map_err(|e| e.to_string()),
            other => Err(format!("expected a rational literal, found {other}")),
        }
    }

    fn to_json(&self, _cfg: &ToleranceConfig) -> Value {
        json!(rational_string(self))
    }

    fn pretty_str(&self, _cfg: &ToleranceConfig) -> String {
        rational_string(self)
    }

    fn exp_json(
        _decomp: &SpectralDecomposition<Self>,
        _scale: Complex64,
        _cfg: &ToleranceConfig,
    ) -> Result<Value, Error> {
        Err(Error::UnsupportedFunction(
            "exp over exact rationals; use the complex or quaternion-float ring".into(),
        ))
    }
}

impl CliRing for Complex64 {
    fn parse_entry(v: &Value, _cfg: &ToleranceConfig) -> Result<Self, String> {
        entry::parse_complex(v).map_err(|e| e.to_string())
    }

    fn to_json(&self, _cfg: &ToleranceConfig) -> Value {
        complex_json(self)
    }

    fn pretty_str(&self, _cfg: &ToleranceConfig) -> String {
        format!("{} + {} im", report::round_sig(self.re), report::round_sig(self.im))
    }

    fn exp_json(
        decomp: &SpectralDecomposition<Self>,
        scale: Complex64,
        cfg: &ToleranceConfig,
    ) -> Result<Value, Error> {
        let e = matrix_function_with(decomp, |c| Ok((scale * c).exp()))?;
        Ok(matrix_json(&e, |v| v.to_json(cfg)))
    }
}

impl CliRing for Quaternion<BigRational> {
    fn parse_entry(v: &Value, _cfg: &ToleranceConfig) -> Result<Self, String> {
        entry::parse_quaternion_exact(v).map_err(|e| e.to_string())
    }

    fn to_json(&self, _cfg: &ToleranceConfig) -> Value {
        quaternion_exact_json(self)
    }

    fn pretty_str(&self, _cfg: &ToleranceConfig) -> String {
        quaternion_pretty(self)
    }

    fn exp_json(
        decomp: &SpectralDecomposition<Self>,
        scale: Complex64,
        cfg: &ToleranceConfig,
    ) -> Result<Value, Error> {
        if scale.im != 0.0 {
            return Err(Error::UnsupportedFunction(
                "quaternion exponential needs a real scale".into(),
            ));
        }
        let float = SpectralDecomposition {
            xs: EigenDiagonals {
                xs: decomp
                    .xs
                    .xs
                    .iter()
                    .map(|x| x.map_entries(|e| e.to_f64_flavor()))
                    .collect(),
            },
            projectors: decomp
                .projectors
                .iter()
                .map(|p| p.map_entries(|e| e.to_f64_flavor()))
                .collect(),
            residual_report: decomp.residual_report,
        };
        let e = matrix_exp_quaternion(&float, scale.re)?;
        Ok(matrix_json(&e, |v| CliRing::to_json(v, cfg)))
    }
}

impl CliRing for Quaternion<f64> {
    fn parse_entry(v: &Value, _cfg: &ToleranceConfig) -> Result<Self, String> {
        entry::parse_quaternion_float(v).map_err(|e| e.to_string())
    }

    fn to_json(&self, _cfg: &ToleranceConfig) -> Value {
        quaternion_float_json(self)
    }

    fn pretty_str(&self, _cfg: &ToleranceConfig) -> String {
        quaternion_pretty(self)
    }

    fn exp_json(
        decomp: &SpectralDecomposition<Self>,
        scale: Complex64,
        cfg: &ToleranceConfig,
    ) -> Result<Value, Error> {
        if scale.im != 0.0 {
            return Err(Error::UnsupportedFunction(
                "quaternion exponential needs a real scale".into(),
            ));
        }
        let e = matrix_exp_quaternion(decomp, scale.re)?;
        Ok(matrix_json(&e, |v| CliRing::to_json(v, cfg)))
    }
}

impl CliRing for BandOperator {
    fn parse_entry(v: &Value, cfg: &ToleranceConfig) -> Result<Self, String> {
        entry::parse_band_entry(v, cfg).map_err(|e| e.to_string())
    }

    fn to_json(&self, cfg: &ToleranceConfig) -> Value {
        band_to_json(self, cfg)
    }

    fn pretty_str(&self, _cfg: &ToleranceConfig) -> String {
        band_pretty(self)
    }

    fn exp_json(
        decomp: &SpectralDecomposition<Self>,
        scale: Complex64,
        cfg: &ToleranceConfig,
    ) -> Result<Value, Error> {
        let e = matrix_exp_band(decomp, scale)?;
        Ok(matrix_json(&e, |v| CliRing::to_json(v, cfg)))
    }
}

fn status_of_error(e: &Error) -> (&'static str, i32) {
    match e {
        Error::Undefined(_)
        | Error::NotInvertible
        | Error::Singular(_)
        | Error::VandermondeSingular
        | Error::PivotSingular
        | Error::NoSolution(_) => ("undefined", 2),
        _ => ("error", 1),
    }
}

fn error_outcome(command: &str, ring: &str, e: &Error) -> RunOutcome {
    let (status, code) = status_of_error(e);
    RunOutcome {
        report: Report {
            command: command.to_string(),
            ring: ring.to_string(),
            status: status.to_string(),
            results: Value::Null,
            residuals: json!({}),
            message: Some(e.to_string()),
            pretty: None,
        },
        exit_code: code,
    }
}

fn input_error(command: &str, ring: &str, msg: String) -> RunOutcome {
    RunOutcome {
        report: Report {
            command: command.to_string(),
            ring: ring.to_string(),
            status: "error".to_string(),
            results: Value::Null,
            residuals: json!({}),
            message: Some(msg),
            pretty: None,
        },
        exit_code: 1,
    }
}

/// Run a job; `pretty` adds human-readable renderings to the report.
pub fn run_job(job: &JobSpec, pretty: bool) -> RunOutcome {
    let ring_name = job.ring.clone().unwrap_or_default();
    let command_name = job.command.clone().unwrap_or_default();
    let Some(ring) = RingTag::parse(&ring_name) else {
        return input_error(
            &command_name,
            &ring_name,
            format!(
                "unknown ring {ring_name:?}; expected rational | complex | quaternion-exact | quaternion-float | fock"
            ),
        );
    };
    let Some(command) = Command::parse(&command_name) else {
        return input_error(
            &command_name,
            ring.name(),
            format!(
                "unknown command {command_name:?}; expected qdet | inverse | charpoly | ch-verify | spectral | funcmat | identities"
            ),
        );
    };

    let mut cfg = ToleranceConfig::default();
    if let Some(t) = job.tolerance {
        if t <= 0.0 {
            return input_error(&command_name, ring.name(), "tolerance must be positive".into());
        }
        cfg.abs_tol = t;
    }
    if let Some(p) = job.probe_levels {
        cfg.probe_levels = p;
    }
    if let Some(g) = job.guard_band {
        cfg.guard_band = g;
    }

    match ring {
        RingTag::Rational => run_typed::<BigRational>(job, ring, command, &cfg, pretty),
        RingTag::Complex => run_typed::<Complex64>(job, ring, command, &cfg, pretty),
        RingTag::QuaternionExact => {
            run_typed::<Quaternion<BigRational>>(job, ring, command, &cfg, pretty)
        }
        RingTag::QuaternionFloat => run_typed::<Quaternion<f64>>(job, ring, command, &cfg, pretty),
        RingTag::Fock => run_typed::<BandOperator>(job, ring, command, &cfg, pretty),
    }
}

fn parse_matrix<R: CliRing>(
    job: &JobSpec,
    cfg: &ToleranceConfig,
) -> Result<NcMatrix<R>, String> {
    let rows = job.matrix.as_ref().ok_or("job has no matrix")?;
    if rows.is_empty() || rows[0].is_empty() {
        return Err("matrix must be nonempty".into());
    }
    let cols = rows[0].len();
    let mut parsed = Vec::with_capacity(rows.len());
    for (i, row) in rows.iter().enumerate() {
        if row.len() != cols {
            return Err(format!("row {} has {} entries, expected {cols}", i + 1, row.len()));
        }
        let mut out = Vec::with_capacity(cols);
        for (j, v) in row.iter().enumerate() {
            out.push(
                R::parse_entry(v, cfg)
                    .map_err(|e| format!("entry ({},{}): {e}", i + 1, j + 1))?,
            );
        }
        parsed.push(out);
    }
    Ok(NcMatrix::from_rows(parsed))
}

fn parse_scale(job: &JobSpec) -> Result<Complex64, String> {
    match &job.scale {
        None => Ok(Complex64::new(1.0, 0.0)),
        Some(v) => entry::parse_complex(v).map_err(|e| e.to_string()),
    }
}

fn run_typed<R: CliRing>(
    job: &JobSpec,
    ring: RingTag,
    command: Command,
    cfg: &ToleranceConfig,
    pretty: bool,
) -> RunOutcome {
    let cmd_name = job.command.clone().unwrap_or_default();
    let a: NcMatrix<R> = match parse_matrix(job, cfg) {
        Ok(a) => a,
        Err(e) => return input_error(&cmd_name, ring.name(), e),
    };
    if !a.is_square() {
        return input_error(&cmd_name, ring.name(), "matrix must be square".into());
    }

    let ok = |results: Value, residuals: Value, pretty_val: Option<Value>| RunOutcome {
        report: Report {
            command: cmd_name.clone(),
            ring: ring.name().to_string(),
            status: "ok".to_string(),
            results,
            residuals,
            message: None,
            pretty: pretty_val,
        },
        exit_code: 0,
    };

    match command {
        Command::Qdet => {
            let (i, j) = (job.i.unwrap_or(1), job.j.unwrap_or(1));
            match quasideterminant(&a, i, j, cfg) {
                Ok(v) => {
                    let pretty_val = pretty.then(|| json!({ "qdet": v.pretty_str(cfg) }));
                    ok(
                        json!({ "i": i, "j": j, "qdet": v.to_json(cfg) }),
                        json!({}),
                        pretty_val,
                    )
                }
                Err(e) => error_outcome(&cmd_name, ring.name(), &e),
            }
        }

        Command::Inverse => {
            let by_elim = match a.inverse_elimination(cfg) {
                Ok(v) => v,
                Err(e) => return error_outcome(&cmd_name, ring.name(), &e),
            };
            let (qdet_route, agreement) = match a.inverse_quasidet(cfg) {
                Ok(v) => {
                    let diff = by_elim.sub(&v).map(|d| d.norm_max_mat(cfg)).unwrap_or(f64::NAN);
                    (json!("agrees"), Some(diff))
                }
                Err(e) => (json!(format!("unavailable: {e}")), None),
            };
            let mut residuals = serde_json::Map::new();
            if let Some(d) = agreement {
                residuals.insert("route_difference".into(), json_f64(d));
            }
            let pretty_val = pretty.then(|| {
                json!({ "inverse": matrix_json(&by_elim, |v| json!(v.pretty_str(cfg))) })
            });
            ok(
                json!({
                    "inverse": matrix_json(&by_elim, |v| v.to_json(cfg)),
                    "quasidet_route": qdet_route,
                }),
                Value::Object(residuals),
                pretty_val,
            )
        }

        Command::Charpoly => {
            let row = job.row.unwrap_or(1);
            match char_poly_row(&a, row, cfg) {
                Ok(p) => {
                    let degenerate = p.degenerate;
                    let results = json!({
                        "row": row,
                        "coefficients": p.coeffs.iter().map(|c| c.to_json(cfg)).collect::<Vec<_>>(),
                        "degenerate": degenerate,
                        "free_parameter_note": p.free_parameter_note,
                    });
                    let pretty_val = pretty.then(|| {
                        json!({
                            "coefficients": p
                                .coeffs
                                .iter()
                                .map(|c| c.pretty_str(cfg))
                                .collect::<Vec<_>>()
                        })
                    });
                    let mut out = ok(results, json!({}), pretty_val);
                    if degenerate {
                        out.report.status = "degenerate".into();
                        out.exit_code = 2;
                    }
                    out
                }
                Err(e) => error_outcome(&cmd_name, ring.name(), &e),
            }
        }

        Command::ChVerify => {
            let polys: Result<Vec<RowCharPoly<R>>, Error> =
                (1..=a.rows()).map(|i| char_poly_row(&a, i, cfg)).collect();
            let polys = match polys {
                Ok(p) => p,
                Err(e) => return error_outcome(&cmd_name, ring.name(), &e),
            };
            let resid = match cayley_hamilton_residual(&a, &polys, cfg) {
                Ok(r) => r,
                Err(e) => return error_outcome(&cmd_name, ring.name(), &e),
            };
            let degenerate_rows: Vec<usize> = polys
                .iter()
                .filter(|p| p.degenerate)
                .map(|p| p.row)
                .collect();
            let results = json!({
                "rows": polys.iter().map(|p| json!({
                    "row": p.row,
                    "coefficients": p.coeffs.iter().map(|c| c.to_json(cfg)).collect::<Vec<_>>(),
                    "degenerate": p.degenerate,
                })).collect::<Vec<_>>(),
                "row_poly_divergence": row_poly_divergence(&polys, cfg),
                "degenerate_rows": degenerate_rows,
            });
            let residuals = json!({ "cayley_hamilton": json_f64(resid.norm_max_mat(cfg)) });
            let mut out = ok(results, residuals, None);
            if !out.report.results["degenerate_rows"]
                .as_array()
                .map(|v| v.is_empty())
                .unwrap_or(true)
            {
                out.report.status = "degenerate".into();
                out.exit_code = 2;
            }
            out
        }

        Command::Spectral | Command::Funcmat => {
            let polys: Result<Vec<RowCharPoly<R>>, Error> =
                (1..=a.rows()).map(|i| char_poly_row(&a, i, cfg)).collect();
            let polys = match polys {
                Ok(p) => p,
                Err(e) => return error_outcome(&cmd_name, ring.name(), &e),
            };
            let strategy = match &job.roots {
                None => RootStrategy::Auto,
                Some(rows) => {
                    let mut parsed = Vec::with_capacity(rows.len());
                    for (i, row) in rows.iter().enumerate() {
                        let mut out = Vec::with_capacity(row.len());
                        for v in row {
                            match R::parse_entry(v, cfg) {
                                Ok(r) => out.push(r),
                                Err(e) => {
                                    return input_error(
                                        &cmd_name,
                                        ring.name(),
                                        format!("roots row {}: {e}", i + 1),
                                    )
                                }
                            }
                        }
                        parsed.push(out);
                    }
                    RootStrategy::Supplied(parsed)
                }
            };
            let xs = match solve_eigen_diagonals(&a, &polys, &strategy, cfg) {
                Ok(xs) => xs,
                Err(e) => return error_outcome(&cmd_name, ring.name(), &e),
            };
            let decomp = match spectral_decompose(&a, &xs, cfg) {
                Ok(d) => d,
                Err(e) => return error_outcome(&cmd_name, ring.name(), &e),
            };
            let degenerate = polys.iter().any(|p| p.degenerate);

            let residuals = json!({
                "idempotence": json_f64(decomp.residual_report.idempotence),
                "orthogonality": json_f64(decomp.residual_report.orthogonality),
                "completeness": json_f64(decomp.residual_report.completeness),
                "vandermonde_bordered": json_f64(decomp.residual_report.vandermonde_bordered),
                "vandermonde_expanded": json_f64(decomp.residual_report.vandermonde_expanded),
            });

            let mut out = match command {
                Command::Spectral => {
                    let results = json!({
                        "eigen_diagonals": decomp.xs.xs.iter()
                            .map(|x| matrix_json(x, |v| v.to_json(cfg)))
                            .collect::<Vec<_>>(),
                        "projectors": decomp.projectors.iter()
                            .map(|p| matrix_json(p, |v| v.to_json(cfg)))
                            .collect::<Vec<_>>(),
                        "degenerate_rows": polys.iter().filter(|p| p.degenerate)
                            .map(|p| p.row).collect::<Vec<_>>(),
                    });
                    let pretty_val = pretty.then(|| {
                        json!({
                            "projectors": decomp.projectors.iter()
                                .map(|p| matrix_json(p, |v| json!(v.pretty_str(cfg))))
                                .collect::<Vec<_>>()
                        })
                    });
                    ok(results, residuals, pretty_val)
                }
                Command::Funcmat => {
                    let tag = job.function.clone().unwrap_or_else(|| "exp".into());
                    let scale = match parse_scale(job) {
                        Ok(s) => s,
                        Err(e) => return input_error(&cmd_name, ring.name(), e),
                    };
                    let matrix = match tag.as_str() {
                        "identity" | "id" => match matrix_function_with(&decomp, |x| Ok(x.clone()))
                        {
                            Ok(m) => matrix_json(&m, |v| v.to_json(cfg)),
                            Err(e) => return error_outcome(&cmd_name, ring.name(), &e),
                        },
                        "exp" => match R::exp_json(&decomp, scale, cfg) {
                            Ok(v) => v,
                            Err(e) => return error_outcome(&cmd_name, ring.name(), &e),
                        },
                        other => {
                            return error_outcome(
                                &cmd_name,
                                ring.name(),
                                &Error::UnsupportedFunction(format!(
                                    "{other:?}; expected exp or identity"
                                )),
                            )
                        }
                    };
                    let results = json!({
                        "function": tag,
                        "scale": [json_f64(scale.re), json_f64(scale.im)],
                        "matrix": matrix,
                    });
                    ok(results, residuals, None)
                }
                _ => unreachable!(),
            };
            if degenerate {
                out.report.status = "degenerate".into();
                out.exit_code = 2;
            }
            out
        }

        Command::Identities => {
            let which = job.which.clone().unwrap_or_else(|| "all".into());
            let mut residuals = serde_json::Map::new();
            let mut results = serde_json::Map::new();

            if which == "homological" || which == "all" {
                match homological_residuals(&a, cfg) {
                    Ok(rep) => {
                        residuals.insert("homological".into(), json_f64(rep.max_residual(cfg)));
                        results.insert(
                            "homological".into(),
                            json!({ "checked": rep.residuals.len(), "skipped": rep.skipped }),
                        );
                    }
                    Err(e) => return error_outcome(&cmd_name, ring.name(), &e),
                }
            }
            if which == "scaling" || which == "all" {
                let one = a.proto().one_like();
                let lambda = match &job.lambda {
                    Some(v) => match R::parse_entry(v, cfg) {
                        Ok(r) => r,
                        Err(e) => return input_error(&cmd_name, ring.name(), e),
                    },
                    None => one.clone(),
                };
                let mu = match &job.mu {
                    Some(v) => match R::parse_entry(v, cfg) {
                        Ok(r) => r,
                        Err(e) => return input_error(&cmd_name, ring.name(), e),
                    },
                    None => one,
                };
                let (i, j) = (job.i.unwrap_or(1), job.j.unwrap_or(1));
                match scaling_check(&a, &lambda, &mu, i, j, cfg) {
                    Ok(rep) => {
                        residuals.insert("scaling".into(), json_f64(rep.max_residual(cfg)));
                        results.insert(
                            "scaling".into(),
                            json!({ "checked": rep.residuals.len(), "skipped": rep.skipped }),
                        );
                    }
                    Err(e) => return error_outcome(&cmd_name, ring.name(), &e),
                }
            }
            if which == "sylvester" || which == "all" {
                let k = job.k.unwrap_or(1);
                match sylvester_reduce(&a, k, cfg) {
                    Ok(c) => {
                        let mut worst = 0.0f64;
                        let mut checked = 0usize;
                        let mut skipped = 0usize;
                        for i in k + 1..=a.rows() {
                            for j in k + 1..=a.rows() {
                                match (
                                    quasideterminant(&a, i, j, cfg),
                                    quasideterminant(&c, i - k, j - k, cfg),
                                ) {
                                    (Ok(x), Ok(y)) => {
                                        worst = worst.max(x.sub(&y).norm_max(cfg));
                                        checked += 1;
                                    }
                                    _ => skipped += 1,
                                }
                            }
                        }
                        residuals.insert("sylvester".into(), json_f64(worst));
                        results.insert(
                            "sylvester".into(),
                            json!({ "pivot": k, "checked": checked, "skipped": skipped }),
                        );
                    }
                    Err(e) => return error_outcome(&cmd_name, ring.name(), &e),
                }
            }
            if results.is_empty() {
                return input_error(
                    &cmd_name,
                    ring.name(),
                    format!("unknown identity family {which:?}"),
                );
            }
            ok(Value::Object(results), Value::Object(residuals), None)
        }
    }
}
