//! Command-line front end.
//!
//! Data goes to stdout as JSON or CSV, diagnostics to stderr. Exit codes:
//! 0 on success, 2 for invalid input, 3 when a numerical method fails.

use crate::error::GeoError;
use crate::inverse::{solve_c, InverseProblem};
use crate::kappa::{kappa_table, parts};
use crate::model::{Ellipsoid, GeodesicSpec, DEFAULT_MARGIN, DEFAULT_ORDER};
use crate::profile::{profile, ProfileRow, DEFAULT_C_LIST, DEFAULT_K_LIST};
use crate::quadrature::{quad_distance, quad_longitude, Quadrature};
use crate::series::{distance_integral, longitude_integral, HalfInt, IntegralResult};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use std::ffi::OsString;
use std::io::Write;

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "geoline", version, about = "Longitude and arc length of constant-altitude geodesic lines on an oblate ellipsoid")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Args)]
pub struct LineArgs {
    /// Second eccentricity of the ellipsoid.
    #[arg(long, allow_hyphen_values = true)]
    pub e: f64,
    /// Altitude divided by the equatorial radius.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub h: f64,
    /// Sine of the latitude at the lower limit.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub tau0: f64,
    /// Sine of the latitude at the upper limit.
    #[arg(long, allow_hyphen_values = true)]
    pub tau1: f64,
    /// Equatorial radius multiplying the printed arc length.
    #[arg(long = "rho-e", default_value_t = 1.0)]
    pub rho_e: f64,
    #[arg(long, default_value_t = DEFAULT_ORDER)]
    pub order: usize,
    #[arg(long, default_value_t = DEFAULT_MARGIN)]
    pub margin: f64,
    /// Largest admissible scaled altitude.
    #[arg(long = "h-max")]
    pub h_max: Option<f64>,
    /// Longitudes in degrees instead of radians.
    #[arg(long)]
    pub degrees: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Longitude difference and arc length for a given obliquity parameter.
    Direct {
        #[command(flatten)]
        line: LineArgs,
        /// Obliquity parameter divided by the equatorial radius.
        #[arg(long)]
        c: f64,
        /// Also integrate numerically and report the discrepancies.
        #[arg(long)]
        check: bool,
    },
    /// Obliquity parameter reproducing a given longitude difference.
    Inverse {
        #[command(flatten)]
        line: LineArgs,
        #[arg(long = "delta-lambda", allow_hyphen_values = true)]
        delta_lambda: f64,
        #[arg(long, default_value_t = 1e-13)]
        tolerance: f64,
        #[arg(long = "max-iter", default_value_t = 25)]
        max_iter: usize,
    },
    /// Exact series coefficients kappa(s, k) for s <= smax.
    Kappa {
        #[arg(long, default_value_t = 9)]
        smax: u32,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// I(beta, k) from 0 to tau on a latitude grid up to the branch margin.
    Profile {
        #[arg(long, allow_hyphen_values = true)]
        e: f64,
        #[arg(long = "c-list", value_delimiter = ',')]
        c_list: Option<Vec<f64>>,
        #[arg(long = "k-list", value_delimiter = ',')]
        k_list: Option<Vec<u32>>,
        /// Integer or half-integer exponent of 1 - e^2 tau^2.
        #[arg(long, default_value_t = -0.5, allow_hyphen_values = true)]
        beta: f64,
        #[arg(long = "tau-steps", default_value_t = 50)]
        tau_steps: usize,
        #[arg(long, default_value_t = DEFAULT_MARGIN)]
        margin: f64,
        /// Significant digits of the printed values.
        #[arg(long, default_value_t = 17)]
        precision: usize,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Longitude difference and arc length by adaptive quadrature.
    Oracle {
        #[command(flatten)]
        line: LineArgs,
        #[arg(long)]
        c: f64,
        #[arg(long = "abs-tol", default_value_t = 1e-13)]
        abs_tol: f64,
        #[arg(long = "rel-tol", default_value_t = 1e-12)]
        rel_tol: f64,
    },
}

#[derive(Debug, Serialize)]
struct DirectOutput {
    delta_lambda_rad: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_lambda_deg: Option<f64>,
    s: f64,
    terms: Vec<f64>,
    trunc_estimate: f64,
    s_terms: Vec<f64>,
    s_trunc_estimate: f64,
    orders_used: usize,
    slow_convergence: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    oracle_delta_s: Option<f64>,
}

#[derive(Debug, Serialize)]
struct InverseOutput {
    c: f64,
    iterations: usize,
    residual: f64,
    c_upper: f64,
}

#[derive(Debug, Serialize)]
struct OracleOutput {
    delta_lambda_rad: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    delta_lambda_deg: Option<f64>,
    s: f64,
    delta_lambda_err: f64,
    s_err: f64,
}

#[derive(Debug, Serialize)]
struct KappaRow {
    s: u32,
    k: u32,
    numerator: String,
    denominator: String,
}

enum Failure {
    Geo(GeoError),
    Usage(String),
    Io(std::io::Error),
}

impl From<GeoError> for Failure {
    fn from(e: GeoError) -> Self {
        Failure::Geo(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Io(e.into())
    }
}

fn spec_of(line: &LineArgs, c: f64) -> GeodesicSpec {
    let spec = GeodesicSpec::new(line.h, c, line.tau0, line.tau1)
        .with_order(line.order)
        .with_margin(line.margin);
    match line.h_max {
        Some(m) => spec.with_h_max(m),
        None => spec,
    }
}

fn ellipsoid_of(line: &LineArgs) -> Result<Ellipsoid, GeoError> {
    if !(line.rho_e.is_finite() && line.rho_e > 0.0) {
        return Err(GeoError::Domain(format!("--rho-e must be positive, got {}", line.rho_e)));
    }
    Ellipsoid::scaled(line.e)
}

fn degrees_of(line: &LineArgs, rad: f64) -> Option<f64> {
    line.degrees.then(|| rad.to_degrees())
}

fn write_json<T: Serialize>(out: &mut dyn Write, v: &T) -> Result<(), Failure> {
    serde_json::to_writer(&mut *out, v)?;
    writeln!(out)?;
    Ok(())
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(";")
}

fn direct(out: &mut dyn Write, line: &LineArgs, c: f64, check: bool) -> Result<(), Failure> {
    let ell = ellipsoid_of(line)?;
    let spec = spec_of(line, c);
    let lon: IntegralResult = longitude_integral(&ell, &spec)?;
    let dist = distance_integral(&ell, &spec)?;
    let (oracle_delta, oracle_delta_s) = if check {
        let q = Quadrature::default();
        let (ql, _) = quad_longitude(&ell, &spec, &q)?;
        let (qd, _) = quad_distance(&ell, &spec, &q)?;
        (Some((lon.value - ql).abs()), Some(line.rho_e * (dist.value - qd).abs()))
    } else {
        (None, None)
    };
    let o = DirectOutput {
        delta_lambda_rad: lon.value,
        delta_lambda_deg: degrees_of(line, lon.value),
        s: line.rho_e * dist.value,
        terms: lon.terms.clone(),
        trunc_estimate: lon.trunc_estimate,
        s_terms: dist.terms.iter().map(|t| line.rho_e * t).collect(),
        s_trunc_estimate: line.rho_e * dist.trunc_estimate,
        orders_used: lon.orders_used,
        slow_convergence: lon.slow_convergence || dist.slow_convergence,
        oracle_delta,
        oracle_delta_s,
    };
    match line.format {
        Format::Json => write_json(out, &o),
        Format::Csv => {
            writeln!(out, "delta_lambda_rad,s,trunc_estimate,s_trunc_estimate,orders_used,terms")?;
            writeln!(
                out,
                "{},{},{},{},{},{}",
                o.delta_lambda_rad,
                o.s,
                o.trunc_estimate,
                o.s_trunc_estimate,
                o.orders_used,
                join(&o.terms)
            )?;
            Ok(())
        }
    }
}

fn inverse(out: &mut dyn Write, line: &LineArgs, delta_lambda: f64, tolerance: f64, max_iter: usize) -> Result<(), Failure> {
    let ell = ellipsoid_of(line)?;
    let target = if line.degrees { delta_lambda.to_radians() } else { delta_lambda };
    let mut p = InverseProblem::new(target, line.tau0, line.tau1, line.h);
    p.tolerance = tolerance;
    p.max_iter = max_iter;
    p.order = line.order;
    p.margin = line.margin;
    if let Some(m) = line.h_max {
        p.h_max = m;
    }
    let sol = solve_c(&p, &ell)?;
    let o = InverseOutput {
        c: sol.c,
        iterations: sol.iterations,
        residual: sol.residual,
        c_upper: sol.c_upper,
    };
    match line.format {
        Format::Json => write_json(out, &o),
        Format::Csv => {
            writeln!(out, "c,iterations,residual,c_upper")?;
            writeln!(out, "{},{},{},{}", o.c, o.iterations, o.residual, o.c_upper)?;
            Ok(())
        }
    }
}

fn kappa(out: &mut dyn Write, smax: u32, format: Format) -> Result<(), Failure> {
    let table = kappa_table(smax);
    let rows: Vec<KappaRow> = table
        .iter()
        .map(|(s, k, v)| {
            let (n, d) = parts(v);
            KappaRow {
                s,
                k,
                numerator: n.to_string(),
                denominator: d.to_string(),
            }
        })
        .collect();
    match format {
        Format::Json => write_json(out, &rows),
        Format::Csv => {
            writeln!(out, "s,k,numerator,denominator")?;
            for r in rows {
                writeln!(out, "{},{},{},{}", r.s, r.k, r.numerator, r.denominator)?;
            }
            Ok(())
        }
    }
}

fn half_int_of(beta: f64) -> Result<HalfInt, Failure> {
    let twice = 2.0 * beta;
    if twice.fract() != 0.0 || twice.abs() > 1e6 {
        return Err(Failure::Usage(format!("--beta must be an integer or half-integer, got {beta}")));
    }
    Ok(HalfInt::from_twice(twice as i32))
}

#[allow(clippy::too_many_arguments)]
fn cmd_profile(
    out: &mut dyn Write,
    e: f64,
    c_list: Option<Vec<f64>>,
    k_list: Option<Vec<u32>>,
    beta: f64,
    tau_steps: usize,
    margin: f64,
    precision: usize,
    format: Format,
) -> Result<(), Failure> {
    if !(1..=17).contains(&precision) {
        return Err(Failure::Usage(format!("--precision must lie in 1..=17, got {precision}")));
    }
    if tau_steps == 0 {
        return Err(Failure::Usage("--tau-steps must be at least 1".into()));
    }
    if !(margin > 0.0 && margin < 1.0) {
        return Err(GeoError::Domain(format!("margin must lie in (0, 1), got {margin}")).into());
    }
    let cs = c_list.unwrap_or_else(|| DEFAULT_C_LIST.to_vec());
    let ks = k_list.unwrap_or_else(|| DEFAULT_K_LIST.to_vec());
    let rows: Vec<ProfileRow> = profile(e, &cs, &ks, half_int_of(beta)?, tau_steps, margin)?;
    match format {
        Format::Json => write_json(out, &rows),
        Format::Csv => {
            writeln!(out, "c,k,tau,value")?;
            let p = precision - 1;
            for r in rows {
                writeln!(out, "{},{},{:.*e},{:.*e}", r.c, r.k, p, r.tau, p, r.value)?;
            }
            Ok(())
        }
    }
}

fn oracle(out: &mut dyn Write, line: &LineArgs, c: f64, abs_tol: f64, rel_tol: f64) -> Result<(), Failure> {
    let ell = ellipsoid_of(line)?;
    let spec = spec_of(line, c);
    let q = Quadrature::new(abs_tol, rel_tol, Quadrature::default().max_subdivisions)?;
    let (l, le) = quad_longitude(&ell, &spec, &q)?;
    let (d, de) = quad_distance(&ell, &spec, &q)?;
    let o = OracleOutput {
        delta_lambda_rad: l,
        delta_lambda_deg: degrees_of(line, l),
        s: line.rho_e * d,
        delta_lambda_err: le,
        s_err: line.rho_e * de,
    };
    match line.format {
        Format::Json => write_json(out, &o),
        Format::Csv => {
            writeln!(out, "delta_lambda_rad,s,delta_lambda_err,s_err")?;
            writeln!(out, "{},{},{},{}", o.delta_lambda_rad, o.s, o.delta_lambda_err, o.s_err)?;
            Ok(())
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), Failure> {
    match cli.command {
        Command::Direct { line, c, check } => direct(out, &line, c, check),
        Command::Inverse {
            line,
            delta_lambda,
            tolerance,
            max_iter,
        } => inverse(out, &line, delta_lambda, tolerance, max_iter),
        Command::Kappa { smax, format } => kappa(out, smax, format),
        Command::Profile {
            e,
            c_list,
            k_list,
            beta,
            tau_steps,
            margin,
            precision,
            format,
        } => cmd_profile(out, e, c_list, k_list, beta, tau_steps, margin, precision, format),
        Command::Oracle {
            line,
            c,
            abs_tol,
            rel_tol,
        } => oracle(out, &line, c, abs_tol, rel_tol),
    }
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let sink: &mut dyn Write = if code == 0 { out } else { err };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(()) => EXIT_OK,
        Err(Failure::Geo(e)) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_domain() {
                EXIT_DOMAIN
            } else {
                EXIT_SOLVER
            }
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_DOMAIN
        }
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            1
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let mut full = vec!["geoline"];
        full.extend_from_slice(args);
        let code = run(full, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn kappa_rows() {
        let (code, out, _) = call(&["kappa", "--smax", "0"]);
        assert_eq!(code, 0);
        assert_eq!(out, "s,k,numerator,denominator\n0,0,1,1\n");
        let (_, out, _) = call(&["kappa", "--smax", "9"]);
        assert_eq!(out.lines().count(), 56);
        assert!(out.lines().any(|l| l == "8,4,35,128"));
    }

    #[test]
    fn surface_direct_has_one_term() {
        let (code, out, _) = call(&["direct", "--e", "0.08182", "--h", "0", "--c", "0.5", "--tau0", "0", "--tau1", "0.4"]);
        assert_eq!(code, 0);
        let v: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["terms"].as_array().unwrap().len(), 1);
        assert!(v.get("oracle_delta").is_none());
    }

    #[test]
    fn domain_violation_exits_with_two() {
        let (code, _, err) = call(&["direct", "--e", "0.08182", "--c", "0.5", "--tau1", "0.9"]);
        assert_eq!(code, EXIT_DOMAIN);
        assert!(err.contains("b (1 - margin)"));
        let (code, _, _) = call(&["direct", "--e", "0.08182", "--c", "0.5"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn unreachable_inverse_exits_with_three() {
        let (code, _, err) = call(&["inverse", "--e", "0.08182", "--tau1", "0.4", "--delta-lambda", "5"]);
        assert_eq!(code, EXIT_SOLVER);
        assert!(err.contains("no bracket"));
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = call(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("direct"));
    }

    #[test]
    fn profile_rejects_integer_like_garbage() {
        let (code, _, _) = call(&["profile", "--e", "0.08182", "--beta", "0.3"]);
        assert_eq!(code, EXIT_DOMAIN);
    }
}
