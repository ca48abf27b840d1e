//! `geopoly`: tables, polynomials, numeric series checks and identity
//! verification, with JSON output.
//!
//! Exit codes: 0 success, 1 a check did not hold, 2 invalid input.

use std::fs;
use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};

use geopoly_core::analytic::{
    eval_dobinski_numeric, eval_eq30_family, eval_theorem5, eval_trig_series, EvalConfig,
    StartIndex, TrigKind,
};
use geopoly_core::exact::{format_rational, parse_rational};
use geopoly_core::families::{exp_poly, geometric_poly};
use geopoly_core::report::Status;
use geopoly_core::suite::{run_all, run_with, Profile, RunOptions};
use geopoly_core::{build_table, CheckReport, Execution, HsuShiueParams, IdentityId, Rational};

fn rational(text: &str) -> Result<Rational, String> {
    parse_rational(text).map_err(|e| e.to_string())
}

#[derive(Parser)]
#[command(
    name = "geopoly",
    version,
    about = "Generalized Stirling numbers, higher order geometric polynomials and identity checks"
)]
struct Cli {
    /// Omit the timing field so identical invocations print identical bytes.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args)]
struct ParamArgs {
    #[arg(long, default_value = "0", value_parser = rational, allow_hyphen_values = true)]
    alpha: Rational,
    #[arg(long, default_value = "1", value_parser = rational, allow_hyphen_values = true)]
    beta: Rational,
    #[arg(long, default_value = "0", value_parser = rational, allow_hyphen_values = true)]
    r: Rational,
}

impl ParamArgs {
    fn params(&self) -> Result<HsuShiueParams, String> {
        HsuShiueParams::new(self.alpha.clone(), self.beta.clone(), self.r.clone())
            .map_err(|e| e.to_string())
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Family {
    /// Generalized exponential polynomial `S_n(x)`.
    Exp,
    /// Higher order generalized geometric polynomial `w_n^(m)(x)`.
    Geom,
}

#[derive(Clone, Copy, ValueEnum)]
enum SeriesId {
    /// Zeta-weighted generalized factorial series.
    #[value(name = "theorem5")]
    ZetaWeighted,
    /// `sum_k zeta(k) k^n / 2^k`.
    Zeta2k,
    /// Cosine-type series.
    #[value(name = "eq17")]
    Cosine,
    /// Sine-type series.
    #[value(name = "eq18")]
    Sine,
    Dobinski,
}

#[derive(Clone, Copy, ValueEnum)]
enum Start {
    DerivedJ0,
    PaperJ1,
}

#[derive(Subcommand)]
enum Command {
    /// Triangular table of generalized Stirling numbers S(n, k; alpha, beta, r).
    Stirling {
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long)]
        nmax: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Write to this file instead of standard output.
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Coefficients of a polynomial family, or its exact value at a point.
    Poly {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long)]
        n: usize,
        /// Order of the geometric polynomial; any integer.
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        order_m: i64,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        at: Option<Rational>,
    },
    /// High-precision check of an infinite-series identity.
    Series {
        #[arg(long, value_enum)]
        id: SeriesId,
        #[arg(long)]
        n: usize,
        #[arg(long, value_parser = rational, allow_hyphen_values = true)]
        x: Option<Rational>,
        #[command(flatten)]
        params: ParamArgs,
        #[arg(long, env = "GEOPOLY_BITS", default_value_t = 256)]
        bits: u32,
        /// First Stirling index of the trigonometric series.
        #[arg(long, value_enum, default_value = "derived-j0")]
        start_index: Start,
    },
    /// Run registered identity checks.
    Verify {
        /// Identity id, or `all`.
        #[arg(long)]
        id: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Samples per identity; defaults to the profile's count.
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value = "quick")]
        profile: String,
        /// Disable the thread pool.
        #[arg(long)]
        sequential: bool,
    },
}

/// Result of a command before serialization.
struct Output {
    command: &'static str,
    params: Map<String, Value>,
    result: Value,
    status: String,
    exit: u8,
    /// Replaces the JSON document (CSV tables).
    raw: Option<String>,
    out: Option<std::path::PathBuf>,
}

impl Output {
    fn ok(command: &'static str, params: Map<String, Value>, result: Value) -> Self {
        Output {
            command,
            params,
            result,
            status: "ok".into(),
            exit: 0,
            raw: None,
            out: None,
        }
    }
}

fn param_map(params: &HsuShiueParams) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("alpha".into(), json!(format_rational(params.alpha())));
    m.insert("beta".into(), json!(format_rational(params.beta())));
    m.insert("r".into(), json!(format_rational(params.r())));
    m
}

fn strings(values: &[Rational]) -> Vec<String> {
    values.iter().map(format_rational).collect()
}

fn stirling(
    params: &ParamArgs,
    nmax: usize,
    format: Format,
    out: Option<std::path::PathBuf>,
) -> Result<Output, String> {
    let p = params.params()?;
    let table = build_table(&p, nmax);
    let rows: Vec<Vec<String>> = (0..=nmax).map(|n| strings(table.row(n))).collect();
    let mut m = param_map(&p);
    m.insert("nmax".into(), json!(nmax));
    let mut output = Output::ok("stirling", m, json!({ "rows": rows }));
    if let Format::Csv = format {
        let mut csv = String::from("n,k,value\n");
        for (n, row) in rows.iter().enumerate() {
            for (k, v) in row.iter().enumerate() {
                csv.push_str(&format!("{n},{k},{v}\n"));
            }
        }
        output.raw = Some(csv);
    }
    output.out = out;
    Ok(output)
}

fn poly(
    family: Family,
    n: usize,
    order_m: i64,
    params: &ParamArgs,
    at: Option<&Rational>,
) -> Result<Output, String> {
    let p = params.params()?;
    let (name, poly) = match family {
        Family::Exp => ("exp", exp_poly(n, &p)),
        Family::Geom => ("geom", geometric_poly(n, order_m, &p)),
    };
    let mut m = param_map(&p);
    m.insert("family".into(), json!(name));
    m.insert("n".into(), json!(n));
    if let Family::Geom = family {
        m.insert("order_m".into(), json!(order_m));
    }
    let mut result = Map::new();
    result.insert("coefficients".into(), json!(strings(poly.coeffs())));
    if let Some(x) = at {
        m.insert("at".into(), json!(format_rational(x)));
        result.insert("value".into(), json!(format_rational(&poly.eval(x))));
    }
    Ok(Output::ok("poly", m, Value::Object(result)))
}

fn status_name(status: Status) -> String {
    serde_json::to_value(status)
        .ok()
        .and_then(|v| v.as_str().map(str::to_string))
        .unwrap_or_default()
}

fn series(
    id: SeriesId,
    n: usize,
    x: Option<&Rational>,
    params: &ParamArgs,
    bits: u32,
    start: Start,
) -> Result<Output, String> {
    if !(64..=1 << 16).contains(&bits) {
        return Err(format!("--bits must lie in 64..=65536, got {bits}"));
    }
    let cfg = EvalConfig::new(bits);
    let need_x = || x.ok_or_else(|| "--x is required for this series".to_string());
    let start_index = match start {
        Start::DerivedJ0 => StartIndex::DerivedJ0,
        Start::PaperJ1 => StartIndex::PaperJ1,
    };
    let mut m = Map::new();
    let report = match id {
        SeriesId::Zeta2k => eval_eq30_family(n, &cfg),
        SeriesId::ZetaWeighted => {
            let p = params.params()?;
            m = param_map(&p);
            eval_theorem5(&p, n, need_x()?, &cfg)
        }
        SeriesId::Dobinski => {
            let p = params.params()?;
            m = param_map(&p);
            eval_dobinski_numeric(n, &p, need_x()?, &cfg)
        }
        SeriesId::Cosine | SeriesId::Sine => {
            let p = params.params()?;
            m = param_map(&p);
            let kind = if matches!(id, SeriesId::Cosine) {
                TrigKind::Cosine
            } else {
                TrigKind::Sine
            };
            m.insert(
                "start_index".into(),
                serde_json::to_value(start_index).unwrap_or(Value::Null),
            );
            eval_trig_series(n, &p, &cfg, start_index, kind)
        }
    }
    .map_err(|e| e.to_string())?;
    let name = serde_json::to_value(id_name(id)).unwrap_or(Value::Null);
    m.insert("id".into(), name);
    m.insert("n".into(), json!(n));
    if let Some(x) = x {
        m.insert("x".into(), json!(format_rational(x)));
    }
    m.insert("bits".into(), json!(bits));
    let mut result = serde_json::to_value(&report.witness).unwrap_or(Value::Null);
    if let Value::Object(obj) = &mut result {
        obj.remove("kind");
        obj.insert(
            "tolerance".into(),
            serde_json::to_value(&report.tolerance).unwrap_or(Value::Null),
        );
        obj.insert("pass".into(), json!(report.passed()));
        obj.insert("identity".into(), json!(report.id.name()));
        obj.insert("terms".into(), json!(report.params.get("terms")));
    }
    let exit = if report.passed() { 0 } else { 1 };
    Ok(Output {
        command: "series",
        params: m,
        result,
        status: status_name(report.status),
        exit,
        raw: None,
        out: None,
    })
}

fn id_name(id: SeriesId) -> &'static str {
    match id {
        SeriesId::ZetaWeighted => "theorem5",
        SeriesId::Zeta2k => "zeta2k",
        SeriesId::Cosine => "eq17",
        SeriesId::Sine => "eq18",
        SeriesId::Dobinski => "dobinski",
    }
}

fn verify(
    id: &str,
    seed: u64,
    samples: Option<usize>,
    profile: &str,
    sequential: bool,
) -> Result<Output, String> {
    let profile: Profile = profile
        .parse()
        .map_err(|e: geopoly_core::Error| e.to_string())?;
    let execution = if sequential {
        Execution::Sequential
    } else {
        Execution::Parallel
    };
    let mut m = Map::new();
    m.insert("id".into(), json!(id));
    m.insert("seed".into(), json!(seed));
    m.insert("profile".into(), json!(profile.to_string()));
    if id.eq_ignore_ascii_case("all") {
        if let Some(s) = samples {
            return Err(format!(
                "--samples {s} applies to a single id; profiles fix the count for `all`"
            ));
        }
        let summary = run_all(seed, profile, execution);
        let exit = if summary.is_clean() { 0 } else { 1 };
        let status = if summary.is_clean() { "pass" } else { "fail" };
        let mut out = Output::ok(
            "verify",
            m,
            serde_json::to_value(&summary).map_err(|e| e.to_string())?,
        );
        out.status = status.into();
        out.exit = exit;
        return Ok(out);
    }
    let identity: IdentityId = id.parse().map_err(|e: geopoly_core::Error| e.to_string())?;
    let samples = samples.unwrap_or_else(|| profile.samples(identity));
    m.insert("samples".into(), json!(samples));
    let opts = RunOptions {
        execution,
        ..RunOptions::default()
    };
    let reports: Vec<CheckReport> =
        run_with(identity, seed, samples, &opts).map_err(|e| e.to_string())?;
    let unexpected = reports.iter().find(|r| r.status.is_unexpected());
    let status = match unexpected {
        Some(r) => r.status,
        None if identity.expected_fail() => Status::ExpectedFailConfirmed,
        None => Status::Pass,
    };
    let mut out = Output::ok("verify", m, json!({ "reports": reports }));
    out.status = status_name(status);
    out.exit = if unexpected.is_some() { 1 } else { 0 };
    Ok(out)
}

fn emit(output: Output, timing_ms: Option<f64>) -> Result<(), String> {
    let text = match output.raw {
        Some(raw) => raw,
        None => {
            let mut doc = Map::new();
            doc.insert("command".into(), json!(output.command));
            doc.insert("params".into(), Value::Object(output.params));
            doc.insert("result".into(), output.result);
            doc.insert("status".into(), json!(output.status));
            if let Some(ms) = timing_ms {
                doc.insert("timing_ms".into(), json!((ms * 1000.0).round() / 1000.0));
            }
            let mut s =
                serde_json::to_string_pretty(&Value::Object(doc)).map_err(|e| e.to_string())?;
            s.push('\n');
            s
        }
    };
    match output.out {
        Some(path) => fs::write(&path, text).map_err(|e| format!("{}: {e}", path.display())),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| e.to_string()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    let output = match &cli.command {
        Command::Stirling {
            params,
            nmax,
            format,
            out,
        } => stirling(params, *nmax, *format, out.clone()),
        Command::Poly {
            family,
            n,
            order_m,
            params,
            at,
        } => poly(*family, *n, *order_m, params, at.as_ref()),
        Command::Series {
            id,
            n,
            x,
            params,
            bits,
            start_index,
        } => series(*id, *n, x.as_ref(), params, *bits, *start_index),
        Command::Verify {
            id,
            seed,
            samples,
            profile,
            sequential,
        } => verify(id, *seed, *samples, profile, *sequential),
    };
    let elapsed = start.elapsed().as_secs_f64() * 1000.0;
    let output = match output {
        Ok(o) => o,
        Err(msg) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let exit = output.exit;
    if let Err(msg) = emit(output, (!cli.no_timing).then_some(elapsed)) {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    ExitCode::from(exit)
}
