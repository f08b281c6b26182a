//! The `sdcm` command line.
//!
//! Exit codes: 0 on success, 1 when a validation or check fails (or a
//! computation is refused, for example on a negative coefficient), 2 on usage
//! and input errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sdcm_core::examples::{iterated_model, square_zero_model};
use sdcm_core::metric::{
    check_bounds, check_corollary_fixed, check_direct_edge, check_metric_axioms, check_trichotomy,
};
use sdcm_core::{
    base_change, build_dagger, check_dagger, check_fixed_points, check_isometry,
    cobase_change_model, curvature, metric, parse_series, render, BigInt, BigRational, CheckReport,
    Curvature, Error as CoreError, MetricSpace, SdcModel, Settings,
};

use crate::corpus;
use crate::format::{load_model, load_phi, model_json, FormatError};

#[derive(Parser, Debug)]
#[command(
    name = "sdcm",
    version,
    about = "Series-labeled models of semidualizing classes"
)]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    format: OutputFormat,
    /// Number of coefficients checked for nonnegativity (overrides SDCM_NCHECK).
    #[arg(long, global = true)]
    ncheck: Option<usize>,
    /// Maximum interval width for curvatures, as p/q or a decimal (overrides SDCM_EPS).
    #[arg(long, global = true)]
    eps: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum OutputFormat {
    Text,
    Json,
    Dot,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Suite {
    Metric,
    Edge,
    Bounds,
    Trichotomy,
    Fixed,
    Duality,
    All,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a model file against the model invariants.
    Validate { model: PathBuf },
    /// Curvature of a series expression.
    Curv {
        #[arg(allow_hyphen_values = true)]
        series: String,
    },
    /// Distance between two classes.
    Dist {
        model: PathBuf,
        k: String,
        l: String,
        /// Also print a shortest route.
        #[arg(long)]
        route: bool,
    },
    /// Classes at distance less than DELTA from K.
    Ball {
        model: PathBuf,
        k: String,
        delta: String,
    },
    /// All pairwise distances.
    Table { model: PathBuf },
    /// Graphviz rendering of the covering relations.
    Dot { model: PathBuf },
    /// Run theorem checks.
    Check {
        model: PathBuf,
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
    },
    /// Base change along a map.
    Basechange {
        model: PathBuf,
        phi: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Cobase change along a map (both families).
    Cobase {
        model: PathBuf,
        phi: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Emit an example model.
    Example {
        #[command(subcommand)]
        which: ExampleCommand,
    },
}

#[derive(Subcommand, Debug)]
enum ExampleCommand {
    /// The square-zero ring with embedding dimension R.
    Square0 {
        #[arg(long, value_parser = clap::value_parser!(i64).range(2..))]
        r: i64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// The iterated trivial extension.
    Iterated {
        #[arg(long, value_parser = clap::value_parser!(i64).range(2..))]
        r: i64,
        #[arg(long, value_parser = clap::value_parser!(i64).range(2..))]
        s: i64,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write the whole golden corpus into a directory.
    Corpus { dir: PathBuf },
}

enum Failure {
    /// Exit 1: a check failed or a computation was refused.
    Check(String),
    /// Exit 2: bad arguments or input.
    Usage(String),
}

impl From<FormatError> for Failure {
    fn from(e: FormatError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::Parse(_)
            | CoreError::UnknownClass(_)
            | CoreError::DuplicateClass(_)
            | CoreError::DivisionByZeroSeries => Failure::Usage(e.to_string()),
            _ => Failure::Check(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

/// Exact rational from `p/q`, an integer, or a decimal with optional exponent.
pub fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    if let Some((p, q)) = text.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q == BigInt::from(0) {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (mantissa, exp) = match text.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i32>().ok()?),
        None => (text, 0),
    };
    let (int_part, frac_part) = mantissa.split_once('.').unwrap_or((mantissa, ""));
    if frac_part.contains(['+', '-']) || (int_part.is_empty() && frac_part.is_empty()) {
        return None;
    }
    let digits: BigInt = format!("{int_part}{frac_part}").parse().ok()?;
    let scale = exp - frac_part.len() as i32;
    let ten = BigInt::from(10);
    Some(if scale >= 0 {
        BigRational::from_integer(digits * num_pow(&ten, scale as u32))
    } else {
        BigRational::new(digits, num_pow(&ten, (-scale) as u32))
    })
}

fn num_pow(b: &BigInt, e: u32) -> BigInt {
    (0..e).fold(BigInt::from(1), |acc, _| acc * b)
}

fn settings(cli: &Cli, env: &dyn Fn(&str) -> Option<String>) -> Result<Settings, Failure> {
    let mut s = Settings::default();
    let ncheck = match &cli.ncheck {
        Some(n) => Some(*n),
        None => match env("SDCM_NCHECK") {
            Some(v) => Some(
                v.trim()
                    .parse()
                    .map_err(|_| Failure::Usage(format!("SDCM_NCHECK: not a count: {v}")))?,
            ),
            None => None,
        },
    };
    if let Some(n) = ncheck {
        if n == 0 {
            return Err(Failure::Usage("n_check must be positive".into()));
        }
        s.n_check = n;
    }
    let eps = match &cli.eps {
        Some(e) => Some(("--eps", e.clone())),
        None => env("SDCM_EPS").map(|e| ("SDCM_EPS", e)),
    };
    if let Some((source, e)) = eps {
        let v = parse_rational(&e)
            .filter(|v| *v > BigRational::from_integer(BigInt::from(0)))
            .ok_or_else(|| Failure::Usage(format!("{source}: not a positive number: {e}")))?;
        s.eps = v;
    }
    Ok(s)
}

fn curvature_json(c: &Curvature) -> Value {
    match c {
        Curvature::Exact(v) => json!({ "exact": true, "value": v.to_string() }),
        Curvature::Interval { lo, hi } => json!({
            "exact": false,
            "value": c.to_string(),
            "lo": lo.to_string(),
            "hi": hi.to_string(),
        }),
    }
}

fn report_json(r: &CheckReport) -> Value {
    json!({ "check": r.check, "pass": r.pass, "witnesses": r.witnesses })
}

fn emit_json(out: &mut dyn Write, mut v: Value) -> std::io::Result<()> {
    if let Value::Object(map) = &mut v {
        map.insert("schema".into(), json!(1));
    }
    writeln!(
        out,
        "{}",
        serde_json::to_string_pretty(&v).expect("serializable")
    )
}

fn write_or_print(out: &mut dyn Write, path: Option<&Path>, text: &str) -> Result<(), Failure> {
    match path {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Usage(format!("{}: {e}", p.display()))),
        None => Ok(out.write_all(text.as_bytes())?),
    }
}

fn suite_reports(model: &SdcModel, suite: Suite) -> Vec<CheckReport> {
    let mut reports: Vec<CheckReport> = model.validate().entries;
    let want = |s: Suite| suite == Suite::All || suite == s;
    if want(Suite::Metric) {
        reports.push(check_metric_axioms(model));
    }
    if want(Suite::Edge) {
        reports.push(check_direct_edge(model));
    }
    if want(Suite::Bounds) {
        reports.push(check_bounds(model));
    }
    if want(Suite::Trichotomy) {
        reports.push(check_trichotomy(model));
    }
    if want(Suite::Fixed) {
        reports.push(check_corollary_fixed(model));
    }
    if want(Suite::Duality) {
        let available = model.dualizing().is_some() && model.ring_bass().is_some();
        if suite == Suite::All && !available {
            let mut r = CheckReport::new("duality");
            r.note("skipped: needs a dualizing class and a ring Bass series");
            reports.push(r);
        } else {
            match build_dagger(model) {
                Ok(d) => {
                    let mut r = CheckReport::new("dagger");
                    for (a, b) in d.pairs() {
                        r.note(format!("{a} <-> {b}"));
                    }
                    reports.push(r);
                    reports.push(check_dagger(model, &d));
                    reports.push(check_isometry(model, &d));
                    reports.push(check_fixed_points(model, &d));
                }
                Err(e) => {
                    let mut r = CheckReport::new("dagger");
                    r.fail(e.to_string());
                    reports.push(r);
                }
            }
        }
    }
    reports
}

fn table_text(space: &MetricSpace) -> String {
    let n = space.len();
    let cells: Vec<Vec<String>> = (0..n)
        .map(|i| (0..n).map(|j| space.distance(i, j).to_string()).collect())
        .collect();
    let first = (0..n).map(|i| space.id(i).len()).max().unwrap_or(0);
    let widths: Vec<usize> = (0..n)
        .map(|j| {
            cells
                .iter()
                .map(|row| row[j].len())
                .chain([space.id(j).len()])
                .max()
                .unwrap_or(0)
        })
        .collect();
    let mut out = format!("{:first$}", "");
    for (j, w) in widths.iter().enumerate() {
        out.push_str(&format!("  {:>w$}", space.id(j)));
    }
    out.push('\n');
    for (i, row) in cells.iter().enumerate() {
        out.push_str(&format!("{:first$}", space.id(i)));
        for (cell, w) in row.iter().zip(&widths) {
            out.push_str(&format!("  {cell:>w$}"));
        }
        out.push('\n');
    }
    out
}

fn execute(cli: &Cli, s: Settings, out: &mut dyn Write) -> Result<(), Failure> {
    let json = cli.format == OutputFormat::Json;
    if cli.format == OutputFormat::Dot && !matches!(cli.command, Command::Dot { .. }) {
        return Err(Failure::Usage(
            "--format dot applies only to the dot subcommand".into(),
        ));
    }
    match &cli.command {
        Command::Validate { model } => {
            let m = load_model(model, s)?;
            let report = m.validate();
            if json {
                let entries: Vec<Value> = report.entries.iter().map(report_json).collect();
                emit_json(
                    out,
                    json!({ "model": m.name(), "valid": report.is_valid(), "entries": entries }),
                )?;
            } else {
                write!(out, "{report}")?;
            }
            if !report.is_valid() {
                return Err(Failure::Check(format!("model {} is invalid", m.name())));
            }
        }
        Command::Curv { series } => {
            let a = parse_series(series)?;
            let c = curvature(&a, &s)?;
            if json {
                emit_json(
                    out,
                    json!({ "series": render(&a), "curvature": curvature_json(&c) }),
                )?;
            } else {
                writeln!(out, "{c}")?;
            }
        }
        Command::Dist { model, k, l, route } => {
            let m = load_model(model, s)?;
            let (i, j) = (m.index_of(k)?, m.index_of(l)?);
            let space = MetricSpace::new(&m)?;
            let d = space.distance(i, j);
            let path = route.then(|| space.shortest_route(&m, i, j));
            if json {
                let mut v =
                    json!({ "model": m.name(), "from": k, "to": l, "distance": curvature_json(d) });
                if let Some(p) = &path {
                    v["route"] = json!(p.vertices());
                }
                emit_json(out, v)?;
            } else {
                writeln!(out, "{d}")?;
                if let Some(p) = &path {
                    writeln!(out, "route: {}", p.vertices().join(" "))?;
                }
            }
        }
        Command::Ball { model, k, delta } => {
            let m = load_model(model, s)?;
            let delta = parse_rational(delta)
                .filter(|d| *d > BigRational::from_integer(BigInt::from(0)))
                .ok_or_else(|| {
                    Failure::Usage(format!("radius must be a positive number: {delta}"))
                })?;
            let members = metric::ball(&m, k, &delta)?;
            if json {
                emit_json(
                    out,
                    json!({ "model": m.name(), "center": k, "radius": delta.to_string(), "members": members }),
                )?;
            } else {
                writeln!(out, "{}", members.join(" "))?;
            }
        }
        Command::Table { model } => {
            let m = load_model(model, s)?;
            let space = MetricSpace::new(&m)?;
            if json {
                let ids: Vec<&str> = (0..space.len()).map(|i| space.id(i)).collect();
                let rows: Vec<Vec<String>> = space
                    .table()
                    .iter()
                    .map(|row| row.iter().map(ToString::to_string).collect())
                    .collect();
                emit_json(
                    out,
                    json!({ "model": m.name(), "ids": ids, "distances": rows, "diameter": space.diameter().to_string() }),
                )?;
            } else {
                write!(out, "{}", table_text(&space))?;
            }
        }
        Command::Dot { model } => {
            let m = load_model(model, s)?;
            let dot = metric::emit_dot(&m)?;
            if json {
                emit_json(out, json!({ "model": m.name(), "dot": dot }))?;
            } else {
                write!(out, "{dot}")?;
            }
        }
        Command::Check { model, suite } => {
            let m = load_model(model, s)?;
            let reports = suite_reports(&m, *suite);
            let pass = reports.iter().all(|r| r.pass);
            if json {
                let rs: Vec<Value> = reports.iter().map(report_json).collect();
                emit_json(
                    out,
                    json!({ "model": m.name(), "pass": pass, "reports": rs }),
                )?;
            } else {
                for r in &reports {
                    writeln!(out, "{r}")?;
                }
                writeln!(out, "overall: {}", if pass { "pass" } else { "FAIL" })?;
            }
            if !pass {
                return Err(Failure::Check(format!("checks failed on {}", m.name())));
            }
        }
        Command::Basechange { model, phi, output } => {
            let m = load_model(model, s)?;
            let p = load_phi(phi)?;
            let image = base_change(&m, &p)?;
            write_or_print(out, output.as_deref(), &model_json(&image))?;
        }
        Command::Cobase { model, phi, output } => {
            let m = load_model(model, s)?;
            let p = load_phi(phi)?;
            let image = cobase_change_model(&m, &p)?;
            write_or_print(out, output.as_deref(), &model_json(&image.model))?;
        }
        Command::Example { which } => match which {
            ExampleCommand::Square0 { r, output } => {
                write_or_print(out, output.as_deref(), &model_json(&square_zero_model(*r)))?;
            }
            ExampleCommand::Iterated { r, s: s_, output } => {
                write_or_print(
                    out,
                    output.as_deref(),
                    &model_json(&iterated_model(*r, *s_)),
                )?;
            }
            ExampleCommand::Corpus { dir } => {
                fs::create_dir_all(dir)
                    .map_err(|e| Failure::Usage(format!("{}: {e}", dir.display())))?;
                for (name, text) in corpus::files() {
                    write_or_print(out, Some(&dir.join(name)), &text)?;
                }
            }
        },
    }
    Ok(())
}

/// Runs the command line with an explicit environment lookup.
pub fn run_with_env<I, T>(
    args: I,
    env: &dyn Fn(&str) -> Option<String>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            if code == 0 {
                let _ = out.write_all(text.as_bytes());
            } else {
                let _ = err.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = settings(&cli, env).and_then(|s| execute(&cli, s, out));
    match result {
        Ok(()) => 0,
        Err(Failure::Check(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            1
        }
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            2
        }
    }
}

/// Runs the command line against the process environment.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with_env(args, &|k| std::env::var(k).ok(), out, err)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rationals_parse_exactly() {
        assert_eq!(parse_rational("1/3"), Some(q(1, 3)));
        assert_eq!(parse_rational("1e-9"), Some(q(1, 1_000_000_000)));
        assert_eq!(parse_rational("2.5"), Some(q(5, 2)));
        assert_eq!(parse_rational("0.000001"), Some(q(1, 1_000_000)));
        assert_eq!(parse_rational("3"), Some(q(3, 1)));
        assert_eq!(parse_rational("1.5E2"), Some(q(150, 1)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("abc"), None);
        assert_eq!(parse_rational("."), None);
    }
}
