mod config;
mod error;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use qdephase::analysis::CorrelationSlot;
use qdephase::bath::NormOffset;
use qdephase::validation::{run_validation, ValidationOptions};
use qdephase::{
    distance_series, region_map, AxisRange, DistanceConvention, GridKind, Param, RegionRequest,
};

use crate::config::{parse_backend, parse_grid_kind, ScenarioConfig};
use crate::error::{CliError, CliResult};

/// Trace-distance dynamics of a dephasing qubit with a correlated environment.
#[derive(Debug, Parser)]
#[command(name = "qdephase", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Distance time series as CSV.
    Evolve(EvolveArgs),
    /// Gain/loss classification over a parameter plane as JSON.
    Region(RegionArgs),
    /// Critical correlation separating gain from loss as JSON.
    Critical(CriticalArgs),
    /// Built-in self-validation suites.
    Validate(ValidateArgs),
}

#[derive(Debug, Args)]
struct ConfigArg {
    /// Scenario file in key = value format.
    #[arg(long, value_name = "PATH")]
    config: PathBuf,
}

#[derive(Debug, Args)]
struct EvolveArgs {
    #[command(flatten)]
    config: ConfigArg,
    #[arg(long)]
    t_max: Option<f64>,
    #[arg(long)]
    points: Option<usize>,
    /// linear or log
    #[arg(long)]
    grid: Option<String>,
    /// closed or quad
    #[arg(long)]
    backend: Option<String>,
    /// Report D / |b₊b₋*| instead of the raw distance.
    #[arg(long)]
    normalized: bool,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RegionArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// Two parameter names, e.g. alpha,lambda1
    #[arg(long, value_name = "X,Y")]
    plane: String,
    #[arg(long, value_name = "LO:HI:N", allow_hyphen_values = true)]
    x_range: String,
    #[arg(long, value_name = "LO:HI:N", allow_hyphen_values = true)]
    y_range: String,
    /// Bisect gain/loss crossings to this resolution.
    #[arg(long, value_name = "RES", num_args = 0..=1, default_missing_value = "1e-4")]
    refine_boundary: Option<f64>,
    #[arg(long, default_value_t = 1e-9)]
    tie_tol: f64,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CriticalArgs {
    #[command(flatten)]
    config: ConfigArg,
    /// lambda1 or lambda2
    #[arg(long, default_value = "lambda1")]
    vary: String,
    #[arg(
        long,
        value_name = "LO:HI",
        default_value = "0:1",
        allow_hyphen_values = true
    )]
    bracket: String,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[arg(long, default_value_t = 100)]
    samples: usize,
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Use the doubled normalization constant in s(t); expected to fail.
    #[arg(long, hide = true)]
    doubled_s_constant: bool,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let result = match cli.command {
        Command::Evolve(a) => evolve(a),
        Command::Region(a) => region(a),
        Command::Critical(a) => critical(a),
        Command::Validate(a) => validate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn parse_f64(s: &str, what: &str) -> CliResult<f64> {
    s.trim()
        .parse()
        .map_err(|_| usage(format!("{what}: '{s}' is not a number")))
}

fn parse_range(s: &str, flag: &str) -> CliResult<AxisRange> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, n] = parts.as_slice() else {
        return Err(usage(format!("{flag}: expected lo:hi:n, got '{s}'")));
    };
    let n = n
        .trim()
        .parse()
        .map_err(|_| usage(format!("{flag}: '{n}' is not a point count")))?;
    Ok(AxisRange::new(
        parse_f64(lo, flag)?,
        parse_f64(hi, flag)?,
        n,
    )?)
}

fn parse_bracket(s: &str) -> CliResult<(f64, f64)> {
    match s.split_once(':') {
        Some((lo, hi)) => Ok((parse_f64(lo, "--bracket")?, parse_f64(hi, "--bracket")?)),
        None => Err(usage(format!("--bracket: expected lo:hi, got '{s}'"))),
    }
}

fn write_output(out: Option<&Path>, body: &str) -> CliResult<()> {
    match out {
        Some(path) => std::fs::write(path, body).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(body.as_bytes())
                .and_then(|_| stdout.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn to_json(value: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("JSON serialization of plain data");
    s.push('\n');
    s
}

fn evolve(a: EvolveArgs) -> CliResult<()> {
    let mut cfg: ScenarioConfig = config::load(&a.config.config)?;
    if let Some(kind) = a.grid.as_deref() {
        let kind = parse_grid_kind(kind)
            .ok_or_else(|| usage(format!("--grid: expected linear or log, got '{kind}'")))?;
        if kind != cfg.grid.kind && kind == GridKind::Linear {
            cfg.grid.t_min = 0.0;
        }
        cfg.grid.kind = kind;
    }
    if let Some(t) = a.t_max {
        cfg.grid.t_max = t;
    }
    if let Some(n) = a.points {
        cfg.grid.points = n;
    }
    if let Some(b) = a.backend.as_deref() {
        cfg.backend = parse_backend(b)
            .ok_or_else(|| usage(format!("--backend: expected closed or quad, got '{b}'")))?;
    }
    let convention = if a.normalized || cfg.normalized {
        DistanceConvention::Normalized
    } else {
        DistanceConvention::Raw
    };
    let series = distance_series(
        &cfg.scenario,
        &cfg.grid,
        cfg.backend,
        &cfg.settings,
        convention,
    )?;

    let mut csv = String::from("t,distance,abs_A1,abs_A2,r,s,phi\n");
    for p in &series.points {
        csv.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            p.t, p.distance, p.abs_a1, p.abs_a2, p.r, p.s, p.phi
        ));
    }
    write_output(a.out.as_deref().or(cfg.out.as_deref()), &csv)
}

fn region(a: RegionArgs) -> CliResult<()> {
    let cfg = config::load(&a.config.config)?;
    let (x, y) = a
        .plane
        .split_once(',')
        .ok_or_else(|| usage(format!("--plane: expected X,Y, got '{}'", a.plane)))?;
    let x: Param = x.trim().parse()?;
    let y: Param = y.trim().parse()?;
    let mut req = RegionRequest::new(
        x,
        parse_range(&a.x_range, "--x-range")?,
        y,
        parse_range(&a.y_range, "--y-range")?,
    );
    req.tie_tol = a.tie_tol;
    req.refine = a.refine_boundary;
    let map = region_map(&cfg.scenario, &req)?;
    let doc = json!({
        "axes": { "x": map.x, "y": map.y },
        "labels": map.labels,
        "gain_ratio": map.gain_ratio,
        "boundary": map.boundary,
    });
    write_output(a.out.as_deref().or(cfg.out.as_deref()), &to_json(&doc))
}

fn critical(a: CriticalArgs) -> CliResult<()> {
    let cfg = config::load(&a.config.config)?;
    let (vary, fixed) = match a.vary.as_str() {
        "lambda1" => (CorrelationSlot::Lambda1, cfg.scenario.lambda2),
        "lambda2" => (CorrelationSlot::Lambda2, cfg.scenario.lambda1),
        other => {
            return Err(usage(format!(
                "--vary: expected lambda1 or lambda2, got '{other}'"
            )))
        }
    };
    let bracket = parse_bracket(&a.bracket)?;
    match qdephase::analysis::find_critical_correlation(
        &cfg.scenario.model,
        vary,
        fixed,
        bracket,
        a.tol,
    ) {
        Ok(c) => write_output(
            None,
            &to_json(&json!({
                "status": "ok",
                "lambda_c": c.lambda_c,
                "ratio_lo": c.ratio_lo,
                "ratio_hi": c.ratio_hi,
                "iterations": c.iterations,
            })),
        ),
        Err(e @ qdephase::Error::NoBracket { ratio_lo, ratio_hi }) => {
            write_output(
                None,
                &to_json(&json!({
                    "status": "no-bracket",
                    "lambda_c": null,
                    "ratio_lo": ratio_lo,
                    "ratio_hi": ratio_hi,
                })),
            )?;
            Err(e.into())
        }
        Err(e) => Err(e.into()),
    }
}

fn validate(a: ValidateArgs) -> CliResult<()> {
    if a.samples == 0 {
        return Err(usage("--samples must be at least 1"));
    }
    if a.tol.is_nan() || a.tol <= 0.0 {
        return Err(usage(format!("--tol must be positive, got {}", a.tol)));
    }
    let opts = ValidationOptions {
        samples: a.samples,
        tol: a.tol,
        seed: a.seed,
        norm_offset: if a.doubled_s_constant {
            NormOffset::Full
        } else {
            NormOffset::Half
        },
        ..Default::default()
    };
    let report = run_validation(&opts)?;
    let mut text = String::new();
    for s in &report.suites {
        text.push_str(&format!(
            "{:<22} {} {:>5}/{:<5} worst {:.3e}\n",
            s.name,
            if s.ok() { "PASS" } else { "FAIL" },
            s.passed,
            s.total,
            s.worst
        ));
    }
    write_output(None, &text)?;
    if report.all_passed() {
        Ok(())
    } else {
        Err(CliError::ValidationFailed)
    }
}
