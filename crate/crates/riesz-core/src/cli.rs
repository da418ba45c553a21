//! Command line front end for the `riesz` binary.
//!
//! Every subcommand resolves its settings in the same order: built-in
//! defaults, then a flat `key = value` config file given with
//! `--config`, then explicit flags. Reports go to stdout as short
//! human-readable tables; `--out` additionally writes a CSV file (or,
//! with `--json`, a JSON envelope carrying config, records, summary,
//! and versions). File writes go through a temp file and rename so a
//! crash never leaves a half-written report.
//!
//! Exit codes: 0 on success, 2 for configuration problems (unknown
//! keys, unparsable values, impossible parameter combinations), 3 for
//! numeric failures during an otherwise well-formed run.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::error::Error;
use crate::experiments::{self, ExperimentConfig};
use crate::frequency::DEFAULT_MAX_TERMS;
use crate::perron;

/// Entry point: parse `args` (including the program name), run the
/// requested subcommand, and return the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    if let Ok(raw) = std::env::var("RIESZ_THREADS") {
        match raw.trim().parse::<usize>() {
            Ok(n) if n >= 1 => {
                // Errors only mean a pool already exists (tests call
                // run() repeatedly in one process); keep that pool.
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                eprintln!("config error: RIESZ_THREADS must be a positive integer, got `{raw}`");
                return 2;
            }
        }
    }
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            let code = match e {
                Error::Domain { .. } | Error::UnknownTarget { .. } => 2,
                _ => 3,
            };
            eprintln!("{}: {e}", if code == 2 { "config error" } else { "numeric failure" });
            code
        }
    }
}

#[derive(Parser)]
#[command(
    name = "riesz",
    version,
    about = "Riesz means of general Dirichlet series and their boundary behavior"
)]
struct Cli {
    /// Flat key = value config file; explicit flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one Riesz mean by direct summation.
    RieszMean(RieszMeanArgs),
    /// Compare the direct mean against the integral-representation routes.
    PerronCheck(PerronCheckArgs),
    /// Check the kernel's unit Fourier normalization.
    KernelCheck(KernelCheckArgs),
    /// Measure smoothed-kernel mass outside a central interval.
    TailMass(TailMassArgs),
    /// Sweep Riesz means along a boundary segment against references.
    BoundarySweep(BoundarySweepArgs),
    /// Dini-type local integrability probe at one boundary point.
    Dini(DiniArgs),
    /// Localization tails of the smoothed-kernel representation.
    Localize(LocalizeArgs),
    /// Monte-Carlo vertical limits over random characters.
    VerticalMc(VerticalMcArgs),
}

/// Flags shared by every subcommand that reads an `ExperimentConfig`.
/// All optional: anything left out falls back to the config file and
/// then the library defaults.
#[derive(Args, Clone, Default)]
struct CommonArgs {
    /// Built-in target: const1, zeta-line, eta, taylor-l2.
    #[arg(long, visible_alias = "series", value_name = "NAME")]
    target: Option<String>,
    /// Inline frequencies, comma separated (requires --coeffs).
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    freqs: Option<String>,
    /// Inline coefficients like 0.4+0.1i, comma separated.
    #[arg(long, value_name = "LIST", allow_hyphen_values = true)]
    coeffs: Option<String>,
    /// Riesz smoothing order k.
    #[arg(long, allow_hyphen_values = true)]
    k: Option<f64>,
    /// Growth order ell of the weight (1 + iy)^-ell.
    #[arg(long, allow_hyphen_values = true)]
    ell: Option<f64>,
    /// Cutoff heights, comma separated or a:b:n.
    #[arg(long = "x", value_name = "LIST", allow_hyphen_values = true)]
    xs: Option<String>,
    /// Interval half-width / tail radius, depending on the command.
    #[arg(long, allow_hyphen_values = true)]
    delta: Option<f64>,
    /// Seed for randomized runs.
    #[arg(long)]
    seed: Option<u64>,
    /// Absolute quadrature tolerance.
    #[arg(long)]
    abs_tol: Option<f64>,
    /// Relative quadrature tolerance.
    #[arg(long)]
    rel_tol: Option<f64>,
    /// Adaptive bisection depth limit.
    #[arg(long)]
    max_depth: Option<u32>,
    /// Cap on real-line integration half-windows.
    #[arg(long)]
    max_window: Option<f64>,
    /// Write the report to this file.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Write a JSON envelope instead of CSV.
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct RieszMeanArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Evaluation point, e.g. 0, 0.5+2i, -1i.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    s: String,
}

#[derive(Args)]
struct PerronCheckArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Boundary height: routes evaluate at s = i tau.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    tau: f64,
}

#[derive(Args)]
struct KernelCheckArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct TailMassArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct BoundarySweepArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Boundary grid as a:b:n (inclusive endpoints).
    #[arg(long, value_name = "A:B:N", allow_hyphen_values = true)]
    tau: Option<String>,
}

#[derive(Args)]
struct DiniArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Boundary point the probe is centered on.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    tau: f64,
}

#[derive(Args)]
struct LocalizeArgs {
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args)]
struct VerticalMcArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Coefficient rule: 1/n, 1/n^2, one, or zero.
    #[arg(long, default_value = "1/n")]
    an: String,
    /// Heights, comma separated or a:b:n.
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    tau: String,
    /// Cutoff schedule, strictly increasing integers.
    #[arg(long, default_value = "100,1000,10000,100000", value_name = "LIST")]
    schedule: String,
    /// Number of random characters to draw.
    #[arg(long, default_value_t = 200)]
    samples: usize,
}

fn dispatch(cli: Cli) -> Result<(), Error> {
    let file = cli.config.as_deref();
    match cli.command {
        Command::RieszMean(a) => cmd_riesz_mean(file, a),
        Command::PerronCheck(a) => cmd_perron_check(file, a),
        Command::KernelCheck(a) => cmd_kernel_check(file, a),
        Command::TailMass(a) => cmd_tail_mass(file, a),
        Command::BoundarySweep(a) => cmd_boundary_sweep(file, a),
        Command::Dini(a) => cmd_dini(file, a),
        Command::Localize(a) => cmd_localize(file, a),
        Command::VerticalMc(a) => cmd_vertical_mc(file, a),
    }
}

// ---------------------------------------------------------------------------
// Config resolution

/// Defaults, then the config file, then flags.
fn resolve_config(file: Option<&Path>, common: &CommonArgs) -> Result<ExperimentConfig, Error> {
    let mut cfg = ExperimentConfig::default();
    if let Some(path) = file {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::domain(format!("read config {}: {e}", path.display())))?;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::domain(format!(
                    "{}:{}: expected key = value, got `{line}`",
                    path.display(),
                    lineno + 1
                ))
            })?;
            apply_kv(&mut cfg, key.trim(), value.trim())
                .map_err(|e| Error::domain(format!("{}:{}: {e}", path.display(), lineno + 1)))?;
        }
    }
    if let Some(v) = &common.target {
        cfg.target = v.clone();
    }
    if let Some(v) = &common.freqs {
        cfg.freqs = Some(parse_f64_list(v)?);
    }
    if let Some(v) = &common.coeffs {
        cfg.coeffs = Some(parse_c64_list(v)?);
    }
    if let Some(v) = common.k {
        cfg.k = v;
    }
    if let Some(v) = common.ell {
        cfg.ell = v;
    }
    if let Some(v) = &common.xs {
        cfg.xs = parse_grid(v)?;
    }
    if let Some(v) = common.delta {
        cfg.delta = v;
    }
    if let Some(v) = common.seed {
        cfg.seed = v;
    }
    if let Some(v) = common.abs_tol {
        cfg.quadrature.abs_tol = v;
    }
    if let Some(v) = common.rel_tol {
        cfg.quadrature.rel_tol = v;
    }
    if let Some(v) = common.max_depth {
        cfg.quadrature.max_depth = v;
    }
    if let Some(v) = common.max_window {
        cfg.quadrature.max_window = v;
    }
    if let Some(v) = &common.out {
        cfg.output = Some(v.clone());
    }
    Ok(cfg)
}

fn apply_kv(cfg: &mut ExperimentConfig, key: &str, value: &str) -> Result<(), Error> {
    match key {
        "target" | "series" => cfg.target = value.to_string(),
        "freqs" => cfg.freqs = Some(parse_f64_list(value)?),
        "coeffs" => cfg.coeffs = Some(parse_c64_list(value)?),
        "k" => cfg.k = parse_num(value, "k")?,
        "ell" => cfg.ell = parse_num(value, "ell")?,
        "interval" => {
            let ends = parse_f64_list(value)?;
            if ends.len() != 2 {
                return Err(Error::domain(format!(
                    "interval wants two endpoints, got {}",
                    ends.len()
                )));
            }
            cfg.interval = (ends[0], ends[1]);
        }
        "tau" => {
            let (interval, n) = parse_span(value)?;
            cfg.interval = interval;
            cfg.tau_grid_size = n;
        }
        "tau_grid_size" => {
            cfg.tau_grid_size = value
                .parse()
                .map_err(|_| Error::domain(format!("tau_grid_size: bad integer `{value}`")))?;
        }
        "xs" | "x" => cfg.xs = parse_grid(value)?,
        "delta" => cfg.delta = parse_num(value, "delta")?,
        "seed" => {
            cfg.seed = value
                .parse()
                .map_err(|_| Error::domain(format!("seed: bad integer `{value}`")))?;
        }
        "abs_tol" => cfg.quadrature.abs_tol = parse_num(value, "abs_tol")?,
        "rel_tol" => cfg.quadrature.rel_tol = parse_num(value, "rel_tol")?,
        "max_depth" => {
            cfg.quadrature.max_depth = value
                .parse()
                .map_err(|_| Error::domain(format!("max_depth: bad integer `{value}`")))?;
        }
        "max_window" => cfg.quadrature.max_window = parse_num(value, "max_window")?,
        "output" | "out" => cfg.output = Some(PathBuf::from(value)),
        other => return Err(Error::domain(format!("unknown config key `{other}`"))),
    }
    Ok(())
}

fn parse_num(value: &str, what: &str) -> Result<f64, Error> {
    value
        .parse()
        .map_err(|_| Error::domain(format!("{what}: bad number `{value}`")))
}

fn parse_f64_list(s: &str) -> Result<Vec<f64>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| parse_num(p, "list entry"))
        .collect()
}

fn parse_c64_list(s: &str) -> Result<Vec<Complex64>, Error> {
    s.split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            Complex64::from_str(p)
                .map_err(|_| Error::domain(format!("bad complex number `{p}` (use forms like 1, 2i, 0.4-0.1i)")))
        })
        .collect()
}

/// `a:b:n` with inclusive endpoints.
fn parse_span(s: &str) -> Result<((f64, f64), usize), Error> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 3 {
        return Err(Error::domain(format!("expected a:b:n grid, got `{s}`")));
    }
    let a = parse_num(parts[0].trim(), "grid start")?;
    let b = parse_num(parts[1].trim(), "grid end")?;
    let n: usize = parts[2]
        .trim()
        .parse()
        .map_err(|_| Error::domain(format!("grid count: bad integer `{}`", parts[2])))?;
    if n < 2 {
        return Err(Error::domain(format!("grid needs at least 2 points, got {n}")));
    }
    Ok(((a, b), n))
}

/// Comma list or `a:b:n` span, whichever the string looks like.
fn parse_grid(s: &str) -> Result<Vec<f64>, Error> {
    if s.contains(':') {
        let ((a, b), n) = parse_span(s)?;
        Ok((0..n).map(|j| a + (b - a) * j as f64 / (n - 1) as f64).collect())
    } else {
        parse_f64_list(s)
    }
}

// ---------------------------------------------------------------------------
// Output helpers

fn fmt_f(v: f64) -> String {
    format!("{v:.16e}")
}

/// Write through a sibling temp file and rename, so readers never see
/// a partial report.
fn write_atomic(path: &Path, contents: &str) -> Result<(), Error> {
    let mut tmp_name = path.as_os_str().to_owned();
    tmp_name.push(format!(".tmp-{}", std::process::id()));
    let tmp = PathBuf::from(tmp_name);
    let write = fs::write(&tmp, contents)
        .and_then(|()| fs::rename(&tmp, path));
    if let Err(e) = write {
        let _ = fs::remove_file(&tmp);
        return Err(Error::domain(format!("write {}: {e}", path.display())));
    }
    Ok(())
}

fn emit(cfg: &ExperimentConfig, json_mode: bool, csv: &str, envelope: &Value) -> Result<(), Error> {
    match (&cfg.output, json_mode) {
        (Some(path), false) => write_atomic(path, csv),
        (Some(path), true) => {
            let mut text = serde_json::to_string_pretty(envelope)
                .map_err(|e| Error::domain(format!("serialize report: {e}")))?;
            text.push('\n');
            write_atomic(path, &text)
        }
        (None, true) => {
            let text = serde_json::to_string_pretty(envelope)
                .map_err(|e| Error::domain(format!("serialize report: {e}")))?;
            println!("{text}");
            Ok(())
        }
        (None, false) => Ok(()),
    }
}

fn envelope(cfg: &ExperimentConfig, records: Value, summary: Value) -> Value {
    json!({
        "config": config_json(cfg),
        "records": records,
        "summary": summary,
        "versions": { "riesz-core": env!("CARGO_PKG_VERSION") },
    })
}

fn config_json(cfg: &ExperimentConfig) -> Value {
    json!({
        "target": cfg.target,
        "freqs": cfg.freqs,
        "coeffs": cfg
            .coeffs
            .as_ref()
            .map(|v| v.iter().map(|c| json!([c.re, c.im])).collect::<Vec<_>>()),
        "k": cfg.k,
        "ell": cfg.ell,
        "interval": [cfg.interval.0, cfg.interval.1],
        "tau_grid_size": cfg.tau_grid_size,
        "xs": cfg.xs,
        "delta": cfg.delta,
        "seed": cfg.seed,
        "quadrature": {
            "abs_tol": cfg.quadrature.abs_tol,
            "rel_tol": cfg.quadrature.rel_tol,
            "max_depth": cfg.quadrature.max_depth,
            "max_window": cfg.quadrature.max_window,
        },
        "output": cfg.output.as_ref().map(|p| p.display().to_string()),
    })
}

// ---------------------------------------------------------------------------
// Subcommands

fn cmd_riesz_mean(file: Option<&Path>, args: RieszMeanArgs) -> Result<(), Error> {
    let cfg = resolve_config(file, &args.common)?;
    let target = cfg.resolve_target()?;
    let s = Complex64::from_str(args.s.trim())
        .map_err(|_| Error::domain(format!("bad evaluation point `{}`", args.s)))?;
    let x = single_height(&cfg)?;
    let value = target.series.riesz_mean(cfg.k, x, s, DEFAULT_MAX_TERMS)?;
    println!("{value}");
    Ok(())
}

/// Subcommands evaluating at one height use the last (largest) entry
/// of the xs list, so `--x 7` means exactly that.
fn single_height(cfg: &ExperimentConfig) -> Result<f64, Error> {
    cfg.xs
        .last()
        .copied()
        .ok_or_else(|| Error::domain("no cutoff height given".to_string()))
}

fn cmd_perron_check(file: Option<&Path>, args: PerronCheckArgs) -> Result<(), Error> {
    let cfg = resolve_config(file, &args.common)?;
    let target = cfg.resolve_target()?;
    let x = single_height(&cfg)?;
    let k = cfg.k;
    let tau = args.tau;
    let quad = &cfg.quadrature;
    let s0 = Complex64::new(0.0, tau);

    let direct = target.series.riesz_mean(k, x, s0, DEFAULT_MAX_TERMS)?;
    let mut routes: Vec<(String, Complex64, f64)> =
        vec![("direct sum".to_string(), direct, 0.0)];
    let line_low = perron::perron_line(&target, k, x, s0, 1.0 / x, quad)?;
    routes.push(("vertical line c = 1/x".to_string(), line_low.value, line_low.err_est));
    let line_one = perron::perron_line(&target, k, x, s0, 1.0, quad)?;
    routes.push(("vertical line c = 1".to_string(), line_one.value, line_one.err_est));
    let boundary = perron::perron_boundary(&target, k, x, tau, quad)?;
    routes.push(("boundary line".to_string(), boundary.value, boundary.err_est));
    if tau == 0.0 {
        let smoothed = perron::boundary_integral(&target, k, x, quad)?;
        routes.push(("smoothed kernel".to_string(), smoothed.value, smoothed.err_est));
    }

    let mut max_dev = 0.0f64;
    for i in 0..routes.len() {
        for j in i + 1..routes.len() {
            max_dev = max_dev.max((routes[i].1 - routes[j].1).norm());
        }
    }
    let budget: f64 = routes.iter().map(|r| r.2).sum();

    for (name, value, err) in &routes {
        println!("{name:<22} {} + {} i   (err est {:.3e})", fmt_f(value.re), fmt_f(value.im), err);
    }
    println!("max pairwise deviation {max_dev:.3e} (combined err budget {budget:.3e})");

    let records: Vec<Value> = routes
        .iter()
        .map(|(name, value, err)| {
            json!({ "route": name, "re": value.re, "im": value.im, "err_est": err })
        })
        .collect();
    let summary = json!({ "max_pairwise_deviation": max_dev, "err_budget": budget });
    let csv = {
        let mut out = String::from("route,re,im,err_est\n");
        for (name, value, err) in &routes {
            out.push_str(&format!("{name},{},{},{}\n", fmt_f(value.re), fmt_f(value.im), fmt_f(*err)));
        }
        out
    };
    emit(&cfg, args.common.json, &csv, &envelope(&cfg, json!(records), summary))
}

fn cmd_kernel_check(file: Option<&Path>, args: KernelCheckArgs) -> Result<(), Error> {
    let cfg = resolve_config(file, &args.common)?;
    let report = experiments::kernel_fourier_check(cfg.k, &cfg.quadrature)?;
    println!("deviation = {:.3e}", report.deviation);
    println!(
        "integral  = {} + {} i   (err est {:.3e}, window {}, panels {})",
        fmt_f(report.value.re),
        fmt_f(report.value.im),
        report.err_est,
        report.window,
        report.panels
    );
    let csv = format!(
        "k,re,im,err_est,deviation\n{},{},{},{},{}\n",
        fmt_f(report.k),
        fmt_f(report.value.re),
        fmt_f(report.value.im),
        fmt_f(report.err_est),
        fmt_f(report.deviation)
    );
    let records = json!([{
        "k": report.k,
        "re": report.value.re,
        "im": report.value.im,
        "err_est": report.err_est,
        "deviation": report.deviation,
    }]);
    let summary = json!({
        "deviation": report.deviation,
        "window": report.window,
        "panels": report.panels,
    });
    emit(&cfg, args.common.json, &csv, &envelope(&cfg, records, summary))
}

fn cmd_tail_mass(file: Option<&Path>, args: TailMassArgs) -> Result<(), Error> {
    let cfg = resolve_config(file, &args.common)?;
    let report = experiments::kernel_tail_mass(cfg.k, cfg.ell, cfg.delta, &cfg.xs)?;
    println!("{:>10}  {:>13}  {:>10}  {:>13}  {:>8}", "x", "mass", "err est", "bound", "ratio");
    for row in &report.rows {
        println!(
            "{:>10.3}  {:>13.6e}  {:>10.3e}  {:>13.6e}  {:>8.4}",
            row.x, row.mass, row.err_est, row.analytic_bound, row.ratio
        );
    }
    println!("strictly decreasing: {}", report.strictly_decreasing);
    let mut csv = String::from("x,mass,err_est,analytic_bound,ratio\n");
    let mut records = Vec::new();
    for row in &report.rows {
        csv.push_str(&format!(
            "{},{},{},{},{}\n",
            fmt_f(row.x),
            fmt_f(row.mass),
            fmt_f(row.err_est),
            fmt_f(row.analytic_bound),
            fmt_f(row.ratio)
        ));
        records.push(json!({
            "x": row.x,
            "mass": row.mass,
            "err_est": row.err_est,
            "analytic_bound": row.analytic_bound,
            "ratio": row.ratio,
        }));
    }
    let summary = json!({ "strictly_decreasing": report.strictly_decreasing });
    emit(&cfg, args.common.json, &csv, &envelope(&cfg, json!(records), summary))
}

fn cmd_boundary_sweep(file: Option<&Path>, args: BoundarySweepArgs) -> Result<(), Error> {
    let mut cfg = resolve_config(file, &args.common)?;
    if let Some(tau) = &args.tau {
        let (interval, n) = parse_span(tau)?;
        cfg.interval = interval;
        cfg.tau_grid_size = n;
    }
    let report = experiments::boundary_sweep(&cfg)?;
    for &(x, sup) in &report.sup_error_per_x {
        println!("x = {x:>8.2}: sup abs error {sup:.6e}");
    }
    println!("non-monotone steps: {}", report.monotonicity_violations());

    let mut csv = String::from("x,tau,re,im,ref_re,ref_im,abs_err,quad_err\n");
    let mut records = Vec::new();
    for rec in &report.records {
        let (ref_re, ref_im, abs_err) = match (rec.reference, rec.abs_error) {
            (Some(r), Some(e)) => (fmt_f(r.re), fmt_f(r.im), fmt_f(e)),
            _ => (String::new(), String::new(), String::new()),
        };
        csv.push_str(&format!(
            "{},{},{},{},{ref_re},{ref_im},{abs_err},{}\n",
            fmt_f(rec.x),
            fmt_f(rec.point.im),
            fmt_f(rec.value.re),
            fmt_f(rec.value.im),
            fmt_f(rec.err_est)
        ));
        records.push(json!({
            "x": rec.x,
            "tau": rec.point.im,
            "re": rec.value.re,
            "im": rec.value.im,
            "ref_re": rec.reference.map(|r| r.re),
            "ref_im": rec.reference.map(|r| r.im),
            "abs_err": rec.abs_error,
            "quad_err": rec.err_est,
        }));
    }
    let summary = json!({
        "sup_error_per_x": report
            .sup_error_per_x
            .iter()
            .map(|&(x, sup)| json!({ "x": x, "sup_abs_err": sup }))
            .collect::<Vec<_>>(),
        "monotonicity_violations": report.monotonicity_violations(),
    });
    emit(&cfg, args.common.json, &csv, &envelope(&cfg, json!(records), summary))
}

fn cmd_dini(file: Option<&Path>, args: DiniArgs) -> Result<(), Error> {
    let cfg = resolve_config(file, &args.common)?;
    let target = cfg.resolve_target()?;
    let report = experiments::dini_check(
        &target,
        args.tau,
        cfg.delta,
        cfg.k,
        cfg.ell,
        &cfg.xs,
        &cfg.quadrature,
    )?;
    let verdict = if report.diverged {
        "diverged (cap exceeded)"
    } else if report.resolved {
        "converged"
    } else {
        "undecided at shell limit"
    };
    println!(
        "dini integral = {:.6e} (err est {:.3e}, {} shells): {verdict}",
        report.dini_integral,
        report.err_est,
        report.shells.len()
    );
    for &(x, err) in &report.riesz_errors {
        println!("  x = {x:>8.2}: riesz-mean error {err:.6e}");
    }

    let mut csv = String::from("shell_edge,contribution\n");
    let mut records = Vec::new();
    for &(edge, contribution) in &report.shells {
        csv.push_str(&format!("{},{}\n", fmt_f(edge), fmt_f(contribution)));
        records.push(json!({ "shell_edge": edge, "contribution": contribution }));
    }
    let summary = json!({
        "dini_integral": report.dini_integral,
        "err_est": report.err_est,
        "diverged": report.diverged,
        "resolved": report.resolved,
        "riesz_errors": report
            .riesz_errors
            .iter()
            .map(|&(x, e)| json!({ "x": x, "abs_err": e }))
            .collect::<Vec<_>>(),
    });
    emit(&cfg, args.common.json, &csv, &envelope(&cfg, json!(records), summary))
}

fn cmd_localize(file: Option<&Path>, args: LocalizeArgs) -> Result<(), Error> {
    let cfg = resolve_config(file, &args.common)?;
    let target = cfg.resolve_target()?;
    let report = experiments::localization_tail(
        &target,
        cfg.k,
        cfg.ell,
        cfg.delta,
        &cfg.xs,
        &cfg.quadrature,
    )?;
    for row in &report.rows {
        println!("x = {:>8.2}: tail {:.6e} (err est {:.3e})", row.x, row.tail, row.err_est);
    }
    println!("decreasing: {}", report.decreasing);
    let mut csv = String::from("x,tail,err_est\n");
    let mut records = Vec::new();
    for row in &report.rows {
        csv.push_str(&format!("{},{},{}\n", fmt_f(row.x), fmt_f(row.tail), fmt_f(row.err_est)));
        records.push(json!({ "x": row.x, "tail": row.tail, "err_est": row.err_est }));
    }
    let summary = json!({ "decreasing": report.decreasing, "delta": report.delta });
    emit(&cfg, args.common.json, &csv, &envelope(&cfg, json!(records), summary))
}

fn cmd_vertical_mc(file: Option<&Path>, args: VerticalMcArgs) -> Result<(), Error> {
    let cfg = resolve_config(file, &args.common)?;
    let taus = parse_grid(&args.tau)?;
    let schedule: Vec<u64> = args
        .schedule
        .split(',')
        .map(str::trim)
        .filter(|p| !p.is_empty())
        .map(|p| {
            p.parse::<u64>()
                .map_err(|_| Error::domain(format!("schedule: bad integer `{p}`")))
        })
        .collect::<Result<_, _>>()?;
    let rule = coefficient_rule(&args.an)?;
    let report =
        experiments::vertical_limit_mc(&*rule, &taus, &schedule, args.samples, cfg.seed)?;

    let mut csv = String::from("tau,m,median_osc\n");
    let mut records = Vec::new();
    for tau_report in &report.per_tau {
        let trivial = experiments::trivial_character_sums(&*rule, tau_report.tau, &schedule)?;
        let growth = (trivial.last().unwrap().1 - trivial.first().unwrap().1).norm();
        println!("tau = {:>7.3}:", tau_report.tau);
        for &(m, median) in &tau_report.median_osc {
            println!("  osc from N = {m:>8}: median {median:.6e}");
        }
        println!("  improving fraction {:.3}", tau_report.improving_fraction);
        println!("  trivial character |S(N_max) - S(N_min)| = {growth:.4}");
        for &(m, median) in &tau_report.median_osc {
            csv.push_str(&format!("{},{m},{}\n", fmt_f(tau_report.tau), fmt_f(median)));
        }
        records.push(json!({
            "tau": tau_report.tau,
            "median_osc": tau_report
                .median_osc
                .iter()
                .map(|&(m, v)| json!({ "m": m, "median": v }))
                .collect::<Vec<_>>(),
            "improving_fraction": tau_report.improving_fraction,
            "trivial_character_growth": growth,
            "per_sample_osc": tau_report.per_sample,
        }));
    }
    let summary = json!({
        "samples": report.samples,
        "seed": report.seed,
        "n_schedule": report.n_schedule,
        "cutoff_note": report.cutoff_note,
    });
    emit(&cfg, args.common.json, &csv, &envelope(&cfg, json!(records), summary))
}

fn coefficient_rule(name: &str) -> Result<Box<dyn Fn(u64) -> Complex64 + Sync>, Error> {
    match name {
        "1/n" => Ok(Box::new(|n| Complex64::new(1.0 / n as f64, 0.0))),
        "1/n^2" | "1/n2" => Ok(Box::new(|n| Complex64::new(1.0 / (n * n) as f64, 0.0))),
        "one" | "1" => Ok(Box::new(|_| Complex64::new(1.0, 0.0))),
        "zero" | "0" => Ok(Box::new(|_| Complex64::new(0.0, 0.0))),
        other => Err(Error::domain(format!(
            "unknown coefficient rule `{other}` (expected 1/n, 1/n^2, one, zero)"
        ))),
    }
}
