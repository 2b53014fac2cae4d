//! pearcey-gap: gap probabilities of the Pearcey process and the
//! verification suites behind them. Emits CSV or JSON tables, deterministic
//! for a fixed configuration.

use clap::{Args, Parser, Subcommand};
use pearcey_core::asymptotics::{self, FitReport};
use pearcey_core::fredholm;
use pearcey_core::pearcey_fn::PearceyParams;
use pearcey_core::surface;
use pearcey_core::verify;
use serde::Serialize;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser)]
#[command(
    name = "pearcey-gap",
    version,
    about = "Pearcey-kernel gap probabilities"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gap probability F(s; rho) = ln det(I - K) with derivative identities
    Gap(GapArgs),
    /// Fit the undetermined constant of the large-s expansion
    FitC(FitArgs),
    /// Run the module property suites
    Verify(VerifyArgs),
    /// Sign chart of the Re lambda* differences on a grid
    Chart(ChartArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Output format
    #[arg(long, value_parser = ["csv", "json"])]
    format: Option<String>,
    /// Output path (stdout when absent)
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (overrides PEARCEY_THREADS, defaults to all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// JSON file with default values for the flags of this command
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Clone)]
#[command(allow_negative_numbers = true)]
struct GapArgs {
    /// Single interval half-width
    #[arg(long, conflicts_with = "s_range")]
    s: Option<f64>,
    /// Range a:b:n (n points from a to b inclusive)
    #[arg(long)]
    s_range: Option<String>,
    #[arg(long)]
    rho: Option<f64>,
    /// Quadrature nodes on (-s, s)
    #[arg(long)]
    m: Option<usize>,
    /// Relative tolerance of the Pearcey contour quadrature
    #[arg(long)]
    tolerance: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Clone)]
#[command(allow_negative_numbers = true)]
struct FitArgs {
    /// Range a:b:n within [4, 8], at least 5 points
    #[arg(long)]
    s_range: Option<String>,
    #[arg(long)]
    rho: Option<f64>,
    #[arg(long)]
    m: Option<usize>,
    /// Exercise the fit on generated data with a known constant
    #[arg(long)]
    synthetic: bool,
    /// Add the next power s^{-4/3} to the fit model (model study only)
    #[arg(long)]
    extra_terms: bool,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Clone)]
struct VerifyArgs {
    /// Restrict to one suite (pearcey, kernel, fredholm, surface, parametrix, asymptotics)
    #[arg(long)]
    only: Option<String>,
    /// Multiply every tolerance (0.1 = tighten tenfold)
    #[arg(long)]
    tol_scale: Option<f64>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Clone)]
#[command(allow_negative_numbers = true)]
struct ChartArgs {
    #[arg(long)]
    x_min: Option<f64>,
    #[arg(long)]
    x_max: Option<f64>,
    #[arg(long)]
    y_min: Option<f64>,
    #[arg(long)]
    y_max: Option<f64>,
    #[arg(long)]
    nx: Option<usize>,
    #[arg(long)]
    ny: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Gap(args) => run_gap(args),
        Command::FitC(args) => run_fit(args),
        Command::Verify(args) => run_verify(args),
        Command::Chart(args) => run_chart(args),
    };
    match code {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

type AnyErr = Box<dyn std::error::Error>;

fn init_threads(threads: Option<usize>) {
    let n = threads.or_else(|| {
        std::env::var("PEARCEY_THREADS")
            .ok()
            .and_then(|v| v.parse().ok())
    });
    if let Some(n) = n {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
}

/// Load config-file defaults into missing options.
fn config_value(path: &Option<PathBuf>) -> Result<serde_json::Value, AnyErr> {
    match path {
        None => Ok(serde_json::Value::Null),
        Some(p) => {
            let text = std::fs::read_to_string(p)?;
            Ok(serde_json::from_str(&text)?)
        }
    }
}

fn fill_f64(slot: &mut Option<f64>, cfg: &serde_json::Value, key: &str) {
    if slot.is_none() {
        if let Some(v) = cfg.get(key).and_then(|v| v.as_f64()) {
            *slot = Some(v);
        }
    }
}

fn fill_usize(slot: &mut Option<usize>, cfg: &serde_json::Value, key: &str) {
    if slot.is_none() {
        if let Some(v) = cfg.get(key).and_then(|v| v.as_u64()) {
            *slot = Some(v as usize);
        }
    }
}

fn fill_string(slot: &mut Option<String>, cfg: &serde_json::Value, key: &str) {
    if slot.is_none() {
        if let Some(v) = cfg.get(key).and_then(|v| v.as_str()) {
            *slot = Some(v.to_string());
        }
    }
}

fn parse_range(spec: &str) -> Result<Vec<f64>, AnyErr> {
    let parts: Vec<&str> = spec.split(':').collect();
    if parts.len() != 3 {
        return Err(format!("range '{spec}' must be a:b:n").into());
    }
    let a: f64 = parts[0].parse()?;
    let b: f64 = parts[1].parse()?;
    let n: usize = parts[2].parse()?;
    if n < 1 || !(b >= a) {
        return Err(format!("range '{spec}' must have b >= a and n >= 1").into());
    }
    Ok((0..n)
        .map(|i| {
            if n == 1 {
                a
            } else {
                a + (b - a) * i as f64 / (n - 1) as f64
            }
        })
        .collect())
}

fn validate(s: f64, rho: f64, m: usize) -> Result<(), AnyErr> {
    if !(s > 0.0 && s <= 10.0) {
        return Err(format!("s = {s} outside (0, 10]").into());
    }
    if !(rho.abs() <= 4.0) {
        return Err(format!("|rho| = {} outside [0, 4]", rho.abs()).into());
    }
    if !(8..=400).contains(&m) || m % 2 != 0 {
        return Err(format!("m = {m} outside the even range [8, 400]").into());
    }
    Ok(())
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), AnyErr> {
    match out {
        None => {
            std::io::stdout().write_all(content.as_bytes())?;
            Ok(())
        }
        Some(p) => {
            std::fs::write(p, content)?;
            Ok(())
        }
    }
}

// ---------------------------------------------------------------------------
// gap
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct GapRow {
    s: f64,
    rho: f64,
    m: usize,
    f: f64,
    est_error: f64,
    df_ds: f64,
    df_drho: f64,
}

fn run_gap(mut args: GapArgs) -> Result<ExitCode, AnyErr> {
    let cfg = config_value(&args.common.config)?;
    fill_f64(&mut args.s, &cfg, "s");
    fill_string(&mut args.s_range, &cfg, "s-range");
    fill_f64(&mut args.rho, &cfg, "rho");
    fill_usize(&mut args.m, &cfg, "m");
    fill_f64(&mut args.tolerance, &cfg, "tolerance");
    fill_string(&mut args.common.format, &cfg, "format");
    init_threads(args.common.threads);

    let rho = args.rho.unwrap_or(0.0);
    let m = args.m.unwrap_or(60);
    let tol = args
        .tolerance
        .unwrap_or(pearcey_core::pearcey_fn::DEFAULT_TOL);
    if !(1e-14..=1e-6).contains(&tol) {
        return Err(format!("tolerance {tol} outside [1e-14, 1e-6]").into());
    }
    let svals = match (&args.s, &args.s_range) {
        (Some(s), None) => vec![*s],
        (None, Some(r)) => parse_range(r)?,
        (None, None) => return Err("one of --s or --s-range is required".into()),
        (Some(_), Some(_)) => return Err("--s conflicts with --s-range".into()),
    };
    for &s in &svals {
        validate(s, rho, m)?;
    }
    let params = PearceyParams { rho };
    let mut rows = Vec::new();
    for &s in &svals {
        let g = fredholm::fredholm_logdet_with_tol(s, &params, m, tol)
            .map_err(|e| -> AnyErr { format!("convergence failure at s = {s}: {e}").into() })?;
        let df_ds = fredholm::df_ds(s, &params, m)?;
        let df_drho = fredholm::df_drho(s, &params, m)?;
        rows.push(GapRow {
            s,
            rho,
            m,
            f: g.f,
            est_error: g.est_error,
            df_ds,
            df_drho,
        });
    }
    let format = args.common.format.as_deref().unwrap_or("csv");
    let content = match format {
        "json" => serde_json::to_string_pretty(&rows)? + "\n",
        _ => {
            let mut out = format!("# pearcey-gap v{VERSION}\ns,rho,m,F,est_error,dF_ds,dF_drho\n");
            for r in rows {
                out += &format!(
                    "{:.12e},{:.12e},{},{:.12e},{:.3e},{:.12e},{:.12e}\n",
                    r.s, r.rho, r.m, r.f, r.est_error, r.df_ds, r.df_drho
                );
            }
            out
        }
    };
    write_output(&args.common.out, &content)?;
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// fit-c
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct FitOutput {
    rho: f64,
    m: usize,
    c_hat: f64,
    a_hat: f64,
    c_stderr: f64,
    c_stderr_ols: f64,
    c_hat_extended: Option<f64>,
    residual_exponent: f64,
    samples: Vec<FitSampleOut>,
}

#[derive(Serialize)]
struct FitSampleOut {
    s: f64,
    f_num: f64,
    g: f64,
}

fn fit_to_output(rep: &FitReport, m: usize, extra_terms: bool) -> FitOutput {
    FitOutput {
        rho: rep.rho,
        m,
        c_hat: rep.c_hat,
        a_hat: rep.a_hat,
        c_stderr: rep.c_stderr,
        c_stderr_ols: rep.c_stderr_ols,
        c_hat_extended: extra_terms.then_some(rep.c_hat_extended),
        residual_exponent: rep.residual_exponent,
        samples: rep
            .samples
            .iter()
            .map(|p| FitSampleOut {
                s: p.s,
                f_num: p.f_num,
                g: p.g,
            })
            .collect(),
    }
}

fn run_fit(mut args: FitArgs) -> Result<ExitCode, AnyErr> {
    let cfg = config_value(&args.common.config)?;
    fill_string(&mut args.s_range, &cfg, "s-range");
    fill_f64(&mut args.rho, &cfg, "rho");
    fill_usize(&mut args.m, &cfg, "m");
    init_threads(args.common.threads);

    let rho = args.rho.unwrap_or(0.0);
    let m = args.m.unwrap_or(100);
    let svals = parse_range(args.s_range.as_deref().unwrap_or("4:8:9"))?;
    if args.synthetic {
        // model recovery on generated data: G(s) = 0.7 + 0.3 s^{-2/3}
        let samples: Vec<(f64, f64)> = svals
            .iter()
            .map(|&s| {
                let g = 0.7 + 0.3 * s.powf(-2.0 / 3.0);
                (s, g + asymptotics::f_expansion(s, rho, 0.0).total())
            })
            .collect();
        let rep = asymptotics::fit_constant(&samples, rho)?;
        let content =
            serde_json::to_string_pretty(&fit_to_output(&rep, 0, args.extra_terms))? + "\n";
        write_output(&args.common.out, &content)?;
        return Ok(ExitCode::SUCCESS);
    }
    if svals.len() < 5 {
        return Err("fit needs at least 5 s-values".into());
    }
    if svals.iter().any(|&s| !(4.0..=8.0).contains(&s)) {
        return Err("fit window must lie within [4, 8]".into());
    }
    validate(svals[0], rho, m)?;
    let params = PearceyParams { rho };
    let mut samples = Vec::new();
    for &s in &svals {
        let g = fredholm::fredholm_logdet(s, &params, m)?;
        samples.push((s, g.f));
    }
    let rep = asymptotics::fit_constant(&samples, rho)?;
    let out = fit_to_output(&rep, m, args.extra_terms);
    let content = match args.common.format.as_deref().unwrap_or("json") {
        "csv" => fit_to_csv(&out),
        _ => serde_json::to_string_pretty(&out)? + "\n",
    };
    write_output(&args.common.out, &content)?;
    Ok(ExitCode::SUCCESS)
}

fn fit_to_csv(out: &FitOutput) -> String {
    let mut text = format!(
        "# pearcey-gap v{VERSION}\n# rho={:.6e} m={} c_hat={:.12e} a_hat={:.12e} \
         c_stderr={:.3e} c_stderr_ols={:.3e} residual_exponent={:.6}\ns,f_num,g\n",
        out.rho, out.m, out.c_hat, out.a_hat, out.c_stderr, out.c_stderr_ols, out.residual_exponent
    );
    for p in &out.samples {
        text += &format!("{:.12e},{:.12e},{:.12e}\n", p.s, p.f_num, p.g);
    }
    text
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct VerifyRow {
    suite: String,
    name: String,
    residual: f64,
    tolerance: f64,
    pass: bool,
}

fn run_verify(args: VerifyArgs) -> Result<ExitCode, AnyErr> {
    init_threads(args.common.threads);
    let scale = args.tol_scale.unwrap_or(1.0);
    if !(scale > 0.0) {
        return Err("tol-scale must be positive".into());
    }
    let checks = verify::run_all(scale, args.only.as_deref())?;
    let rows: Vec<VerifyRow> = checks
        .iter()
        .map(|c| VerifyRow {
            suite: c.suite.to_string(),
            name: c.name.clone(),
            residual: c.residual,
            tolerance: c.tolerance,
            pass: c.pass,
        })
        .collect();
    let n_fail = rows.iter().filter(|r| !r.pass).count();
    let format = args.common.format.as_deref().unwrap_or("json");
    let content = match format {
        "csv" => {
            let mut out = format!("# pearcey-gap v{VERSION}\nsuite,name,residual,tolerance,pass\n");
            for r in &rows {
                out += &format!(
                    "{},{},{:.3e},{:.3e},{}\n",
                    r.suite, r.name, r.residual, r.tolerance, r.pass
                );
            }
            out
        }
        _ => serde_json::to_string_pretty(&rows)? + "\n",
    };
    write_output(&args.common.out, &content)?;
    eprintln!(
        "{} checks, {} failed{}",
        rows.len(),
        n_fail,
        if scale != 1.0 {
            format!(" (tolerances scaled by {scale})")
        } else {
            String::new()
        }
    );
    if n_fail > 0 {
        for r in rows.iter().filter(|r| !r.pass) {
            eprintln!(
                "FAIL {}/{}: residual {:.3e} > tolerance {:.3e}",
                r.suite, r.name, r.residual, r.tolerance
            );
        }
        return Ok(ExitCode::from(1));
    }
    Ok(ExitCode::SUCCESS)
}

// ---------------------------------------------------------------------------
// chart
// ---------------------------------------------------------------------------

fn run_chart(mut args: ChartArgs) -> Result<ExitCode, AnyErr> {
    let cfg = config_value(&args.common.config)?;
    fill_f64(&mut args.x_min, &cfg, "x-min");
    fill_f64(&mut args.x_max, &cfg, "x-max");
    fill_f64(&mut args.y_min, &cfg, "y-min");
    fill_f64(&mut args.y_max, &cfg, "y-max");
    fill_usize(&mut args.nx, &cfg, "nx");
    fill_usize(&mut args.ny, &cfg, "ny");
    init_threads(args.common.threads);

    let x0 = args.x_min.unwrap_or(-3.0);
    let x1 = args.x_max.unwrap_or(3.0);
    let y0 = args.y_min.unwrap_or(-3.0);
    let y1 = args.y_max.unwrap_or(3.0);
    let nx = args.nx.unwrap_or(121);
    let ny = args.ny.unwrap_or(121);
    let grid = surface::sign_chart((x0, x1), (y0, y1), nx, ny)?;
    let format = args.common.format.as_deref().unwrap_or("csv");
    let content = match format {
        "json" => {
            #[derive(Serialize)]
            struct Row {
                x: f64,
                y: f64,
                sign_21: i8,
                sign_31: i8,
                sign_23: i8,
            }
            let rows: Vec<Row> = grid
                .iter()
                .map(|g| Row {
                    x: g.x,
                    y: g.y,
                    sign_21: g.sign_21,
                    sign_31: g.sign_31,
                    sign_23: g.sign_23,
                })
                .collect();
            serde_json::to_string_pretty(&rows)? + "\n"
        }
        _ => {
            let mut out = format!("# pearcey-gap v{VERSION}\nx,y,sign_21,sign_31,sign_23\n");
            for g in &grid {
                out += &format!(
                    "{:.12e},{:.12e},{},{},{}\n",
                    g.x, g.y, g.sign_21, g.sign_31, g.sign_23
                );
            }
            out
        }
    };
    write_output(&args.common.out, &content)?;
    Ok(ExitCode::SUCCESS)
}
