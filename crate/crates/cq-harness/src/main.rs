//! `cq` — convolution-quadrature runner.
//!
//! Subcommands: `weights` (export a weight table), `convolve` (forward
//! convolution of a named signal), `solve` (convolution equation),
//! `converge` (kappa-halving study against the quadrature oracle), and
//! `scatter` (2-D sound-soft scattering demo).  A flat key=value config
//! file can seed any parameter; flags override it.  On failure the process
//! exits nonzero after printing a single `error[category]: message` line.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use num_complex::Complex64;

use cq_engine::multistep::{
    all_steps_forward, all_steps_solve, cq_weights, look_ahead_solve, scalar_samples,
    scalar_values,
};
use cq_engine::runge_kutta::{rk_cq_weights, rk_forward, rk_solve, scalar_stage_samples, step_values};
use cq_engine::scattering::TimeScheme;
use cq_harness::config::Settings;
use cq_harness::convergence::{run_convergence, StudyConfig};
use cq_harness::registry::{signal_by_name, symbol_by_name, SIGNAL_NAMES, SYMBOL_NAMES};
use cq_harness::scatter::run_scatter;
use cq_harness::{config_error, io, HarnessError};

#[derive(Parser)]
#[command(
    name = "cq",
    about = "Convolution quadrature runner: weight export, convolution and \
             equation solving, convergence studies, 2-D scattering demo"
)]
struct Cli {
    /// Flat key=value config file; command-line flags override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Export the convolution weight table of a symbol as CSV.
    Weights(CommonArgs),
    /// Forward-convolve a named signal with a symbol's causal kernel.
    Convolve(CommonArgs),
    /// Solve the convolution equation F * y = g for y.
    Solve(CommonArgs),
    /// Run a kappa-halving convergence study against the quadrature oracle.
    Converge(CommonArgs),
    /// Run the 2-D sound-soft scattering pipeline.
    Scatter(ScatterArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Time scheme: be | bdf2 | tr | radau3 | lobatto4.
    #[arg(long)]
    scheme: Option<String>,
    /// Time step.
    #[arg(long)]
    kappa: Option<f64>,
    /// Number of time steps (the run covers [0, steps * kappa]).
    #[arg(long)]
    steps: Option<usize>,
    /// Laplace symbol name (see `--symbol help` output on error).
    #[arg(long)]
    symbol: Option<String>,
    /// Data signal name.
    #[arg(long)]
    signal: Option<String>,
    /// Contour accuracy parameter.
    #[arg(long)]
    eps: Option<f64>,
    /// Look-ahead block size for `solve` (multistep only).
    #[arg(long)]
    block: Option<usize>,
    /// Final time of a convergence study.
    #[arg(long, value_name = "T")]
    final_time: Option<f64>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScatterArgs {
    /// Time scheme: be | bdf2 | tr | radau3 | lobatto4.
    #[arg(long)]
    scheme: Option<String>,
    /// Time step.
    #[arg(long)]
    kappa: Option<f64>,
    /// Number of time steps.
    #[arg(long)]
    steps: Option<usize>,
    /// Contour accuracy parameter.
    #[arg(long)]
    eps: Option<f64>,
    /// Boundary geometry: circle[:R] | ellipse:A:B | kite.
    #[arg(long)]
    geometry: Option<String>,
    /// Number of boundary source points.
    #[arg(long)]
    boundary_points: Option<usize>,
    /// Wave speed.
    #[arg(long)]
    speed: Option<f64>,
    /// Solve by exact weight-table marching instead of the FFT path.
    #[arg(long)]
    march: bool,
    /// Snapshot grid size, e.g. 160x120.
    #[arg(long, value_name = "WxH")]
    grid: Option<String>,
    /// Grid extent xmin,xmax,ymin,ymax (default -3,3,-3,3).
    #[arg(long, value_name = "X0,X1,Y0,Y1")]
    extent: Option<String>,
    /// Snapshot times, comma separated.
    #[arg(long, value_name = "t1,t2,...")]
    snapshots: Option<String>,
    /// Field probe points, e.g. 0:0,1.5:-2.
    #[arg(long, value_name = "x:y,...")]
    probes: Option<String>,
    /// Output directory.
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
}

fn main() {
    let cli = Cli::parse();
    if let Err(err) = run(cli) {
        let message = err.to_string().replace('\n', "; ");
        eprintln!("error[{}]: {}", err.category(), message);
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<(), HarnessError> {
    let base = match &cli.config {
        Some(path) => Settings::from_file(path)?,
        None => Settings::new(),
    };
    match cli.command {
        Command::Weights(args) => cmd_weights(merge_common(base, &args)),
        Command::Convolve(args) => cmd_forward(merge_common(base, &args), false),
        Command::Solve(args) => cmd_forward(merge_common(base, &args), true),
        Command::Converge(args) => cmd_converge(merge_common(base, &args)),
        Command::Scatter(args) => cmd_scatter(merge_scatter(base, &args)),
    }
}

fn merge_common(mut settings: Settings, args: &CommonArgs) -> Settings {
    settings.overlay("scheme", &args.scheme);
    settings.overlay("kappa", &args.kappa);
    settings.overlay("steps", &args.steps);
    settings.overlay("symbol", &args.symbol);
    settings.overlay("signal", &args.signal);
    settings.overlay("eps", &args.eps);
    settings.overlay("block", &args.block);
    settings.overlay("final-time", &args.final_time);
    settings.overlay("out", &args.out.as_ref().map(|p| p.display().to_string()));
    settings
}

fn merge_scatter(mut settings: Settings, args: &ScatterArgs) -> Settings {
    settings.overlay("scheme", &args.scheme);
    settings.overlay("kappa", &args.kappa);
    settings.overlay("steps", &args.steps);
    settings.overlay("eps", &args.eps);
    settings.overlay("geometry", &args.geometry);
    settings.overlay("boundary-points", &args.boundary_points);
    settings.overlay("speed", &args.speed);
    if args.march {
        settings.set("march", "true");
    }
    settings.overlay("grid", &args.grid);
    settings.overlay("extent", &args.extent);
    settings.overlay("snapshots", &args.snapshots);
    settings.overlay("probes", &args.probes);
    settings.overlay("out", &args.out.as_ref().map(|p| p.display().to_string()));
    settings
}

struct ResolvedCommon {
    scheme: TimeScheme,
    kappa: f64,
    steps: usize,
    eps: f64,
    symbol: cq_harness::registry::SymbolEntry,
    signal_name: String,
    out_dir: PathBuf,
}

fn resolve_common(settings: &Settings) -> Result<ResolvedCommon, HarnessError> {
    let scheme_name = settings.string_or("scheme", "bdf2");
    let scheme = TimeScheme::from_name(&scheme_name)
        .ok_or_else(|| config_error(format!("unknown scheme '{scheme_name}'")))?;
    let symbol_name = settings.string_or("symbol", "resolvent");
    let symbol = symbol_by_name(&symbol_name).ok_or_else(|| {
        config_error(format!(
            "unknown symbol '{symbol_name}' (available: {})",
            SYMBOL_NAMES.join(", ")
        ))
    })?;
    Ok(ResolvedCommon {
        scheme,
        kappa: settings.positive_f64_or("kappa", 0.1)?,
        steps: settings.usize_or("steps", 64)?,
        eps: settings.positive_f64_or("eps", f64::EPSILON)?,
        symbol,
        signal_name: settings.string_or("signal", cq_harness::registry::DEFAULT_SIGNAL),
        out_dir: PathBuf::from(settings.string_or("out", "cq-out")),
    })
}

fn resolve_signal(name: &str) -> Result<cq_harness::registry::Signal, HarnessError> {
    signal_by_name(name).ok_or_else(|| {
        config_error(format!(
            "unknown signal '{name}' (available: {})",
            SIGNAL_NAMES.join(", ")
        ))
    })
}

fn cmd_weights(settings: Settings) -> Result<(), HarnessError> {
    let cfg = resolve_common(&settings)?;
    let table = match &cfg.scheme {
        TimeScheme::Multistep(delta) => cq_weights(
            cfg.symbol.symbol.as_ref(),
            *delta,
            cfg.kappa,
            cfg.steps,
            cfg.eps,
        )?,
        TimeScheme::RungeKutta(tableau) => rk_cq_weights(
            cfg.symbol.symbol.as_ref(),
            tableau,
            cfg.kappa,
            cfg.steps,
            cfg.eps,
        )?,
    };
    std::fs::create_dir_all(&cfg.out_dir)?;
    let path = cfg.out_dir.join("weights.csv");
    std::fs::write(&path, table.to_csv())?;
    println!("weights: wrote {}", path.display());
    Ok(())
}

/// `convolve` and `solve` share everything but the engine entry point.
fn cmd_forward(settings: Settings, solve: bool) -> Result<(), HarnessError> {
    let cfg = resolve_common(&settings)?;
    let signal = resolve_signal(&cfg.signal_name)?;
    let block = settings.usize_or("block", 0)?;

    let values: Vec<Complex64> = match &cfg.scheme {
        TimeScheme::Multistep(delta) => {
            let samples: Vec<Complex64> = (0..=cfg.steps)
                .map(|n| Complex64::from(signal(n as f64 * cfg.kappa)))
                .collect();
            let data = scalar_samples(&samples);
            let y = match (solve, block) {
                (false, _) => {
                    all_steps_forward(cfg.symbol.symbol.as_ref(), *delta, cfg.kappa, &data, cfg.eps)?
                }
                (true, 0) => {
                    all_steps_solve(cfg.symbol.symbol.as_ref(), *delta, cfg.kappa, &data, cfg.eps)?
                }
                (true, b) => look_ahead_solve(
                    cfg.symbol.symbol.as_ref(),
                    *delta,
                    cfg.kappa,
                    &data,
                    b,
                    cfg.eps,
                )?,
            };
            scalar_values(&y)
        }
        TimeScheme::RungeKutta(tableau) => {
            if block != 0 {
                return Err(config_error(
                    "block (look-ahead) applies to multistep schemes only".to_string(),
                ));
            }
            let stages = scalar_stage_samples(
                |t| Complex64::from(signal(t)),
                tableau,
                cfg.kappa,
                cfg.steps,
            );
            let stage_y = if solve {
                rk_solve(cfg.symbol.symbol.as_ref(), tableau, cfg.kappa, &stages, cfg.eps)?
            } else {
                rk_forward(cfg.symbol.symbol.as_ref(), tableau, cfg.kappa, &stages, cfg.eps)?
            };
            scalar_values(&step_values(tableau, &stage_y)?)
        }
    };

    std::fs::create_dir_all(&cfg.out_dir)?;
    let name = if solve { "solve.csv" } else { "convolve.csv" };
    let path = cfg.out_dir.join(name);
    let times: Vec<f64> = (0..values.len()).map(|n| n as f64 * cfg.kappa).collect();
    io::write_csv(
        &path,
        &["t".to_string(), "re".to_string(), "im".to_string()],
        times.iter().zip(&values).map(|(t, v)| {
            vec![
                io::format_f64(*t),
                io::format_f64(v.re),
                io::format_f64(v.im),
            ]
        }),
    )?;
    println!(
        "{}: wrote {}",
        if solve { "solve" } else { "convolve" },
        path.display()
    );
    Ok(())
}

fn cmd_converge(settings: Settings) -> Result<(), HarnessError> {
    let scheme = settings.string_or("scheme", "bdf2");
    let symbol = settings.string_or("symbol", "resolvent");
    let signal = settings.string_or("signal", cq_harness::registry::DEFAULT_SIGNAL);
    let mut cfg = StudyConfig::new(
        &scheme,
        &symbol,
        &signal,
        settings.positive_f64_or("kappa", 0.05)?,
        settings.positive_f64_or("final-time", 2.0)?,
    );
    cfg.eps = settings.positive_f64_or("eps", f64::EPSILON)?;
    cfg.levels = settings.usize_or("levels", 4)?;
    let report = run_convergence(&cfg)?;

    let out_dir = PathBuf::from(settings.string_or("out", "cq-out"));
    std::fs::create_dir_all(&out_dir)?;
    let path = out_dir.join("convergence.csv");
    std::fs::write(&path, report.to_csv())?;
    println!(
        "converge: scheme={scheme} symbol={symbol} median_order={} wrote {}",
        io::format_f64(report.median_order()),
        path.display()
    );
    Ok(())
}

fn cmd_scatter(settings: Settings) -> Result<(), HarnessError> {
    let artifacts = run_scatter(&settings)?;
    println!(
        "scatter: wrote {} time nodes to {}",
        artifacts.solution.times.len(),
        artifacts.out_dir.display()
    );
    match artifacts.causality_ratio {
        Some(ratio) => println!(
            "scatter: causality pre-arrival density / peak = {}",
            io::format_f64(ratio)
        ),
        None => println!("scatter: causality diagnostic not applicable (no pre-arrival nodes)"),
    }
    match artifacts.extinction_ratio {
        Some(ratio) => println!(
            "scatter: extinction sup|U + u_inc| / sup|u_inc| over interior probes = {}",
            io::format_f64(ratio)
        ),
        None => println!("scatter: extinction diagnostic not applicable (no interior probes)"),
    }
    Ok(())
}
