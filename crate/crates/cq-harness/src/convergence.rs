//! Convergence studies: run one scheme on one symbol at a halving sequence
//! of time steps, measure the discrete sup error over the step nodes in
//! `[0, T]` against the quadrature oracle, and report the observed order
//! `log2(e(kappa) / e(kappa/2))` for each consecutive pair.

use std::collections::HashMap;

use cq_engine::multistep::{all_steps_forward, scalar_samples, scalar_values};
use cq_engine::runge_kutta::{rk_forward, scalar_stage_samples, step_values};
use cq_engine::scattering::TimeScheme;
use num_complex::Complex64;

use crate::oracle::{OracleKernel, DEFAULT_TOL};
use crate::registry::{signal_by_name, symbol_by_name, Signal};
use crate::{config_error, HarnessError};

/// Parameters of one study.
#[derive(Clone, Debug)]
pub struct StudyConfig {
    pub scheme: String,
    pub symbol: String,
    pub signal: String,
    /// Coarsest time step; levels halve from here.
    pub kappa0: f64,
    pub final_time: f64,
    /// Number of runs (levels >= 4 gives the required >= 3 order pairs).
    pub levels: usize,
    pub eps: f64,
}

impl StudyConfig {
    pub fn new(scheme: &str, symbol: &str, signal: &str, kappa0: f64, final_time: f64) -> Self {
        StudyConfig {
            scheme: scheme.into(),
            symbol: symbol.into(),
            signal: signal.into(),
            kappa0,
            final_time,
            levels: 4,
            eps: f64::EPSILON,
        }
    }
}

/// One refinement level of a study.
#[derive(Clone, Debug)]
pub struct ConvergenceRow {
    pub kappa: f64,
    pub error: f64,
    /// `log2(previous error / this error)`; absent on the first row.
    pub observed_order: Option<f64>,
}

/// Study results plus the metadata needed to reproduce them.
#[derive(Clone, Debug)]
pub struct ConvergenceReport {
    pub scheme: String,
    pub symbol: String,
    pub signal: String,
    pub final_time: f64,
    /// Error norm identifier (always the discrete sup over step nodes).
    pub norm: String,
    pub rows: Vec<ConvergenceRow>,
}

impl ConvergenceReport {
    /// The per-pair observed orders, in refinement order.
    pub fn pair_orders(&self) -> Vec<f64> {
        self.rows
            .iter()
            .filter_map(|r| r.observed_order)
            .collect()
    }

    /// Median of the pair orders — the aggregate checked against
    /// published-order thresholds (robust to one pre-asymptotic pair).
    pub fn median_order(&self) -> f64 {
        let mut orders = self.pair_orders();
        orders.sort_by(f64::total_cmp);
        orders[orders.len() / 2]
    }

    /// CSV serialisation: `# key=value` metadata lines, a header row, then
    /// one row per refinement level (LF endings, `.` decimals).
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("# scheme={}\n", self.scheme));
        out.push_str(&format!("# symbol={}\n", self.symbol));
        out.push_str(&format!("# signal={}\n", self.signal));
        out.push_str(&format!("# final_time={}\n", self.final_time));
        out.push_str(&format!("# norm={}\n", self.norm));
        out.push_str("kappa,error,observed_order\n");
        for row in &self.rows {
            match row.observed_order {
                Some(order) => {
                    out.push_str(&format!("{},{},{}\n", row.kappa, row.error, order))
                }
                None => out.push_str(&format!("{},{},\n", row.kappa, row.error)),
            }
        }
        out
    }
}

/// Runs the full study.  Errors out (never fabricates an order) when the
/// symbol has no oracle kernel, when a level's error is NaN or exactly
/// zero, or when fewer than 3 order pairs would result.
pub fn run_convergence(cfg: &StudyConfig) -> Result<ConvergenceReport, HarnessError> {
    if cfg.levels < 4 {
        return Err(config_error(format!(
            "a study needs at least 4 levels (3 order pairs), got {}",
            cfg.levels
        )));
    }
    if !(cfg.kappa0 > 0.0) || !(cfg.final_time > 0.0) {
        return Err(config_error(
            "kappa and final time must be positive".to_string(),
        ));
    }
    let entry = symbol_by_name(&cfg.symbol)
        .ok_or_else(|| config_error(format!("unknown symbol '{}'", cfg.symbol)))?;
    let kernel = entry.kernel.ok_or_else(|| {
        config_error(format!(
            "symbol '{}' has no closed-form oracle kernel; convergence runs need one",
            cfg.symbol
        ))
    })?;
    let signal = signal_by_name(&cfg.signal)
        .ok_or_else(|| config_error(format!("unknown signal '{}'", cfg.signal)))?;
    let scheme = TimeScheme::from_name(&cfg.scheme)
        .ok_or_else(|| config_error(format!("unknown scheme '{}'", cfg.scheme)))?;

    run_resolved(cfg, &entry.symbol, kernel, &signal, &scheme)
}

/// Study body once every name has been resolved; separated so tests can
/// inject signals outside the registry.
fn run_resolved(
    cfg: &StudyConfig,
    symbol: &std::sync::Arc<dyn cq_engine::symbol::Symbol>,
    kernel: OracleKernel,
    signal: &Signal,
    scheme: &TimeScheme,
) -> Result<ConvergenceReport, HarnessError> {
    let mut reference_cache: HashMap<u64, f64> = HashMap::new();
    let mut rows: Vec<ConvergenceRow> = Vec::with_capacity(cfg.levels);
    let mut kappa = cfg.kappa0;
    for _ in 0..cfg.levels {
        let steps = (cfg.final_time / kappa).round() as usize;
        if steps < 2 {
            return Err(config_error(format!(
                "final time {} spans fewer than 2 steps of kappa = {kappa}",
                cfg.final_time
            )));
        }
        let computed = scheme_forward(scheme, symbol, signal, kappa, steps, cfg.eps)?;

        let mut err = 0.0f64;
        for (n, y) in computed.iter().enumerate() {
            let t = n as f64 * kappa;
            let reference = match reference_cache.get(&t.to_bits()) {
                Some(&v) => v,
                None => {
                    let v = kernel.convolve(signal.as_ref(), t, DEFAULT_TOL)?;
                    reference_cache.insert(t.to_bits(), v);
                    v
                }
            };
            err = err.max((y - Complex64::from(reference)).norm());
        }
        if !err.is_finite() || err == 0.0 {
            return Err(HarnessError::Report {
                detail: format!(
                    "error at kappa = {kappa} is {err}; observed orders would be meaningless"
                ),
            });
        }
        let observed_order = rows
            .last()
            .map(|prev: &ConvergenceRow| (prev.error / err).log2());
        rows.push(ConvergenceRow {
            kappa,
            error: err,
            observed_order,
        });
        kappa *= 0.5;
    }

    Ok(ConvergenceReport {
        scheme: cfg.scheme.clone(),
        symbol: cfg.symbol.clone(),
        signal: cfg.signal.clone(),
        final_time: cfg.final_time,
        norm: "sup-step-nodes".into(),
        rows,
    })
}

/// Step-node values of the discrete convolution for either scheme family.
fn scheme_forward(
    scheme: &TimeScheme,
    symbol: &std::sync::Arc<dyn cq_engine::symbol::Symbol>,
    signal: &Signal,
    kappa: f64,
    steps: usize,
    eps: f64,
) -> Result<Vec<Complex64>, HarnessError> {
    match scheme {
        TimeScheme::Multistep(delta) => {
            let samples: Vec<Complex64> = (0..=steps)
                .map(|n| Complex64::from(signal(n as f64 * kappa)))
                .collect();
            let data = scalar_samples(&samples);
            let y = all_steps_forward(symbol.as_ref(), *delta, kappa, &data, eps)?;
            Ok(scalar_values(&y))
        }
        TimeScheme::RungeKutta(tableau) => {
            let stages = scalar_stage_samples(
                |t| Complex64::from(signal(t)),
                tableau,
                kappa,
                steps,
            );
            let stage_y = rk_forward(symbol.as_ref(), tableau, kappa, &stages, eps)?;
            let nodes = step_values(tableau, &stage_y)?;
            Ok(scalar_values(&nodes))
        }
    }
}
