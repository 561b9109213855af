//! Named signals and Laplace symbols available from the command line and
//! the convergence studies, together with their oracle kernels where a
//! closed-form causal kernel exists.

use std::sync::Arc;

use cq_engine::symbol::{self, Symbol};
use num_complex::Complex64;

use crate::oracle::OracleKernel;

/// A causal real-valued time signal.
pub type Signal = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

pub const DEFAULT_SIGNAL: &str = "poly5exp";

/// Resolves a signal name.  All registered signals vanish for `t <= 0`.
///
/// * `poly5exp`     — `t^5 e^(-t)`, the default study signal (C^4 onset).
/// * `poly5exp-mod` — `t^5 e^(-t) sin(6t)`, a modulated variant whose
///   higher derivatives stay large enough to keep high-order schemes off
///   the rounding floor.
/// * `one`          — unit step.
/// * `ramp`         — `t`.
pub fn signal_by_name(name: &str) -> Option<Signal> {
    match name {
        "poly5exp" => Some(Arc::new(|t: f64| {
            if t > 0.0 {
                t.powi(5) * (-t).exp()
            } else {
                0.0
            }
        })),
        "poly5exp-mod" => Some(Arc::new(|t: f64| {
            if t > 0.0 {
                t.powi(5) * (-t).exp() * (6.0 * t).sin()
            } else {
                0.0
            }
        })),
        "one" => Some(Arc::new(|t: f64| if t >= 0.0 { 1.0 } else { 0.0 })),
        "ramp" => Some(Arc::new(|t: f64| if t > 0.0 { t } else { 0.0 })),
        _ => None,
    }
}

/// A registered Laplace symbol plus, when available, the closed-form
/// causal kernel backing the quadrature oracle.
pub struct SymbolEntry {
    pub symbol: Arc<dyn Symbol>,
    pub kernel: Option<OracleKernel>,
}

/// Resolves a symbol name:
///
/// * `resolvent`      — `1/(s + 1)`; kernel `e^(-t)`.
/// * `oscillator`     — `1/(s^2 + 1)`; kernel `sin t`.
/// * `antiderivative` — `1/s`; kernel `1`.
/// * `halfint`        — `s^(-1/2)`; Abel kernel `1/sqrt(pi t)`.
/// * `halfderiv`      — `s^(1/2)`; no integrable kernel.
/// * `derivative`     — `s`; no integrable kernel.
/// * `delay`          — `e^(-s)`; kernel `delta(t - 1)`.
pub fn symbol_by_name(name: &str) -> Option<SymbolEntry> {
    match name {
        "resolvent" => Some(SymbolEntry {
            symbol: symbol::resolvent(Complex64::new(-1.0, 0.0)),
            kernel: Some(OracleKernel::Resolvent { c: -1.0 }),
        }),
        "oscillator" => Some(SymbolEntry {
            symbol: symbol::oscillator(1.0),
            kernel: Some(OracleKernel::Oscillator { c: 1.0 }),
        }),
        "antiderivative" => Some(SymbolEntry {
            symbol: symbol::resolvent(Complex64::ZERO),
            kernel: Some(OracleKernel::Resolvent { c: 0.0 }),
        }),
        "halfint" => Some(SymbolEntry {
            symbol: symbol::power(-0.5),
            kernel: Some(OracleKernel::Abel),
        }),
        "halfderiv" => Some(SymbolEntry {
            symbol: symbol::power(0.5),
            kernel: None,
        }),
        "derivative" => Some(SymbolEntry {
            symbol: symbol::power(1.0),
            kernel: None,
        }),
        "delay" => Some(SymbolEntry {
            symbol: symbol::delay(1.0),
            kernel: Some(OracleKernel::Delay { t0: 1.0 }),
        }),
        _ => None,
    }
}

/// Names accepted by [`symbol_by_name`], for error messages.
pub const SYMBOL_NAMES: &[&str] = &[
    "resolvent",
    "oscillator",
    "antiderivative",
    "halfint",
    "halfderiv",
    "derivative",
    "delay",
];

/// Names accepted by [`signal_by_name`], for error messages.
pub const SIGNAL_NAMES: &[&str] = &["poly5exp", "poly5exp-mod", "one", "ramp"];
