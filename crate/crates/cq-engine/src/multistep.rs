//! Multistep convolution quadrature.
//!
//! A multistep ODE integrator with characteristic function `delta(zeta)`
//! turns a transfer function `F` into a discrete convolution: the weights
//! `w_n` are the Taylor coefficients of `zeta -> F(delta(zeta)/kappa)` at the
//! origin, and the discretised causal convolution `y = f * g` becomes
//! `y_n = sum_{m<=n} w_m g_{n-m}`.
//!
//! Weights are recovered numerically by sampling the generating function on
//! the circle of radius `R` (see [`contour_radius`]) at the roots of unity
//! and applying a scaled inverse DFT.  The same scaled-transform trick
//! evaluates whole convolutions and solves whole convolution equations in
//! `O(N log N)` symbol applications:
//!
//! * [`cq_weights`] — tabulated weights, with the exact leading weight
//!   `w_0 = F(delta(0)/kappa)` substituted for its contour approximation;
//! * [`forward_convolution_mot`] / [`solve_equation_mot`] — direct
//!   triangular (marching-on-in-time) paths, used as cross-checks and
//!   whenever exact discrete causality matters;
//! * [`all_steps_forward`] / [`all_steps_solve`] — FFT evaluation of all
//!   steps at once, solving one small linear system per frequency node;
//! * [`convolution_piece`] — the influence of known history `u_0..u_Q` on
//!   later indices, again by FFT;
//! * [`look_ahead_solve`] — a blocked solver mixing short direct solves
//!   with FFT pieces.
//!
//! The choice of radius balances the aliasing error `R^(N+1)` of the
//! truncated Taylor series against the roundoff amplification
//! `eps * R^(-N)` of the rescaling, which lands all contour-based paths at
//! an accuracy floor of about `sqrt(eps)`; the tolerances quoted in the
//! tests come from that floor, not from the schemes themselves.

use nalgebra::DVector;
use num_complex::Complex64;
use rayon::prelude::*;
use thiserror::Error;

use crate::dft::{dft, idft};
use crate::symbol::{CMatrix, Symbol, SymbolError};
use crate::weights::WeightTable;

/// Complex column vector: one sample of vector-valued data.
pub type CVector = DVector<Complex64>;

/// Default accuracy parameter for contour-based algorithms (binary64
/// machine epsilon, `2^-52`).
pub const DEFAULT_EPS: f64 = f64::EPSILON;

#[derive(Debug, Error)]
pub enum CqError {
    #[error("symbol evaluation failed at contour node {node}: {source}")]
    NodeEval {
        node: usize,
        #[source]
        source: SymbolError,
    },
    #[error(
        "contour node {node} maps to s = {s} outside the right half-plane; \
         the generator is not A-stable at this radius"
    )]
    NodeOutsideHalfPlane { node: usize, s: Complex64 },
    #[error("singular linear system at contour node {node} (s = {s})")]
    SingularNode { node: usize, s: Complex64 },
    #[error("leading weight w_0 is singular; the convolution equation cannot be marched")]
    SingularLeadingWeight,
    #[error("dimension mismatch: {detail}")]
    Dimension { detail: String },
    #[error("invalid argument: {detail}")]
    InvalidArgument { detail: String },
    #[error("invalid tableau: {detail}")]
    TableauInvalid { detail: String },
    #[error(
        "eigendecomposition ill-conditioned at contour node {node}: {detail}; \
         retried with nudged radii without success"
    )]
    EigenIllConditioned { node: usize, detail: String },
}

// ---------------------------------------------------------------------------
// Generators
// ---------------------------------------------------------------------------

/// Characteristic function `delta(zeta)` of a multistep method.
///
/// `BackwardEuler`, `Bdf2` and `Trapezoidal` are A-stable and map the open
/// unit disk into the right half-plane, which is what the contour algorithms
/// require.  Higher-order BDF formulas are provided for completeness but are
/// only A(alpha)-stable; [`DeltaGenerator::a_stable`] reports `false` for
/// them and node generation fails cleanly if a contour leaves the
/// half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaGenerator {
    BackwardEuler,
    Bdf2,
    Trapezoidal,
    /// BDF formula of order `p` (3 to 6): `delta(zeta) = sum_{l=1}^{p} (1-zeta)^l / l`.
    Bdf(u8),
}

impl DeltaGenerator {
    /// Parse a scheme label as used on command lines and in weight tables.
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "be" | "bdf1" => Some(Self::BackwardEuler),
            "bdf2" => Some(Self::Bdf2),
            "tr" | "trapezoidal" => Some(Self::Trapezoidal),
            "bdf3" => Some(Self::Bdf(3)),
            "bdf4" => Some(Self::Bdf(4)),
            "bdf5" => Some(Self::Bdf(5)),
            "bdf6" => Some(Self::Bdf(6)),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::BackwardEuler => "be",
            Self::Bdf2 => "bdf2",
            Self::Trapezoidal => "tr",
            Self::Bdf(3) => "bdf3",
            Self::Bdf(4) => "bdf4",
            Self::Bdf(5) => "bdf5",
            Self::Bdf(6) => "bdf6",
            Self::Bdf(p) => panic!("unsupported BDF order {p}"),
        }
    }

    /// Evaluate `delta(zeta)`.
    pub fn eval(&self, zeta: Complex64) -> Complex64 {
        match self {
            Self::BackwardEuler => 1.0 - zeta,
            Self::Bdf2 => 1.5 - 2.0 * zeta + 0.5 * zeta * zeta,
            Self::Trapezoidal => 2.0 * (1.0 - zeta) / (1.0 + zeta),
            Self::Bdf(p) => {
                let w = 1.0 - zeta;
                let mut pow = Complex64::ONE;
                let mut acc = Complex64::ZERO;
                for l in 1..=*p {
                    pow *= w;
                    acc += pow / l as f64;
                }
                acc
            }
        }
    }

    /// `delta(0)`, the value defining the exact leading weight.
    pub fn delta_at_zero(&self) -> f64 {
        match self {
            Self::BackwardEuler => 1.0,
            Self::Bdf2 => 1.5,
            Self::Trapezoidal => 2.0,
            Self::Bdf(p) => (1..=*p).map(|l| 1.0 / l as f64).sum(),
        }
    }

    /// Classical convergence order of the underlying ODE method.
    pub fn order(&self) -> usize {
        match self {
            Self::BackwardEuler => 1,
            Self::Bdf2 | Self::Trapezoidal => 2,
            Self::Bdf(p) => *p as usize,
        }
    }

    /// Whether the method is A-stable (maps the open unit disk into the
    /// right half-plane).  BDF formulas of order three and up are not, and
    /// are therefore excluded from wave-propagation defaults.
    pub fn a_stable(&self) -> bool {
        !matches!(self, Self::Bdf(_))
    }

    /// First `count` Taylor coefficients of `delta(zeta)` at the origin.
    pub fn taylor_coefficients(&self, count: usize) -> Vec<f64> {
        let mut out = vec![0.0; count];
        match self {
            Self::BackwardEuler => {
                if count > 0 {
                    out[0] = 1.0;
                }
                if count > 1 {
                    out[1] = -1.0;
                }
            }
            Self::Bdf2 => {
                for (ix, v) in [1.5, -2.0, 0.5].into_iter().enumerate().take(count) {
                    out[ix] = v;
                }
            }
            Self::Trapezoidal => {
                // 2(1-zeta)/(1+zeta) = 2 + 4 * sum_{n>=1} (-1)^n zeta^n.
                if count > 0 {
                    out[0] = 2.0;
                }
                for (n, v) in out.iter_mut().enumerate().skip(1) {
                    *v = if n % 2 == 1 { -4.0 } else { 4.0 };
                }
            }
            Self::Bdf(p) => {
                // Accumulate sum_l (1-zeta)^l / l by repeated polynomial
                // multiplication with (1 - zeta).
                let deg = *p as usize;
                let mut pow = vec![0.0; deg + 1];
                pow[0] = 1.0;
                let mut coeffs = vec![0.0; deg + 1];
                for l in 1..=deg {
                    for k in (1..=l).rev() {
                        pow[k] = pow[k] - pow[k - 1];
                    }
                    // pow now holds (1-zeta)^l.
                    for (k, c) in pow.iter().enumerate().take(l + 1) {
                        coeffs[k] += c / l as f64;
                    }
                }
                for (ix, v) in coeffs.into_iter().enumerate().take(count) {
                    out[ix] = v;
                }
            }
        }
        out
    }

    /// Sample `Re delta(zeta) > 0` over the open unit disk; `true` when the
    /// sector condition held at every sample.  A cheap structural check for
    /// the A-stability claim, not a proof.
    pub fn sector_condition_sampled(&self) -> bool {
        for &r in &[0.1, 0.3, 0.6, 0.9, 0.99] {
            for k in 0..512 {
                let th = 2.0 * std::f64::consts::PI * k as f64 / 512.0;
                let zeta = Complex64::from_polar(r, th);
                if self.eval(zeta).re <= 0.0 {
                    return false;
                }
            }
        }
        true
    }
}

// ---------------------------------------------------------------------------
// Contour machinery
// ---------------------------------------------------------------------------

/// Radius `R = eps^(1/(2(N+1)))` of the sampling circle: the value that
/// balances series truncation (`R^(N+1)`) against roundoff amplification
/// (`eps / R^N`), yielding roughly `sqrt(eps)` accuracy for the weights.
pub fn contour_radius(n: usize, eps: f64) -> f64 {
    assert!(eps > 0.0 && eps < 1.0, "eps must lie in (0,1), got {eps}");
    eps.powf(1.0 / (2.0 * (n as f64 + 1.0)))
}

/// `zeta_len^(-l) = exp(-2 pi i l / len)`.
pub(crate) fn unit_root_neg(l: usize, len: usize) -> Complex64 {
    let ang = -2.0 * std::f64::consts::PI * l as f64 / len as f64;
    Complex64::new(ang.cos(), ang.sin())
}

/// Frequency node `s_l = delta(R zeta^(-l)) / kappa` for index `l`.
pub(crate) fn contour_node(
    delta: DeltaGenerator,
    kappa: f64,
    radius: f64,
    l: usize,
    len: usize,
) -> Complex64 {
    delta.eval(radius * unit_root_neg(l, len)) / kappa
}

/// Evaluate `F` at every contour node `s_l`, `l = 0..=n`.
///
/// For conjugate-symmetric symbols only the first half of the circle is
/// evaluated and the rest is filled by entrywise conjugation, because the
/// generators have real coefficients and hence `s_(len-l) = conj(s_l)`.
/// Node evaluations are independent and dispatched in parallel; the output
/// ordering (and therefore every downstream result) does not depend on the
/// worker count.
pub(crate) fn symbol_contour_nodes(
    f: &dyn Symbol,
    delta: DeltaGenerator,
    kappa: f64,
    n: usize,
    radius: f64,
) -> Result<Vec<CMatrix>, CqError> {
    let len = n + 1;
    let last = if f.conjugate_symmetric() { len / 2 } else { n };

    let eval_one = |l: usize| -> Result<CMatrix, CqError> {
        let s = contour_node(delta, kappa, radius, l, len);
        if s.re <= 0.0 {
            return Err(CqError::NodeOutsideHalfPlane { node: l, s });
        }
        f.eval(s).map_err(|source| CqError::NodeEval { node: l, source })
    };

    let evaluated: Vec<Result<CMatrix, CqError>> = if last >= 32 {
        (0..=last).into_par_iter().map(eval_one).collect()
    } else {
        (0..=last).map(eval_one).collect()
    };
    let mut nodes = Vec::with_capacity(len);
    for r in evaluated {
        nodes.push(r?);
    }
    for l in last + 1..len {
        let mirrored = nodes[len - l].map(|v| v.conj());
        nodes.push(mirrored);
    }
    Ok(nodes)
}

/// Scaled inverse transform of the node values: `w_n = R^(-n) idft(Fh)_n`
/// applied entrywise to the matrix sequence.
pub(crate) fn weights_from_nodes(nodes: &[CMatrix], radius: f64) -> Vec<CMatrix> {
    let len = nodes.len();
    let (rows, cols) = (nodes[0].nrows(), nodes[0].ncols());
    let mut out = vec![CMatrix::zeros(rows, cols); len];
    let mut series = vec![Complex64::ZERO; len];
    for r in 0..rows {
        for c in 0..cols {
            for (l, node) in nodes.iter().enumerate() {
                series[l] = node[(r, c)];
            }
            let coeffs = idft(&series);
            let mut scale = 1.0;
            for (n, w) in out.iter_mut().enumerate() {
                w[(r, c)] = coeffs[n] * scale;
                if n + 1 < len {
                    scale /= radius;
                }
            }
        }
    }
    out
}

/// Quadrature weights `w_0..w_N` of the symbol `f` under the generator
/// `delta` at step `kappa`, by contour sampling at radius
/// [`contour_radius`]`(N, eps)`.
///
/// The leading weight is replaced by its exact value `F(delta(0)/kappa)`,
/// which removes the contour error from the dominant diagonal of the
/// marching solver.
pub fn cq_weights(
    f: &dyn Symbol,
    delta: DeltaGenerator,
    kappa: f64,
    n: usize,
    eps: f64,
) -> Result<WeightTable, CqError> {
    check_kappa(kappa)?;
    let radius = contour_radius(n, eps);
    let nodes = symbol_contour_nodes(f, delta, kappa, n, radius)?;
    let mut weights = weights_from_nodes(&nodes, radius);

    let s0 = Complex64::new(delta.delta_at_zero() / kappa, 0.0);
    weights[0] = f
        .eval(s0)
        .map_err(|source| CqError::NodeEval { node: 0, source })?;

    Ok(WeightTable {
        kind: delta.name().to_string(),
        kappa,
        radius,
        eps,
        weights,
    })
}

pub(crate) fn check_kappa(kappa: f64) -> Result<(), CqError> {
    if kappa > 0.0 && kappa.is_finite() {
        Ok(())
    } else {
        Err(CqError::InvalidArgument {
            detail: format!("time step must be positive and finite, got {kappa}"),
        })
    }
}

// ---------------------------------------------------------------------------
// Marching paths (exact triangular semantics)
// ---------------------------------------------------------------------------

pub(crate) fn check_samples(dim: usize, data: &[CVector], what: &str) -> Result<(), CqError> {
    if data.is_empty() {
        return Err(CqError::InvalidArgument {
            detail: format!("{what}: empty sample sequence"),
        });
    }
    for (ix, v) in data.iter().enumerate() {
        if v.len() != dim {
            return Err(CqError::Dimension {
                detail: format!(
                    "{what}: sample {ix} has dimension {}, expected {dim}",
                    v.len()
                ),
            });
        }
    }
    Ok(())
}

/// Direct triangular evaluation `y_n = sum_{m=0}^{n} w_m g_{n-m}`.
///
/// Exactly lower-triangular: `y_n` depends on `g_0..g_n` only, so causal
/// (identically zero) input prefixes produce exactly zero output prefixes.
pub fn forward_convolution_mot(
    table: &WeightTable,
    g: &[CVector],
) -> Result<Vec<CVector>, CqError> {
    let (rows, cols) = table.shape();
    check_samples(cols, g, "forward convolution data")?;
    let n_out = g.len();
    let mut y = vec![CVector::zeros(rows); n_out];
    for n in 0..n_out {
        let mut acc = CVector::zeros(rows);
        for m in 0..=n.min(table.n_max()) {
            acc += &table.weights[m] * &g[n - m];
        }
        y[n] = acc;
    }
    Ok(y)
}

/// Forward substitution for `sum_{m<=n} w_m g_{n-m} = h_n`: the
/// marching-on-in-time scheme.  `w_0` is factored once and reused.
///
/// Like the forward path this is exactly lower-triangular, so it preserves
/// discrete causality bit for bit: zero rows of `h` ahead of the signal
/// arrival produce exactly zero rows of `g`.
pub fn solve_equation_mot(table: &WeightTable, h: &[CVector]) -> Result<Vec<CVector>, CqError> {
    let (rows, cols) = table.shape();
    if rows != cols {
        return Err(CqError::Dimension {
            detail: format!("equation solving needs square weights, got {rows} x {cols}"),
        });
    }
    check_samples(rows, h, "equation right-hand side")?;
    let lu = table.weights[0].clone().lu();
    let n_out = h.len();
    let mut g: Vec<CVector> = Vec::with_capacity(n_out);
    for n in 0..n_out {
        let mut rhs = h[n].clone();
        for m in 1..=n.min(table.n_max()) {
            rhs -= &table.weights[m] * &g[n - m];
        }
        match lu.solve(&rhs) {
            Some(sol) => g.push(sol),
            None => return Err(CqError::SingularLeadingWeight),
        }
    }
    Ok(g)
}

// ---------------------------------------------------------------------------
// All-steps-at-once paths
// ---------------------------------------------------------------------------

/// Forward transform of each vector component along the time axis.
fn dft_components(data: &[CVector]) -> Vec<CVector> {
    transform_components(data, dft)
}

/// Inverse transform of each vector component along the time axis.
fn idft_components(data: &[CVector]) -> Vec<CVector> {
    transform_components(data, idft)
}

fn transform_components(
    data: &[CVector],
    tr: fn(&[Complex64]) -> Vec<Complex64>,
) -> Vec<CVector> {
    let len = data.len();
    let dim = data[0].len();
    let mut out = vec![CVector::zeros(dim); len];
    let mut series = vec![Complex64::ZERO; len];
    for c in 0..dim {
        for (n, v) in data.iter().enumerate() {
            series[n] = v[c];
        }
        let transformed = tr(&series);
        for (n, v) in transformed.into_iter().enumerate() {
            out[n][c] = v;
        }
    }
    out
}

/// Shared scaled-transform skeleton: scale by `R^m`, transform, apply a
/// per-frequency linear map, transform back, unscale by `R^(-n)`.
///
/// The per-node operations are independent; they are dispatched in parallel
/// for large state dimensions and the result is identical to the sequential
/// order in either case.
pub(crate) fn all_steps_apply<Op>(
    op: Op,
    radius: f64,
    data: &[CVector],
    out_dim: usize,
) -> Result<Vec<CVector>, CqError>
where
    Op: Fn(usize, &CVector) -> Result<CVector, CqError> + Sync,
{
    let len = data.len();
    let mut scaled: Vec<CVector> = Vec::with_capacity(len);
    let mut scale = 1.0;
    for v in data {
        scaled.push(v * Complex64::from(scale));
        scale *= radius;
    }
    let spectrum = dft_components(&scaled);

    let applied: Vec<Result<CVector, CqError>> = if out_dim >= 8 && len >= 32 {
        spectrum
            .par_iter()
            .enumerate()
            .map(|(l, v)| op(l, v))
            .collect()
    } else {
        spectrum.iter().enumerate().map(|(l, v)| op(l, v)).collect()
    };
    let mut mapped = Vec::with_capacity(len);
    for r in applied {
        mapped.push(r?);
    }

    let mut out = idft_components(&mapped);
    let mut unscale = 1.0;
    for v in out.iter_mut() {
        *v *= Complex64::from(unscale);
        unscale /= radius;
    }
    Ok(out)
}

/// All steps of the forward convolution `u_n = sum_{m<=n} w_m g_{n-m}` at
/// once: one symbol evaluation and one matrix-vector product per frequency
/// node, two transforms overall.
///
/// Agrees with [`forward_convolution_mot`] on the weights of [`cq_weights`]
/// up to the `sqrt(eps)` contour floor.
pub fn all_steps_forward(
    f: &dyn Symbol,
    delta: DeltaGenerator,
    kappa: f64,
    g: &[CVector],
    eps: f64,
) -> Result<Vec<CVector>, CqError> {
    check_kappa(kappa)?;
    let (rows, cols) = f.dims();
    check_samples(cols, g, "forward convolution data")?;
    let n = g.len() - 1;
    let radius = contour_radius(n, eps);
    let nodes = symbol_contour_nodes(f, delta, kappa, n, radius)?;
    all_steps_apply(|l, v| Ok(&nodes[l] * v), radius, g, rows)
}

/// All steps of the convolution equation `sum_{m<=n} w_m g_{n-m} = h_n` at
/// once: per frequency node one LU factorisation and one solve (inverses are
/// never formed).
pub fn all_steps_solve(
    f: &dyn Symbol,
    delta: DeltaGenerator,
    kappa: f64,
    h: &[CVector],
    eps: f64,
) -> Result<Vec<CVector>, CqError> {
    check_kappa(kappa)?;
    let (rows, cols) = f.dims();
    if rows != cols {
        return Err(CqError::Dimension {
            detail: format!("equation solving needs a square symbol, got {rows} x {cols}"),
        });
    }
    check_samples(rows, h, "equation right-hand side")?;
    let n = h.len() - 1;
    let radius = contour_radius(n, eps);
    let nodes = symbol_contour_nodes(f, delta, kappa, n, radius)?;
    let factors: Vec<_> = nodes.iter().map(|m| m.clone().lu()).collect();
    all_steps_apply(
        |l, v| {
            factors[l].solve(v).ok_or_else(|| CqError::SingularNode {
                node: l,
                s: contour_node(delta, kappa, radius, l, h.len()),
            })
        },
        radius,
        h,
        rows,
    )
}

/// Influence of the history `u_0..u_Q` on the later indices
/// `n = Q+1..=m_last`: returns `g_n = sum_{m=0}^{Q} w_(n-m) u_m` as a
/// sequence of length `m_last - Q`.
///
/// `n` is the size parameter of the shared contour (`n >= m_last` required)
/// so a blocked solver can reuse one radius throughout.  The history length
/// determines `Q = u.len() - 1`.
pub fn convolution_piece(
    f: &dyn Symbol,
    delta: DeltaGenerator,
    kappa: f64,
    u: &[CVector],
    m_last: usize,
    n: usize,
    eps: f64,
) -> Result<Vec<CVector>, CqError> {
    check_kappa(kappa)?;
    let (rows, cols) = f.dims();
    check_samples(cols, u, "convolution history")?;
    let q = u.len() - 1;
    if q >= m_last || m_last > n {
        return Err(CqError::InvalidArgument {
            detail: format!(
                "piece needs Q < M <= N, got Q = {q}, M = {m_last}, N = {n}"
            ),
        });
    }
    let radius = contour_radius(n, eps);
    let nodes = symbol_contour_nodes(f, delta, kappa, n, radius)?;
    Ok(piece_from_nodes(&nodes, radius, u, m_last, rows))
}

/// Piece evaluation against precomputed contour nodes (shared by
/// [`convolution_piece`] and [`look_ahead_solve`]).
pub(crate) fn piece_from_nodes(
    nodes: &[CMatrix],
    radius: f64,
    u: &[CVector],
    m_last: usize,
    out_dim: usize,
) -> Vec<CVector> {
    let len = nodes.len();
    let q = u.len() - 1;

    // Zero-extended, geometrically scaled history.
    let dim = u[0].len();
    let mut w = vec![CVector::zeros(dim); len];
    let mut scale = 1.0;
    for (m, v) in u.iter().enumerate() {
        w[m] = v * Complex64::from(scale);
        scale *= radius;
    }
    let what = dft_components(&w);

    // Multiply by the node matrices and the phase that shifts the output
    // window to start at index Q+1.
    let mut vhat = Vec::with_capacity(len);
    for (l, v) in what.iter().enumerate() {
        let ang = 2.0 * std::f64::consts::PI * (l * (q + 1) % len) as f64 / len as f64;
        let phase = Complex64::new(ang.cos(), ang.sin());
        vhat.push((&nodes[l] * v) * phase);
    }

    let back = idft_components(&vhat);
    let mut out = Vec::with_capacity(m_last - q);
    let mut unscale = radius.powi(-(q as i32 + 1));
    for item in back.iter().take(m_last - q) {
        out.push(item * Complex64::from(unscale));
        unscale /= radius;
    }
    let _ = out_dim;
    out
}

/// Blocked convolution-equation solver: direct forward substitution inside
/// blocks of `block` consecutive indices, FFT pieces to push each solved
/// block's influence onto the remaining right-hand side.
///
/// `block = N+1` degenerates to [`solve_equation_mot`] (one direct solve);
/// `block = 1` is marching with FFT look-ahead.  All choices agree with the
/// direct and all-steps paths up to the contour floor.
pub fn look_ahead_solve(
    f: &dyn Symbol,
    delta: DeltaGenerator,
    kappa: f64,
    h: &[CVector],
    block: usize,
    eps: f64,
) -> Result<Vec<CVector>, CqError> {
    check_kappa(kappa)?;
    let (rows, cols) = f.dims();
    if rows != cols {
        return Err(CqError::Dimension {
            detail: format!("equation solving needs a square symbol, got {rows} x {cols}"),
        });
    }
    check_samples(rows, h, "equation right-hand side")?;
    let n = h.len() - 1;
    if block == 0 || block > n + 1 {
        return Err(CqError::InvalidArgument {
            detail: format!("block size must lie in 1..=N+1, got {block} with N = {n}"),
        });
    }

    let radius = contour_radius(n, eps);
    let nodes = symbol_contour_nodes(f, delta, kappa, n, radius)?;
    let mut weights = weights_from_nodes(&nodes, radius);
    let s0 = Complex64::new(delta.delta_at_zero() / kappa, 0.0);
    weights[0] = f
        .eval(s0)
        .map_err(|source| CqError::NodeEval { node: 0, source })?;
    let lu = weights[0].clone().lu();

    let mut rhs: Vec<CVector> = h.to_vec();
    let mut g: Vec<CVector> = Vec::with_capacity(n + 1);
    let mut start = 0;
    while start <= n {
        let end = (start + block - 1).min(n); // inclusive block range start..=end

        // Direct forward substitution inside the block; earlier blocks are
        // already folded into rhs.
        for ix in start..=end {
            let mut b = rhs[ix].clone();
            for m in start..ix {
                b -= &weights[ix - m] * &g[m];
            }
            match lu.solve(&b) {
                Some(sol) => g.push(sol),
                None => return Err(CqError::SingularLeadingWeight),
            }
        }

        // Push the block's influence onto every remaining index via one
        // FFT piece of the shared contour.
        if end < n {
            let u = &g[start..=end];
            let piece = piece_from_nodes(&nodes, radius, u, n - start, rows);
            for (k, p) in piece.iter().enumerate() {
                let target = end + 1 + k;
                rhs[target] -= p;
            }
        }
        start = end + 1;
    }
    Ok(g)
}

// ---------------------------------------------------------------------------
// Scalar conveniences
// ---------------------------------------------------------------------------

/// Wrap scalar samples as 1-vectors.
pub fn scalar_samples(xs: &[Complex64]) -> Vec<CVector> {
    xs.iter().map(|&x| CVector::from_element(1, x)).collect()
}

/// Largest entry modulus of a complex vector.
pub fn sup_norm(v: &CVector) -> f64 {
    v.iter().map(|x| x.norm()).fold(0.0_f64, f64::max)
}

/// Largest entry modulus over a whole sample sequence.
pub fn sup_norm_seq(vs: &[CVector]) -> f64 {
    vs.iter().map(sup_norm).fold(0.0_f64, f64::max)
}

/// Unwrap 1-vector samples to scalars.
pub fn scalar_values(ys: &[CVector]) -> Vec<Complex64> {
    ys.iter().map(|y| y[0]).collect()
}
