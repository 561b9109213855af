//! Time-domain sound-soft scattering from a smooth closed plane curve by
//! convolution quadrature in time and a fully discrete single-layer
//! calculus in space.
//!
//! The curve is given by a 1-periodic parametrisation `x(r)` with
//! non-vanishing derivative; the outward normal is `n = (x2', -x1')`.  The
//! spatial discretisation concentrates the density on `N` source points
//! `m_j = x(j h)`, `h = 1/N`, and observes on two staggered grids
//! `m_i^± = x((i ± 1/6) h)`, averaging observations as
//! `sum_± a_i^± = (a_i^+ + a_i^-)/2`; the offset keeps every kernel
//! evaluation away from the logarithmic singularity.  Two fixed tridiagonal
//! circulants enter the calculus: `M` (diagonal 7/9, neighbours 1/9) stands
//! in for the identity when densities on the source grid meet data on the
//! observation grids, and `Q` (diagonal 11/12, neighbours 1/24) corrects
//! the normal-derivative operator.
//!
//! In the Laplace domain (`Re s > 0`, wave speed `c`) the discrete
//! operators are built from modified Bessel kernels,
//!
//! ```text
//! V(s)_ij  = sum_± (1/(2 pi)) K_0(s |m_i^± - m_j|),
//! J°(s)_ij = sum_± (-s/(2 pi)) K_1(s |m_i^± - m_j|)
//!                  ((m_i^± - m_j) . n_i^±) / |m_i^± - m_j|,
//! J(s)     = Q J°(s),
//! (S(s) eta)(z) = (1/(2 pi)) sum_j K_0(s |z - m_j|) eta_j,
//! ```
//!
//! and the transient problem reads: find the causal density `eta` with
//! `(V_c * eta)(t) = -beta(t)` where `beta` samples the incident plane wave
//! on the observation grids; postprocess the scattered field
//! `U = S_c * eta` and the normal derivative from
//! `M lambda = -(1/2) M eta + (J_c * eta)`.  All three convolutions are
//! discretised by the convolution quadrature of the sibling modules —
//! multistep at step points or Runge-Kutta at stage points — either through
//! the FFT all-steps paths or by weight-table marching when exact discrete
//! causality of the computed history matters.

use std::sync::Arc;

use nalgebra::{DMatrix, DVector, Vector2};
use num_complex::Complex64;
use thiserror::Error;

use crate::bessel::{k0k1, BesselError};
use crate::multistep::{
    all_steps_forward, all_steps_solve, cq_weights, forward_convolution_mot, solve_equation_mot,
    CVector, CqError, DeltaGenerator,
};
use crate::runge_kutta::{rk_cq_weights, rk_forward, rk_solve, step_values, RkTableau};
use crate::symbol::{CMatrix, Symbol, SymbolError};

#[derive(Debug, Error)]
pub enum ScatteringError {
    #[error("geometry error: {detail}")]
    Geometry { detail: String },
    #[error("invalid argument: {detail}")]
    InvalidArgument { detail: String },
    #[error("kernel evaluation failed: {source}")]
    Kernel {
        #[from]
        source: BesselError,
    },
    #[error("convolution quadrature failed: {source}")]
    Quadrature {
        #[from]
        source: CqError,
    },
}

// ---------------------------------------------------------------------------
// Curves
// ---------------------------------------------------------------------------

/// Real trigonometric polynomial `a_0 + sum_k (a_k cos(2 pi k r) + b_k
/// sin(2 pi k r))`, used for one coordinate of a Fourier curve.
#[derive(Clone, Debug, Default)]
pub struct TrigSeries {
    pub constant: f64,
    pub cos: Vec<f64>,
    pub sin: Vec<f64>,
}

impl TrigSeries {
    fn eval(&self, r: f64) -> f64 {
        let mut v = self.constant;
        let base = 2.0 * std::f64::consts::PI * r;
        for (k, a) in self.cos.iter().enumerate() {
            v += a * ((k + 1) as f64 * base).cos();
        }
        for (k, b) in self.sin.iter().enumerate() {
            v += b * ((k + 1) as f64 * base).sin();
        }
        v
    }

    fn deriv(&self, r: f64) -> f64 {
        let mut v = 0.0;
        let base = 2.0 * std::f64::consts::PI * r;
        for (k, a) in self.cos.iter().enumerate() {
            let freq = (k + 1) as f64 * 2.0 * std::f64::consts::PI;
            v -= a * freq * ((k + 1) as f64 * base).sin();
        }
        for (k, b) in self.sin.iter().enumerate() {
            let freq = (k + 1) as f64 * 2.0 * std::f64::consts::PI;
            v += b * freq * ((k + 1) as f64 * base).cos();
        }
        v
    }
}

/// Smooth closed curve given by a 1-periodic parametrisation.
///
/// The parametrisation is assumed positively oriented, so that
/// `(x2', -x1')` points outward.
#[derive(Clone, Debug)]
pub enum Curve {
    Circle { radius: f64 },
    Ellipse { a: f64, b: f64 },
    Fourier { x1: TrigSeries, x2: TrigSeries },
}

impl Curve {
    /// Kite-shaped test curve
    /// `(cos(2 pi r) + 0.65 cos(4 pi r) - 0.65, 1.5 sin(2 pi r))`.
    pub fn kite() -> Curve {
        Curve::Fourier {
            x1: TrigSeries {
                constant: -0.65,
                cos: vec![1.0, 0.65],
                sin: vec![],
            },
            x2: TrigSeries {
                constant: 0.0,
                cos: vec![],
                sin: vec![1.5],
            },
        }
    }

    pub fn point(&self, r: f64) -> Vector2<f64> {
        let ang = 2.0 * std::f64::consts::PI * r;
        match self {
            Curve::Circle { radius } => Vector2::new(radius * ang.cos(), radius * ang.sin()),
            Curve::Ellipse { a, b } => Vector2::new(a * ang.cos(), b * ang.sin()),
            Curve::Fourier { x1, x2 } => Vector2::new(x1.eval(r), x2.eval(r)),
        }
    }

    pub fn derivative(&self, r: f64) -> Vector2<f64> {
        let ang = 2.0 * std::f64::consts::PI * r;
        let tau = 2.0 * std::f64::consts::PI;
        match self {
            Curve::Circle { radius } => {
                Vector2::new(-radius * tau * ang.sin(), radius * tau * ang.cos())
            }
            Curve::Ellipse { a, b } => Vector2::new(-a * tau * ang.sin(), b * tau * ang.cos()),
            Curve::Fourier { x1, x2 } => Vector2::new(x1.deriv(r), x2.deriv(r)),
        }
    }

    /// Outward normal scaled by the parametrisation speed.
    pub fn normal(&self, r: f64) -> Vector2<f64> {
        let d = self.derivative(r);
        Vector2::new(d.y, -d.x)
    }

    /// Checks `|x'(r)| > 0` on a dense parameter grid.
    pub fn validate(&self) -> Result<(), ScatteringError> {
        let samples = 2048;
        let mut min_speed = f64::INFINITY;
        let mut max_speed = 0.0f64;
        for k in 0..samples {
            let speed = self.derivative(k as f64 / samples as f64).norm();
            min_speed = min_speed.min(speed);
            max_speed = max_speed.max(speed);
        }
        if !(min_speed > 1e-9 * (1.0 + max_speed)) {
            return Err(ScatteringError::Geometry {
                detail: format!(
                    "parametrisation speed degenerates: min |x'| = {min_speed:.3e} \
                     against max {max_speed:.3e}"
                ),
            });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Sampled geometry
// ---------------------------------------------------------------------------

/// The sampled curve: `N` source points with normals and the two staggered
/// observation grids with theirs; all normals carry the mesh factor `h`.
#[derive(Clone, Debug)]
pub struct BoundaryGeometry {
    n: usize,
    sources: Vec<Vector2<f64>>,
    source_normals: Vec<Vector2<f64>>,
    obs: [Vec<Vector2<f64>>; 2],
    obs_normals: [Vec<Vector2<f64>>; 2],
}

impl BoundaryGeometry {
    pub fn new(curve: &Curve, n: usize) -> Result<Self, ScatteringError> {
        if n < 3 {
            return Err(ScatteringError::InvalidArgument {
                detail: format!("boundary sampling needs at least 3 points, got {n}"),
            });
        }
        curve.validate()?;
        let h = 1.0 / n as f64;
        let grid = |offset: f64| -> (Vec<Vector2<f64>>, Vec<Vector2<f64>>) {
            let mut pts = Vec::with_capacity(n);
            let mut nms = Vec::with_capacity(n);
            for j in 0..n {
                let r = (j as f64 + offset) * h;
                pts.push(curve.point(r));
                nms.push(curve.normal(r) * h);
            }
            (pts, nms)
        };
        let (sources, source_normals) = grid(0.0);
        let (obs_plus, obs_normal_plus) = grid(1.0 / 6.0);
        let (obs_minus, obs_normal_minus) = grid(-1.0 / 6.0);

        let geom = BoundaryGeometry {
            n,
            sources,
            source_normals,
            obs: [obs_plus, obs_minus],
            obs_normals: [obs_normal_plus, obs_normal_minus],
        };
        geom.check_separation()?;
        Ok(geom)
    }

    /// Rejects sampled geometries with coincident points; every kernel
    /// evaluation divides by one of these distances.
    fn check_separation(&self) -> Result<(), ScatteringError> {
        let scale = self
            .sources
            .iter()
            .map(|p| p.norm())
            .fold(0.0, f64::max)
            .max(1.0);
        let tol = 1e-12 * scale;
        for i in 0..self.n {
            for j in i + 1..self.n {
                if (self.sources[i] - self.sources[j]).norm() <= tol {
                    return Err(ScatteringError::Geometry {
                        detail: format!("source points {i} and {j} coincide"),
                    });
                }
            }
        }
        for side in 0..2 {
            for (i, p) in self.obs[side].iter().enumerate() {
                for (j, q) in self.sources.iter().enumerate() {
                    if (p - q).norm() <= tol {
                        return Err(ScatteringError::Geometry {
                            detail: format!(
                                "observation point {i} (grid {side}) coincides with source {j}"
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn sources(&self) -> &[Vector2<f64>] {
        &self.sources
    }

    pub fn source_normals(&self) -> &[Vector2<f64>] {
        &self.source_normals
    }

    /// Observation points of the `+` (side 0) and `-` (side 1) grids.
    pub fn observation_points(&self, side: usize) -> &[Vector2<f64>] {
        &self.obs[side]
    }

    pub fn observation_normals(&self, side: usize) -> &[Vector2<f64>] {
        &self.obs_normals[side]
    }
}

// ---------------------------------------------------------------------------
// The fixed circulants
// ---------------------------------------------------------------------------

fn circulant_tridiagonal(n: usize, diag: f64, off: f64) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = diag;
        m[(i, (i + 1) % n)] = off;
        m[(i, (i + n - 1) % n)] = off;
    }
    m
}

/// The circulant `M` (diagonal 7/9, first neighbours 1/9) that plays the
/// role of the identity between source and observation grids.
pub fn mass_matrix(n: usize) -> DMatrix<f64> {
    circulant_tridiagonal(n, 7.0 / 9.0, 1.0 / 9.0)
}

/// The circulant correction `Q` (diagonal 11/12, first neighbours 1/24)
/// applied to the raw normal-derivative operator.
pub fn correction_q(n: usize) -> DMatrix<f64> {
    circulant_tridiagonal(n, 11.0 / 12.0, 1.0 / 24.0)
}

// ---------------------------------------------------------------------------
// Operator assembly
// ---------------------------------------------------------------------------

fn kernel_pair(s: Complex64, dist: f64) -> Result<(Complex64, Complex64), ScatteringError> {
    let pair = k0k1(s * Complex64::from(dist))?;
    Ok((pair.k0, pair.k1))
}

/// Single-layer boundary operator `V(s)`.
pub fn assemble_v(geom: &BoundaryGeometry, s: Complex64) -> Result<CMatrix, ScatteringError> {
    let n = geom.len();
    let inv_two_pi = 0.5 / std::f64::consts::PI;
    let mut out = CMatrix::zeros(n, n);
    for side in 0..2 {
        let obs = geom.observation_points(side);
        for i in 0..n {
            for j in 0..n {
                let dist = (obs[i] - geom.sources[j]).norm();
                let (k0v, _) = kernel_pair(s, dist)?;
                out[(i, j)] += Complex64::from(0.5 * inv_two_pi) * k0v;
            }
        }
    }
    Ok(out)
}

/// Raw normal-derivative operator `J°(s)` (before the `Q` correction).
pub fn assemble_j_raw(geom: &BoundaryGeometry, s: Complex64) -> Result<CMatrix, ScatteringError> {
    let n = geom.len();
    let inv_two_pi = 0.5 / std::f64::consts::PI;
    let mut out = CMatrix::zeros(n, n);
    for side in 0..2 {
        let obs = geom.observation_points(side);
        let normals = geom.observation_normals(side);
        for i in 0..n {
            for j in 0..n {
                let diff = obs[i] - geom.sources[j];
                let dist = diff.norm();
                let (_, k1v) = kernel_pair(s, dist)?;
                let proj = diff.dot(&normals[i]) / dist;
                out[(i, j)] += -s * k1v * Complex64::from(0.5 * inv_two_pi * proj);
            }
        }
    }
    Ok(out)
}

/// Corrected normal-derivative operator `J(s) = Q J°(s)`.
pub fn assemble_j(geom: &BoundaryGeometry, s: Complex64) -> Result<CMatrix, ScatteringError> {
    let raw = assemble_j_raw(geom, s)?;
    let q = correction_q(geom.len());
    Ok(real_times_complex(&q, &raw))
}

fn real_times_complex(a: &DMatrix<f64>, b: &CMatrix) -> CMatrix {
    let (rows, inner) = (a.nrows(), a.ncols());
    let cols = b.ncols();
    let mut out = CMatrix::zeros(rows, cols);
    for r in 0..rows {
        for k in 0..inner {
            let coeff = a[(r, k)];
            if coeff == 0.0 {
                continue;
            }
            for c in 0..cols {
                out[(r, c)] += Complex64::from(coeff) * b[(k, c)];
            }
        }
    }
    out
}

/// Discrete single-layer potential
/// `(1/(2 pi)) sum_j K_0(s |z - m_j|) eta_j` at a point `z` off the
/// source grid.
pub fn potential_at(
    geom: &BoundaryGeometry,
    s: Complex64,
    eta: &CVector,
    z: Vector2<f64>,
) -> Result<Complex64, ScatteringError> {
    if eta.len() != geom.len() {
        return Err(ScatteringError::InvalidArgument {
            detail: format!(
                "density has {} entries for {} sources",
                eta.len(),
                geom.len()
            ),
        });
    }
    let row = potential_row(geom, s, z)?;
    // nalgebra's `dot` is the unconjugated bilinear form, which is the
    // right pairing here: the row holds kernel weights, not a functional.
    Ok(row.dot(eta))
}

/// One row of the potential map: the weights multiplying `eta` at `z`.
fn potential_row(
    geom: &BoundaryGeometry,
    s: Complex64,
    z: Vector2<f64>,
) -> Result<CVector, ScatteringError> {
    let scale = geom
        .sources
        .iter()
        .map(|p| p.norm())
        .fold(0.0, f64::max)
        .max(1.0);
    let inv_two_pi = 0.5 / std::f64::consts::PI;
    let mut row = CVector::zeros(geom.len());
    for (j, m) in geom.sources.iter().enumerate() {
        let dist = (z - m).norm();
        if dist <= 1e-12 * scale {
            return Err(ScatteringError::Geometry {
                detail: format!("evaluation point ({}, {}) coincides with source {j}", z.x, z.y),
            });
        }
        let (k0v, _) = kernel_pair(s, dist)?;
        row[j] = Complex64::from(inv_two_pi) * k0v;
    }
    Ok(row)
}

// ---------------------------------------------------------------------------
// Laplace-domain symbols wrapping the assembly
// ---------------------------------------------------------------------------

fn to_symbol_error(err: ScatteringError, s: Complex64) -> SymbolError {
    match err {
        ScatteringError::Kernel { .. } => SymbolError::NonFinite { s },
        other => SymbolError::Dimensions {
            detail: other.to_string(),
        },
    }
}

struct SingleLayerOperator {
    geom: Arc<BoundaryGeometry>,
    speed: f64,
}

impl Symbol for SingleLayerOperator {
    fn dims(&self) -> (usize, usize) {
        (self.geom.len(), self.geom.len())
    }

    fn conjugate_symmetric(&self) -> bool {
        true
    }

    fn eval(&self, s: Complex64) -> Result<CMatrix, SymbolError> {
        assemble_v(&self.geom, s / self.speed).map_err(|e| to_symbol_error(e, s))
    }
}

struct NormalDerivativeOperator {
    geom: Arc<BoundaryGeometry>,
    speed: f64,
    q: DMatrix<f64>,
}

impl Symbol for NormalDerivativeOperator {
    fn dims(&self) -> (usize, usize) {
        (self.geom.len(), self.geom.len())
    }

    fn conjugate_symmetric(&self) -> bool {
        true
    }

    fn eval(&self, s: Complex64) -> Result<CMatrix, SymbolError> {
        let raw = assemble_j_raw(&self.geom, s / self.speed).map_err(|e| to_symbol_error(e, s))?;
        Ok(real_times_complex(&self.q, &raw))
    }
}

struct PotentialRows {
    geom: Arc<BoundaryGeometry>,
    speed: f64,
    points: Vec<Vector2<f64>>,
}

impl Symbol for PotentialRows {
    fn dims(&self) -> (usize, usize) {
        (self.points.len(), self.geom.len())
    }

    fn conjugate_symmetric(&self) -> bool {
        true
    }

    fn eval(&self, s: Complex64) -> Result<CMatrix, SymbolError> {
        let mut out = CMatrix::zeros(self.points.len(), self.geom.len());
        for (r, z) in self.points.iter().enumerate() {
            let row = potential_row(&self.geom, s / self.speed, *z)
                .map_err(|e| to_symbol_error(e, s))?;
            for c in 0..self.geom.len() {
                out[(r, c)] = row[c];
            }
        }
        Ok(out)
    }
}

/// Laplace symbol `s -> V(s/c)` of the single-layer boundary operator.
pub fn single_layer_symbol(geom: Arc<BoundaryGeometry>, speed: f64) -> Arc<dyn Symbol> {
    Arc::new(SingleLayerOperator { geom, speed })
}

/// Laplace symbol `s -> J(s/c) = Q J°(s/c)` of the corrected
/// normal-derivative operator.
pub fn normal_derivative_symbol(geom: Arc<BoundaryGeometry>, speed: f64) -> Arc<dyn Symbol> {
    let q = correction_q(geom.len());
    Arc::new(NormalDerivativeOperator { geom, speed, q })
}

/// Laplace symbol `s -> S(s/c)` of the potential map restricted to a fixed
/// list of evaluation points (one output row per point).
pub fn potential_symbol(
    geom: Arc<BoundaryGeometry>,
    speed: f64,
    points: Vec<Vector2<f64>>,
) -> Arc<dyn Symbol> {
    Arc::new(PotentialRows { geom, speed, points })
}

// ---------------------------------------------------------------------------
// Incident wave
// ---------------------------------------------------------------------------

/// Causal plane wave `u^inc(z, t) = psi(c (t - lag) - z . d)` with `|d| = 1`.
#[derive(Clone)]
pub struct IncidentWave {
    direction: Vector2<f64>,
    speed: f64,
    lag: f64,
    signal: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
}

/// Default excitation profile `t^5 e^(-2t)` for `t > 0`, zero otherwise:
/// causal, C^4 at the onset, smooth afterwards.
pub fn default_signal(t: f64) -> f64 {
    if t > 0.0 {
        t.powi(5) * (-2.0 * t).exp()
    } else {
        0.0
    }
}

impl IncidentWave {
    pub fn new(
        direction: Vector2<f64>,
        speed: f64,
        lag: f64,
        signal: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    ) -> Result<Self, ScatteringError> {
        if !(speed > 0.0) || !speed.is_finite() {
            return Err(ScatteringError::InvalidArgument {
                detail: format!("wave speed must be positive, got {speed}"),
            });
        }
        let norm = direction.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return Err(ScatteringError::InvalidArgument {
                detail: "wave direction must be a nonzero vector".into(),
            });
        }
        if !(lag > 0.0) || !lag.is_finite() {
            return Err(ScatteringError::InvalidArgument {
                detail: format!("lag must be positive, got {lag}"),
            });
        }
        Ok(IncidentWave {
            direction: direction / norm,
            speed,
            lag,
            signal,
        })
    }

    /// Default wave for a given geometry: direction `(1, 0)`, the standard
    /// signal, and a lag `2 + max(-m . d)/c` that provably keeps the wave
    /// off the boundary at `t = 0` with margin.
    pub fn toward_geometry(geom: &BoundaryGeometry, speed: f64) -> Result<Self, ScatteringError> {
        let direction = Vector2::new(1.0, 0.0);
        let mut max_against = 0.0f64;
        for side in 0..2 {
            for p in geom.observation_points(side) {
                max_against = max_against.max(-p.dot(&direction));
            }
        }
        for p in geom.sources() {
            max_against = max_against.max(-p.dot(&direction));
        }
        IncidentWave::new(
            direction,
            speed,
            2.0 + max_against / speed,
            Arc::new(default_signal),
        )
    }

    pub fn direction(&self) -> Vector2<f64> {
        self.direction
    }

    pub fn speed(&self) -> f64 {
        self.speed
    }

    pub fn lag(&self) -> f64 {
        self.lag
    }

    /// The excitation profile `psi` at a given argument.
    pub fn signal(&self, arg: f64) -> f64 {
        (self.signal)(arg)
    }

    /// The incident field at a point and time.
    pub fn evaluate(&self, z: Vector2<f64>, t: f64) -> f64 {
        self.signal(self.speed * (t - self.lag) - z.dot(&self.direction))
    }
}

/// Samples the incident wave on the observation grids:
/// `beta_i(t) = sum_± psi(c (t - lag) - m_i^± . d)` for every requested
/// time, returned as complex vectors ready for the quadrature paths.
pub fn sample_incident(
    geom: &BoundaryGeometry,
    wave: &IncidentWave,
    times: &[f64],
) -> Vec<CVector> {
    times
        .iter()
        .map(|&t| {
            CVector::from_fn(geom.len(), |i, _| {
                let mut acc = 0.0;
                for side in 0..2 {
                    acc += wave.evaluate(geom.observation_points(side)[i], t);
                }
                Complex64::new(0.5 * acc, 0.0)
            })
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Field grids and snapshots
// ---------------------------------------------------------------------------

/// Uniform rectangular evaluation grid.  Point `(iy, ix)` sits at
/// `x = x_min + ix dx` (left to right) and `y = y_max - iy dy` (top to
/// bottom, image convention).
#[derive(Clone, Debug)]
pub struct FieldGrid {
    pub x_min: f64,
    pub x_max: f64,
    pub y_min: f64,
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
}

impl FieldGrid {
    pub fn points(&self) -> Vec<Vector2<f64>> {
        let mut pts = Vec::with_capacity(self.nx * self.ny);
        for iy in 0..self.ny {
            for ix in 0..self.nx {
                pts.push(self.point(iy, ix));
            }
        }
        pts
    }

    pub fn point(&self, iy: usize, ix: usize) -> Vector2<f64> {
        let fx = if self.nx > 1 {
            ix as f64 / (self.nx - 1) as f64
        } else {
            0.0
        };
        let fy = if self.ny > 1 {
            iy as f64 / (self.ny - 1) as f64
        } else {
            0.0
        };
        Vector2::new(
            self.x_min + fx * (self.x_max - self.x_min),
            self.y_max - fy * (self.y_max - self.y_min),
        )
    }

    fn validate(&self) -> Result<(), ScatteringError> {
        if self.nx == 0
            || self.ny == 0
            || !(self.x_max > self.x_min)
            || !(self.y_max > self.y_min)
        {
            return Err(ScatteringError::InvalidArgument {
                detail: "field grid must have positive extent and size".into(),
            });
        }
        Ok(())
    }
}

/// Scattered field on the grid at one time node.
#[derive(Clone, Debug)]
pub struct Snapshot {
    /// Time requested by the caller.
    pub requested_time: f64,
    /// Nearest step node actually used.
    pub time: f64,
    /// Index of that node in the step history.
    pub index: usize,
    /// Real part of the scattered field, `ny` rows by `nx` columns.
    pub values: DMatrix<f64>,
    /// True where the grid point lies inside the obstacle (by winding
    /// number of the sampled boundary polygon).  Values there are computed
    /// anyway; consumers choose whether to mask.
    pub inside: DMatrix<bool>,
}

/// Winding-number test of `p` against the closed polygon `poly`.
fn point_in_polygon(poly: &[Vector2<f64>], p: Vector2<f64>) -> bool {
    let mut winding = 0i32;
    let n = poly.len();
    for k in 0..n {
        let a = poly[k];
        let b = poly[(k + 1) % n];
        let cross = (b.x - a.x) * (p.y - a.y) - (p.x - a.x) * (b.y - a.y);
        if a.y <= p.y {
            if b.y > p.y && cross > 0.0 {
                winding += 1;
            }
        } else if b.y <= p.y && cross < 0.0 {
            winding -= 1;
        }
    }
    winding != 0
}

// ---------------------------------------------------------------------------
// The full pipeline
// ---------------------------------------------------------------------------

/// Time discretisation used for the three convolutions.
#[derive(Clone, Debug)]
pub enum TimeScheme {
    Multistep(DeltaGenerator),
    RungeKutta(RkTableau),
}

impl TimeScheme {
    /// Resolves a scheme name (`be`, `bdf2`, `tr`, `radau3`, `lobatto4`).
    pub fn from_name(name: &str) -> Option<TimeScheme> {
        if let Some(delta) = DeltaGenerator::from_name(name) {
            return Some(TimeScheme::Multistep(delta));
        }
        RkTableau::from_name(name).map(TimeScheme::RungeKutta)
    }

    pub fn name(&self) -> &str {
        match self {
            TimeScheme::Multistep(delta) => delta.name(),
            TimeScheme::RungeKutta(tab) => tab.name(),
        }
    }
}

/// Parameters of one scattering computation.
#[derive(Clone, Debug)]
pub struct ScatterRun {
    pub scheme: TimeScheme,
    /// Time step; the run covers `[0, steps * kappa]`.
    pub kappa: f64,
    /// Number of time steps; histories carry `steps + 1` nodes.
    pub steps: usize,
    /// Contour accuracy parameter for the quadrature paths.
    pub eps: f64,
    /// When set, the convolution equation and the normal-derivative
    /// convolution run through exact weight-table marching instead of the
    /// FFT all-steps paths.  Marching keeps the computed histories exactly
    /// zero before the wave arrives (bitwise), at `O(steps^2)` cost.
    /// Potential postprocessing always uses the FFT path.
    pub march: bool,
    /// Points at which the scattered field history is recorded.
    pub probe_points: Vec<Vector2<f64>>,
    /// Times (snapped to step nodes) at which grid snapshots are taken.
    pub snapshot_times: Vec<f64>,
    pub grid: Option<FieldGrid>,
}

impl ScatterRun {
    pub fn new(scheme: TimeScheme, kappa: f64, steps: usize) -> ScatterRun {
        ScatterRun {
            scheme,
            kappa,
            steps,
            eps: f64::EPSILON,
            march: false,
            probe_points: Vec::new(),
            snapshot_times: Vec::new(),
            grid: None,
        }
    }
}

/// Everything a scattering run produces.
#[derive(Clone, Debug)]
pub struct ScatteringSolution {
    /// Step times `0, kappa, ..., steps * kappa`.
    pub times: Vec<f64>,
    /// Boundary density at each step time (real part; the data and the
    /// conjugate-symmetric operators keep the solution real to rounding).
    pub density: Vec<DVector<f64>>,
    /// Approximate exterior normal derivative at each step time.
    pub normal_derivative: Vec<DVector<f64>>,
    /// Scattered field history per probe point: `probe_histories[p][n]`.
    pub probe_histories: Vec<Vec<f64>>,
    pub snapshots: Vec<Snapshot>,
}

fn real_parts(history: &[CVector]) -> Vec<DVector<f64>> {
    history
        .iter()
        .map(|v| DVector::from_fn(v.len(), |i, _| v[i].re))
        .collect()
}

/// Applies `M^(-1)` to each `chunk`-sized block of a stacked vector.
fn mass_solve_chunks(
    lu: &nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    v: &CVector,
    chunk: usize,
) -> Result<CVector, ScatteringError> {
    let mut out = CVector::zeros(v.len());
    for b in 0..v.len() / chunk {
        let piece = CVector::from_fn(chunk, |i, _| v[b * chunk + i]);
        let solved = piece_mass_solve(lu, &piece)?;
        for i in 0..chunk {
            out[b * chunk + i] = solved[i];
        }
    }
    Ok(out)
}

fn piece_mass_solve(
    lu: &nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    v: &CVector,
) -> Result<CVector, ScatteringError> {
    lu.solve(v).ok_or_else(|| ScatteringError::Geometry {
        detail: "mass circulant M is singular (impossible for N >= 3)".into(),
    })
}

/// Runs the full pipeline: solves the boundary convolution equation for
/// the density `eta`, postprocesses the normal derivative through the mass
/// system, and evaluates the scattered field at the probe points and on
/// the snapshot grid.
pub fn solve_scattering(
    geom: &Arc<BoundaryGeometry>,
    wave: &IncidentWave,
    run: &ScatterRun,
) -> Result<ScatteringSolution, ScatteringError> {
    if !(run.kappa > 0.0) || !run.kappa.is_finite() {
        return Err(ScatteringError::InvalidArgument {
            detail: format!("time step must be positive, got {}", run.kappa),
        });
    }
    if run.steps == 0 {
        return Err(ScatteringError::InvalidArgument {
            detail: "at least one time step is required".into(),
        });
    }
    if let Some(grid) = &run.grid {
        grid.validate()?;
    }
    if run.grid.is_none() && !run.snapshot_times.is_empty() {
        return Err(ScatteringError::InvalidArgument {
            detail: "snapshot times were requested without a field grid".into(),
        });
    }

    let n = geom.len();
    let v_sym = single_layer_symbol(geom.clone(), wave.speed());
    let j_sym = normal_derivative_symbol(geom.clone(), wave.speed());
    let mass_c = {
        let m = mass_matrix(n);
        CMatrix::from_fn(n, n, |r, c| Complex64::from(m[(r, c)]))
    };
    let mass_lu = mass_c.lu();

    // Gather all field evaluation points into a single forward pass.
    let grid_points: Vec<Vector2<f64>> = match &run.grid {
        Some(g) if !run.snapshot_times.is_empty() => g.points(),
        _ => Vec::new(),
    };
    let mut field_points = run.probe_points.clone();
    field_points.extend(grid_points.iter().copied());

    // Step-level complex histories, shared by both scheme families.
    let (eta_steps, lambda_steps, field_steps) = match &run.scheme {
        TimeScheme::Multistep(delta) => {
            let times: Vec<f64> = (0..=run.steps).map(|k| k as f64 * run.kappa).collect();
            let beta = sample_incident(geom, wave, &times);
            let rhs: Vec<CVector> = beta.iter().map(|b| -b).collect();

            let eta = if run.march {
                let table = cq_weights(v_sym.as_ref(), *delta, run.kappa, run.steps, run.eps)?;
                solve_equation_mot(&table, &rhs)?
            } else {
                all_steps_solve(v_sym.as_ref(), *delta, run.kappa, &rhs, run.eps)?
            };

            let jconv = if run.march {
                let table = cq_weights(j_sym.as_ref(), *delta, run.kappa, run.steps, run.eps)?;
                forward_convolution_mot(&table, &eta)?
            } else {
                all_steps_forward(j_sym.as_ref(), *delta, run.kappa, &eta, run.eps)?
            };
            let lambda = lambda_from_density(&eta, &jconv, &mass_lu, n)?;

            let field = if field_points.is_empty() {
                vec![CVector::zeros(0); run.steps + 1]
            } else {
                let pot_sym = potential_symbol(geom.clone(), wave.speed(), field_points.clone());
                all_steps_forward(pot_sym.as_ref(), *delta, run.kappa, &eta, run.eps)?
            };
            (eta, lambda, field)
        }
        TimeScheme::RungeKutta(tab) => {
            // Stage-time sampling: block n holds times (n + c_i) kappa.
            let stage_times: Vec<f64> = (0..run.steps)
                .flat_map(|b| {
                    (0..tab.stage_count())
                        .map(move |i| (b as f64 + tab.c()[i]) * run.kappa)
                })
                .collect();
            let beta_flat = sample_incident(geom, wave, &stage_times);
            let stacked: Vec<CVector> = (0..run.steps)
                .map(|b| {
                    let s = tab.stage_count();
                    CVector::from_fn(s * n, |i, _| -beta_flat[b * s + i / n][i % n])
                })
                .collect();

            let eta_stages = if run.march {
                let table = rk_cq_weights(v_sym.as_ref(), tab, run.kappa, run.steps - 1, run.eps)?;
                solve_equation_mot(&table, &stacked)?
            } else {
                rk_solve(v_sym.as_ref(), tab, run.kappa, &stacked, run.eps)?
            };

            let jconv_stages = if run.march {
                let table = rk_cq_weights(j_sym.as_ref(), tab, run.kappa, run.steps - 1, run.eps)?;
                forward_convolution_mot(&table, &eta_stages)?
            } else {
                rk_forward(j_sym.as_ref(), tab, run.kappa, &eta_stages, run.eps)?
            };
            let lambda_stages: Vec<CVector> = eta_stages
                .iter()
                .zip(&jconv_stages)
                .map(|(e, j)| {
                    let solved = mass_solve_chunks(&mass_lu, j, n)?;
                    Ok(solved - e * Complex64::from(0.5))
                })
                .collect::<Result<_, ScatteringError>>()?;

            let field_stages = if field_points.is_empty() {
                vec![CVector::zeros(tab.stage_count()); run.steps]
            } else {
                let pot_sym = potential_symbol(geom.clone(), wave.speed(), field_points.clone());
                rk_forward(pot_sym.as_ref(), tab, run.kappa, &eta_stages, run.eps)?
            };

            let eta = step_values(tab, &eta_stages)?;
            let lambda = step_values(tab, &lambda_stages)?;
            let field = step_values(tab, &field_stages)?;
            (eta, lambda, field)
        }
    };

    // Package: real parts, probe histories, snapshots.
    let times: Vec<f64> = (0..=run.steps).map(|k| k as f64 * run.kappa).collect();
    let probe_count = run.probe_points.len();
    let probe_histories: Vec<Vec<f64>> = (0..probe_count)
        .map(|p| field_steps.iter().map(|v| v[p].re).collect())
        .collect();

    let mut snapshots = Vec::new();
    if let (Some(grid), false) = (&run.grid, run.snapshot_times.is_empty()) {
        let inside = DMatrix::from_fn(grid.ny, grid.nx, |iy, ix| {
            point_in_polygon(geom.sources(), grid.point(iy, ix))
        });
        for &t in &run.snapshot_times {
            let index = ((t / run.kappa).round().max(0.0) as usize).min(run.steps);
            let values = DMatrix::from_fn(grid.ny, grid.nx, |iy, ix| {
                field_steps[index][probe_count + iy * grid.nx + ix].re
            });
            snapshots.push(Snapshot {
                requested_time: t,
                time: index as f64 * run.kappa,
                index,
                values,
                inside: inside.clone(),
            });
        }
    }

    Ok(ScatteringSolution {
        times,
        density: real_parts(&eta_steps),
        normal_derivative: real_parts(&lambda_steps),
        probe_histories,
        snapshots,
    })
}

/// `lambda_n = -(1/2) eta_n + M^(-1) (J_c * eta)_n` for step histories.
fn lambda_from_density(
    eta: &[CVector],
    jconv: &[CVector],
    mass_lu: &nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>,
    _n: usize,
) -> Result<Vec<CVector>, ScatteringError> {
    eta.iter()
        .zip(jconv)
        .map(|(e, j)| {
            let solved = piece_mass_solve(mass_lu, j)?;
            Ok(solved - e * Complex64::from(0.5))
        })
        .collect()
}
