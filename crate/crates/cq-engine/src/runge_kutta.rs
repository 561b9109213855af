//! Runge-Kutta convolution quadrature.
//!
//! An `s`-stage implicit Runge-Kutta method with coefficient matrix `A`,
//! weights `b` and abscissae `c` discretises a transfer function `F` as a
//! block convolution acting on stacked stage vectors.  The scalar
//! characteristic function of the multistep theory is replaced by the
//! matrix-valued
//!
//! ```text
//! Delta(zeta) = (A + zeta/(1 - zeta) * 1 b^T)^(-1),
//! ```
//!
//! which for stiffly accurate tableaux (last row of `A` equal to `b`)
//! collapses to the *polynomial* `Delta(zeta) = A^(-1) (I - zeta 1 e_s^T)`.
//! The block weight `W_n` is the n-th Taylor coefficient of
//! `zeta -> F(Delta(zeta)/kappa)`; all contour machinery (radius choice,
//! scaled transforms, marching, pieces) carries over verbatim from the
//! multistep module with matrices in place of scalars.
//!
//! `F` of a matrix argument is evaluated by spectral calculus: `Delta(zeta)`
//! is diagonalised as `P diag(lambda) P^(-1)` and
//!
//! ```text
//! F(Delta(zeta)/kappa) = sum_k (P e_k e_k^T P^(-1)) (x) F(lambda_k/kappa),
//! ```
//!
//! where `(x)` is the Kronecker product with the `d x d` symbol values.
//! With at most three stages the eigenproblem is closed-form (quadratic
//! formula, Cardano) plus a Newton polish; every decomposition is verified
//! by reconstruction and its conditioning monitored.  Near-defective nodes
//! raise an error and the caller-facing entry points retry on a slightly
//! shrunk contour radius, which moves the sample points away from the
//! defective set without leaving the domain of the error analysis.
//!
//! Equation solving never forms `F(Delta/kappa)^(-1)` explicitly: the
//! spectral form above turns each block solve into `s` independent `d x d`
//! solves against the factorised `F(lambda_k/kappa)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::multistep::{
    all_steps_apply, check_kappa, check_samples, contour_radius, piece_from_nodes, unit_root_neg,
    weights_from_nodes, CVector, CqError,
};
use crate::symbol::{CMatrix, Symbol};
use crate::weights::WeightTable;

/// Shrink factor applied to the contour radius when an eigendecomposition
/// along the contour is too ill-conditioned to trust.
const RADIUS_NUDGE: f64 = 0.995;

/// Number of shrunk-radius retries before giving up.
const MAX_RADIUS_NUDGES: usize = 5;

/// Conditioning bound `norm1(P) * norm1(P^-1)` beyond which a
/// diagonalisation is rejected.
const EIGEN_COND_LIMIT: f64 = 1e8;

// ---------------------------------------------------------------------------
// Tableaux
// ---------------------------------------------------------------------------

/// Butcher tableau of an implicit Runge-Kutta method, restricted to at most
/// three stages so the spectral calculus stays closed-form.
///
/// Construction validates the standing assumptions of the quadrature
/// theory: row-sum consistency `A 1 = c`, weight consistency `b^T 1 = 1`,
/// invertibility of `A`, and `Re lambda > 0` for every eigenvalue of `A`.
#[derive(Clone, Debug)]
pub struct RkTableau {
    name: String,
    a: DMatrix<f64>,
    b: DVector<f64>,
    c: DVector<f64>,
    order: usize,
    stage_order: usize,
    a_inv: DMatrix<f64>,
    a_inv_ones: DVector<f64>,
    stiffly_accurate: bool,
}

impl RkTableau {
    pub fn new(
        name: &str,
        a: DMatrix<f64>,
        b: DVector<f64>,
        c: DVector<f64>,
        order: usize,
        stage_order: usize,
    ) -> Result<Self, CqError> {
        let s = a.nrows();
        let invalid = |detail: String| CqError::TableauInvalid { detail };
        if s == 0 || s > 3 {
            return Err(invalid(format!(
                "stage count must lie in 1..=3, got {s}"
            )));
        }
        if a.ncols() != s || b.len() != s || c.len() != s {
            return Err(invalid(format!(
                "inconsistent dimensions: A is {}x{}, b has {}, c has {}",
                a.nrows(),
                a.ncols(),
                b.len(),
                c.len()
            )));
        }
        for i in 0..s {
            let row_sum: f64 = (0..s).map(|j| a[(i, j)]).sum();
            if (row_sum - c[i]).abs() > 1e-12 {
                return Err(invalid(format!(
                    "row {i} of A sums to {row_sum}, expected c[{i}] = {}",
                    c[i]
                )));
            }
        }
        let b_sum: f64 = b.iter().sum();
        if (b_sum - 1.0).abs() > 1e-12 {
            return Err(invalid(format!("weights sum to {b_sum}, expected 1")));
        }
        let a_inv = a
            .clone()
            .lu()
            .try_inverse()
            .ok_or_else(|| invalid("coefficient matrix A is singular".into()))?;
        let a_c = CMatrix::from_fn(s, s, |r, q| Complex64::from(a[(r, q)]));
        let eig = eigen_small(&a_c)
            .map_err(|detail| invalid(format!("eigenproblem of A failed: {detail}")))?;
        for lambda in &eig.values {
            if lambda.re <= 0.0 {
                return Err(invalid(format!(
                    "A has eigenvalue {lambda} outside the right half-plane"
                )));
            }
        }
        let a_inv_ones = &a_inv * DVector::from_element(s, 1.0);
        let stiffly_accurate = (0..s).all(|j| (a[(s - 1, j)] - b[j]).abs() <= 1e-14);
        Ok(RkTableau {
            name: name.to_string(),
            a,
            b,
            c,
            order,
            stage_order,
            a_inv,
            a_inv_ones,
            stiffly_accurate,
        })
    }

    /// Two-stage Radau IIA: classical order 3, stage order 2, L-stable,
    /// stiffly accurate.
    pub fn radau_iia() -> Self {
        RkTableau::new(
            "radau3",
            DMatrix::from_row_slice(2, 2, &[5.0 / 12.0, -1.0 / 12.0, 3.0 / 4.0, 1.0 / 4.0]),
            DVector::from_row_slice(&[3.0 / 4.0, 1.0 / 4.0]),
            DVector::from_row_slice(&[1.0 / 3.0, 1.0]),
            3,
            2,
        )
        .expect("built-in Radau IIA tableau is valid")
    }

    /// Three-stage Lobatto IIIC: classical order 4, stage order 2,
    /// L-stable, stiffly accurate.
    pub fn lobatto_iiic() -> Self {
        RkTableau::new(
            "lobatto4",
            DMatrix::from_row_slice(
                3,
                3,
                &[
                    1.0 / 6.0,
                    -1.0 / 3.0,
                    1.0 / 6.0,
                    1.0 / 6.0,
                    5.0 / 12.0,
                    -1.0 / 12.0,
                    1.0 / 6.0,
                    2.0 / 3.0,
                    1.0 / 6.0,
                ],
            ),
            DVector::from_row_slice(&[1.0 / 6.0, 2.0 / 3.0, 1.0 / 6.0]),
            DVector::from_row_slice(&[0.0, 0.5, 1.0]),
            4,
            2,
        )
        .expect("built-in Lobatto IIIC tableau is valid")
    }

    /// Looks a tableau up by its scheme name (`radau3`, `lobatto4`).
    pub fn from_name(name: &str) -> Option<Self> {
        match name {
            "radau3" => Some(RkTableau::radau_iia()),
            "lobatto4" => Some(RkTableau::lobatto_iiic()),
            _ => None,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn stage_count(&self) -> usize {
        self.a.nrows()
    }

    pub fn a(&self) -> &DMatrix<f64> {
        &self.a
    }

    pub fn b(&self) -> &DVector<f64> {
        &self.b
    }

    pub fn c(&self) -> &DVector<f64> {
        &self.c
    }

    /// Classical convergence order of the step values.
    pub fn order(&self) -> usize {
        self.order
    }

    /// Stage order (accuracy of the internal stages).
    pub fn stage_order(&self) -> usize {
        self.stage_order
    }

    pub fn is_stiffly_accurate(&self) -> bool {
        self.stiffly_accurate
    }

    /// Step-recursion multiplier `mu = 1 - b^T A^(-1) 1`; zero exactly when
    /// the tableau is stiffly accurate.
    pub fn mu(&self) -> f64 {
        1.0 - self.b.dot(&self.a_inv_ones)
    }

    /// Step-recursion stage weights `d = A^(-T) b`; for stiffly accurate
    /// tableaux this is the last coordinate vector.
    pub fn d_vector(&self) -> DVector<f64> {
        self.a_inv.transpose() * &self.b
    }

    /// Eigenvalues of the coefficient matrix `A`.
    pub fn coefficient_eigenvalues(&self) -> Result<Vec<Complex64>, CqError> {
        let s = self.stage_count();
        let a_c = CMatrix::from_fn(s, s, |r, q| Complex64::from(self.a[(r, q)]));
        eigen_small(&a_c)
            .map(|e| e.values)
            .map_err(|detail| CqError::TableauInvalid {
                detail: format!("eigenproblem of A failed: {detail}"),
            })
    }

    /// Stability function `R(z) = 1 + z b^T (I - z A)^(-1) 1`.
    ///
    /// Returns an infinite value at the poles of `R`.
    pub fn stability_function(&self, z: Complex64) -> Complex64 {
        let s = self.stage_count();
        let m = CMatrix::from_fn(s, s, |r, q| {
            let diag = if r == q { Complex64::ONE } else { Complex64::ZERO };
            diag - z * Complex64::from(self.a[(r, q)])
        });
        let ones = CVector::from_element(s, Complex64::ONE);
        match m.lu().solve(&ones) {
            Some(x) => {
                let mut acc = Complex64::ZERO;
                for i in 0..s {
                    acc += Complex64::from(self.b[i]) * x[i];
                }
                Complex64::ONE + z * acc
            }
            None => Complex64::new(f64::INFINITY, 0.0),
        }
    }

    /// The matrix characteristic function `Delta(zeta)`.
    ///
    /// Stiffly accurate tableaux use the polynomial form
    /// `A^(-1) (I - zeta 1 e_s^T)` (exact, no inversion per call); general
    /// tableaux invert `A + zeta/(1-zeta) 1 b^T`, which requires
    /// `zeta != 1`.  Contour arguments always satisfy `|zeta| < 1`.
    pub fn delta_matrix(&self, zeta: Complex64) -> Result<CMatrix, CqError> {
        let s = self.stage_count();
        if self.stiffly_accurate {
            let mut m = CMatrix::from_fn(s, s, |r, q| Complex64::from(self.a_inv[(r, q)]));
            for r in 0..s {
                m[(r, s - 1)] -= zeta * Complex64::from(self.a_inv_ones[r]);
            }
            return Ok(m);
        }
        let one_minus = Complex64::ONE - zeta;
        if one_minus.norm() < 1e-14 {
            return Err(CqError::InvalidArgument {
                detail: format!("Delta(zeta) has a pole at zeta = 1, got zeta = {zeta}"),
            });
        }
        let coeff = zeta / one_minus;
        let m = CMatrix::from_fn(s, s, |r, q| {
            Complex64::from(self.a[(r, q)]) + coeff * Complex64::from(self.b[q])
        });
        m.lu().try_inverse().ok_or(CqError::InvalidArgument {
            detail: format!("Delta(zeta) is singular at zeta = {zeta}"),
        })
    }
}

// ---------------------------------------------------------------------------
// Closed-form spectral decomposition for orders 1..=3
// ---------------------------------------------------------------------------

/// Spectral decomposition `m = P diag(values) P^(-1)` of a small matrix.
pub(crate) struct SmallEigen {
    pub values: Vec<Complex64>,
    pub p: CMatrix,
    pub p_inv: CMatrix,
    /// `norm1(P) * norm1(P^-1)`, the amplification bound of the calculus.
    pub cond: f64,
}

fn one_norm(m: &CMatrix) -> f64 {
    (0..m.ncols())
        .map(|c| (0..m.nrows()).map(|r| m[(r, c)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Roots of the monic cubic `x^3 + a2 x^2 + a1 x + a0` by Cardano's
/// formula, polished by Newton iteration on the original polynomial.
fn cubic_roots(a2: Complex64, a1: Complex64, a0: Complex64) -> [Complex64; 3] {
    let third: f64 = 1.0 / 3.0;
    let shift = a2 * third;
    // Depressed cubic t^3 + p t + q with x = t - a2/3.
    let p = a1 - a2 * a2 * third;
    let q = a0 - a2 * a1 * third + a2 * a2 * a2 * (2.0 / 27.0);
    let disc = (q * q * 0.25 + p * p * p / 27.0).sqrt();
    // Pick the better-conditioned branch for the outer cube root.
    let base = {
        let plus = -q * 0.5 + disc;
        let minus = -q * 0.5 - disc;
        if plus.norm() >= minus.norm() {
            plus
        } else {
            minus
        }
    };
    let u = base.powf(third);
    let omega = Complex64::new(-0.5, 0.75f64.sqrt());
    let mut roots = [Complex64::ZERO; 3];
    for (k, root) in roots.iter_mut().enumerate() {
        let uk = u * omega.powu(k as u32);
        let t = if uk.norm() > 0.0 {
            uk - p / (uk * 3.0)
        } else {
            Complex64::ZERO
        };
        *root = t - shift;
    }
    // Newton polish: a couple of steps on p(x) = x^3 + a2 x^2 + a1 x + a0.
    for root in roots.iter_mut() {
        for _ in 0..3 {
            let x = *root;
            let val = ((x + a2) * x + a1) * x + a0;
            let der = (x * 3.0 + a2 * 2.0) * x + a1;
            if der.norm() == 0.0 {
                break;
            }
            *root = x - val / der;
        }
    }
    roots
}

/// Closed-form diagonalisation of a 1x1, 2x2 or 3x3 complex matrix.
///
/// Eigenvectors are read off the columns of the products
/// `prod_{j != i} (m - lambda_j I)`, which annihilate every eigenspace
/// except the i-th.  The result is verified by reconstruction; defective or
/// near-defective inputs are rejected with a diagnostic.
pub(crate) fn eigen_small(m: &CMatrix) -> Result<SmallEigen, String> {
    let s = m.nrows();
    assert_eq!(s, m.ncols(), "eigen_small needs a square matrix");
    assert!((1..=3).contains(&s), "eigen_small supports orders 1..=3");

    let values: Vec<Complex64> = match s {
        1 => vec![m[(0, 0)]],
        2 => {
            let tr = m[(0, 0)] + m[(1, 1)];
            let det = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)];
            let disc = (tr * tr - det * 4.0).sqrt();
            // Add the root of matching sign first to avoid cancellation.
            let sq = if (tr.conj() * disc).re >= 0.0 { disc } else { -disc };
            let l1 = (tr + sq) * 0.5;
            let l2 = if l1.norm() > 0.0 { det / l1 } else { (tr - sq) * 0.5 };
            vec![l1, l2]
        }
        _ => {
            let tr = m[(0, 0)] + m[(1, 1)] + m[(2, 2)];
            let minors = m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
                + m[(0, 0)] * m[(2, 2)]
                - m[(0, 2)] * m[(2, 0)]
                + m[(1, 1)] * m[(2, 2)]
                - m[(1, 2)] * m[(2, 1)];
            let det = m[(0, 0)] * (m[(1, 1)] * m[(2, 2)] - m[(1, 2)] * m[(2, 1)])
                - m[(0, 1)] * (m[(1, 0)] * m[(2, 2)] - m[(1, 2)] * m[(2, 0)])
                + m[(0, 2)] * (m[(1, 0)] * m[(2, 1)] - m[(1, 1)] * m[(2, 0)]);
            cubic_roots(-tr, minors, -det).to_vec()
        }
    };

    let scale = values.iter().map(|l| l.norm()).fold(1.0, f64::max);
    for i in 0..s {
        for j in i + 1..s {
            if (values[i] - values[j]).norm() < 1e-9 * scale {
                return Err(format!(
                    "eigenvalues {} and {} coincide to within 1e-9 (relative)",
                    values[i], values[j]
                ));
            }
        }
    }

    let p = if s == 1 {
        CMatrix::identity(1, 1)
    } else {
        let eye = CMatrix::identity(s, s);
        let mut p = CMatrix::zeros(s, s);
        for (i, _) in values.iter().enumerate() {
            let mut prod = eye.clone();
            for (j, lj) in values.iter().enumerate() {
                if j != i {
                    prod = &prod * &(m - &eye * *lj);
                }
            }
            // Deterministic column choice: the first column of maximal norm.
            let mut best = 0;
            let mut best_norm = -1.0;
            for col in 0..s {
                let norm: f64 = (0..s).map(|r| prod[(r, col)].norm_sqr()).sum();
                if norm > best_norm + 0.0 {
                    best = col;
                    best_norm = norm;
                }
            }
            if best_norm <= 0.0 {
                return Err(format!("no eigenvector found for eigenvalue {}", values[i]));
            }
            // Normalise on the largest entry (first index among maxima).
            let mut pivot = 0;
            let mut pivot_norm = -1.0;
            for r in 0..s {
                let nrm = prod[(r, best)].norm_sqr();
                if nrm > pivot_norm {
                    pivot = r;
                    pivot_norm = nrm;
                }
            }
            let inv_pivot = Complex64::ONE / prod[(pivot, best)];
            for r in 0..s {
                p[(r, i)] = prod[(r, best)] * inv_pivot;
            }
        }
        p
    };

    let p_inv = p
        .clone()
        .lu()
        .try_inverse()
        .ok_or_else(|| "eigenvector matrix is singular".to_string())?;
    let cond = one_norm(&p) * one_norm(&p_inv);
    if !cond.is_finite() || cond > EIGEN_COND_LIMIT {
        return Err(format!(
            "eigenvector conditioning {cond:.3e} exceeds {EIGEN_COND_LIMIT:.1e}"
        ));
    }

    // Reconstruction check: the calculus is only as good as P diag P^-1.
    let mut recon = CMatrix::zeros(s, s);
    for (k, lk) in values.iter().enumerate() {
        for r in 0..s {
            for q in 0..s {
                recon[(r, q)] += p[(r, k)] * *lk * p_inv[(k, q)];
            }
        }
    }
    let m_scale = one_norm(m).max(1.0);
    let resid = one_norm(&(&recon - m)) / m_scale;
    if !(resid <= 1e-8) {
        return Err(format!("reconstruction residual {resid:.3e} exceeds 1e-8"));
    }

    Ok(SmallEigen { values, p, p_inv, cond })
}

// ---------------------------------------------------------------------------
// Spectral (Dunford) evaluation of symbols at matrix arguments
// ---------------------------------------------------------------------------

/// `F(M/kappa)` as an `(s rows) x (s cols)` block matrix, from the spectral
/// decomposition of the `s x s` matrix `M`.
///
/// `node` only labels error messages with the contour index.
fn dunford_from_eigen(
    f: &dyn Symbol,
    eigen: &SmallEigen,
    kappa: f64,
    node: usize,
) -> Result<CMatrix, CqError> {
    let stage_values = symbol_at_eigenvalues(f, eigen, kappa, node)?;
    Ok(recombine_blocks(eigen, &stage_values, f.dims()))
}

/// Evaluates `F` at every eigenvalue over `kappa`, enforcing the
/// half-plane condition.
fn symbol_at_eigenvalues(
    f: &dyn Symbol,
    eigen: &SmallEigen,
    kappa: f64,
    node: usize,
) -> Result<Vec<CMatrix>, CqError> {
    eigen
        .values
        .iter()
        .map(|lambda| {
            let s = lambda / kappa;
            if s.re <= 0.0 {
                return Err(CqError::NodeOutsideHalfPlane { node, s });
            }
            f.eval(s).map_err(|source| CqError::NodeEval { node, source })
        })
        .collect()
}

/// Assembles `sum_k (P e_k e_k^T P^(-1)) (x) V_k` from per-eigenvalue
/// symbol values `V_k`.
fn recombine_blocks(
    eigen: &SmallEigen,
    stage_values: &[CMatrix],
    dims: (usize, usize),
) -> CMatrix {
    let s = eigen.values.len();
    let (rows, cols) = dims;
    let mut out = CMatrix::zeros(s * rows, s * cols);
    for bi in 0..s {
        for bj in 0..s {
            for (k, val) in stage_values.iter().enumerate() {
                let coeff = eigen.p[(bi, k)] * eigen.p_inv[(k, bj)];
                if coeff.norm_sqr() == 0.0 {
                    continue;
                }
                for r in 0..rows {
                    for q in 0..cols {
                        out[(bi * rows + r, bj * cols + q)] += coeff * val[(r, q)];
                    }
                }
            }
        }
    }
    out
}

/// Public entry: `F(M/kappa)` for an explicit small matrix `M`, e.g.
/// `Delta(zeta)` at a chosen point or `A^(-1)` itself.
pub fn symbol_of_matrix(f: &dyn Symbol, m: &CMatrix, kappa: f64) -> Result<CMatrix, CqError> {
    let eigen = eigen_small(m).map_err(|detail| CqError::EigenIllConditioned { node: 0, detail })?;
    dunford_from_eigen(f, &eigen, kappa, 0)
}

// ---------------------------------------------------------------------------
// Contour machinery at the block level
// ---------------------------------------------------------------------------

/// Runs `attempt` with the standard contour radius for `n`, shrinking the
/// radius a few times if the spectral decomposition rejects a node.
fn with_nudged_radius<T>(
    n: usize,
    eps: f64,
    mut attempt: impl FnMut(f64) -> Result<T, CqError>,
) -> Result<T, CqError> {
    let mut radius = contour_radius(n, eps);
    let mut tries = 0;
    loop {
        match attempt(radius) {
            Err(CqError::EigenIllConditioned { .. }) if tries < MAX_RADIUS_NUDGES => {
                tries += 1;
                radius *= RADIUS_NUDGE;
            }
            other => return other,
        }
    }
}

/// Spectral data of `Delta(zeta_l)` for the first `last+1` contour points,
/// mirrored to the full circle by conjugation when allowed.
///
/// Returns one entry per contour index; entry `l > last` is the conjugate
/// of entry `len - l` (valid because the tableau is real).
fn contour_eigen_data(
    tableau: &RkTableau,
    radius: f64,
    len: usize,
    last: usize,
) -> Result<Vec<SmallEigen>, CqError> {
    let eval_one = |l: usize| -> Result<SmallEigen, CqError> {
        let zeta = unit_root_neg(l, len) * Complex64::from(radius);
        let delta = tableau.delta_matrix(zeta)?;
        eigen_small(&delta).map_err(|detail| CqError::EigenIllConditioned { node: l, detail })
    };
    let evaluated: Vec<Result<SmallEigen, CqError>> = if last >= 32 {
        (0..=last).into_par_iter().map(eval_one).collect()
    } else {
        (0..=last).map(eval_one).collect()
    };
    let mut data = Vec::with_capacity(len);
    for r in evaluated {
        data.push(r?);
    }
    for l in last + 1..len {
        let src = &data[len - l];
        data.push(SmallEigen {
            values: src.values.iter().map(|v| v.conj()).collect(),
            p: src.p.map(|v| v.conj()),
            p_inv: src.p_inv.map(|v| v.conj()),
            cond: src.cond,
        });
    }
    Ok(data)
}

/// Block symbol samples `F(Delta(zeta_l)/kappa)` on the whole contour.
fn rk_symbol_contour_nodes(
    f: &dyn Symbol,
    tableau: &RkTableau,
    kappa: f64,
    n: usize,
    radius: f64,
) -> Result<Vec<CMatrix>, CqError> {
    let len = n + 1;
    let last = if f.conjugate_symmetric() { len / 2 } else { n };
    let eigen_data = contour_eigen_data(tableau, radius, len, last)?;

    let eval_one =
        |l: usize| -> Result<CMatrix, CqError> { dunford_from_eigen(f, &eigen_data[l], kappa, l) };
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

/// Block quadrature weights `W_0..W_N` of the symbol `f` under the given
/// tableau at step `kappa`.
///
/// Each `W_n` is `(s rows) x (s cols)` for an `rows x cols` symbol.  The
/// leading weight is replaced by its exact value `F(A^(-1)/kappa)`
/// (`Delta(0) = A^(-1)`), mirroring the multistep table construction; the
/// kind string is the tableau name, so marching and serialisation treat
/// multistep and Runge-Kutta tables uniformly.
pub fn rk_cq_weights(
    f: &dyn Symbol,
    tableau: &RkTableau,
    kappa: f64,
    n: usize,
    eps: f64,
) -> Result<WeightTable, CqError> {
    check_kappa(kappa)?;
    with_nudged_radius(n, eps, |radius| {
        let nodes = rk_symbol_contour_nodes(f, tableau, kappa, n, radius)?;
        let mut weights = weights_from_nodes(&nodes, radius);
        let s = tableau.stage_count();
        let a_inv_c = CMatrix::from_fn(s, s, |r, q| Complex64::from(tableau.a_inv[(r, q)]));
        weights[0] = symbol_of_matrix(f, &a_inv_c, kappa)?;
        Ok(WeightTable {
            kind: tableau.name().to_string(),
            kappa,
            radius,
            eps,
            weights,
        })
    })
}

/// All steps of the forward block convolution at once.
///
/// `g[n]` is the stacked stage sample at block `n` (length `s * cols` for
/// an `rows x cols` symbol); the result holds stacked stage outputs.
pub fn rk_forward(
    f: &dyn Symbol,
    tableau: &RkTableau,
    kappa: f64,
    g: &[CVector],
    eps: f64,
) -> Result<Vec<CVector>, CqError> {
    check_kappa(kappa)?;
    let s = tableau.stage_count();
    let (rows, cols) = f.dims();
    check_samples(s * cols, g, "stage convolution data")?;
    let n = g.len() - 1;
    with_nudged_radius(n, eps, |radius| {
        let nodes = rk_symbol_contour_nodes(f, tableau, kappa, n, radius)?;
        all_steps_apply(|l, v| Ok(&nodes[l] * v), radius, g, s * rows)
    })
}

/// All steps of the block convolution equation at once.
///
/// Exploits the spectral form of the blocks: each frequency-node solve
/// factorises into `s` independent `d x d` solves against the factorised
/// symbol values, recombined through `P` and `P^(-1)`.  The block operator
/// inverse is never formed.
pub fn rk_solve(
    f: &dyn Symbol,
    tableau: &RkTableau,
    kappa: f64,
    h: &[CVector],
    eps: f64,
) -> Result<Vec<CVector>, CqError> {
    check_kappa(kappa)?;
    let s = tableau.stage_count();
    let (rows, cols) = f.dims();
    if rows != cols {
        return Err(CqError::Dimension {
            detail: format!("equation solving needs a square symbol, got {rows} x {cols}"),
        });
    }
    let dim = s * rows;
    check_samples(dim, h, "stage equation right-hand side")?;
    let n = h.len() - 1;

    with_nudged_radius(n, eps, |radius| {
        let len = n + 1;
        let last = if f.conjugate_symmetric() { len / 2 } else { n };
        let eigen_data = contour_eigen_data(tableau, radius, len, last)?;

        // Factorise the d x d symbol values at every eigenvalue of every
        // node (conjugate-mirrored nodes get conjugated values, refactored;
        // partial pivoting picks the same pivots either way).
        let build_one = |l: usize| -> Result<Vec<nalgebra::LU<Complex64, nalgebra::Dyn, nalgebra::Dyn>>, CqError> {
            let vals = if l <= last {
                symbol_at_eigenvalues(f, &eigen_data[l], kappa, l)?
            } else {
                symbol_at_eigenvalues(f, &eigen_data[len - l], kappa, len - l)?
                    .into_iter()
                    .map(|m| m.map(|v| v.conj()))
                    .collect()
            };
            Ok(vals.into_iter().map(|m| m.lu()).collect())
        };
        let factor_results: Vec<_> = if last >= 32 {
            (0..len).into_par_iter().map(build_one).collect()
        } else {
            (0..len).map(build_one).collect()
        };
        let mut factors = Vec::with_capacity(len);
        for r in factor_results {
            factors.push(r?);
        }

        all_steps_apply(
            |l, v| {
                let eigen = &eigen_data[l];
                let mut out = CVector::zeros(dim);
                for (k, lu) in factors[l].iter().enumerate() {
                    // w_k = sum_j Pinv[k, j] v_j
                    let mut w = CVector::zeros(rows);
                    for bj in 0..s {
                        let coeff = eigen.p_inv[(k, bj)];
                        for r in 0..rows {
                            w[r] += coeff * v[bj * rows + r];
                        }
                    }
                    let z = lu.solve(&w).ok_or_else(|| CqError::SingularNode {
                        node: l,
                        s: eigen.values[k] / kappa,
                    })?;
                    for bi in 0..s {
                        let coeff = eigen.p[(bi, k)];
                        for r in 0..rows {
                            out[bi * rows + r] += coeff * z[r];
                        }
                    }
                }
                Ok(out)
            },
            radius,
            h,
            dim,
        )
    })
}

/// Influence of the stage history `u_0..u_Q` on blocks `Q+1..=m_last`,
/// the block analogue of the multistep piece.
pub fn rk_piece(
    f: &dyn Symbol,
    tableau: &RkTableau,
    kappa: f64,
    u: &[CVector],
    m_last: usize,
    n: usize,
    eps: f64,
) -> Result<Vec<CVector>, CqError> {
    check_kappa(kappa)?;
    let s = tableau.stage_count();
    let (rows, cols) = f.dims();
    check_samples(s * cols, u, "stage convolution history")?;
    let q = u.len() - 1;
    if q >= m_last || m_last > n {
        return Err(CqError::InvalidArgument {
            detail: format!("piece needs Q < M <= N, got Q = {q}, M = {m_last}, N = {n}"),
        });
    }
    with_nudged_radius(n, eps, |radius| {
        let nodes = rk_symbol_contour_nodes(f, tableau, kappa, n, radius)?;
        Ok(piece_from_nodes(&nodes, radius, u, m_last, s * rows))
    })
}

// ---------------------------------------------------------------------------
// Stage/step conversions
// ---------------------------------------------------------------------------

/// Stacked stage samples `g((n + c_i) kappa)` of a scalar signal for blocks
/// `n = 0..blocks`.
pub fn scalar_stage_samples(
    g: impl Fn(f64) -> Complex64,
    tableau: &RkTableau,
    kappa: f64,
    blocks: usize,
) -> Vec<CVector> {
    let s = tableau.stage_count();
    (0..blocks)
        .map(|n| CVector::from_fn(s, |i, _| g((n as f64 + tableau.c()[i]) * kappa)))
        .collect()
}

/// Step values `y_0, y_1, ..., y_(blocks)` recovered from stacked stage
/// values by the recursion `y_(n+1) = mu y_n + sum_i d_i Y_(n,i)` with
/// `mu = 1 - b^T A^(-1) 1` and `d = A^(-T) b`.
///
/// For stiffly accurate tableaux (`mu = 0`, `d = e_s`) this reads off the
/// last stage of each block.  `y_0 = 0`, matching the vanishing prehistory
/// of the convolution setting.
pub fn step_values(tableau: &RkTableau, stages: &[CVector]) -> Result<Vec<CVector>, CqError> {
    let s = tableau.stage_count();
    if stages.is_empty() {
        return Err(CqError::InvalidArgument {
            detail: "step extraction needs at least one stage block".into(),
        });
    }
    let dim = stages[0].len();
    if dim % s != 0 {
        return Err(CqError::Dimension {
            detail: format!("stacked stage dimension {dim} is not a multiple of {s} stages"),
        });
    }
    let d = dim / s;
    check_samples(dim, stages, "stage history")?;
    let mu = Complex64::from(tableau.mu());
    let dv = tableau.d_vector();
    let mut steps = Vec::with_capacity(stages.len() + 1);
    let mut y = CVector::zeros(d);
    steps.push(y.clone());
    for block in stages {
        let mut next = &y * mu;
        for i in 0..s {
            let coeff = Complex64::from(dv[i]);
            for r in 0..d {
                next[r] += coeff * block[i * d + r];
            }
        }
        steps.push(next.clone());
        y = next;
    }
    Ok(steps)
}
