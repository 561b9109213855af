//! Transfer functions on the right half-plane.
//!
//! A [`Symbol`] is an analytic map `F` from `{Re s > 0}` into complex
//! `d1 x d2` matrices (scalars are `1 x 1`), evaluated pointwise.  It is the
//! Laplace-domain description of a causal convolution operator: the engine
//! never materialises time-domain kernels, it only samples `F` along
//! contours.  Callers guarantee `Re s > 0`; none of the library symbols is
//! evaluated on the imaginary axis, where some have poles.
//!
//! A symbol may declare *conjugate symmetry*, `F(conj s) = conj F(s)`, which
//! holds whenever the underlying kernel is real.  Weight computations exploit
//! the flag by evaluating only half of each contour and reflecting.

use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64;
use thiserror::Error;

/// Complex matrix type used for all symbol values and CQ weights.
pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, Error)]
pub enum SymbolError {
    /// The symbol has a pole (or a numerically singular value) at `s`.
    #[error("symbol is singular at s = {s}")]
    Singular { s: Complex64 },
    /// Evaluation produced a NaN or infinite entry.
    #[error("symbol evaluation at s = {s} produced a non-finite entry")]
    NonFinite { s: Complex64 },
    /// Inner dimensions of a composition do not match, or a non-square
    /// symbol was inverted.
    #[error("incompatible symbol dimensions: {detail}")]
    Dimensions { detail: String },
}

/// An analytic transfer function `F: C_+ -> C^(d1 x d2)`.
pub trait Symbol: Send + Sync {
    /// Output dimensions `(d1, d2)`; scalar symbols report `(1, 1)`.
    fn dims(&self) -> (usize, usize);

    /// Whether `F(conj s) = conj F(s)` (true for real convolution kernels).
    fn conjugate_symmetric(&self) -> bool;

    /// Evaluate at `s` with `Re s > 0`.
    fn eval(&self, s: Complex64) -> Result<CMatrix, SymbolError>;

    /// Scalar evaluation convenience; panics if the symbol is not `1 x 1`.
    fn eval_scalar(&self, s: Complex64) -> Result<Complex64, SymbolError> {
        assert_eq!(self.dims(), (1, 1), "eval_scalar on a matrix symbol");
        Ok(self.eval(s)?[(0, 0)])
    }
}

fn scalar(v: Complex64) -> CMatrix {
    CMatrix::from_element(1, 1, v)
}

fn check_finite(m: CMatrix, s: Complex64) -> Result<CMatrix, SymbolError> {
    if m.iter().all(|v| v.re.is_finite() && v.im.is_finite()) {
        Ok(m)
    } else {
        Err(SymbolError::NonFinite { s })
    }
}

/// `F(s) = 1/(s - c)`: the resolvent of the scalar ODE `y' = c y + g`.
#[derive(Debug, Clone, Copy)]
pub struct Resolvent {
    pub c: Complex64,
}

impl Symbol for Resolvent {
    fn dims(&self) -> (usize, usize) {
        (1, 1)
    }

    fn conjugate_symmetric(&self) -> bool {
        self.c.im == 0.0
    }

    fn eval(&self, s: Complex64) -> Result<CMatrix, SymbolError> {
        let den = s - self.c;
        if den.norm() == 0.0 {
            return Err(SymbolError::Singular { s });
        }
        check_finite(scalar(den.inv()), s)
    }
}

/// Scalar resolvent `1/(s - c)`.
pub fn resolvent(c: Complex64) -> Arc<dyn Symbol> {
    Arc::new(Resolvent { c })
}

/// `F(s) = 1/(s^2 + c^2)`, whose causal kernel is `sin(c t)/c`.
#[derive(Debug, Clone, Copy)]
pub struct OscillatorSymbol {
    c: f64,
}

impl Symbol for OscillatorSymbol {
    fn dims(&self) -> (usize, usize) {
        (1, 1)
    }

    fn conjugate_symmetric(&self) -> bool {
        true
    }

    fn eval(&self, s: Complex64) -> Result<CMatrix, SymbolError> {
        let den = s * s + self.c * self.c;
        if den.norm() == 0.0 {
            return Err(SymbolError::Singular { s });
        }
        check_finite(scalar(den.inv()), s)
    }
}

/// Undamped oscillator transfer function `1/(s^2 + c^2)` with `c > 0`.
/// Its poles `±ic` lie on the imaginary axis and are never evaluated.
pub fn oscillator(c: f64) -> Arc<dyn Symbol> {
    assert!(c > 0.0, "oscillator frequency must be positive, got {c}");
    Arc::new(OscillatorSymbol { c })
}

/// `F(s) = s^alpha` on the principal branch (well defined for `Re s > 0`).
#[derive(Debug, Clone, Copy)]
pub struct PowerSymbol {
    alpha: f64,
}

impl Symbol for PowerSymbol {
    fn dims(&self) -> (usize, usize) {
        (1, 1)
    }

    fn conjugate_symmetric(&self) -> bool {
        true
    }

    fn eval(&self, s: Complex64) -> Result<CMatrix, SymbolError> {
        check_finite(scalar(s.powf(self.alpha)), s)
    }
}

/// Fractional differentiation/integration symbol `s^alpha`:
/// `alpha = 1` differentiates, `alpha = -1` integrates, `alpha = 1/2` is the
/// half derivative (square root of the time-derivative operator).
pub fn power(alpha: f64) -> Arc<dyn Symbol> {
    Arc::new(PowerSymbol { alpha })
}

/// `F(s) = exp(-s t0)`: a pure delay by `t0 >= 0`.
#[derive(Debug, Clone, Copy)]
pub struct DelaySymbol {
    t0: f64,
}

impl Symbol for DelaySymbol {
    fn dims(&self) -> (usize, usize) {
        (1, 1)
    }

    fn conjugate_symmetric(&self) -> bool {
        true
    }

    fn eval(&self, s: Complex64) -> Result<CMatrix, SymbolError> {
        check_finite(scalar((-s * self.t0).exp()), s)
    }
}

/// Delay symbol `exp(-s t0)`.
pub fn delay(t0: f64) -> Arc<dyn Symbol> {
    assert!(t0 >= 0.0, "delay must be nonnegative, got {t0}");
    Arc::new(DelaySymbol { t0 })
}

/// A constant (s-independent) matrix symbol.
#[derive(Debug, Clone)]
pub struct ConstantSymbol {
    value: CMatrix,
    real: bool,
}

impl Symbol for ConstantSymbol {
    fn dims(&self) -> (usize, usize) {
        (self.value.nrows(), self.value.ncols())
    }

    fn conjugate_symmetric(&self) -> bool {
        self.real
    }

    fn eval(&self, _s: Complex64) -> Result<CMatrix, SymbolError> {
        Ok(self.value.clone())
    }
}

/// Constant symbol `F(s) = m` for every `s`.
pub fn constant(m: CMatrix) -> Arc<dyn Symbol> {
    let real = m.iter().all(|v| v.im == 0.0);
    Arc::new(ConstantSymbol { value: m, real })
}

/// Constant identity symbol of dimension `d`, i.e. the convolution with the
/// Dirac delta.
pub fn identity(d: usize) -> Arc<dyn Symbol> {
    constant(CMatrix::identity(d, d))
}

/// `F(s) = (s I - A)^{-1}` for a fixed square matrix `A`: the matrix
/// resolvent, whose kernel is the matrix exponential `exp(tA)`.
#[derive(Debug, Clone)]
pub struct MatrixResolvent {
    a: CMatrix,
    real: bool,
}

impl Symbol for MatrixResolvent {
    fn dims(&self) -> (usize, usize) {
        (self.a.nrows(), self.a.ncols())
    }

    fn conjugate_symmetric(&self) -> bool {
        self.real
    }

    fn eval(&self, s: Complex64) -> Result<CMatrix, SymbolError> {
        let d = self.a.nrows();
        let m = CMatrix::identity(d, d) * s - &self.a;
        match m.lu().try_inverse() {
            Some(inv) => check_finite(inv, s),
            None => Err(SymbolError::Singular { s }),
        }
    }
}

/// Matrix resolvent `(sI - A)^{-1}`.
pub fn matrix_resolvent(a: CMatrix) -> Arc<dyn Symbol> {
    assert_eq!(a.nrows(), a.ncols(), "matrix resolvent needs a square matrix");
    let real = a.iter().all(|v| v.im == 0.0);
    Arc::new(MatrixResolvent { a, real })
}

/// Pointwise product `F1(s) F2(s)`; inner dimensions must agree.
pub struct ComposeSymbol {
    f1: Arc<dyn Symbol>,
    f2: Arc<dyn Symbol>,
}

impl Symbol for ComposeSymbol {
    fn dims(&self) -> (usize, usize) {
        (self.f1.dims().0, self.f2.dims().1)
    }

    fn conjugate_symmetric(&self) -> bool {
        self.f1.conjugate_symmetric() && self.f2.conjugate_symmetric()
    }

    fn eval(&self, s: Complex64) -> Result<CMatrix, SymbolError> {
        let a = self.f1.eval(s)?;
        let b = self.f2.eval(s)?;
        check_finite(a * b, s)
    }
}

/// Pointwise matrix product of two symbols (transfer function of the
/// composition of the two convolution operators).
pub fn compose(f1: Arc<dyn Symbol>, f2: Arc<dyn Symbol>) -> Result<Arc<dyn Symbol>, SymbolError> {
    if f1.dims().1 != f2.dims().0 {
        return Err(SymbolError::Dimensions {
            detail: format!(
                "cannot compose {:?} with {:?}",
                f1.dims(),
                f2.dims()
            ),
        });
    }
    Ok(Arc::new(ComposeSymbol { f1, f2 }))
}

/// Pointwise inverse `F(s)^{-1}` of a square symbol.
pub struct InverseSymbol {
    f: Arc<dyn Symbol>,
}

impl Symbol for InverseSymbol {
    fn dims(&self) -> (usize, usize) {
        self.f.dims()
    }

    fn conjugate_symmetric(&self) -> bool {
        self.f.conjugate_symmetric()
    }

    fn eval(&self, s: Complex64) -> Result<CMatrix, SymbolError> {
        let m = self.f.eval(s)?;
        match m.lu().try_inverse() {
            Some(inv) => check_finite(inv, s),
            None => Err(SymbolError::Singular { s }),
        }
    }
}

/// Pointwise matrix inverse of a square symbol.  The caller is responsible
/// for `F(s)` being invertible throughout `C_+`; numerically singular
/// evaluations surface as [`SymbolError::Singular`].
pub fn inverse(f: Arc<dyn Symbol>) -> Result<Arc<dyn Symbol>, SymbolError> {
    let (d1, d2) = f.dims();
    if d1 != d2 {
        return Err(SymbolError::Dimensions {
            detail: format!("cannot invert a {d1} x {d2} symbol"),
        });
    }
    Ok(Arc::new(InverseSymbol { f }))
}

/// A symbol defined by an arbitrary scalar closure, mainly for tests and the
/// command-line harness.
pub struct ScalarFnSymbol<F> {
    f: F,
    conj_sym: bool,
}

impl<F> Symbol for ScalarFnSymbol<F>
where
    F: Fn(Complex64) -> Result<Complex64, SymbolError> + Send + Sync,
{
    fn dims(&self) -> (usize, usize) {
        (1, 1)
    }

    fn conjugate_symmetric(&self) -> bool {
        self.conj_sym
    }

    fn eval(&self, s: Complex64) -> Result<CMatrix, SymbolError> {
        check_finite(scalar((self.f)(s)?), s)
    }
}

/// Wrap a scalar closure as a symbol, declaring its conjugate symmetry.
pub fn scalar_fn<F>(f: F, conjugate_symmetric: bool) -> Arc<dyn Symbol>
where
    F: Fn(Complex64) -> Result<Complex64, SymbolError> + Send + Sync + 'static,
{
    Arc::new(ScalarFnSymbol {
        f,
        conj_sym: conjugate_symmetric,
    })
}

impl fmt::Debug for dyn Symbol {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (d1, d2) = self.dims();
        write!(fm, "Symbol({d1}x{d2})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use rand::prelude::*;
    use rand_chacha::ChaCha8Rng;

    fn random_s(rng: &mut ChaCha8Rng) -> Complex64 {
        Complex64::new(rng.random_range(0.05..4.0), rng.random_range(-4.0..4.0))
    }

    #[test]
    fn resolvent_closed_form_values() {
        let f = resolvent(Complex64::ZERO);
        assert_abs_diff_eq!(f.eval_scalar(Complex64::new(2.0, 0.0)).unwrap().re, 0.5);
        let f = resolvent(Complex64::new(-1.0, 0.0));
        assert_abs_diff_eq!(f.eval_scalar(Complex64::ONE).unwrap().re, 0.5);
        let v = f.eval_scalar(Complex64::new(1.0, 1.0)).unwrap();
        assert_abs_diff_eq!(v.re, 0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, -0.2, epsilon = 1e-15);
    }

    #[test]
    fn resolvent_pole_is_reported() {
        let f = Resolvent {
            c: Complex64::new(1.0, 0.0),
        };
        match f.eval(Complex64::ONE) {
            Err(SymbolError::Singular { s }) => assert_eq!(s, Complex64::ONE),
            other => panic!("expected singularity, got {other:?}"),
        }
    }

    #[test]
    fn oscillator_closed_form_values() {
        let f = oscillator(1.0);
        assert_abs_diff_eq!(f.eval_scalar(Complex64::ONE).unwrap().re, 0.5);
        let f2 = oscillator(2.0);
        assert_abs_diff_eq!(
            f2.eval_scalar(Complex64::new(2.0, 0.0)).unwrap().re,
            0.125
        );
        let v = f.eval_scalar(Complex64::new(1.0, 1.0)).unwrap();
        // 1/((1+i)^2 + 1) = 1/(1+2i) = 0.2 - 0.4i
        assert_abs_diff_eq!(v.re, 0.2, epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, -0.4, epsilon = 1e-15);
    }

    #[test]
    fn power_principal_branch_values() {
        let s = Complex64::new(3.0, 4.0);
        let v = power(1.0).eval_scalar(s).unwrap();
        assert_abs_diff_eq!(v.re, 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(v.im, 4.0, epsilon = 1e-13);
        let v = power(-1.0).eval_scalar(Complex64::new(2.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v.re, 0.5, epsilon = 1e-15);
        let v = power(0.5).eval_scalar(Complex64::new(4.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v.re, 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn delay_values() {
        assert_abs_diff_eq!(delay(0.0).eval_scalar(Complex64::ONE).unwrap().re, 1.0);
        let v = delay(1.0).eval_scalar(Complex64::ONE).unwrap();
        assert_abs_diff_eq!(v.re, (-1.0f64).exp(), epsilon = 1e-15);
        // exp(-2(1 + i*pi)) = exp(-2) * exp(-2*pi*i) = exp(-2)
        let v = delay(2.0)
            .eval_scalar(Complex64::new(1.0, std::f64::consts::PI))
            .unwrap();
        assert_abs_diff_eq!(v.re, (-2.0f64).exp(), epsilon = 1e-15);
        assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn compose_multiplies_pointwise() {
        let half = power(0.5);
        let f = compose(half.clone(), half).unwrap();
        let v = f.eval_scalar(Complex64::new(9.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v.re, 9.0, epsilon = 1e-13);

        let f = compose(resolvent(Complex64::ZERO), power(1.0)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..5 {
            let s = random_s(&mut rng);
            let v = f.eval_scalar(s).unwrap();
            assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-13);
            assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn compose_rejects_dimension_mismatch() {
        let a = identity(2);
        let b = identity(3);
        assert!(matches!(
            compose(a, b),
            Err(SymbolError::Dimensions { .. })
        ));
    }

    #[test]
    fn inverse_of_library_symbols() {
        let f = inverse(resolvent(Complex64::new(-1.0, 0.0))).unwrap();
        let v = f.eval_scalar(Complex64::ONE).unwrap();
        assert_abs_diff_eq!(v.re, 2.0, epsilon = 1e-13);

        let f = inverse(identity(2)).unwrap();
        let m = f.eval(Complex64::ONE).unwrap();
        assert_abs_diff_eq!((m - CMatrix::identity(2, 2)).norm(), 0.0, epsilon = 1e-14);

        let f = inverse(power(0.5)).unwrap();
        let v = f.eval_scalar(Complex64::new(4.0, 0.0)).unwrap();
        assert_abs_diff_eq!(v.re, 0.5, epsilon = 1e-14);
    }

    #[test]
    fn conjugate_symmetry_of_real_parameter_symbols() {
        let symbols: Vec<Arc<dyn Symbol>> = vec![
            resolvent(Complex64::new(-1.5, 0.0)),
            oscillator(2.0),
            power(0.5),
            power(-0.3),
            delay(1.25),
        ];
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for f in &symbols {
            assert!(f.conjugate_symmetric());
            for _ in 0..20 {
                let s = random_s(&mut rng);
                let a = f.eval_scalar(s.conj()).unwrap();
                let b = f.eval_scalar(s).unwrap().conj();
                assert_abs_diff_eq!((a - b).norm(), 0.0, epsilon = 1e-12);
            }
        }
        assert!(!resolvent(Complex64::new(0.0, 1.0)).conjugate_symmetric());
    }

    #[test]
    fn inverse_times_forward_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let base: Vec<Arc<dyn Symbol>> = vec![
            resolvent(Complex64::new(-1.0, 0.0)),
            oscillator(1.0),
            power(0.7),
        ];
        for f in base {
            let g = compose(f.clone(), inverse(f).unwrap()).unwrap();
            for _ in 0..10 {
                let s = random_s(&mut rng);
                let v = g.eval_scalar(s).unwrap();
                assert_abs_diff_eq!(v.re, 1.0, epsilon = 1e-10);
                assert_abs_diff_eq!(v.im, 0.0, epsilon = 1e-10);
            }
        }
    }

    #[test]
    fn power_branch_is_additive() {
        let mut rng = ChaCha8Rng::seed_from_u64(23);
        for _ in 0..20 {
            let s = random_s(&mut rng);
            let a = rng.random_range(-1.5..1.5);
            let b = rng.random_range(-1.5..1.5);
            let lhs = power(a).eval_scalar(s).unwrap() * power(b).eval_scalar(s).unwrap();
            let rhs = power(a + b).eval_scalar(s).unwrap();
            assert_abs_diff_eq!((lhs - rhs).norm(), 0.0, epsilon = 1e-12 * rhs.norm().max(1.0));
        }
    }

    #[test]
    fn matrix_resolvent_matches_scalar_on_diagonal() {
        let a = CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![
            Complex64::new(-1.0, 0.0),
            Complex64::new(-2.0, 0.0),
        ]));
        let f = matrix_resolvent(a);
        let s = Complex64::new(1.0, 0.5);
        let m = f.eval(s).unwrap();
        assert_abs_diff_eq!((m[(0, 0)] - (s + 1.0).inv()).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!((m[(1, 1)] - (s + 2.0).inv()).norm(), 0.0, epsilon = 1e-14);
        assert_abs_diff_eq!(m[(0, 1)].norm(), 0.0, epsilon = 1e-14);
    }
}
