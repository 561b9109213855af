//! Convolution quadrature engine.
//!
//! Discretises causal convolutions `y = f * g` and convolution equations
//! `f * g = h` whose operator `f` is known only through its Laplace-domain
//! transfer function (a [`symbol::Symbol`]).  Multistep generators live in
//! [`multistep`], Runge-Kutta generators in [`runge_kutta`]; both produce
//! weight tables, fast FFT "all steps at once" paths and exact triangular
//! marching paths.  The [`scattering`] module applies the machinery to
//! sound-soft acoustic scattering off a smooth 2-D obstacle, with the
//! required modified Bessel function evaluations in [`bessel`].

pub mod bessel;
pub mod dft;
pub mod multistep;
pub mod runge_kutta;
pub mod scattering;
pub mod symbol;
pub mod weights;

pub use multistep::{CVector, DEFAULT_EPS};
pub use symbol::CMatrix;
