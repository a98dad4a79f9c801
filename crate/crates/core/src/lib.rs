//! Numerical core for the general Painlevé II equation, its associated
//! linear (Lax) system, and the multi-critical correlation kernel that
//! they generate, together with the equilibrium-measure and
//! orthogonal-polynomial machinery needed to test the kernel and
//! recurrence-coefficient asymptotics against finite-`n` computations.
//!
//! The crate is organised bottom-up:
//!
//! - [`scalar`]: the [`scalar::Real`] trait bound used by every generic
//!   routine, plus the double-double type used by the high-precision
//!   orthogonal-polynomial path.
//! - [`linalg`], [`cheb`], [`quad`]: small dense solvers, Chebyshev
//!   collocation utilities, and Gaussian quadrature rules.
//! - [`series`]: asymptotic boundary expansions of the Hastings–McLeod
//!   solution on both ends of the real line.
//! - [`pii`]: a spectral-element collocation solver for the general
//!   Painlevé II boundary value problem `q'' = s q + 2 q^3 - alpha`.
//! - [`lax`], [`psi`]: the 2×2 linear system associated with Painlevé II
//!   and a contour-marching evaluator for its distinguished solution on
//!   the real line.
//! - [`kernel`]: the limiting (critical) two-point kernel built from that
//!   solution.
//! - [`equilibrium`]: one-cut equilibrium measures for polynomial external
//!   fields, their endpoint equations, and the scaling constants entering
//!   the asymptotic predictions.
//! - [`orthopoly`]: discretised weights, Stieltjes/Lanczos recurrence
//!   coefficients, and finite-`n` Christoffel–Darboux kernels.
//! - [`harness`]: end-to-end experiment drivers comparing finite-`n`
//!   quantities against their critical/asymptotic predictions.
//!
//! Concrete `f64` aliases for the main data types are exported at the
//! crate root; all algorithms are generic over the scalar type through
//! [`scalar::Real`].

pub mod cheb;
pub mod equilibrium;
pub mod error;
pub mod harness;
pub mod kernel;
pub mod lax;
pub mod linalg;
pub mod orthopoly;
pub mod pii;
pub mod psi;
pub mod quad;
pub mod scalar;
pub mod series;

pub use error::CoreError;
pub use scalar::{Dd, Real};

/// Painlevé II solver parameters with `f64` scalars.
pub type PiiParametersF64 = pii::PiiParameters<f64>;
/// Painlevé II solution with `f64` scalars.
pub type PiiSolutionF64 = pii::PiiSolution<f64>;
// (aliases for later modules are appended as those modules land)
