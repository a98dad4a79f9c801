//! Lax-pair matrices for the general Painlevé II equation.
//!
//! The equation `q'' = s q + 2 q^3 - alpha` is the compatibility condition
//! of the linear system
//!
//! ```text
//!   d/dzeta Phi = A(zeta; s) Phi,      d/ds Phi = B(zeta; s) Phi,
//! ```
//!
//! where `A` and `B` are trace-free 2x2 matrices built from a solution
//! `q(s)` of the equation, its derivative `r = q'`, and the parameter
//! `alpha`. For `alpha != 0` the matrix `A` has a simple pole at
//! `zeta = 0`.
//!
//! This module evaluates `A`, `B`, the phase `theta = 4/3 zeta^3 + s zeta`,
//! and the gauged matrix `M = i theta' I + A` that governs the slowly
//! varying unknown `W = e^{i theta} Phi` used for numerical integration
//! (see the contour-marching routines in [`crate::psi`]).

use crate::error::{CoreError, Result};
use crate::pii::PiiSolution;
use crate::scalar::{r, Real};
use num_complex::Complex;

/// Scalar data entering the Lax matrices at a fixed `s`: the equation
/// parameter, the point `s`, the solution value `q = q(s)`, its
/// derivative `r = q'(s)`, and the combination
/// `u = r^2 - s q^2 - q^4 + 2 alpha q` (whose `s`-derivative is `-q^2`).
#[derive(Debug, Clone, Copy)]
pub struct LaxInputs<T> {
    /// Equation parameter.
    pub alpha: T,
    /// Evaluation point of the underlying Painlevé II solution.
    pub s: T,
    /// Solution value `q(s)`.
    pub q: T,
    /// Derivative `q'(s)`.
    pub r: T,
    /// `r^2 - s q^2 - q^4 + 2 alpha q`.
    pub u: T,
}

impl<T: Real> LaxInputs<T> {
    /// Builds the inputs from raw `(alpha, s, q, r)`, computing `u`.
    pub fn new(alpha: T, s: T, q: T, rr: T) -> Self {
        let u = rr * rr - s * q * q - q * q * q * q + (alpha + alpha) * q;
        LaxInputs {
            alpha,
            s,
            q,
            r: rr,
            u,
        }
    }

    /// Builds the inputs by evaluating a solved Painlevé II boundary
    /// value problem at `s`.
    pub fn from_solution(sol: &PiiSolution<T>, s: T) -> Result<Self> {
        let (q, rr, _) = sol.evaluate(s)?;
        Ok(LaxInputs::new(sol.alpha, s, q, rr))
    }
}

/// A 2x2 complex matrix stored by rows.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mat2c<T> {
    /// Entries `[[m11, m12], [m21, m22]]`.
    pub m: [[Complex<T>; 2]; 2],
}

impl<T: Real> Mat2c<T> {
    /// Matrix-vector product.
    pub fn mul_vec(&self, v: [Complex<T>; 2]) -> [Complex<T>; 2] {
        [
            self.m[0][0] * v[0] + self.m[0][1] * v[1],
            self.m[1][0] * v[0] + self.m[1][1] * v[1],
        ]
    }

    /// Trace.
    pub fn trace(&self) -> Complex<T> {
        self.m[0][0] + self.m[1][1]
    }

    /// Determinant.
    pub fn det(&self) -> Complex<T> {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }
}

/// The phase `theta(zeta) = 4/3 zeta^3 + s zeta`.
pub fn theta<T: Real>(zeta: Complex<T>, s: T) -> Complex<T> {
    let four_thirds = Complex::new(r::<T>(4.0) / r::<T>(3.0), T::zero());
    four_thirds * zeta * zeta * zeta + zeta.scale(s)
}

/// The zeta-equation matrix
///
/// ```text
///   A = [ -4i zeta^2 - i(s + 2 q^2),   4 zeta q + 2i r + alpha/zeta ]
///       [  4 zeta q - 2i r + alpha/zeta,   4i zeta^2 + i(s + 2 q^2) ],
/// ```
///
/// which is trace-free. For `alpha != 0` it has a pole at `zeta = 0`;
/// the caller must keep `zeta` away from the origin in that case.
pub fn matrix_a<T: Real>(zeta: Complex<T>, inp: &LaxInputs<T>) -> Mat2c<T> {
    let i = Complex::new(T::zero(), T::one());
    let four = r::<T>(4.0);
    let two = r::<T>(2.0);
    let z2 = zeta * zeta;
    let diag = i * z2.scale(four) + i.scale(inp.s + two * inp.q * inp.q);
    let ir2 = Complex::new(T::zero(), two * inp.r);
    let zq4 = zeta.scale(four * inp.q);
    let pole = Complex::new(inp.alpha, T::zero()) / zeta;
    Mat2c {
        m: [
            [-diag, zq4 + ir2 + pole],
            [zq4 - ir2 + pole, diag],
        ],
    }
}

/// The s-equation matrix
///
/// ```text
///   B = [ -i zeta,  q ]
///       [  q,  i zeta ],
/// ```
///
/// also trace-free.
pub fn matrix_b<T: Real>(zeta: Complex<T>, q: T) -> Mat2c<T> {
    let i = Complex::new(T::zero(), T::one());
    let qc = Complex::new(q, T::zero());
    Mat2c {
        m: [[-(i * zeta), qc], [qc, i * zeta]],
    }
}

/// The marching matrix `M = i theta'(zeta) I + A(zeta)` of the gauged
/// unknown `W = e^{i theta} Phi`, with `theta' = 4 zeta^2 + s`:
///
/// ```text
///   M = [ -2i q^2,                      4 zeta q + 2i r + alpha/zeta ]
///       [ 4 zeta q - 2i r + alpha/zeta,   8i zeta^2 + 2i (s + q^2)   ].
/// ```
///
/// The entries are evaluated in this explicit form (the `+-4i zeta^2`
/// cancellation is done symbolically, not in floating point).
pub fn gauged_matrix<T: Real>(zeta: Complex<T>, inp: &LaxInputs<T>) -> Mat2c<T> {
    let i = Complex::new(T::zero(), T::one());
    let four = r::<T>(4.0);
    let two = r::<T>(2.0);
    let eight = r::<T>(8.0);
    let m11 = Complex::new(T::zero(), -two * inp.q * inp.q);
    let ir2 = Complex::new(T::zero(), two * inp.r);
    let zq4 = zeta.scale(four * inp.q);
    let pole = Complex::new(inp.alpha, T::zero()) / zeta;
    let d2 = i * (zeta * zeta).scale(eight) + i.scale(two * (inp.s + inp.q * inp.q));
    Mat2c {
        m: [[m11, zq4 + ir2 + pole], [zq4 - ir2 + pole, d2]],
    }
}

/// Validates that `zeta` is usable in [`matrix_a`] / [`gauged_matrix`]:
/// finite, and nonzero whenever `alpha != 0` (the matrices have a pole
/// at the origin).
pub fn validate_zeta<T: Real>(zeta: Complex<T>, alpha: T) -> Result<()> {
    if !zeta.re.is_finite() || !zeta.im.is_finite() {
        return Err(CoreError::InvalidArgument(
            "zeta must be finite".to_string(),
        ));
    }
    if alpha != T::zero() && zeta.norm_sqr() == T::zero() {
        return Err(CoreError::InvalidArgument(
            "zeta = 0 is a pole of the linear system for alpha != 0".to_string(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn matrix_a_matches_worked_example() {
        // zeta = 1, alpha = 1, s = 0, q = 2, r = 0
        let inp = LaxInputs::new(1.0, 0.0, 2.0, 0.0);
        let a = matrix_a(c(1.0, 0.0), &inp);
        assert_eq!(a.m[0][0], c(0.0, -12.0));
        assert_eq!(a.m[0][1], c(9.0, 0.0));
        assert_eq!(a.m[1][0], c(9.0, 0.0));
        assert_eq!(a.m[1][1], c(0.0, 12.0));
    }

    #[test]
    fn matrix_b_matches_worked_example() {
        // zeta = 2, q = 3
        let b = matrix_b(c(2.0, 0.0), 3.0);
        assert_eq!(b.m[0][0], c(0.0, -2.0));
        assert_eq!(b.m[0][1], c(3.0, 0.0));
        assert_eq!(b.m[1][0], c(3.0, 0.0));
        assert_eq!(b.m[1][1], c(0.0, 2.0));
    }

    #[test]
    fn matrices_are_trace_free() {
        let inp = LaxInputs::new(0.7, -1.3, 0.9, -0.2);
        for &(re, im) in &[(0.4, 0.3), (-1.1, 0.8), (2.0, 0.0), (0.0, 5.0)] {
            let z = c(re, im);
            assert!(matrix_a(z, &inp).trace().norm() < 1e-14);
            assert!(matrix_b(z, inp.q).trace().norm() < 1e-14);
        }
    }

    #[test]
    fn gauged_matrix_is_a_plus_phase_derivative() {
        // M = i (4 zeta^2 + s) I + A, checked entrywise
        let inp = LaxInputs::new(0.3, -2.1, 1.2, 0.4);
        for &(re, im) in &[(0.9, 0.2), (-0.6, 1.4), (3.0, 0.1)] {
            let z = c(re, im);
            let a = matrix_a(z, &inp);
            let m = gauged_matrix(z, &inp);
            let itp = c(0.0, 1.0) * (z * z * 4.0 + inp.s);
            for row in 0..2 {
                for col in 0..2 {
                    let want = a.m[row][col] + if row == col { itp } else { c(0.0, 0.0) };
                    assert!(
                        (m.m[row][col] - want).norm() < 1e-12 * (1.0 + want.norm()),
                        "entry ({row},{col})"
                    );
                }
            }
        }
    }

    #[test]
    fn u_combination_from_solution_has_expected_value_at_origin() {
        // at s = 0: u = r^2 - q^4 + 2 alpha q with frozen alpha = 0 values
        let inp = LaxInputs::new(0.0, 0.0, 0.36706155154807846, -0.29537210544755016);
        let want = 0.29537210544755016f64.powi(2) - 0.36706155154807846f64.powi(4);
        assert!((inp.u - want).abs() < 1e-15);
    }

    #[test]
    fn zeta_validation_rejects_origin_only_for_nonzero_alpha() {
        assert!(validate_zeta(c(0.0, 0.0), 0.5).is_err());
        assert!(validate_zeta(c(0.0, 0.0), 0.0).is_ok());
        assert!(validate_zeta(c(f64::NAN, 0.0), 0.0).is_err());
        assert!(validate_zeta(c(1.0, 2.0), 0.5).is_ok());
    }

    #[test]
    fn theta_is_cubic_phase() {
        let z = c(0.5, 0.25);
        let s = -1.5;
        let want = z * z * z * (4.0 / 3.0) + z * s;
        assert!((theta(z, s) - want).norm() < 1e-15);
    }
}
