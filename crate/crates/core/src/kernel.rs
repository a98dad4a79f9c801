//! The critical correlation kernel built from the Lax-system solution.
//!
//! With `Phi = (Phi_1, Phi_2)` the recessive solution evaluated on the
//! real axis (see [`crate::psi`]) and `m(u) = e^{i pi alpha sgn(u) / 2}`,
//! the kernel is
//!
//! ```text
//!   K(u, v) = - m(u)^2 m(v)^2 / (m(u) m(v)) ... (complex form)
//!           = - e^{i pi alpha (sgn u + sgn v) / 2}
//!             (Phi_1(u) Phi_2(v) - Phi_1(v) Phi_2(u)) / (2 pi i (u - v)),
//! ```
//!
//! which is real for real `u != v` (up to numerical residuals), symmetric
//! under `u <-> v`, and extends to the diagonal by confluence with
//! `Phi' = A Phi`. The reflection identity
//! `m(u) Phi_2(u) = conj(m(u) Phi_1(u))` turns the complex form into the
//! manifestly real expression
//!
//! ```text
//!   K(u, v) = - Im[ e^{i pi alpha (sgn u - sgn v) / 2}
//!                   Phi_1(u) conj(Phi_1(v)) ] / (pi (u - v)).
//! ```
//!
//! Both forms are provided; their agreement is itself a check of the
//! reflection identity. [`KernelContext`] bundles the Lax data with a
//! batch of `Phi` evaluations so kernels over a grid reuse each point.

use crate::error::{CoreError, Result};
use crate::lax::{matrix_a, LaxInputs};
use crate::psi::{phi_grid, ContourControls, PhiEvaluation};
use crate::scalar::{r, to_f64, Real};
use num_complex::Complex;

/// A kernel value at `(u, v)`: the real value, the imaginary residual
/// left over by the complex form (a diagnostic; the kernel is real in
/// exact arithmetic), and a propagated error estimate.
#[derive(Debug, Clone, Copy)]
pub struct KernelEvaluation<T> {
    /// First argument.
    pub u: T,
    /// Second argument.
    pub v: T,
    /// Kernel value (real part of the complex form).
    pub value: T,
    /// Magnitude of the imaginary part of the complex form; `0` for
    /// the manifestly real form and the diagonal.
    pub im_residual: T,
    /// Propagated error estimate from the `Phi` evaluations.
    pub err_est: T,
}

fn sign_of<T: Real>(u: T) -> T {
    if u > T::zero() {
        T::one()
    } else if u < T::zero() {
        -T::one()
    } else {
        T::zero()
    }
}

fn pi<T: Real>() -> T {
    (-T::one()).acos()
}

fn phase<T: Real>(ang: T) -> Complex<T> {
    Complex::new(ang.cos(), ang.sin())
}

fn max_mod<T: Real>(ev: &PhiEvaluation<T>) -> T {
    ev.phi1.norm().max(ev.phi2.norm())
}

/// The kernel at `u != v` from the complex form. The two `Phi`
/// evaluations must carry distinct points.
pub fn critical_kernel<T: Real>(
    alpha: T,
    pu: &PhiEvaluation<T>,
    pv: &PhiEvaluation<T>,
) -> Result<KernelEvaluation<T>> {
    if pu.u == pv.u {
        return Err(CoreError::InvalidArgument(
            "coincident points; use the confluent diagonal form".to_string(),
        ));
    }
    let pi_t = pi::<T>();
    let half = r::<T>(0.5);
    let pref = -phase(half * pi_t * alpha * (sign_of(pu.u) + sign_of(pv.u)));
    let num = pu.phi1 * pv.phi2 - pv.phi1 * pu.phi2;
    let den = Complex::new(T::zero(), (pi_t + pi_t) * (pu.u - pv.u));
    let k = pref * num / den;
    let scale = T::one() / (pi_t * (pu.u - pv.u).abs());
    let err = (max_mod(pu) * pv.err_est + max_mod(pv) * pu.err_est + pu.err_est * pv.err_est)
        * scale;
    Ok(KernelEvaluation {
        u: pu.u,
        v: pv.u,
        value: k.re,
        im_residual: k.im.abs(),
        err_est: err,
    })
}

/// The kernel at `u != v` from the manifestly real form, valid when the
/// reflection identity holds (it does for the solution family computed
/// here; [`crate::psi::check_symmetry`] quantifies the defect).
pub fn kernel_real_form<T: Real>(
    alpha: T,
    pu: &PhiEvaluation<T>,
    pv: &PhiEvaluation<T>,
) -> Result<KernelEvaluation<T>> {
    if pu.u == pv.u {
        return Err(CoreError::InvalidArgument(
            "coincident points; use the confluent diagonal form".to_string(),
        ));
    }
    let pi_t = pi::<T>();
    let half = r::<T>(0.5);
    let g = phase(half * pi_t * alpha * (sign_of(pu.u) - sign_of(pv.u))) * pu.phi1 * pv.phi1.conj();
    let value = -g.im / (pi_t * (pu.u - pv.u));
    let scale = T::one() / (pi_t * (pu.u - pv.u).abs());
    let err = (max_mod(pu) * pv.err_est + max_mod(pv) * pu.err_est + pu.err_est * pv.err_est)
        * scale;
    Ok(KernelEvaluation {
        u: pu.u,
        v: pv.u,
        value,
        im_residual: T::zero(),
        err_est: err,
    })
}

/// The diagonal value `K(u, u)` by confluence: the limit `v -> u` of the
/// complex form is
///
/// ```text
///   K(u, u) = - e^{i pi alpha sgn u} (Phi_1'(u) Phi_2(u) - Phi_1(u) Phi_2'(u))
///             / (2 pi i),
/// ```
///
/// with `Phi' = A(u) Phi` supplied by the linear system itself.
pub fn kernel_diagonal<T: Real>(
    inp: &LaxInputs<T>,
    pu: &PhiEvaluation<T>,
) -> Result<KernelEvaluation<T>> {
    let pi_t = pi::<T>();
    let a = matrix_a(Complex::new(pu.u, T::zero()), inp);
    let dphi = a.mul_vec([pu.phi1, pu.phi2]);
    let pref = -phase(pi_t * inp.alpha * sign_of(pu.u));
    let num = dphi[0] * pu.phi2 - pu.phi1 * dphi[1];
    let den = Complex::new(T::zero(), pi_t + pi_t);
    let k = pref * num / den;
    let anorm = a.m[0][0]
        .norm()
        .max(a.m[0][1].norm())
        .max(a.m[1][0].norm())
        .max(a.m[1][1].norm());
    let err = max_mod(pu) * anorm * pu.err_est / pi_t;
    Ok(KernelEvaluation {
        u: pu.u,
        v: pu.u,
        value: k.re,
        im_residual: k.im.abs(),
        err_est: err,
    })
}

/// Lax data plus a batch of `Phi` evaluations over a fixed point set,
/// immutable after construction; kernel values over the grid reuse the
/// stored points.
#[derive(Debug, Clone)]
pub struct KernelContext<T> {
    inp: LaxInputs<T>,
    phis: Vec<PhiEvaluation<T>>,
}

impl<T: Real> KernelContext<T> {
    /// Evaluates `Phi` at every point of `us` (deduplicated) for the
    /// Lax data `inp`, sharing the seed and descent across points.
    pub fn new(inp: LaxInputs<T>, us: &[T], ctl: &ContourControls<T>) -> Result<Self> {
        let mut pts: Vec<T> = us.to_vec();
        pts.sort_by(|a, b| a.partial_cmp(b).expect("finite points"));
        pts.dedup();
        let phis = phi_grid(&inp, &pts, ctl)?;
        Ok(KernelContext { inp, phis })
    }

    /// The Lax data the context was built with.
    pub fn inputs(&self) -> &LaxInputs<T> {
        &self.inp
    }

    /// The stored evaluation at exactly `u`.
    pub fn phi(&self, u: T) -> Result<&PhiEvaluation<T>> {
        self.phis
            .iter()
            .find(|ev| ev.u == u)
            .ok_or_else(|| {
                CoreError::InvalidArgument(format!(
                    "point {} is not in the evaluation set",
                    to_f64(u)
                ))
            })
    }

    /// Kernel value at `(u, v)`, dispatching to the confluent diagonal
    /// form when `u == v`; both points must be in the evaluation set.
    pub fn kernel(&self, u: T, v: T) -> Result<KernelEvaluation<T>> {
        if u == v {
            kernel_diagonal(&self.inp, self.phi(u)?)
        } else {
            critical_kernel(self.inp.alpha, self.phi(u)?, self.phi(v)?)
        }
    }

    /// Kernel value at `(u, v)` from the manifestly real form.
    pub fn kernel_real(&self, u: T, v: T) -> Result<KernelEvaluation<T>> {
        if u == v {
            kernel_diagonal(&self.inp, self.phi(u)?)
        } else {
            kernel_real_form(self.inp.alpha, self.phi(u)?, self.phi(v)?)
        }
    }
}
