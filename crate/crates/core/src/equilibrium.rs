//! One-cut equilibrium measures for polynomial external fields.
//!
//! For a polynomial field `V` and a time parameter `t` near 1, the
//! measure minimising the weighted logarithmic energy with total mass
//! `t` (then renormalised to a probability measure) is supported on a
//! single interval `[a_t, b_t]` and has density
//!
//! ```text
//! psi_t(x) = (1 / (2 pi t)) * h_t(x) * sqrt((b_t - x)(x - a_t))
//! ```
//!
//! with a polynomial `h_t` of degree `deg V - 2`. The endpoints solve a
//! pair of moment conditions expressed through the coefficients
//!
//! ```text
//! c_m(a, b) = sum_{i+j=m} B_i B_j a^i b^j,   B_i = C(2i, i) / 4^i,
//! ```
//!
//! namely `sum_k v_k c_k = 0` and `sum_k v_k c_{k+1} = 2 t`, where
//! `v_k` are the coefficients of `V'`. The same `c_m` give `h_t`
//! directly: `h_j = sum_m v_{j+1+m} c_m`.
//!
//! For `t < 1` the continued "density" is signed (it dips negative near
//! a critical interior point); the time-coupled scaling parameters use
//! exactly this signed continuation.

use crate::error::{CoreError, Result};
use crate::linalg::{lu_solve, Mat};
use crate::quad::gauss_legendre;
use crate::scalar::{r, to_f64, Real};

/// Polynomial external field `V(x) = sum_k coeffs[k] x^k`.
#[derive(Debug, Clone, PartialEq)]
pub struct Potential<T> {
    /// Coefficients in increasing degree order.
    pub coeffs: Vec<T>,
}

impl<T: Real> Potential<T> {
    /// Creates a potential, validating that it is bounded below at
    /// infinity (even degree >= 2 with positive leading coefficient).
    pub fn new(coeffs: Vec<T>) -> Result<Self> {
        let mut c = coeffs;
        while c.len() > 1 && *c.last().unwrap() == T::zero() {
            c.pop();
        }
        let d = c.len().saturating_sub(1);
        if d < 2 {
            return Err(CoreError::InvalidArgument(
                "potential must have degree >= 2".into(),
            ));
        }
        if d % 2 != 0 || !(c[d] > T::zero()) {
            return Err(CoreError::InvalidArgument(
                "potential must have even degree and positive leading coefficient".into(),
            ));
        }
        Ok(Potential { coeffs: c })
    }

    /// The critical quartic field `x^4/4 - x^2` used as the default
    /// experiment potential.
    pub fn critical_quartic() -> Self {
        Potential {
            coeffs: vec![
                T::zero(),
                T::zero(),
                -T::one(),
                T::zero(),
                r::<T>(0.25),
            ],
        }
    }

    /// The Gaussian field `x^2`.
    pub fn gaussian() -> Self {
        Potential {
            coeffs: vec![T::zero(), T::zero(), T::one()],
        }
    }

    /// Degree of the potential.
    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Evaluates `V(x)`.
    pub fn eval(&self, x: T) -> T {
        let mut acc = T::zero();
        for &c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluates `V'(x)`.
    pub fn eval_deriv(&self, x: T) -> T {
        let mut acc = T::zero();
        for k in (1..self.coeffs.len()).rev() {
            acc = acc * x + self.coeffs[k] * T::from_usize(k).unwrap();
        }
        acc
    }

    /// Coefficients of `V'` in increasing degree order.
    pub fn deriv_coeffs(&self) -> Vec<T> {
        (1..self.coeffs.len())
            .map(|k| self.coeffs[k] * T::from_usize(k).unwrap())
            .collect()
    }

    /// Whether the potential is even (odd coefficients all vanish).
    pub fn is_even(&self) -> bool {
        self.coeffs
            .iter()
            .enumerate()
            .all(|(k, &c)| k % 2 == 0 || c == T::zero())
    }
}

/// Support interval of the equilibrium measure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportInterval<T> {
    /// Left endpoint.
    pub a: T,
    /// Right endpoint.
    pub b: T,
}

/// Equilibrium-measure data at a fixed time `t`.
#[derive(Debug, Clone)]
pub struct EquilibriumData<T> {
    /// The external field.
    pub potential: Potential<T>,
    /// Time parameter (total-mass multiplier before renormalisation).
    pub t: T,
    /// Support endpoints.
    pub support: SupportInterval<T>,
    /// Coefficients of `h_t` in increasing degree order
    /// (degree `deg V - 2`).
    pub h: Vec<T>,
}

/// Central binomial factors `B_i = C(2i, i) / 4^i`.
fn binomial_factors<T: Real>(n: usize) -> Vec<T> {
    let mut b = Vec::with_capacity(n + 1);
    let mut cur = T::one();
    b.push(cur);
    for i in 1..=n {
        // B_i = B_{i-1} * (2i - 1) / (2i)
        let i_t = T::from_usize(i).unwrap();
        let two = r::<T>(2.0);
        cur = cur * (two * i_t - T::one()) / (two * i_t);
        b.push(cur);
    }
    b
}

/// Computes `c_m(a, b)` for `m = 0..=mmax`.
fn c_coeffs<T: Real>(a: T, b: T, mmax: usize) -> Vec<T> {
    let bf = binomial_factors::<T>(mmax);
    let mut apow = vec![T::one(); mmax + 1];
    let mut bpow = vec![T::one(); mmax + 1];
    for i in 1..=mmax {
        apow[i] = apow[i - 1] * a;
        bpow[i] = bpow[i - 1] * b;
    }
    (0..=mmax)
        .map(|m| {
            let mut acc = T::zero();
            for i in 0..=m {
                acc = acc + bf[i] * bf[m - i] * apow[i] * bpow[m - i];
            }
            acc
        })
        .collect()
}

/// Partial derivatives of `c_m` with respect to `a` and `b`.
fn c_coeffs_grad<T: Real>(a: T, b: T, mmax: usize) -> (Vec<T>, Vec<T>) {
    let bf = binomial_factors::<T>(mmax);
    let mut apow = vec![T::one(); mmax + 1];
    let mut bpow = vec![T::one(); mmax + 1];
    for i in 1..=mmax {
        apow[i] = apow[i - 1] * a;
        bpow[i] = bpow[i - 1] * b;
    }
    let mut da = vec![T::zero(); mmax + 1];
    let mut db = vec![T::zero(); mmax + 1];
    for m in 0..=mmax {
        for i in 0..=m {
            let f = bf[i] * bf[m - i];
            if i >= 1 {
                da[m] = da[m] + f * T::from_usize(i).unwrap() * apow[i - 1] * bpow[m - i];
            }
            if m - i >= 1 {
                db[m] =
                    db[m] + f * T::from_usize(m - i).unwrap() * apow[i] * bpow[m - i - 1];
            }
        }
    }
    (da, db)
}

/// Solves the endpoint equations for the support `[a_t, b_t]`.
///
/// Uses damped Newton iteration over a small family of symmetric
/// starting guesses; converges to residual below `1e-13` scale for the
/// polynomial fields in scope. `t` should be positive and, for the
/// asymptotic experiments, within a window around 1.
pub fn solve_endpoints<T: Real>(potential: &Potential<T>, t: T) -> Result<SupportInterval<T>> {
    if !(t > T::zero()) {
        return Err(CoreError::InvalidArgument(format!(
            "time parameter must be positive, got {t}"
        )));
    }
    let v = potential.deriv_coeffs();
    let dm1 = v.len(); // number of v_k entries, k = 0..d-1
    let two_t = t + t;

    let f_and_jac = |a: T, b: T| -> ([T; 2], Mat<T>) {
        let c = c_coeffs(a, b, dm1);
        let (da, db) = c_coeffs_grad(a, b, dm1);
        let mut f1 = T::zero();
        let mut f2 = T::zero();
        let mut j = Mat::zeros(2, 2);
        for (k, &vk) in v.iter().enumerate() {
            f1 = f1 + vk * c[k];
            f2 = f2 + vk * c[k + 1];
            j.add(0, 0, vk * da[k]);
            j.add(0, 1, vk * db[k]);
            j.add(1, 0, vk * da[k + 1]);
            j.add(1, 1, vk * db[k + 1]);
        }
        ([f1, f2 - two_t], j)
    };

    let guesses = [0.5, 1.0, 2.0, 4.0, 8.0, 16.0];
    let tol = r::<T>(1e-13);
    for &g in &guesses {
        let mut a = -r::<T>(g);
        let mut b = r::<T>(g);
        let mut converged = false;
        for _ in 0..120 {
            let (f, j) = f_and_jac(a, b);
            let fnorm = f[0].abs().max(f[1].abs());
            let scale = T::one() + two_t.abs();
            if fnorm <= tol * scale {
                converged = true;
                break;
            }
            let step = match lu_solve(&j, &f) {
                Ok(s) => s,
                Err(_) => break,
            };
            // damped update keeping the ordering a < b
            let mut lambda = T::one();
            let mut accepted = false;
            for _ in 0..30 {
                let an = a - lambda * step[0];
                let bn = b - lambda * step[1];
                if bn > an {
                    let (fn_, _) = f_and_jac(an, bn);
                    let fn_norm = fn_[0].abs().max(fn_[1].abs());
                    if fn_norm < fnorm || fn_norm <= tol * scale {
                        a = an;
                        b = bn;
                        accepted = true;
                        break;
                    }
                }
                lambda = lambda * r::<T>(0.5);
            }
            if !accepted {
                break;
            }
        }
        if converged {
            return Ok(SupportInterval { a, b });
        }
    }
    Err(CoreError::NoConvergence {
        context: "equilibrium endpoint Newton".into(),
        iterations: 120,
        residual: f64::NAN,
    })
}

/// Computes the coefficients of `h_t` for given endpoints.
///
/// The returned vector has length `deg V - 1` (polynomial degree
/// `deg V - 2`).
pub fn density_coeffs<T: Real>(
    potential: &Potential<T>,
    support: &SupportInterval<T>,
) -> Vec<T> {
    let v = potential.deriv_coeffs();
    let d = potential.degree();
    let c = c_coeffs(support.a, support.b, d);
    (0..=d - 2)
        .map(|j| {
            let mut acc = T::zero();
            for m in 0..=(d - 2 - j) {
                acc = acc + v[j + 1 + m] * c[m];
            }
            acc
        })
        .collect()
}

/// Solves for the full equilibrium data at time `t`.
pub fn solve_equilibrium<T: Real>(potential: &Potential<T>, t: T) -> Result<EquilibriumData<T>> {
    let support = solve_endpoints(potential, t)?;
    let h = density_coeffs(potential, &support);
    Ok(EquilibriumData {
        potential: potential.clone(),
        t,
        support,
        h,
    })
}

impl<T: Real> EquilibriumData<T> {
    /// Evaluates `h_t(x)`.
    pub fn h_eval(&self, x: T) -> T {
        let mut acc = T::zero();
        for &c in self.h.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    /// Evaluates the (signed) density `psi_t(x)`; zero outside the
    /// support. For `t >= 1` this is the genuine equilibrium density;
    /// for `t < 1` it is the analytic continuation used by the scaling
    /// parameters, which dips negative near a critical interior point.
    pub fn psi_eval(&self, x: T) -> T {
        let (a, b) = (self.support.a, self.support.b);
        if x < a || x > b {
            return T::zero();
        }
        let two_pi = r::<T>(2.0 * std::f64::consts::PI);
        self.h_eval(x) * ((b - x) * (x - a)).sqrt() / (two_pi * self.t)
    }

    /// Total mass of the (signed) measure; 1 for a correct solve.
    pub fn mass(&self) -> T {
        // x = mid + rad cos(phi): integrand becomes smooth in phi
        let (a, b) = (self.support.a, self.support.b);
        let mid = (a + b) * r::<T>(0.5);
        let rad = (b - a) * r::<T>(0.5);
        let rule = gauss_legendre(96);
        let pi = r::<T>(std::f64::consts::PI);
        let half = r::<T>(0.5);
        let mut acc = T::zero();
        for (&xi, &wi) in rule.nodes.iter().zip(rule.weights.iter()) {
            let phi = (r::<T>(xi) + T::one()) * half * pi;
            let w = r::<T>(wi) * half * pi;
            let x = mid + rad * phi.cos();
            let s = phi.sin();
            acc = acc + w * self.h_eval(x) * rad * rad * s * s;
        }
        let two_pi = r::<T>(2.0 * std::f64::consts::PI);
        acc / (two_pi * self.t)
    }

    /// Value, first and second derivative of `psi_t` at the origin,
    /// computed from the closed-form differentiation of
    /// `h(x) sqrt((b-x)(x-a))`. Requires `a < 0 < b`.
    pub fn psi_derivatives_at_origin(&self) -> Result<(T, T, T)> {
        let (a, b) = (self.support.a, self.support.b);
        if !(a < T::zero() && b > T::zero()) {
            return Err(CoreError::InvalidArgument(format!(
                "origin not inside support [{a}, {b}]"
            )));
        }
        let g = (-a * b).sqrt();
        let h0 = self.h[0];
        let h1 = if self.h.len() > 1 { self.h[1] } else { T::zero() };
        let h2 = if self.h.len() > 2 { self.h[2] } else { T::zero() };
        let two_pi_t = r::<T>(2.0 * std::f64::consts::PI) * self.t;
        let apb = a + b;
        let half = r::<T>(0.5);
        let quarter = r::<T>(0.25);
        let psi0 = h0 * g / two_pi_t;
        let dpsi0 = (h1 * g + h0 * apb * half / g) / two_pi_t;
        let ddpsi0 = ((h2 + h2) * g + h1 * apb / g
            - h0 * (T::one() / g + apb * apb * quarter / (g * g * g)))
            / two_pi_t;
        Ok((psi0, dpsi0, ddpsi0))
    }
}

/// Result of classifying the origin behaviour of the `t = 1` density.
#[derive(Debug, Clone, Copy)]
pub struct OriginClassification<T> {
    /// Density at the origin.
    pub psi0: T,
    /// First derivative at the origin.
    pub dpsi0: T,
    /// Second derivative at the origin.
    pub ddpsi0: T,
    /// Whether the density has a quadratic interior zero at the origin
    /// (the multi-critical situation the limiting kernel describes).
    pub is_singular_case_ii: bool,
}

/// Classifies the origin behaviour of the equilibrium density of `V`
/// at `t = 1`: detects a quadratic interior zero
/// (`psi(0) = psi'(0) = 0`, `psi''(0) > 0`).
pub fn classify_origin<T: Real>(potential: &Potential<T>) -> Result<OriginClassification<T>> {
    let eq = solve_equilibrium(potential, T::one())?;
    let (a, b) = (eq.support.a, eq.support.b);
    if !(a < T::zero() && b > T::zero()) {
        return Ok(OriginClassification {
            psi0: T::zero(),
            dpsi0: T::zero(),
            ddpsi0: T::zero(),
            is_singular_case_ii: false,
        });
    }
    let (psi0, dpsi0, ddpsi0) = eq.psi_derivatives_at_origin()?;
    let tol = r::<T>(1e-8);
    let is_singular = psi0.abs() <= tol && dpsi0.abs() <= tol && ddpsi0 > tol;
    Ok(OriginClassification {
        psi0,
        dpsi0,
        ddpsi0,
        is_singular_case_ii: is_singular,
    })
}

/// Scaling constants entering the asymptotic predictions.
#[derive(Debug, Clone, Copy)]
pub struct ScalingConstants<T> {
    /// Local scale at the interior critical point:
    /// `c = (pi psi''(0) / 8)^(1/3)`.
    pub c: T,
    /// Endpoint asymmetry angle `theta = arcsin((b+a)/(b-a))`.
    pub theta: T,
    /// Mass of the density to the right of the origin,
    /// `omega_1 = int_0^b psi`.
    pub omega1: T,
    /// Harmonic-measure density at the origin, `w0 = 1/(pi sqrt(-ab))`.
    pub w0: T,
}

/// Endpoint asymmetry angle for a given support.
pub fn theta_from_endpoints<T: Real>(a: T, b: T) -> T {
    ((b + a) / (b - a)).asin()
}

/// Computes the scaling constants of `V` at `t = 1`.
///
/// Requires the multi-critical origin behaviour (otherwise `c` is not
/// meaningful); callers should check [`classify_origin`] first when in
/// doubt.
pub fn scaling_constants<T: Real>(potential: &Potential<T>) -> Result<ScalingConstants<T>> {
    let eq = solve_equilibrium(potential, T::one())?;
    let (a, b) = (eq.support.a, eq.support.b);
    if !(a < T::zero() && b > T::zero()) {
        return Err(CoreError::InvalidArgument(
            "scaling constants require the origin inside the support".into(),
        ));
    }
    let (_, _, ddpsi0) = eq.psi_derivatives_at_origin()?;
    if !(ddpsi0 > T::zero()) {
        return Err(CoreError::InvalidArgument(format!(
            "scaling constants require psi''(0) > 0, got {ddpsi0}"
        )));
    }
    let pi = r::<T>(std::f64::consts::PI);
    let eight = r::<T>(8.0);
    let c = (pi * ddpsi0 / eight).powf(T::one() / r::<T>(3.0));
    let theta = theta_from_endpoints(a, b);

    // omega_1 = int_0^b psi via the cos substitution (smooth integrand)
    let mid = (a + b) * r::<T>(0.5);
    let rad = (b - a) * r::<T>(0.5);
    let phi0 = ((mid / rad).min(T::one()).max(-T::one())).acos(); // x = 0
    let rule = gauss_legendre(96);
    let half = r::<T>(0.5);
    let mut acc = T::zero();
    for (&xi, &wi) in rule.nodes.iter().zip(rule.weights.iter()) {
        let phi = (r::<T>(xi) + T::one()) * half * phi0;
        let w = r::<T>(wi) * half * phi0;
        let x = mid + rad * phi.cos();
        let s = phi.sin();
        acc = acc + w * eq.h_eval(x) * rad * rad * s * s;
    }
    let two_pi = r::<T>(2.0 * std::f64::consts::PI);
    let omega1 = acc / two_pi;

    let w0 = T::one() / (pi * (-a * b).sqrt());
    Ok(ScalingConstants {
        c,
        theta,
        omega1,
        w0,
    })
}

/// The three ways of producing the Painlevé parameter `s` used by the
/// asymptotic experiments.
#[derive(Debug, Clone, Copy)]
pub enum SParameterMode<T> {
    /// Fixed perturbation strength `L` in the coupling
    /// `t = 1 + L n^{-2/3}`: the limiting value `s = L / (c sqrt(-ab))`.
    PerturbationStrength {
        /// Perturbation strength.
        l: T,
    },
    /// Finite-`n` time-coupled value `s_{t,n} = n^{2/3} (pi/c) psi_t(0)`.
    TimeCoupled {
        /// Time parameter.
        t: T,
        /// Matrix size.
        n: u32,
    },
    /// Linearised finite-`n` value
    /// `s*_{t,n} = n^{2/3} (t - 1) / (c sqrt(-a_t b_t))`.
    TimeCoupledLinearized {
        /// Time parameter.
        t: T,
        /// Matrix size.
        n: u32,
    },
}

/// Computes the scaling parameter `s` in the requested mode.
pub fn s_parameters<T: Real>(potential: &Potential<T>, mode: SParameterMode<T>) -> Result<T> {
    match mode {
        SParameterMode::PerturbationStrength { l } => {
            let sc = scaling_constants(potential)?;
            let eq = solve_equilibrium(potential, T::one())?;
            let g = (-eq.support.a * eq.support.b).sqrt();
            Ok(l / (sc.c * g))
        }
        SParameterMode::TimeCoupled { t, n } => {
            let sc = scaling_constants(potential)?;
            let eq = solve_equilibrium(potential, t)?;
            let (psi0, _, _) = eq.psi_derivatives_at_origin()?;
            let pi = r::<T>(std::f64::consts::PI);
            let n23 = r::<T>((n as f64).powf(2.0 / 3.0));
            Ok(n23 * pi * psi0 / sc.c)
        }
        SParameterMode::TimeCoupledLinearized { t, n } => {
            let sc = scaling_constants(potential)?;
            let eq = solve_equilibrium(potential, t)?;
            let g = (-eq.support.a * eq.support.b).sqrt();
            let n23 = r::<T>((n as f64).powf(2.0 / 3.0));
            Ok(n23 * (t - T::one()) / (sc.c * g))
        }
    }
}

/// Convenience: the time parameter induced by the `(n, N)` coupling,
/// `t = n / N`.
pub fn time_from_sizes<T: Real>(n: u32, big_n: u32) -> T {
    r::<T>(n as f64) / r::<T>(big_n as f64)
}

/// Convenience: the matrix dimension `N` closest to the coupling
/// `t = 1 + L n^{-2/3}`, i.e. `N = round(n / (1 + L n^{-2/3}))`.
pub fn big_n_from_coupling(n: u32, l: f64) -> u32 {
    let t = 1.0 + l * (n as f64).powf(-2.0 / 3.0);
    (n as f64 / t).round().max(1.0) as u32
}

#[allow(dead_code)]
fn _to_f64_used<T: Real>(x: T) -> f64 {
    to_f64(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const PI: f64 = std::f64::consts::PI;

    #[test]
    fn gaussian_endpoints_and_density() {
        // V = x^2: support [-sqrt(2t), sqrt(2t)], h = 2
        let v: Potential<f64> = Potential::gaussian();
        let eq = solve_equilibrium(&v, 1.0).unwrap();
        assert_abs_diff_eq!(eq.support.b, 2f64.sqrt(), epsilon = 1e-12);
        assert_abs_diff_eq!(eq.support.a, -(2f64.sqrt()), epsilon = 1e-12);
        assert_eq!(eq.h.len(), 1);
        assert_abs_diff_eq!(eq.h[0], 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eq.mass(), 1.0, epsilon = 1e-12);
        // semicircle density at 0: sqrt(2)/pi
        let (psi0, dpsi0, _) = eq.psi_derivatives_at_origin().unwrap();
        assert_abs_diff_eq!(psi0, 2f64.sqrt() / PI, epsilon = 1e-12);
        assert_abs_diff_eq!(dpsi0, 0.0, epsilon = 1e-12);
        // scaled time
        let eq2 = solve_equilibrium(&v, 1.21).unwrap();
        assert_abs_diff_eq!(eq2.support.b, 1.1 * 2f64.sqrt(), epsilon = 1e-11);
    }

    #[test]
    fn quartic_endpoints_h_and_second_derivative() {
        // V = x^4/4 - x^2 at t = 1: support [-2, 2], h = x^2,
        // psi''(0) = 2/pi
        let v: Potential<f64> = Potential::critical_quartic();
        let eq = solve_equilibrium(&v, 1.0).unwrap();
        assert_abs_diff_eq!(eq.support.b, 2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eq.support.a, -2.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eq.h[0], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eq.h[1], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eq.h[2], 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(eq.mass(), 1.0, epsilon = 1e-12);
        let (psi0, dpsi0, ddpsi0) = eq.psi_derivatives_at_origin().unwrap();
        assert_abs_diff_eq!(psi0, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(dpsi0, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(ddpsi0, 2.0 / PI, epsilon = 1e-11);
    }

    #[test]
    fn quartic_density_value() {
        // psi(1) = 1 * sqrt(3) / (2 pi) for the critical quartic
        let v: Potential<f64> = Potential::critical_quartic();
        let eq = solve_equilibrium(&v, 1.0).unwrap();
        assert_abs_diff_eq!(eq.psi_eval(1.0), 3f64.sqrt() / (2.0 * PI), epsilon = 1e-12);
        assert_eq!(eq.psi_eval(2.5), 0.0);
        assert_eq!(eq.psi_eval(-2.5), 0.0);
    }

    #[test]
    fn quartic_classification_is_singular() {
        let v: Potential<f64> = Potential::critical_quartic();
        let cl = classify_origin(&v).unwrap();
        assert!(cl.is_singular_case_ii);
        assert_abs_diff_eq!(cl.ddpsi0, 2.0 / PI, epsilon = 1e-11);
    }

    #[test]
    fn gaussian_classification_is_regular() {
        let v: Potential<f64> = Potential::gaussian();
        let cl = classify_origin(&v).unwrap();
        assert!(!cl.is_singular_case_ii);
        assert!(cl.psi0 > 0.4);
    }

    #[test]
    fn perturbed_quartic_is_not_singular() {
        // adding 0.1 x^3 moves the interior zero off the origin
        let v = Potential::new(vec![0.0, 0.0, -1.0, 0.1, 0.25]).unwrap();
        let cl = classify_origin(&v).unwrap();
        assert!(!cl.is_singular_case_ii);
    }

    #[test]
    fn quartic_scaling_constants() {
        let v: Potential<f64> = Potential::critical_quartic();
        let sc = scaling_constants(&v).unwrap();
        assert_abs_diff_eq!(sc.c, 0.25f64.powf(1.0 / 3.0), epsilon = 1e-11);
        assert_abs_diff_eq!(sc.theta, 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(sc.omega1, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(sc.w0, 1.0 / (2.0 * PI), epsilon = 1e-12);
    }

    #[test]
    fn theta_for_shifted_support() {
        let th = theta_from_endpoints(-1.0, 2.0);
        assert_abs_diff_eq!(th, (1f64 / 3.0).asin(), epsilon = 1e-14);
    }

    #[test]
    fn perturbation_strength_parameter() {
        // quartic, L = 1: s = 1 / (c * 2) = 4^(1/3)/2
        let v: Potential<f64> = Potential::critical_quartic();
        let s = s_parameters(&v, SParameterMode::PerturbationStrength { l: 1.0 }).unwrap();
        assert_abs_diff_eq!(s, 1.0 / (0.25f64.powf(1.0 / 3.0) * 2.0), epsilon = 1e-11);
        assert_abs_diff_eq!(s, 0.7937005259840998, epsilon = 1e-10);
        let s0 = s_parameters(&v, SParameterMode::PerturbationStrength { l: 0.0 }).unwrap();
        assert_abs_diff_eq!(s0, 0.0, epsilon = 1e-14);
    }

    #[test]
    fn time_coupled_modes_agree_asymptotically() {
        // |s(L) - s*_{t,n}| and |s(L) - s_{t,n}| decay like n^{-2/3}
        let v: Potential<f64> = Potential::critical_quartic();
        let l = 1.0;
        let s_inf = s_parameters(&v, SParameterMode::PerturbationStrength { l }).unwrap();
        let mut prev_star = f64::INFINITY;
        let mut prev_coup = f64::INFINITY;
        for &n in &[16u32, 64, 256] {
            let t = 1.0 + l * (n as f64).powf(-2.0 / 3.0);
            let s_star =
                s_parameters(&v, SParameterMode::TimeCoupledLinearized { t, n }).unwrap();
            let s_coup = s_parameters(&v, SParameterMode::TimeCoupled { t, n }).unwrap();
            let d_star = (s_star - s_inf).abs();
            let d_coup = (s_coup - s_inf).abs();
            assert!(d_star < 0.6 * prev_star, "s* not converging: {d_star}");
            assert!(d_coup < 0.6 * prev_coup, "s_t,n not converging: {d_coup}");
            prev_star = d_star;
            prev_coup = d_coup;
        }
    }

    #[test]
    fn analyticity_slope_at_t1_matches_w0() {
        // d/dt psi_t(0) at t = 1 equals w0
        let v: Potential<f64> = Potential::critical_quartic();
        let sc = scaling_constants(&v).unwrap();
        let eps = 1e-3;
        let p = |t: f64| {
            let eq = solve_equilibrium(&v, t).unwrap();
            eq.psi_derivatives_at_origin().unwrap().0
        };
        let slope = (p(1.0 + eps) - p(1.0 - eps)) / (2.0 * eps);
        assert_abs_diff_eq!(slope, sc.w0, epsilon = 1e-6);
    }

    #[test]
    fn even_potentials_give_symmetric_support() {
        for coeffs in [
            vec![0.0, 0.0, -1.0, 0.0, 0.25],
            vec![0.0, 0.0, 0.3, 0.0, 0.05],
            vec![0.0, 0.0, -0.5, 0.0, 0.0, 0.0, 0.02],
        ] {
            let v = Potential::new(coeffs).unwrap();
            assert!(v.is_even());
            let eq = solve_equilibrium(&v, 1.0).unwrap();
            assert_abs_diff_eq!(eq.support.a + eq.support.b, 0.0, epsilon = 1e-12);
            assert_abs_diff_eq!(eq.mass(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn mass_is_one_across_time_window() {
        let v: Potential<f64> = Potential::critical_quartic();
        for &t in &[0.8, 0.9, 1.0, 1.1, 1.2] {
            let eq = solve_equilibrium(&v, t).unwrap();
            assert_abs_diff_eq!(eq.mass(), 1.0, epsilon = 1e-10);
        }
    }

    #[test]
    fn invalid_potentials_are_rejected() {
        assert!(Potential::new(vec![1.0, 2.0]).is_err()); // degree 1
        assert!(Potential::new(vec![0.0, 0.0, 0.0, 1.0]).is_err()); // odd degree
        assert!(Potential::new(vec![0.0, 0.0, -1.0]).is_err()); // negative leading
        assert!(s_parameters(
            &Potential::<f64>::gaussian(),
            SParameterMode::PerturbationStrength { l: 1.0 }
        )
        .is_err()); // psi''(0) < 0 at a regular point
    }

    #[test]
    fn coupling_helpers() {
        assert_eq!(big_n_from_coupling(64, 0.0), 64);
        let t: f64 = time_from_sizes(80, 80);
        assert_eq!(t, 1.0);
        // round-trip: N from coupling then t = n/N close to 1 + L n^{-2/3}
        let n = 1000u32;
        let l = 1.0;
        let big_n = big_n_from_coupling(n, l);
        let t: f64 = time_from_sizes(n, big_n);
        assert_abs_diff_eq!(t, 1.0 + l * (n as f64).powf(-2.0 / 3.0), epsilon = 2e-4);
    }
}
