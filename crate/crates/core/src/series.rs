//! Asymptotic boundary expansions of the Hastings–McLeod solution of the
//! general Painlevé II equation `q'' = s q + 2 q^3 - alpha`.
//!
//! On the right end the distinguished solution behaves like `alpha / s`
//! with algebraically small corrections; on the left end it follows the
//! square-root branch `sqrt(-s/2)`. The two-term truncations implemented
//! here supply boundary data (value and derivative) for the collocation
//! solver and the boundary-consistency checks.

use crate::error::{CoreError, Result};
use crate::scalar::{r, Real};

/// Two-term right-end expansion: `q ~ alpha/s + 2 alpha (1 - alpha^2) / s^4`.
///
/// `order = 1` keeps only `alpha/s`; `order = 2` adds the `s^{-4}`
/// correction. Requires `s > 0`.
pub fn q_plus_series<T: Real>(alpha: T, s: T, order: usize) -> Result<T> {
    if !(s > T::zero()) {
        return Err(CoreError::InvalidArgument(format!(
            "q_plus_series requires s > 0, got {s}"
        )));
    }
    if !(order == 1 || order == 2) {
        return Err(CoreError::InvalidArgument(format!(
            "q_plus_series order must be 1 or 2, got {order}"
        )));
    }
    let mut v = alpha / s;
    if order == 2 {
        let two = r::<T>(2.0);
        v = v + two * alpha * (T::one() - alpha * alpha) / s.powi(4);
    }
    Ok(v)
}

/// Derivative (in `s`) of the two-term right-end expansion.
pub fn q_plus_series_deriv<T: Real>(alpha: T, s: T, order: usize) -> Result<T> {
    if !(s > T::zero()) {
        return Err(CoreError::InvalidArgument(format!(
            "q_plus_series_deriv requires s > 0, got {s}"
        )));
    }
    let mut v = -alpha / (s * s);
    if order >= 2 {
        let eight = r::<T>(8.0);
        v = v - eight * alpha * (T::one() - alpha * alpha) / s.powi(5);
    }
    Ok(v)
}

/// Two-term left-end expansion: `q ~ sqrt(-s/2) - alpha/(2s)`.
///
/// `order = 1` keeps only the square root; `order = 2` adds the
/// `alpha`-dependent correction. Requires `s < 0`.
pub fn q_minus_series<T: Real>(alpha: T, s: T, order: usize) -> Result<T> {
    if !(s < T::zero()) {
        return Err(CoreError::InvalidArgument(format!(
            "q_minus_series requires s < 0, got {s}"
        )));
    }
    if !(order == 1 || order == 2) {
        return Err(CoreError::InvalidArgument(format!(
            "q_minus_series order must be 1 or 2, got {order}"
        )));
    }
    let half = r::<T>(0.5);
    let mut v = (-s * half).sqrt();
    if order == 2 {
        v = v - alpha / (s + s);
    }
    Ok(v)
}

/// Derivative (in `s`) of the two-term left-end expansion.
pub fn q_minus_series_deriv<T: Real>(alpha: T, s: T, order: usize) -> Result<T> {
    if !(s < T::zero()) {
        return Err(CoreError::InvalidArgument(format!(
            "q_minus_series_deriv requires s < 0, got {s}"
        )));
    }
    let half = r::<T>(0.5);
    let quarter = r::<T>(0.25);
    let mut v = -quarter / (-s * half).sqrt();
    if order >= 2 {
        v = v + alpha / (r::<T>(2.0) * s * s);
    }
    Ok(v)
}

/// Relative truncation error scale of the order-2 left-end expansion:
/// the magnitude of the first omitted term relative to the leading one,
/// `(1/8 + 3 alpha^2 / 4) |s|^{-3}`.
///
/// Used by the boundary-consistency checks; the corresponding right-end
/// scale is `2 |1 - alpha^2| (20 - 6 alpha^2)| |s|^{-6}`-sized and is in
/// practice dominated by this one.
pub fn q_minus_series_error_scale<T: Real>(alpha: T, s: T) -> T {
    let g2 = r::<T>(0.125) + r::<T>(0.75) * alpha * alpha;
    g2 / (s * s * s).abs()
}
