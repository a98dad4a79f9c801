//! Chebyshev–Lobatto collocation utilities: nodes, barycentric
//! interpolation, and spectral differentiation matrices.
//!
//! Nodes are stored in ascending order on the reference interval
//! `[-1, 1]`. Differentiation matrices use the barycentric formula with
//! the negative-sum trick for the diagonal, which keeps them accurate
//! for the modest polynomial degrees used here.

use crate::linalg::Mat;
use crate::scalar::{r, ru, Real};

/// Chebyshev–Lobatto nodes in ascending order on `[-1, 1]`:
/// `x_j = -cos(j*pi/p)`, `j = 0..=p`.
pub fn lobatto_nodes<T: Real>(p: usize) -> Vec<T> {
    assert!(p >= 1);
    let pi = r::<T>(std::f64::consts::PI);
    (0..=p)
        .map(|j| -(pi * ru::<T>(j) / ru::<T>(p)).cos())
        .collect()
}

/// Barycentric weights for the Chebyshev–Lobatto nodes of degree `p`:
/// `w_j = (-1)^j * d_j` with `d_j = 1/2` at the two ends and `1` inside.
pub fn lobatto_bary_weights<T: Real>(p: usize) -> Vec<T> {
    (0..=p)
        .map(|j| {
            let sign = if j % 2 == 0 { T::one() } else { -T::one() };
            let d = if j == 0 || j == p {
                r::<T>(0.5)
            } else {
                T::one()
            };
            sign * d
        })
        .collect()
}

/// First-derivative collocation matrix for arbitrary nodes with
/// barycentric weights `w` (negative-sum trick on the diagonal).
pub fn diff_matrix<T: Real>(nodes: &[T], w: &[T]) -> Mat<T> {
    let n = nodes.len();
    assert_eq!(w.len(), n);
    let mut d = Mat::zeros(n, n);
    for i in 0..n {
        let mut diag = T::zero();
        for j in 0..n {
            if i != j {
                let v = (w[j] / w[i]) / (nodes[i] - nodes[j]);
                d.set(i, j, v);
                diag = diag - v;
            }
        }
        d.set(i, i, diag);
    }
    d
}

/// Evaluates the polynomial interpolant through `(nodes, values)` with
/// barycentric weights `w` at the point `x` (exact at the nodes).
pub fn bary_eval<T: Real>(nodes: &[T], w: &[T], values: &[T], x: T) -> T {
    let mut num = T::zero();
    let mut den = T::zero();
    for j in 0..nodes.len() {
        let dx = x - nodes[j];
        if dx == T::zero() {
            return values[j];
        }
        let c = w[j] / dx;
        num = num + c * values[j];
        den = den + c;
    }
    num / den
}

/// Affine map from the reference interval `[-1, 1]` to `[a, b]`.
#[inline]
pub fn to_interval<T: Real>(xi: T, a: T, b: T) -> T {
    let half = r::<T>(0.5);
    half * ((b - a) * xi + (a + b))
}

/// Affine map from `[a, b]` to the reference interval `[-1, 1]`.
#[inline]
pub fn to_reference<T: Real>(x: T, a: T, b: T) -> T {
    (x + x - (a + b)) / (b - a)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nodes_are_ascending_and_symmetric() {
        let x: Vec<f64> = lobatto_nodes(8);
        assert_eq!(x.len(), 9);
        assert!((x[0] + 1.0).abs() < 1e-15);
        assert!((x[8] - 1.0).abs() < 1e-15);
        for j in 0..8 {
            assert!(x[j] < x[j + 1]);
            assert!((x[j] + x[8 - j]).abs() < 1e-15);
        }
    }

    #[test]
    fn differentiates_polynomials_exactly() {
        // degree-p collocation differentiates degree-<=p polynomials exactly
        let p = 10;
        let x: Vec<f64> = lobatto_nodes(p);
        let w: Vec<f64> = lobatto_bary_weights(p);
        let d = diff_matrix(&x, &w);
        // f(x) = x^7 - 3x^2 + 2, f'(x) = 7x^6 - 6x
        let f: Vec<f64> = x.iter().map(|&t| t.powi(7) - 3.0 * t * t + 2.0).collect();
        let fp = d.matvec(&f);
        for (j, &t) in x.iter().enumerate() {
            let exact = 7.0 * t.powi(6) - 6.0 * t;
            assert!((fp[j] - exact).abs() < 1e-10, "node {j}: {} vs {exact}", fp[j]);
        }
    }

    #[test]
    fn differentiates_smooth_function_spectrally() {
        let p = 24;
        let x: Vec<f64> = lobatto_nodes(p);
        let w: Vec<f64> = lobatto_bary_weights(p);
        let d = diff_matrix(&x, &w);
        let f: Vec<f64> = x.iter().map(|&t| (2.0 * t).sin()).collect();
        let fp = d.matvec(&f);
        for (j, &t) in x.iter().enumerate() {
            let exact = 2.0 * (2.0 * t).cos();
            assert!((fp[j] - exact).abs() < 1e-10);
        }
    }

    #[test]
    fn barycentric_is_exact_at_nodes_and_interpolates() {
        let p = 12;
        let x: Vec<f64> = lobatto_nodes(p);
        let w: Vec<f64> = lobatto_bary_weights(p);
        let f: Vec<f64> = x.iter().map(|&t| (1.5 * t).cos()).collect();
        for (j, &t) in x.iter().enumerate() {
            assert_eq!(bary_eval(&x, &w, &f, t), f[j]);
        }
        let v = bary_eval(&x, &w, &f, 0.3);
        assert!((v - (1.5f64 * 0.3).cos()).abs() < 1e-12);
    }

    #[test]
    fn interval_maps_roundtrip() {
        let (a, b) = (-3.0, 7.0);
        for &xi in &[-1.0f64, -0.25, 0.0, 0.6, 1.0] {
            let x = to_interval(xi, a, b);
            assert!((to_reference(x, a, b) - xi).abs() < 1e-14);
        }
    }
}
