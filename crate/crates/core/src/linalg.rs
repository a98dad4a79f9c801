//! Small dense linear algebra: row-major matrices and an LU solver with
//! partial pivoting.
//!
//! The systems solved in this crate (collocation Newton steps, endpoint
//! Newton steps) are at most a few hundred unknowns, so a
//! straightforward dense factorisation is both adequate and keeps every
//! code path generic over the scalar type.

use crate::error::{CoreError, Result};
use crate::scalar::Real;

/// Dense row-major matrix.
#[derive(Debug, Clone)]
pub struct Mat<T> {
    /// Number of rows.
    pub nrows: usize,
    /// Number of columns.
    pub ncols: usize,
    /// Row-major storage, `data[i * ncols + j]`.
    pub data: Vec<T>,
}

impl<T: Real> Mat<T> {
    /// Creates a zero matrix.
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        Mat {
            nrows,
            ncols,
            data: vec![T::zero(); nrows * ncols],
        }
    }

    /// Returns the entry at `(i, j)`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[i * self.ncols + j]
    }

    /// Sets the entry at `(i, j)`.
    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.ncols + j] = v;
    }

    /// Adds `v` to the entry at `(i, j)`.
    #[inline]
    pub fn add(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.ncols + j] = self.data[i * self.ncols + j] + v;
    }

    /// Matrix–vector product.
    pub fn matvec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.ncols);
        let mut y = vec![T::zero(); self.nrows];
        for i in 0..self.nrows {
            let row = &self.data[i * self.ncols..(i + 1) * self.ncols];
            let mut acc = T::zero();
            for (a, b) in row.iter().zip(x.iter()) {
                acc = acc + *a * *b;
            }
            y[i] = acc;
        }
        y
    }
}

/// Solves the dense system `A x = b` in place via LU with partial
/// pivoting. `a` is destroyed; `b` is overwritten with the solution.
pub fn lu_solve_in_place<T: Real>(a: &mut Mat<T>, b: &mut [T]) -> Result<()> {
    let n = a.nrows;
    assert_eq!(a.ncols, n, "lu_solve requires a square matrix");
    assert_eq!(b.len(), n);

    for k in 0..n {
        // pivot search
        let mut p = k;
        let mut pmax = a.get(k, k).abs();
        for i in (k + 1)..n {
            let v = a.get(i, k).abs();
            if v > pmax {
                pmax = v;
                p = i;
            }
        }
        if pmax == T::zero() || !pmax.is_finite() {
            return Err(CoreError::SingularSystem(format!(
                "pivot {pmax:?} at column {k}"
            )));
        }
        if p != k {
            for j in 0..n {
                let t = a.get(k, j);
                a.set(k, j, a.get(p, j));
                a.set(p, j, t);
            }
            b.swap(k, p);
        }
        // elimination
        let inv = T::one() / a.get(k, k);
        for i in (k + 1)..n {
            let f = a.get(i, k) * inv;
            if f != T::zero() {
                a.set(i, k, f);
                for j in (k + 1)..n {
                    let v = a.get(i, j) - f * a.get(k, j);
                    a.set(i, j, v);
                }
                b[i] = b[i] - f * b[k];
            }
        }
    }
    // back substitution
    for i in (0..n).rev() {
        let mut acc = b[i];
        for j in (i + 1)..n {
            acc = acc - a.get(i, j) * b[j];
        }
        b[i] = acc / a.get(i, i);
    }
    Ok(())
}

/// Solves `A x = b` without destroying the inputs.
pub fn lu_solve<T: Real>(a: &Mat<T>, b: &[T]) -> Result<Vec<T>> {
    let mut ac = a.clone();
    let mut bc = b.to_vec();
    lu_solve_in_place(&mut ac, &mut bc)?;
    Ok(bc)
}

/// Maximum absolute entry of a slice.
pub fn max_abs<T: Real>(v: &[T]) -> T {
    v.iter().fold(T::zero(), |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        // A = [[2, 1], [1, 3]], b = [5, 10] -> x = [1, 3]
        let mut a = Mat::<f64>::zeros(2, 2);
        a.set(0, 0, 2.0);
        a.set(0, 1, 1.0);
        a.set(1, 0, 1.0);
        a.set(1, 1, 3.0);
        let x = lu_solve(&a, &[5.0, 10.0]).unwrap();
        assert!((x[0] - 1.0).abs() < 1e-14);
        assert!((x[1] - 3.0).abs() < 1e-14);
    }

    #[test]
    fn detects_singular() {
        let mut a = Mat::<f64>::zeros(2, 2);
        a.set(0, 0, 1.0);
        a.set(0, 1, 2.0);
        a.set(1, 0, 2.0);
        a.set(1, 1, 4.0);
        assert!(lu_solve(&a, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn random_residual_is_small() {
        // deterministic pseudo-random fill; checks A x - b for n = 40
        let n = 40;
        let mut a = Mat::zeros(n, n);
        let mut state = 0x9e3779b97f4a7c15u64;
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64) / ((1u64 << 53) as f64) - 0.5
        };
        for i in 0..n {
            for j in 0..n {
                let d = if i == j { 4.0 } else { 0.0 };
                a.set(i, j, next() + d);
            }
        }
        let b: Vec<f64> = (0..n).map(|_| next()).collect();
        let x = lu_solve(&a, &b).unwrap();
        let r: Vec<f64> = a
            .matvec(&x)
            .iter()
            .zip(b.iter())
            .map(|(ax, bb)| ax - bb)
            .collect();
        assert!(max_abs(&r) < 1e-12);
    }
}
