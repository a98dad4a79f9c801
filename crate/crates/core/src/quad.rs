//! Gaussian quadrature rules.
//!
//! Gauss–Legendre and Gauss–Jacobi rules are generated from the known
//! three-term recurrence of the Jacobi polynomials: nodes are located by
//! interlacing (each level's roots bracket the next level's), refined by
//! bisection plus a Newton polish, and the weights are Christoffel
//! numbers computed from the orthonormal recurrence. No eigensolver is
//! required, and rules of the sizes used here (a few hundred points) are
//! produced at startup cost only.
//!
//! Nodes and weights are computed in `f64`; callers that work in wider
//! scalars lift them, which is adequate because discretisation accuracy,
//! not node accuracy, limits those computations.

/// Natural log of the gamma function (Lanczos approximation, g = 7).
///
/// Accurate to about 1e-14 relative error for positive arguments, which
/// covers every use in this crate.
pub fn ln_gamma(x: f64) -> f64 {
    const COEF: [f64; 9] = [
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    ];
    if x < 0.5 {
        // reflection formula
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = COEF[0];
    let t = x + 7.5;
    for (i, c) in COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

/// A quadrature rule: nodes and weights on some interval.
#[derive(Debug, Clone)]
pub struct QuadRule {
    /// Quadrature nodes in ascending order.
    pub nodes: Vec<f64>,
    /// Quadrature weights (positive).
    pub weights: Vec<f64>,
}

impl QuadRule {
    /// Maps a rule on `[-1, 1]` affinely to `[x0, x1]`, scaling weights
    /// by the Jacobian. For Jacobi rules the weight-function factor is
    /// handled by the caller (see [`gauss_jacobi_01`]).
    pub fn scaled_to(&self, x0: f64, x1: f64) -> QuadRule {
        let half = 0.5 * (x1 - x0);
        let mid = 0.5 * (x0 + x1);
        QuadRule {
            nodes: self.nodes.iter().map(|&t| mid + half * t).collect(),
            weights: self.weights.iter().map(|&w| w * half).collect(),
        }
    }

    /// Integrates `f` against the rule.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(self.weights.iter())
            .map(|(&x, &w)| w * f(x))
            .sum()
    }
}

/// Recurrence data for Jacobi polynomials with parameters `(a, b)` on
/// `[-1, 1]` with weight `(1-x)^a (1+x)^b`.
struct JacobiRecurrence {
    /// Diagonal recurrence coefficients of the monic polynomials.
    alpha: Vec<f64>,
    /// Square roots of the off-diagonal coefficients (orthonormal form).
    sqrt_beta: Vec<f64>,
    /// Total mass of the weight on `[-1, 1]`.
    mu0: f64,
}

impl JacobiRecurrence {
    fn new(n: usize, a: f64, b: f64) -> Self {
        let mu0 = (2f64.ln() * (a + b + 1.0) + ln_gamma(a + 1.0) + ln_gamma(b + 1.0)
            - ln_gamma(a + b + 2.0))
        .exp();
        let mut alpha = Vec::with_capacity(n + 1);
        let mut beta = Vec::with_capacity(n + 1);
        beta.push(mu0);
        for k in 0..=n {
            let kf = k as f64;
            let den = (2.0 * kf + a + b) * (2.0 * kf + a + b + 2.0);
            let al = if k == 0 {
                (b - a) / (a + b + 2.0)
            } else {
                (b * b - a * a) / den
            };
            alpha.push(al);
            if k >= 1 {
                let num = 4.0 * kf * (kf + a) * (kf + b) * (kf + a + b);
                let den2 = (2.0 * kf + a + b).powi(2) * (2.0 * kf + a + b + 1.0)
                    * (2.0 * kf + a + b - 1.0);
                beta.push(num / den2);
            }
        }
        JacobiRecurrence {
            alpha,
            sqrt_beta: beta.iter().map(|&v| v.sqrt()).collect(),
            mu0,
        }
    }

    /// Evaluates the orthonormal polynomials `p_0..=p_m` at `x`,
    /// returning `(p_m, p_m')` and filling `all` (if given) with the
    /// values `p_k(x)`.
    fn eval(&self, m: usize, x: f64, mut all: Option<&mut Vec<f64>>) -> (f64, f64) {
        let mut pkm1 = 0.0f64;
        let mut pk = 1.0 / self.mu0.sqrt();
        let mut dkm1 = 0.0f64;
        let mut dk = 0.0f64;
        if let Some(v) = all.as_deref_mut() {
            v.clear();
            v.push(pk);
        }
        for k in 0..m {
            let inv = 1.0 / self.sqrt_beta[k + 1];
            let pk1 = ((x - self.alpha[k]) * pk - self.sqrt_beta[k] * pkm1) * inv;
            let dk1 = ((x - self.alpha[k]) * dk + pk - self.sqrt_beta[k] * dkm1) * inv;
            pkm1 = pk;
            pk = pk1;
            dkm1 = dk;
            dk = dk1;
            if let Some(v) = all.as_deref_mut() {
                v.push(pk);
            }
        }
        (pk, dk)
    }
}

/// Gauss rule with `n` points for the Jacobi weight `(1-x)^a (1+x)^b`
/// on `[-1, 1]`. The weights integrate the weight function itself, so
/// `sum(w) = 2^(a+b+1) B(a+1, b+1)`.
pub fn gauss_jacobi(n: usize, a: f64, b: f64) -> QuadRule {
    assert!(n >= 1);
    assert!(a > -1.0 && b > -1.0, "Jacobi parameters must exceed -1");
    let rec = JacobiRecurrence::new(n, a, b);

    // roots by interlacing: level m roots are bracketed by level m-1 roots
    let mut roots: Vec<f64> = vec![rec.alpha[0]];
    for m in 2..=n {
        let mut brackets = Vec::with_capacity(m + 1);
        brackets.push(-1.0);
        brackets.extend_from_slice(&roots);
        brackets.push(1.0);
        let mut new_roots = Vec::with_capacity(m);
        for i in 0..m {
            let (mut lo, mut hi) = (brackets[i], brackets[i + 1]);
            let mut flo = rec.eval(m, lo, None).0;
            // 30 bisection steps isolate the root well enough for Newton
            for _ in 0..30 {
                let mid = 0.5 * (lo + hi);
                let fmid = rec.eval(m, mid, None).0;
                if (fmid >= 0.0) == (flo >= 0.0) {
                    lo = mid;
                    flo = fmid;
                } else {
                    hi = mid;
                }
            }
            let mut x = 0.5 * (lo + hi);
            for _ in 0..3 {
                let (p, dp) = rec.eval(m, x, None);
                let step = p / dp;
                let xn = x - step;
                if xn > lo && xn < hi {
                    x = xn;
                } else {
                    break;
                }
            }
            new_roots.push(x);
        }
        roots = new_roots;
    }

    // Christoffel numbers from the orthonormal values
    let mut pvals = Vec::with_capacity(n);
    let weights: Vec<f64> = roots
        .iter()
        .map(|&x| {
            rec.eval(n - 1, x, Some(&mut pvals));
            let s: f64 = pvals.iter().map(|&p| p * p).sum();
            1.0 / s
        })
        .collect();
    QuadRule {
        nodes: roots,
        weights,
    }
}

/// Gauss–Legendre rule with `n` points on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> QuadRule {
    gauss_jacobi(n, 0.0, 0.0)
}

/// Gauss–Jacobi rule for the weight `x^beta` on `[0, d]`: returns nodes
/// in `(0, d)` and weights that integrate `x^beta dx` exactly against
/// polynomials (the singular factor is inside the weights).
pub fn gauss_jacobi_01(n: usize, beta: f64, d: f64) -> QuadRule {
    // weight (1+t)^beta on [-1,1]; x = d*(1+t)/2 gives x^beta dx =
    // (d/2)^(beta+1) (1+t)^beta dt
    let base = gauss_jacobi(n, 0.0, beta);
    let f = (0.5 * d).powf(beta + 1.0);
    QuadRule {
        nodes: base.nodes.iter().map(|&t| 0.5 * d * (1.0 + t)).collect(),
        weights: base.weights.iter().map(|&w| w * f).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ln_gamma_known_values() {
        // gamma(1) = gamma(2) = 1, gamma(0.5) = sqrt(pi)
        assert!(ln_gamma(1.0).abs() < 1e-13);
        assert!(ln_gamma(2.0).abs() < 1e-13);
        let g = ln_gamma(0.5).exp();
        assert!((g - std::f64::consts::PI.sqrt()).abs() < 1e-13);
        // gamma(5) = 24
        assert!((ln_gamma(5.0).exp() - 24.0).abs() < 1e-11);
    }

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        let rule = gauss_legendre(12);
        assert_eq!(rule.nodes.len(), 12);
        // sum of weights = 2
        let s: f64 = rule.weights.iter().sum();
        assert!((s - 2.0).abs() < 1e-13);
        // exact through degree 23: check x^22 -> 2/23
        let v = rule.integrate(|x| x.powi(22));
        assert!((v - 2.0 / 23.0).abs() < 1e-14);
        // odd power -> 0
        let v = rule.integrate(|x| x.powi(13));
        assert!(v.abs() < 1e-15);
    }

    #[test]
    fn legendre_integrates_smooth_functions() {
        let rule = gauss_legendre(20);
        let v = rule.integrate(f64::exp);
        let exact = std::f64::consts::E - 1.0 / std::f64::consts::E;
        assert!((v - exact).abs() < 1e-14);
    }

    #[test]
    fn jacobi_mass_and_moments() {
        // weight (1+x)^b on [-1,1]: mass = 2^(b+1)/(b+1),
        // first moment of (1+x): int (1+x)^(b+1) = 2^(b+2)/(b+2)
        let b = 0.6;
        let rule = gauss_jacobi(10, 0.0, b);
        let mass: f64 = rule.weights.iter().sum();
        assert!((mass - 2f64.powf(b + 1.0) / (b + 1.0)).abs() < 1e-13);
        let m1 = rule.integrate(|x| 1.0 + x);
        assert!((m1 - 2f64.powf(b + 2.0) / (b + 2.0)).abs() < 1e-13);
        // degree-19 exactness: (1+x)^19 has closed form too
        let m19 = rule.integrate(|x| (1.0 + x).powi(19));
        assert!((m19 / (2f64.powf(b + 20.0) / (b + 20.0)) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn jacobi_01_integrates_singular_weight() {
        // int_0^d x^beta * x^k dx = d^(beta+k+1)/(beta+k+1)
        let (beta, d) = (0.6, 0.35);
        let rule = gauss_jacobi_01(8, beta, d);
        for k in 0..6 {
            let v = rule.integrate(|x| x.powi(k));
            let e = d.powf(beta + k as f64 + 1.0) / (beta + k as f64 + 1.0);
            assert!((v / e - 1.0).abs() < 1e-12, "k={k}: {v} vs {e}");
        }
        assert!(rule.nodes.iter().all(|&x| x > 0.0 && x < d));
    }

    #[test]
    fn weights_are_positive_and_nodes_sorted() {
        for &(a, b) in &[(0.0, 0.0), (0.0, 1.4), (0.3, 0.0)] {
            let rule = gauss_jacobi(40, a, b);
            assert!(rule.weights.iter().all(|&w| w > 0.0));
            for i in 1..rule.nodes.len() {
                assert!(rule.nodes[i] > rule.nodes[i - 1]);
            }
        }
    }

    #[test]
    fn large_rule_stays_accurate() {
        // n = 160 Legendre integrating cos over [-1, 1]
        let rule = gauss_legendre(160);
        let v = rule.integrate(f64::cos);
        assert!((v - 2.0 * 1f64.sin()).abs() < 1e-13);
    }
}
