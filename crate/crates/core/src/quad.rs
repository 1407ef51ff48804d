//! Quadrature primitives shared across the crate: Gauss–Legendre rules and
//! deterministic pairwise reductions.

use num_complex::Complex64;
use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

/// Nodes and weights of an `n`-point Gauss–Legendre rule on `[-1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    /// Newton iteration on the Legendre recurrence; nodes ascending.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "rule needs at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = n.div_ceil(2);
        for i in 0..m {
            // Tricomi-style initial guess, then Newton.
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_pair(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    let (p2, d2) = legendre_pair(n, x);
                    dp = d2;
                    x -= p2 / d2;
                    break;
                }
            }
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
            let (_, d) = legendre_pair(n, 0.0);
            weights[n / 2] = 2.0 / (d * d);
        }
        GaussLegendre { nodes, weights }
    }

    /// Cached rule, shared across threads.
    pub fn cached(n: usize) -> Arc<GaussLegendre> {
        static CACHE: OnceLock<Mutex<HashMap<usize, Arc<GaussLegendre>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        guard
            .entry(n)
            .or_insert_with(|| Arc::new(GaussLegendre::new(n)))
            .clone()
    }

    /// Integrate `f` over `[a, b]` with this rule.
    pub fn integrate<F: FnMut(f64) -> f64>(&self, a: f64, b: f64, mut f: F) -> f64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut vals = Vec::with_capacity(self.nodes.len());
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            vals.push(w * h * f(c + h * x));
        }
        pairwise_sum(&vals)
    }

    /// Complex-valued variant of [`GaussLegendre::integrate`].
    pub fn integrate_complex<F: FnMut(f64) -> Complex64>(
        &self,
        a: f64,
        b: f64,
        mut f: F,
    ) -> Complex64 {
        let c = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let mut vals = Vec::with_capacity(self.nodes.len());
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            vals.push(f(c + h * x) * (w * h));
        }
        pairwise_sum_complex(&vals)
    }
}

/// Legendre polynomial `P_n(x)` and derivative `P'_n(x)` by upward recurrence.
fn legendre_pair(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Pairwise (cascade) summation. Deterministic for a fixed slice regardless
/// of the caller's thread count, and markedly more accurate than a naive
/// left-to-right sum on long vectors.
pub fn pairwise_sum(x: &[f64]) -> f64 {
    if x.len() <= 32 {
        let mut s = 0.0;
        for &v in x {
            s += v;
        }
        s
    } else {
        let mid = x.len() / 2;
        pairwise_sum(&x[..mid]) + pairwise_sum(&x[mid..])
    }
}

/// Complex pairwise summation; same contract as [`pairwise_sum`].
pub fn pairwise_sum_complex(x: &[Complex64]) -> Complex64 {
    if x.len() <= 32 {
        let mut s = Complex64::new(0.0, 0.0);
        for &v in x {
            s += v;
        }
        s
    } else {
        let mid = x.len() / 2;
        pairwise_sum_complex(&x[..mid]) + pairwise_sum_complex(&x[mid..])
    }
}

/// Pairwise dot product of a real row against a complex vector.
pub fn pairwise_dot(row: &[f64], v: &[Complex64]) -> Complex64 {
    debug_assert_eq!(row.len(), v.len());
    if row.len() <= 32 {
        let mut s = Complex64::new(0.0, 0.0);
        for (&a, &b) in row.iter().zip(v) {
            s += b * a;
        }
        s
    } else {
        let mid = row.len() / 2;
        pairwise_dot(&row[..mid], &v[..mid]) + pairwise_dot(&row[mid..], &v[mid..])
    }
}

/// Trapezoid integral of uniformly sampled values with spacing `dt`.
pub fn trapezoid_uniform(values: &[f64], dt: f64) -> f64 {
    if values.len() < 2 {
        return 0.0;
    }
    let inner = pairwise_sum(&values[1..values.len() - 1]);
    dt * (inner + 0.5 * (values[0] + values[values.len() - 1]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gl_integrates_polynomials_exactly() {
        let gl = GaussLegendre::new(5);
        // degree 9 is exact for a 5-point rule
        let val = gl.integrate(-1.0, 1.0, |x| x.powi(8));
        assert!((val - 2.0 / 9.0).abs() < 1e-14, "got {val}");
        let val = gl.integrate(0.0, 2.0, |x| 3.0 * x * x);
        assert!((val - 8.0).abs() < 1e-13);
    }

    #[test]
    fn gl_large_rule_is_symmetric_and_normalised() {
        let gl = GaussLegendre::new(200);
        let total: f64 = pairwise_sum(&gl.weights);
        assert!((total - 2.0).abs() < 1e-13);
        for i in 0..gl.nodes.len() {
            assert!((gl.nodes[i] + gl.nodes[gl.nodes.len() - 1 - i]).abs() < 1e-14);
        }
        // nodes strictly increasing
        for w in gl.nodes.windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn gl_oscillatory_within_resolution() {
        // 200 nodes resolve e^{i w x} for w well above 150
        let gl = GaussLegendre::new(200);
        let w = 150.0;
        let val = gl.integrate(-1.0, 1.0, |x| (w * x).cos());
        let exact = 2.0 * (w).sin() / w;
        assert!((val - exact).abs() < 1e-12, "err {}", (val - exact).abs());
    }

    #[test]
    fn pairwise_matches_exact_on_integers() {
        let xs: Vec<f64> = (1..=1000).map(|i| i as f64).collect();
        assert_eq!(pairwise_sum(&xs), 500500.0);
    }

    #[test]
    fn trapezoid_linear_exact() {
        let xs: Vec<f64> = (0..=10).map(|i| i as f64 * 0.1).collect();
        let v = trapezoid_uniform(&xs, 0.1);
        assert!((v - 0.5).abs() < 1e-15);
    }
}
