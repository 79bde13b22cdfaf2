//! Quadrature helpers: composite Gauss-Legendre for closed-form integrands
//! and exact power-law antiderivatives.

use std::f64::consts::PI;

/// Gauss-Legendre rule on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Nodes by Newton iteration on `P_n` starting from the Chebyshev guess.
    pub fn new(order: usize) -> Self {
        assert!(order >= 1);
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 1.0;
            for _ in 0..100 {
                let (p, d) = legendre(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre(n, x);
            dp = if d != 0.0 { d } else { dp };
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn integrate<F: Fn(f64) -> f64>(&self, f: F, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (b + a);
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(mid + half * x))
            .sum::<f64>()
            * half
    }

    /// Sum of the rule over consecutive panels `edges[k]..edges[k+1]`.
    pub fn integrate_panels<F: Fn(f64) -> f64>(&self, f: F, edges: &[f64]) -> f64 {
        edges.windows(2).map(|e| self.integrate(&f, e[0], e[1])).sum()
    }
}

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let p = if n == 0 { 1.0 } else { p1 };
    let d = n as f64 * (x * p - p0) / (x * x - 1.0);
    (p, d)
}

/// Panel edges on `[a, b]` (0 < a < b) that grow geometrically by `ratio`
/// from the left end, for integrands with a power singularity left of `a`.
pub fn geometric_edges(a: f64, b: f64, ratio: f64) -> Vec<f64> {
    assert!(a > 0.0 && b > a && ratio > 1.0);
    let mut edges = vec![a];
    let mut x = a;
    while x * ratio < b {
        x *= ratio;
        edges.push(x);
    }
    edges.push(b);
    edges
}

/// Exact `int_a^b x^p dx` for `0 < a <= b`, stable near `p = -1`.
pub fn power_integral(p: f64, a: f64, b: f64) -> f64 {
    let q = p + 1.0;
    let log_ratio = (b / a).ln();
    if q == 0.0 {
        return log_ratio;
    }
    // a^q (exp(q ln(b/a)) - 1) / q, with exp_m1 keeping accuracy when q*ln is small
    a.powf(q) * (q * log_ratio).exp_m1() / q
}

/// Midpoint-rule integral of cell values with spacing `dx`.
pub fn midpoint_sum<I: IntoIterator<Item = f64>>(values: I, dx: f64) -> f64 {
    values.into_iter().sum::<f64>() * dx
}
