//! Gauss–Legendre and Gauss–Lobatto rules.

use alloc::vec::Vec;
use core::f64::consts::PI;

use crate::math::cos;

/// `(P_n(x), P_n'(x))` by the three-term recurrence.
fn legendre(n: usize, x: f64) -> (f64, f64) {
    if n == 0 {
        return (1.0, 0.0);
    }
    let (mut p0, mut p1) = (1.0, x);
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let nf = n as f64;
    let dp = if (x * x - 1.0).abs() < 1e-300 {
        0.5 * nf * (nf + 1.0) * if x > 0.0 { 1.0 } else { powi_sign(n + 1) }
    } else {
        nf * (x * p1 - p0) / (x * x - 1.0)
    };
    (p1, dp)
}

fn powi_sign(k: usize) -> f64 {
    if k % 2 == 0 {
        1.0
    } else {
        -1.0
    }
}

/// A quadrature rule on some interval: nodes ascending, weights summing to
/// the interval length.
#[derive(Debug, Clone, PartialEq)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    /// Affine map of a rule on [-1, 1] to [a, b].
    fn mapped(self, a: f64, b: f64) -> Rule {
        let h = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        Rule {
            nodes: self.nodes.iter().map(|x| mid + h * x).collect(),
            weights: self.weights.iter().map(|w| h * w).collect(),
        }
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }
}

fn gauss_legendre_ref(n: usize) -> Rule {
    assert!(n >= 1);
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-like initial guess, descending roots
        let mut x = cos(PI * (i as f64 + 0.75) / (n as f64 + 0.5));
        for _ in 0..100 {
            let (p, dp) = legendre(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        let (_, dp) = legendre(n, x);
        nodes.push(x);
        weights.push(2.0 / ((1.0 - x * x) * dp * dp));
    }
    nodes.reverse();
    weights.reverse();
    symmetrize(&mut nodes, &mut weights);
    Rule { nodes, weights }
}

/// Enforce exact point symmetry of a rule on [-1, 1].
fn symmetrize(nodes: &mut [f64], weights: &mut [f64]) {
    let n = nodes.len();
    for i in 0..n / 2 {
        let j = n - 1 - i;
        let x = 0.5 * (nodes[j] - nodes[i]);
        let w = 0.5 * (weights[i] + weights[j]);
        nodes[i] = -x;
        nodes[j] = x;
        weights[i] = w;
        weights[j] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
}

/// `n`-point Gauss–Legendre rule on `[a, b]`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> Rule {
    gauss_legendre_ref(n).mapped(a, b)
}

/// `n`-point Gauss–Lobatto rule on `[a, b]` (`n ≥ 2`, endpoints included).
pub fn gauss_lobatto(n: usize, a: f64, b: f64) -> Rule {
    assert!(n >= 2);
    let m = n - 1;
    let mf = m as f64;
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    nodes.push(-1.0);
    for i in 1..m {
        // interior nodes are the roots of P_m'; start from Chebyshev–Lobatto points
        let mut x = -cos(PI * i as f64 / mf);
        for _ in 0..100 {
            let (p, dp) = legendre(m, x);
            // P_m'' from the Legendre ODE
            let d2p = (2.0 * x * dp - mf * (mf + 1.0) * p) / (1.0 - x * x);
            let dx = dp / d2p;
            x -= dx;
            if dx.abs() <= 1e-16 {
                break;
            }
        }
        nodes.push(x);
    }
    nodes.push(1.0);
    for &x in &nodes {
        let (p, _) = legendre(m, x);
        weights.push(2.0 / (mf * (mf + 1.0) * p * p));
    }
    symmetrize(&mut nodes, &mut weights);
    Rule { nodes, weights }.mapped(a, b)
}
