//! Gauss–Legendre quadrature on the open interval (0, π).
//!
//! The traveling-mode integrand is analytic in the wave number k, so
//! Gaussian quadrature converges superalgebraically; 2048 nodes resolve
//! dispersion phases and mode oscillations for the window sizes used here
//! with large margin.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::{Arc, Mutex, OnceLock};

/// Nodes and weights of an n-point Gauss–Legendre rule mapped to (0, π).
///
/// Nodes are strictly interior and ascending.
#[derive(Debug, Clone)]
pub struct KGrid {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl KGrid {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// (k, weight) pairs, ascending in k.
    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }
}

/// Legendre polynomial P_n and its derivative at x, by upward recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p_prev = 1.0;
    let mut p = x;
    for j in 2..=n {
        let jf = j as f64;
        let p_next = ((2.0 * jf - 1.0) * x * p - (jf - 1.0) * p_prev) / jf;
        p_prev = p;
        p = p_next;
    }
    let dp = n as f64 * (x * p - p_prev) / (x * x - 1.0);
    (p, dp)
}

/// Build the n-point rule on [-1, 1] by Newton iteration from the
/// Chebyshev-like initial guesses, then map to (0, π).
fn build(n: usize) -> KGrid {
    assert!(n >= 1, "quadrature needs at least one node");
    let mut x = vec![0.0f64; n];
    let mut w = vec![0.0f64; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut root = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, root);
            let step = p / d;
            root -= step;
            if step.abs() <= 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, root);
        let weight = 2.0 / ((1.0 - root * root) * dp * dp);
        // roots come out descending in this ordering; store symmetric pair
        x[i] = -root;
        x[n - 1 - i] = root;
        w[i] = weight;
        w[n - 1 - i] = weight;
    }
    if n % 2 == 1 {
        x[n / 2] = 0.0;
        let (_, dp) = legendre_with_derivative(n, 0.0);
        w[n / 2] = 2.0 / (dp * dp);
    }
    let nodes = x.iter().map(|&xi| 0.5 * PI * (xi + 1.0)).collect();
    let weights = w.iter().map(|&wi| 0.5 * PI * wi).collect();
    KGrid { nodes, weights }
}

/// Shared, memoized rule on (0, π). Rules are immutable once built.
pub fn rule(n: usize) -> Arc<KGrid> {
    static CACHE: OnceLock<Mutex<HashMap<usize, Arc<KGrid>>>> = OnceLock::new();
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    let mut guard = cache.lock().expect("quadrature cache poisoned");
    guard.entry(n).or_insert_with(|| Arc::new(build(n))).clone()
}
