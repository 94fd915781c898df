//! Adaptive Gauss–Legendre quadrature.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const MAX_DEPTH: usize = 48;

/// Nodes and weights of the n-point Gauss–Legendre rule on `[−1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, x);
    if n == 0 {
        return (1.0, 0.0);
    }
    for m in 2..=n {
        let p2 = ((2 * m - 1) as f64 * x * p1 - (m - 1) as f64 * p0) / m as f64;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// A fixed Gauss–Legendre rule mapped onto arbitrary panels.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn panel(&self, f: &impl Fn(f64) -> f64, a: f64, b: f64) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(mid + half * x)).sum::<f64>() * half
    }

    /// Vector-valued panel integral.
    pub fn panel_vec(&self, f: &impl Fn(f64) -> Vec<f64>, a: f64, b: f64) -> Vec<f64> {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let mut acc: Vec<f64> = Vec::new();
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            let v = f(mid + half * x);
            if acc.is_empty() {
                acc = vec![0.0; v.len()];
            }
            for (a, b) in acc.iter_mut().zip(&v) {
                *a += w * half * b;
            }
        }
        acc
    }
}

/// Integration result with the number of panels accepted.
#[derive(Clone, Debug, PartialEq)]
pub struct Integral<T> {
    pub value: T,
    pub panels: usize,
}

/// Bisects panels until the whole-panel estimate and the sum of its halves
/// differ by less than `max(abs_tol, rel_tol·|half sum|)`.
pub fn adaptive(
    rule: &GaussLegendre,
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    abs_tol: f64,
    rel_tol: f64,
) -> Result<Integral<f64>> {
    let mut total = 0.0;
    let mut panels = 0;
    let mut stack = vec![(a, b, rule.panel(f, a, b), 0usize)];
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.panel(f, lo, mid);
        let right = rule.panel(f, mid, hi);
        let halves = left + right;
        if !halves.is_finite() {
            return Err(Error::QuadratureFailure(format!("non-finite integrand on [{lo}, {hi}]")));
        }
        if (halves - whole).abs() <= abs_tol.max(rel_tol * halves.abs()) {
            total += halves;
            panels += 2;
        } else if depth >= MAX_DEPTH {
            return Err(Error::QuadratureFailure(format!(
                "no convergence on [{lo}, {hi}] after {MAX_DEPTH} bisections"
            )));
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    Ok(Integral { value: total, panels })
}

/// Vector-valued counterpart of [`adaptive`]; the error test uses the largest
/// component difference against `abs_tol`.
pub fn adaptive_vec(
    rule: &GaussLegendre,
    f: &impl Fn(f64) -> Vec<f64>,
    a: f64,
    b: f64,
    abs_tol: f64,
) -> Result<Integral<Vec<f64>>> {
    let mut total: Vec<f64> = Vec::new();
    let mut panels = 0;
    let mut stack = vec![(a, b, rule.panel_vec(f, a, b), 0usize)];
    while let Some((lo, hi, whole, depth)) = stack.pop() {
        let mid = 0.5 * (lo + hi);
        let left = rule.panel_vec(f, lo, mid);
        let right = rule.panel_vec(f, mid, hi);
        let halves: Vec<f64> = left.iter().zip(&right).map(|(l, r)| l + r).collect();
        let err = halves.iter().zip(&whole).map(|(h, w)| (h - w).abs()).fold(0.0, f64::max);
        if !err.is_finite() {
            return Err(Error::QuadratureFailure(format!("non-finite integrand on [{lo}, {hi}]")));
        }
        if err <= abs_tol {
            if total.is_empty() {
                total = vec![0.0; halves.len()];
            }
            for (t, h) in total.iter_mut().zip(&halves) {
                *t += h;
            }
            panels += 2;
        } else if depth >= MAX_DEPTH {
            return Err(Error::QuadratureFailure(format!(
                "no convergence on [{lo}, {hi}] after {MAX_DEPTH} bisections"
            )));
        } else {
            stack.push((lo, mid, left, depth + 1));
            stack.push((mid, hi, right, depth + 1));
        }
    }
    Ok(Integral { value: total, panels })
}

/// `∫_0^∞ f` over doubling panels `[0, L], [L, 2L], [2L, 4L], …`.
///
/// A coarse pass fixes the last panel (the first after two rounds that adds
/// less than `1e-17` of the accumulated magnitude) and an absolute floor
/// `rel_tol·∫|f|/10`; power-law cusps at the origin otherwise never satisfy a
/// purely relative test.
pub fn adaptive_half_line(
    rule: &GaussLegendre,
    f: &impl Fn(f64) -> f64,
    first_width: f64,
    rel_tol: f64,
) -> Result<Integral<f64>> {
    let mut edges = vec![0.0, first_width];
    let mut magnitude = 0.0;
    loop {
        let (lo, hi) = (edges[edges.len() - 2], edges[edges.len() - 1]);
        let part: f64 = (0..8)
            .map(|i| {
                let a = lo + (hi - lo) * i as f64 / 8.0;
                let b = lo + (hi - lo) * (i + 1) as f64 / 8.0;
                rule.panel(&|x| f(x).abs(), a, b)
            })
            .sum();
        if !part.is_finite() {
            return Err(Error::QuadratureFailure(format!("non-finite integrand on [{lo}, {hi}]")));
        }
        magnitude += part;
        if edges.len() >= 4 && part <= 1e-17 * magnitude {
            break;
        }
        if edges.len() > 64 {
            return Err(Error::QuadratureFailure("half-line integral did not settle".into()));
        }
        edges.push(2.0 * hi);
    }
    let abs_tol = 0.1 * rel_tol * magnitude;
    let mut total = 0.0;
    let mut panels = 0;
    for w in edges.windows(2) {
        let part = adaptive(rule, f, w[0], w[1], abs_tol, rel_tol)?;
        total += part.value;
        panels += part.panels;
    }
    Ok(Integral { value: total, panels })
}
