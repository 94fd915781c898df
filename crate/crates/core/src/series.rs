//! The ladder-restricted exponential series `S_{k,j}(x) = Σ_{m≥0} x^m / (km + j)!`.
//!
//! Terms are generated by the ratio recurrence
//! `t_{m+1} = t_m · x / ((km+j+1)…(km+j+k))`, so no factorial is ever formed.

/// Relative size below which a term no longer contributes.
const NEGLIGIBLE: f64 = 1e-16;
/// Consecutive negligible terms required before stopping.
const QUIET_RUN: usize = 3;
const MAX_TERMS: usize = 1_000_000;

/// Compensated (Neumaier) running sum.
#[derive(Default, Clone, Copy)]
struct Accumulator {
    sum: f64,
    carry: f64,
}

impl Accumulator {
    fn add(&mut self, v: f64) {
        let t = self.sum + v;
        if self.sum.abs() >= v.abs() {
            self.carry += (self.sum - t) + v;
        } else {
            self.carry += (v - t) + self.sum;
        }
        self.sum = t;
    }

    fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// `1/j!` as a product of reciprocals.
pub fn inv_factorial(j: usize) -> f64 {
    (2..=j).map(|m| 1.0 / m as f64).product()
}

/// Iterator over the terms `x^m/(km+j)!`, `m = 0, 1, …`.
pub fn ladder_terms(k: usize, j: usize, x: f64) -> impl Iterator<Item = f64> {
    let mut m = 0usize;
    let mut term = inv_factorial(j);
    std::iter::from_fn(move || {
        let current = term;
        let base = k * m + j;
        let denom: f64 = (1..=k).map(|i| (base + i) as f64).product();
        term = term * x / denom;
        m += 1;
        Some(current)
    })
}

/// Split sum of `S_{k,j}(x)`: the first `head_terms` terms and the remainder.
pub fn norm_sum_split(k: usize, j: usize, x: f64, head_terms: usize) -> (f64, f64) {
    assert!(k >= 1 && j < k, "need k >= 1 and j < k");
    assert!(x >= 0.0, "series argument must be non-negative");
    let mut head = Accumulator::default();
    let mut tail = Accumulator::default();
    let mut quiet = 0;
    for (m, t) in ladder_terms(k, j, x).enumerate().take(MAX_TERMS) {
        if m < head_terms {
            head.add(t);
        } else {
            tail.add(t);
        }
        let total = head.value() + tail.value();
        if t <= NEGLIGIBLE * total {
            quiet += 1;
            if quiet >= QUIET_RUN && m >= head_terms {
                break;
            }
        } else {
            quiet = 0;
        }
    }
    (head.value(), tail.value())
}

/// `S_{k,j}(x) = Σ_{m≥0} x^m/(km + j)!`, equal to `1/j!` at `x = 0`.
pub fn norm_sum(k: usize, j: usize, x: f64) -> f64 {
    let (head, tail) = norm_sum_split(k, j, x, 0);
    head + tail
}
