//! Oscillator eigenfunctions by the normalized three-term recurrence
//! `φ_{n+1}(x) = √(2/(n+1))·x·φ_n(x) − √(n/(n+1))·φ_{n−1}(x)`,
//! and wavefunctions synthesized from Fock coefficients.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::fock::FockVector;

/// Evaluates a complex wavefunction at a point.
pub trait Wavefunction: Sync {
    fn eval(&self, x: f64) -> C64;
}

impl<F> Wavefunction for F
where
    F: Fn(f64) -> C64 + Sync,
{
    fn eval(&self, x: f64) -> C64 {
        self(x)
    }
}

/// `φ_0(x) … φ_{count−1}(x)`.
pub fn hermite_functions(count: usize, x: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(count);
    if count == 0 {
        return out;
    }
    out.push(PI.powf(-0.25) * (-0.5 * x * x).exp());
    if count > 1 {
        out.push(std::f64::consts::SQRT_2 * x * out[0]);
    }
    for n in 1..count.saturating_sub(1) {
        let next = (2.0 / (n + 1) as f64).sqrt() * x * out[n]
            - (n as f64 / (n + 1) as f64).sqrt() * out[n - 1];
        out.push(next);
    }
    out
}

/// Position- and momentum-space wavefunctions of a Fock-basis state.
#[derive(Clone, Debug)]
pub struct FockWavefunction {
    coeffs: Vec<C64>,
}

impl FockWavefunction {
    /// Trailing amplitudes below `1e-18` of the largest one are dropped.
    pub fn new(state: &FockVector) -> Self {
        let c = state.coeffs();
        let peak = c.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let keep = c.iter().rposition(|v| v.norm() > 1e-18 * peak).map_or(1, |i| i + 1);
        Self { coeffs: c[..keep].to_vec() }
    }

    /// `ψ(x) = Σ c_n φ_n(x)`.
    pub fn position(&self, x: f64) -> C64 {
        hermite_functions(self.coeffs.len(), x)
            .iter()
            .zip(&self.coeffs)
            .map(|(phi, c)| c * phi)
            .sum()
    }

    /// `φ(p) = Σ c_n (−i)^n φ_n(p)`.
    pub fn momentum(&self, p: f64) -> C64 {
        const PHASES: [C64; 4] = [
            C64::new(1.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(-1.0, 0.0),
            C64::new(0.0, 1.0),
        ];
        hermite_functions(self.coeffs.len(), p)
            .iter()
            .zip(&self.coeffs)
            .enumerate()
            .map(|(n, (phi, c))| c * PHASES[n % 4] * phi)
            .sum()
    }
}

impl Wavefunction for FockWavefunction {
    fn eval(&self, x: f64) -> C64 {
        self.position(x)
    }
}
