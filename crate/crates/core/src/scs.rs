//! Multiphoton coherent states as superpositions of standard coherent states
//! placed on a regular polygon `z, μz, …, μ^{k−1}z` with `μ = e^{2πi/k}`.
//!
//! The unnormalized ladder components `|z⟩_j` and the rotated SCS `|μ^l z⟩`
//! are related by the cyclic-group (discrete Fourier) matrix
//! `|μ^l z⟩ = Σ_j μ^{lj} |z⟩_j`, inverted by `|z⟩_j = (1/k) Σ_l μ^{−jl} |μ^l z⟩`.

use std::f64::consts::{PI, SQRT_2};

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fock::FockVector;
use crate::hermite::Wavefunction;
use crate::series::norm_sum;

/// Superposition norms below this are rejected.
pub const DEGENERATE_NORM: f64 = 1e-300;

/// `μ^p` with the exponent reduced mod k before taking the exponential.
pub fn root_of_unity(k: usize, p: i64) -> C64 {
    let r = p.rem_euclid(k as i64) as f64;
    C64::from_polar(1.0, 2.0 * PI * r / k as f64)
}

/// The cyclic-group matrix `M_{j,l} = μ^{jl}` and its inverse `(1/k) μ^{−jl}`.
#[derive(Clone, Debug, PartialEq)]
pub struct DftPair {
    pub forward: Array2<C64>,
    pub inverse: Array2<C64>,
}

pub fn dft_matrix(k: usize) -> DftPair {
    assert!(k >= 1, "k must be positive");
    let forward = Array2::from_shape_fn((k, k), |(j, l)| root_of_unity(k, (j * l) as i64));
    let inv_k = 1.0 / k as f64;
    let inverse =
        Array2::from_shape_fn((k, k), |(j, l)| root_of_unity(k, -((j * l) as i64)) * inv_k);
    DftPair { forward, inverse }
}

/// Unnormalized SCS `|z⟩ = Σ z^n/√(n!) |n⟩`.
pub fn unnormalized_scs(z: C64, n_max: usize) -> Result<FockVector> {
    let mut coeffs = Vec::with_capacity(n_max);
    let mut amp = C64::new(1.0, 0.0);
    for n in 0..n_max {
        coeffs.push(amp);
        amp = amp * z / ((n + 1) as f64).sqrt();
    }
    FockVector::new(coeffs)
}

/// Unnormalized ladder component `|z⟩_j = Σ_n z^{kn+j}/√((kn+j)!) |kn+j⟩`,
/// stepped k levels at a time.
pub fn unnormalized_component(k: usize, j: usize, z: C64, n_max: usize) -> Result<FockVector> {
    if k == 0 || j >= k {
        return Err(Error::InvalidLabel { k, j });
    }
    let mut coeffs = vec![C64::new(0.0, 0.0); n_max];
    if j >= n_max {
        return FockVector::new(coeffs);
    }
    let mut amp = (1..=j).fold(C64::new(1.0, 0.0), |a, m| a * z / (m as f64).sqrt());
    let zk = z.powu(k as u32);
    let mut idx = j;
    while idx < n_max {
        coeffs[idx] = amp;
        let step: f64 = (1..=k).map(|i| ((idx + i) as f64).sqrt()).product();
        amp = amp * zk / step;
        idx += k;
    }
    FockVector::new(coeffs)
}

/// Normalized SCS `e^{−|z|²/2}|z⟩`.
pub fn scs_state(z: C64, n_max: usize) -> Result<FockVector> {
    Ok(unnormalized_scs(z, n_max)?.scale(C64::new((-0.5 * z.norm_sqr()).exp(), 0.0)))
}

/// `⟨b|a⟩` for normalized SCS.
pub fn scs_overlap(b: C64, a: C64) -> C64 {
    (b.conj() * a - 0.5 * (a.norm_sqr() + b.norm_sqr())).exp()
}

/// `Σ_m μ^{−jm} exp(|z|² μ^m)`, the cyclic sum behind the normalization
/// constants (equal to `k·s^j·S_{k,j}(s^k)` with `s = |z|²`).
pub fn cyclic_norm_sum(k: usize, j: usize, z: C64) -> C64 {
    let s = z.norm_sqr();
    (0..k).map(|m| root_of_unity(k, -((j * m) as i64)) * (root_of_unity(k, m as i64) * s).exp()).sum()
}

/// Weighted sum of normalized standard coherent states `Σ_l w_l |z_l⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScsSuperposition {
    pub k: usize,
    pub j: usize,
    /// Base eigenvalue at t = 0.
    pub z: C64,
    /// SCS eigenvalues `μ^l z e^{−it}`.
    pub branches: Vec<C64>,
    /// Coefficients of the normalized SCS branches.
    pub weights: Vec<C64>,
}

impl ScsSuperposition {
    /// `U(t)|z⟩ = e^{−it/2}|z e^{−it}⟩` applied branch by branch.
    pub fn evolved(&self, t: f64) -> Self {
        let rot = C64::from_polar(1.0, -t);
        let phase = C64::from_polar(1.0, -0.5 * t);
        Self {
            branches: self.branches.iter().map(|b| b * rot).collect(),
            weights: self.weights.iter().map(|w| w * phase).collect(),
            ..self.clone()
        }
    }

    /// Phase-space centers `(√2 Re z_l, √2 Im z_l)`.
    pub fn centers(&self) -> Vec<(f64, f64)> {
        self.branches.iter().map(|b| (SQRT_2 * b.re, SQRT_2 * b.im)).collect()
    }

    /// Synthesizes the superposition in the Fock basis.
    pub fn to_fock(&self, n_max: usize) -> Result<FockVector> {
        let mut acc = FockVector::zeros(n_max)?;
        for (b, w) in self.branches.iter().zip(&self.weights) {
            acc = &acc + &scs_state(*b, n_max)?.scale(*w);
        }
        Ok(acc)
    }

    /// `Σ_{l,l'} w̄_l w_{l'} ⟨z_l|z_{l'}⟩`.
    pub fn norm_sqr(&self) -> f64 {
        let mut s = C64::new(0.0, 0.0);
        for (bl, wl) in self.branches.iter().zip(&self.weights) {
            for (bm, wm) in self.branches.iter().zip(&self.weights) {
                s += wl.conj() * wm * scs_overlap(*bl, *bm);
            }
        }
        s.re
    }
}

impl Wavefunction for ScsSuperposition {
    fn eval(&self, x: f64) -> C64 {
        self.branches.iter().zip(&self.weights).map(|(b, w)| w * scs_wave(*b, x)).sum()
    }
}

/// `⟨x|z⟩ = π^{−1/4} exp(−(x−x₀)²/2 + i p₀ x − i x₀ p₀/2)` for the normalized SCS,
/// with `x₀ = √2 Re z`, `p₀ = √2 Im z`.
pub fn scs_wave(z: C64, x: f64) -> C64 {
    let x0 = SQRT_2 * z.re;
    let p0 = SQRT_2 * z.im;
    let d = x - x0;
    PI.powf(-0.25) * C64::new(-0.5 * d * d, p0 * x - 0.5 * x0 * p0).exp()
}

/// `|z⟩_j` (normalized, phase-aligned with the positive-coefficient MCS of
/// eigenvalue `z^k`) written on the k rotated SCS.
pub fn mcs_as_scs(k: usize, j: usize, z: C64) -> Result<ScsSuperposition> {
    if k == 0 || j >= k {
        return Err(Error::InvalidLabel { k, j });
    }
    let s = z.norm_sqr();
    // ‖Σ_l μ^{−jl}|μ^l z⟩‖² = k e^{−s} Σ_m μ^{−jm} e^{sμ^m} = k² e^{−s} s^j S_{k,j}(s^k)
    let norm_sq = (k * k) as f64 * (-s).exp() * s.powi(j as i32) * norm_sum(k, j, s.powi(k as i32));
    if !(norm_sq >= DEGENERATE_NORM) {
        return Err(Error::DegenerateNorm { norm_sq });
    }
    let align = if j == 0 || z.norm() == 0.0 {
        C64::new(1.0, 0.0)
    } else {
        C64::from_polar(1.0, -(j as f64) * z.arg())
    };
    let n = 1.0 / norm_sq.sqrt();
    let branches = (0..k).map(|l| root_of_unity(k, l as i64) * z).collect();
    let weights = (0..k).map(|l| root_of_unity(k, -((j * l) as i64)) * align * n).collect();
    Ok(ScsSuperposition { k, j, z, branches, weights })
}

/// Wavefunction-level normalization constant `N_j` multiplying
/// `Σ_l μ^{−jl} exp(−(x−x_l)²/2 + i p_l x − i x_l p_l/2)`:
/// `π^{−1/4} [k e^{−|z|²} Σ_m μ^{−jm} e^{|z|²μ^m}]^{−1/2}`.
pub fn normalization_constant(k: usize, j: usize, z: C64) -> Result<f64> {
    let sup = mcs_as_scs(k, j, z)?;
    Ok(PI.powf(-0.25) * sup.weights[0].norm())
}

/// Position samples of a wavefunction at time t.
#[derive(Clone, Debug, PartialEq)]
pub struct WaveSample {
    pub x_grid: Vec<f64>,
    pub values: Vec<C64>,
    pub t: f64,
}

impl WaveSample {
    pub fn density(&self) -> Vec<f64> {
        self.values.iter().map(|v| v.norm_sqr()).collect()
    }

    /// Trapezoid-rule `∫|ψ|² dx`.
    pub fn trapezoid_norm(&self) -> f64 {
        trapezoid(&self.x_grid, &self.density())
    }
}

/// Trapezoid rule on an arbitrary ordered grid.
pub fn trapezoid(x: &[f64], y: &[f64]) -> f64 {
    x.windows(2).zip(y.windows(2)).map(|(xs, ys)| 0.5 * (xs[1] - xs[0]) * (ys[0] + ys[1])).sum()
}

/// `n` evenly spaced points from `a` to `b` inclusive.
pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => vec![],
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

/// Position grid `[−12, 12]` with 2048 points.
pub fn default_x_grid() -> Vec<f64> {
    linspace(-12.0, 12.0, 2048)
}

pub fn sample(psi: &impl Wavefunction, x_grid: &[f64], t: f64) -> WaveSample {
    WaveSample { x_grid: x_grid.to_vec(), values: x_grid.iter().map(|&x| psi.eval(x)).collect(), t }
}

/// Wavefunction of the normalized SCS `|z⟩`.
pub fn scs_wavefunction(z: C64, x_grid: &[f64]) -> WaveSample {
    sample(&|x| scs_wave(z, x), x_grid, 0.0)
}

/// `ψ_z^j(x, t) = ⟨x|U(t)|z⟩_j` from the rotated-Gaussian superposition.
pub fn mcs_wavefunction(k: usize, j: usize, z: C64, x_grid: &[f64], t: f64) -> Result<WaveSample> {
    let sup = mcs_as_scs(k, j, z)?.evolved(t);
    Ok(sample(&sup, x_grid, t))
}

/// `|ψ_z^j(x, t)|²`, one row per time sample.
pub fn density_movie(
    k: usize,
    j: usize,
    z: C64,
    x_grid: &[f64],
    t_grid: &[f64],
) -> Result<Vec<Vec<f64>>> {
    let sup = mcs_as_scs(k, j, z)?;
    Ok(t_grid
        .par_iter()
        .map(|&t| sample(&sup.evolved(t), x_grid, t).density())
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mcs::{build_mcs, McsLabel};

    fn max_entry(m: &Array2<C64>) -> f64 {
        m.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn dft_examples() {
        let d = dft_matrix(1);
        assert_eq!(d.forward[[0, 0]], C64::new(1.0, 0.0));
        let d = dft_matrix(2);
        let expected = [[1.0, 1.0], [1.0, -1.0]];
        for j in 0..2 {
            for l in 0..2 {
                assert!((d.forward[[j, l]] - C64::new(expected[j][l], 0.0)).norm() < 1e-15);
                assert!((d.inverse[[j, l]] - C64::new(0.5 * expected[j][l], 0.0)).norm() < 1e-15);
            }
        }
        let d = dft_matrix(3);
        let mu = C64::from_polar(1.0, 2.0 * PI / 3.0);
        assert!((d.forward[[1, 1]] - mu).norm() < 1e-15);
        assert!((d.forward[[1, 2]] - mu * mu).norm() < 1e-15);
        // the bottom-right entry μ⁴ = e^{i8π/3} ≡ e^{i2π/3}
        assert!((d.forward[[2, 2]] - C64::from_polar(1.0, 8.0 * PI / 3.0)).norm() < 1e-14);
    }

    #[test]
    fn dft_inverse() {
        for k in 1..=8 {
            let d = dft_matrix(k);
            let prod = d.forward.dot(&d.inverse) - Array2::<C64>::eye(k);
            assert!(max_entry(&prod) <= 1e-13, "k={k}");
        }
    }

    #[test]
    fn components_reconstruct_scs() {
        let z = C64::new(1.2, -0.7);
        for k in 1..=5 {
            let full = unnormalized_scs(z, 96).unwrap();
            let mut acc = FockVector::zeros(96).unwrap();
            for j in 0..k {
                acc = &acc + &unnormalized_component(k, j, z, 96).unwrap();
            }
            for (a, b) in acc.coeffs().iter().zip(full.coeffs()) {
                assert!((a - b).norm() <= 1e-12);
            }
        }
    }

    #[test]
    fn forward_and_inverse_round_trip_on_states() {
        let z = C64::new(0.9, 0.4);
        let k = 3;
        let n_max = 64;
        let d = dft_matrix(k);
        let comps: Vec<FockVector> =
            (0..k).map(|j| unnormalized_component(k, j, z, n_max).unwrap()).collect();
        let combine = |m: &Array2<C64>, vs: &[FockVector]| -> Vec<FockVector> {
            (0..k)
                .map(|r| {
                    (0..k).fold(FockVector::zeros(n_max).unwrap(), |acc, c| &acc + &vs[c].scale(m[[r, c]]))
                })
                .collect()
        };
        let rotated = combine(&d.forward, &comps);
        for (l, v) in rotated.iter().enumerate() {
            let direct = unnormalized_scs(root_of_unity(k, l as i64) * z, n_max).unwrap();
            assert!(v.distance(&direct) <= 1e-12);
        }
        let back = combine(&d.inverse, &rotated);
        for (a, b) in back.iter().zip(&comps) {
            assert!(a.distance(b) <= 1e-12);
        }
    }

    #[test]
    fn even_cat_prefactor() {
        let z = C64::new(1.3, 0.0);
        let sup = mcs_as_scs(2, 0, z).unwrap();
        let s = z.norm_sqr();
        let expected = 1.0 / (2.0 * (1.0 + (-2.0 * s).exp())).sqrt();
        for w in &sup.weights {
            assert!((w - C64::new(expected, 0.0)).norm() < 1e-15);
        }
        let odd = mcs_as_scs(2, 1, z).unwrap();
        let expected = 1.0 / (2.0 * (1.0 - (-2.0 * s).exp())).sqrt();
        assert!((odd.weights[0] - C64::new(expected, 0.0)).norm() < 1e-15);
        assert!((odd.weights[1] + C64::new(expected, 0.0)).norm() < 1e-15);
        // N_j of the wavefunction form
        let n0 = normalization_constant(2, 0, z).unwrap();
        let x0 = SQRT_2 * z.re;
        let printed = PI.powf(-0.25) / (2.0 * (1.0 + (-x0 * x0).exp())).sqrt();
        assert!((n0 - printed).abs() < 1e-15);
    }

    #[test]
    fn k3_norm_against_fock_synthesis() {
        let z = C64::new(1.0, 0.0);
        for j in 0..3 {
            let sup = mcs_as_scs(3, j, z).unwrap();
            let fock = sup.to_fock(96).unwrap();
            assert!((fock.norm() - 1.0).abs() < 1e-13, "j={j}");
            assert!((sup.norm_sqr() - 1.0).abs() < 1e-13);
        }
        // trig brackets: e^{s} + 2e^{−s/2}cos(√3 s/2), e^{s} − 2e^{−s/2}sin(π/6 ∓ √3 s/2)
        let s = 1.0f64;
        let th = 3f64.sqrt() * s / 2.0;
        let trig = [
            s.exp() + 2.0 * (-s / 2.0).exp() * th.cos(),
            s.exp() - 2.0 * (-s / 2.0).exp() * (PI / 6.0 - th).sin(),
            s.exp() - 2.0 * (-s / 2.0).exp() * (PI / 6.0 + th).sin(),
        ];
        for j in 0..3 {
            let c = cyclic_norm_sum(3, j, z);
            assert!((c.re - trig[j]).abs() < 1e-14 && c.im.abs() < 1e-14, "j={j}");
            let n = normalization_constant(3, j, z).unwrap();
            let expected = PI.powf(-0.25) / (3.0 * (-s).exp() * trig[j]).sqrt();
            assert!((n - expected).abs() < 1e-14, "j={j}");
        }
    }

    #[test]
    fn single_branch_is_the_scs() {
        let z = C64::new(0.6, -1.1);
        let sup = mcs_as_scs(1, 0, z).unwrap();
        assert_eq!(sup.branches, vec![z]);
        assert!((sup.weights[0] - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn degenerate_norm() {
        assert!(matches!(mcs_as_scs(2, 1, C64::new(0.0, 0.0)), Err(Error::DegenerateNorm { .. })));
        assert!(mcs_as_scs(2, 0, C64::new(0.0, 0.0)).is_ok());
    }

    #[test]
    fn matches_build_mcs_with_alpha_z_to_the_k() {
        for k in 1..=4 {
            for j in 0..k {
                for z in [C64::new(1.0, 0.0), C64::new(0.8, 0.9), C64::new(-1.2, 0.3)] {
                    let sup = mcs_as_scs(k, j, z).unwrap().to_fock(128).unwrap();
                    let label = McsLabel::new(k, j, z.powu(k as u32)).unwrap();
                    let direct = build_mcs(&label, 128).unwrap();
                    assert!((direct.inner(&sup).norm() - 1.0).abs() < 1e-10);
                    assert!(direct.distance(&sup) < 1e-12, "k={k} j={j} z={z}");
                }
            }
        }
    }

    #[test]
    fn scs_wavefunction_examples() {
        let grid = default_x_grid();
        let g = scs_wavefunction(C64::new(0.0, 0.0), &grid);
        for (x, v) in grid.iter().zip(&g.values) {
            assert!((v.re - PI.powf(-0.25) * (-0.5 * x * x).exp()).abs() < 1e-15);
        }
        let w = scs_wavefunction(C64::new(1.0, 0.0), &grid);
        let d = w.density();
        let peak = d.iter().enumerate().max_by(|a, b| a.1.total_cmp(b.1)).unwrap().0;
        assert!((grid[peak] - SQRT_2).abs() < grid[1] - grid[0]);
        for z in [C64::new(1.0, 0.0), C64::new(2.0, -1.0), C64::new(-3.0, 2.5)] {
            assert!((scs_wavefunction(z, &grid).trapezoid_norm() - 1.0).abs() < 1e-8);
        }
    }

    #[test]
    fn odd_wavefunction_vanishes_at_origin() {
        let z = C64::new(1.4, 0.3);
        for t in [0.0, 0.4, 1.9] {
            let w = mcs_wavefunction(2, 1, z, &[0.0], t).unwrap();
            assert!(w.values[0].norm() < 1e-15);
        }
    }

    #[test]
    fn density_movie_period() {
        let grid = default_x_grid();
        let z = C64::new(1.5, 0.5);
        let ts = linspace(0.0, PI, 9);
        let rows = density_movie(2, 0, z, &grid, &ts).unwrap();
        let diff = rows[0].iter().zip(&rows[8]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        assert!(diff <= 1e-10);
        for row in &rows {
            assert!((trapezoid(&grid, row) - 1.0).abs() < 1e-6);
        }
        // stationary for z = 0
        let rows = density_movie(3, 0, C64::new(0.0, 0.0), &grid, &ts).unwrap();
        for row in &rows[1..] {
            let d = row.iter().zip(&rows[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            assert!(d < 1e-15);
        }
    }
}
