//! Multiphoton coherent states `|α⟩_j`: eigenstates of `(a⁻)^k` supported on
//! the ladder `|kn + j⟩`.
//!
//! Every physical quantity is available through two routes: the series /
//! closed-form expressions in `|α|`, and matrix elements evaluated on the
//! truncated [`FockVector`]. [`moments`] and [`geometric_phase`] compute both
//! and fail with [`Error::Discrepancy`] when they disagree.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::fock::{
    apply_k_lowering, apply_lowering, mean_energy, momentum_apply, position_apply, FockVector,
    DEFAULT_LEAKAGE_TOL, DEFAULT_N_MAX,
};
use crate::series::{ladder_terms, norm_sum, norm_sum_split};

/// Agreement required between the series and Fock-vector routes.
pub const ROUTE_TOL: f64 = 1e-10;

/// `(k, j, α)` identifying `|α⟩_j` for the k-photon annihilator.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct McsLabel {
    k: usize,
    j: usize,
    alpha: C64,
}

impl McsLabel {
    pub fn new(k: usize, j: usize, alpha: C64) -> Result<Self> {
        if k == 0 || j >= k || !alpha.is_finite() {
            return Err(Error::InvalidLabel { k, j });
        }
        Ok(Self { k, j, alpha })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn j(&self) -> usize {
        self.j
    }

    pub fn alpha(&self) -> C64 {
        self.alpha
    }

    /// `|α|²`, the argument of the normalization series.
    pub fn x(&self) -> f64 {
        self.alpha.norm_sqr()
    }

    pub fn with_alpha(&self, alpha: C64) -> Self {
        Self { alpha, ..*self }
    }
}

/// Builds the normalized `|α⟩_j` on `n_max` levels with the default tail tolerance.
pub fn build_mcs(label: &McsLabel, n_max: usize) -> Result<FockVector> {
    build_mcs_with(label, n_max, DEFAULT_LEAKAGE_TOL)
}

/// `c_{kn+j} = α^n / √((kn+j)!) / √S_{k,j}(|α|²)`, zero off the ladder.
///
/// Fails with [`Error::TailTooHeavy`] when the probability beyond `n_max`
/// exceeds `tail_tol`.
pub fn build_mcs_with(label: &McsLabel, n_max: usize, tail_tol: f64) -> Result<FockVector> {
    let McsLabel { k, j, alpha } = *label;
    if n_max == 0 {
        return Err(Error::EmptyDimension);
    }
    if j >= n_max {
        return Err(Error::Overflow { index: j, n_max });
    }
    let x = alpha.norm_sqr();
    let in_range = (n_max - j).div_ceil(k);
    let (head, tail) = norm_sum_split(k, j, x, in_range);
    let total = head + tail;
    let tail_mass = tail / total;
    if tail_mass > tail_tol {
        return Err(Error::TailTooHeavy { tail: tail_mass, n_max, tol: tail_tol });
    }

    let scale = 1.0 / total.sqrt();
    let mut coeffs = vec![C64::new(0.0, 0.0); n_max];
    // amplitude α^n/√((kn+j)!), advanced by α/√((kn+j+1)…(kn+j+k))
    let mut amp = C64::new((2..=j).map(|m| 1.0 / (m as f64).sqrt()).product::<f64>(), 0.0);
    for n in 0..in_range {
        let idx = k * n + j;
        coeffs[idx] = amp * scale;
        let step: f64 = (1..=k).map(|i| 1.0 / ((idx + i) as f64).sqrt()).product();
        amp = amp * alpha * step;
    }
    FockVector::new(coeffs)
}

/// `‖(a⁻)^k ψ − αψ‖`.
pub fn eigenvalue_residual(label: &McsLabel, state: &FockVector) -> f64 {
    let lowered = apply_k_lowering(state, label.k);
    (&lowered - &state.scale(label.alpha)).norm()
}

/// `|a|α⟩_j|²` from the normalization series:
/// `S_{k,j−1}(x)/S_{k,j}(x)` for `j ≥ 1`, `x·S_{k,k−1}(x)/S_{k,0}(x)` for `j = 0`.
pub fn a_norm_series(label: &McsLabel) -> f64 {
    let McsLabel { k, j, .. } = *label;
    let x = label.x();
    if j >= 1 {
        norm_sum(k, j - 1, x) / norm_sum(k, j, x)
    } else {
        x * norm_sum(k, k - 1, x) / norm_sum(k, 0, x)
    }
}

/// `|a|α⟩_j|²` exactly as written in the two-index sum
/// `Σ_n |α|^{2n+2δ_{0j}} / (kn + kδ_{0j} + j − 1)!` over `S_{k,j}`.
pub fn a_norm_shifted_sum(label: &McsLabel) -> f64 {
    let McsLabel { k, j, .. } = *label;
    let x = label.x();
    let delta = usize::from(j == 0);
    // terms x^n/(kn + kδ + j − 1)!; the offset kδ + j − 1 lies in 0..k
    let offset = k * delta + j - 1;
    let num = ladder_terms(k, offset, x).take(4096).sum::<f64>() * x.powi(delta as i32);
    num / norm_sum(k, j, x)
}

/// Closed forms of `|a|α⟩_j|²` for the even/odd (k = 2) and the k = 3 families.
///
/// At `α = 0` the removable singularities are replaced by their limit `j`.
pub fn a_norm_closed(label: &McsLabel) -> Result<f64> {
    let r = label.alpha.norm();
    let j = label.j as f64;
    match label.k {
        2 => {
            if r == 0.0 {
                return Ok(j);
            }
            Ok(if label.j == 0 { r * r.tanh() } else { r / r.tanh() })
        }
        3 => {
            if r == 0.0 {
                return Ok(j);
            }
            let s = r.powf(2.0 / 3.0);
            let e = (1.5 * s).exp();
            let th = 3f64.sqrt() * s / 2.0;
            let even = e + 2.0 * th.cos();
            let minus = e - 2.0 * (PI / 6.0 - th).sin();
            let plus = e - 2.0 * (PI / 6.0 + th).sin();
            Ok(match label.j {
                0 => s * plus / even,
                1 => s * even / minus,
                _ => s * minus / plus,
            })
        }
        k => Err(Error::UnsupportedOrder { k }),
    }
}

/// Quadrature statistics, uncertainty product and mean energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MomentSet {
    pub mean_x: f64,
    pub mean_p: f64,
    pub mean_x2: f64,
    pub mean_p2: f64,
    pub var_x: f64,
    pub var_p: f64,
    /// `Δx·Δp`.
    pub uncertainty_product: f64,
    /// `|a|ψ⟩|² = ⟨N⟩`.
    pub a_norm_sq: f64,
    pub mean_h: f64,
}

impl MomentSet {
    fn from_ladder_means(mean_a: C64, mean_a2: C64, mean_n: f64) -> Self {
        let sqrt2 = std::f64::consts::SQRT_2;
        let mean_x = sqrt2 * mean_a.re;
        let mean_p = sqrt2 * mean_a.im;
        let mean_x2 = mean_a2.re + mean_n + 0.5;
        let mean_p2 = -mean_a2.re + mean_n + 0.5;
        let var_x = mean_a2.re - 2.0 * mean_a.re * mean_a.re + mean_n + 0.5;
        let var_p = -mean_a2.re - 2.0 * mean_a.im * mean_a.im + mean_n + 0.5;
        Self {
            mean_x,
            mean_p,
            mean_x2,
            mean_p2,
            var_x,
            var_p,
            uncertainty_product: (var_x * var_p).sqrt(),
            a_norm_sq: mean_n,
            mean_h: mean_n + 0.5,
        }
    }

    fn fields(&self) -> [(&'static str, f64); 9] {
        [
            ("<x>", self.mean_x),
            ("<p>", self.mean_p),
            ("<x^2>", self.mean_x2),
            ("<p^2>", self.mean_p2),
            ("var x", self.var_x),
            ("var p", self.var_p),
            ("uncertainty product", self.uncertainty_product),
            ("|a psi|^2", self.a_norm_sq),
            ("<H>", self.mean_h),
        ]
    }

    /// Largest field-wise difference, scaled by `max(1, |value|)`.
    pub fn max_deviation(&self, other: &Self) -> f64 {
        self.fields()
            .iter()
            .zip(other.fields().iter())
            .map(|((_, a), (_, b))| (a - b).abs() / a.abs().max(1.0))
            .fold(0.0, f64::max)
    }
}

/// Moments from the series route: `⟨a⟩ = α δ_{k1}`, `⟨a²⟩ = α² δ_{k1} + α δ_{k2}`,
/// `⟨N⟩ = |a|α⟩_j|²`.
pub fn moments_series(label: &McsLabel) -> MomentSet {
    let zero = C64::new(0.0, 0.0);
    let alpha = label.alpha;
    let (mean_a, mean_a2) = match label.k {
        1 => (alpha, alpha * alpha),
        2 => (zero, alpha),
        _ => (zero, zero),
    };
    let mean_n = if label.k == 1 { label.x() } else { a_norm_series(label) };
    MomentSet::from_ladder_means(mean_a, mean_a2, mean_n)
}

/// Moments with `⟨N⟩` from the closed forms (k = 1, 2, 3).
pub fn moments_closed(label: &McsLabel) -> Result<MomentSet> {
    let zero = C64::new(0.0, 0.0);
    let alpha = label.alpha;
    let (mean_a, mean_a2, mean_n) = match label.k {
        1 => (alpha, alpha * alpha, label.x()),
        2 => (zero, alpha, a_norm_closed(label)?),
        _ => (zero, zero, a_norm_closed(label)?),
    };
    Ok(MomentSet::from_ladder_means(mean_a, mean_a2, mean_n))
}

/// Moments from tridiagonal `x`, `p` matrix elements on a normalized state.
pub fn moments_fock(state: &FockVector) -> MomentSet {
    let xs = position_apply(state);
    let ps = momentum_apply(state);
    let mean_x = state.inner(&xs).re;
    let mean_p = state.inner(&ps).re;
    let mean_x2 = xs.norm_sqr();
    let mean_p2 = ps.norm_sqr();
    let var_x = mean_x2 - mean_x * mean_x;
    let var_p = mean_p2 - mean_p * mean_p;
    let a_norm_sq = apply_lowering(state).norm_sqr();
    MomentSet {
        mean_x,
        mean_p,
        mean_x2,
        mean_p2,
        var_x,
        var_p,
        uncertainty_product: (var_x * var_p).sqrt(),
        a_norm_sq,
        mean_h: mean_energy(state),
    }
}

/// Moments of `|α⟩_j` on the default truncation, cross-checked between the
/// series and Fock-vector routes. Returns the series values.
pub fn moments(label: &McsLabel) -> Result<MomentSet> {
    moments_with(label, DEFAULT_N_MAX)
}

pub fn moments_with(label: &McsLabel, n_max: usize) -> Result<MomentSet> {
    let series = moments_series(label);
    let fock = moments_fock(&build_mcs(label, n_max)?);
    for ((what, a), (_, b)) in series.fields().iter().zip(fock.fields().iter()) {
        if (a - b).abs() > ROUTE_TOL * a.abs().max(1.0) {
            return Err(Error::Discrepancy { what, first: *a, second: *b });
        }
    }
    Ok(series)
}

/// Total phase `φ = −(2j+1)π/k` picked up over one period `τ = 2π/k`.
pub fn cyclic_phase(k: usize, j: usize) -> f64 {
    -((2 * j + 1) as f64) * PI / k as f64
}

/// Period of the cyclic evolution, `2π/k`.
pub fn cyclic_period(k: usize) -> f64 {
    2.0 * PI / k as f64
}

/// Route agreement required for the geometric phase.
pub const PHASE_TOL: f64 = 1e-12;

/// Geometric phase `β_j = (2π/k)(|a|α⟩_j|² − j)`.
///
/// Cross-checked against `φ + τ⟨H⟩` with `⟨H⟩` measured on the Fock vector.
pub fn geometric_phase(label: &McsLabel) -> Result<f64> {
    let k = label.k;
    let beta = cyclic_period(k) * (a_norm_series(label) - label.j as f64);
    let state = build_mcs(label, DEFAULT_N_MAX)?;
    let via_energy = cyclic_phase(k, label.j) + cyclic_period(k) * mean_energy(&state);
    if (beta - via_energy).abs() > PHASE_TOL {
        return Err(Error::Discrepancy { what: "geometric phase", first: beta, second: via_energy });
    }
    Ok(beta)
}

/// Geometric phase from the closed forms of `|a|α⟩_j|²` (k = 2, 3).
pub fn geometric_phase_closed(label: &McsLabel) -> Result<f64> {
    Ok(cyclic_period(label.k) * (a_norm_closed(label)? - label.j as f64))
}
