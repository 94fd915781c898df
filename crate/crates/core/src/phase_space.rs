//! Wigner functions on rectangular phase-space grids.
//!
//! Three routes are provided: the direct integral
//! `W(q,p) = (1/π)∫ψ*(q+y)ψ(q−y)e^{2ipy}dy`, explicit Gaussian-plus-interference
//! expressions for one, two and three coherent-state branches, and the
//! displaced-parity evaluation `W = (1/π)⟨ψ|D(γ)ΠD(γ)†|ψ⟩` for any finite
//! superposition of coherent states.

use std::f64::consts::{PI, SQRT_2};

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hermite::{FockWavefunction, Wavefunction};
use crate::scs::{linspace, mcs_as_scs, root_of_unity, scs_overlap, ScsSuperposition};

/// Largest boundary `|W|` accepted by [`marginals`].
pub const BOUNDARY_TOL: f64 = 1e-10;
/// Largest `|ψ*(q+Y)ψ(q−Y)|` accepted at the edge of the y-window.
pub const ENVELOPE_TOL: f64 = 1e-16;
/// Integrand magnitudes below this are skipped in the y-sum.
const NEGLIGIBLE: f64 = 1e-22;

/// Uniform rectangular sampling of `(q, p)`.
#[derive(Clone, Debug, PartialEq)]
pub struct PhaseGrid {
    pub q_min: f64,
    pub q_max: f64,
    pub p_min: f64,
    pub p_max: f64,
    pub n_q: usize,
    pub n_p: usize,
}

impl Default for PhaseGrid {
    /// `[−8, 8]²` with 257 points per axis, so the origin is a sample.
    fn default() -> Self {
        Self { q_min: -8.0, q_max: 8.0, p_min: -8.0, p_max: 8.0, n_q: 257, n_p: 257 }
    }
}

impl PhaseGrid {
    pub fn new(q_min: f64, q_max: f64, p_min: f64, p_max: f64, n_q: usize, n_p: usize) -> Result<Self> {
        let bounds = [q_min, q_max, p_min, p_max];
        if bounds.iter().any(|b| !b.is_finite()) {
            return Err(Error::InvalidGrid("bounds must be finite".into()));
        }
        if q_min >= q_max || p_min >= p_max {
            return Err(Error::InvalidGrid("lower bounds must be below upper bounds".into()));
        }
        if n_q < 2 || n_p < 2 {
            return Err(Error::InvalidGrid("at least two samples per axis".into()));
        }
        Ok(Self { q_min, q_max, p_min, p_max, n_q, n_p })
    }

    pub fn q_values(&self) -> Vec<f64> {
        linspace(self.q_min, self.q_max, self.n_q)
    }

    pub fn p_values(&self) -> Vec<f64> {
        linspace(self.p_min, self.p_max, self.n_p)
    }

    pub fn dq(&self) -> f64 {
        (self.q_max - self.q_min) / (self.n_q - 1) as f64
    }

    pub fn dp(&self) -> f64 {
        (self.p_max - self.p_min) / (self.n_p - 1) as f64
    }

    /// Point-wise map over the grid, rows in parallel.
    pub fn map(&self, f: impl Fn(f64, f64) -> f64 + Sync) -> WignerField {
        let qs = self.q_values();
        let ps = self.p_values();
        let rows: Vec<f64> = qs
            .par_iter()
            .flat_map_iter(|&q| ps.iter().map(|&p| f(q, p)).collect::<Vec<_>>())
            .collect();
        WignerField {
            grid: self.clone(),
            values: Array2::from_shape_vec((self.n_q, self.n_p), rows).expect("grid shape"),
        }
    }
}

fn trapezoid_weights(n: usize, h: f64) -> Vec<f64> {
    let mut w = vec![h; n];
    w[0] = 0.5 * h;
    w[n - 1] = 0.5 * h;
    w
}

/// Real Wigner values, `values[[i, j]] = W(q_i, p_j)`.
#[derive(Clone, Debug, PartialEq)]
pub struct WignerField {
    pub grid: PhaseGrid,
    pub values: Array2<f64>,
}

impl WignerField {
    fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        let wq = trapezoid_weights(self.grid.n_q, self.grid.dq());
        let wp = trapezoid_weights(self.grid.n_p, self.grid.dp());
        self.values
            .outer_iter()
            .zip(&wq)
            .map(|(row, a)| a * row.iter().zip(&wp).map(|(v, b)| b * f(*v)).sum::<f64>())
            .sum()
    }

    /// Trapezoid `∬W dq dp`.
    pub fn total(&self) -> f64 {
        self.integrate(|w| w)
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.values.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `Tr ρ² = 2π∬W² dq dp`, equal to 1 for pure states.
    pub fn purity(&self) -> f64 {
        2.0 * PI * self.integrate(|w| w * w)
    }

    /// Largest pointwise `|W − W'|`; grids must coincide.
    pub fn sup_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.grid, other.grid, "fields on different grids");
        self.values.iter().zip(other.values.iter()).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }

    /// Largest `|W|` on the outer edge of the grid.
    pub fn boundary_max(&self) -> f64 {
        let (nq, np) = self.values.dim();
        let mut m = 0.0f64;
        for i in 0..nq {
            m = m.max(self.values[[i, 0]].abs()).max(self.values[[i, np - 1]].abs());
        }
        for j in 0..np {
            m = m.max(self.values[[0, j]].abs()).max(self.values[[nq - 1, j]].abs());
        }
        m
    }
}

/// y-window of the direct integral.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct YWindow {
    pub half_width: f64,
    pub points: usize,
}

impl Default for YWindow {
    fn default() -> Self {
        Self { half_width: 10.0, points: 4096 }
    }
}

/// Result of the direct integral with its imaginary-part diagnostic.
#[derive(Clone, Debug, PartialEq)]
pub struct NumericWigner {
    pub field: WignerField,
    /// Largest `|Im W|`; zero up to rounding for a correct wavefunction.
    pub imag_residue: f64,
}

/// Direct trapezoid evaluation of the Wigner integral on the default window.
pub fn wigner_numeric(psi: &impl Wavefunction, grid: &PhaseGrid) -> Result<NumericWigner> {
    wigner_numeric_with(psi, grid, YWindow::default())
}

pub fn wigner_numeric_with(psi: &impl Wavefunction, grid: &PhaseGrid, window: YWindow) -> Result<NumericWigner> {
    let qs = grid.q_values();
    let ps = grid.p_values();
    let ys = linspace(-window.half_width, window.half_width, window.points);
    let h = ys[1] - ys[0];
    let wy = trapezoid_weights(ys.len(), h);

    let envelope = qs
        .par_iter()
        .map(|&q| (psi.eval(q + window.half_width) * psi.eval(q - window.half_width)).norm())
        .reduce(|| 0.0, f64::max);
    if !(envelope <= ENVELOPE_TOL) {
        return Err(Error::WindowTooNarrow { envelope });
    }

    let phases: Vec<Vec<C64>> =
        ps.iter().map(|&p| ys.iter().map(|&y| C64::from_polar(1.0, 2.0 * p * y)).collect()).collect();

    let rows: Vec<(Vec<f64>, f64)> = qs
        .par_iter()
        .map(|&q| {
            let terms: Vec<(usize, C64)> = ys
                .iter()
                .zip(&wy)
                .enumerate()
                .map(|(m, (&y, &w))| (m, psi.eval(q + y).conj() * psi.eval(q - y) * w))
                .filter(|(_, f)| f.norm() > NEGLIGIBLE)
                .collect();
            let mut residue = 0.0f64;
            let row = phases
                .iter()
                .map(|table| {
                    let s: C64 = terms.iter().map(|(m, f)| f * table[*m]).sum();
                    residue = residue.max(s.im.abs() / PI);
                    s.re / PI
                })
                .collect();
            (row, residue)
        })
        .collect();

    let imag_residue = rows.iter().map(|r| r.1).fold(0.0, f64::max);
    let flat: Vec<f64> = rows.into_iter().flat_map(|r| r.0).collect();
    Ok(NumericWigner {
        field: WignerField {
            grid: grid.clone(),
            values: Array2::from_shape_vec((grid.n_q, grid.n_p), flat).expect("grid shape"),
        },
        imag_residue,
    })
}

fn center(z: C64) -> (f64, f64) {
    (SQRT_2 * z.re, SQRT_2 * z.im)
}

/// `(1/π)exp(−(q−⟨q⟩)²)exp(−(p−⟨p⟩)²)` at one point.
pub fn wigner_scs_at(z: C64, q: f64, p: f64) -> f64 {
    let (q0, p0) = center(z);
    (-(q - q0).powi(2) - (p - p0).powi(2)).exp() / PI
}

pub fn wigner_scs(z: C64, grid: &PhaseGrid) -> WignerField {
    grid.map(|q, p| wigner_scs_at(z, q, p))
}

/// Cross term `⟨z_m|z_l⟩ exp(−(q−A)² − (p+iB)²)` with
/// `A = (z_l + z̄_m)/√2`, `B = (z_l − z̄_m)/√2`; its double integral is
/// `π⟨z_m|z_l⟩`. Exponents are combined before exponentiation.
fn cross_term(zl: C64, zm: C64, q: f64, p: f64) -> C64 {
    let a = (zl + zm.conj()) / SQRT_2;
    let b = (zl - zm.conj()) / SQRT_2;
    let overlap_exp = -0.5 * zl.norm_sqr() - 0.5 * zm.norm_sqr() + zm.conj() * zl;
    let shape = -(C64::new(q, 0.0) - a).powi(2) - (C64::new(p, 0.0) + C64::i() * b).powi(2);
    (overlap_exp + shape).exp()
}

/// Even (`j = 0`) and odd (`j = 1`) cat state at one point:
/// `c/π [G₊ + G₋ ± 2e^{−q²−p²}cos(2(p⟨q⟩ − q⟨p⟩))]`, `c = 1/(2(1 ± e^{−2|z|²}))`.
/// The interference amplitude carries the overlap `⟨−z|z⟩ = e^{−2|z|²}`.
pub fn wigner_cat2_at(j: usize, z: C64, q: f64, p: f64) -> Result<f64> {
    let sign = match j {
        0 => 1.0,
        1 => -1.0,
        _ => return Err(Error::InvalidLabel { k: 2, j }),
    };
    let s = z.norm_sqr();
    let norm = if j == 0 { 2.0 + (-2.0 * s).exp_m1() } else { -(-2.0 * s).exp_m1() };
    let c = 1.0 / (2.0 * norm);
    let (q0, p0) = center(z);
    let g_plus = (-(q - q0).powi(2) - (p - p0).powi(2)).exp();
    let g_minus = (-(q + q0).powi(2) - (p + p0).powi(2)).exp();
    let interference = (-q * q - p * p).exp() * (2.0 * (p * q0 - q * p0)).cos();
    Ok(c * (g_plus + g_minus + 2.0 * sign * interference) / PI)
}

/// Cat-2 field. Normalization `c` is fixed by `∬W = 1`; `z → 0` with `j = 1`
/// tends to the first excited state.
pub fn wigner_cat2(j: usize, z: C64, grid: &PhaseGrid) -> Result<WignerField> {
    wigner_cat2_at(j, z, 0.0, 0.0)?;
    if j == 1 && z.norm_sqr() == 0.0 {
        return Err(Error::DegenerateNorm { norm_sq: 0.0 });
    }
    Ok(grid.map(|q, p| wigner_cat2_at(j, z, q, p).expect("label checked")))
}

/// Three-branch state at one point: three Gaussians at `μ^l z` plus
/// `2Re Σ μ^{−j(l−m)} K_{lm}` over the pairs `(1,0), (2,0), (1,2)`, scaled by
/// `1/(3 + 2Re Σ μ^{−j(l−m)} e^{|z|²(μ^{l−m}−1)})`.
pub fn wigner_cat3_at(j: usize, z: C64, q: f64, p: f64) -> Result<f64> {
    if j >= 3 {
        return Err(Error::InvalidLabel { k: 3, j });
    }
    let zs: Vec<C64> = (0..3).map(|l| root_of_unity(3, l) * z).collect();
    let s = z.norm_sqr();
    let mut norm = 3.0;
    let mut value = zs.iter().map(|&zl| PI * wigner_scs_at(zl, q, p)).sum::<f64>();
    for (l, m) in [(1i64, 0i64), (2, 0), (1, 2)] {
        let phase = root_of_unity(3, -(j as i64) * (l - m));
        norm += 2.0 * (phase * (s * (root_of_unity(3, l - m) - 1.0)).exp()).re;
        value += 2.0 * (phase * cross_term(zs[l as usize], zs[m as usize], q, p)).re;
    }
    if !(norm >= crate::scs::DEGENERATE_NORM) {
        return Err(Error::DegenerateNorm { norm_sq: norm });
    }
    Ok(value / (norm * PI))
}

pub fn wigner_cat3(j: usize, z: C64, grid: &PhaseGrid) -> Result<WignerField> {
    wigner_cat3_at(j, z, 0.0, 0.0)?;
    Ok(grid.map(|q, p| wigner_cat3_at(j, z, q, p).expect("label checked")))
}

/// Closed form for the k-branch superposition of `|z⟩_j`, dispatching on k.
pub fn wigner_closed(k: usize, j: usize, z: C64, grid: &PhaseGrid) -> Result<WignerField> {
    match (k, j) {
        (1, 0) => Ok(wigner_scs(z, grid)),
        (2, _) => wigner_cat2(j, z, grid),
        (3, _) => wigner_cat3(j, z, grid),
        (1, _) => Err(Error::InvalidLabel { k, j }),
        _ => Err(Error::UnsupportedOrder { k }),
    }
}

/// Displaced-parity value `(1/π)Σ_{l,m} w̄_m w_l e^{γ̄z_l − γz̄_l}⟨z_m|2γ − z_l⟩`
/// with `γ = (q + ip)/√2`, using `D(−γ)|z⟩ ∝ |z − γ⟩` and `Π|z⟩ = |−z⟩`.
pub fn wigner_superposition_at(sup: &ScsSuperposition, q: f64, p: f64) -> f64 {
    let gamma = C64::new(q, p) / SQRT_2;
    let mut acc = C64::new(0.0, 0.0);
    for (zl, wl) in sup.branches.iter().zip(&sup.weights) {
        let shift = (gamma.conj() * zl - gamma * zl.conj()).exp();
        let reflected = 2.0 * gamma - zl;
        for (zm, wm) in sup.branches.iter().zip(&sup.weights) {
            acc += wm.conj() * wl * shift * scs_overlap(*zm, reflected);
        }
    }
    acc.re / PI
}

pub fn wigner_superposition(sup: &ScsSuperposition, grid: &PhaseGrid) -> WignerField {
    grid.map(|q, p| wigner_superposition_at(sup, q, p))
}

/// Displaced-parity field of `U(t)|z⟩_j` for any order k.
pub fn wigner_mcs(k: usize, j: usize, z: C64, t: f64, grid: &PhaseGrid) -> Result<WignerField> {
    let sup = mcs_as_scs(k, j, z)?.evolved(t);
    Ok(wigner_superposition(&sup, grid))
}

/// Row and column trapezoid integrals of a field.
#[derive(Clone, Debug, PartialEq)]
pub struct Marginals {
    /// `∫W dp` at each `q_i`.
    pub position: Vec<f64>,
    /// `∫W dq` at each `p_j`.
    pub momentum: Vec<f64>,
}

impl Marginals {
    pub fn position_mass(&self, grid: &PhaseGrid) -> f64 {
        crate::scs::trapezoid(&grid.q_values(), &self.position)
    }

    pub fn momentum_mass(&self, grid: &PhaseGrid) -> f64 {
        crate::scs::trapezoid(&grid.p_values(), &self.momentum)
    }
}

pub fn marginals(field: &WignerField) -> Result<Marginals> {
    let value = field.boundary_max();
    if value > BOUNDARY_TOL {
        return Err(Error::BoundaryMass { value });
    }
    let wq = trapezoid_weights(field.grid.n_q, field.grid.dq());
    let wp = trapezoid_weights(field.grid.n_p, field.grid.dp());
    let position = field.values.outer_iter().map(|row| row.iter().zip(&wp).map(|(v, w)| v * w).sum()).collect();
    let momentum =
        field.values.columns().into_iter().map(|col| col.iter().zip(&wq).map(|(v, w)| v * w).sum()).collect();
    Ok(Marginals { position, momentum })
}

/// Marginals next to `|ψ(q)|²` and `|φ(p)|²` synthesized from Fock coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct MarginalCheck {
    pub marginals: Marginals,
    pub position_density: Vec<f64>,
    pub momentum_density: Vec<f64>,
}

impl MarginalCheck {
    pub fn new(field: &WignerField, psi: &FockWavefunction) -> Result<Self> {
        let marginals = marginals(field)?;
        let position_density = field.grid.q_values().iter().map(|&q| psi.position(q).norm_sqr()).collect();
        let momentum_density = field.grid.p_values().iter().map(|&p| psi.momentum(p).norm_sqr()).collect();
        Ok(Self { marginals, position_density, momentum_density })
    }

    pub fn position_deviation(&self) -> f64 {
        sup(&self.marginals.position, &self.position_density)
    }

    pub fn momentum_deviation(&self) -> f64 {
        sup(&self.marginals.momentum, &self.momentum_density)
    }

    pub fn deviation(&self) -> f64 {
        self.position_deviation().max(self.momentum_deviation())
    }
}

fn sup(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// Trapezoid `∬max(−W, 0) dq dp`.
pub fn negativity_volume(field: &WignerField) -> f64 {
    field.integrate(|w| (-w).max(0.0))
}

/// The cat-state expressions exactly as usually printed: unit prefactors on
/// every term, the two-branch interference written as
/// `2Re(e^{−(q+i⟨p⟩)²}e^{−(p−i⟨q⟩)²})` and the three-branch `(1,2)` cross term
/// carrying the phase `e^{−i2πj/3}`. Kept to quantify how far they sit from
/// the integral; the overall constant is fixed on the grid.
pub mod printed {
    use super::*;

    /// Unnormalized two-branch shape.
    pub fn cat2_shape(j: usize, z: C64, q: f64, p: f64) -> f64 {
        let (q0, p0) = center(z);
        let sign = if j == 0 { 1.0 } else { -1.0 };
        let g_plus = (-(q - q0).powi(2) - (p - p0).powi(2)).exp();
        let g_minus = (-(q + q0).powi(2) - (p + p0).powi(2)).exp();
        let cross = (-(C64::new(q, p0)).powi(2) - C64::new(p, -q0).powi(2)).exp();
        (g_plus + g_minus + 2.0 * sign * cross.re) / PI
    }

    /// Unnormalized three-branch shape.
    pub fn cat3_shape(j: usize, z: C64, q: f64, p: f64) -> f64 {
        let zs: Vec<C64> = (0..3).map(|l| root_of_unity(3, l) * z).collect();
        let mut value = zs.iter().map(|&zl| PI * wigner_scs_at(zl, q, p)).sum::<f64>();
        let phases = [
            root_of_unity(3, -(j as i64)),
            root_of_unity(3, -2 * j as i64),
            root_of_unity(3, -(j as i64)),
        ];
        for ((l, m), phase) in [(1usize, 0usize), (2, 0), (1, 2)].into_iter().zip(phases) {
            value += 2.0 * (phase * cross_term(zs[l], zs[m], q, p)).re;
        }
        value / PI
    }

    /// Printed shape rescaled so its grid integral is one. Fails with
    /// `DegenerateNorm` when the shape integrates to zero.
    pub fn field(k: usize, j: usize, z: C64, grid: &PhaseGrid) -> Result<WignerField> {
        let raw = match (k, j) {
            (2, 0 | 1) => grid.map(|q, p| cat2_shape(j, z, q, p)),
            (3, 0..=2) => grid.map(|q, p| cat3_shape(j, z, q, p)),
            (2 | 3, _) => return Err(Error::InvalidLabel { k, j }),
            _ => return Err(Error::UnsupportedOrder { k }),
        };
        let total = raw.total();
        let scale = raw.integrate(f64::abs);
        if !(total.abs() > 1e-8 * scale) {
            return Err(Error::DegenerateNorm { norm_sq: total });
        }
        Ok(WignerField { grid: raw.grid.clone(), values: raw.values.mapv(|v| v / total) })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fock::FockVector;
    use crate::mcs::{build_mcs, McsLabel};

    fn small_grid() -> PhaseGrid {
        PhaseGrid::new(-7.0, 7.0, -7.0, 7.0, 57, 61).unwrap()
    }

    fn fock_wave(k: usize, j: usize, z: C64) -> FockWavefunction {
        let label = McsLabel::new(k, j, z.powu(k as u32)).unwrap();
        FockWavefunction::new(&build_mcs(&label, 256).unwrap())
    }

    #[test]
    fn grid_validation() {
        assert!(PhaseGrid::new(0.0, 0.0, -1.0, 1.0, 3, 3).is_err());
        assert!(PhaseGrid::new(-1.0, 1.0, -1.0, 1.0, 1, 3).is_err());
        assert!(PhaseGrid::new(f64::NAN, 1.0, -1.0, 1.0, 3, 3).is_err());
        let g = PhaseGrid::default();
        assert_eq!(g.q_values()[128], 0.0);
        assert_eq!(g.dq(), 1.0 / 16.0);
    }

    #[test]
    fn ground_state_numeric() {
        let g = small_grid();
        let psi = FockWavefunction::new(&FockVector::basis(4, 0).unwrap());
        let w = wigner_numeric(&psi, &g).unwrap();
        assert!(w.field.sup_diff(&wigner_scs(C64::new(0.0, 0.0), &g)) < 1e-12);
        assert!((w.field.max() - 1.0 / PI).abs() < 1e-12);
        assert!(w.imag_residue < 1e-12);
    }

    #[test]
    fn first_excited_state_minimum() {
        let g = small_grid();
        let psi = FockWavefunction::new(&FockVector::basis(4, 1).unwrap());
        let w = wigner_numeric(&psi, &g).unwrap().field;
        let origin = w.values[[28, 30]];
        assert!((origin + 1.0 / PI).abs() < 1e-12);
        let cat = wigner_cat2(1, C64::new(1e-3, 0.0), &g).unwrap();
        assert!(cat.sup_diff(&w) < 1e-5);
    }

    #[test]
    fn scs_center_and_positivity() {
        let g = PhaseGrid::default();
        let z = C64::new(1.0, 1.0);
        let w = wigner_scs(z, &g);
        let (i, j) = w
            .values
            .indexed_iter()
            .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
            .map(|(ij, _)| ij)
            .unwrap();
        let (q, p) = (g.q_values()[i], g.p_values()[j]);
        assert!((q - SQRT_2).abs() < g.dq() && (p - SQRT_2).abs() < g.dp());
        assert!(w.min() >= 0.0);
        assert_eq!(negativity_volume(&w), 0.0);
        assert!((w.total() - 1.0).abs() < 1e-12);
        assert!((w.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn scs_numeric_route() {
        let g = small_grid();
        let z = C64::new(0.7, -1.1);
        let w = wigner_numeric(&|x| crate::scs::scs_wave(z, x), &g).unwrap();
        assert!(w.field.sup_diff(&wigner_scs(z, &g)) < 1e-12);
    }

    #[test]
    fn closed_routes_agree_with_displaced_parity() {
        let g = small_grid();
        for z in [C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(1.0, 1.0), C64::new(-0.4, 1.7)] {
            for k in 1..=3 {
                for j in 0..k {
                    let closed = wigner_closed(k, j, z, &g).unwrap();
                    let parity = wigner_mcs(k, j, z, 0.0, &g).unwrap();
                    assert!(closed.sup_diff(&parity) < 1e-13, "k={k} j={j} z={z}");
                }
            }
        }
    }

    #[test]
    fn cats_match_integral() {
        let g = small_grid();
        for z in [C64::new(2.0, 0.0), C64::new(1.0, 1.0)] {
            for k in 2..=3 {
                for j in 0..k {
                    let numeric = wigner_numeric(&fock_wave(k, j, z), &g).unwrap();
                    let closed = wigner_closed(k, j, z, &g).unwrap();
                    let d = numeric.field.sup_diff(&closed);
                    assert!(d < 1e-10, "k={k} j={j} z={z}: {d}");
                    assert!(numeric.imag_residue < 1e-10);
                }
            }
        }
    }

    #[test]
    fn cats_are_negative_somewhere() {
        let g = PhaseGrid::default();
        let z = C64::new(2.0, 0.0);
        for k in 2..=3 {
            for j in 0..k {
                let w = wigner_closed(k, j, z, &g).unwrap();
                assert!(w.min() < 0.0);
                assert!(negativity_volume(&w) > 1e-3);
                assert!((w.total() - 1.0).abs() < 1e-10);
                assert!(w.max() <= 1.0 / PI + 1e-6);
                assert!((w.purity() - 1.0).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn even_cat_negativity_shrinks_towards_vacuum() {
        let g = small_grid();
        let vols: Vec<f64> = [2.0, 1.0, 0.5, 0.1]
            .iter()
            .map(|&r| negativity_volume(&wigner_cat2(0, C64::new(r, 0.0), &g).unwrap()))
            .collect();
        assert!(vols.windows(2).all(|w| w[0] > w[1]));
        assert!(vols[3] < 1e-10);
    }

    #[test]
    fn cat3_centers_form_equilateral_triangle() {
        let z = C64::new(1.3, 0.4);
        let sup = mcs_as_scs(3, 1, z).unwrap();
        let c = sup.centers();
        let r = SQRT_2 * z.norm();
        for (q, p) in &c {
            assert!(((q * q + p * p).sqrt() - r).abs() < 1e-14);
        }
        let side = |a: (f64, f64), b: (f64, f64)| ((a.0 - b.0).powi(2) + (a.1 - b.1).powi(2)).sqrt();
        let s = side(c[0], c[1]);
        assert!((side(c[1], c[2]) - s).abs() < 1e-14 && (side(c[2], c[0]) - s).abs() < 1e-14);
        assert!((s - r * 3f64.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn marginals_match_densities() {
        let g = PhaseGrid::default();
        let z = C64::new(2.0, 0.0);
        let w = wigner_cat2(0, z, &g).unwrap();
        let check = MarginalCheck::new(&w, &fock_wave(2, 0, z)).unwrap();
        assert!(check.deviation() < 1e-10);
        assert!((check.marginals.position_mass(&g) - 1.0).abs() < 1e-10);
        assert!((check.marginals.momentum_mass(&g) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn narrow_grid_reports_boundary_mass() {
        let g = PhaseGrid::new(-1.0, 1.0, -1.0, 1.0, 11, 11).unwrap();
        let w = wigner_scs(C64::new(0.0, 0.0), &g);
        assert!(matches!(marginals(&w), Err(Error::BoundaryMass { .. })));
    }

    #[test]
    fn narrow_window_is_rejected() {
        let g = small_grid();
        let psi = |x: f64| crate::scs::scs_wave(C64::new(2.0, 0.0), x);
        let w = YWindow { half_width: 3.0, points: 512 };
        assert!(matches!(wigner_numeric_with(&psi, &g, w), Err(Error::WindowTooNarrow { .. })));
    }

    #[test]
    fn time_evolution_rotates_the_field() {
        let (k, j, z) = (3, 1, C64::new(1.5, 0.3));
        let sup = mcs_as_scs(k, j, z).unwrap();
        for t in [0.3, 1.1, 2.5] {
            let moved = sup.evolved(t);
            for (q, p) in [(0.2, -0.7), (1.9, 0.4), (-2.2, 1.3), (0.0, 0.0)] {
                let (c, s) = (t.cos(), t.sin());
                let back = wigner_superposition_at(&sup, q * c - p * s, p * c + q * s);
                assert!((wigner_superposition_at(&moved, q, p) - back).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn printed_forms() {
        let g = PhaseGrid::default();
        let z = C64::new(2.0, 0.0);
        // the odd two-branch printed shape integrates to zero
        assert!(matches!(printed::field(2, 1, z, &g), Err(Error::DegenerateNorm { .. })));
        // three-branch j = 0 differs only by the overall constant
        let p0 = printed::field(3, 0, z, &g).unwrap();
        assert!(p0.sup_diff(&wigner_cat3(0, z, &g).unwrap()) < 1e-12);
        let even = printed::field(2, 0, z, &g).unwrap();
        assert!(even.sup_diff(&wigner_cat2(0, z, &g).unwrap()) > 1e-2);
    }
}
