//! Partial resolutions of the identity on the ladder subspaces `{|kn+j⟩}`.
//!
//! A measure `dμ_j(α) = (πr)^{−1} S_{k,j}(r²) f_j(r²) dr dφ` resolves the
//! identity on its subspace exactly when `∫_0^∞ x^{n−1} f_j(x) dx = Γ(kn+j+1)`
//! for every `n ≥ 0`. The substitution `x = t^k` shows that
//! `f_j(x) = x^{(j+1)/k} e^{−x^{1/k}} / k` satisfies all of them.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Arc;

use ndarray::Array2;
use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::quad::{adaptive_half_line, adaptive_vec, GaussLegendre};
use crate::series::norm_sum;

/// Gauss–Legendre order for moment integrals.
const MOMENT_ORDER: usize = 15;
/// Panel tolerance of the radial identity quadrature.
pub const RADIAL_TOL: f64 = 1e-10;

/// `ln m!` as `Σ ln i`.
pub fn ln_factorial(m: usize) -> f64 {
    (2..=m).map(|i| (i as f64).ln()).sum()
}

/// Named analytic density `c·x^a·e^{−b·x^s}`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StretchedExp {
    pub scale: f64,
    pub power: f64,
    pub rate: f64,
    pub stretch: f64,
}

impl StretchedExp {
    /// `x^{(j+1)/k} e^{−x^{1/k}} / k`.
    pub fn ladder(k: usize, j: usize) -> Self {
        let kf = k as f64;
        Self { scale: 1.0 / kf, power: (j + 1) as f64 / kf, rate: 1.0, stretch: 1.0 / kf }
    }

    pub fn eval(&self, x: f64) -> f64 {
        if x == 0.0 {
            return if self.power > 0.0 { 0.0 } else { self.scale };
        }
        self.scale * x.powf(self.power) * (-self.rate * x.powf(self.stretch)).exp()
    }
}

impl fmt::Display for StretchedExp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}*x^{}*exp(-{}*x^{})", self.scale, self.power, self.rate, self.stretch)
    }
}

/// Parses `"c,a,b,s"`.
impl FromStr for StretchedExp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<f64> = s
            .split(',')
            .map(|p| p.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidGrid(format!("density parameters {s:?}: {e}")))?;
        match parts[..] {
            [scale, power, rate, stretch] if parts.iter().all(|v| v.is_finite()) => {
                Ok(Self { scale, power, rate, stretch })
            }
            _ => Err(Error::InvalidGrid(format!("expected four finite numbers c,a,b,s, got {s:?}"))),
        }
    }
}

/// Candidate `f_j` for the measure of subspace `(k, j)`.
#[derive(Clone)]
pub struct MeasureCandidate {
    pub k: usize,
    pub j: usize,
    pub name: String,
    pub density: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    /// Width of the first integration panel in x.
    pub support_hint: f64,
}

impl fmt::Debug for MeasureCandidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeasureCandidate")
            .field("k", &self.k)
            .field("j", &self.j)
            .field("name", &self.name)
            .field("support_hint", &self.support_hint)
            .finish()
    }
}

impl MeasureCandidate {
    pub fn new(
        k: usize,
        j: usize,
        name: impl Into<String>,
        density: impl Fn(f64) -> f64 + Send + Sync + 'static,
        support_hint: f64,
    ) -> Result<Self> {
        if k == 0 || j >= k {
            return Err(Error::InvalidLabel { k, j });
        }
        Ok(Self { k, j, name: name.into(), density: Arc::new(density), support_hint })
    }

    pub fn from_form(k: usize, j: usize, form: StretchedExp, support_hint: f64) -> Result<Self> {
        Self::new(k, j, form.to_string(), move |x| form.eval(x), support_hint)
    }

    /// The stretched-exponential solution of the moment problem.
    pub fn ladder(k: usize, j: usize) -> Result<Self> {
        Self::from_form(k, j, StretchedExp::ladder(k, j), 8f64.powi(k as i32))
    }

    pub fn eval(&self, x: f64) -> f64 {
        (self.density)(x)
    }
}

/// Relative moment errors `|∫x^{n−1}f/Γ(kn+j+1) − 1|`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentReport {
    pub k: usize,
    pub j: usize,
    pub name: String,
    pub tol: f64,
    /// First moment index of `rel_errors`.
    pub n_start: usize,
    pub rel_errors: Vec<f64>,
    pub pass: bool,
    /// Accepted quadrature panels over all moments.
    pub panels: usize,
    /// Density samples found negative during quadrature.
    pub negative_samples: usize,
}

impl MomentReport {
    /// First n whose error exceeds the tolerance.
    pub fn first_failure(&self) -> Option<usize> {
        self.rel_errors.iter().position(|e| !(*e <= self.tol)).map(|i| i + self.n_start)
    }

    pub fn max_error(&self) -> f64 {
        self.rel_errors.iter().copied().fold(0.0, f64::max)
    }
}

/// Moments `n = 1..=n_top`.
pub fn moment_check(candidate: &MeasureCandidate, n_top: usize, tol: f64) -> Result<MomentReport> {
    moment_check_range(candidate, 1, n_top, tol)
}

/// Moments `n = n_start..=n_top`, each integrated in `t = x^{1/k}` with the
/// factor `1/Γ(kn+j+1)` folded into the integrand so nothing overflows.
pub fn moment_check_range(
    candidate: &MeasureCandidate,
    n_start: usize,
    n_top: usize,
    tol: f64,
) -> Result<MomentReport> {
    let (k, j) = (candidate.k, candidate.j);
    let kf = k as f64;
    let rule = GaussLegendre::new(MOMENT_ORDER);
    let negatives = AtomicUsize::new(0);
    let hint = candidate.support_hint.max(f64::MIN_POSITIVE).powf(1.0 / kf);
    let results: Vec<(f64, usize)> = (n_start..=n_top)
        .into_par_iter()
        .map(|n| {
            let ln_gamma = ln_factorial(k * n + j);
            let power = (k * n) as f64 - 1.0;
            let integrand = |t: f64| {
                if t == 0.0 {
                    return 0.0;
                }
                let f = candidate.eval(t.powf(kf));
                if f < 0.0 {
                    negatives.fetch_add(1, Ordering::Relaxed);
                }
                kf * f * (power * t.ln() - ln_gamma).exp()
            };
            let r = adaptive_half_line(&rule, &integrand, hint, 1e-3 * tol)?;
            Ok(((r.value - 1.0).abs(), r.panels))
        })
        .collect::<Result<_>>()?;
    let rel_errors: Vec<f64> = results.iter().map(|r| r.0).collect();
    let pass = rel_errors.iter().all(|e| *e <= tol);
    Ok(MomentReport {
        k,
        j,
        name: candidate.name.clone(),
        tol,
        n_start,
        rel_errors,
        pass,
        panels: results.iter().map(|r| r.1).sum(),
        negative_samples: negatives.into_inner(),
    })
}

/// Candidate densities keyed by `(k, j)`.
#[derive(Clone, Debug, Default)]
pub struct MeasureRegistry {
    entries: Vec<MeasureCandidate>,
}

impl MeasureRegistry {
    pub fn empty() -> Self {
        Self::default()
    }

    /// `x·e^{−x}` for k = 1 and the ladder densities for k = 2…`k_max`.
    pub fn standard(k_max: usize) -> Self {
        let mut r = Self::empty();
        for k in 1..=k_max {
            for j in 0..k {
                r.register(MeasureCandidate::ladder(k, j).expect("valid label"));
            }
        }
        r
    }

    pub fn register(&mut self, candidate: MeasureCandidate) {
        self.entries.push(candidate);
    }

    pub fn candidates(&self, k: usize, j: usize) -> impl Iterator<Item = &MeasureCandidate> {
        self.entries.iter().filter(move |c| c.k == k && c.j == j)
    }

    /// First candidate whose moments `0..dim` pass at `tol`; divergent
    /// moment integrals count as failures.
    pub fn passing(&self, k: usize, j: usize, dim: usize, tol: f64) -> Result<&MeasureCandidate> {
        for c in self.candidates(k, j) {
            if matches!(moment_check_range(c, 0, dim.saturating_sub(1), tol), Ok(r) if r.pass) {
                return Ok(c);
            }
        }
        Err(Error::NoCandidate { k, j })
    }
}

/// Parameters of the polar-grid resolution of the identity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IdentityGrid {
    pub radial_cutoff: f64,
    /// Gauss–Legendre order per radial panel.
    pub n_radial: usize,
    pub n_angular: usize,
    pub dim_check: usize,
}

/// Assembled block `∬|α⟩_j⟨α| dμ_j` on `|kn+j⟩`, `n < dim_check`.
#[derive(Clone, Debug, PartialEq)]
pub struct IdentityReport {
    pub k: usize,
    pub j: usize,
    pub candidate: String,
    pub block: Array2<C64>,
    /// Largest `|block − I|` entry.
    pub deviation: f64,
    /// Largest off-diagonal magnitude.
    pub off_diagonal: f64,
    pub panels: usize,
}

impl IdentityReport {
    /// Block embedded in the full basis `|0⟩…|n_max−1⟩`; entries off the ladder are zero.
    pub fn embedded(&self, n_max: usize) -> Array2<C64> {
        let mut out = Array2::zeros((n_max, n_max));
        let d = self.block.nrows();
        for a in 0..d {
            for b in 0..d {
                let (m, n) = (self.k * a + self.j, self.k * b + self.j);
                if m < n_max && n < n_max {
                    out[[m, n]] = self.block[[a, b]];
                }
            }
        }
        out
    }
}

/// Polar-grid resolution of the identity with the first registered candidate
/// passing the moments it needs. The angular sum over `n_angular` equally
/// spaced phases is exact for `|n − m| < n_angular`; the radial integral runs
/// in `u = r^{1/k}`, which keeps the ladder densities smooth at the origin.
pub fn identity_resolution_numeric(
    registry: &MeasureRegistry,
    k: usize,
    j: usize,
    grid: IdentityGrid,
) -> Result<IdentityReport> {
    if k == 0 || j >= k {
        return Err(Error::InvalidLabel { k, j });
    }
    let d = grid.dim_check;
    if d == 0 || grid.n_angular < d || grid.n_radial == 0 || !(grid.radial_cutoff > 0.0) {
        return Err(Error::InvalidGrid(format!(
            "need dim_check ≥ 1, n_angular ≥ dim_check, n_radial ≥ 1 and a positive cutoff; got {grid:?}"
        )));
    }
    let candidate = registry.passing(k, j, d, 1e-8)?;
    let kf = k as f64;
    let inv_sqrt_fact: Vec<f64> = (0..d).map(|n| (-0.5 * ln_factorial(k * n + j)).exp()).collect();
    let phases: Vec<Vec<C64>> = (0..grid.n_angular)
        .map(|a| {
            let phi = 2.0 * PI * a as f64 / grid.n_angular as f64;
            (0..d).map(|n| C64::from_polar(1.0, n as f64 * phi)).collect()
        })
        .collect();

    let integrand = |u: f64| -> Vec<f64> {
        let mut out = vec![0.0; 2 * d * d];
        if u == 0.0 {
            return out;
        }
        let r = u.powf(kf);
        let x = r * r;
        let s = norm_sum(k, j, x);
        // (πr)^{−1} S f dr with dr = k u^{k−1} du, and the angular step 2π/n_angular
        let measure = kf * u.powf(kf - 1.0) * s * candidate.eval(x) / (PI * r) * (2.0 * PI / grid.n_angular as f64);
        let weight = measure / s;
        let radial: Vec<f64> = (0..d).map(|n| r.powi(n as i32) * inv_sqrt_fact[n]).collect();
        for ph in &phases {
            let v: Vec<C64> = (0..d).map(|n| ph[n] * radial[n]).collect();
            for a in 0..d {
                for b in 0..d {
                    let e = v[a] * v[b].conj() * weight;
                    out[2 * (a * d + b)] += e.re;
                    out[2 * (a * d + b) + 1] += e.im;
                }
            }
        }
        out
    };

    let rule = GaussLegendre::new(grid.n_radial);
    let u_cut = grid.radial_cutoff.powf(1.0 / kf);
    let result = adaptive_vec(&rule, &integrand, 0.0, u_cut, RADIAL_TOL)?;
    let block = Array2::from_shape_fn((d, d), |(a, b)| {
        C64::new(result.value[2 * (a * d + b)], result.value[2 * (a * d + b) + 1])
    });
    let mut deviation = 0.0f64;
    let mut off_diagonal = 0.0f64;
    for ((a, b), v) in block.indexed_iter() {
        let target = if a == b { 1.0 } else { 0.0 };
        deviation = deviation.max((v - target).norm());
        if a != b {
            off_diagonal = off_diagonal.max(v.norm());
        }
    }
    Ok(IdentityReport {
        k,
        j,
        candidate: candidate.name.clone(),
        block,
        deviation,
        off_diagonal,
        panels: result.panels,
    })
}

/// Sum of the k per-subspace blocks on `|0⟩…|k·dim_check − 1⟩`.
#[derive(Clone, Debug, PartialEq)]
pub struct FullIdentity {
    pub matrix: Array2<C64>,
    pub deviation: f64,
    pub blocks: Vec<IdentityReport>,
}

pub fn identity_sum(registry: &MeasureRegistry, k: usize, grid: IdentityGrid) -> Result<FullIdentity> {
    let n = k * grid.dim_check;
    let blocks: Vec<IdentityReport> =
        (0..k).map(|j| identity_resolution_numeric(registry, k, j, grid)).collect::<Result<_>>()?;
    let mut matrix = Array2::zeros((n, n));
    for b in &blocks {
        matrix = matrix + b.embedded(n);
    }
    let deviation = matrix
        .indexed_iter()
        .map(|((a, b), v): ((usize, usize), &C64)| (v - if a == b { 1.0 } else { 0.0 }).norm())
        .fold(0.0, f64::max);
    Ok(FullIdentity { matrix, deviation, blocks })
}
