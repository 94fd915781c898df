//! Truncated Fock-space arithmetic.
//!
//! Units are ℏ = m = ω = 1 throughout, so `H = N + 1/2` and the oscillator
//! period is 2π. States live on the number basis `|0⟩ … |n_max − 1⟩`.

use std::ops::{Add, Sub};

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Default truncation dimension.
pub const DEFAULT_N_MAX: usize = 256;

/// Default tolerance on probability discarded by raising operators.
pub const DEFAULT_LEAKAGE_TOL: f64 = 1e-12;

/// Complex amplitudes over the truncated number basis.
#[derive(Clone, Debug, PartialEq)]
pub struct FockVector {
    coeffs: Vec<C64>,
}

impl FockVector {
    pub fn new(coeffs: Vec<C64>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyDimension);
        }
        Ok(Self { coeffs })
    }

    pub fn zeros(n_max: usize) -> Result<Self> {
        Self::new(vec![C64::new(0.0, 0.0); n_max])
    }

    /// The number state `|n⟩`.
    pub fn basis(n_max: usize, n: usize) -> Result<Self> {
        if n >= n_max {
            return Err(Error::Overflow { index: n, n_max });
        }
        let mut v = Self::zeros(n_max)?;
        v.coeffs[n] = C64::new(1.0, 0.0);
        Ok(v)
    }

    pub fn n_max(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C64> {
        self.coeffs
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn norm(&self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Returns the state scaled to unit norm; the zero vector is returned as is.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        if n == 0.0 {
            return self.clone();
        }
        self.scale(C64::new(1.0 / n, 0.0))
    }

    pub fn scale(&self, c: C64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|&a| a * c).collect() }
    }

    /// `⟨self|other⟩`, antilinear in `self`.
    pub fn inner(&self, other: &Self) -> C64 {
        assert_eq!(self.n_max(), other.n_max(), "dimension mismatch");
        self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.conj() * b).sum()
    }

    pub fn distance(&self, other: &Self) -> f64 {
        (self - other).norm()
    }

    /// Largest index carrying a nonzero amplitude.
    pub fn support_max(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| *c != C64::new(0.0, 0.0))
    }

    /// Applies a diagonal operator `c_n → d(n)·c_n`.
    pub fn map_diagonal(&self, d: impl Fn(usize) -> C64) -> Self {
        Self {
            coeffs: self.coeffs.iter().enumerate().map(|(n, &c)| d(n) * c).collect(),
        }
    }
}

impl Sub for &FockVector {
    type Output = FockVector;

    fn sub(self, rhs: &FockVector) -> FockVector {
        assert_eq!(self.n_max(), rhs.n_max(), "dimension mismatch");
        FockVector {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Add for &FockVector {
    type Output = FockVector;

    fn add(self, rhs: &FockVector) -> FockVector {
        assert_eq!(self.n_max(), rhs.n_max(), "dimension mismatch");
        FockVector {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

/// A state produced by a raising operation, with the probability that fell
/// off the top of the truncated basis.
#[derive(Clone, Debug, PartialEq)]
pub struct Laddered {
    pub state: FockVector,
    pub leakage: f64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderSign {
    Raising,
    Lowering,
}

/// `(a^±)^k`, the k-photon ladder operator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LadderPower {
    k: usize,
    sign: LadderSign,
}

impl LadderPower {
    pub fn new(k: usize, sign: LadderSign) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidLabel { k, j: 0 });
        }
        Ok(Self { k, sign })
    }

    pub fn raising(k: usize) -> Result<Self> {
        Self::new(k, LadderSign::Raising)
    }

    pub fn lowering(k: usize) -> Result<Self> {
        Self::new(k, LadderSign::Lowering)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn sign(&self) -> LadderSign {
        self.sign
    }
}

/// `a⁻`: `c'_n = √(n+1)·c_{n+1}`.
pub fn apply_lowering(state: &FockVector) -> FockVector {
    let c = state.coeffs();
    let n_max = c.len();
    let mut out = vec![C64::new(0.0, 0.0); n_max];
    for n in 0..n_max - 1 {
        out[n] = ((n + 1) as f64).sqrt() * c[n + 1];
    }
    FockVector { coeffs: out }
}

/// `a⁺` without any leakage check. The discarded `|n_max⟩` probability is
/// returned alongside the state.
pub fn raise_unchecked(state: &FockVector) -> Laddered {
    let c = state.coeffs();
    let n_max = c.len();
    let mut out = vec![C64::new(0.0, 0.0); n_max];
    for n in 1..n_max {
        out[n] = (n as f64).sqrt() * c[n - 1];
    }
    let leakage = n_max as f64 * c[n_max - 1].norm_sqr();
    Laddered { state: FockVector { coeffs: out }, leakage }
}

/// `a⁺`: `c'_n = √n·c_{n−1}`. Fails when the amplitude pushed past the
/// truncation carries more probability than `leakage_tol`.
pub fn apply_raising(state: &FockVector, leakage_tol: f64) -> Result<Laddered> {
    let out = raise_unchecked(state);
    if out.leakage > leakage_tol {
        return Err(Error::LeakageExceeded { leakage: out.leakage, tol: leakage_tol });
    }
    Ok(out)
}

/// `(a^±)^k` by k-fold composition; leakage accumulates over the steps.
pub fn apply_k_ladder(state: &FockVector, op: LadderPower, leakage_tol: f64) -> Result<Laddered> {
    let mut current = state.clone();
    let mut leakage = 0.0;
    for _ in 0..op.k {
        match op.sign {
            LadderSign::Lowering => current = apply_lowering(&current),
            LadderSign::Raising => {
                let step = raise_unchecked(&current);
                leakage += step.leakage;
                current = step.state;
            }
        }
    }
    if leakage > leakage_tol {
        return Err(Error::LeakageExceeded { leakage, tol: leakage_tol });
    }
    Ok(Laddered { state: current, leakage })
}

/// `(a⁻)^k`. Never leaks.
pub fn apply_k_lowering(state: &FockVector, k: usize) -> FockVector {
    (0..k).fold(state.clone(), |s, _| apply_lowering(&s))
}

/// `H = N + 1/2`.
pub fn hamiltonian_apply(state: &FockVector) -> FockVector {
    state.map_diagonal(|n| C64::new(n as f64 + 0.5, 0.0))
}

/// `⟨ψ|H|ψ⟩` for a normalized state.
pub fn mean_energy(state: &FockVector) -> f64 {
    state.coeffs().iter().enumerate().map(|(n, c)| (n as f64 + 0.5) * c.norm_sqr()).sum()
}

/// `U(t) = exp(−iHt)`: `c'_n = exp(−i(n + 1/2)t)·c_n`.
pub fn time_evolve(state: &FockVector, t: f64) -> FockVector {
    state.map_diagonal(|n| C64::from_polar(1.0, -(n as f64 + 0.5) * t))
}

/// Position quadrature `x = (a⁻ + a⁺)/√2` as a truncated tridiagonal matrix.
pub fn position_apply(state: &FockVector) -> FockVector {
    let c = state.coeffs();
    let n_max = c.len();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let coeffs = (0..n_max)
        .map(|n| {
            let mut v = C64::new(0.0, 0.0);
            if n + 1 < n_max {
                v += ((n + 1) as f64).sqrt() * c[n + 1];
            }
            if n > 0 {
                v += (n as f64).sqrt() * c[n - 1];
            }
            v * s
        })
        .collect();
    FockVector { coeffs }
}

/// Momentum quadrature `p = i(a⁺ − a⁻)/√2` as a truncated tridiagonal matrix.
pub fn momentum_apply(state: &FockVector) -> FockVector {
    let c = state.coeffs();
    let n_max = c.len();
    let s = C64::new(0.0, std::f64::consts::FRAC_1_SQRT_2);
    let coeffs = (0..n_max)
        .map(|n| {
            let mut v = C64::new(0.0, 0.0);
            if n > 0 {
                v += (n as f64).sqrt() * c[n - 1];
            }
            if n + 1 < n_max {
                v -= ((n + 1) as f64).sqrt() * c[n + 1];
            }
            v * s
        })
        .collect();
    FockVector { coeffs }
}

/// `N(H) = ∏_{i=1}^{k} (H − i + 1/2)` on `|n⟩`, i.e. the falling factorial
/// `n(n−1)…(n−k+1)`.
pub fn number_polynomial(k: usize, energy: f64) -> f64 {
    (1..=k).map(|i| energy - i as f64 + 0.5).product()
}

/// Relative residuals of the polynomial Heisenberg algebra relations on a probe.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PhaResiduals {
    /// `‖([H, a_g⁻] + k·a_g⁻)ψ‖`.
    pub commutator_lowering: f64,
    /// `‖([H, a_g⁺] − k·a_g⁺)ψ‖`.
    pub commutator_raising: f64,
    /// `‖N(H)ψ − a_g⁺a_g⁻ψ‖` with `N(H)` from the product formula.
    pub number_operator: f64,
    /// `‖[a_g⁻, a_g⁺]ψ − (N(H+k) − N(H))ψ‖`.
    pub ladder_commutator: f64,
}

impl PhaResiduals {
    pub fn max(&self) -> f64 {
        self.commutator_lowering
            .max(self.commutator_raising)
            .max(self.number_operator)
            .max(self.ladder_commutator)
    }
}

/// Residual norm scaled by the size of the terms being differenced, so the
/// number measures cancellation quality rather than operator magnitude.
fn relative(diff: &FockVector, scale: f64) -> f64 {
    let d = diff.norm();
    if scale == 0.0 {
        d
    } else {
        d / scale
    }
}

/// Checks `[H, a_g^±] = ±k·a_g^±`, `N(H) = a_g⁺a_g⁻` and
/// `[a_g⁻, a_g⁺] = N(H + k) − N(H)` on an interior-supported probe.
///
/// Residuals are relative to the largest operand norm in each identity.
pub fn pha_commutator_check(k: usize, probe: &FockVector) -> Result<PhaResiduals> {
    if k == 0 {
        return Err(Error::InvalidLabel { k, j: 0 });
    }
    let n_max = probe.n_max();
    let limit = n_max.checked_sub(k + 1).ok_or(Error::Overflow { index: k + 1, n_max })?;
    if let Some(top) = probe.support_max() {
        if top > limit {
            return Err(Error::EdgeSupport { index: top, limit });
        }
    }
    let raise = |s: &FockVector| -> FockVector {
        // Support stays below n_max by the precondition; nothing leaks.
        (0..k).fold(s.clone(), |acc, _| raise_unchecked(&acc).state)
    };
    let lower = |s: &FockVector| apply_k_lowering(s, k);
    let kk = C64::new(k as f64, 0.0);

    let h_probe = hamiltonian_apply(probe);

    let h_low = hamiltonian_apply(&lower(probe));
    let low_h = lower(&h_probe);
    let low = lower(probe);
    let lhs = &(&h_low - &low_h) + &low.scale(kk);
    let commutator_lowering = relative(&lhs, h_low.norm().max(low_h.norm()));

    let h_up = hamiltonian_apply(&raise(probe));
    let up_h = raise(&h_probe);
    let up = raise(probe);
    let lhs = &(&h_up - &up_h) - &up.scale(kk);
    let commutator_raising = relative(&lhs, h_up.norm().max(up_h.norm()));

    let direct = raise(&lower(probe));
    let poly = probe.map_diagonal(|n| C64::new(number_polynomial(k, n as f64 + 0.5), 0.0));
    let number_operator = relative(&(&direct - &poly), direct.norm().max(poly.norm()));

    let low_up = lower(&raise(probe));
    let comm = &low_up - &direct;
    let poly_diff = probe.map_diagonal(|n| {
        let e = n as f64 + 0.5;
        C64::new(number_polynomial(k, e + k as f64) - number_polynomial(k, e), 0.0)
    });
    let ladder_commutator = relative(&(&comm - &poly_diff), low_up.norm().max(direct.norm()));

    Ok(PhaResiduals { commutator_lowering, commutator_raising, number_operator, ladder_commutator })
}

/// The ladder eigenstate `|kn + j⟩` of the k-photon algebra.
pub fn ladder_eigenstate(k: usize, j: usize, n: usize, n_max: usize) -> Result<FockVector> {
    if k == 0 || j >= k {
        return Err(Error::InvalidLabel { k, j });
    }
    FockVector::basis(n_max, k * n + j)
}

/// Same state built as `√(j!/(kn+j)!)·(a_g⁺)^n |j⟩`, with the prefactor
/// accumulated as a running product of `1/√m`.
pub fn ladder_eigenstate_by_raising(
    k: usize,
    j: usize,
    n: usize,
    n_max: usize,
) -> Result<FockVector> {
    if k == 0 || j >= k {
        return Err(Error::InvalidLabel { k, j });
    }
    let top = k * n + j;
    if top >= n_max {
        return Err(Error::Overflow { index: top, n_max });
    }
    let op = LadderPower::raising(k)?;
    let mut state = FockVector::basis(n_max, j)?;
    for _ in 0..n {
        state = apply_k_ladder(&state, op, DEFAULT_LEAKAGE_TOL)?.state;
    }
    let prefactor: f64 = (j + 1..=top).map(|m| 1.0 / (m as f64).sqrt()).product();
    Ok(state.scale(C64::new(prefactor, 0.0)))
}

/// The oscillator spectrum split into k interleaved ladders of spacing k.
#[derive(Clone, Debug, PartialEq)]
pub struct LadderSpectrum {
    k: usize,
    levels_per_ladder: usize,
}

impl LadderSpectrum {
    pub fn new(k: usize, levels_per_ladder: usize) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidLabel { k, j: 0 });
        }
        Ok(Self { k, levels_per_ladder })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Extremal energies `E_i = i − 1/2`, `i = 1…k`.
    pub fn base_energies(&self) -> Vec<f64> {
        (1..=self.k).map(|i| i as f64 - 0.5).collect()
    }

    /// `E_n^i = E_i + kn` for each ladder.
    pub fn ladders(&self) -> Vec<Vec<f64>> {
        self.base_energies()
            .into_iter()
            .map(|e| (0..self.levels_per_ladder).map(|n| e + (self.k * n) as f64).collect())
            .collect()
    }

    /// All ladder levels merged in ascending order.
    pub fn merged(&self) -> Vec<f64> {
        let mut all: Vec<f64> = self.ladders().into_iter().flatten().collect();
        all.sort_by(f64::total_cmp);
        all
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn lowering_examples() {
        let zero = FockVector::basis(8, 0).unwrap();
        assert_eq!(apply_lowering(&zero).norm(), 0.0);

        let one = FockVector::basis(8, 1).unwrap();
        assert_eq!(apply_lowering(&one), zero);

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let mut v = vec![c(0.0); 8];
        v[0] = c(s);
        v[2] = c(s);
        let out = apply_lowering(&FockVector::new(v).unwrap());
        let expected = FockVector::basis(8, 1).unwrap();
        assert!(out.distance(&expected) < 1e-15);
    }

    #[test]
    fn raising_examples() {
        let out = apply_raising(&FockVector::basis(8, 0).unwrap(), DEFAULT_LEAKAGE_TOL).unwrap();
        assert_eq!(out.state, FockVector::basis(8, 1).unwrap());
        assert_eq!(out.leakage, 0.0);

        let edge = FockVector::basis(8, 7).unwrap();
        let out = apply_raising(&edge, f64::INFINITY).unwrap();
        assert_eq!(out.state.norm(), 0.0);
        assert_eq!(out.leakage, 8.0);
        assert!(matches!(
            apply_raising(&edge, DEFAULT_LEAKAGE_TOL),
            Err(Error::LeakageExceeded { .. })
        ));

        let out = apply_raising(&FockVector::basis(8, 3).unwrap(), DEFAULT_LEAKAGE_TOL).unwrap();
        assert!((out.state.coeffs()[4] - c(2.0)).norm() < 1e-15);
    }

    #[test]
    fn k_ladder_examples() {
        let five = FockVector::basis(16, 5).unwrap();
        let out = apply_k_ladder(&five, LadderPower::lowering(2).unwrap(), 0.0).unwrap();
        assert!((out.state.coeffs()[3] - c(2.0 * 5f64.sqrt())).norm() < 1e-14);

        let two = FockVector::basis(16, 2).unwrap();
        let out = apply_k_ladder(&two, LadderPower::lowering(3).unwrap(), 0.0).unwrap();
        assert_eq!(out.state.norm(), 0.0);

        let v = FockVector::new((0..16).map(|n| C64::new(n as f64, 1.0)).collect()).unwrap();
        let out = apply_k_ladder(&v, LadderPower::lowering(1).unwrap(), 0.0).unwrap();
        assert_eq!(out.state, apply_lowering(&v));

        assert!(LadderPower::raising(0).is_err());
    }

    #[test]
    fn raising_leakage_accumulates() {
        let top = FockVector::basis(6, 4).unwrap();
        let out = apply_k_ladder(&top, LadderPower::raising(2).unwrap(), f64::INFINITY).unwrap();
        // first step: |4⟩ → √5|5⟩, no loss; second step loses 6·5.
        assert!((out.leakage - 30.0).abs() < 1e-12);
        assert_eq!(out.state.norm(), 0.0);
    }

    #[test]
    fn hamiltonian_examples() {
        let h0 = hamiltonian_apply(&FockVector::basis(4, 0).unwrap());
        assert_eq!(h0.coeffs()[0], c(0.5));
        let (k, j, n) = (3, 2, 4);
        let idx = k * n + j;
        let h = hamiltonian_apply(&FockVector::basis(32, idx).unwrap());
        assert_eq!(h.coeffs()[idx], c((j as f64 + 0.5) + (k * n) as f64));
        let z = FockVector::zeros(4).unwrap();
        assert_eq!(hamiltonian_apply(&z), z);
    }

    #[test]
    fn number_plus_one_on_interior() {
        let n_max = 32;
        for n in 0..n_max - 1 {
            let v = FockVector::basis(n_max, n).unwrap();
            let up = apply_raising(&v, 0.0).unwrap().state;
            let back = apply_lowering(&up);
            assert!((back.coeffs()[n] - c(n as f64 + 1.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn pha_examples() {
        let r = pha_commutator_check(2, &FockVector::basis(16, 4).unwrap()).unwrap();
        assert!(r.max() <= 1e-12, "{r:?}");

        let r = pha_commutator_check(1, &FockVector::basis(16, 0).unwrap()).unwrap();
        assert_eq!(r.number_operator, 0.0);
        assert_eq!(number_polynomial(1, 0.5), 0.0);

        let err = pha_commutator_check(3, &FockVector::basis(16, 13).unwrap()).unwrap_err();
        assert_eq!(err, Error::EdgeSupport { index: 13, limit: 12 });
    }

    #[test]
    fn extremal_states_in_kernel() {
        for k in 1..=5 {
            for j in 0..k {
                assert_eq!(number_polynomial(k, j as f64 + 0.5), 0.0);
                let v = FockVector::basis(32, j).unwrap();
                assert_eq!(apply_k_lowering(&v, k).norm(), 0.0);
            }
        }
    }

    #[test]
    fn ladder_eigenstate_examples() {
        assert_eq!(ladder_eigenstate(3, 0, 2, 16).unwrap(), FockVector::basis(16, 6).unwrap());
        assert_eq!(ladder_eigenstate(1, 0, 5, 16).unwrap(), FockVector::basis(16, 5).unwrap());
        let direct = ladder_eigenstate(2, 1, 1, 16).unwrap();
        let raised = ladder_eigenstate_by_raising(2, 1, 1, 16).unwrap();
        assert_eq!(direct, FockVector::basis(16, 3).unwrap());
        assert!(direct.distance(&raised) < 1e-14);
        assert!(matches!(ladder_eigenstate(3, 1, 5, 16), Err(Error::Overflow { .. })));
        assert!(matches!(ladder_eigenstate(3, 3, 0, 16), Err(Error::InvalidLabel { .. })));
    }

    #[test]
    fn ladder_eigenstates_by_raising_match_basis() {
        for k in 1..=4 {
            for j in 0..k {
                for n in 0..10 {
                    let a = ladder_eigenstate(k, j, n, 64).unwrap();
                    let b = ladder_eigenstate_by_raising(k, j, n, 64).unwrap();
                    assert!(a.distance(&b) < 1e-12, "k={k} j={j} n={n}");
                }
            }
        }
    }

    #[test]
    fn time_evolve_examples() {
        let v = FockVector::new((0..8).map(|n| C64::new(1.0, n as f64)).collect()).unwrap();
        assert_eq!(time_evolve(&v, 0.0), v);
        let g = time_evolve(&FockVector::basis(8, 0).unwrap(), 2.0 * std::f64::consts::PI);
        assert!((g.coeffs()[0] - c(-1.0)).norm() < 1e-15);
    }

    #[test]
    fn time_evolve_is_unitary_over_many_steps() {
        let mut v = FockVector::new((0..64).map(|n| C64::new(1.0, 0.1 * n as f64)).collect())
            .unwrap()
            .normalized();
        for _ in 0..1000 {
            v = time_evolve(&v, 0.37);
        }
        assert!((v.norm() - 1.0).abs() <= 1e-14);
    }

    #[test]
    fn spectrum_three_ladders() {
        let s = LadderSpectrum::new(3, 4).unwrap();
        assert_eq!(
            s.ladders(),
            vec![
                vec![0.5, 3.5, 6.5, 9.5],
                vec![1.5, 4.5, 7.5, 10.5],
                vec![2.5, 5.5, 8.5, 11.5]
            ]
        );
        assert_eq!(LadderSpectrum::new(1, 5).unwrap().ladders(), vec![vec![0.5, 1.5, 2.5, 3.5, 4.5]]);
        for k in 1..=6 {
            let merged = LadderSpectrum::new(k, 10).unwrap().merged();
            for (n, e) in merged.iter().enumerate() {
                assert_eq!(*e, n as f64 + 0.5);
            }
        }
    }

    #[test]
    fn quadratures_on_ground_state() {
        let g = FockVector::basis(8, 0).unwrap();
        let x = position_apply(&g);
        let p = momentum_apply(&g);
        assert!((x.norm_sqr() - 0.5).abs() < 1e-15);
        assert!((p.norm_sqr() - 0.5).abs() < 1e-15);
        assert_eq!(g.inner(&x), c(0.0));
    }

    #[test]
    fn empty_dimension_rejected() {
        assert_eq!(FockVector::new(vec![]), Err(Error::EmptyDimension));
    }
}
