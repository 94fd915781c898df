//! Verification suites run by `mcskit verify`.

use std::f64::consts::PI;
use std::fmt;

use clap::ValueEnum;
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use mcskit::completeness::{
    identity_resolution_numeric, identity_sum, moment_check, IdentityGrid, MeasureCandidate, MeasureRegistry,
};
use mcskit::fock::{
    ladder_eigenstate, ladder_eigenstate_by_raising, mean_energy, pha_commutator_check, time_evolve,
    LadderSpectrum,
};
use mcskit::hermite::{FockWavefunction, Wavefunction};
use mcskit::mcs::{
    a_norm_closed, a_norm_series, build_mcs, cyclic_period, cyclic_phase, eigenvalue_residual, moments_closed,
    moments_series, moments_with,
};
use mcskit::phase_space::{
    negativity_volume, printed, wigner_closed, wigner_numeric, MarginalCheck, PhaseGrid,
};
use mcskit::scs::{dft_matrix, linspace, mcs_as_scs, unnormalized_component, unnormalized_scs};
use mcskit::{FockVector, McsLabel};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Algebra,
    States,
    Wigner,
    Completeness,
    All,
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Suite::Algebra => "algebra",
            Suite::States => "states",
            Suite::Wigner => "wigner",
            Suite::Completeness => "completeness",
            Suite::All => "all",
        };
        f.write_str(s)
    }
}

/// How a check's value is judged.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Bound {
    AtMost(f64),
    Above(f64),
    /// Reported only; never fails.
    Info,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Check {
    pub suite: Suite,
    pub name: String,
    pub value: f64,
    pub bound: Bound,
    pub error: Option<String>,
}

impl Check {
    pub fn passed(&self) -> bool {
        if self.error.is_some() {
            return matches!(self.bound, Bound::Info);
        }
        match self.bound {
            Bound::AtMost(t) => self.value <= t,
            Bound::Above(t) => self.value > t,
            Bound::Info => true,
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = match (self.bound, self.passed()) {
            (Bound::Info, _) => "INFO",
            (_, true) => "PASS",
            (_, false) => "FAIL",
        };
        let bound = match self.bound {
            Bound::AtMost(t) => format!("<= {t:e}"),
            Bound::Above(t) => format!("> {t:e}"),
            Bound::Info => "report".into(),
        };
        match &self.error {
            Some(e) => write!(f, "{status} [{}] {}: error: {e}", self.suite, self.name),
            None => write!(f, "{status} [{}] {}: {:.3e} ({bound})", self.suite, self.name, self.value),
        }
    }
}

#[derive(Clone, Debug)]
pub struct VerifyConfig {
    pub n_max: usize,
    pub alphas: Vec<C64>,
    pub zs: Vec<C64>,
    pub grid: PhaseGrid,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            n_max: 256,
            alphas: vec![
                C64::new(0.5, 0.0),
                C64::new(2.0, 0.0),
                C64::new(4.0, 0.0),
                C64::new(2.0, 2.0),
                C64::new(0.0, 4.0),
            ],
            zs: vec![C64::new(1.0, 0.0), C64::new(2.0, 0.0), C64::new(1.0, 1.0)],
            grid: PhaseGrid::default(),
            seed: 7,
        }
    }
}

struct Recorder {
    suite: Suite,
    checks: Vec<Check>,
}

impl Recorder {
    fn record(&mut self, name: impl Into<String>, bound: Bound, f: impl FnOnce() -> mcskit::Result<f64>) {
        let (value, error) = match f() {
            Ok(v) => (v, None),
            Err(e) => (f64::NAN, Some(e.to_string())),
        };
        self.checks.push(Check { suite: self.suite, name: name.into(), value, bound, error });
    }
}

pub fn run(suite: Suite, config: &VerifyConfig) -> Vec<Check> {
    match suite {
        Suite::All => [Suite::Algebra, Suite::States, Suite::Wigner, Suite::Completeness]
            .into_iter()
            .flat_map(|s| run(s, config))
            .collect(),
        Suite::Algebra => algebra(config),
        Suite::States => states(config),
        Suite::Wigner => wigner(config),
        Suite::Completeness => completeness(),
    }
}

fn fmt_c(z: C64) -> String {
    format!("{}{:+}i", z.re, z.im)
}

fn random_probe(rng: &mut ChaCha8Rng, n_max: usize, top: usize) -> FockVector {
    let coeffs = (0..n_max)
        .map(|n| if n <= top { C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) } else { C64::new(0.0, 0.0) })
        .collect();
    FockVector::new(coeffs).expect("positive dimension").normalized()
}

fn algebra(config: &VerifyConfig) -> Vec<Check> {
    let mut r = Recorder { suite: Suite::Algebra, checks: vec![] };
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let n_max = 128;
    for k in 1..=5 {
        let probes: Vec<FockVector> = (0..50).map(|_| random_probe(&mut rng, n_max, n_max - k - 1)).collect();
        r.record(format!("PHA relations k={k}, 50 probes"), Bound::AtMost(1e-12), || {
            probes.iter().map(|p| pha_commutator_check(k, p).map(|res| res.max())).try_fold(0.0f64, |a, v| v.map(|v| a.max(v)))
        });
    }
    for k in [2, 3, 5] {
        r.record(format!("spectrum union k={k}, 60 levels"), Bound::AtMost(0.0), || {
            let merged = LadderSpectrum::new(k, 60usize.div_ceil(k))?.merged();
            Ok(merged.iter().take(60).enumerate().map(|(n, e)| (e - (n as f64 + 0.5)).abs()).fold(0.0, f64::max))
        });
    }
    for k in 1..=4 {
        r.record(format!("ladder eigenstates by raising k={k}"), Bound::AtMost(1e-12), || {
            let mut worst = 0.0f64;
            for j in 0..k {
                for n in 0..10 {
                    let a = ladder_eigenstate(k, j, n, 64)?;
                    let b = ladder_eigenstate_by_raising(k, j, n, 64)?;
                    worst = worst.max(a.distance(&b));
                }
            }
            Ok(worst)
        });
    }
    r.checks
}

fn labels(alphas: &[C64]) -> Vec<(usize, usize, C64)> {
    let mut out = vec![];
    for k in 1..=3 {
        for j in 0..k {
            for &a in alphas {
                out.push((k, j, a));
            }
        }
    }
    out
}

fn states(config: &VerifyConfig) -> Vec<Check> {
    let mut r = Recorder { suite: Suite::States, checks: vec![] };
    let n_max = config.n_max;
    for (k, j, a) in labels(&config.alphas) {
        r.record(format!("eigenvalue residual k={k} j={j} alpha={}", fmt_c(a)), Bound::AtMost(1e-10), || {
            let label = McsLabel::new(k, j, a)?;
            Ok(eigenvalue_residual(&label, &build_mcs(&label, n_max)?))
        });
        r.record(format!("cyclicity k={k} j={j} alpha={}", fmt_c(a)), Bound::AtMost(1e-10), || {
            let label = McsLabel::new(k, j, a)?;
            let state = build_mcs(&label, n_max)?;
            let overlap = state.inner(&time_evolve(&state, cyclic_period(k)));
            Ok((overlap * C64::from_polar(1.0, -cyclic_phase(k, j)) - 1.0).norm())
        });
        r.record(format!("geometric phase routes k={k} j={j} alpha={}", fmt_c(a)), Bound::AtMost(1e-12), || {
            let label = McsLabel::new(k, j, a)?;
            let state = build_mcs(&label, n_max)?;
            let via_norm = cyclic_period(k) * (a_norm_series(&label) - j as f64);
            let via_energy = cyclic_phase(k, j) + cyclic_period(k) * mean_energy(&state);
            Ok((via_norm - via_energy).abs())
        });
    }

    let radii = linspace(0.0, 4.0, 41);
    r.record("SCS minimum uncertainty |alpha| <= 4", Bound::AtMost(1e-12), || {
        let mut worst = 0.0f64;
        for (i, &rad) in radii.iter().enumerate() {
            let a = C64::from_polar(rad, 0.7 * i as f64);
            let m = moments_with(&McsLabel::new(1, 0, a)?, n_max)?;
            worst = worst.max((m.uncertainty_product - 0.5).abs());
        }
        Ok(worst)
    });

    for (k, j, expected) in [(2, 0, 0.5), (2, 1, 1.5), (3, 0, 0.5), (3, 1, 1.5), (3, 2, 2.5)] {
        r.record(format!("alpha->0 limit k={k} j={j} = {expected}"), Bound::AtMost(1e-6), || {
            let m = moments_with(&McsLabel::new(k, j, C64::new(1e-6, 0.0))?, n_max)?;
            Ok((m.uncertainty_product - expected).abs())
        });
    }

    let grid = linspace(1e-3, 4.0, 100);
    for k in 2..=3 {
        for j in 0..k {
            r.record(format!("closed form vs series k={k} j={j}"), Bound::AtMost(1e-10), || {
                let mut worst = 0.0f64;
                for &a in &grid {
                    let label = McsLabel::new(k, j, C64::new(a, 0.0))?;
                    let series = a_norm_series(&label);
                    worst = worst.max((a_norm_closed(&label)? - series).abs() / series.abs().max(f64::MIN_POSITIVE));
                    worst = worst.max(moments_closed(&label)?.max_deviation(&moments_series(&label)));
                }
                Ok(worst)
            });
        }
    }
    for j in 0..3 {
        r.record(format!("k=3 uncertainty product equals <H>, j={j}"), Bound::AtMost(1e-10), || {
            let mut worst = 0.0f64;
            for &a in &grid {
                let m = moments_series(&McsLabel::new(3, j, C64::new(a, 0.0))?);
                worst = worst.max((m.uncertainty_product - m.mean_h).abs());
            }
            Ok(worst)
        });
    }
    r.record("k=2 geometric phase closed forms", Bound::AtMost(1e-10), || {
        let mut worst = 0.0f64;
        for &a in &grid {
            let even = PI * a * a.tanh();
            let odd = PI * (a / a.tanh() - 1.0);
            for (j, closed) in [(0, even), (1, odd)] {
                let label = McsLabel::new(2, j, C64::new(a, 0.0))?;
                worst = worst.max((cyclic_period(2) * (a_norm_series(&label) - j as f64) - closed).abs());
            }
        }
        Ok(worst)
    });

    r.record("cyclic-group matrix round trip k <= 8", Bound::AtMost(1e-13), || {
        let mut worst = 0.0f64;
        for k in 1..=8 {
            let d = dft_matrix(k);
            let prod = d.forward.dot(&d.inverse);
            for ((a, b), v) in prod.indexed_iter() {
                worst = worst.max((v - if a == b { 1.0 } else { 0.0 }).norm());
            }
        }
        Ok(worst)
    });
    r.record("ladder components reconstruct the SCS", Bound::AtMost(1e-12), || {
        let mut worst = 0.0f64;
        for k in [2, 3, 5] {
            for &z in &config.zs {
                let whole = unnormalized_scs(z, 64)?;
                let mut sum = FockVector::zeros(64)?;
                for j in 0..k {
                    sum = &sum + &unnormalized_component(k, j, z, 64)?;
                }
                let d = whole.coeffs().iter().zip(sum.coeffs()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
                worst = worst.max(d);
            }
        }
        Ok(worst)
    });
    let xs = linspace(-10.0, 10.0, 401);
    for &z in &config.zs {
        r.record(format!("wavefunction vs Hermite synthesis z={}", fmt_c(z)), Bound::AtMost(1e-8), || {
            let mut worst = 0.0f64;
            for k in 1..=3 {
                for j in 0..k {
                    let sup = mcs_as_scs(k, j, z)?;
                    let label = McsLabel::new(k, j, z.powu(k as u32))?;
                    let synth = FockWavefunction::new(&build_mcs(&label, n_max)?);
                    for &x in &xs {
                        worst = worst.max((sup.eval(x) - synth.position(x)).norm());
                    }
                }
            }
            Ok(worst)
        });
    }
    r.checks
}

const WIGNER_CASES: [(usize, usize); 6] = [(1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (3, 2)];

fn wigner(config: &VerifyConfig) -> Vec<Check> {
    let mut r = Recorder { suite: Suite::Wigner, checks: vec![] };
    let grid = &config.grid;
    for &z in &config.zs {
        for (k, j) in WIGNER_CASES {
            let tag = format!("k={k} j={j} z={}", fmt_c(z));
            let fields = (|| {
                let label = McsLabel::new(k, j, z.powu(k as u32))?;
                let psi = FockWavefunction::new(&build_mcs(&label, config.n_max)?);
                let numeric = wigner_numeric(&psi, grid)?;
                let closed = wigner_closed(k, j, z, grid)?;
                Ok::<_, mcskit::Error>((psi, numeric, closed))
            })();
            let (psi, numeric, closed) = match fields {
                Ok(f) => f,
                Err(e) => {
                    r.record(format!("Wigner fields {tag}"), Bound::AtMost(0.0), || Err(e));
                    continue;
                }
            };
            r.record(format!("closed vs integral {tag}"), Bound::AtMost(1e-6), || {
                Ok(closed.sup_diff(&numeric.field))
            });
            r.record(format!("imaginary residue {tag}"), Bound::AtMost(1e-10), || Ok(numeric.imag_residue));
            r.record(format!("marginals {tag}"), Bound::AtMost(1e-6), || {
                Ok(MarginalCheck::new(&numeric.field, &psi)?.deviation())
            });
            let negativity = negativity_volume(&numeric.field);
            if k == 1 {
                r.record(format!("negativity {tag}"), Bound::AtMost(1e-10), || Ok(negativity));
            } else if z == C64::new(2.0, 0.0) {
                r.record(format!("negativity {tag}"), Bound::Above(1e-3), || Ok(negativity));
            }
            if k >= 2 {
                r.record(format!("printed closed form vs integral {tag}"), Bound::Info, || {
                    Ok(printed::field(k, j, z, grid)?.sup_diff(&numeric.field))
                });
            }
        }
    }
    r.checks
}

fn completeness() -> Vec<Check> {
    let mut r = Recorder { suite: Suite::Completeness, checks: vec![] };
    let standard = MeasureCandidate::new(1, 0, "x*exp(-x)", |x: f64| x * (-x).exp(), 16.0).expect("valid label");
    r.record("k=1 moments n=1..20 for x*exp(-x)", Bound::AtMost(1e-8), || {
        Ok(moment_check(&standard, 20, 1e-8)?.max_error())
    });
    let plain = MeasureCandidate::new(1, 0, "exp(-x)", |x: f64| (-x).exp(), 16.0).expect("valid label");
    r.record("exp(-x) is rejected (largest moment error)", Bound::Above(1e-8), || {
        Ok(moment_check(&plain, 20, 1e-8)?.max_error())
    });
    let mut reg = MeasureRegistry::empty();
    reg.register(standard);
    let grid = IdentityGrid { radial_cutoff: 12.0, n_radial: 15, n_angular: 24, dim_check: 12 };
    r.record("k=1 identity resolution, 12 states", Bound::AtMost(1e-6), || {
        Ok(identity_resolution_numeric(&reg, 1, 0, grid)?.deviation)
    });
    let standard = MeasureRegistry::standard(3);
    for (k, cutoff, dim) in [(2usize, 60.0, 8usize), (3, 600.0, 6)] {
        r.record(format!("k={k} blocks sum to the identity, {} states", k * dim), Bound::AtMost(1e-6), || {
            let g = IdentityGrid { radial_cutoff: cutoff, n_radial: 15, n_angular: 2 * dim, dim_check: dim };
            Ok(identity_sum(&standard, k, g)?.deviation)
        });
    }
    r.checks
}
