//! `mcskit`: datasets and verification suites for multiphoton coherent states.

mod args;
mod output;
mod verify;

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;

use mcskit::fock::LadderSpectrum;
use mcskit::hermite::FockWavefunction;
use mcskit::mcs::{build_mcs, geometric_phase, geometric_phase_closed, moments_closed, moments_with};
use mcskit::phase_space::{negativity_volume, wigner_closed, wigner_numeric, PhaseGrid, WignerField};
use mcskit::scs::{density_movie, linspace, trapezoid};
use mcskit::McsLabel;

use crate::args::{parse_complex, parse_grid, parse_x_grid};
use crate::output::{Format, Table};
use crate::verify::{Suite, VerifyConfig};

const COMPLEX_HELP: &str = "complex number as \"re,im\", polar \"r@theta_degrees\", or a real";

#[derive(Parser, Debug)]
#[command(name = "mcskit", version, about = "Multiphoton coherent states: spectra, uncertainty, Wigner functions, evolution")]
#[command(after_help = "Set MCSKIT_THREADS to cap the number of worker threads.")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Energy levels of the k interleaved ladders.
    Spectrum {
        #[arg(long, default_value_t = 3)]
        k: usize,
        /// Levels per ladder.
        #[arg(long, default_value_t = 4)]
        levels: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Uncertainty product, mean energy and geometric phase over a real alpha sweep.
    Uncertainty {
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Ladder index; all ladders when omitted.
        #[arg(long)]
        j: Option<usize>,
        /// Largest |alpha| of the sweep, which starts at 0.
        #[arg(long, default_value_t = 4.0)]
        amax: f64,
        /// Number of sweep points.
        #[arg(long, default_value_t = 101)]
        na: usize,
        #[arg(long, default_value_t = 256)]
        nmax: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Wigner function on a phase-space grid.
    Wigner {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        j: usize,
        #[arg(long, help = COMPLEX_HELP, default_value = "2", allow_hyphen_values = true)]
        z: String,
        /// "qmin,qmax,pmin,pmax,nq,np".
        #[arg(long, default_value = "-8,8,-8,8,257,257", allow_hyphen_values = true)]
        grid: String,
        #[arg(long, value_enum, default_value_t = WignerMethod::Closed)]
        method: WignerMethod,
        #[arg(long, default_value_t = 256)]
        nmax: usize,
        /// Largest accepted closed-vs-integral difference for --method compare.
        #[arg(long, default_value_t = 1e-6)]
        tol: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Position density |psi(x, t)|^2 over a time window.
    Evolve {
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        j: usize,
        #[arg(long, help = COMPLEX_HELP, default_value = "2", allow_hyphen_values = true)]
        z: String,
        /// "xmin,xmax,nx".
        #[arg(long, default_value = "-12,12,2048", allow_hyphen_values = true)]
        xgrid: String,
        /// End of the time window; one full period 2*pi when omitted.
        #[arg(long)]
        tmax: Option<f64>,
        #[arg(long, default_value_t = 65)]
        nt: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Run verification suites; exit status 0 only if every check passes.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 256)]
        nmax: usize,
        /// Replace the default eigenvalue set of the state checks.
        #[arg(long, help = COMPLEX_HELP, allow_hyphen_values = true)]
        alpha: Option<String>,
        /// "qmin,qmax,pmin,pmax,nq,np" for the Wigner suite.
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum WignerMethod {
    Closed,
    Numeric,
    Compare,
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("MCSKIT_THREADS") {
        let n: usize = v.trim().parse().with_context(|| format!("MCSKIT_THREADS={v:?} is not a count"))?;
        if n == 0 {
            bail!("MCSKIT_THREADS must be at least 1");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = configure_threads().and_then(|_| run(cli.command));
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

/// Returns whether every requested check passed.
fn run(command: Command) -> Result<bool> {
    match command {
        Command::Spectrum { k, levels, output } => spectrum(k, levels, &output),
        Command::Uncertainty { k, j, amax, na, nmax, output } => uncertainty(k, j, amax, na, nmax, &output),
        Command::Wigner { k, j, z, grid, method, nmax, tol, output } => {
            let z = parse_complex(&z).context("--z")?;
            let grid = parse_grid(&grid)?;
            wigner(k, j, z, &grid, method, nmax, tol, &output)
        }
        Command::Evolve { k, j, z, xgrid, tmax, nt, output } => {
            let z = parse_complex(&z).context("--z")?;
            evolve(k, j, z, parse_x_grid(&xgrid)?, tmax, nt, &output)
        }
        Command::Verify { suite, nmax, alpha, grid } => {
            let mut config = VerifyConfig { n_max: nmax, ..VerifyConfig::default() };
            if let Some(a) = alpha {
                config.alphas = vec![parse_complex(&a).context("--alpha")?];
            }
            if let Some(g) = grid {
                config.grid = parse_grid(&g)?;
            }
            if nmax == 0 {
                bail!("--nmax must be positive");
            }
            let checks = verify::run(suite, &config);
            for c in &checks {
                println!("{c}");
            }
            let failed = checks.iter().filter(|c| !c.passed()).count();
            println!("{} checks, {} failed", checks.len(), failed);
            Ok(failed == 0)
        }
    }
}

fn spectrum(k: usize, levels: usize, output: &OutputArgs) -> Result<bool> {
    let spec = LadderSpectrum::new(k, levels)?;
    let mut t = Table::new(&["ladder", "index", "n", "energy[hbar*omega]"]);
    t.echo("command", "spectrum").echo("k", k).echo("levels", levels);
    for (j, ladder) in spec.ladders().iter().enumerate() {
        for (i, e) in ladder.iter().enumerate() {
            t.push(vec![j as f64, i as f64, (k * i + j) as f64, *e]);
        }
    }
    t.emit(output.format, output.out.as_deref())?;
    Ok(true)
}

fn uncertainty(k: usize, j: Option<usize>, amax: f64, na: usize, nmax: usize, output: &OutputArgs) -> Result<bool> {
    if !(amax >= 0.0) || !amax.is_finite() || na < 2 {
        bail!("--amax must be finite and non-negative and --na at least 2");
    }
    let js: Vec<usize> = match j {
        Some(j) => vec![j],
        None => (0..k).collect(),
    };
    for &j in &js {
        McsLabel::new(k, j, C64::new(0.0, 0.0))?;
    }
    let closed = k <= 3;
    let mut cols = vec!["alpha", "j", "uncertainty_product", "mean_energy[hbar*omega]", "geometric_phase[rad]"];
    if closed {
        cols.extend(["uncertainty_product_closed", "geometric_phase_closed[rad]"]);
    }
    let mut t = Table::new(&cols);
    t.echo("command", "uncertainty").echo("k", k).echo("j", format!("{js:?}")).echo("amax", amax).echo("na", na).echo("nmax", nmax);
    for &j in &js {
        for a in linspace(0.0, amax, na) {
            let label = McsLabel::new(k, j, C64::new(a, 0.0))?;
            let m = moments_with(&label, nmax)?;
            let mut row = vec![a, j as f64, m.uncertainty_product, m.mean_h, geometric_phase(&label)?];
            if closed {
                row.push(moments_closed(&label)?.uncertainty_product);
                row.push(geometric_phase_closed(&label)?);
            }
            t.push(row);
        }
    }
    t.emit(output.format, output.out.as_deref())?;
    Ok(true)
}

fn field_numeric(k: usize, j: usize, z: C64, grid: &PhaseGrid, nmax: usize) -> Result<WignerField> {
    let label = McsLabel::new(k, j, z.powu(k as u32))?;
    let psi = FockWavefunction::new(&build_mcs(&label, nmax)?);
    let w = wigner_numeric(&psi, grid)?;
    eprintln!("imaginary residue: {:e}", w.imag_residue);
    Ok(w.field)
}

#[allow(clippy::too_many_arguments)]
fn wigner(
    k: usize,
    j: usize,
    z: C64,
    grid: &PhaseGrid,
    method: WignerMethod,
    nmax: usize,
    tol: f64,
    output: &OutputArgs,
) -> Result<bool> {
    McsLabel::new(k, j, z)?;
    let mut t;
    let mut ok = true;
    let summary_field;
    match method {
        WignerMethod::Closed | WignerMethod::Numeric => {
            let field = if method == WignerMethod::Closed {
                wigner_closed(k, j, z, grid)?
            } else {
                field_numeric(k, j, z, grid, nmax)?
            };
            t = Table::new(&["q", "p", "W"]);
            for ((i, jj), w) in field.values.indexed_iter() {
                t.push(vec![grid.q_values()[i], grid.p_values()[jj], *w]);
            }
            summary_field = field;
        }
        WignerMethod::Compare => {
            let closed = wigner_closed(k, j, z, grid)?;
            let numeric = field_numeric(k, j, z, grid, nmax)?;
            let diff = closed.sup_diff(&numeric);
            eprintln!("sup |closed - integral| = {diff:e} (tolerance {tol:e})");
            ok = diff <= tol;
            t = Table::new(&["q", "p", "W_closed", "W_integral", "difference"]);
            let (qs, ps) = (grid.q_values(), grid.p_values());
            for ((i, jj), w) in closed.values.indexed_iter() {
                let n = numeric.values[[i, jj]];
                t.push(vec![qs[i], ps[jj], *w, n, w - n]);
            }
            summary_field = numeric;
        }
    }
    eprintln!(
        "min {:e}, max {:e}, integral {:.12}, negativity volume {:e}",
        summary_field.min(),
        summary_field.max(),
        summary_field.total(),
        negativity_volume(&summary_field)
    );
    let g = grid;
    t.echo("command", "wigner")
        .echo("k", k)
        .echo("j", j)
        .echo("z", format!("{},{}", z.re, z.im))
        .echo("grid", format!("{},{},{},{},{},{}", g.q_min, g.q_max, g.p_min, g.p_max, g.n_q, g.n_p))
        .echo("method", format!("{method:?}").to_lowercase());
    if method != WignerMethod::Closed {
        t.echo("nmax", nmax);
    }
    t.emit(output.format, output.out.as_deref())?;
    Ok(ok)
}

fn evolve(
    k: usize,
    j: usize,
    z: C64,
    (x_min, x_max, nx): (f64, f64, usize),
    tmax: Option<f64>,
    nt: usize,
    output: &OutputArgs,
) -> Result<bool> {
    let tmax = tmax.unwrap_or(2.0 * std::f64::consts::PI);
    if !tmax.is_finite() || tmax < 0.0 || nt < 1 {
        bail!("--tmax must be finite and non-negative and --nt at least 1");
    }
    McsLabel::new(k, j, z)?;
    let xs = linspace(x_min, x_max, nx);
    let ts = linspace(0.0, tmax, nt);
    let movie = density_movie(k, j, z, &xs, &ts)?;
    let mut t = Table::new(&["t", "x", "density"]);
    t.echo("command", "evolve")
        .echo("k", k)
        .echo("j", j)
        .echo("z", format!("{},{}", z.re, z.im))
        .echo("xgrid", format!("{x_min},{x_max},{nx}"))
        .echo("tmax", tmax)
        .echo("nt", nt);
    let mut worst_norm = 0.0f64;
    for (row, &time) in movie.iter().zip(&ts) {
        worst_norm = worst_norm.max((trapezoid(&xs, row) - 1.0).abs());
        for (x, d) in xs.iter().zip(row) {
            t.push(vec![time, *x, *d]);
        }
    }
    eprintln!("largest |row norm - 1|: {worst_norm:e}");
    t.emit(output.format, output.out.as_deref())?;
    Ok(true)
}
