//! Parsers for complex numbers and grids given on the command line.

use anyhow::{bail, Context, Result};
use num_complex::Complex64 as C64;

use mcskit::phase_space::PhaseGrid;

/// `"re,im"`, polar `"r@theta_degrees"`, or a bare real.
pub fn parse_complex(s: &str) -> Result<C64> {
    let s = s.trim();
    let value = if let Some((r, deg)) = s.split_once('@') {
        let r: f64 = r.trim().parse().with_context(|| format!("modulus in {s:?}"))?;
        let deg: f64 = deg.trim().parse().with_context(|| format!("angle in {s:?}"))?;
        C64::from_polar(r, deg.to_radians())
    } else if let Some((re, im)) = s.split_once(',') {
        let re: f64 = re.trim().parse().with_context(|| format!("real part in {s:?}"))?;
        let im: f64 = im.trim().parse().with_context(|| format!("imaginary part in {s:?}"))?;
        C64::new(re, im)
    } else {
        C64::new(s.parse().with_context(|| format!("complex number {s:?}"))?, 0.0)
    };
    if !value.is_finite() {
        bail!("complex number {s:?} is not finite");
    }
    Ok(value)
}

fn numbers(s: &str, count: usize, what: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    if parts.len() != count {
        bail!("{what} needs {count} comma-separated values, got {}", parts.len());
    }
    parts.iter().map(|p| p.parse::<f64>().with_context(|| format!("{what}: {p:?} is not a number"))).collect()
}

fn count(v: f64, what: &str) -> Result<usize> {
    if v.fract() != 0.0 || v < 0.0 || v > 1e7 {
        bail!("{what}: {v} is not a valid sample count");
    }
    Ok(v as usize)
}

/// `"qmin,qmax,pmin,pmax,nq,np"`.
pub fn parse_grid(s: &str) -> Result<PhaseGrid> {
    let v = numbers(s, 6, "--grid")?;
    Ok(PhaseGrid::new(v[0], v[1], v[2], v[3], count(v[4], "--grid nq")?, count(v[5], "--grid np")?)?)
}

/// `"xmin,xmax,nx"`.
pub fn parse_x_grid(s: &str) -> Result<(f64, f64, usize)> {
    let v = numbers(s, 3, "--xgrid")?;
    let n = count(v[2], "--xgrid nx")?;
    if !(v[0] < v[1]) || !v[0].is_finite() || !v[1].is_finite() || n < 2 {
        bail!("--xgrid needs finite xmin < xmax and nx >= 2");
    }
    Ok((v[0], v[1], n))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        assert_eq!(parse_complex("1,2").unwrap(), C64::new(1.0, 2.0));
        assert_eq!(parse_complex(" -0.5 ").unwrap(), C64::new(-0.5, 0.0));
        let z = parse_complex("2@90").unwrap();
        assert!((z - C64::new(0.0, 2.0)).norm() < 1e-15);
        assert!(parse_complex("1,x").is_err());
        assert!(parse_complex("nan").is_err());
    }

    #[test]
    fn grids() {
        let g = parse_grid("-8,8,-8,8,257,257").unwrap();
        assert_eq!(g, PhaseGrid::default());
        assert!(parse_grid("-8,8,-8,8,257").is_err());
        assert!(parse_grid("-8,8,-8,8,2.5,3").is_err());
        assert!(parse_grid("8,-8,-8,8,3,3").is_err());
        assert_eq!(parse_x_grid("-1,1,3").unwrap(), (-1.0, 1.0, 3));
        assert!(parse_x_grid("1,1,3").is_err());
    }
}
