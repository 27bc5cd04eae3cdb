//! Sublevel sets `{|f| ≤ ε}`: exact one-dimensional measures, Monte Carlo
//! estimates in higher dimension, divided differences, quantile point
//! selection and small-ball ratios.

mod cw;
mod divided;
mod quantile;

pub use cw::{cw_ratio, default_t_grid, l2_norm, CwRatios};
pub use divided::{divided_diff, DividedDiffCert};
pub use quantile::{quantile_points, QuantileSelection};

use serde::Serialize;

use crate::density1d::PiecewiseDensity1D;
use crate::error::{Error, Result};
use crate::multimeasure::SampleableMeasureND;
use crate::poly::{distinct_roots, Polynomial, Polynomial1D};

/// Measure estimate with its standard error (zero when exact).
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Estimate {
    pub value: f64,
    pub stderr: f64,
}

impl Estimate {
    pub fn exact(value: f64) -> Self {
        Self { value, stderr: 0.0 }
    }
}

fn check_eps(eps: f64) -> Result<()> {
    if eps > 0.0 && eps.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "ε must be positive and finite, got {eps}"
        )))
    }
}

/// Points of `[a, b]` where `|f| − ε` may change sign, including `a` and `b`.
fn sublevel_cuts(f: &Polynomial1D, eps: f64, a: f64, b: f64) -> Vec<f64> {
    let mut pts = vec![a, b];
    for c in [-eps, eps] {
        let g = f - &Polynomial1D::constant(c);
        pts.extend(distinct_roots(&g, a, b));
    }
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

/// Exact `ρ(|f| ≤ ε)`.
pub fn sublevel_measure_1d(rho: &PiecewiseDensity1D, f: &Polynomial1D, eps: f64) -> Result<f64> {
    check_eps(eps)?;
    let mut total = 0.0;
    for w in rho.breaks().windows(2) {
        for p in sublevel_cuts(f, eps, w[0], w[1]).windows(2) {
            if f.eval(0.5 * (p[0] + p[1])).abs() <= eps {
                total += rho.mass_on(p[0], p[1]);
            }
        }
    }
    Ok(total)
}

/// `μ(|f| ≤ ε)` by the indicator mean over `count` draws.
pub fn sublevel_measure_mc(
    mu: &SampleableMeasureND,
    f: &Polynomial,
    eps: f64,
    count: usize,
    seed: u64,
) -> Result<Estimate> {
    check_eps(eps)?;
    let values = crate::pushforward::sample_values(mu, f, count, seed)?;
    let hits = values.iter().filter(|v| v.abs() <= eps).count();
    let p = hits as f64 / count as f64;
    Ok(Estimate {
        value: p,
        stderr: (p * (1.0 - p) / count as f64).sqrt(),
    })
}

/// `μ(|f| ≤ ε)`: exact for one-dimensional products, Monte Carlo otherwise.
pub fn sublevel_measure(
    mu: &SampleableMeasureND,
    f: &Polynomial,
    eps: f64,
    count: usize,
    seed: u64,
) -> Result<Estimate> {
    if f.dim() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            got: f.dim(),
        });
    }
    match mu.factors() {
        Some([rho]) => Ok(Estimate::exact(sublevel_measure_1d(
            rho,
            &f.to_univariate()?,
            eps,
        )?)),
        _ => sublevel_measure_mc(mu, f, eps, count, seed),
    }
}

/// `8ek‖ρ‖∞ε^{1/k}`, the sublevel bound for phases with `f^{(k)} ≥ 1`.
pub fn sublevel_bound(rho_sup: f64, k: u32, eps: f64) -> f64 {
    8.0 * std::f64::consts::E * k as f64 * rho_sup * eps.powf(1.0 / k as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_examples() {
        let u = PiecewiseDensity1D::uniform(0.0, 1.0).unwrap();
        let t = Polynomial1D::identity();
        assert!((sublevel_measure_1d(&u, &t, 0.3).unwrap() - 0.3).abs() < 1e-15);
        let half_sq = Polynomial1D::monomial(0.5, 2);
        for eps in [1e-4, 0.01, 0.3, 0.5, 2.0] {
            let m = sublevel_measure_1d(&u, &half_sq, eps).unwrap();
            assert!((m - (2.0 * eps).sqrt().min(1.0)).abs() < 1e-14);
            assert!(m <= sublevel_bound(1.0, 2, eps));
        }
        assert!(sublevel_measure_1d(&u, &t, 0.0).is_err());
    }

    #[test]
    fn two_bands() {
        // |t² − ¼| ≤ 0.05 on U[-1,1]: two bands around ±½.
        let u = PiecewiseDensity1D::uniform(-1.0, 1.0).unwrap();
        let f = Polynomial1D::new(vec![-0.25, 0.0, 1.0]);
        let m = sublevel_measure_1d(&u, &f, 0.05).unwrap();
        assert!((m - (0.3f64.sqrt() - 0.2f64.sqrt())).abs() < 1e-14);
    }

    #[test]
    fn monte_carlo_coordinate() {
        let mu = SampleableMeasureND::unit_cube(3);
        let f: Polynomial = "x1".parse::<Polynomial>().unwrap().with_dim(3).unwrap();
        let e = sublevel_measure(&mu, &f, 0.1, 100_000, 4).unwrap();
        assert!((e.value - 0.2).abs() <= 3.0 * e.stderr);
    }
}
