use serde::Serialize;

use crate::error::{Error, Result};

use super::PiecewiseDensity1D;

/// Grid estimate of `sup_ε ε^{−α} ω(ε)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BesovSeminorm {
    pub value: f64,
    /// Scale at which the maximum was attained.
    pub eps_at_max: f64,
    /// The maximum sat strictly at the smallest scale on the given grid and
    /// on two successive downward extensions of it, growing by at least
    /// [`GROWTH`] per extension.
    pub diverging: bool,
}

/// Relative growth of the maximum per one-decade extension required before
/// the seminorm is flagged as diverging. Bounded seminorms approached from
/// below (the tent density, say) keep their maximum at the smallest scale
/// but gain almost nothing per decade.
pub const GROWTH: f64 = 0.01;

/// Minimum number of scales in an `ε` grid.
pub const MIN_GRID: usize = 16;

/// `max_ε ε^{−α} ω(ρ, ε)` over a log-spaced grid.
pub fn besov_seminorm(
    rho: &PiecewiseDensity1D,
    alpha: f64,
    eps_grid: &[f64],
) -> Result<BesovSeminorm> {
    besov_seminorm_with(|e| rho.omega(e), alpha, eps_grid)
}

/// [`besov_seminorm`] for any modulus `ω`.
pub fn besov_seminorm_with(
    omega: impl Fn(f64) -> f64,
    alpha: f64,
    eps_grid: &[f64],
) -> Result<BesovSeminorm> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "alpha must lie in (0, 1], got {alpha}"
        )));
    }
    if eps_grid.len() < MIN_GRID {
        return Err(Error::InsufficientPoints {
            got: eps_grid.len(),
            need: MIN_GRID,
        });
    }
    let mut grid: Vec<f64> = eps_grid.to_vec();
    if grid.iter().any(|&e| !(e > 0.0)) {
        return Err(Error::InvalidArgument("eps grid must be positive".into()));
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    let ratio = grid[1] / grid[0];

    let ratio_at = |e: f64| omega(e) / e.powf(alpha);
    let mut vals: Vec<f64> = grid.iter().map(|&e| ratio_at(e)).collect();
    let (imax, value) = argmax(&vals);
    let base = BesovSeminorm {
        value,
        eps_at_max: grid[imax],
        diverging: false,
    };

    // Extend the grid one decade further down at a time at the same spacing.
    let mut floor = grid[0];
    let mut prev_max = f64::NAN;
    for refinement in 0..3 {
        if refinement > 0 {
            let target = floor / 10.0;
            let mut e = grid[0];
            while e > target * (1.0 + 1e-12) {
                e /= ratio;
                grid.insert(0, e);
                vals.insert(0, ratio_at(e));
            }
            floor = grid[0];
        }
        let rest = vals[1..].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if !(vals[0] > rest * (1.0 + 1e-9)) {
            return Ok(base);
        }
        if refinement > 0 && !(vals[0] > prev_max * (1.0 + GROWTH)) {
            return Ok(base);
        }
        prev_max = vals[0];
    }
    Ok(BesovSeminorm {
        diverging: true,
        ..base
    })
}

fn argmax(v: &[f64]) -> (usize, f64) {
    v.iter().copied().enumerate().fold(
        (0, f64::NEG_INFINITY),
        |acc, (i, x)| if x > acc.1 { (i, x) } else { acc },
    )
}

/// `n` log-spaced points from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|k| (a + (b - a) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_and_tent() {
        let grid = log_grid(1e-4, 0.5, 24);
        let u = PiecewiseDensity1D::uniform(0.0, 1.0).unwrap();
        let b = besov_seminorm(&u, 1.0, &grid).unwrap();
        assert!((b.value - 2.0).abs() < 1e-12 && !b.diverging);
        let t = PiecewiseDensity1D::tent(0.0, 2.0).unwrap();
        let b = besov_seminorm(&t, 1.0, &grid).unwrap();
        assert!((b.value - 2.0).abs() < 1e-3 && !b.diverging);
    }

    #[test]
    fn inverse_sqrt_density() {
        // Cell averages of 1/(2√s) on dyadic cells [2^{-k-1}, 2^{-k}].
        let k = 60;
        let mut breaks: Vec<f64> = (0..=k).rev().map(|j| 0.5f64.powi(j)).collect();
        breaks.insert(0, 0.0);
        let vals: Vec<f64> = breaks
            .windows(2)
            .map(|w| (w[1].sqrt() - w[0].sqrt()) / (w[1] - w[0]))
            .collect();
        let rho = PiecewiseDensity1D::step(breaks, &vals).unwrap();
        let grid = log_grid(1e-4, 0.5, 24);
        let half = besov_seminorm(&rho, 0.5, &grid).unwrap();
        assert!(!half.diverging && half.value <= 2.0 + 1e-9 && half.value > 1.9);
        assert!(besov_seminorm(&rho, 1.0, &grid).unwrap().diverging);
    }

    #[test]
    fn short_grid_rejected() {
        let u = PiecewiseDensity1D::uniform(0.0, 1.0).unwrap();
        assert!(matches!(
            besov_seminorm(&u, 1.0, &log_grid(0.01, 0.1, 8)),
            Err(Error::InsufficientPoints { .. })
        ));
    }
}
