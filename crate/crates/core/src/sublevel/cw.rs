use serde::Serialize;

use crate::density1d::log_grid;
use crate::error::{Error, Result};
use crate::multimeasure::{mean_stderr, SampleableMeasureND};
use crate::poly::Polynomial;

use super::sublevel_measure_1d;

/// Small-ball ratios `‖f‖_{L²(μ)}^{1/d} μ(|f| ≤ t) / t^{1/d}` over a grid of `t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CwRatios {
    pub degree: u32,
    pub l2: f64,
    /// Zero when `l2` is exact.
    pub l2_stderr: f64,
    pub t: Vec<f64>,
    pub ratio: Vec<f64>,
    /// Standard error of each ratio from the sublevel estimate alone.
    pub stderr: Vec<f64>,
    pub max: f64,
}

/// 16 log-spaced points in `[1e-4, 1]`.
pub fn default_t_grid() -> Vec<f64> {
    log_grid(1e-4, 1.0, 16)
}

/// `‖f‖_{L²(μ)}`: exact for product measures, otherwise the Monte Carlo
/// mean of `f²` with its standard error (propagated to the root).
pub fn l2_norm(
    mu: &SampleableMeasureND,
    f: &Polynomial,
    count: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    if mu.factors().is_some() {
        let sq = f * f;
        let m = sq.expectation_with(|k, j| mu.moment(k, j).expect("product measure"));
        return Ok((m.max(0.0).sqrt(), 0.0));
    }
    let values = crate::pushforward::sample_values(mu, f, count, seed)?;
    let squares: Vec<f64> = values.iter().map(|v| v * v).collect();
    let (m, se) = mean_stderr(&squares);
    let root = m.max(0.0).sqrt();
    Ok((root, if root > 0.0 { se / (2.0 * root) } else { 0.0 }))
}

/// Ratios on `t_grid`. One-dimensional products use exact sublevel
/// measures; otherwise one set of `count` draws serves every `t`.
pub fn cw_ratio(
    mu: &SampleableMeasureND,
    f: &Polynomial,
    t_grid: &[f64],
    count: usize,
    seed: u64,
) -> Result<CwRatios> {
    if f.dim() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            got: f.dim(),
        });
    }
    if t_grid.is_empty() {
        return Err(Error::EmptyInput);
    }
    let d = f.degree();
    if d == 0 {
        return Err(Error::ConstantPhase);
    }
    let (l2, l2_stderr) = l2_norm(mu, f, count, seed)?;
    if !(l2 > 1e-300) {
        return Err(Error::VanishingNorm);
    }
    let inv_d = 1.0 / d as f64;
    let scale = l2.powf(inv_d);
    let (measures, errs): (Vec<f64>, Vec<f64>) = match mu.factors() {
        Some([rho]) => {
            let g = f.to_univariate()?;
            let m = t_grid
                .iter()
                .map(|&t| sublevel_measure_1d(rho, &g, t))
                .collect::<Result<Vec<f64>>>()?;
            let z = vec![0.0; m.len()];
            (m, z)
        }
        _ => {
            let mut abs: Vec<f64> =
                crate::pushforward::sample_values(mu, f, count, seed.wrapping_add(1))?
                    .into_iter()
                    .map(f64::abs)
                    .collect();
            abs.sort_by(f64::total_cmp);
            let n = count as f64;
            t_grid
                .iter()
                .map(|&t| {
                    let p = abs.partition_point(|&v| v <= t) as f64 / n;
                    (p, (p * (1.0 - p) / n).sqrt())
                })
                .unzip()
        }
    };
    let norm: Vec<f64> = t_grid.iter().map(|&t| scale / t.powf(inv_d)).collect();
    let ratio: Vec<f64> = measures.iter().zip(&norm).map(|(m, c)| m * c).collect();
    let stderr = errs.iter().zip(&norm).map(|(e, c)| e * c).collect();
    let max = ratio.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Ok(CwRatios {
        degree: d,
        l2,
        l2_stderr,
        t: t_grid.to_vec(),
        ratio,
        stderr,
        max,
    })
}
