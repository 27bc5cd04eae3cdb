use serde::Serialize;

use crate::error::{Error, Result};

/// Minimum number of points a decay fit may use.
pub const MIN_FIT_POINTS: usize = 8;

/// Least-squares fit of `log|I| = log C + slope · log t`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DecayFit {
    pub slope: f64,
    pub log_constant: f64,
    pub window: [f64; 2],
    pub r2: f64,
    pub points: usize,
    /// `sup_t |I(t)| t^{1/d}` over the fitted points, when `d` is supplied.
    pub sup_scaled: Option<f64>,
}

impl DecayFit {
    pub fn constant(&self) -> f64 {
        self.log_constant.exp()
    }
}

/// Fit on the pairs inside `window` whose value is at least twice
/// `noise_floor` (pass 0 for exact data).
pub fn decay_fit(
    pairs: &[(f64, f64)],
    window: Option<[f64; 2]>,
    noise_floor: f64,
    d: Option<f64>,
) -> Result<DecayFit> {
    let [lo, hi] = window.unwrap_or([f64::NEG_INFINITY, f64::INFINITY]);
    let in_window: Vec<(f64, f64)> = pairs
        .iter()
        .copied()
        .filter(|&(t, _)| t >= lo && t <= hi && t > 0.0)
        .collect();
    let kept: Vec<(f64, f64)> = in_window
        .iter()
        .copied()
        .filter(|&(_, v)| v > 0.0 && v >= 2.0 * noise_floor)
        .collect();
    if kept.is_empty() && !in_window.is_empty() {
        return Err(Error::BelowNoiseFloor { floor: noise_floor });
    }
    if kept.len() < MIN_FIT_POINTS {
        return Err(Error::InsufficientPoints {
            got: kept.len(),
            need: MIN_FIT_POINTS,
        });
    }
    let xs: Vec<f64> = kept.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = kept.iter().map(|p| p.1.ln()).collect();
    let (slope, intercept, r2) = linear_fit(&xs, &ys);
    let sup_scaled = d.map(|d| {
        kept.iter()
            .map(|&(t, v)| v * t.powf(1.0 / d))
            .fold(0.0, f64::max)
    });
    let t_min = kept.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let t_max = kept.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    Ok(DecayFit {
        slope,
        log_constant: intercept,
        window: [t_min, t_max],
        r2,
        points: kept.len(),
        sup_scaled,
    })
}

/// Ordinary least squares `y ≈ a + b x`; returns `(b, a, R²)`.
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let syy: f64 = ys.iter().map(|y| (y - my) * (y - my)).sum();
    let b = sxy / sxx;
    let a = my - b * mx;
    let r2 = if syy > 0.0 {
        sxy * sxy / (sxx * syy)
    } else {
        1.0
    };
    (b, a, r2)
}
