use serde::Serialize;

use crate::error::{Error, Result};

use super::{PiecewiseDensity1D, MASS_TOL};

/// One uniform component `weight · U[a, b]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MixtureComponent {
    pub a: f64,
    pub b: f64,
    pub weight: f64,
}

/// Convex mixture of uniform densities.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MixtureDecomposition {
    pub components: Vec<MixtureComponent>,
}

impl MixtureDecomposition {
    /// `Σ weight · 2/(b − a)`, the BV seminorm of the mixture when the
    /// components are nested level sets.
    pub fn tv(&self) -> f64 {
        self.components
            .iter()
            .map(|c| c.weight * 2.0 / (c.b - c.a))
            .sum()
    }

    pub fn total_weight(&self) -> f64 {
        self.components.iter().map(|c| c.weight).sum()
    }

    /// The density `Σ weight / (b − a) · 1_{[a,b]}` as a step function.
    pub fn reconstruct(&self) -> Result<PiecewiseDensity1D> {
        if self.components.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut breaks: Vec<f64> = self.components.iter().flat_map(|c| [c.a, c.b]).collect();
        breaks.sort_by(f64::total_cmp);
        breaks.dedup();
        let values: Vec<f64> = breaks
            .windows(2)
            .map(|w| {
                let mid = 0.5 * (w[0] + w[1]);
                self.components
                    .iter()
                    .filter(|c| c.a <= mid && mid < c.b)
                    .map(|c| c.weight / (c.b - c.a))
                    .sum()
            })
            .collect();
        PiecewiseDensity1D::step(breaks, &values)
    }
}

/// Layer-cake decomposition of a piecewise-constant probability density:
/// for each level band `(h_{i−1}, h_i]` and each connected component
/// `[a, b]` of `{ρ ≥ h_i}`, the component `U[a, b]` with weight
/// `(b − a)(h_i − h_{i−1})`.
pub fn mixture_decompose(rho: &PiecewiseDensity1D) -> Result<MixtureDecomposition> {
    if !rho.is_piecewise_constant() {
        return Err(Error::NotPiecewiseConstant);
    }
    let breaks = rho.breaks();
    let values: Vec<f64> = rho.pieces().iter().map(|p| p.coeff(0)).collect();
    if let Some(i) = values.iter().position(|&v| v < 0.0) {
        return Err(Error::NegativeDensity {
            a: breaks[i],
            b: breaks[i + 1],
        });
    }
    let mass = rho.mass();
    if (mass - 1.0).abs() > MASS_TOL {
        return Err(Error::Unnormalized { mass });
    }
    let mut levels: Vec<f64> = values.iter().copied().filter(|&v| v > 0.0).collect();
    levels.sort_by(f64::total_cmp);
    levels.dedup();
    let mut components = Vec::new();
    let mut below = 0.0;
    for &level in &levels {
        let band = level - below;
        let mut i = 0;
        while i < values.len() {
            if values[i] < level {
                i += 1;
                continue;
            }
            let start = i;
            while i < values.len() && values[i] >= level {
                i += 1;
            }
            let (a, b) = (breaks[start], breaks[i]);
            components.push(MixtureComponent {
                a,
                b,
                weight: (b - a) * band,
            });
        }
        below = level;
    }
    Ok(MixtureDecomposition { components })
}
