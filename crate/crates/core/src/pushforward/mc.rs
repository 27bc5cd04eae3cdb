use rayon::prelude::*;

use crate::density1d::{GridMeasure1D, PiecewiseDensity1D};
use crate::error::{Error, Result};
use crate::multimeasure::SampleableMeasureND;
use crate::poly::{Polynomial, Polynomial1D};

use super::{ExactPushforward, Method, PushforwardCdf, PushforwardResult};

/// Default histogram resolution.
pub const DEFAULT_BINS: usize = 512;

/// Minimum draw count for Monte Carlo pushforwards.
pub const MIN_MC_COUNT: usize = 10_000;

/// Fraction of draws clipped from each tail before binning.
pub const TAIL_CLIP: f64 = 1e-6;

/// Exact cell masses of `g(X)`, `X ~ ρ`, on `bins` equal cells spanning the
/// range of `g` over the support.
pub fn pushforward_exact_grid(
    rho: &PiecewiseDensity1D,
    g: &Polynomial1D,
    bins: usize,
) -> Result<PushforwardResult> {
    let exact = ExactPushforward::new(rho, g)?;
    let (lo, hi) = exact.range();
    let h = (hi - lo) / bins.max(1) as f64;
    pushforward_exact_on(exact, lo, h, bins)
}

/// Exact cell masses on the grid `left + jh`, `j < cells`.
pub fn pushforward_exact_on(
    exact: ExactPushforward,
    left: f64,
    h: f64,
    cells: usize,
) -> Result<PushforwardResult> {
    let nodes: Vec<f64> = (0..=cells)
        .into_par_iter()
        .map(|j| exact.cdf(left + j as f64 * h))
        .collect();
    let weights = nodes.windows(2).map(|w| w[1] - w[0]).collect();
    Ok(PushforwardResult {
        grid: GridMeasure1D::new(left, h, weights)?,
        stderr: vec![0.0; cells],
        cdf: PushforwardCdf::Exact(Box::new(exact)),
        method: Method::Exact1d,
        mc_count: None,
        seed: None,
    })
}

/// Values `f(X_i)` for `count` seeded draws.
pub fn sample_values(
    mu: &SampleableMeasureND,
    f: &Polynomial,
    count: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    if f.dim() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            got: f.dim(),
        });
    }
    mu.sample_map(count, seed, |x| f.eval_unchecked(x))
}

/// Histogram of `f(X)` on `bins` equal cells between the `TAIL_CLIP` and
/// `1 − TAIL_CLIP` empirical quantiles, plus the empirical distribution
/// function. Draws outside the clipped range are dropped from the histogram.
pub fn pushforward_mc(
    mu: &SampleableMeasureND,
    f: &Polynomial,
    count: usize,
    bins: usize,
    seed: u64,
) -> Result<PushforwardResult> {
    if count < MIN_MC_COUNT {
        return Err(Error::InvalidArgument(format!(
            "Monte Carlo pushforward needs at least {MIN_MC_COUNT} draws, got {count}"
        )));
    }
    if bins == 0 {
        return Err(Error::InvalidArgument("bins must be positive".into()));
    }
    let mut values = sample_values(mu, f, count, seed)?;
    values.par_sort_unstable_by(f64::total_cmp);
    histogram_from_sorted(values, bins, seed)
}

pub(crate) fn histogram_from_sorted(
    sorted: Vec<f64>,
    bins: usize,
    seed: u64,
) -> Result<PushforwardResult> {
    let count = sorted.len();
    let k = (TAIL_CLIP * count as f64).floor() as usize;
    let (lo, hi) = (sorted[k], sorted[count - 1 - k]);
    if !(hi > lo) {
        return Err(Error::DegenerateRange { min: lo, max: hi });
    }
    let h = (hi - lo) / bins as f64;
    let mut counts = vec![0usize; bins];
    for &v in &sorted[k..count - k] {
        let j = (((v - lo) / h) as usize).min(bins - 1);
        counts[j] += 1;
    }
    let n = count as f64;
    let weights: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
    let stderr = weights
        .iter()
        .map(|&p| (p * (1.0 - p) / n).sqrt() / h)
        .collect();
    Ok(PushforwardResult {
        grid: GridMeasure1D::new(lo, h, weights)?,
        stderr,
        cdf: PushforwardCdf::Empirical(sorted),
        method: Method::Mc,
        mc_count: Some(count),
        seed: Some(seed),
    })
}

/// Number of independent accumulation groups in the conditional estimator.
/// Fixed so the summation order does not depend on the thread count.
const GROUPS: usize = 16;

/// Pushforward of a product measure by Monte Carlo over the first `n − 1`
/// coordinates and exact integration along the last one.
///
/// For each outer draw `x′`, the phase `t ↦ f(x′, t)` is a univariate
/// polynomial and the image of the last factor under it is added to the grid
/// exactly. Affine restrictions of a step density cost O(pieces) through a
/// difference array; other restrictions go through the exact distribution
/// function at the grid nodes inside their range. Mass falling outside the
/// grid is dropped. The per-cell standard error comes from the spread of
/// the group estimates.
pub fn pushforward_conditional(
    mu: &SampleableMeasureND,
    f: &Polynomial,
    count: usize,
    seed: u64,
    left: f64,
    h: f64,
    cells: usize,
) -> Result<PushforwardResult> {
    let factors = mu.factors().ok_or_else(|| {
        Error::Unsupported("conditional pushforward needs a product measure".into())
    })?;
    let n = factors.len();
    if f.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: f.dim(),
        });
    }
    if !(h > 0.0) || cells == 0 {
        return Err(Error::InvalidArgument(
            "grid needs h > 0 and at least one cell".into(),
        ));
    }
    let last = &factors[n - 1];
    let parts = f.split_variable(n - 1);
    if n == 1 {
        let g = f.to_univariate()?;
        return pushforward_exact_on(ExactPushforward::new(last, &g)?, left, h, cells);
    }
    let outer_dims: Vec<usize> = (0..n - 1).collect();
    let outer =
        SampleableMeasureND::product(outer_dims.iter().map(|&k| factors[k].clone()).collect())?;
    let coeff_draws: Vec<Vec<f64>> = outer.sample_map(count, seed, |x| {
        let mut full = x.to_vec();
        full.push(0.0);
        parts.iter().map(|p| p.eval_unchecked(&full)).collect()
    })?;

    let per_group = count.div_ceil(GROUPS);
    let groups: Vec<(Vec<f64>, f64)> = (0..GROUPS)
        .into_par_iter()
        .map(|gi| {
            let start = (gi * per_group).min(count);
            let end = ((gi + 1) * per_group).min(count);
            let mut acc = Accumulator::new(left, h, cells);
            for coeffs in &coeff_draws[start..end] {
                acc.add_restriction(last, &Polynomial1D::new(coeffs.clone()));
            }
            (acc.finish(), (end - start) as f64)
        })
        .collect();

    let total = count as f64;
    let mut weights = vec![0.0; cells];
    for (w, _) in &groups {
        for (acc, v) in weights.iter_mut().zip(w) {
            *acc += v;
        }
    }
    for w in weights.iter_mut() {
        *w /= total;
    }
    // Spread of the per-group means around the pooled mean.
    let stderr: Vec<f64> = (0..cells)
        .map(|j| {
            let var: f64 = groups
                .iter()
                .filter(|(_, m)| *m > 0.0)
                .map(|(w, m)| {
                    let d = w[j] / m - weights[j];
                    d * d
                })
                .sum::<f64>()
                / (GROUPS as f64 * (GROUPS as f64 - 1.0));
            var.sqrt() / h
        })
        .collect();
    let mut cum = Vec::with_capacity(cells + 1);
    cum.push(0.0);
    for w in &weights {
        cum.push(cum[cum.len() - 1] + w);
    }
    Ok(PushforwardResult {
        grid: GridMeasure1D::new(left, h, weights)?,
        stderr,
        cdf: PushforwardCdf::Table { left, h, cum },
        method: Method::Conditional,
        mc_count: Some(count),
        seed: Some(seed),
    })
}

/// Grid accumulator for exact one-dimensional images.
struct Accumulator {
    left: f64,
    h: f64,
    weights: Vec<f64>,
    /// Difference array of per-cell masses for full cells.
    diff: Vec<f64>,
}

impl Accumulator {
    fn new(left: f64, h: f64, cells: usize) -> Self {
        Self {
            left,
            h,
            weights: vec![0.0; cells],
            diff: vec![0.0; cells + 1],
        }
    }

    fn cells(&self) -> usize {
        self.weights.len()
    }

    /// Spread `mass` uniformly over `[lo, hi]`.
    fn add_uniform(&mut self, lo: f64, hi: f64, mass: f64) {
        let right = self.left + self.cells() as f64 * self.h;
        if hi <= lo {
            self.add_point(lo, mass);
            return;
        }
        let dens = mass / (hi - lo);
        let (a, b) = (lo.max(self.left), hi.min(right));
        if b <= a {
            return;
        }
        let last = self.cells() - 1;
        let i0 = (((a - self.left) / self.h) as usize).min(last);
        let i1 = (((b - self.left) / self.h) as usize).min(last);
        if i0 == i1 {
            self.weights[i0] += dens * (b - a);
            return;
        }
        let edge0 = self.left + (i0 + 1) as f64 * self.h;
        let edge1 = self.left + i1 as f64 * self.h;
        self.weights[i0] += dens * (edge0 - a);
        self.weights[i1] += dens * (b - edge1);
        self.diff[i0 + 1] += dens * self.h;
        self.diff[i1] -= dens * self.h;
    }

    fn add_point(&mut self, s: f64, mass: f64) {
        let x = (s - self.left) / self.h;
        if x >= 0.0 && x < self.cells() as f64 {
            self.weights[x as usize] += mass;
        }
    }

    fn add_restriction(&mut self, rho: &PiecewiseDensity1D, g: &Polynomial1D) {
        if g.is_constant() {
            self.add_point(g.coeff(0), rho.mass());
            return;
        }
        if g.degree() == 1 && rho.is_piecewise_constant() {
            for (i, w) in rho.breaks().windows(2).enumerate() {
                let mass = rho.pieces()[i].coeff(0) * (w[1] - w[0]);
                let (ga, gb) = (g.eval(w[0]), g.eval(w[1]));
                self.add_uniform(ga.min(gb), ga.max(gb), mass);
            }
            return;
        }
        let exact = ExactPushforward::new(rho, g).expect("non-constant restriction");
        let (lo, hi) = exact.range();
        let last = self.cells();
        let j0 = (((lo - self.left) / self.h).floor().max(0.0) as usize).min(last);
        let j1 = (((hi - self.left) / self.h).ceil().max(0.0) as usize).min(last);
        let mut prev = exact.cdf(self.left + j0 as f64 * self.h);
        for j in j0..j1 {
            let cur = exact.cdf(self.left + (j + 1) as f64 * self.h);
            self.weights[j] += cur - prev;
            prev = cur;
        }
    }

    fn finish(mut self) -> Vec<f64> {
        let mut run = 0.0;
        for j in 0..self.cells() {
            run += self.diff[j];
            self.weights[j] += run;
        }
        self.weights
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_grid_mass_and_shape() {
        let u = PiecewiseDensity1D::uniform(0.0, 1.0).unwrap();
        let r = pushforward_exact_grid(&u, &Polynomial1D::new(vec![0.0, 2.0]), 8).unwrap();
        assert!((r.grid.total() - 1.0).abs() < 1e-12);
        assert!(r.density().iter().all(|d| (d - 0.5).abs() < 1e-12));
    }

    #[test]
    fn mc_histogram_of_sum_is_tent() {
        let mu = SampleableMeasureND::unit_cube(2);
        let f: Polynomial = "x1 + x2".parse().unwrap();
        let r = pushforward_mc(&mu, &f, 200_000, 100, 3).unwrap();
        let tent = PiecewiseDensity1D::tent(-1.0, 1.0).unwrap();
        let l1 = crate::density1d::l1_between(&r.grid.to_density(), &tent);
        assert!(l1 < 0.05, "l1 {l1}");
        assert!((r.cdf.eval(0.0) - 0.5).abs() < 3.0 / (2.0 * (200_000f64).sqrt()));
        assert!(pushforward_mc(&mu, &f, 100, 10, 0).is_err());
    }

    #[test]
    fn degenerate_range() {
        let mu = SampleableMeasureND::unit_cube(2);
        let f = Polynomial::constant(2, 1.0);
        assert!(matches!(
            pushforward_mc(&mu, &f, 10_000, 10, 0),
            Err(Error::DegenerateRange { .. })
        ));
    }

    #[test]
    fn conditional_product_matches_closed_form() {
        // x1 x2 with U[0,1] factors: F(s) = s (1 − ln s).
        let u = PiecewiseDensity1D::uniform(0.0, 1.0).unwrap();
        let mu = SampleableMeasureND::product(vec![u.clone(), u]).unwrap();
        let f: Polynomial = "x1*x2".parse().unwrap();
        let r = pushforward_conditional(&mu, &f, 100_000, 5, 0.0, 1.0 / 256.0, 256).unwrap();
        assert!((r.grid.total() - 1.0).abs() < 1e-12);
        for s in [0.01, 0.1, 0.5] {
            let exact = s * (1.0 - f64::ln(s));
            assert!((r.cdf.eval(s) - exact).abs() < 5e-3, "s {s}");
        }
    }

    #[test]
    fn conditional_quadratic_restriction() {
        // x1 + x2² on Q²: compare against the plain histogram CDF.
        let mu = SampleableMeasureND::unit_cube(2);
        let f: Polynomial = "x1 + x2^2".parse().unwrap();
        let r = pushforward_conditional(&mu, &f, 20_000, 9, -0.5, 1.25 / 128.0, 128).unwrap();
        assert!((r.grid.total() - 1.0).abs() < 1e-9);
        let m = pushforward_mc(&mu, &f, 200_000, 64, 2).unwrap();
        for s in [-0.3, 0.0, 0.25, 0.6] {
            assert!((r.cdf.eval(s) - m.cdf.eval(s)).abs() < 0.01, "s {s}");
        }
    }
}
