use crate::density1d::PiecewiseDensity1D;
use crate::error::{Error, Result};
use crate::poly::{distinct_roots, refine_bracket, Polynomial1D};

/// Width of the critical-value exclusion zone, in grid steps.
pub const EXCLUSION_STEPS: f64 = 2.0;

/// Piece of the support on which both `ρ` and `g` are smooth and `g` is
/// strictly monotone.
#[derive(Clone, Debug)]
struct Segment {
    a: f64,
    b: f64,
    ga: f64,
    gb: f64,
    piece: usize,
}

/// Exact distribution of `g(X)` for `X ~ ρ`, decomposed into monotone
/// segments of `g` over the pieces of `ρ`.
#[derive(Clone, Debug)]
pub struct ExactPushforward {
    rho: PiecewiseDensity1D,
    g: Polynomial1D,
    dg: Polynomial1D,
    segments: Vec<Segment>,
    critical_values: Vec<f64>,
}

impl ExactPushforward {
    pub fn new(rho: &PiecewiseDensity1D, g: &Polynomial1D) -> Result<Self> {
        if g.is_constant() {
            return Err(Error::ConstantPhase);
        }
        let dg = g.derivative();
        let (lo, hi) = rho.support();
        let crit: Vec<f64> = if dg.is_constant() {
            Vec::new()
        } else {
            distinct_roots(&dg, lo, hi)
        };
        let mut segments = Vec::new();
        for (i, w) in rho.breaks().windows(2).enumerate() {
            let mut pts = vec![w[0]];
            pts.extend(crit.iter().copied().filter(|&c| c > w[0] && c < w[1]));
            pts.push(w[1]);
            for p in pts.windows(2) {
                segments.push(Segment {
                    a: p[0],
                    b: p[1],
                    ga: g.eval(p[0]),
                    gb: g.eval(p[1]),
                    piece: i,
                });
            }
        }
        let mut critical_values: Vec<f64> = crit.iter().map(|&c| g.eval(c)).collect();
        critical_values.sort_by(f64::total_cmp);
        critical_values.dedup();
        Ok(Self {
            rho: rho.clone(),
            g: g.clone(),
            dg,
            segments,
            critical_values,
        })
    }

    pub fn critical_values(&self) -> &[f64] {
        &self.critical_values
    }

    /// `[min g, max g]` over the support.
    pub fn range(&self) -> (f64, f64) {
        self.segments
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), s| {
                (lo.min(s.ga.min(s.gb)), hi.max(s.ga.max(s.gb)))
            })
    }

    pub fn mass(&self) -> f64 {
        self.rho.mass()
    }

    fn solve(&self, seg: &Segment, s: f64) -> f64 {
        let h = &self.g - &Polynomial1D::constant(s);
        refine_bracket(&h, seg.a, seg.b)
    }

    /// `F(s) = ρ({t : g(t) ≤ s})`.
    pub fn cdf(&self, s: f64) -> f64 {
        let mut total = 0.0;
        for seg in &self.segments {
            let (lo, hi) = (seg.ga.min(seg.gb), seg.ga.max(seg.gb));
            if s >= hi {
                total += self.rho.mass_on(seg.a, seg.b);
            } else if s > lo {
                let t = self.solve(seg, s);
                total += if seg.ga < seg.gb {
                    self.rho.mass_on(seg.a, t)
                } else {
                    self.rho.mass_on(t, seg.b)
                };
            }
        }
        total
    }

    /// `Σ_{g(t)=s} ρ(t)/|g′(t)|`, without checking for critical values.
    pub fn density_unchecked(&self, s: f64) -> f64 {
        let mut total = 0.0;
        for seg in &self.segments {
            let (lo, hi) = (seg.ga.min(seg.gb), seg.ga.max(seg.gb));
            if s > lo && s < hi {
                let t = self.solve(seg, s);
                let p = &self.rho.pieces()[seg.piece];
                total += p.eval(t) / self.dg.eval(t).abs();
            }
        }
        total
    }

    fn nearest_critical(&self, s: f64) -> Option<f64> {
        self.critical_values
            .iter()
            .copied()
            .min_by(|a, b| (a - s).abs().total_cmp(&(b - s).abs()))
    }

    /// Pointwise density on a grid, `None` within `EXCLUSION_STEPS` grid steps
    /// of a critical value.
    pub fn density_masked(&self, s_grid: &[f64]) -> Vec<Option<f64>> {
        let step = grid_step(s_grid);
        s_grid
            .iter()
            .map(|&s| match self.nearest_critical(s) {
                Some(c) if (s - c).abs() <= EXCLUSION_STEPS * step => None,
                _ => Some(self.density_unchecked(s)),
            })
            .collect()
    }

    /// Pointwise density on a grid; errors if any grid point falls inside a
    /// critical-value exclusion zone.
    pub fn density(&self, s_grid: &[f64]) -> Result<Vec<f64>> {
        let step = grid_step(s_grid);
        s_grid
            .iter()
            .map(|&s| match self.nearest_critical(s) {
                Some(c) if (s - c).abs() <= EXCLUSION_STEPS * step => {
                    Err(Error::CriticalValue { s, critical: c })
                }
                _ => Ok(self.density_unchecked(s)),
            })
            .collect()
    }
}

/// Smallest positive spacing between consecutive grid points.
fn grid_step(s_grid: &[f64]) -> f64 {
    let step = s_grid
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .filter(|d| *d > 0.0)
        .fold(f64::INFINITY, f64::min);
    if step.is_finite() {
        step
    } else {
        0.0
    }
}

/// `ρ({t : g(t) ≤ s})`.
pub fn pushforward_cdf_1d(rho: &PiecewiseDensity1D, g: &Polynomial1D, s: f64) -> Result<f64> {
    Ok(ExactPushforward::new(rho, g)?.cdf(s))
}

/// Root-sum density of `g(X)` at each grid point.
pub fn pushforward_density_1d(
    rho: &PiecewiseDensity1D,
    g: &Polynomial1D,
    s_grid: &[f64],
) -> Result<Vec<f64>> {
    ExactPushforward::new(rho, g)?.density(s_grid)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unif(a: f64, b: f64) -> PiecewiseDensity1D {
        PiecewiseDensity1D::uniform(a, b).unwrap()
    }

    #[test]
    fn cdf_examples() {
        let t = Polynomial1D::identity();
        assert!((pushforward_cdf_1d(&unif(0.0, 1.0), &t, 0.3).unwrap() - 0.3).abs() < 1e-15);
        let sq = Polynomial1D::monomial(1.0, 2);
        for s in [0.01, 0.25, 0.7] {
            let f = pushforward_cdf_1d(&unif(0.0, 1.0), &sq, s).unwrap();
            assert!((f - s.sqrt()).abs() < 1e-14);
        }
        let cubic = Polynomial1D::new(vec![0.0, -3.0, 0.0, 1.0]);
        assert!((pushforward_cdf_1d(&unif(-2.0, 2.0), &cubic, 0.0).unwrap() - 0.5).abs() < 1e-14);
        assert_eq!(
            pushforward_cdf_1d(&unif(0.0, 1.0), &Polynomial1D::constant(2.0), 0.0).unwrap_err(),
            Error::ConstantPhase
        );
    }

    #[test]
    fn density_examples() {
        let sq = Polynomial1D::monomial(1.0, 2);
        let grid: Vec<f64> = (3..10).map(|k| k as f64 / 10.0).collect();
        let d = pushforward_density_1d(&unif(0.0, 1.0), &sq, &grid).unwrap();
        for (s, v) in grid.iter().zip(&d) {
            assert!((v - 0.5 / s.sqrt()).abs() < 1e-12);
        }
        let lin = Polynomial1D::new(vec![0.0, 2.0]);
        let d = pushforward_density_1d(&unif(0.0, 1.0), &lin, &[0.5, 1.0, 1.5]).unwrap();
        assert!(d.iter().all(|v| (v - 0.5).abs() < 1e-15));
    }

    #[test]
    fn critical_values_excluded() {
        // t² on [-1, 1] has critical value 0.
        let sq = Polynomial1D::monomial(1.0, 2);
        let grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
        let err = pushforward_density_1d(&unif(-1.0, 1.0), &sq, &grid).unwrap_err();
        assert!(matches!(err, Error::CriticalValue { .. }));
        let p = ExactPushforward::new(&unif(-1.0, 1.0), &sq).unwrap();
        let masked = p.density_masked(&grid);
        assert!(masked[..2].iter().all(Option::is_none));
        assert!((masked[4].unwrap() - 0.5 / 0.4f64.sqrt()).abs() < 1e-12);
    }
}
