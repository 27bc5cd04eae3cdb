use serde::Serialize;

use crate::density1d::PiecewiseDensity1D;
use crate::error::{Error, Result};

/// Both sides of `‖D_θρ‖_TV = 2|θ| ∫_{θ⊥} sup_t ρ(y + tθ) dy`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct KrugCheck {
    pub tv_lhs: f64,
    pub krug_rhs: f64,
}

impl KrugCheck {
    pub fn relative_gap(&self) -> f64 {
        (self.tv_lhs - self.krug_rhs).abs() / self.krug_rhs.abs().max(f64::MIN_POSITIVE)
    }
}

/// Number of points per axis of the midpoint log-concavity spot check.
const SPOT: usize = 41;

fn log_concave_1d(rho: &PiecewiseDensity1D) -> Result<()> {
    let (a, b) = rho.support();
    let pts: Vec<f64> = (0..SPOT)
        .map(|i| a + (b - a) * (i as f64 + 0.5) / SPOT as f64)
        .collect();
    for &x in &pts {
        for &y in &pts {
            let m = rho.eval(0.5 * (x + y));
            let (fx, fy) = (rho.eval(x), rho.eval(y));
            if m * m < fx * fy * (1.0 - 1e-9) - 1e-300 {
                return Err(Error::NotLogConcave { x, y });
            }
        }
    }
    Ok(())
}

/// One-dimensional check along `θ ≠ 0`: exact BV seminorm against
/// `2|θ|·‖ρ‖∞`.
pub fn krug_check_1d(rho: &PiecewiseDensity1D, theta: f64) -> Result<KrugCheck> {
    if theta == 0.0 || !theta.is_finite() {
        return Err(Error::NonUnitDirection { norm: theta.abs() });
    }
    log_concave_1d(rho)?;
    Ok(KrugCheck {
        tv_lhs: theta.abs() * rho.bv_seminorm(),
        krug_rhs: 2.0 * theta.abs() * rho.sup_norm(),
    })
}

/// Planar density for the grid check.
pub struct PlanarDensity<'a> {
    pub density: &'a (dyn Fn([f64; 2]) -> f64 + Sync),
    /// Radius of a disk around `center` containing the support.
    pub radius: f64,
    pub center: [f64; 2],
}

/// Two-dimensional check on a grid rotated to `θ`: `lines` parallel lines
/// across the support, each sampled at `points` positions. The left side
/// sums absolute increments along each line; the right side takes each
/// line's maximum. Both are integrated over the transverse coordinate by
/// the midpoint rule.
pub fn krug_check_2d(
    rho: &PlanarDensity<'_>,
    theta: [f64; 2],
    lines: usize,
    points: usize,
) -> Result<KrugCheck> {
    let norm = theta[0].hypot(theta[1]);
    if !(norm > 0.0) {
        return Err(Error::NonUnitDirection { norm });
    }
    let u = [theta[0] / norm, theta[1] / norm];
    let v = [-u[1], u[0]];
    let r = rho.radius;
    let at = |s: f64, w: f64| {
        (rho.density)([
            rho.center[0] + s * u[0] + w * v[0],
            rho.center[1] + s * u[1] + w * v[1],
        ])
    };
    // Midpoint log-concavity spot check on a coarse grid of the disk.
    let coarse: Vec<[f64; 2]> = (0..SPOT)
        .flat_map(|i| (0..SPOT).map(move |j| (i, j)))
        .map(|(i, j)| {
            let s = -r + 2.0 * r * (i as f64 + 0.5) / SPOT as f64;
            let w = -r + 2.0 * r * (j as f64 + 0.5) / SPOT as f64;
            [s, w]
        })
        .collect();
    for (k, p) in coarse.iter().enumerate().step_by(7) {
        for q in coarse.iter().skip(k % 13).step_by(11) {
            let m = at(0.5 * (p[0] + q[0]), 0.5 * (p[1] + q[1]));
            let (fp, fq) = (at(p[0], p[1]), at(q[0], q[1]));
            if m * m < fp * fq * (1.0 - 1e-9) - 1e-300 {
                return Err(Error::NotLogConcave { x: p[0], y: p[1] });
            }
        }
    }
    let dw = 2.0 * r / lines as f64;
    let ds = 2.0 * r / (points - 1) as f64;
    let mut tv = 0.0;
    let mut sup = 0.0;
    for j in 0..lines {
        let w = -r + (j as f64 + 0.5) * dw;
        // The line is extended one step past the disk so the density is zero
        // at both ends.
        let mut prev = 0.0;
        let mut line_tv = 0.0;
        let mut line_sup = 0.0_f64;
        for i in 0..points {
            let val = at(-r + i as f64 * ds, w);
            line_tv += (val - prev).abs();
            line_sup = line_sup.max(val);
            prev = val;
        }
        line_tv += prev.abs();
        tv += line_tv * dw;
        sup += line_sup * dw;
    }
    Ok(KrugCheck {
        tv_lhs: norm * tv,
        krug_rhs: 2.0 * norm * sup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_dimensional_examples() {
        let u = PiecewiseDensity1D::uniform(0.0, 1.0).unwrap();
        let k = krug_check_1d(&u, 1.0).unwrap();
        assert_eq!((k.tv_lhs, k.krug_rhs), (2.0, 2.0));
        let t = PiecewiseDensity1D::tent(0.0, 2.0).unwrap();
        let k = krug_check_1d(&t, -1.0).unwrap();
        assert!((k.tv_lhs - 2.0).abs() < 1e-14 && (k.krug_rhs - 2.0).abs() < 1e-14);
    }

    #[test]
    fn bimodal_rejected() {
        let b = PiecewiseDensity1D::step(vec![0.0, 1.0, 2.0, 3.0], &[0.45, 0.1, 0.45]).unwrap();
        assert!(matches!(
            krug_check_1d(&b, 1.0),
            Err(Error::NotLogConcave { .. })
        ));
    }

    #[test]
    fn disk() {
        let disk = |x: [f64; 2]| {
            if x[0] * x[0] + x[1] * x[1] <= 1.0 {
                1.0 / std::f64::consts::PI
            } else {
                0.0
            }
        };
        let p = PlanarDensity {
            density: &disk,
            radius: 1.0,
            center: [0.0, 0.0],
        };
        let k = krug_check_2d(&p, [1.0, 0.0], 2000, 2001).unwrap();
        let exact = 4.0 / std::f64::consts::PI;
        assert!((k.tv_lhs - exact).abs() < 0.01 * exact);
        assert!((k.krug_rhs - exact).abs() < 0.01 * exact);
    }
}
