use serde::Serialize;

use crate::density1d::PiecewiseDensity1D;
use crate::error::{Error, Result};
use crate::multimeasure::{mean_stderr, SampleableMeasureND};
use crate::poly::{distinct_roots, Polynomial, Polynomial1D};
use crate::quad::integrate16;

/// `(f − m)/s` with `m = ∫f dμ` and `s = ∫|f − m| dμ`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NormalizedPhase {
    pub phase: Polynomial,
    pub mean: f64,
    pub abs_mean: f64,
    /// Standard error of `abs_mean` (zero when exact).
    pub abs_mean_stderr: f64,
}

/// Exact `∫|g| ρ`, splitting every piece at the roots of `g`.
pub fn abs_moment_1d(rho: &PiecewiseDensity1D, g: &Polynomial1D) -> f64 {
    rho.breaks()
        .windows(2)
        .zip(rho.pieces())
        .map(|(w, p)| {
            let mut pts = vec![w[0]];
            pts.extend(distinct_roots(g, w[0], w[1]));
            pts.push(w[1]);
            let prod = p * g;
            pts.windows(2)
                .map(|s| prod.integral(s[0], s[1]).abs())
                .sum::<f64>()
        })
        .sum()
}

/// Relative tolerance of the nested two-dimensional quadrature.
const NESTED_TOL: f64 = 1e-11;

/// `∫|f| dμ` for a product of two factors: exact along the second
/// coordinate, adaptive Gauss–Legendre with halving error along the first.
fn abs_moment_2d(factors: &[PiecewiseDensity1D], f: &Polynomial) -> f64 {
    let parts = f.split_variable(1);
    let inner = |x: f64| -> f64 {
        let coeffs: Vec<f64> = parts.iter().map(|p| p.eval_unchecked(&[x, 0.0])).collect();
        abs_moment_1d(&factors[1], &Polynomial1D::new(coeffs)) * factors[0].eval(x)
    };
    let mut total = 0.0;
    for w in factors[0].breaks().windows(2) {
        let mut stack = vec![(w[0], w[1], 0u32)];
        while let Some((a, b, depth)) = stack.pop() {
            let m = 0.5 * (a + b);
            let whole = integrate16(a, b, inner);
            let halves = integrate16(a, m, inner) + integrate16(m, b, inner);
            if (whole - halves).abs() <= NESTED_TOL * (b - a) || depth >= 40 {
                total += halves;
            } else {
                stack.push((a, m, depth + 1));
                stack.push((m, b, depth + 1));
            }
        }
    }
    total
}

/// Normalize `f` so that `∫f dμ = 0` and `∫|f| dμ = 1`. The mean is exact
/// for products; the absolute mean is exact in one dimension, nested
/// quadrature for two-factor products and Monte Carlo with `count` draws
/// otherwise.
pub fn normalize_phase(
    mu: &SampleableMeasureND,
    f: &Polynomial,
    count: usize,
    seed: u64,
) -> Result<NormalizedPhase> {
    if f.dim() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            got: f.dim(),
        });
    }
    if f.degree() == 0 {
        return Err(Error::ConstantPhase);
    }
    let (mean, draws) = match mu.factors() {
        Some(_) => (
            f.expectation_with(|k, j| mu.moment(k, j).expect("product")),
            None,
        ),
        None => {
            let v = crate::pushforward::sample_values(mu, f, count, seed)?;
            (mean_stderr(&v).0, Some(v))
        }
    };
    let centered = f.add_constant(-mean);
    let (abs_mean, abs_mean_stderr) = match (mu.factors(), draws) {
        (Some([rho]), _) => (abs_moment_1d(rho, &centered.to_univariate()?), 0.0),
        (Some(fs), _) if fs.len() == 2 => (abs_moment_2d(fs, &centered), 0.0),
        (_, Some(v)) => {
            let a: Vec<f64> = v.iter().map(|x| (x - mean).abs()).collect();
            mean_stderr(&a)
        }
        (_, None) => {
            let v = crate::pushforward::sample_values(mu, &centered, count, seed)?;
            let a: Vec<f64> = v.iter().map(|x| x.abs()).collect();
            mean_stderr(&a)
        }
    };
    if !(abs_mean > 1e-300) {
        return Err(Error::VanishingNorm);
    }
    Ok(NormalizedPhase {
        phase: centered.scale(1.0 / abs_mean),
        mean,
        abs_mean,
        abs_mean_stderr,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q1() -> SampleableMeasureND {
        SampleableMeasureND::unit_cube(1)
    }

    #[test]
    fn coordinate() {
        let n = normalize_phase(&q1(), &"x1".parse().unwrap(), 0, 0).unwrap();
        assert_eq!(n.mean, 0.0);
        assert!((n.abs_mean - 0.25).abs() < 1e-15);
        assert!((n.phase.coeff(&[1]) - 4.0).abs() < 1e-14);
        assert_eq!(
            normalize_phase(&q1(), &Polynomial::constant(1, 3.0), 0, 0).unwrap_err(),
            Error::ConstantPhase
        );
    }

    #[test]
    fn square() {
        // ∫_{-1/2}^{1/2} |x² − 1/12| dx = 2/(9·√12) ... closed form below.
        let n = normalize_phase(&q1(), &"x1^2".parse().unwrap(), 0, 0).unwrap();
        assert!((n.mean - 1.0 / 12.0).abs() < 1e-16);
        let r = (1.0f64 / 12.0).sqrt();
        let g = |x: f64| x * x * x / 3.0 - x / 12.0;
        let exact = 2.0 * (-(g(r) - g(0.0)) + (g(0.5) - g(r)));
        assert!((n.abs_mean - exact).abs() < 1e-15);
    }

    #[test]
    fn two_dimensional_product() {
        // |x1 + x2| on Q²: the tent has ∫|s|(1 − |s|) ds = 1/3.
        let n = normalize_phase(
            &SampleableMeasureND::unit_cube(2),
            &"x1 + x2".parse().unwrap(),
            0,
            0,
        )
        .unwrap();
        assert!((n.abs_mean - 1.0 / 3.0).abs() < 1e-10);
        let m = normalize_phase(
            &SampleableMeasureND::unit_cube(3),
            &"x1 + x2"
                .parse::<Polynomial>()
                .unwrap()
                .with_dim(3)
                .unwrap(),
            200_000,
            2,
        )
        .unwrap();
        assert!((m.abs_mean - 1.0 / 3.0).abs() < 4.0 * m.abs_mean_stderr);
    }
}
