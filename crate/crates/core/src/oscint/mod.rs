//! Oscillatory integrals `I(t) = ∫ e^{itf} dμ` with polynomial phase:
//! adaptive panels in one dimension, tensor quadrature on products of at
//! most three factors, Monte Carlo otherwise. Also phase normalization and
//! power-law decay fits.

mod exact;
mod fit;
mod normalize;
mod tensor;

pub use exact::{osc_exact_1d, PANEL_BUDGET};
pub use fit::{decay_fit, linear_fit, DecayFit, MIN_FIT_POINTS};
pub use normalize::{abs_moment_1d, normalize_phase, NormalizedPhase};
pub use tensor::osc_tensor;

use std::f64::consts::PI;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::multimeasure::SampleableMeasureND;
use crate::poly::Polynomial;

/// Draws used when a Monte Carlo fallback gets no explicit count.
pub const DEFAULT_MC_COUNT: usize = 1_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OscMethod {
    Auto,
    Exact,
    Tensor,
    Mc,
}

impl FromStr for OscMethod {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "auto" => Ok(Self::Auto),
            "exact" => Ok(Self::Exact),
            "tensor" => Ok(Self::Tensor),
            "mc" => Ok(Self::Mc),
            _ => Err(Error::Parse(format!("unknown method {s:?}"))),
        }
    }
}

/// `I(t)` with an error estimate and the method actually used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct OscValue {
    pub t: f64,
    pub value: Complex64,
    pub abs_error_estimate: f64,
    pub method: OscMethod,
}

/// Monte Carlo parameters; `count = 0` means [`DEFAULT_MC_COUNT`].
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct McOptions {
    pub count: usize,
    pub seed: u64,
}

impl McOptions {
    fn count(&self) -> usize {
        if self.count == 0 {
            DEFAULT_MC_COUNT
        } else {
            self.count
        }
    }
}

fn mc_mean(values: &[f64], t: f64) -> Complex64 {
    let mut s = Complex64::new(0.0, 0.0);
    for &v in values {
        let (sin, cos) = (t * v).sin_cos();
        s += Complex64::new(cos, sin);
    }
    s / values.len() as f64
}

fn mc_values(mu: &SampleableMeasureND, f: &Polynomial, mc: McOptions) -> Result<Vec<f64>> {
    crate::pushforward::sample_values(mu, f, mc.count(), mc.seed)
}

fn mc_value(values: &[f64], t: f64) -> OscValue {
    OscValue {
        t,
        value: mc_mean(values, t),
        abs_error_estimate: 1.0 / (values.len() as f64).sqrt(),
        method: OscMethod::Mc,
    }
}

pub fn osc_integral(
    mu: &SampleableMeasureND,
    f: &Polynomial,
    t: f64,
    method: OscMethod,
    mc: McOptions,
) -> Result<OscValue> {
    if f.dim() != mu.dim() {
        return Err(Error::DimensionMismatch {
            expected: mu.dim(),
            got: f.dim(),
        });
    }
    let n = mu.dim();
    let factors = mu.factors();
    let resolved = match method {
        OscMethod::Auto => match factors {
            Some([_]) => OscMethod::Exact,
            Some(_) if n <= 3 => OscMethod::Tensor,
            _ => OscMethod::Mc,
        },
        OscMethod::Exact if !matches!(factors, Some([_])) => {
            return Err(Error::Unsupported(
                "exact method needs a one-dimensional density".into(),
            ));
        }
        OscMethod::Tensor if n > 3 => return Err(Error::TensorDimension(n)),
        OscMethod::Tensor if factors.is_none() => {
            return Err(Error::Unsupported(
                "tensor method needs a product measure".into(),
            ));
        }
        m => m,
    };
    let attempt = match resolved {
        OscMethod::Exact => {
            let rho = &factors.expect("checked")[0];
            osc_exact_1d(rho, &f.to_univariate()?, t, 2.0 * PI, PANEL_BUDGET)
        }
        OscMethod::Tensor => osc_tensor(factors.expect("checked"), f, t, PANEL_BUDGET),
        _ => None,
    };
    match attempt {
        Some((value, err, _)) => Ok(OscValue {
            t,
            value,
            abs_error_estimate: err,
            method: resolved,
        }),
        None => {
            if resolved != OscMethod::Mc {
                log::warn!("panel budget exceeded at t = {t}; falling back to Monte Carlo");
            }
            Ok(mc_value(&mc_values(mu, f, mc)?, t))
        }
    }
}

/// `I(t)` over a grid of `t`. Monte Carlo sweeps reuse one set of draws for
/// every `t`; other methods evaluate each `t` independently in parallel.
pub fn osc_sweep(
    mu: &SampleableMeasureND,
    f: &Polynomial,
    ts: &[f64],
    method: OscMethod,
    mc: McOptions,
) -> Result<Vec<OscValue>> {
    let plain_mc = method == OscMethod::Mc
        || (method == OscMethod::Auto && (mu.factors().is_none() || mu.dim() > 3));
    if plain_mc {
        if f.dim() != mu.dim() {
            return Err(Error::DimensionMismatch {
                expected: mu.dim(),
                got: f.dim(),
            });
        }
        let values = mc_values(mu, f, mc)?;
        return Ok(ts.par_iter().map(|&t| mc_value(&values, t)).collect());
    }
    ts.par_iter()
        .map(|&t| osc_integral(mu, f, t, method, mc))
        .collect()
}

/// Log-spaced grid of `points` values in `[lo, hi]`.
pub fn t_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    crate::density1d::log_grid(lo, hi, points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::density1d::PiecewiseDensity1D;
    use crate::poly::Polynomial1D;

    fn unit_interval() -> SampleableMeasureND {
        SampleableMeasureND::product(vec![PiecewiseDensity1D::uniform(0.0, 1.0).unwrap()]).unwrap()
    }

    const MC: McOptions = McOptions {
        count: 10_000,
        seed: 1,
    };

    #[test]
    fn linear_phase_closed_form() {
        let v = osc_integral(
            &unit_interval(),
            &"x1".parse().unwrap(),
            PI,
            OscMethod::Auto,
            MC,
        )
        .unwrap();
        assert!((v.value.norm() - 2.0 / PI).abs() < 1e-9);
        assert_eq!(v.method, OscMethod::Exact);
    }

    #[test]
    fn zero_frequency() {
        for mu in [
            unit_interval(),
            SampleableMeasureND::unit_cube(2),
            SampleableMeasureND::unit_cube(5),
        ] {
            let f = Polynomial::variable(mu.dim(), 0);
            let v = osc_integral(&mu, &f, 0.0, OscMethod::Auto, MC).unwrap();
            assert!((v.value - Complex64::new(1.0, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn quadratic_against_refined_reference() {
        let rho = PiecewiseDensity1D::uniform(0.0, 1.0).unwrap();
        let g = Polynomial1D::monomial(1.0, 2);
        let v = osc_integral(
            &unit_interval(),
            &"x1^2".parse().unwrap(),
            100.0,
            OscMethod::Exact,
            MC,
        )
        .unwrap();
        let (r, _, _) = osc_exact_1d(&rho, &g, 100.0, PI / 2.0, PANEL_BUDGET).unwrap();
        assert!((v.value - r).norm() < 1e-8);
    }

    #[test]
    fn conjugate_symmetry() {
        let f: Polynomial = "x1^2 + x1*x2".parse().unwrap();
        let cube = SampleableMeasureND::unit_cube(2);
        for method in [OscMethod::Tensor, OscMethod::Mc] {
            let a = osc_integral(&cube, &f, 37.0, method, MC).unwrap();
            let b = osc_integral(&cube, &f, -37.0, method, MC).unwrap();
            if method == OscMethod::Mc {
                assert_eq!(a.value.conj(), b.value);
            } else {
                assert!((a.value.conj() - b.value).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn tensor_matches_product_formula() {
        // x1 + x2 on Q²: I(t) = (sin(t/2)/(t/2))².
        let f: Polynomial = "x1 + x2".parse().unwrap();
        let t = 23.0;
        let v = osc_integral(
            &SampleableMeasureND::unit_cube(2),
            &f,
            t,
            OscMethod::Tensor,
            MC,
        )
        .unwrap();
        let s = (t / 2.0).sin() / (t / 2.0);
        assert!((v.value - Complex64::new(s * s, 0.0)).norm() < 1e-10);
        let e = osc_integral(
            &SampleableMeasureND::unit_cube(4),
            &"x1".parse::<Polynomial>().unwrap().with_dim(4).unwrap(),
            t,
            OscMethod::Tensor,
            MC,
        );
        assert_eq!(e.unwrap_err(), Error::TensorDimension(4));
    }
}
