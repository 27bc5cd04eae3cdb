use serde::Serialize;

use crate::error::{Error, Result};
use crate::poly::Polynomial1D;

/// Relative gap below which two nodes count as coincident.
const MIN_GAP: f64 = 1e-10;

/// Nodes `a₀ < … < a_k` with weights `c_m = k! / Π_{j≠m}(a_m − a_j)`, so
/// that `Σ c_m p(a_m)` is `k!` times the degree-`k` coefficient of `p` for
/// every `p` of degree at most `k`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DividedDiffCert {
    pub points: Vec<f64>,
    pub coeffs: Vec<f64>,
}

impl DividedDiffCert {
    pub fn order(&self) -> usize {
        self.points.len() - 1
    }

    pub fn apply(&self, p: &Polynomial1D) -> f64 {
        self.points
            .iter()
            .zip(&self.coeffs)
            .map(|(&a, &c)| c * p.eval(a))
            .sum()
    }

    pub fn apply_fn(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.points
            .iter()
            .zip(&self.coeffs)
            .map(|(&a, &c)| c * f(a))
            .sum()
    }
}

pub fn divided_diff(points: &[f64]) -> Result<DividedDiffCert> {
    if points.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut a = points.to_vec();
    a.sort_by(f64::total_cmp);
    let span = a[a.len() - 1] - a[0];
    let limit = MIN_GAP * span;
    if let Some(gap) = a.windows(2).map(|w| w[1] - w[0]).reduce(f64::min) {
        if gap <= limit || gap == 0.0 {
            return Err(Error::CoincidentPoints { gap, limit });
        }
    }
    let k = a.len() - 1;
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    let coeffs = (0..=k)
        .map(|m| {
            let prod: f64 = (0..=k).filter(|&j| j != m).map(|j| a[m] - a[j]).product();
            fact / prod
        })
        .collect();
    Ok(DividedDiffCert { points: a, coeffs })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_points() {
        let c = divided_diff(&[2.0, 0.0, 1.0]).unwrap();
        assert_eq!(c.points, vec![0.0, 1.0, 2.0]);
        assert_eq!(c.coeffs, vec![1.0, -2.0, 1.0]);
        assert_eq!(c.apply(&Polynomial1D::monomial(1.0, 2)), 2.0);
        assert_eq!(c.apply(&Polynomial1D::identity()), 0.0);
    }

    #[test]
    fn coincident_rejected() {
        assert!(matches!(
            divided_diff(&[0.0, 1.0, 1.0 + 1e-12]),
            Err(Error::CoincidentPoints { .. })
        ));
        assert_eq!(divided_diff(&[3.0]).unwrap().coeffs, vec![1.0]);
    }
}
