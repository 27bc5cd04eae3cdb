use serde::Serialize;

use crate::density1d::PiecewiseDensity1D;
use crate::error::{Error, Result};

/// Quantile nodes of `ρ` restricted to `E` and their separation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QuantileSelection {
    pub points: Vec<f64>,
    /// `μ(E)`.
    pub mass: f64,
    /// `min_m ‖ρ‖∞^k Π_{j≠m} |a_j − a_m|`.
    pub min_product: f64,
    /// `(μ(E)/4e)^k`.
    pub threshold: f64,
}

impl QuantileSelection {
    pub fn separated(&self) -> bool {
        self.min_product >= self.threshold
    }
}

/// Sort and merge overlapping intervals; rejects reversed or non-finite ones.
fn normalize_set(e: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    let mut v = Vec::with_capacity(e.len());
    for &(a, b) in e {
        if !(a < b) || !a.is_finite() || !b.is_finite() {
            return Err(Error::DegenerateInterval { a, b });
        }
        v.push((a, b));
    }
    v.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut out: Vec<(f64, f64)> = Vec::with_capacity(v.len());
    for (a, b) in v {
        match out.last_mut() {
            Some(last) if a <= last.1 => last.1 = last.1.max(b),
            _ => out.push((a, b)),
        }
    }
    Ok(out)
}

/// Points `a_j` with `μ((−∞, a_j] ∩ E) = (j/k)μ(E)`, `j = 0..k`. Each is the
/// smallest such point (for `j = 0`, the left end of the support of `μ|_E`),
/// located by bisection on the exact restricted distribution function.
pub fn quantile_points(
    rho: &PiecewiseDensity1D,
    e: &[(f64, f64)],
    k: usize,
) -> Result<QuantileSelection> {
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let set = normalize_set(e)?;
    if set.is_empty() {
        return Err(Error::NullSet);
    }
    let f_e = |x: f64| -> f64 {
        set.iter()
            .filter(|&&(a, _)| a < x)
            .map(|&(a, b)| rho.mass_on(a, b.min(x)))
            .sum()
    };
    let mass = f_e(f64::INFINITY);
    if !(mass > 0.0) {
        return Err(Error::NullSet);
    }
    let (lo, hi) = (set[0].0, set[set.len() - 1].1);
    let first_positive = |x: f64| f_e(x) > 0.0;
    let points: Vec<f64> = (0..=k)
        .map(|j| {
            let target = j as f64 / k as f64 * mass;
            if j == 0 {
                bisect(lo, hi, first_positive)
            } else {
                bisect(lo, hi, |x| f_e(x) >= target)
            }
        })
        .collect();
    let sup = rho.sup_norm();
    let min_product = (0..=k)
        .map(|m| {
            (0..=k)
                .filter(|&j| j != m)
                .map(|j| sup * (points[j] - points[m]).abs())
                .product::<f64>()
        })
        .fold(f64::INFINITY, f64::min);
    let threshold = (mass / (4.0 * std::f64::consts::E)).powi(k as i32);
    Ok(QuantileSelection {
        points,
        mass,
        min_product,
        threshold,
    })
}

/// Smallest `x ∈ [lo, hi]` with `pred(x)`, for a monotone predicate true at `hi`.
fn bisect(mut lo: f64, mut hi: f64, pred: impl Fn(f64) -> bool) -> f64 {
    if pred(lo) {
        return lo;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> PiecewiseDensity1D {
        PiecewiseDensity1D::uniform(0.0, 1.0).unwrap()
    }

    #[test]
    fn uniform_halves() {
        let q = quantile_points(&unit(), &[(0.0, 1.0)], 2).unwrap();
        assert!(
            (q.points[0]).abs() < 1e-15
                && (q.points[1] - 0.5).abs() < 1e-15
                && (q.points[2] - 1.0).abs() < 1e-15
        );
        assert!((q.min_product - 0.25).abs() < 1e-14);
        assert!(
            q.separated()
                && (q.threshold - (1.0 / (4.0 * std::f64::consts::E)).powi(2)).abs() < 1e-16
        );
    }

    #[test]
    fn split_set() {
        let q = quantile_points(&unit(), &[(0.75, 1.0), (0.0, 0.25)], 1).unwrap();
        assert!((q.mass - 0.5).abs() < 1e-15);
        assert!(q.points[0].abs() < 1e-15 && (q.points[1] - 1.0).abs() < 1e-15);
        let q = quantile_points(&unit(), &[(0.2, 0.7)], 1).unwrap();
        assert!((q.points[0] - 0.2).abs() < 1e-15 && (q.points[1] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn null_set() {
        assert_eq!(
            quantile_points(&unit(), &[(2.0, 3.0)], 2).unwrap_err(),
            Error::NullSet
        );
    }
}
