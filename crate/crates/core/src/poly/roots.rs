//! Real-root isolation for univariate polynomials.
//!
//! Roots are bracketed by the critical points of the polynomial (found
//! recursively from the derivative), so each bracket holds at most one simple
//! root, which is then refined by safeguarded Newton/bisection. Multiplicities
//! come from Yun's square-free decomposition.

use crate::error::{Error, Result};

use super::Polynomial1D;

/// A real root together with its multiplicity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub value: f64,
    pub multiplicity: u32,
}

/// Bound on `|p(t)|` rounding error relative to `Σ|c_k||t|^k`.
const ZERO_TOL: f64 = 1e-13;

fn magnitude(p: &Polynomial1D, t: f64) -> f64 {
    p.coeffs()
        .iter()
        .rev()
        .fold(0.0, |acc, &c| acc * t.abs() + c.abs())
}

/// Solve `p(t) = 0` on `[lo, hi]` where `p(lo)` and `p(hi)` have opposite
/// signs. Newton steps are taken only while they stay inside the bracket and
/// converge fast enough; otherwise the step falls back to bisection.
pub fn refine_bracket(p: &Polynomial1D, mut lo: f64, mut hi: f64) -> f64 {
    let flo = p.eval(lo);
    if flo == 0.0 {
        return lo;
    }
    if p.eval(hi) == 0.0 {
        return hi;
    }
    // Orient so that p(lo) < 0.
    if flo > 0.0 {
        std::mem::swap(&mut lo, &mut hi);
    }
    let mut t = 0.5 * (lo + hi);
    let mut dx_old = (hi - lo).abs();
    let mut dx = dx_old;
    let (mut v, mut dv) = p.eval_with_derivative(t);
    for _ in 0..300 {
        let newton_out = ((t - hi) * dv - v) * ((t - lo) * dv - v) > 0.0;
        if newton_out || (2.0 * v).abs() > (dx_old * dv).abs() {
            dx_old = dx;
            dx = 0.5 * (hi - lo);
            t = lo + dx;
            if t == lo {
                return t;
            }
        } else {
            dx_old = dx;
            dx = v / dv;
            let prev = t;
            t -= dx;
            if t == prev {
                return t;
            }
        }
        (v, dv) = p.eval_with_derivative(t);
        if v == 0.0 {
            return t;
        }
        if v < 0.0 {
            lo = t;
        } else {
            hi = t;
        }
        let width = (hi - lo).abs();
        if width <= f64::EPSILON * t.abs().max(f64::MIN_POSITIVE) * 2.0 {
            return t;
        }
    }
    t
}

/// Distinct real roots of `p` in the closed interval `[a, b]`, sorted.
///
/// Roots of even multiplicity are caught at critical points where the value
/// vanishes to rounding precision.
pub fn distinct_roots(p: &Polynomial1D, a: f64, b: f64) -> Vec<f64> {
    if p.is_constant() || b < a {
        return Vec::new();
    }
    if p.degree() == 1 {
        let r = -p.coeff(0) / p.coeff(1);
        return if r >= a && r <= b {
            vec![r]
        } else {
            Vec::new()
        };
    }
    let mut pts = Vec::with_capacity(p.degree() + 1);
    pts.push(a);
    for c in distinct_roots(&p.derivative(), a, b) {
        if c > a && c < b {
            pts.push(c);
        }
    }
    pts.push(b);

    let is_zero = |t: f64, v: f64| v == 0.0 || v.abs() <= ZERO_TOL * magnitude(p, t);
    let mut out: Vec<f64> = Vec::new();
    let push = |r: f64, out: &mut Vec<f64>| {
        if out.last().is_none_or(|&last| r > last) {
            out.push(r);
        }
    };
    let vals: Vec<f64> = pts.iter().map(|&t| p.eval(t)).collect();
    for i in 0..pts.len() {
        let interior_critical = i > 0 && i + 1 < pts.len();
        let (t, v) = (pts[i], vals[i]);
        let endpoint = i == 0 || i + 1 == pts.len();
        if v == 0.0 || ((interior_critical || endpoint) && is_zero(t, v)) {
            push(t, &mut out);
            continue;
        }
        if i + 1 < pts.len() {
            let (u, w) = (pts[i + 1], vals[i + 1]);
            let next_zero = w == 0.0 || is_zero(u, w);
            if !next_zero && (v < 0.0) != (w < 0.0) {
                push(refine_bracket(p, t, u), &mut out);
            }
        }
    }
    out
}

/// All real roots of `p` in `[a, b]`, sorted, with multiplicities.
pub fn real_roots(p: &Polynomial1D, a: f64, b: f64) -> Result<Vec<Root>> {
    if p.is_zero() {
        return Err(Error::ZeroPolynomial);
    }
    if b < a {
        return Err(Error::DegenerateInterval { a, b });
    }
    let mut roots: Vec<Root> = Vec::new();
    for (factor, multiplicity) in p.square_free_decomposition() {
        for value in distinct_roots(&factor, a, b) {
            roots.push(Root {
                value,
                multiplicity,
            });
        }
    }
    roots.sort_by(|x, y| x.value.total_cmp(&y.value));
    let tol = 1e-10 * a.abs().max(b.abs()).max(1.0);
    let mut merged: Vec<Root> = Vec::with_capacity(roots.len());
    for r in roots {
        match merged.last_mut() {
            Some(last) if (r.value - last.value).abs() <= tol => {
                last.multiplicity += r.multiplicity;
            }
            _ => merged.push(r),
        }
    }
    // A high-multiplicity root perturbed by rounding in the coefficients
    // escapes the gcd tolerance; the vanishing order of the Taylor expansion
    // at the root still sees it.
    let mut left = p.degree() as u32
        - merged
            .iter()
            .map(|r| r.multiplicity)
            .sum::<u32>()
            .min(p.degree() as u32);
    for r in &mut merged {
        let order = taylor_order(p, r.value);
        if order > r.multiplicity {
            let extra = (order - r.multiplicity).min(left);
            r.multiplicity += extra;
            left -= extra;
        }
    }
    Ok(merged)
}

/// Relative size below which a Taylor coefficient counts as vanishing.
const TAYLOR_TOL: f64 = 1e-10;

/// Index of the first Taylor coefficient of `p` at `r` that is not
/// negligible against the largest one.
fn taylor_order(p: &Polynomial1D, r: f64) -> u32 {
    let q = p.shift(r);
    let cut = TAYLOR_TOL * q.max_abs_coeff();
    q.coeffs().iter().position(|c| c.abs() > cut).unwrap_or(0) as u32
}

impl Polynomial1D {
    /// See [`real_roots`].
    pub fn real_roots(&self, a: f64, b: f64) -> Result<Vec<Root>> {
        real_roots(self, a, b)
    }

    /// Points where `p` may change sign inside `(a, b)`, sorted.
    pub fn sign_change_points(&self, a: f64, b: f64) -> Vec<f64> {
        distinct_roots(self, a, b)
            .into_iter()
            .filter(|&r| r > a && r < b)
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn values(rs: &[Root]) -> Vec<f64> {
        rs.iter().map(|r| r.value).collect()
    }

    #[test]
    fn unit_circle_roots() {
        let p = Polynomial1D::new(vec![-1.0, 0.0, 1.0]);
        let rs = p.real_roots(-2.0, 2.0).unwrap();
        assert_eq!(values(&rs), vec![-1.0, 1.0]);
        assert!(rs.iter().all(|r| r.multiplicity == 1));
    }

    #[test]
    fn no_real_roots() {
        let p = Polynomial1D::new(vec![1.0, 0.0, 1.0]);
        assert!(p.real_roots(-2.0, 2.0).unwrap().is_empty());
    }

    #[test]
    fn clustered_sextuple_root() {
        let mut p = Polynomial1D::constant(-0.5);
        for _ in 0..6 {
            p = &p * &Polynomial1D::new(vec![3.0, 1.0]);
        }
        let p = &p * &Polynomial1D::new(vec![1.2, 0.0, 1.0]);
        let rs = p.real_roots(-4.0, 4.0).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].multiplicity, 6);
        assert!((rs[0].value + 3.0).abs() < 1e-6);
    }

    #[test]
    fn triple_root() {
        let p = Polynomial1D::new(vec![-0.125, 0.75, -1.5, 1.0]);
        let rs = p.real_roots(0.0, 1.0).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].multiplicity, 3);
        assert!((rs[0].value - 0.5).abs() <= 1e-12);
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(
            Polynomial1D::zero().real_roots(0.0, 1.0),
            Err(Error::ZeroPolynomial)
        );
    }

    #[test]
    fn roots_at_endpoints_and_clustered() {
        // t (t - 1)(t - 1.001)
        let p = &(&Polynomial1D::identity() * &Polynomial1D::new(vec![-1.0, 1.0]))
            * &Polynomial1D::new(vec![-1.001, 1.0]);
        let rs = values(&p.real_roots(0.0, 2.0).unwrap());
        assert_eq!(rs.len(), 3);
        assert_eq!(rs[0], 0.0);
        assert!((rs[1] - 1.0).abs() < 1e-12 && (rs[2] - 1.001).abs() < 1e-12);
    }

    #[test]
    fn wilkinson_like_degree_six() {
        let mut p = Polynomial1D::constant(1.0);
        for k in 1..=6 {
            p = &p * &Polynomial1D::new(vec![-(k as f64) / 7.0, 1.0]);
        }
        let rs = values(&p.real_roots(0.0, 1.0).unwrap());
        assert_eq!(rs.len(), 6);
        for (k, r) in rs.iter().enumerate() {
            assert!((r - (k + 1) as f64 / 7.0).abs() < 1e-11);
        }
    }
}
