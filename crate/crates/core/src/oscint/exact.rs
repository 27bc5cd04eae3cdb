use num_complex::Complex64;

use crate::density1d::PiecewiseDensity1D;
use crate::poly::{distinct_roots, Polynomial1D};
use crate::quad::gl16;

/// Panel budget before the exact routines give up.
pub const PANEL_BUDGET: usize = 200_000;

/// Absolute tolerance on the halving error, spread over the support, unless
/// rounding in the phase is larger.
const TOL: f64 = 1e-13;

/// `∫_a^b p(x) e^{itg(x)} dx` with the 16-point rule.
fn panel(p: &Polynomial1D, g: &Polynomial1D, t: f64, a: f64, b: f64) -> Complex64 {
    let (x, w) = gl16();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut s = Complex64::new(0.0, 0.0);
    for (xi, wi) in x.iter().zip(w) {
        let u = mid + half * xi;
        s += Complex64::from_polar(wi * p.eval(u), t * g.eval(u));
    }
    s * half
}

/// Adaptive integral of `ρ(x)e^{itg(x)}` over the support.
///
/// The support is split at the pieces of `ρ` and at stationary points of
/// `g`, so `g` is monotone on every segment. Segments are bisected until
/// the phase moves by at most `max_phase` across each panel, then further
/// until the 16-point value on the panel agrees with the sum over its two
/// halves. Returns the value, the summed halving differences and the
/// panel count, or `None` past `budget` panels.
pub fn osc_exact_1d(
    rho: &PiecewiseDensity1D,
    g: &Polynomial1D,
    t: f64,
    max_phase: f64,
    budget: usize,
) -> Option<(Complex64, f64, usize)> {
    if t == 0.0 || g.is_constant() {
        let phase = if g.is_constant() { t * g.coeff(0) } else { 0.0 };
        return Some((Complex64::from_polar(rho.mass(), phase), 0.0, 0));
    }
    let dg = g.derivative();
    let (lo, hi) = rho.support();
    let crit = if dg.is_constant() {
        Vec::new()
    } else {
        distinct_roots(&dg, lo, hi)
    };
    let span = hi - lo;
    // Below this the halving difference is rounding in the phase t·g.
    let gmax = crit
        .iter()
        .chain(&[lo, hi])
        .map(|&x| g.eval(x).abs())
        .fold(0.0, f64::max);
    let tol = TOL.max(16.0 * f64::EPSILON * t.abs() * gmax * rho.sup_norm());
    let mut total = Complex64::new(0.0, 0.0);
    let mut err = 0.0;
    let mut panels = 0usize;
    let mut stack: Vec<(f64, f64)> = Vec::new();
    for (i, w) in rho.breaks().windows(2).enumerate() {
        let p = &rho.pieces()[i];
        if p.is_zero() {
            continue;
        }
        let mut pts = vec![w[0]];
        pts.extend(crit.iter().copied().filter(|&c| c > w[0] && c < w[1]));
        pts.push(w[1]);
        stack.extend(pts.windows(2).rev().map(|s| (s[0], s[1])));
        while let Some((a, b)) = stack.pop() {
            let m = 0.5 * (a + b);
            let splittable = m > a && m < b;
            if splittable && t.abs() * (g.eval(b) - g.eval(a)).abs() > max_phase {
                stack.push((m, b));
                stack.push((a, m));
                continue;
            }
            panels += 1;
            if panels > budget {
                return None;
            }
            let whole = panel(p, g, t, a, b);
            if !splittable {
                total += whole;
                continue;
            }
            let halves = panel(p, g, t, a, m) + panel(p, g, t, m, b);
            let diff = (whole - halves).norm();
            if diff <= tol * (b - a) / span {
                total += halves;
                err += diff;
            } else {
                stack.push((m, b));
                stack.push((a, m));
            }
        }
    }
    Some((total, err, panels))
}
