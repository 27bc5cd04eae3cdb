use num_complex::Complex64;
use rayon::prelude::*;

use crate::density1d::PiecewiseDensity1D;
use crate::poly::Polynomial;
use crate::quad::gl16;

/// Halving tolerance on the tensor value.
const TOL: f64 = 1e-10;

/// Upper bound on `sup |∂_k f|` over a box, from absolute coefficients.
fn partial_bound(f: &Polynomial, k: usize, boxes: &[(f64, f64)]) -> f64 {
    f.terms()
        .filter(|(e, _)| e[k] > 0)
        .map(|(e, c)| {
            let mut v = c.abs() * e[k] as f64;
            for (j, &ej) in e.iter().enumerate() {
                let m = boxes[j].0.abs().max(boxes[j].1.abs());
                let p = if j == k { ej - 1 } else { ej };
                v *= m.powi(p as i32);
            }
            v
        })
        .sum()
}

/// Weighted nodes of one axis: each piece of `ρ` cut into equal panels,
/// `panels` in total (at least one per piece), 16 points per panel.
fn axis_rule(rho: &PiecewiseDensity1D, panels: usize) -> (Vec<f64>, Vec<f64>) {
    let (lo, hi) = rho.support();
    let (gx, gw) = gl16();
    let mut nodes = Vec::new();
    let mut weights = Vec::new();
    for (i, w) in rho.breaks().windows(2).enumerate() {
        let p = &rho.pieces()[i];
        let m = ((panels as f64 * (w[1] - w[0]) / (hi - lo)).ceil() as usize).max(1);
        let step = (w[1] - w[0]) / m as f64;
        for j in 0..m {
            let a = w[0] + j as f64 * step;
            let half = 0.5 * step;
            for (xi, wi) in gx.iter().zip(gw) {
                let u = a + half * (1.0 + xi);
                nodes.push(u);
                weights.push(wi * half * p.eval(u));
            }
        }
    }
    (nodes, weights)
}

fn tensor_value(
    factors: &[PiecewiseDensity1D],
    f: &Polynomial,
    t: f64,
    panels: &[usize],
) -> Complex64 {
    let rules: Vec<(Vec<f64>, Vec<f64>)> = factors
        .iter()
        .zip(panels)
        .map(|(r, &m)| axis_rule(r, m))
        .collect();
    let n = factors.len();
    let (x0, w0) = &rules[0];
    let rows: Vec<Complex64> = x0
        .par_iter()
        .zip(w0)
        .map(|(&a, &wa)| {
            let mut x = vec![0.0; n];
            x[0] = a;
            let mut s = Complex64::new(0.0, 0.0);
            let mut idx = vec![0usize; n];
            let len: Vec<usize> = rules.iter().map(|r| r.0.len()).collect();
            'outer: loop {
                let mut w = wa;
                for k in 1..n {
                    x[k] = rules[k].0[idx[k]];
                    w *= rules[k].1[idx[k]];
                }
                s += Complex64::from_polar(w, t * f.eval_unchecked(&x));
                let mut k = n - 1;
                loop {
                    if k == 0 {
                        break 'outer;
                    }
                    idx[k] += 1;
                    if idx[k] < len[k] {
                        break;
                    }
                    idx[k] = 0;
                    k -= 1;
                }
            }
            s
        })
        .collect();
    rows.into_iter().sum()
}

/// Tensor Gauss–Legendre value of `∫ e^{itf} dμ` for a product of at most
/// three factors. Panel counts start at the phase-variation bound per axis
/// and double until successive values agree, while the cell count stays
/// within `budget`. Returns `None` if even the first doubling would
/// exceed the budget.
pub fn osc_tensor(
    factors: &[PiecewiseDensity1D],
    f: &Polynomial,
    t: f64,
    budget: usize,
) -> Option<(Complex64, f64, usize)> {
    let boxes: Vec<(f64, f64)> = factors.iter().map(|r| r.support()).collect();
    let mut panels: Vec<usize> = (0..factors.len())
        .map(|k| {
            let v = partial_bound(f, k, &boxes) * (boxes[k].1 - boxes[k].0);
            ((t.abs() * v / (2.0 * std::f64::consts::PI)).ceil() as usize).max(1)
        })
        .collect();
    let cells = |p: &[usize]| p.iter().product::<usize>();
    if cells(&panels) << factors.len() > budget {
        return None;
    }
    let mut prev = tensor_value(factors, f, t, &panels);
    loop {
        let next_panels: Vec<usize> = panels.iter().map(|m| 2 * m).collect();
        let next = tensor_value(factors, f, t, &next_panels);
        let err = (next - prev).norm();
        if err <= TOL || cells(&next_panels) << factors.len() > budget {
            return Some((next, err, cells(&next_panels)));
        }
        panels = next_panels;
        prev = next;
    }
}
