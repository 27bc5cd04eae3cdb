use std::collections::VecDeque;
use std::fmt::Write as _;

use rayon::prelude::*;

use crate::error::{Error, Result};

use super::PiecewiseDensity1D;

/// Measure on the uniform grid `left + jh`, `j = 0..N`, with mass `w_j` on
/// cell `[left + jh, left + (j+1)h)` spread uniformly.
#[derive(Clone, Debug, PartialEq)]
pub struct GridMeasure1D {
    left: f64,
    h: f64,
    weights: Vec<f64>,
}

impl GridMeasure1D {
    pub fn new(left: f64, h: f64, weights: Vec<f64>) -> Result<Self> {
        if !(h > 0.0) || !h.is_finite() || !left.is_finite() {
            return Err(Error::InvalidArgument(format!(
                "grid cell width must be positive, got {h}"
            )));
        }
        if weights.is_empty() {
            return Err(Error::EmptyInput);
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidArgument("non-finite grid weight".into()));
        }
        Ok(Self { left, h, weights })
    }

    /// Exact cell masses of `ρ` on a grid of width `h` starting at the left
    /// end of its support.
    pub fn from_density(rho: &PiecewiseDensity1D, h: f64) -> Result<Self> {
        let (a, b) = rho.support();
        let n = ((b - a) / h).ceil().max(1.0) as usize;
        let mut prev = 0.0;
        let weights = (1..=n)
            .map(|j| {
                let c = rho.cdf(a + j as f64 * h);
                let w = c - prev;
                prev = c;
                w
            })
            .collect();
        Self::new(a, h, weights)
    }

    pub fn left(&self) -> f64 {
        self.left
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn total(&self) -> f64 {
        self.weights.iter().sum()
    }

    pub fn right(&self) -> f64 {
        self.left + self.weights.len() as f64 * self.h
    }

    /// Step density with value `w_j / h` on cell `j`.
    pub fn to_density(&self) -> PiecewiseDensity1D {
        let breaks = (0..=self.weights.len())
            .map(|j| self.left + j as f64 * self.h)
            .collect();
        let values: Vec<f64> = self.weights.iter().map(|w| w / self.h).collect();
        PiecewiseDensity1D::step(breaks, &values).expect("grid breakpoints are ordered")
    }

    /// `∫|ρ(x+kh) − ρ(x)|` for the cell-wise step density.
    fn lattice_shift(&self, k: usize) -> f64 {
        let n = self.weights.len();
        let w = |j: isize| {
            if j < 0 || j as usize >= n {
                0.0
            } else {
                self.weights[j as usize]
            }
        };
        (-(k as isize)..n as isize)
            .map(|j| (w(j + k as isize) - w(j)).abs())
            .sum()
    }

    /// `ω` of the cell-wise step density. The shift integral is linear in
    /// the shift between lattice multiples of `h`, so evaluating at those
    /// multiples and interpolating at `ε` is exact.
    pub fn omega(&self, eps: f64) -> f64 {
        self.omega_table(eps).omega(eps)
    }

    /// Lattice shifts up to `eps_max`, computed once for evaluating `ω` at
    /// many scales.
    pub fn omega_table(&self, eps_max: f64) -> OmegaTable {
        let n = self.weights.len();
        let kmax = if eps_max > 0.0 {
            ((eps_max / self.h).floor() as usize + 1).min(n + 1)
        } else {
            0
        };
        let shifts: Vec<f64> = (0..=kmax)
            .into_par_iter()
            .map(|k| if k == 0 { 0.0 } else { self.lattice_shift(k) })
            .collect();
        let mut running = shifts.clone();
        for k in 1..running.len() {
            running[k] = running[k].max(running[k - 1]);
        }
        OmegaTable {
            h: self.h,
            cells: n,
            shifts,
            running,
        }
    }

    /// `σ(ν, ε)` as the exact optimum of the discretized linear program
    /// `max Σ_j s_j ν_j` over slopes `|s_j| ≤ 1` of a piecewise-linear test
    /// function whose node values stay in `[-ε, ε]`.
    ///
    /// In units of `h` the node values `ψ_j` satisfy `|ψ_j − ψ_{j−1}| ≤ 1` and
    /// `|ψ_j| ≤ E = ε/h`. The constraint matrix is a network matrix, so an
    /// optimal vertex has every `ψ_j` in `{±E ∓ k : k ∈ ℕ} ∩ [-E, E]`. Dynamic
    /// programming over that finite state set, with a sliding-window maximum
    /// for the `|Δψ| ≤ 1` transition, solves the program exactly.
    pub fn sigma(&self, eps: f64) -> Result<f64> {
        if !(eps >= 0.0) {
            return Err(Error::InvalidArgument(format!(
                "eps must be nonnegative, got {eps}"
            )));
        }
        if eps == 0.0 {
            return Ok(0.0);
        }
        let limit = eps / 10.0;
        if self.h > limit * (1.0 + 1e-12) {
            return Err(Error::GridTooCoarse { h: self.h, limit });
        }
        Ok(sigma_lattice(&self.weights, eps / self.h))
    }

    /// CSV form `left,h,w0,w1,...`.
    pub fn to_csv(&self) -> String {
        let mut s = format!("{},{}", self.left, self.h);
        for w in &self.weights {
            write!(s, ",{w}").expect("writing to a String");
        }
        s
    }

    pub fn from_csv(line: &str) -> Result<Self> {
        let vals = line
            .trim()
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad grid value `{}`", v.trim())))
            })
            .collect::<Result<Vec<f64>>>()?;
        if vals.len() < 3 {
            return Err(Error::Parse(
                "grid CSV needs left, h and at least one weight".into(),
            ));
        }
        Self::new(vals[0], vals[1], vals[2..].to_vec())
    }
}

/// Shift integrals of a [`GridMeasure1D`] at the lattice multiples of `h`.
#[derive(Clone, Debug)]
pub struct OmegaTable {
    h: f64,
    cells: usize,
    shifts: Vec<f64>,
    /// Running maximum of `shifts`.
    running: Vec<f64>,
}

impl OmegaTable {
    /// `ω(ε)`; scales beyond the table are clamped to its largest entry.
    pub fn omega(&self, eps: f64) -> f64 {
        if !(eps > 0.0) {
            return 0.0;
        }
        let top = self.shifts.len() - 1;
        let kf = eps / self.h;
        let k = (kf.floor() as usize).min(self.cells + 1).min(top);
        let mut best = self.running[k];
        let frac = kf - kf.floor();
        if frac > 0.0 && (kf.floor() as usize) <= self.cells && k < top {
            let (lo, hi) = (self.shifts[k], self.shifts[k + 1]);
            best = best.max(lo + frac * (hi - lo));
        }
        best
    }
}

/// Optimal value of `max Σ w_j (ψ_j − ψ_{j−1})` subject to
/// `|ψ_j − ψ_{j−1}| ≤ 1`, `|ψ_j| ≤ e`, `j = 1..N`, with `ψ₀` free in `[-e, e]`.
pub(crate) fn sigma_lattice(weights: &[f64], e: f64) -> f64 {
    const TOL: f64 = 1e-9;
    let kmax = (2.0 * e + TOL).floor() as usize;
    let mut states: Vec<f64> = Vec::with_capacity(2 * kmax + 2);
    for k in 0..=kmax {
        states.push((-e + k as f64).min(e));
        states.push((e - k as f64).max(-e));
    }
    states.sort_by(f64::total_cmp);
    states.dedup_by(|x, y| (*x - *y).abs() <= TOL);
    let s = states.len();

    let mut value = vec![0.0; s];
    let mut next = vec![0.0; s];
    let mut deque: VecDeque<usize> = VecDeque::with_capacity(s);
    for &w in weights {
        // next(v) = w v + max_{|u − v| ≤ 1} (value(u) − w u)
        let key = |u: usize| value[u] - w * states[u];
        deque.clear();
        let mut hi = 0;
        let mut lo = 0;
        for (i, &v) in states.iter().enumerate() {
            while hi < s && states[hi] <= v + 1.0 + TOL {
                let kh = key(hi);
                while deque.back().is_some_and(|&b| key(b) <= kh) {
                    deque.pop_back();
                }
                deque.push_back(hi);
                hi += 1;
            }
            while states[lo] < v - 1.0 - TOL {
                lo += 1;
            }
            while deque.front().is_some_and(|&f| f < lo) {
                deque.pop_front();
            }
            let best = deque
                .front()
                .map(|&f| key(f))
                .expect("window contains v itself");
            next[i] = w * v + best;
        }
        std::mem::swap(&mut value, &mut next);
    }
    value
        .iter()
        .copied()
        .fold(f64::NEG_INFINITY, f64::max)
        .max(0.0)
}

/// `σ` of a density on successively finer grids: cell width `ε/64` halved
/// until the value changes by less than `1e-4` relative, at most
/// `max_refinements` times.
pub fn sigma_density(rho: &PiecewiseDensity1D, eps: f64, max_refinements: usize) -> Result<f64> {
    if !(eps >= 0.0) {
        return Err(Error::InvalidArgument(format!(
            "eps must be nonnegative, got {eps}"
        )));
    }
    if eps == 0.0 {
        return Ok(0.0);
    }
    let mut h = eps / 64.0;
    let mut prev = GridMeasure1D::from_density(rho, h)?.sigma(eps)?;
    for _ in 0..max_refinements {
        h *= 0.5;
        let cur = GridMeasure1D::from_density(rho, h)?.sigma(eps)?;
        let done = (cur - prev).abs() <= 1e-4 * cur.abs();
        prev = cur;
        if done {
            break;
        }
    }
    Ok(prev)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sigma_examples() {
        let u = PiecewiseDensity1D::uniform(0.0, 1.0).unwrap();
        let g = GridMeasure1D::from_density(&u, 0.2 / 64.0).unwrap();
        assert!((g.sigma(0.2).unwrap() - 0.4).abs() < 1e-12);
        let g = GridMeasure1D::from_density(&u, 0.01).unwrap();
        assert!((g.sigma(3.0).unwrap() - 1.0).abs() < 1e-12);
        let single = GridMeasure1D::new(0.0, 0.01, vec![1.0]).unwrap();
        assert!((single.sigma(0.1).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(single.sigma(0.0).unwrap(), 0.0);
        assert!(matches!(
            single.sigma(0.05),
            Err(Error::GridTooCoarse { .. })
        ));
    }

    #[test]
    fn grid_omega_matches_exact_shift() {
        let g = GridMeasure1D::new(-0.3, 0.1, vec![0.1, 0.4, 0.2, 0.0, 0.3]).unwrap();
        let d = g.to_density();
        for eps in [0.05, 0.1, 0.17, 0.33, 0.6, 2.0] {
            assert!((g.omega(eps) - d.omega(eps)).abs() < 1e-13, "eps {eps}");
        }
    }

    #[test]
    fn csv_round_trip() {
        let g = GridMeasure1D::new(-1.5, 0.25, vec![0.5, 0.25, 0.25]).unwrap();
        assert_eq!(g.to_csv(), "-1.5,0.25,0.5,0.25,0.25");
        assert_eq!(GridMeasure1D::from_csv(&g.to_csv()).unwrap(), g);
        assert!(GridMeasure1D::from_csv("0,1").is_err());
    }
}
