use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::poly::{refine_bracket, Polynomial1D};

/// Tolerance on total mass when a probability density is required.
pub const MASS_TOL: f64 = 1e-9;

/// Piecewise-polynomial function on `[t₀, t_M]`, zero outside.
///
/// Piece `i` lives on `[t_i, t_{i+1})`. Signed pieces are allowed; the
/// probability constructors check nonnegativity and unit mass.
#[derive(Clone, Debug, PartialEq)]
pub struct PiecewiseDensity1D {
    breaks: Vec<f64>,
    pieces: Vec<Polynomial1D>,
    /// `cum[i] = ∫_{t₀}^{t_i} ρ`
    cum: Vec<f64>,
    anti: Vec<Polynomial1D>,
}

impl PiecewiseDensity1D {
    pub fn new(breaks: Vec<f64>, pieces: Vec<Polynomial1D>) -> Result<Self> {
        if breaks.len() < 2 || pieces.len() + 1 != breaks.len() {
            return Err(Error::InvalidArgument(format!(
                "{} breakpoints need {} pieces, got {}",
                breaks.len(),
                breaks.len().saturating_sub(1),
                pieces.len()
            )));
        }
        if breaks.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidArgument("non-finite breakpoint".into()));
        }
        if let Some(w) = breaks.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::DegenerateInterval { a: w[0], b: w[1] });
        }
        let anti: Vec<Polynomial1D> = pieces.iter().map(Polynomial1D::antiderivative).collect();
        let mut cum = Vec::with_capacity(breaks.len());
        cum.push(0.0);
        for (i, a) in anti.iter().enumerate() {
            let m = a.eval(breaks[i + 1]) - a.eval(breaks[i]);
            cum.push(cum[i] + m);
        }
        Ok(Self {
            breaks,
            pieces,
            cum,
            anti,
        })
    }

    /// Piecewise-constant function with `values[i]` on `[t_i, t_{i+1})`.
    pub fn step(breaks: Vec<f64>, values: &[f64]) -> Result<Self> {
        Self::new(
            breaks,
            values.iter().map(|&v| Polynomial1D::constant(v)).collect(),
        )
    }

    /// Checks that the function is a probability density: every piece is
    /// nonnegative on its interval and the total mass is 1.
    pub fn into_probability(self) -> Result<Self> {
        self.check_nonnegative()?;
        let mass = self.mass();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::Unnormalized { mass });
        }
        Ok(self)
    }

    /// Rescale to unit mass; errors on negative pieces or zero mass.
    pub fn normalized(self) -> Result<Self> {
        self.check_nonnegative()?;
        let mass = self.mass();
        if !(mass > 0.0) || !mass.is_finite() {
            return Err(Error::Unnormalized { mass });
        }
        let pieces = self.pieces.iter().map(|p| p.scale(1.0 / mass)).collect();
        Self::new(self.breaks, pieces)
    }

    pub fn check_nonnegative(&self) -> Result<()> {
        for (i, p) in self.pieces.iter().enumerate() {
            let (a, b) = (self.breaks[i], self.breaks[i + 1]);
            let (lo, hi) = p.range_on(a, b);
            if lo < -1e-12 * hi.abs().max(1.0) {
                return Err(Error::NegativeDensity { a, b });
            }
        }
        Ok(())
    }

    /// Uniform probability density on `[a, b]`.
    pub fn uniform(a: f64, b: f64) -> Result<Self> {
        if !(a < b) {
            return Err(Error::DegenerateInterval { a, b });
        }
        Self::step(vec![a, b], &[1.0 / (b - a)])
    }

    /// Symmetric triangular density on `[a, b]`.
    pub fn tent(a: f64, b: f64) -> Result<Self> {
        if !(a < b) {
            return Err(Error::DegenerateInterval { a, b });
        }
        let m = 0.5 * (a + b);
        let peak = 2.0 / (b - a);
        let slope = peak / (m - a);
        Self::new(
            vec![a, m, b],
            vec![
                Polynomial1D::new(vec![-slope * a, slope]),
                Polynomial1D::new(vec![slope * b, -slope]),
            ],
        )
    }

    pub fn breaks(&self) -> &[f64] {
        &self.breaks
    }

    pub fn pieces(&self) -> &[Polynomial1D] {
        &self.pieces
    }

    pub fn support(&self) -> (f64, f64) {
        (self.breaks[0], self.breaks[self.breaks.len() - 1])
    }

    pub fn mass(&self) -> f64 {
        self.cum[self.cum.len() - 1]
    }

    pub fn is_piecewise_constant(&self) -> bool {
        self.pieces.iter().all(Polynomial1D::is_constant)
    }

    fn piece_index(&self, x: f64) -> Option<usize> {
        let (lo, hi) = self.support();
        if x < lo || x >= hi {
            return None;
        }
        Some(self.breaks.partition_point(|&t| t <= x) - 1)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.piece_index(x).map_or(0.0, |i| self.pieces[i].eval(x))
    }

    /// `∫_{-∞}^x ρ`.
    pub fn cdf(&self, x: f64) -> f64 {
        let (lo, hi) = self.support();
        if x <= lo {
            return 0.0;
        }
        if x >= hi {
            return self.mass();
        }
        let i = self.breaks.partition_point(|&t| t <= x) - 1;
        self.cum[i] + self.anti[i].eval(x) - self.anti[i].eval(self.breaks[i])
    }

    /// `∫_a^b ρ`.
    pub fn mass_on(&self, a: f64, b: f64) -> f64 {
        if b <= a {
            return 0.0;
        }
        self.cdf(b) - self.cdf(a)
    }

    /// Smallest `x` with `F(x) = u·mass` for `u ∈ [0, 1]`; assumes `ρ ≥ 0`.
    pub fn quantile(&self, u: f64) -> f64 {
        let target = u.clamp(0.0, 1.0) * self.mass();
        let m = self.pieces.len();
        let mut i = self
            .cum
            .partition_point(|&c| c < target)
            .saturating_sub(1)
            .min(m - 1);
        // Skip pieces carrying no mass so the smallest admissible x is returned.
        while i + 1 < m && self.cum[i + 1] <= target && self.cum[i + 1] - self.cum[i] <= 0.0 {
            i += 1;
        }
        let (a, b) = (self.breaks[i], self.breaks[i + 1]);
        let need = target - self.cum[i];
        if need <= 0.0 {
            return a;
        }
        let p = &self.pieces[i];
        if p.is_constant() {
            let c = p.coeff(0);
            return if c > 0.0 { (a + need / c).min(b) } else { a };
        }
        let g = &(&self.anti[i] - &Polynomial1D::constant(self.anti[i].eval(a)))
            - &Polynomial1D::constant(need);
        if g.eval(b) <= 0.0 {
            return b;
        }
        refine_bracket(&g, a, b)
    }

    /// `‖ρ‖∞` over the support.
    pub fn sup_norm(&self) -> f64 {
        self.pieces
            .iter()
            .enumerate()
            .map(|(i, p)| {
                let (lo, hi) = p.range_on(self.breaks[i], self.breaks[i + 1]);
                lo.abs().max(hi.abs())
            })
            .fold(0.0, f64::max)
    }

    /// `‖D₁ρ‖_TV`: jumps at every breakpoint (including the two ends of the
    /// support) plus the interior variation of each piece.
    pub fn bv_seminorm(&self) -> f64 {
        let m = self.pieces.len();
        let mut total = 0.0;
        for k in 0..=m {
            let left = if k == 0 {
                0.0
            } else {
                self.pieces[k - 1].eval(self.breaks[k])
            };
            let right = if k == m {
                0.0
            } else {
                self.pieces[k].eval(self.breaks[k])
            };
            total += (right - left).abs();
        }
        for (i, p) in self.pieces.iter().enumerate() {
            total += p.variation_on(self.breaks[i], self.breaks[i + 1]);
        }
        total
    }

    /// `x ↦ ρ(x + h)`. Pieces narrower than the rounding of `t − h` collapse
    /// to zero width and are dropped.
    pub fn translate(&self, h: f64) -> Self {
        let mut breaks = Vec::with_capacity(self.breaks.len());
        let mut pieces: Vec<Polynomial1D> = Vec::with_capacity(self.pieces.len());
        breaks.push(self.breaks[0] - h);
        for (i, p) in self.pieces.iter().enumerate() {
            let t = self.breaks[i + 1] - h;
            if t > breaks[breaks.len() - 1] {
                breaks.push(t);
                pieces.push(p.shift(h));
            }
        }
        if pieces.is_empty() {
            return Self::step(
                vec![
                    breaks[0],
                    breaks[0] + f64::EPSILON * breaks[0].abs().max(1.0),
                ],
                &[0.0],
            )
            .expect("ordered breakpoints");
        }
        Self::new(breaks, pieces).expect("translation keeps breakpoints ordered")
    }

    /// `∫|ρ(x+h) − ρ(x)| dx`, exact. Computed for `|h|`, so the result is
    /// bitwise symmetric in `h`.
    pub fn shift_l1(&self, h: f64) -> f64 {
        let h = h.abs();
        if h == 0.0 {
            return 0.0;
        }
        l1_between(&self.translate(h), self)
    }

    /// `ω(ρ, ε) = sup_{|h|≤ε} ∫|ρ(x+h) − ρ(x)| dx`.
    ///
    /// For step functions the shift integral is piecewise linear in `h` with
    /// kinks at breakpoint differences, so the maximum over those candidates
    /// is exact. Otherwise a 1024-point scan is refined by golden-section
    /// search around the best candidates.
    pub fn omega(&self, eps: f64) -> f64 {
        if !(eps > 0.0) {
            return 0.0;
        }
        if self.is_piecewise_constant() {
            let mut cands = vec![eps];
            for (i, &a) in self.breaks.iter().enumerate() {
                for &b in &self.breaks[i + 1..] {
                    let d = b - a;
                    if d > eps {
                        break;
                    }
                    cands.push(d);
                }
            }
            cands.sort_by(f64::total_cmp);
            cands.dedup_by(|x, y| (*x - *y).abs() <= 1e-15 * y.abs());
            return cands.iter().map(|&h| self.shift_l1(h)).fold(0.0, f64::max);
        }
        const SCAN: usize = 1024;
        let step = eps / SCAN as f64;
        let vals: Vec<f64> = (0..=SCAN).map(|k| self.shift_l1(k as f64 * step)).collect();
        let mut best = vals.iter().copied().fold(0.0, f64::max);
        let mut peaks: Vec<usize> = (1..SCAN)
            .filter(|&k| vals[k] >= vals[k - 1] && vals[k] >= vals[k + 1])
            .collect();
        peaks.sort_by(|&a, &b| vals[b].total_cmp(&vals[a]));
        for &k in peaks.iter().take(4) {
            let (lo, hi) = ((k - 1) as f64 * step, (k + 1) as f64 * step);
            best = best.max(golden_max(|h| self.shift_l1(h), lo, hi, 1e-6 * eps));
        }
        best
    }

    /// Piecewise representation of the distribution function on `[lo, hi]`,
    /// where `[lo, hi]` covers the support.
    fn cdf_on(&self, lo: f64, hi: f64) -> Self {
        let (a, b) = self.support();
        let mut breaks = Vec::with_capacity(self.breaks.len() + 2);
        let mut pieces = Vec::with_capacity(self.breaks.len() + 1);
        if lo < a {
            breaks.push(lo);
            pieces.push(Polynomial1D::zero());
        }
        for (i, anti) in self.anti.iter().enumerate() {
            breaks.push(self.breaks[i]);
            let shifted = anti + &Polynomial1D::constant(self.cum[i] - anti.eval(self.breaks[i]));
            pieces.push(shifted);
        }
        breaks.push(b);
        if hi > b {
            pieces.push(Polynomial1D::constant(self.mass()));
            breaks.push(hi);
        }
        Self::new(breaks, pieces).expect("ordered breakpoints")
    }

    /// `L¹` norm `∫|ρ|`.
    pub fn l1_norm(&self) -> f64 {
        self.pieces
            .iter()
            .enumerate()
            .map(|(i, p)| p.abs_integral(self.breaks[i], self.breaks[i + 1]))
            .sum()
    }
}

/// `∫|f − g|` over the union of supports, exact.
pub fn l1_between(f: &PiecewiseDensity1D, g: &PiecewiseDensity1D) -> f64 {
    let mut xs: Vec<f64> = f.breaks.iter().chain(&g.breaks).copied().collect();
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let zero = Polynomial1D::zero();
    let mut total = 0.0;
    let (mut fi, mut gi) = (0usize, 0usize);
    for w in xs.windows(2) {
        let (x0, x1) = (w[0], w[1]);
        let mid = 0.5 * (x0 + x1);
        while fi + 1 < f.breaks.len() && f.breaks[fi + 1] <= mid {
            fi += 1;
        }
        while gi + 1 < g.breaks.len() && g.breaks[gi + 1] <= mid {
            gi += 1;
        }
        let pf = if mid >= f.breaks[0] && fi + 1 < f.breaks.len() {
            &f.pieces[fi]
        } else {
            &zero
        };
        let pg = if mid >= g.breaks[0] && gi + 1 < g.breaks.len() {
            &g.pieces[gi]
        } else {
            &zero
        };
        if pf.is_constant() && pg.is_constant() {
            total += (pf.coeff(0) - pg.coeff(0)).abs() * (x1 - x0);
        } else {
            total += (pf - pg).abs_integral(x0, x1);
        }
    }
    total
}

/// Total variation and Kantorovich distances between two probability densities.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Distances {
    /// `∫|ρ₁ − ρ₂|`
    pub tv: f64,
    /// `∫|F₁ − F₂|`
    pub kantorovich: f64,
}

pub fn distances(r1: &PiecewiseDensity1D, r2: &PiecewiseDensity1D) -> Result<Distances> {
    for r in [r1, r2] {
        let mass = r.mass();
        if (mass - 1.0).abs() > MASS_TOL {
            return Err(Error::Unnormalized { mass });
        }
    }
    let lo = r1.support().0.min(r2.support().0);
    let hi = r1.support().1.max(r2.support().1);
    Ok(Distances {
        tv: l1_between(r1, r2),
        kantorovich: l1_between(&r1.cdf_on(lo, hi), &r2.cdf_on(lo, hi)),
    })
}

/// Maximize a unimodal-looking `g` on `[a, b]` by golden-section search.
pub(crate) fn golden_max(g: impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut gc, mut gd) = (g(c), g(d));
    let mut best = g(a).max(g(b)).max(gc).max(gd);
    while b - a > tol {
        if gc >= gd {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
            best = best.max(gc);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
            best = best.max(gd);
        }
    }
    best
}

impl fmt::Display for PiecewiseDensity1D {
    /// Density literal `piecewise [t0,t1,...] [p0; p1; ...]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let breaks: Vec<String> = self.breaks.iter().map(|t| t.to_string()).collect();
        let pieces: Vec<String> = self.pieces.iter().map(|p| p.to_string()).collect();
        write!(
            f,
            "piecewise [{}] [{}]",
            breaks.join(","),
            pieces.join("; ")
        )
    }
}

impl FromStr for PiecewiseDensity1D {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let rest = s
            .trim()
            .strip_prefix("piecewise")
            .ok_or_else(|| Error::Parse("density literal must start with `piecewise`".into()))?;
        let (breaks_src, rest) = bracketed(rest)?;
        let (pieces_src, rest) = bracketed(rest)?;
        if !rest.trim().is_empty() {
            return Err(Error::Parse(format!("trailing input `{}`", rest.trim())));
        }
        let breaks = breaks_src
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<f64>()
                    .map_err(|_| Error::Parse(format!("bad breakpoint `{}`", t.trim())))
            })
            .collect::<Result<Vec<_>>>()?;
        let pieces = pieces_src
            .split(';')
            .map(str::parse::<Polynomial1D>)
            .collect::<Result<Vec<_>>>()?;
        Self::new(breaks, pieces)
    }
}

fn bracketed(s: &str) -> Result<(&str, &str)> {
    let s = s.trim_start();
    let body = s
        .strip_prefix('[')
        .ok_or_else(|| Error::Parse("expected `[`".into()))?;
    let end = body
        .find(']')
        .ok_or_else(|| Error::Parse("missing `]`".into()))?;
    Ok((&body[..end], &body[end + 1..]))
}
