//! Sparse multivariate polynomials over the reals.
//!
//! Terms live in a map keyed by exponent tuples ordered graded-lexicographically,
//! so iteration from the back visits the top-degree part first. The text form is
//! canonical: `Display` prints terms in descending graded-lex order and parsing
//! that output reproduces the same coefficients.

mod roots;
mod text;
mod univariate;

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

pub use roots::{distinct_roots, real_roots, refine_bracket, Root};
pub use univariate::Polynomial1D;

/// Exponent tuple `(j₁,…,jₙ)` with graded-lex order: total degree first,
/// then lexicographic with `x1` most significant.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn new(exponents: Vec<u32>) -> Self {
        Self(exponents)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn max_exponent(&self) -> u32 {
        self.0.iter().copied().max().unwrap_or(0)
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Top-degree data `(d(f), [f]₂, [f]∞)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LeadingData {
    pub degree: u32,
    pub l2: f64,
    pub linf: f64,
}

/// Sparse real polynomial in `n` variables. Zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq)]
pub struct Polynomial {
    n: usize,
    terms: BTreeMap<Monomial, f64>,
}

/// Neumaier-compensated sum.
pub(crate) fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0;
    let mut comp = 0.0;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

impl Polynomial {
    pub fn zero(n: usize) -> Self {
        Self {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(n: usize, c: f64) -> Self {
        let mut p = Self::zero(n);
        p.add_term(vec![0; n], c);
        p
    }

    /// The coordinate function `x_{k+1}` (zero-based `k`).
    pub fn variable(n: usize, k: usize) -> Self {
        let mut e = vec![0; n];
        e[k] = 1;
        let mut p = Self::zero(n);
        p.add_term(e, 1.0);
        p
    }

    /// Build from `(exponents, coefficient)` pairs, collecting like terms.
    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Vec<u32>, f64)>) -> Result<Self> {
        let mut p = Self::zero(n);
        for (e, c) in terms {
            if e.len() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    got: e.len(),
                });
            }
            p.add_term(e, c);
        }
        Ok(p)
    }

    /// Lift a univariate polynomial onto coordinate `k` of `ℝⁿ`.
    pub fn from_univariate(p: &Polynomial1D, n: usize, k: usize) -> Self {
        let mut out = Self::zero(n);
        for (j, &c) in p.coeffs().iter().enumerate() {
            let mut e = vec![0; n];
            e[k] = j as u32;
            out.add_term(e, c);
        }
        out
    }

    fn add_term(&mut self, e: Vec<u32>, c: f64) {
        if c == 0.0 {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(Monomial(e)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if *o.get() == 0.0 {
                    o.remove();
                }
            }
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&[u32], f64)> {
        self.terms.iter().map(|(m, &c)| (m.exponents(), c))
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, exponents: &[u32]) -> f64 {
        self.terms
            .get(&Monomial(exponents.to_vec()))
            .copied()
            .unwrap_or(0.0)
    }

    /// Total degree `d(f)`; zero for the zero polynomial.
    pub fn degree(&self) -> u32 {
        self.terms
            .keys()
            .next_back()
            .map(Monomial::total_degree)
            .unwrap_or(0)
    }

    /// Individual degree `m(f)`.
    pub fn individual_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::max_exponent)
            .max()
            .unwrap_or(0)
    }

    pub fn eval(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: x.len(),
            });
        }
        Ok(self.eval_unchecked(x))
    }

    /// Evaluation without the dimension check, for hot Monte Carlo loops.
    pub fn eval_unchecked(&self, x: &[f64]) -> f64 {
        compensated_sum(self.terms.iter().map(|(m, &c)| {
            m.0.iter().zip(x).fold(
                c,
                |acc, (&j, &xi)| if j == 0 { acc } else { acc * xi.powi(j as i32) },
            )
        }))
    }

    /// Partial derivative `∂^α f`.
    pub fn derive(&self, alpha: &[u32]) -> Result<Self> {
        if alpha.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: alpha.len(),
            });
        }
        let mut out = Self::zero(self.n);
        for (m, &c) in &self.terms {
            let mut coef = c;
            let mut e = m.0.clone();
            let mut vanishes = false;
            for (ek, &ak) in e.iter_mut().zip(alpha) {
                if ak > *ek {
                    vanishes = true;
                    break;
                }
                for r in 0..ak {
                    coef *= (*ek - r) as f64;
                }
                *ek -= ak;
            }
            if !vanishes {
                out.add_term(e, coef);
            }
        }
        Ok(out)
    }

    /// `∂_θ f = Σ θ_k ∂f/∂x_k` for a unit vector `θ`.
    pub fn directional_derivative(&self, theta: &[f64]) -> Result<Self> {
        if theta.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: theta.len(),
            });
        }
        let norm = theta.iter().map(|t| t * t).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > 1e-12 {
            return Err(Error::NonUnitDirection { norm });
        }
        let mut out = Self::zero(self.n);
        for (k, &tk) in theta.iter().enumerate() {
            if tk == 0.0 {
                continue;
            }
            let mut alpha = vec![0; self.n];
            alpha[k] = 1;
            out = &out + &self.derive(&alpha)?.scale(tk);
        }
        Ok(out)
    }

    /// Coefficients of `t ↦ f(y + tθ)`.
    pub fn restrict_line(&self, y: &[f64], theta: &[f64]) -> Result<Polynomial1D> {
        for v in [y, theta] {
            if v.len() != self.n {
                return Err(Error::DimensionMismatch {
                    expected: self.n,
                    got: v.len(),
                });
            }
        }
        let lines: Vec<Polynomial1D> = y
            .iter()
            .zip(theta)
            .map(|(&yk, &tk)| Polynomial1D::new(vec![yk, tk]))
            .collect();
        let mut acc = Polynomial1D::zero();
        for (m, &c) in &self.terms {
            let mut term = Polynomial1D::constant(c);
            for (k, &j) in m.0.iter().enumerate() {
                for _ in 0..j {
                    term = &term * &lines[k];
                }
            }
            acc = &acc + &term;
        }
        Ok(acc)
    }

    /// `(d(f), [f]₂, [f]∞)` from the top-degree coefficients.
    pub fn leading_data(&self) -> Result<LeadingData> {
        if self.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let degree = self.degree();
        let top: Vec<f64> = self
            .terms
            .iter()
            .rev()
            .take_while(|(m, _)| m.total_degree() == degree)
            .map(|(_, &c)| c)
            .collect();
        let l2 = top.iter().map(|c| c * c).sum::<f64>().sqrt();
        let linf = top.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
        Ok(LeadingData { degree, l2, linf })
    }

    /// Top-degree homogeneous part.
    pub fn leading_form(&self) -> Self {
        let d = self.degree();
        let mut out = Self::zero(self.n);
        for (m, &c) in self.terms.iter().rev() {
            if m.total_degree() != d {
                break;
            }
            out.add_term(m.0.clone(), c);
        }
        out
    }

    /// `g(y) = f(Ly)` with `L_k(y) = (a_k+b_k)/2 + y_k (b_k−a_k)`, mapping the
    /// unit cube `[-½,½]ⁿ` onto the box.
    pub fn box_rescale(&self, boxes: &[(f64, f64)]) -> Result<Self> {
        if boxes.len() != self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: boxes.len(),
            });
        }
        if let Some(&(a, b)) = boxes.iter().find(|(a, b)| !(a < b)) {
            return Err(Error::DegenerateInterval { a, b });
        }
        // Per-coordinate expansions (c + s y)^j as coefficient vectors.
        let affine: Vec<Polynomial1D> = boxes
            .iter()
            .map(|&(a, b)| Polynomial1D::new(vec![0.5 * (a + b), b - a]))
            .collect();
        let mut out = Self::zero(self.n);
        for (m, &c) in &self.terms {
            let expansions: Vec<Polynomial1D> =
                m.0.iter()
                    .zip(&affine)
                    .map(|(&j, q)| (0..j).fold(Polynomial1D::constant(1.0), |acc, _| &acc * q))
                    .collect();
            // Cartesian product over the per-coordinate expansions.
            let mut partial: Vec<(Vec<u32>, f64)> = vec![(Vec::with_capacity(self.n), c)];
            for exp in &expansions {
                let mut next = Vec::with_capacity(partial.len() * exp.coeffs().len());
                for (e, v) in &partial {
                    for (i, &q) in exp.coeffs().iter().enumerate() {
                        if q == 0.0 {
                            continue;
                        }
                        let mut e2 = e.clone();
                        e2.push(i as u32);
                        next.push((e2, v * q));
                    }
                }
                partial = next;
            }
            for (e, v) in partial {
                out.add_term(e, v);
            }
        }
        Ok(out)
    }

    /// `E[f(X)]` for independent coordinates with moments `moment(k, j) = E[X_k^j]`.
    pub fn expectation_with(&self, mut moment: impl FnMut(usize, u32) -> f64) -> f64 {
        compensated_sum(self.terms.iter().map(|(m, &c)| {
            m.0.iter().enumerate().fold(
                c,
                |acc, (k, &j)| if j == 0 { acc } else { acc * moment(k, j) },
            )
        }))
    }

    /// Exact `∫_{[-½,½]ⁿ} f`.
    pub fn cube_moment(&self) -> f64 {
        self.expectation_with(|_, j| cube_monomial_moment(j))
    }

    /// `∫ f² − (∫ f)²` over the unit cube, clamped at zero.
    pub fn cube_variance(&self) -> f64 {
        let m = self.cube_moment();
        ((self * self).cube_moment() - m * m).max(0.0)
    }

    /// Write `f = Σ_j f_j(x) x_k^j`; the returned `f_j` do not depend on `x_k`.
    pub fn split_variable(&self, k: usize) -> Vec<Polynomial> {
        let deg = self.terms.keys().map(|m| m.0[k]).max().unwrap_or(0) as usize;
        let mut parts = vec![Self::zero(self.n); deg + 1];
        for (m, &c) in &self.terms {
            let j = m.0[k] as usize;
            let mut e = m.0.clone();
            e[k] = 0;
            parts[j].add_term(e, c);
        }
        parts
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = Self::zero(self.n);
        for (m, &c) in &self.terms {
            out.add_term(m.0.clone(), c * s);
        }
        out
    }

    /// `f + c`.
    pub fn add_constant(&self, c: f64) -> Self {
        self + &Self::constant(self.n, c)
    }

    /// Univariate view of a polynomial in one variable.
    pub fn to_univariate(&self) -> Result<Polynomial1D> {
        if self.n != 1 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                got: self.n,
            });
        }
        let deg = self.degree() as usize;
        let mut coeffs = vec![0.0; deg + 1];
        for (m, &c) in &self.terms {
            coeffs[m.0[0] as usize] = c;
        }
        Ok(Polynomial1D::new(coeffs))
    }

    /// Parse with an explicit dimension; variables must be `x1..xn`.
    pub fn parse_with_dim(s: &str, n: usize) -> Result<Self> {
        let p: Polynomial = s.parse()?;
        if p.n > n {
            return Err(Error::Parse(format!(
                "variable index {} exceeds dimension {n}",
                p.n
            )));
        }
        p.with_dim(n)
    }

    /// Embed into a space of dimension `n ≥ self.dim()`.
    pub fn with_dim(&self, n: usize) -> Result<Self> {
        if n < self.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                got: n,
            });
        }
        let mut out = Self::zero(n);
        for (m, &c) in &self.terms {
            let mut e = m.0.clone();
            e.resize(n, 0);
            out.add_term(e, c);
        }
        Ok(out)
    }

    fn check_same_dim(&self, other: &Self) {
        assert_eq!(self.n, other.n, "polynomial dimension mismatch");
    }
}

/// `∫_{-½}^{½} x^j dx`.
pub fn cube_monomial_moment(j: u32) -> f64 {
    if j % 2 == 1 {
        0.0
    } else {
        0.5_f64.powi(j as i32) / (j + 1) as f64
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_same_dim(rhs);
        let mut out = self.clone();
        for (m, &c) in &rhs.terms {
            out.add_term(m.0.clone(), c);
        }
        out
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &rhs.scale(-1.0)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        self.scale(-1.0)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_same_dim(rhs);
        let mut acc: BTreeMap<Monomial, f64> = BTreeMap::new();
        for (ma, &ca) in &self.terms {
            for (mb, &cb) in &rhs.terms {
                let e: Vec<u32> = ma.0.iter().zip(&mb.0).map(|(a, b)| a + b).collect();
                *acc.entry(Monomial(e)).or_insert(0.0) += ca * cb;
            }
        }
        acc.retain(|_, c| *c != 0.0);
        Polynomial {
            n: self.n,
            terms: acc,
        }
    }
}

/// Serialized as its canonical text.
impl serde::Serialize for Polynomial {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<text::Term> = self
            .terms
            .iter()
            .rev()
            .map(|(m, &c)| {
                let vars =
                    m.0.iter()
                        .enumerate()
                        .filter(|(_, &j)| j > 0)
                        .map(|(k, &j)| (format!("x{}", k + 1), j))
                        .collect();
                (c, vars)
            })
            .collect();
        f.write_str(&text::format_terms(&terms))
    }
}

impl FromStr for Polynomial {
    type Err = Error;

    /// Parses `x1..xn` monomials; the dimension is the largest variable index
    /// seen (at least 1).
    fn from_str(s: &str) -> Result<Self> {
        let terms = text::parse_terms(s)?;
        let mut parsed = Vec::with_capacity(terms.len());
        let mut n = 1;
        for (c, factors) in terms {
            let mut exps: Vec<(usize, u32)> = Vec::new();
            for (name, pow) in factors {
                let idx = name
                    .strip_prefix('x')
                    .and_then(|d| d.parse::<usize>().ok())
                    .filter(|&i| i >= 1)
                    .ok_or_else(|| Error::Parse(format!("unknown variable `{name}`")))?;
                n = n.max(idx);
                exps.push((idx - 1, pow));
            }
            parsed.push((c, exps));
        }
        let mut p = Polynomial::zero(n);
        for (c, exps) in parsed {
            let mut e = vec![0u32; n];
            for (k, pow) in exps {
                e[k] += pow;
            }
            p.add_term(e, c);
        }
        Ok(p)
    }
}
