use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use crate::error::{Error, Result};

use super::text;

/// Dense univariate polynomial with real coefficients in ascending power order.
///
/// Trailing zero coefficients are never stored, so the zero polynomial has an
/// empty coefficient vector and `degree() == 0`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Polynomial1D {
    coeffs: Vec<f64>,
}

impl Polynomial1D {
    pub fn new(mut coeffs: Vec<f64>) -> Self {
        while coeffs.last() == Some(&0.0) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: f64) -> Self {
        Self::new(vec![c])
    }

    /// `c * t^k`
    pub fn monomial(c: f64, k: usize) -> Self {
        let mut coeffs = vec![0.0; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    /// The identity polynomial `t`.
    pub fn identity() -> Self {
        Self::new(vec![0.0, 1.0])
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> f64 {
        self.coeffs.last().copied().unwrap_or(0.0)
    }

    /// Coefficient of `t^k` (zero beyond the degree).
    pub fn coeff(&self, k: usize) -> f64 {
        self.coeffs.get(k).copied().unwrap_or(0.0)
    }

    pub fn eval(&self, t: f64) -> f64 {
        self.coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, t: f64) -> (f64, f64) {
        let mut p = 0.0;
        let mut dp = 0.0;
        for &c in self.coeffs.iter().rev() {
            dp = dp * t + p;
            p = p * t + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Antiderivative vanishing at zero.
    pub fn antiderivative(&self) -> Self {
        let mut coeffs = Vec::with_capacity(self.coeffs.len() + 1);
        coeffs.push(0.0);
        coeffs.extend(
            self.coeffs
                .iter()
                .enumerate()
                .map(|(k, &c)| c / (k + 1) as f64),
        );
        Self::new(coeffs)
    }

    /// Exact `∫_a^b p`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        let anti = self.antiderivative();
        anti.eval(b) - anti.eval(a)
    }

    /// `t ↦ p(c + s t)`.
    pub fn compose_affine(&self, c: f64, s: f64) -> Self {
        // Horner in polynomial arithmetic: p(q) with q = c + s t.
        let q = Self::new(vec![c, s]);
        let mut acc = Self::zero();
        for &coef in self.coeffs.iter().rev() {
            acc = &(&acc * &q) + &Self::constant(coef);
        }
        acc
    }

    /// `t ↦ p(t + h)`.
    pub fn shift(&self, h: f64) -> Self {
        self.compose_affine(h, 1.0)
    }

    pub fn scale(&self, s: f64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Largest coefficient magnitude.
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()))
    }

    /// Polynomial long division, `self = q * divisor + r` with `deg r < deg divisor`.
    pub fn div_rem(&self, divisor: &Self) -> Result<(Self, Self)> {
        if divisor.is_zero() {
            return Err(Error::ZeroPolynomial);
        }
        let dn = divisor.degree();
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() < divisor.coeffs.len() {
            return Ok((Self::zero(), self.clone()));
        }
        let mut quot = vec![0.0; rem.len() - dn];
        for k in (0..quot.len()).rev() {
            let c = rem[k + dn] / lead;
            quot[k] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                rem[k + j] -= c * d;
            }
            rem[k + dn] = 0.0;
        }
        rem.truncate(dn);
        Ok((Self::new(quot), Self::new(rem)))
    }

    /// Drop coefficients below `tol * max|coeff|` from the top, the way a
    /// floating-point remainder that should vanish is cleaned.
    fn trimmed(&self, tol: f64) -> Self {
        let cut = tol * self.max_abs_coeff();
        let mut coeffs = self.coeffs.clone();
        while coeffs.last().is_some_and(|c| c.abs() <= cut) {
            coeffs.pop();
        }
        Self::new(coeffs)
    }

    fn monic(&self) -> Self {
        let l = self.leading();
        if l == 0.0 {
            return self.clone();
        }
        self.scale(1.0 / l)
    }

    /// Greatest common divisor by the Euclidean algorithm, dropping remainder
    /// coefficients below `1e-12` of the dividend's leading magnitude.
    /// Returned monic.
    pub fn gcd(&self, other: &Self) -> Self {
        const TOL: f64 = 1e-12;
        let mut a = self.monic();
        let mut b = other.monic();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let scale = a.max_abs_coeff().max(b.max_abs_coeff());
            let (_, r) = a.div_rem(&b).expect("divisor is nonzero");
            let cut = TOL * scale;
            let r = if r.max_abs_coeff() <= cut {
                Self::zero()
            } else {
                r.trimmed(TOL)
            };
            a = b;
            b = r.monic();
        }
        a.monic()
    }

    /// Yun's square-free decomposition: `p = c · Π q_i^i` with each `q_i`
    /// square-free and pairwise coprime. Factors of degree zero are omitted.
    pub fn square_free_decomposition(&self) -> Vec<(Self, u32)> {
        if self.is_constant() {
            return Vec::new();
        }
        let p = self.monic();
        let dp = p.derivative();
        let a0 = p.gcd(&dp);
        if a0.degree() == 0 {
            return vec![(p, 1)];
        }
        let mut out = Vec::new();
        let mut b = p.div_rem(&a0).expect("nonzero").0;
        let c = dp.div_rem(&a0).expect("nonzero").0;
        let mut d = &c - &b.derivative();
        let mut i = 1;
        while b.degree() > 0 {
            let a = if d.trimmed(1e-12).is_zero() {
                b.clone()
            } else {
                b.gcd(&d)
            };
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            let nb = b.div_rem(&a).expect("nonzero").0;
            let nc = d.div_rem(&a).expect("nonzero").0;
            b = nb;
            d = &nc - &b.derivative();
            i += 1;
            if i > 64 {
                break;
            }
        }
        out
    }

    /// Minimum and maximum of `p` on `[a, b]`.
    pub fn range_on(&self, a: f64, b: f64) -> (f64, f64) {
        let mut lo = self.eval(a).min(self.eval(b));
        let mut hi = self.eval(a).max(self.eval(b));
        for c in super::roots::distinct_roots(&self.derivative(), a, b) {
            let v = self.eval(c);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        (lo, hi)
    }

    /// Total variation `∫_a^b |p'|`, exact via critical points.
    pub fn variation_on(&self, a: f64, b: f64) -> f64 {
        let mut pts = vec![a];
        pts.extend(super::roots::distinct_roots(&self.derivative(), a, b));
        pts.push(b);
        pts.windows(2)
            .map(|w| (self.eval(w[1]) - self.eval(w[0])).abs())
            .sum()
    }

    /// Exact `∫_a^b |p|`, splitting at real roots.
    pub fn abs_integral(&self, a: f64, b: f64) -> f64 {
        if self.is_zero() || b <= a {
            return 0.0;
        }
        let anti = self.antiderivative();
        let mut pts = vec![a];
        if !self.is_constant() {
            pts.extend(super::roots::distinct_roots(self, a, b));
        }
        pts.push(b);
        pts.windows(2)
            .map(|w| (anti.eval(w[1]) - anti.eval(w[0])).abs())
            .sum()
    }
}

impl Add for &Polynomial1D {
    type Output = Polynomial1D;
    fn add(self, rhs: &Polynomial1D) -> Polynomial1D {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial1D::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Polynomial1D {
    type Output = Polynomial1D;
    fn sub(self, rhs: &Polynomial1D) -> Polynomial1D {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Polynomial1D::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Mul for &Polynomial1D {
    type Output = Polynomial1D;
    fn mul(self, rhs: &Polynomial1D) -> Polynomial1D {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial1D::zero();
        }
        let mut out = vec![0.0; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial1D::new(out)
    }
}

impl Neg for &Polynomial1D {
    type Output = Polynomial1D;
    fn neg(self) -> Polynomial1D {
        self.scale(-1.0)
    }
}

impl fmt::Display for Polynomial1D {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms: Vec<(f64, Vec<(String, u32)>)> = self
            .coeffs
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0.0)
            .map(|(k, &c)| {
                let vars = if k == 0 {
                    Vec::new()
                } else {
                    vec![("t".to_string(), k as u32)]
                };
                (c, vars)
            })
            .collect();
        f.write_str(&text::format_terms(&terms))
    }
}

impl FromStr for Polynomial1D {
    type Err = Error;

    /// Accepts the variable names `t`, `x`, `s` or `x1`.
    fn from_str(s: &str) -> Result<Self> {
        let terms = text::parse_terms(s)?;
        let mut coeffs: Vec<f64> = Vec::new();
        for (c, factors) in terms {
            let mut k = 0usize;
            for (name, pow) in factors {
                match name.as_str() {
                    "t" | "x" | "s" | "x1" => k += pow as usize,
                    other => {
                        return Err(Error::Parse(format!(
                            "unexpected variable `{other}` in univariate polynomial"
                        )))
                    }
                }
            }
            if coeffs.len() <= k {
                coeffs.resize(k + 1, 0.0);
            }
            coeffs[k] += c;
        }
        Ok(Self::new(coeffs))
    }
}
