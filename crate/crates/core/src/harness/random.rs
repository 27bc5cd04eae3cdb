//! Seeded random instances for the suites.

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use crate::density1d::PiecewiseDensity1D;
use crate::multimeasure::chunk_rng;
use crate::poly::Polynomial;

/// Generator for case `index` of a run seeded with `seed`.
pub fn case_rng(seed: u64, index: usize) -> ChaCha8Rng {
    chunk_rng(seed ^ 0x5eed_ca5e, index as u64)
}

/// Probability step density with 1 to `max_pieces` pieces starting in
/// `[-1, 0]`, widths in `[0.05, 1]` and heights in `[0, 1]`; an interior
/// piece is zero with probability `zero_prob`.
pub fn random_step_density(
    rng: &mut impl Rng,
    max_pieces: usize,
    zero_prob: f64,
) -> PiecewiseDensity1D {
    let k = rng.random_range(1..=max_pieces.max(1));
    let mut breaks = vec![rng.random_range(-1.0..0.0)];
    for _ in 0..k {
        let w = rng.random_range(0.05..1.0);
        breaks.push(breaks[breaks.len() - 1] + w);
    }
    let values: Vec<f64> = (0..k)
        .map(|i| {
            let interior = i > 0 && i + 1 < k;
            if interior && rng.random::<f64>() < zero_prob {
                0.0
            } else {
                rng.random_range(0.05..1.0)
            }
        })
        .collect();
    PiecewiseDensity1D::step(breaks, &values)
        .and_then(PiecewiseDensity1D::normalized)
        .expect("positive mass")
}

/// Exponent vectors with total degree at most `d` and each entry at most `m`.
pub fn monomials(n: usize, d: u32, m: u32) -> Vec<Vec<u32>> {
    fn rec(n: usize, left: u32, m: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left.min(m) {
            cur.push(e);
            rec(n, left - e, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, d, m, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Dense random polynomial of total degree exactly `d` and individual degree
/// at most `m`: every admissible coefficient i.i.d. uniform on `[-1, 1]`, one
/// random top-degree coefficient forced to magnitude in `[½, 1]`.
pub fn random_polynomial(rng: &mut impl Rng, n: usize, d: u32, m: Option<u32>) -> Polynomial {
    let m = m.unwrap_or(d).min(d);
    let mons = monomials(n, d, m);
    let top: Vec<usize> = (0..mons.len())
        .filter(|&i| mons[i].iter().sum::<u32>() == d)
        .collect();
    assert!(
        !top.is_empty(),
        "no monomial of degree {d} with individual degree {m} in {n} variables"
    );
    let mut coeffs: Vec<f64> = mons.iter().map(|_| rng.random_range(-1.0..1.0)).collect();
    let pick = top[rng.random_range(0..top.len())];
    let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
    coeffs[pick] = sign * rng.random_range(0.5..1.0);
    Polynomial::from_terms(n, mons.into_iter().zip(coeffs)).expect("consistent dimension")
}

/// Union of 1 to 3 random intervals inside `[lo, hi]`.
pub fn random_interval_union(rng: &mut impl Rng, lo: f64, hi: f64) -> Vec<(f64, f64)> {
    let k = rng.random_range(1..=3);
    (0..k)
        .map(|_| {
            let a = rng.random_range(lo..hi);
            let b = rng.random_range(lo..hi);
            let (a, b) = (a.min(b), a.max(b));
            (a, b.max(a + 1e-3 * (hi - lo)))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monomial_counts() {
        assert_eq!(monomials(8, 3, 3).len(), 165);
        assert_eq!(monomials(3, 2, 1).len(), 7);
    }

    #[test]
    fn families() {
        let mut rng = case_rng(1, 0);
        for _ in 0..20 {
            let p = random_polynomial(&mut rng, 4, 3, Some(1));
            assert_eq!(p.degree(), 3);
            assert!(p.individual_degree() <= 1);
            assert!(p.leading_data().unwrap().linf >= 0.5);
            let r = random_step_density(&mut rng, 6, 0.3);
            assert!((r.mass() - 1.0).abs() < 1e-12);
        }
    }
}
