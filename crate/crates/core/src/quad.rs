//! Gauss–Legendre rules.

use std::sync::OnceLock;

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`,
/// computed by Newton iteration on the Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            let p = if n == 0 { 1.0 } else { p1 };
            let pm1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * p - pm1) / (x * x - 1.0);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Cached 16-point rule.
pub fn gl16() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(16))
}

/// `∫_a^b g` with the 16-point rule.
pub fn integrate16(a: f64, b: f64, mut g: impl FnMut(f64) -> f64) -> f64 {
    let (x, w) = gl16();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let mut s = 0.0;
    for (xi, wi) in x.iter().zip(w) {
        s += wi * g(mid + half * xi);
    }
    s * half
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_for_degree_31() {
        let (x, w) = gauss_legendre(16);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(30)).sum();
        assert!((s - 2.0 / 31.0).abs() < 1e-14);
        let five = gauss_legendre(5);
        assert!(five.0[2].abs() < 1e-16);
    }

    #[test]
    fn integrates_cosine() {
        let v = integrate16(0.0, 1.0, f64::cos);
        assert!((v - 1f64.sin()).abs() < 1e-15);
    }
}
