//! Shared inputs for the criterion benches.

use corput_core::{PiecewiseDensity1D, Polynomial, SampleableMeasureND};

/// Step density with `cells` pieces of alternating height on `[0, 1]`.
pub fn comb(cells: usize) -> PiecewiseDensity1D {
    let breaks: Vec<f64> = (0..=cells).map(|k| k as f64 / cells as f64).collect();
    let heights: Vec<f64> = (0..cells)
        .map(|k| if k % 2 == 0 { 1.5 } else { 0.5 })
        .collect();
    PiecewiseDensity1D::step(breaks, &heights)
        .unwrap()
        .normalized()
        .unwrap()
}

/// Uniform measure on `[0, 1]^n` with a dense cubic phase.
pub fn cube_cubic(n: usize) -> (SampleableMeasureND, Polynomial) {
    let vars: Vec<String> = (1..=n).map(|k| format!("x{k}")).collect();
    let text = format!("{} + {}^3 - 0.5*{}", vars.join("*"), vars[0], vars[n - 1]);
    (
        SampleableMeasureND::unit_cube(n),
        Polynomial::parse_with_dim(&text, n).unwrap(),
    )
}
