//! Sampleable measures on `ℝⁿ`: products of one-dimensional densities and
//! uniform distributions on convex bodies, with reproducible parallel
//! sampling and Krug's directional total-variation formula.

mod body;
mod krug;
mod measure;
mod spec;

pub use body::{unit_ball_volume, ConvexBody};
pub use krug::{krug_check_1d, krug_check_2d, KrugCheck, PlanarDensity};
pub use measure::{
    acceptance_estimate, chunk_rng, kolmogorov_distance, mean_stderr, MeasureKind,
    SampleableMeasureND, CHUNK, MIN_ACCEPTANCE,
};
pub use spec::MeasureSpec;
