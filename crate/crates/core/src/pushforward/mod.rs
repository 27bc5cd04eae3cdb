//! Image measures `μ∘f⁻¹` of polynomial maps: exact one-dimensional
//! distribution functions and densities, Monte Carlo histograms, and a
//! conditional estimator for product measures.

mod distances;
mod exact;
mod mc;
mod result;

pub use distances::pushforward_distances_1d;
pub use exact::{pushforward_cdf_1d, pushforward_density_1d, ExactPushforward, EXCLUSION_STEPS};
pub use mc::{
    pushforward_conditional, pushforward_exact_grid, pushforward_exact_on, pushforward_mc,
    sample_values, DEFAULT_BINS, MIN_MC_COUNT, TAIL_CLIP,
};
pub use result::{Method, PushforwardCdf, PushforwardResult};
