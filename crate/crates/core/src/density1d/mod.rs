//! One-dimensional densities and measures: exact piecewise-polynomial
//! densities, grid measures, the integral moduli `ω` and `σ`, Besov and BV
//! seminorms, layer-cake mixtures and the TV/Kantorovich distances.

mod besov;
mod grid;
mod mixture;
mod piecewise;

pub use besov::{besov_seminorm, besov_seminorm_with, log_grid, BesovSeminorm, MIN_GRID};
pub use grid::{sigma_density, GridMeasure1D, OmegaTable};
pub use mixture::{mixture_decompose, MixtureComponent, MixtureDecomposition};
pub use piecewise::{distances, l1_between, Distances, PiecewiseDensity1D, MASS_TOL};
