//! Numerical tools for polynomial-phase oscillatory integrals and the
//! regularity of pushforward measures.
//!
//! * [`poly`]: sparse multivariate and dense univariate polynomials, real roots.
//! * [`density1d`]: one-dimensional densities, moduli of continuity, BV and
//!   Besov seminorms, layer-cake mixtures.
//! * [`multimeasure`]: product measures and uniform measures on convex bodies.
//! * [`pushforward`]: densities and distribution functions of `f(X)`.
//! * [`sublevel`]: sublevel-set measures and divided differences.
//! * [`oscint`]: oscillatory integrals `∫ e^{itf} dμ` and decay fits.
//! * [`harness`]: experiment configs, constant fitting and reports.

// `!(x > 0.0)` rejects NaN together with the bad range; row operations index
// two rows at once.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod density1d;
pub mod error;
pub mod harness;
pub mod multimeasure;
pub mod oscint;
pub mod poly;
pub mod pushforward;
pub mod quad;
pub mod sublevel;

pub use density1d::{GridMeasure1D, MixtureDecomposition, PiecewiseDensity1D};
pub use error::{Error, Result};
pub use multimeasure::{ConvexBody, MeasureSpec, SampleableMeasureND};
pub use poly::{LeadingData, Monomial, Polynomial, Polynomial1D, Root};
