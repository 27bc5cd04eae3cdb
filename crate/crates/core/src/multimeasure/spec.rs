use serde::{Deserialize, Serialize};

use crate::density1d::PiecewiseDensity1D;
use crate::error::{Error, Result};

use super::{ConvexBody, SampleableMeasureND};

/// JSON description of a measure, e.g. `{"type": "ball", "center": [0, 0],
/// "radius": 1}`. Product factors are density literals.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasureSpec {
    Product {
        factors: Vec<String>,
    },
    /// Uniform on a box; sampled coordinate-wise as a product.
    Box {
        intervals: Vec<[f64; 2]>,
    },
    Simplex {
        vertices: Vec<Vec<f64>>,
    },
    Ball {
        center: Vec<f64>,
        radius: f64,
    },
    Hpolytope {
        a: Vec<Vec<f64>>,
        b: Vec<f64>,
        bbox: Vec<[f64; 2]>,
    },
}

impl MeasureSpec {
    /// Uniform measure on `Qⁿ`.
    pub fn cube(n: usize) -> Self {
        Self::Box {
            intervals: vec![[-0.5, 0.5]; n],
        }
    }

    pub fn build(&self) -> Result<SampleableMeasureND> {
        match self {
            Self::Product { factors } => SampleableMeasureND::product(
                factors
                    .iter()
                    .map(|s| s.parse::<PiecewiseDensity1D>())
                    .collect::<Result<Vec<_>>>()?,
            ),
            Self::Box { intervals } => {
                let n = intervals.len();
                let factors = intervals
                    .iter()
                    .map(|&[a, b]| PiecewiseDensity1D::uniform(a, b))
                    .collect::<Result<Vec<_>>>()?;
                Ok(SampleableMeasureND::product(factors)?.with_concavity(Some(1.0 / n as f64)))
            }
            _ => SampleableMeasureND::uniform_body(self.body().expect("body variant")),
        }
    }

    /// The underlying convex body, for body variants and boxes.
    pub fn body(&self) -> Option<ConvexBody> {
        let pairs = |v: &[[f64; 2]]| v.iter().map(|&[a, b]| (a, b)).collect();
        match self {
            Self::Product { .. } => None,
            Self::Box { intervals } => Some(ConvexBody::Box {
                intervals: pairs(intervals),
            }),
            Self::Simplex { vertices } => Some(ConvexBody::Simplex {
                vertices: vertices.clone(),
            }),
            Self::Ball { center, radius } => Some(ConvexBody::Ball {
                center: center.clone(),
                radius: *radius,
            }),
            Self::Hpolytope { a, b, bbox } => Some(ConvexBody::HPolytope {
                rows: a.clone(),
                offsets: b.clone(),
                bbox: pairs(bbox),
            }),
        }
    }

    /// Exact body volume where known.
    pub fn volume(&self) -> Option<f64> {
        self.body().and_then(|b| b.volume())
    }
}

impl std::str::FromStr for MeasureSpec {
    type Err = Error;

    /// A JSON object, or a bare density literal for a 1-D product.
    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t.starts_with("piecewise") {
            t.parse::<PiecewiseDensity1D>()?;
            return Ok(Self::Product {
                factors: vec![t.to_string()],
            });
        }
        serde_json::from_str(t).map_err(|e| Error::Config(format!("measure spec: {e}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_variants() {
        let b: MeasureSpec = r#"{"type":"ball","center":[0,0,0],"radius":1}"#.parse().unwrap();
        assert!((b.volume().unwrap() - 4.0 * std::f64::consts::PI / 3.0).abs() < 1e-14);
        assert_eq!(b.build().unwrap().dim(), 3);
        let p: MeasureSpec = "piecewise [0,1] [1]".parse().unwrap();
        assert_eq!(p.build().unwrap().dim(), 1);
        let c: MeasureSpec = r#"{"type":"box","intervals":[[-0.5,0.5],[-0.5,0.5]]}"#
            .parse()
            .unwrap();
        assert_eq!(c, MeasureSpec::cube(2));
        assert!(r#"{"type":"ball","center":[0],"radius":1,"extra":2}"#
            .parse::<MeasureSpec>()
            .is_err());
        assert!(r#"{"type":"torus"}"#.parse::<MeasureSpec>().is_err());
    }
}
