use serde::Serialize;
use serde_json::json;

use crate::density1d::GridMeasure1D;

use super::ExactPushforward;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    /// Cell masses from the exact distribution function.
    Exact1d,
    /// Histogram of Monte Carlo draws.
    Mc,
    /// Monte Carlo over all but the last coordinate, exact along the last.
    Conditional,
}

/// Distribution function attached to a pushforward result.
#[derive(Clone, Debug)]
pub enum PushforwardCdf {
    Exact(Box<ExactPushforward>),
    /// Sorted draws.
    Empirical(Vec<f64>),
    /// Cumulative cell masses with linear interpolation inside cells.
    Table {
        left: f64,
        h: f64,
        cum: Vec<f64>,
    },
}

impl PushforwardCdf {
    pub fn eval(&self, s: f64) -> f64 {
        match self {
            Self::Exact(p) => p.cdf(s),
            Self::Empirical(sorted) => {
                sorted.partition_point(|&v| v <= s) as f64 / sorted.len() as f64
            }
            Self::Table { left, h, cum } => {
                let x = (s - left) / h;
                if x <= 0.0 {
                    return 0.0;
                }
                let last = cum.len() - 1;
                if x >= last as f64 {
                    return cum[last];
                }
                let i = x.floor() as usize;
                cum[i] + (x - i as f64) * (cum[i + 1] - cum[i])
            }
        }
    }
}

/// Discretized image measure `μ∘f⁻¹` with its distribution function.
#[derive(Clone, Debug)]
pub struct PushforwardResult {
    pub grid: GridMeasure1D,
    /// Standard error of the density estimate per cell (zero for exact results).
    pub stderr: Vec<f64>,
    pub cdf: PushforwardCdf,
    pub method: Method,
    pub mc_count: Option<usize>,
    pub seed: Option<u64>,
}

impl PushforwardResult {
    pub fn cell_centers(&self) -> Vec<f64> {
        let (l, h) = (self.grid.left(), self.grid.h());
        (0..self.grid.weights().len())
            .map(|j| l + (j as f64 + 0.5) * h)
            .collect()
    }

    /// Cell masses divided by the cell width.
    pub fn density(&self) -> Vec<f64> {
        self.grid
            .weights()
            .iter()
            .map(|w| w / self.grid.h())
            .collect()
    }

    /// Rows `s,density,stderr` at cell centers, with a header line.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("s,density,stderr\n");
        for ((s, d), e) in self
            .cell_centers()
            .iter()
            .zip(self.density())
            .zip(&self.stderr)
        {
            out.push_str(&format!("{s},{d},{e}\n"));
        }
        out
    }

    /// Metadata plus the distribution function at the cell edges.
    pub fn to_json(&self) -> serde_json::Value {
        let (l, h) = (self.grid.left(), self.grid.h());
        let edges: Vec<f64> = (0..=self.grid.weights().len())
            .map(|j| l + j as f64 * h)
            .collect();
        let cdf: Vec<[f64; 2]> = edges.iter().map(|&s| [s, self.cdf.eval(s)]).collect();
        json!({
            "method": self.method,
            "mc_count": self.mc_count,
            "seed": self.seed,
            "left": l,
            "h": h,
            "bins": self.grid.weights().len(),
            "mass": self.grid.total(),
            "cdf": cdf,
        })
    }
}
