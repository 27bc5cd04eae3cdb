use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::multimeasure::MeasureSpec;

/// Current config and report schema version.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// `½ω ≤ σ ≤ 6ω` on random step densities.
    TEquiv,
    /// `ν(A) ≤ σ(ν, λ(A))`.
    TMeas,
    /// `μ(|f| ≤ ε) ≤ 8ek‖ρ‖∞ε^{1/k}` when `f^{(k)} ≡ 1`.
    #[serde(rename = "sublevel_8ek")]
    Sublevel8ek,
    /// Quantile nodes are `(μ(E)/4e)^k`-separated.
    #[serde(rename = "quantile_4e")]
    Quantile4e,
    DividedDiff,
    Krug,
    Mixture,
    /// One-dimensional oscillatory decay `t^{-1/k}`.
    #[serde(rename = "vdc_1d")]
    Vdc1d,
    /// `σ` exponent and dimension stability on cubes.
    MainReg,
    /// Oscillatory decay of normalized phases on cubes.
    CwMain,
    /// Logarithmic regime for `x₁⋯x_d`.
    IndDeg,
    /// Total variation against Kantorovich distance.
    TvK,
    /// `σ` bound for products of BV densities with `[f]₂`.
    #[serde(rename = "coeff_t1")]
    CoeffT1,
    /// `σ` bound for bounded individual degree with `[f]∞`.
    #[serde(rename = "coeff_t2")]
    CoeffT2,
    /// Small-ball ratios across dimension.
    CwRatio,
}

impl Suite {
    pub const ALL: [Suite; 15] = [
        Suite::TEquiv,
        Suite::TMeas,
        Suite::Sublevel8ek,
        Suite::Quantile4e,
        Suite::DividedDiff,
        Suite::Krug,
        Suite::Mixture,
        Suite::Vdc1d,
        Suite::MainReg,
        Suite::CwMain,
        Suite::IndDeg,
        Suite::TvK,
        Suite::CoeffT1,
        Suite::CoeffT2,
        Suite::CwRatio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::TEquiv => "t_equiv",
            Suite::TMeas => "t_meas",
            Suite::Sublevel8ek => "sublevel_8ek",
            Suite::Quantile4e => "quantile_4e",
            Suite::DividedDiff => "divided_diff",
            Suite::Krug => "krug",
            Suite::Mixture => "mixture",
            Suite::Vdc1d => "vdc_1d",
            Suite::MainReg => "main_reg",
            Suite::CwMain => "cw_main",
            Suite::IndDeg => "ind_deg",
            Suite::TvK => "tv_k",
            Suite::CoeffT1 => "coeff_t1",
            Suite::CoeffT2 => "coeff_t2",
            Suite::CwRatio => "cw_ratio",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown suite {s:?}")))
    }
}

/// Coefficient law of random polynomial families.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoeffLaw {
    /// I.i.d. uniform on `[-1, 1]`, with one top-degree coefficient forced
    /// to magnitude at least ½.
    #[default]
    Uniform,
}

/// Random polynomial family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub dims: Vec<usize>,
    pub degrees: Vec<u32>,
    /// Individual degree bound `m`; defaults to the total degree.
    #[serde(default)]
    pub individual_degree: Option<u32>,
    /// Members per (dimension, degree) pair.
    pub count: usize,
    #[serde(default)]
    pub law: CoeffLaw,
}

/// Optional overrides of suite tolerances. Missing entries take the suite
/// defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Relative slack on two-sided bounds.
    #[serde(default)]
    pub slack: Option<f64>,
    /// Allowed max/min ratio of constants across dimension or degree.
    #[serde(default)]
    pub stability: Option<f64>,
    /// Allowed deviation of a fitted exponent from its target.
    #[serde(default)]
    pub slope_margin: Option<f64>,
    /// Minimal coefficient of determination.
    #[serde(default)]
    pub r2: Option<f64>,
    /// Relative band around a fitted constant.
    #[serde(default)]
    pub band: Option<f64>,
    /// Absolute or relative tolerance on exact identities.
    #[serde(default)]
    pub exact: Option<f64>,
}

/// One experiment. Unknown fields are rejected.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub version: u32,
    pub suite: Suite,
    #[serde(default)]
    pub seed: u64,
    /// Fixed measure for suites that accept one instead of random draws.
    #[serde(default)]
    pub measure: Option<MeasureSpec>,
    /// Fixed phase (polynomial text) for suites that accept one.
    #[serde(default)]
    pub phase: Option<String>,
    #[serde(default)]
    pub family: Option<FamilySpec>,
    #[serde(default)]
    pub eps_grid: Option<Vec<f64>>,
    #[serde(default)]
    pub t_grid: Option<Vec<f64>>,
    /// Number of random cases.
    #[serde(default)]
    pub cases: Option<usize>,
    #[serde(default)]
    pub mc_count: Option<usize>,
    #[serde(default)]
    pub tolerances: Tolerances,
}

impl ExperimentConfig {
    /// Default config for `suite`.
    pub fn new(suite: Suite) -> Self {
        Self {
            version: SCHEMA_VERSION,
            suite,
            seed: 0,
            measure: None,
            phase: None,
            family: None,
            eps_grid: None,
            t_grid: None,
            cases: None,
            mc_count: None,
            tolerances: Tolerances::default(),
        }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "unsupported version {} (expected {SCHEMA_VERSION})",
                self.version
            )));
        }
        let positive = |name: &str, g: &Option<Vec<f64>>| -> Result<()> {
            match g {
                Some(v) if v.is_empty() || v.iter().any(|x| !(*x > 0.0) || !x.is_finite()) => {
                    Err(Error::Config(format!(
                        "{name} must be a nonempty list of positive numbers"
                    )))
                }
                _ => Ok(()),
            }
        };
        positive("eps_grid", &self.eps_grid)?;
        positive("t_grid", &self.t_grid)?;
        if self.cases == Some(0) || self.mc_count == Some(0) {
            return Err(Error::Config("cases and mc_count must be positive".into()));
        }
        if let Some(f) = &self.family {
            if f.dims.is_empty()
                || f.degrees.is_empty()
                || f.count == 0
                || f.dims.contains(&0)
                || f.degrees.contains(&0)
            {
                return Err(Error::Config(
                    "family needs nonempty dims and degrees, all positive, and count > 0".into(),
                ));
            }
        }
        Ok(())
    }

    pub(crate) fn cases_or(&self, d: usize) -> usize {
        self.cases.unwrap_or(d)
    }

    pub(crate) fn mc_or(&self, d: usize) -> usize {
        self.mc_count.unwrap_or(d)
    }

    pub(crate) fn eps_or(&self, d: impl FnOnce() -> Vec<f64>) -> Vec<f64> {
        self.eps_grid.clone().unwrap_or_else(d)
    }

    pub(crate) fn t_or(&self, d: impl FnOnce() -> Vec<f64>) -> Vec<f64> {
        self.t_grid.clone().unwrap_or_else(d)
    }

    pub(crate) fn family_or(&self, dims: &[usize], degrees: &[u32], count: usize) -> FamilySpec {
        self.family.clone().unwrap_or(FamilySpec {
            dims: dims.to_vec(),
            degrees: degrees.to_vec(),
            individual_degree: None,
            count,
            law: CoeffLaw::Uniform,
        })
    }
}
