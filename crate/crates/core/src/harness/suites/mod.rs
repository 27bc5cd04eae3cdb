use std::collections::BTreeMap;

use super::{CaseRecord, ExperimentConfig, InequalityReport, Suite, Table};
use crate::error::Result;

mod decay;
mod distance;
mod onedim;
mod regularity;

/// Raw suite output before indexing and the verdict.
#[derive(Default)]
pub(crate) struct Outcome {
    pub cases: Vec<CaseRecord>,
    pub constants: BTreeMap<String, f64>,
    pub tables: Vec<Table>,
}

impl Outcome {
    pub fn constant(&mut self, name: impl Into<String>, v: f64) {
        self.constants.insert(name.into(), v);
    }
}

/// Run the suite named in `config`.
pub fn run_suite(config: &ExperimentConfig) -> Result<InequalityReport> {
    config.validate()?;
    let out = match config.suite {
        Suite::TEquiv => onedim::t_equiv(config)?,
        Suite::TMeas => onedim::t_meas(config)?,
        Suite::Sublevel8ek => onedim::sublevel_8ek(config)?,
        Suite::Quantile4e => onedim::quantile_4e(config)?,
        Suite::DividedDiff => onedim::divided_diff(config)?,
        Suite::Krug => onedim::krug(config)?,
        Suite::Mixture => onedim::mixture(config)?,
        Suite::Vdc1d => decay::vdc_1d(config)?,
        Suite::CwMain => decay::cw_main(config)?,
        Suite::MainReg => regularity::main_reg(config)?,
        Suite::IndDeg => regularity::ind_deg(config)?,
        Suite::CoeffT1 => regularity::coeff_t1(config)?,
        Suite::CoeffT2 => regularity::coeff_t2(config)?,
        Suite::CwRatio => regularity::cw_ratio_suite(config)?,
        Suite::TvK => distance::tv_k(config)?,
    };
    Ok(InequalityReport::new(
        config.suite,
        config.seed,
        out.cases,
        out.constants,
        out.tables,
    ))
}
