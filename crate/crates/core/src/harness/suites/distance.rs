use rayon::prelude::*;
use serde_json::json;

use super::Outcome;
use crate::density1d::{besov_seminorm_with, log_grid, PiecewiseDensity1D};
use crate::error::Result;
use crate::harness::{CaseRecord, ExperimentConfig, Table};
use crate::poly::Polynomial1D;
use crate::pushforward::{pushforward_distances_1d, pushforward_exact_grid};

/// Cells of the exact pushforward grid used for the Besov seminorms.
const BESOV_CELLS: usize = 1 << 16;

/// `B^α_{1,∞}` seminorm of the law of `g(X)` from its exact cell masses.
fn pushforward_besov(
    rho: &PiecewiseDensity1D,
    g: &Polynomial1D,
    alpha: f64,
    grid: &[f64],
) -> Result<f64> {
    let cells = pushforward_exact_grid(rho, g, BESOV_CELLS)?;
    let top = grid.iter().copied().fold(0.0, f64::max);
    let table = cells.grid.omega_table(top);
    Ok(besov_seminorm_with(|e| table.omega(e), alpha, grid)?.value)
}

pub(crate) fn tv_k(cfg: &ExperimentConfig) -> Result<Outcome> {
    let deltas = cfg.eps_or(|| log_grid(0.01, 0.3, 8));
    let band = cfg.tolerances.band.unwrap_or(0.2);
    let rho = PiecewiseDensity1D::uniform(-0.5, 0.5)?;
    let g = Polynomial1D::identity();
    let d = 2.0;
    let alpha = 1.0 / d;
    let besov_grid = log_grid(1e-4, 0.5, 32);
    let b_g = pushforward_besov(&rho, &g, alpha, &besov_grid)?;
    struct Row {
        delta: f64,
        tv: f64,
        k: f64,
        besov: f64,
        ratio: f64,
    }
    let rows: Vec<Row> = deltas
        .par_iter()
        .map(|&delta| {
            let f = Polynomial1D::new(vec![0.0, 1.0, delta]);
            let dist = pushforward_distances_1d(&rho, &f, &g, 64)?;
            let besov = pushforward_besov(&rho, &f, alpha, &besov_grid)?.max(b_g);
            let shape =
                besov.powf(1.0 / (1.0 + alpha)) * dist.kantorovich.powf(alpha / (1.0 + alpha));
            Ok(Row {
                delta,
                tv: dist.tv,
                k: dist.kantorovich,
                besov,
                ratio: dist.tv / shape,
            })
        })
        .collect::<Result<_>>()?;
    let smallest = rows
        .iter()
        .min_by(|a, b| a.delta.total_cmp(&b.delta))
        .expect("nonempty grid");
    let c_hat = smallest.ratio;
    let mut out = Outcome::default();
    out.constant("fitted_constant", c_hat);
    let mut table = Table::new("distances", &["delta", "d_tv", "d_k", "besov", "ratio"]);
    for r in &rows {
        table.rows.push(vec![r.delta, r.tv, r.k, r.besov, r.ratio]);
        out.cases.push(
            CaseRecord::new(
                format!("delta {}", r.delta),
                json!({"delta": r.delta, "alpha": alpha}),
                r.ratio,
                c_hat * (1.0 + band),
                r.ratio <= c_hat * (1.0 + band),
            )
            .with_detail(json!({"d_tv": r.tv, "d_k": r.k, "besov": r.besov})),
        );
    }
    out.tables.push(table);
    Ok(out)
}
