use serde_json::json;

use super::Outcome;
use crate::density1d::PiecewiseDensity1D;
use crate::error::Result;
use crate::harness::fit::spread;
use crate::harness::random::{case_rng, random_polynomial};
use crate::harness::{CaseRecord, ExperimentConfig, Table};
use crate::multimeasure::SampleableMeasureND;
use crate::oscint::{decay_fit, normalize_phase, osc_sweep, t_grid, McOptions, OscMethod};
use crate::poly::Polynomial;

pub(crate) fn vdc_1d(cfg: &ExperimentConfig) -> Result<Outcome> {
    let ts = cfg.t_or(|| t_grid(10.0, 1e4, 48));
    let margin = cfg.tolerances.slope_margin.unwrap_or(0.05);
    let stability = cfg.tolerances.stability.unwrap_or(3.0);
    let degrees: Vec<u32> = cfg
        .family
        .as_ref()
        .map_or(vec![2, 3, 4], |f| f.degrees.clone());
    let rho = PiecewiseDensity1D::uniform(0.0, 1.0)?;
    let bv = rho.bv_seminorm();
    let mu = SampleableMeasureND::product(vec![rho])?;
    let mut out = Outcome::default();
    let mut table = Table::new("decay", &["k", "t", "abs", "err"]);
    let mut constants = Vec::new();
    for &k in &degrees {
        let fact: f64 = (1..=k).map(|j| j as f64).product();
        let f = Polynomial::from_terms(1, [(vec![k], 1.0 / fact)])?;
        let vals = osc_sweep(
            &mu,
            &f,
            &ts,
            OscMethod::Exact,
            McOptions {
                count: 0,
                seed: cfg.seed,
            },
        )?;
        let pairs: Vec<(f64, f64)> = vals.iter().map(|v| (v.t, v.value.norm())).collect();
        for v in &vals {
            table
                .rows
                .push(vec![k as f64, v.t, v.value.norm(), v.abs_error_estimate]);
        }
        let fit = decay_fit(&pairs, Some([ts[0], ts[ts.len() - 1]]), 0.0, Some(k as f64))?;
        let sup = fit.sup_scaled.expect("degree supplied");
        let target = -1.0 / k as f64 + margin;
        let c = sup / (k as f64 * bv);
        constants.push(c);
        out.constant(format!("sup_scaled_k{k}"), sup);
        out.constant(format!("constant_k{k}"), c);
        out.cases.push(
            CaseRecord::new(
                format!("k {k}: slope"),
                json!({"phase": f.to_string(), "t_min": ts[0], "t_max": ts[ts.len() - 1], "points": ts.len()}),
                fit.slope,
                target,
                fit.slope <= target && sup.is_finite(),
            )
            .with_detail(json!({"r2": fit.r2, "sup_scaled": sup, "log_constant": fit.log_constant})),
        );
    }
    let s = spread(&constants);
    out.constant("constant_spread", s);
    out.cases.push(CaseRecord::new(
        "constant spread across k",
        json!({"degrees": degrees}),
        s,
        stability,
        s <= stability,
    ));
    out.tables.push(table);
    Ok(out)
}

pub(crate) fn cw_main(cfg: &ExperimentConfig) -> Result<Outcome> {
    let fam = cfg.family_or(&[2, 4], &[2, 3], 2);
    let ts = cfg.t_or(|| t_grid(10.0, 300.0, 24));
    let count = cfg.mc_or(1_000_000);
    let stability = cfg.tolerances.stability.unwrap_or(3.0);
    let floor = 5.0 / (count as f64).sqrt();
    let mut jobs = Vec::new();
    for &d in &fam.degrees {
        for &n in &fam.dims {
            for member in 0..fam.count {
                jobs.push((d, n, member));
            }
        }
    }
    struct Row {
        d: u32,
        n: usize,
        member: usize,
        phase: Polynomial,
        abs_mean_stderr: f64,
        pairs: Vec<(f64, f64)>,
        sup: Option<f64>,
    }
    let rows: Vec<Row> = jobs
        .iter()
        .enumerate()
        .map(|(j, &(d, n, member))| {
            let seed = cfg.seed.wrapping_add(j as u64);
            let mut rng = case_rng(seed, j);
            let f = random_polynomial(&mut rng, n, d, fam.individual_degree);
            let mu = SampleableMeasureND::unit_cube(n);
            let norm = normalize_phase(&mu, &f, count, seed)?;
            let vals = osc_sweep(
                &mu,
                &norm.phase,
                &ts,
                OscMethod::Mc,
                McOptions { count, seed },
            )?;
            let pairs: Vec<(f64, f64)> = vals.iter().map(|v| (v.t, v.value.norm())).collect();
            let sup = pairs
                .iter()
                .filter(|p| p.1 >= floor)
                .map(|&(t, v)| v * t.powf(1.0 / d as f64))
                .reduce(f64::max);
            Ok(Row {
                d,
                n,
                member,
                phase: norm.phase,
                abs_mean_stderr: norm.abs_mean_stderr,
                pairs,
                sup,
            })
        })
        .collect::<Result<_>>()?;
    let mut out = Outcome::default();
    let mut table = Table::new("decay", &["d", "n", "member", "t", "abs"]);
    for r in &rows {
        for &(t, v) in &r.pairs {
            table
                .rows
                .push(vec![r.d as f64, r.n as f64, r.member as f64, t, v]);
        }
        let scaled = r.sup.map(|s| s / (r.d as usize).min(r.n) as f64);
        out.cases.push(
            CaseRecord::new(
                format!("d {}, n {}, member {}", r.d, r.n, r.member),
                json!({"phase": r.phase.to_string(), "mc_count": count}),
                r.sup.unwrap_or(0.0),
                floor,
                r.sup.is_some_and(f64::is_finite),
            )
            .with_detail(json!({"constant": scaled, "normalization_stderr": r.abs_mean_stderr})),
        );
    }
    for &d in &fam.degrees {
        let per_n: Vec<f64> = fam
            .dims
            .iter()
            .map(|&n| {
                rows.iter()
                    .filter(|r| r.d == d && r.n == n)
                    .filter_map(|r| r.sup.map(|s| s / (d as usize).min(n) as f64))
                    .fold(0.0, f64::max)
            })
            .collect();
        for (&n, &c) in fam.dims.iter().zip(&per_n) {
            out.constant(format!("constant_d{d}_n{n}"), c);
        }
        let s = spread(&per_n);
        out.constant(format!("spread_d{d}"), s);
        out.cases.push(CaseRecord::new(
            format!("d {d}: constant spread across n"),
            json!({"dims": fam.dims}),
            s,
            stability,
            s <= stability,
        ));
    }
    out.tables.push(table);
    Ok(out)
}
