use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::Outcome;
use crate::density1d::{log_grid, sigma_density, PiecewiseDensity1D};
use crate::error::Result;
use crate::harness::fit::{fit_constant, spread};
use crate::harness::random::{case_rng, random_polynomial, random_step_density};
use crate::harness::{CaseRecord, ExperimentConfig, FamilySpec, Table};
use crate::multimeasure::SampleableMeasureND;
use crate::oscint::linear_fit;
use crate::poly::Polynomial;
use crate::pushforward::{
    pushforward_conditional, pushforward_exact_grid, pushforward_mc, DEFAULT_BINS,
};
use crate::sublevel::{cw_ratio, default_t_grid};

/// `σ(ν̂, ε)` of the histogram density of `f(X)` on each grid point.
fn histogram_sigma(
    mu: &SampleableMeasureND,
    f: &Polynomial,
    count: usize,
    seed: u64,
    eps: &[f64],
) -> Result<Vec<f64>> {
    let hist = pushforward_mc(mu, f, count, DEFAULT_BINS, seed)?;
    let rho = hist.grid.to_density();
    eps.par_iter().map(|&e| sigma_density(&rho, e, 0)).collect()
}

fn jobs(fam: &FamilySpec) -> Vec<(u32, usize, usize)> {
    let mut v = Vec::new();
    for &d in &fam.degrees {
        for &n in &fam.dims {
            for m in 0..fam.count {
                v.push((d, n, m));
            }
        }
    }
    v
}

struct SigmaRow {
    d: u32,
    n: usize,
    member: usize,
    inputs: serde_json::Value,
    sigma: Vec<f64>,
    /// Normalized constant compared across dimensions.
    constant: f64,
}

/// Stability cases: for each degree, the spread across dimensions of the
/// largest constant among that (d, n) family.
fn stability_cases(out: &mut Outcome, rows: &[SigmaRow], fam: &FamilySpec, limit: f64) {
    for &d in &fam.degrees {
        let per_n: Vec<f64> = fam
            .dims
            .iter()
            .map(|&n| {
                rows.iter()
                    .filter(|r| r.d == d && r.n == n)
                    .map(|r| r.constant)
                    .fold(f64::NEG_INFINITY, f64::max)
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
            limit,
            s <= limit,
        ));
    }
}

fn sigma_table(rows: &[SigmaRow], eps: &[f64]) -> Table {
    let mut t = Table::new("sigma", &["d", "n", "member", "eps", "sigma"]);
    for r in rows {
        for (e, s) in eps.iter().zip(&r.sigma) {
            t.rows
                .push(vec![r.d as f64, r.n as f64, r.member as f64, *e, *s]);
        }
    }
    t
}

/// Cells of the exact grid used as the one-dimensional oracle.
const ORACLE_CELLS: usize = 4096;

/// Largest relative gap tolerated between histogram and exact constants.
const ORACLE_GAP: f64 = 0.15;

pub(crate) fn main_reg(cfg: &ExperimentConfig) -> Result<Outcome> {
    let fam = cfg.family_or(&[1, 2, 3, 5, 8], &[2, 3], 2);
    let eps = cfg.eps_or(|| log_grid(1e-3, 1e-1, 9));
    let count = cfg.mc_or(1_000_000);
    let margin = cfg.tolerances.slope_margin.unwrap_or(0.1);
    let stability = cfg.tolerances.stability.unwrap_or(3.0);
    let log_eps: Vec<f64> = eps.iter().map(|e| e.ln()).collect();
    let mut oracles = Vec::new();
    let rows: Vec<SigmaRow> = jobs(&fam)
        .into_iter()
        .enumerate()
        .map(|(j, (d, n, member))| {
            let seed = cfg.seed.wrapping_add(j as u64);
            let f = random_polynomial(&mut case_rng(seed, j), n, d, fam.individual_degree);
            let mu = SampleableMeasureND::unit_cube(n);
            let sigma = histogram_sigma(&mu, &f, count, seed, &eps)?;
            let var = f.cube_variance();
            let samples: Vec<(f64, f64)> = eps.iter().zip(&sigma).map(|(e, s)| (*s, e.powf(1.0 / d as f64))).collect();
            let c = fit_constant(&samples)?.value;
            let constant = c * var.powf(1.0 / (2.0 * d as f64)) / (d as usize).min(n) as f64;
            if n == 1 {
                let g = f.to_univariate()?;
                let exact = pushforward_exact_grid(&mu.factors().expect("product")[0], &g, ORACLE_CELLS)?;
                let rho = exact.grid.to_density();
                let exact_sigma = eps.iter().map(|&e| sigma_density(&rho, e, 0)).collect::<Result<Vec<_>>>()?;
                let ex: Vec<(f64, f64)> = eps.iter().zip(&exact_sigma).map(|(e, s)| (*s, e.powf(1.0 / d as f64))).collect();
                oracles.push((d, member, fit_constant(&ex)?.value, c, exact_sigma));
            }
            Ok(SigmaRow {
                d,
                n,
                member,
                inputs: json!({"poly": f.to_string(), "variance": var, "mc_count": count, "seed": seed}),
                sigma,
                constant,
            })
        })
        .collect::<Result<_>>()?;
    let mut out = Outcome::default();
    for r in &rows {
        let ls: Vec<f64> = r.sigma.iter().map(|s| s.ln()).collect();
        let (slope, _, r2) = linear_fit(&log_eps, &ls);
        let target = 1.0 / r.d as f64 - margin;
        out.cases.push(
            CaseRecord::new(
                format!("d {}, n {}, member {}: slope", r.d, r.n, r.member),
                r.inputs.clone(),
                slope,
                target,
                slope >= target,
            )
            .with_detail(json!({"r2": r2, "constant": r.constant})),
        );
    }
    for (d, member, exact_c, mc_c, exact_sigma) in oracles {
        let ls: Vec<f64> = exact_sigma.iter().map(|s| s.ln()).collect();
        let (slope, _, _) = linear_fit(&log_eps, &ls);
        let gap = (mc_c - exact_c).abs() / exact_c;
        out.cases.push(
            CaseRecord::new(
                format!("d {d}, n 1, member {member}: exact oracle"),
                json!({"cells": ORACLE_CELLS}),
                gap,
                ORACLE_GAP,
                gap <= ORACLE_GAP,
            )
            .with_detail(json!({"exact_constant": exact_c, "histogram_constant": mc_c, "exact_slope": slope})),
        );
    }
    stability_cases(&mut out, &rows, &fam, stability);
    out.tables.push(sigma_table(&rows, &eps));
    Ok(out)
}

/// Product of `n` random step densities and the largest BV seminorm among them.
fn random_product(rng: &mut impl Rng, n: usize) -> Result<(SampleableMeasureND, f64)> {
    let factors: Vec<PiecewiseDensity1D> =
        (0..n).map(|_| random_step_density(rng, 4, 0.0)).collect();
    let m = factors.iter().map(|f| f.bv_seminorm()).fold(0.0, f64::max);
    Ok((SampleableMeasureND::product(factors)?, m))
}

pub(crate) fn coeff_t1(cfg: &ExperimentConfig) -> Result<Outcome> {
    let fam = cfg.family_or(&[1, 2, 4], &[2], 2);
    let eps = cfg.eps_or(|| log_grid(1e-3, 1e-1, 9));
    let count = cfg.mc_or(1_000_000);
    let stability = cfg.tolerances.stability.unwrap_or(3.0);
    let rows: Vec<SigmaRow> = jobs(&fam)
        .into_iter()
        .enumerate()
        .map(|(j, (d, n, member))| {
            let seed = cfg.seed.wrapping_add(j as u64);
            let mut rng = case_rng(seed, j);
            let f = random_polynomial(&mut rng, n, d, fam.individual_degree);
            let (mu, tv) = random_product(&mut rng, n)?;
            let sigma = histogram_sigma(&mu, &f, count, seed, &eps)?;
            let l2 = f.leading_data()?.l2;
            let mind = (d as usize).min(n) as f64;
            let samples: Vec<(f64, f64)> = eps
                .iter()
                .zip(&sigma)
                .map(|(e, s)| {
                    (
                        *s,
                        mind * (1.0 + tv) * l2.powf(-1.0 / d as f64) * e.powf(1.0 / d as f64),
                    )
                })
                .collect();
            let constant = fit_constant(&samples)?.value;
            Ok(SigmaRow {
                d,
                n,
                member,
                inputs: json!({"poly": f.to_string(), "max_tv": tv, "l2": l2, "seed": seed}),
                sigma,
                constant,
            })
        })
        .collect::<Result<_>>()?;
    let mut out = Outcome::default();
    for r in &rows {
        out.cases.push(CaseRecord::new(
            format!("d {}, n {}, member {}", r.d, r.n, r.member),
            r.inputs.clone(),
            r.constant,
            f64::INFINITY,
            r.constant.is_finite() && r.constant > 0.0,
        ));
    }
    stability_cases(&mut out, &rows, &fam, stability);
    out.tables.push(sigma_table(&rows, &eps));
    Ok(out)
}

pub(crate) fn coeff_t2(cfg: &ExperimentConfig) -> Result<Outcome> {
    let mut fam = cfg.family_or(&[2, 4, 8], &[2], 2);
    let m = *fam.individual_degree.get_or_insert(1);
    let eps = cfg.eps_or(|| log_grid(1e-3, 1e-1, 9));
    let count = cfg.mc_or(1_000_000);
    let stability = cfg.tolerances.stability.unwrap_or(3.0);
    let rows: Vec<SigmaRow> = jobs(&fam)
        .into_iter()
        .enumerate()
        .map(|(j, (d, n, member))| {
            let seed = cfg.seed.wrapping_add(j as u64);
            let mut rng = case_rng(seed, j);
            let f = random_polynomial(&mut rng, n, d, Some(m));
            let (mu, tv) = random_product(&mut rng, n)?;
            let sigma = histogram_sigma(&mu, &f, count, seed, &eps)?;
            let linf = f.leading_data()?.linf;
            let (mf, df) = (m as f64, d as f64);
            let samples: Vec<(f64, f64)> = eps
                .iter()
                .zip(&sigma)
                .map(|(e, s)| {
                    let log = (e / linf).ln().abs().powf(df - mf) + 1.0;
                    (*s, (1.0 + tv).powf(df / mf) * linf.powf(-1.0 / mf) * e.powf(1.0 / mf) * log)
                })
                .collect();
            let constant = fit_constant(&samples)?.value;
            Ok(SigmaRow {
                d,
                n,
                member,
                inputs: json!({"poly": f.to_string(), "max_tv": tv, "linf": linf, "m": m, "seed": seed}),
                sigma,
                constant,
            })
        })
        .collect::<Result<_>>()?;
    let mut out = Outcome::default();
    for r in &rows {
        out.cases.push(CaseRecord::new(
            format!("d {}, n {}, member {}", r.d, r.n, r.member),
            r.inputs.clone(),
            r.constant,
            f64::INFINITY,
            r.constant.is_finite() && r.constant > 0.0,
        ));
    }
    stability_cases(&mut out, &rows, &fam, stability);
    out.tables.push(sigma_table(&rows, &eps));
    Ok(out)
}

/// `ρ(X₁⋯X_d ≤ s)` for independent U[0,1] factors.
pub fn product_cdf(d: u32, s: f64) -> f64 {
    if s <= 0.0 {
        return 0.0;
    }
    if s >= 1.0 {
        return 1.0;
    }
    let l = -s.ln();
    let mut term = 1.0;
    let mut sum = 1.0;
    for j in 1..d {
        term *= l / j as f64;
        sum += term;
    }
    s * sum
}

pub(crate) fn ind_deg(cfg: &ExperimentConfig) -> Result<Outcome> {
    let degrees: Vec<u32> = cfg
        .family
        .as_ref()
        .map_or(vec![2, 3], |f| f.degrees.clone());
    let eps = cfg.eps_or(|| log_grid(1e-4, 1e-2, 16));
    let count = cfg.mc_or(1_000_000);
    let r2_min = cfg.tolerances.r2.unwrap_or(0.95);
    let oracle_tol = cfg.tolerances.slack.unwrap_or(0.05);
    let e_min = eps.iter().copied().fold(f64::INFINITY, f64::min);
    let h = e_min / 16.0;
    let cells = (1.0 / h).ceil() as usize;
    let mut out = Outcome::default();
    let mut table = Table::new("omega", &["d", "eps", "omega", "oracle"]);
    for &d in &degrees {
        let u = PiecewiseDensity1D::uniform(0.0, 1.0)?;
        let mu = SampleableMeasureND::product(vec![u; d as usize])?;
        let exps = vec![1u32; d as usize];
        let f = Polynomial::from_terms(d as usize, [(exps, 1.0)])?;
        let res = pushforward_conditional(
            &mu,
            &f,
            count,
            cfg.seed.wrapping_add(d as u64),
            0.0,
            h,
            cells,
        )?;
        let omega: Vec<f64> = eps.iter().map(|&e| res.grid.omega(e)).collect();
        let logs: Vec<f64> = eps
            .iter()
            .map(|e| (1.0 / e).ln().powi(d as i32 - 1))
            .collect();
        let ratio: Vec<f64> = omega.iter().zip(&eps).map(|(w, e)| w / e).collect();
        let (slope, intercept, r2) = linear_fit(&logs, &ratio);
        for (i, &e) in eps.iter().enumerate() {
            let oracle = 2.0 * product_cdf(d, e);
            let rel = (omega[i] - oracle).abs() / oracle;
            table.rows.push(vec![d as f64, e, omega[i], oracle]);
            out.cases.push(CaseRecord::new(
                format!("d {d}, eps {e}: oracle"),
                json!({"d": d, "eps": e, "mc_count": count}),
                omega[i],
                oracle,
                rel <= oracle_tol,
            ));
        }
        out.constant(format!("slope_d{d}"), slope);
        out.constant(format!("intercept_d{d}"), intercept);
        out.constant(format!("r2_d{d}"), r2);
        out.cases.push(
            CaseRecord::new(
                format!("d {d}: linearity in log^(d-1)"),
                json!({"d": d, "eps_min": e_min, "cells": cells, "mc_count": count}),
                r2,
                r2_min,
                r2 >= r2_min,
            )
            .with_detail(json!({"slope": slope, "intercept": intercept})),
        );
    }
    out.tables.push(table);
    Ok(out)
}

pub(crate) fn cw_ratio_suite(cfg: &ExperimentConfig) -> Result<Outcome> {
    let dims: Vec<usize> = cfg
        .family
        .as_ref()
        .map_or(vec![2, 4, 8], |f| f.dims.clone());
    let ts = cfg.t_or(default_t_grid);
    let count = cfg.mc_or(1_000_000);
    let stability = cfg.tolerances.stability.unwrap_or(3.0);
    let mut out = Outcome::default();
    let mut table = Table::new("ratio", &["n", "t", "ratio", "stderr"]);
    let mut maxima = Vec::new();
    for (j, &n) in dims.iter().enumerate() {
        let mut f = Polynomial::constant(n, -(n as f64) / 12.0);
        for k in 0..n {
            let mut e = vec![0u32; n];
            e[k] = 2;
            f = &f + &Polynomial::from_terms(n, [(e, 1.0)])?;
        }
        let r = cw_ratio(
            &SampleableMeasureND::unit_cube(n),
            &f,
            &ts,
            count,
            cfg.seed.wrapping_add(j as u64),
        )?;
        for ((t, v), e) in r.t.iter().zip(&r.ratio).zip(&r.stderr) {
            table.rows.push(vec![n as f64, *t, *v, *e]);
        }
        out.constant(format!("max_ratio_n{n}"), r.max);
        out.cases.push(CaseRecord::new(
            format!("n {n}"),
            json!({"poly": f.to_string(), "l2": r.l2, "mc_count": count}),
            r.max,
            f64::INFINITY,
            r.max.is_finite(),
        ));
        maxima.push(r.max);
    }
    let s = spread(&maxima);
    out.constant("spread", s);
    out.cases.push(CaseRecord::new(
        "max ratio spread across n",
        json!({"dims": dims}),
        s,
        stability,
        s <= stability,
    ));
    out.tables.push(table);
    Ok(out)
}
