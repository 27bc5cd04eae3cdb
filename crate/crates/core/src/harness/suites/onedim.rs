use rand::Rng;
use rayon::prelude::*;
use serde_json::json;

use super::Outcome;
use crate::density1d::{
    l1_between, log_grid, mixture_decompose, sigma_density, PiecewiseDensity1D,
};
use crate::error::{Error, Result};
use crate::harness::random::{
    case_rng, random_interval_union, random_polynomial, random_step_density,
};
use crate::harness::{CaseRecord, ExperimentConfig, Table};
use crate::multimeasure::{krug_check_1d, krug_check_2d, MeasureSpec, PlanarDensity};
use crate::poly::Polynomial1D;
use crate::sublevel::{
    divided_diff as dd_cert, quantile_points, sublevel_bound, sublevel_measure_1d,
};

pub(crate) fn t_equiv(cfg: &ExperimentConfig) -> Result<Outcome> {
    let n = cfg.cases_or(200);
    let eps = cfg.eps_or(|| vec![0.01, 0.1, 0.5]);
    let slack = cfg.tolerances.slack.unwrap_or(0.05);
    let rows: Vec<Vec<(String, f64, f64, f64)>> = (0..n)
        .into_par_iter()
        .map(|i| {
            let rho = random_step_density(&mut case_rng(cfg.seed, i), 10, 0.2);
            eps.iter()
                .map(|&e| Ok((rho.to_string(), e, sigma_density(&rho, e, 0)?, rho.omega(e))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<_>>()?;
    let mut out = Outcome::default();
    let mut table = Table::new("sandwich", &["case", "eps", "sigma", "omega"]);
    let (mut lo, mut hi) = (f64::INFINITY, 0.0_f64);
    for (i, row) in rows.into_iter().enumerate() {
        for (lit, e, s, w) in row {
            let pass = s >= 0.5 * w * (1.0 - slack) && s <= 6.0 * w * (1.0 + slack);
            lo = lo.min(s / w);
            hi = hi.max(s / w);
            table.rows.push(vec![i as f64, e, s, w]);
            out.cases.push(
                CaseRecord::new(
                    format!("density {i}, eps {e}"),
                    json!({"density": lit, "eps": e}),
                    s,
                    w,
                    pass,
                )
                .with_detail(json!({"lower": 0.5 * w, "upper": 6.0 * w})),
            );
        }
    }
    out.constant("min_sigma_over_omega", lo);
    out.constant("max_sigma_over_omega", hi);
    out.tables.push(table);
    Ok(out)
}

fn merged_length(set: &[(f64, f64)]) -> f64 {
    let mut v = set.to_vec();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut cur: Option<(f64, f64)> = None;
    for (a, b) in v {
        cur = match cur {
            Some((ca, cb)) if a <= cb => Some((ca, cb.max(b))),
            Some((ca, cb)) => {
                total += cb - ca;
                Some((a, b))
            }
            None => Some((a, b)),
        };
    }
    total + cur.map_or(0.0, |(a, b)| b - a)
}

fn union_mass(rho: &PiecewiseDensity1D, set: &[(f64, f64)]) -> f64 {
    let mut v = set.to_vec();
    v.sort_by(|a, b| a.0.total_cmp(&b.0));
    let mut total = 0.0;
    let mut reach = f64::NEG_INFINITY;
    for (a, b) in v {
        let a = a.max(reach);
        if b > a {
            total += rho.mass_on(a, b);
        }
        reach = reach.max(b);
    }
    total
}

pub(crate) fn t_meas(cfg: &ExperimentConfig) -> Result<Outcome> {
    let n = cfg.cases_or(100);
    let tol = cfg.tolerances.exact.unwrap_or(1e-3);
    let cases: Vec<CaseRecord> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = case_rng(cfg.seed, i);
            let rho = random_step_density(&mut rng, 8, 0.2);
            let (a, b) = rho.support();
            let set = random_interval_union(&mut rng, a - 0.2, b + 0.2);
            let lambda = merged_length(&set);
            let nu = union_mass(&rho, &set);
            let s = sigma_density(&rho, lambda, 0)?;
            Ok(CaseRecord::new(
                format!("pair {i}"),
                json!({"density": rho.to_string(), "set": set, "lambda": lambda}),
                nu,
                s,
                nu <= s + tol,
            ))
        })
        .collect::<Result<_>>()?;
    let mut out = Outcome {
        cases,
        ..Default::default()
    };
    let worst = out
        .cases
        .iter()
        .map(|c| c.lhs - c.rhs)
        .fold(f64::NEG_INFINITY, f64::max);
    out.constant("max_excess", worst);
    Ok(out)
}

/// `t^k/k!` plus uniform lower-order coefficients.
fn unit_top_phase(rng: &mut impl Rng, k: usize) -> Polynomial1D {
    let fact: f64 = (1..=k).map(|i| i as f64).product();
    let mut c: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
    c.push(1.0 / fact);
    Polynomial1D::new(c)
}

pub(crate) fn sublevel_8ek(cfg: &ExperimentConfig) -> Result<Outcome> {
    let eps = cfg.eps_or(|| log_grid(1e-4, 1e-1, 13));
    let instances: Vec<(PiecewiseDensity1D, Polynomial1D)> = match (&cfg.phase, &cfg.measure) {
        (Some(p), Some(m)) => {
            let rho = match m {
                MeasureSpec::Product { factors } if factors.len() == 1 => {
                    factors[0].parse::<PiecewiseDensity1D>()?
                }
                MeasureSpec::Box { intervals } if intervals.len() == 1 => {
                    PiecewiseDensity1D::uniform(intervals[0][0], intervals[0][1])?
                }
                _ => {
                    return Err(Error::Config(
                        "sublevel_8ek needs a one-dimensional measure".into(),
                    ))
                }
            };
            vec![(rho, p.parse::<crate::poly::Polynomial>()?.to_univariate()?)]
        }
        (None, None) => (0..cfg.cases_or(50))
            .map(|i| {
                let mut rng = case_rng(cfg.seed, i);
                let k = 2 + i % 3;
                let f = unit_top_phase(&mut rng, k);
                (random_step_density(&mut rng, 6, 0.2), f)
            })
            .collect(),
        _ => {
            return Err(Error::Config(
                "sublevel_8ek takes both phase and measure or neither".into(),
            ))
        }
    };
    let rows: Vec<Vec<CaseRecord>> = instances
        .par_iter()
        .enumerate()
        .map(|(i, (rho, f))| {
            let k = f.degree();
            let fact: f64 = (1..=k).map(|j| j as f64).product();
            if k == 0 || fact * f.leading() < 1.0 - 1e-12 {
                return Err(Error::Config(format!("phase {i} does not satisfy f^(k) >= 1")));
            }
            let sup = rho.sup_norm();
            eps.iter()
                .map(|&e| {
                    let m = sublevel_measure_1d(rho, f, e)?;
                    let bound = sublevel_bound(sup, k as u32, e);
                    Ok(CaseRecord::new(
                        format!("phase {i}, k {k}, eps {e}"),
                        json!({"phase": f.to_string(), "density": rho.to_string(), "eps": e, "k": k}),
                        m,
                        bound,
                        m <= bound,
                    ))
                })
                .collect()
        })
        .collect::<Result<_>>()?;
    let mut out = Outcome {
        cases: rows.into_iter().flatten().collect(),
        ..Default::default()
    };
    let worst = out.cases.iter().map(|c| c.lhs / c.rhs).fold(0.0, f64::max);
    out.constant("max_ratio_to_bound", worst);
    Ok(out)
}

pub(crate) fn quantile_4e(cfg: &ExperimentConfig) -> Result<Outcome> {
    let n = cfg.cases_or(100);
    let cases: Vec<CaseRecord> = (0..n)
        .into_par_iter()
        .map(|i| {
            let mut rng = case_rng(cfg.seed, i);
            let k = 1 + i % 4;
            loop {
                let rho = random_step_density(&mut rng, 8, 0.3);
                let (a, b) = rho.support();
                let set = random_interval_union(&mut rng, a, b);
                match quantile_points(&rho, &set, k) {
                    Ok(q) => {
                        return Ok(CaseRecord::new(
                            format!("case {i}, k {k}"),
                            json!({"density": rho.to_string(), "set": set, "k": k}),
                            q.min_product,
                            q.threshold,
                            q.separated(),
                        )
                        .with_detail(json!({"points": q.points, "mass": q.mass})))
                    }
                    Err(Error::NullSet) => continue,
                    Err(e) => return Err(e),
                }
            }
        })
        .collect::<Result<_>>()?;
    let mut out = Outcome {
        cases,
        ..Default::default()
    };
    let worst = out
        .cases
        .iter()
        .map(|c| c.lhs / c.rhs)
        .fold(f64::INFINITY, f64::min);
    out.constant("min_product_over_threshold", worst);
    Ok(out)
}

pub(crate) fn divided_diff(cfg: &ExperimentConfig) -> Result<Outcome> {
    let n = cfg.cases_or(100);
    let tol = cfg.tolerances.exact.unwrap_or(1e-8);
    let cases: Vec<CaseRecord> = (0..n)
        .map(|i| {
            let mut rng = case_rng(cfg.seed, i);
            let k = 1 + i % 6;
            let p = random_polynomial(&mut rng, 1, k as u32, None).to_univariate()?;
            // One node per equal slot of [-1, 1], jittered inside the slot's middle half.
            let slot = 2.0 / (k + 1) as f64;
            let pts: Vec<f64> = (0..=k)
                .map(|j| -1.0 + slot * (j as f64 + rng.random_range(0.25..0.75)))
                .collect();
            let c = dd_cert(&pts)?;
            let fact: f64 = (1..=k).map(|j| j as f64).product();
            let lhs = c.apply(&p);
            let rhs = fact * p.leading();
            Ok(CaseRecord::new(
                format!("case {i}, k {k}"),
                json!({"poly": p.to_string(), "points": c.points}),
                lhs,
                rhs,
                (lhs - rhs).abs() <= tol * rhs.abs(),
            ))
        })
        .collect::<Result<_>>()?;
    let mut out = Outcome {
        cases,
        ..Default::default()
    };
    let worst = out
        .cases
        .iter()
        .map(|c| ((c.lhs - c.rhs) / c.rhs).abs())
        .fold(0.0, f64::max);
    out.constant("max_relative_error", worst);
    Ok(out)
}

pub(crate) fn krug(cfg: &ExperimentConfig) -> Result<Outcome> {
    let tol1 = cfg.tolerances.exact.unwrap_or(1e-9);
    let tol2 = cfg.tolerances.slack.unwrap_or(0.01);
    let lines = cfg.cases_or(2000);
    let mut out = Outcome::default();
    let trapezoid = PiecewiseDensity1D::new(
        vec![0.0, 1.0, 2.0, 3.0],
        vec![
            Polynomial1D::identity(),
            Polynomial1D::constant(1.0),
            Polynomial1D::new(vec![3.0, -1.0]),
        ],
    )?
    .normalized()?;
    let cap = PiecewiseDensity1D::new(
        vec![-1.0, 1.0],
        vec![Polynomial1D::new(vec![0.75, 0.0, -0.75])],
    )?;
    let one_d = [
        ("uniform", PiecewiseDensity1D::uniform(0.0, 1.0)?, 1.0),
        ("tent", PiecewiseDensity1D::tent(0.0, 2.0)?, -1.0),
        ("trapezoid", trapezoid, 0.7),
        ("parabolic cap", cap, 2.5),
    ];
    for (name, rho, theta) in one_d {
        let k = krug_check_1d(&rho, theta)?;
        let gap = k.relative_gap();
        out.cases.push(
            CaseRecord::new(
                format!("{name}, theta {theta}"),
                json!({"density": rho.to_string(), "theta": theta}),
                k.tv_lhs,
                k.krug_rhs,
                gap <= tol1,
            )
            .with_detail(json!({"relative_gap": gap})),
        );
    }
    let pi = std::f64::consts::PI;
    let disk = |x: [f64; 2]| {
        if x[0] * x[0] + x[1] * x[1] <= 1.0 {
            1.0 / pi
        } else {
            0.0
        }
    };
    let square = |x: [f64; 2]| {
        if x[0].abs() <= 0.5 && x[1].abs() <= 0.5 {
            1.0
        } else {
            0.0
        }
    };
    let a = pi / 6.0;
    let planar: [(&str, PlanarDensity<'_>, [f64; 2], f64); 2] = [
        (
            "unit disk",
            PlanarDensity {
                density: &disk,
                radius: 1.0,
                center: [0.0, 0.0],
            },
            [0.6, 0.8],
            4.0 / pi,
        ),
        (
            "unit square",
            PlanarDensity {
                density: &square,
                radius: 0.75,
                center: [0.0, 0.0],
            },
            [a.cos(), a.sin()],
            2.0 * (a.cos() + a.sin()),
        ),
    ];
    for (name, rho, theta, exact) in planar {
        let k = krug_check_2d(&rho, theta, lines, lines + 1)?;
        let err_l = (k.tv_lhs - exact).abs() / exact;
        let err_r = (k.krug_rhs - exact).abs() / exact;
        out.cases.push(
            CaseRecord::new(
                format!("{name}, theta ({:.4}, {:.4})", theta[0], theta[1]),
                json!({"theta": theta, "lines": lines, "exact": exact}),
                k.tv_lhs,
                k.krug_rhs,
                k.relative_gap() <= tol2 && err_l <= tol2 && err_r <= tol2,
            )
            .with_detail(
                json!({"relative_gap": k.relative_gap(), "lhs_error": err_l, "rhs_error": err_r}),
            ),
        );
    }
    Ok(out)
}

pub(crate) fn mixture(cfg: &ExperimentConfig) -> Result<Outcome> {
    let n = cfg.cases_or(100);
    let tol = cfg.tolerances.exact.unwrap_or(1e-12);
    let cases: Vec<CaseRecord> = (0..n)
        .into_par_iter()
        .map(|i| {
            let rho = random_step_density(&mut case_rng(cfg.seed, i), 12, 0.2);
            let m = mixture_decompose(&rho)?;
            let l1 = l1_between(&m.reconstruct()?, &rho);
            let bv = rho.bv_seminorm();
            let tv_err = (m.tv() - bv).abs() / bv;
            Ok(CaseRecord::new(
                format!("density {i}"),
                json!({"density": rho.to_string(), "components": m.components.len()}),
                l1.max(tv_err),
                tol,
                l1 <= tol && tv_err <= tol,
            )
            .with_detail(json!({"l1": l1, "tv_relative": tv_err})))
        })
        .collect::<Result<_>>()?;
    let mut out = Outcome {
        cases,
        ..Default::default()
    };
    let worst = out.cases.iter().map(|c| c.lhs).fold(0.0, f64::max);
    out.constant("max_error", worst);
    Ok(out)
}
