//! `corput-lab`: run inequality suites and one-off computations.
//!
//! Exit codes: 0 success or passing verdict, 1 failing verdict or numerical
//! error, 2 invalid configuration or arguments. Set `CORPUT_THREADS` to fix
//! the worker count; results do not depend on it.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use corput_core::density1d::{sigma_density, PiecewiseDensity1D};
use corput_core::harness::{run_suite, ExperimentConfig};
use corput_core::oscint::{osc_sweep, t_grid, McOptions, OscMethod};
use corput_core::pushforward::{pushforward_exact_grid, pushforward_mc};
use corput_core::sublevel::{sublevel_bound, sublevel_measure};
use corput_core::{Error, MeasureSpec, Polynomial};

#[derive(Parser)]
#[command(
    name = "corput-lab",
    version,
    about = "Oscillatory integrals and pushforward regularity experiments"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the suite described by a JSON config and write its report.
    Verify {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Tabulate I(t) = ∫ exp(i t f) dμ on a log-spaced t grid.
    Oscint {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 1.0)]
        t_min: f64,
        #[arg(long, default_value_t = 100.0)]
        t_max: f64,
        #[arg(long, default_value_t = 32)]
        points: usize,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        #[command(flatten)]
        mc: McArgs,
    },
    /// Histogram or exact cell masses of the law of f(X).
    Pushforward {
        #[command(flatten)]
        target: Target,
        #[arg(long, default_value_t = 512)]
        bins: usize,
        /// Use the exact one-dimensional construction instead of sampling.
        #[arg(long)]
        exact: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[command(flatten)]
        mc: McArgs,
    },
    /// ω and σ of a density literal.
    Modulus {
        /// Density literal, e.g. `piecewise [0,1] [1]`.
        #[arg(long)]
        density: String,
        /// Comma-separated ε values.
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        /// Grid halvings for σ beyond h = ε/64.
        #[arg(long, default_value_t = 0)]
        refinements: usize,
    },
    /// μ(|f| ≤ ε) with the 8ek bound for one-dimensional measures.
    Sublevel {
        #[command(flatten)]
        target: Target,
        #[arg(long, value_delimiter = ',', required = true)]
        eps: Vec<f64>,
        #[command(flatten)]
        mc: McArgs,
    },
}

#[derive(Args)]
struct Target {
    /// Polynomial in x1..xn, e.g. `x1^2 + 0.5*x1*x2`.
    #[arg(long)]
    f: String,
    /// Measure as JSON (`{"type": "box", "intervals": [[-0.5, 0.5]]}`) or a
    /// density literal for a one-dimensional measure.
    #[arg(long)]
    measure: String,
}

#[derive(Args)]
struct McArgs {
    #[arg(long, default_value_t = 1_000_000)]
    mc_count: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Auto,
    Exact,
    Tensor,
    Mc,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

/// Failure with its exit code.
struct Failure(u8, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Parse(_)
            | Error::Config(_)
            | Error::InvalidArgument(_)
            | Error::DimensionMismatch { .. } => 2,
            _ => 1,
        };
        Failure(code, e.to_string())
    }
}

fn parse_target(t: &Target) -> Result<(corput_core::SampleableMeasureND, Polynomial), Failure> {
    let spec: MeasureSpec = t.measure.parse()?;
    let mu = spec.build()?;
    let f = Polynomial::parse_with_dim(&t.f, mu.dim())?;
    Ok((mu, f))
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Verify { config, out } => {
            let text = std::fs::read_to_string(&config)
                .map_err(|e| Failure(2, format!("{}: {e}", config.display())))?;
            let cfg = ExperimentConfig::from_json(&text)?;
            let report = run_suite(&cfg)?;
            let files = report.write_to(&out)?;
            let failed = report.failures().count();
            println!(
                "{}: {} ({} cases, {} failed)",
                report.suite,
                if report.passed() { "PASS" } else { "FAIL" },
                report.cases.len(),
                failed
            );
            for f in files {
                log::info!("wrote {}", f.display());
            }
            Ok(if report.passed() { 0 } else { 1 })
        }
        Command::Oscint {
            target,
            t_min,
            t_max,
            points,
            method,
            mc,
        } => {
            let (mu, f) = parse_target(&target)?;
            if !(t_min > 0.0 && t_max >= t_min) || points == 0 {
                return Err(Failure(2, "need 0 < t-min <= t-max and points >= 1".into()));
            }
            let method = match method {
                MethodArg::Auto => OscMethod::Auto,
                MethodArg::Exact => OscMethod::Exact,
                MethodArg::Tensor => OscMethod::Tensor,
                MethodArg::Mc => OscMethod::Mc,
            };
            let ts = if points == 1 {
                vec![t_min]
            } else {
                t_grid(t_min, t_max, points)
            };
            let vals = osc_sweep(
                &mu,
                &f,
                &ts,
                method,
                McOptions {
                    count: mc.mc_count,
                    seed: mc.seed,
                },
            )?;
            println!("t,re,im,abs,err");
            for v in vals {
                println!(
                    "{},{},{},{},{}",
                    v.t,
                    v.value.re,
                    v.value.im,
                    v.value.norm(),
                    v.abs_error_estimate
                );
            }
            Ok(0)
        }
        Command::Pushforward {
            target,
            bins,
            exact,
            format,
            mc,
        } => {
            let (mu, f) = parse_target(&target)?;
            let res = if exact {
                let rho = match mu.factors() {
                    Some([rho]) => rho.clone(),
                    _ => return Err(Failure(2, "--exact needs a one-dimensional density".into())),
                };
                pushforward_exact_grid(&rho, &f.to_univariate()?, bins)?
            } else {
                pushforward_mc(&mu, &f, mc.mc_count, bins, mc.seed)?
            };
            match format {
                Format::Csv => print!("{}", res.to_csv()),
                Format::Json => println!(
                    "{}",
                    serde_json::to_string_pretty(&res.to_json()).expect("json")
                ),
            }
            Ok(0)
        }
        Command::Modulus {
            density,
            eps,
            refinements,
        } => {
            let rho: PiecewiseDensity1D = density.parse()?;
            println!("eps,omega,sigma");
            for e in eps {
                let s = sigma_density(&rho, e, refinements)?;
                println!("{e},{},{s}", rho.omega(e));
            }
            Ok(0)
        }
        Command::Sublevel { target, eps, mc } => {
            let (mu, f) = parse_target(&target)?;
            let bound = match mu.factors() {
                Some([rho]) => {
                    let g = f.to_univariate()?;
                    let k = g.degree() as u32;
                    Some((rho.sup_norm(), k))
                }
                _ => None,
            };
            println!("eps,measure,bound,pass");
            let mut ok = true;
            for e in eps {
                let m = sublevel_measure(&mu, &f, e, mc.mc_count, mc.seed)?;
                match bound {
                    Some((sup, k)) if k > 0 => {
                        let b = sublevel_bound(sup, k, e);
                        ok &= m.value <= b;
                        println!("{e},{},{b},{}", m.value, m.value <= b);
                    }
                    _ => println!("{e},{},,", m.value),
                }
            }
            Ok(if ok { 0 } else { 1 })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    if let Ok(v) = std::env::var("CORPUT_THREADS") {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                if let Err(e) = rayon::ThreadPoolBuilder::new()
                    .num_threads(n)
                    .build_global()
                {
                    log::warn!("could not set thread count: {e}");
                }
            }
            _ => {
                eprintln!("error: CORPUT_THREADS must be a positive integer, got {v:?}");
                return ExitCode::from(2);
            }
        }
    }
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure(code, msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(code)
        }
    }
}
