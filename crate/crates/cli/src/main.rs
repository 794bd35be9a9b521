mod experiments;
mod render;
mod suites;

use std::io::Write;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use maxmod::numerics::{QuadConfig, TGrid};
use maxmod::opnorm::{
    cube_asymptotic_bounds, euclid_limit_bounds, general_norm_upper_bound, general_opnorm_estimate, opnorm, Domain,
    EvalConfig, McBudget, OpNormQuery, OpNormResult,
};
use maxmod::oracle::{cantor_build, cantor_probe, CantorProbe};
use maxmod::{Error, ModulusSpec, NormKind};
use rayon::prelude::*;
use serde::Serialize;

use experiments::Experiment;
use render::Format;
use suites::Suite;

/// Sharp bounds for the modulus of continuity of the uncentered maximal operator.
#[derive(Parser, Debug)]
#[command(name = "maxmod", version)]
struct Cli {
    /// Output format.
    #[arg(long, short, value_enum, default_value_t = Format::Json, global = true)]
    output: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Operator norm for one norm, dimension and modulus.
    Constant {
        #[command(flatten)]
        q: QueryArgs,
        #[arg(long, default_value_t = 1)]
        dim: usize,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Sweep over dimensions.
    Table {
        #[command(flatten)]
        q: QueryArgs,
        /// Range `a..b`, list `a,b,c` or a single dimension.
        #[arg(long, value_parser = parse_dims, default_value = "1..10")]
        dims: Dims,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Run named verification suites.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, value_parser = parse_dims, default_value = "2..5")]
        dims: Dims,
    },
    /// Grid experiments with the discrete maximal operators.
    Oracle {
        #[arg(long, value_enum)]
        experiment: Experiment,
        /// Samples per axis.
        #[arg(long)]
        n: Option<usize>,
        /// Exponent for the local experiment.
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 20)]
        seed: u64,
        /// Write the sampled maximal function as CSV.
        #[arg(long)]
        export: Option<std::path::PathBuf>,
    },
    /// Build and probe the fat Cantor example.
    Cantor {
        #[arg(long, default_value_t = 0.5)]
        alpha: f64,
        #[arg(long, default_value_t = 1.0)]
        beta: f64,
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u32).range(1..=3))]
        max_level: u32,
        /// Samples per level; defaults resolve the smallest hole.
        #[arg(long)]
        grid_n: Option<usize>,
    },
    /// Monte Carlo estimate for an arbitrary norm.
    EstimateGeneral {
        #[command(flatten)]
        q: QueryArgs,
        #[arg(long, default_value_t = 2)]
        dim: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = McBudget::default().ball_samples)]
        samples: usize,
    },
}

#[derive(Args, Debug)]
struct QueryArgs {
    /// linf, l2, l1 or lp:<p>.
    #[arg(long, default_value = "linf", value_parser = parse_norm)]
    norm: NormKind,
    /// holder:<a>, capped:<a>:<cap> or file:<path>.
    #[arg(long, default_value = "holder:1", value_parser = parse_modulus)]
    modulus: ModulusSpec,
    /// global, halfline or interval:<length>.
    #[arg(long, default_value = "global", value_parser = parse_domain)]
    domain: Domain,
}

#[derive(Args, Debug)]
struct TolArgs {
    /// Absolute and relative quadrature tolerance.
    #[arg(long)]
    quad_tol: Option<f64>,
    /// Scan points of the minimization over `s`.
    #[arg(long)]
    scan: Option<usize>,
    /// Scan points of the minimization over `R`.
    #[arg(long)]
    nested_scan: Option<usize>,
    /// Scales per decade in the search over `t`.
    #[arg(long)]
    t_per_decade: Option<usize>,
}

impl TolArgs {
    fn config(&self) -> anyhow::Result<EvalConfig> {
        let mut cfg = EvalConfig::default();
        if let Some(t) = self.quad_tol {
            if !(t > 0.0) {
                bail!(Error::Argument(format!("quadrature tolerance must be positive, got {t}")));
            }
            cfg.quad = QuadConfig::with_tol(t, t);
            cfg.inner_quad = QuadConfig::with_tol(t / 10.0, t);
        }
        if let Some(s) = self.scan {
            cfg.scan = s.max(3);
        }
        if let Some(s) = self.nested_scan {
            cfg.nested_scan = s.max(3);
        }
        if let Some(p) = self.t_per_decade {
            cfg.tgrid = TGrid {
                per_decade: p.max(1),
                ..cfg.tgrid
            };
        }
        Ok(cfg)
    }
}

#[derive(Debug, Clone)]
struct Dims(Vec<usize>);

fn parse_dims(s: &str) -> Result<Dims, String> {
    let bad = || format!("expected a..b, a,b,c or a single dimension, got '{s}'");
    let dims: Vec<usize> = if let Some((a, b)) = s.split_once("..") {
        let a: usize = a.trim().parse().map_err(|_| bad())?;
        let b: usize = b.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
        (a..=b).collect()
    } else {
        s.split(',').map(|p| p.trim().parse().map_err(|_| bad())).collect::<Result<_, _>>()?
    };
    if dims.is_empty() || dims.contains(&0) {
        return Err(format!("dimensions must be positive and nonempty, got '{s}'"));
    }
    Ok(Dims(dims))
}

fn parse_norm(s: &str) -> Result<NormKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_modulus(s: &str) -> Result<ModulusSpec, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_domain(s: &str) -> Result<Domain, String> {
    match s.trim() {
        "global" => Ok(Domain::Global),
        "halfline" | "half-line" => Ok(Domain::Local1d { length: f64::INFINITY }),
        other => {
            let len = other
                .strip_prefix("interval:")
                .and_then(|l| l.parse::<f64>().ok())
                .ok_or_else(|| format!("expected global, halfline or interval:<length>, got '{other}'"))?;
            if !(len > 0.0) {
                return Err(format!("interval length must be positive, got {len}"));
            }
            Ok(Domain::Local1d { length: len })
        }
    }
}

#[derive(Debug, Clone, Serialize)]
struct TableRow {
    d: usize,
    value: f64,
    s_star: Option<f64>,
    r_star: Option<f64>,
    lower_bound: Option<f64>,
    upper_bound: Option<f64>,
}

/// Known bounds for a row: the cube sandwich at the Lipschitz modulus, the
/// dimension-free euclidean ceiling for concave moduli, `d/(d+1)` or `1`.
fn bounds(norm: &NormKind, spec: &ModulusSpec, d: usize, euclid_ceiling: Option<f64>) -> (Option<f64>, Option<f64>) {
    let lipschitz = spec.homogeneous_exponent() == Some(1.0);
    match norm.canonical() {
        NormKind::Linf | NormKind::L1 if lipschitz => {
            let (lo, hi) = cube_asymptotic_bounds(d);
            (Some(lo), Some(hi))
        }
        NormKind::L2 if d >= 2 && euclid_ceiling.is_some() => (None, euclid_ceiling),
        _ if lipschitz => (None, Some(general_norm_upper_bound(d))),
        _ => (None, Some(1.0)),
    }
}

fn query(q: &QueryArgs, d: usize) -> OpNormQuery {
    OpNormQuery {
        norm: q.norm.clone(),
        d,
        modulus: q.modulus.clone(),
        domain: q.domain,
    }
}

fn opnorm_text(r: &OpNormResult) -> String {
    render::text(&[
        ("value", r.value.to_string()),
        ("s_star", render::num(r.s_star)),
        ("r_star", render::num(r.r_star)),
        ("t_star", r.t_star.to_string()),
        ("err_estimate", format!("{:e}", r.err_estimate)),
        ("method", r.method.clone()),
        ("norm", r.norm.clone()),
        ("dim", r.dim.to_string()),
        ("modulus", r.modulus.clone()),
        ("citations", r.citations.join(" ")),
    ])
}

/// Exit status 1: a check failed or a computation broke down.
struct Failed(String);

fn run(cli: Cli) -> anyhow::Result<(String, Option<Failed>)> {
    let fmt = cli.output;
    match cli.command {
        Command::Constant { q, dim, tol } => {
            let r = opnorm(&query(&q, dim), &tol.config()?)?;
            let out = match fmt {
                Format::Json => render::json(&r),
                Format::Text => opnorm_text(&r),
                Format::Csv => render::csv(
                    &["value", "s_star", "r_star", "t_star", "err_estimate", "method", "norm", "dim", "modulus", "citations"],
                    &[vec![
                        r.value.to_string(),
                        render::num(r.s_star),
                        render::num(r.r_star),
                        r.t_star.to_string(),
                        r.err_estimate.to_string(),
                        r.method.clone(),
                        r.norm.clone(),
                        r.dim.to_string(),
                        r.modulus.clone(),
                        r.citations.join(" "),
                    ]],
                ),
            };
            Ok((out, None))
        }
        Command::Table { q, dims, tol } => {
            let cfg = tol.config()?;
            let ceiling = if matches!(q.norm.canonical(), NormKind::L2) {
                euclid_limit_bounds(&q.modulus, &cfg.tgrid)?.ceiling
            } else {
                None
            };
            let results: Vec<anyhow::Result<OpNormResult>> =
                dims.0.par_iter().map(|&d| Ok(opnorm(&query(&q, d), &cfg)?)).collect();
            let mut rows = Vec::with_capacity(results.len());
            for r in results {
                let r = r?;
                let (lower_bound, upper_bound) = bounds(&q.norm, &q.modulus, r.dim, ceiling);
                rows.push(TableRow {
                    d: r.dim,
                    value: r.value,
                    s_star: r.s_star,
                    r_star: r.r_star,
                    lower_bound,
                    upper_bound,
                });
            }
            let out = match fmt {
                Format::Json => render::json(&serde_json::json!({
                    "norm": q.norm.label(),
                    "modulus": q.modulus.label(),
                    "rows": rows,
                })),
                Format::Csv | Format::Text => {
                    let body: Vec<Vec<String>> = rows
                        .iter()
                        .map(|r| {
                            vec![
                                r.d.to_string(),
                                r.value.to_string(),
                                render::num(r.s_star),
                                render::num(r.r_star),
                                render::num(r.lower_bound),
                                render::num(r.upper_bound),
                            ]
                        })
                        .collect();
                    let cols = ["d", "value", "s_star", "r_star", "lower_bound", "upper_bound"];
                    format!("{}\n{}", render::TABLE_HEADER, render::csv(&cols, &body))
                }
            };
            Ok((out, None))
        }
        Command::Verify { suite, dims } => {
            let cfg = EvalConfig::default();
            let outcomes = suites::run(suite, &dims.0, &cfg);
            let failed = outcomes.iter().filter(|o| !o.passed).count();
            let out = match fmt {
                Format::Json => render::json(&serde_json::json!({
                    "passed": failed == 0,
                    "failed": failed,
                    "checks": outcomes,
                })),
                Format::Csv => render::csv(
                    &["suite", "check", "passed", "detail"],
                    &outcomes
                        .iter()
                        .map(|o| vec![o.suite.to_string(), o.check.clone(), o.passed.to_string(), o.detail.clone()])
                        .collect::<Vec<_>>(),
                ),
                Format::Text => {
                    let mut s = String::new();
                    for o in &outcomes {
                        let tag = if o.passed { "PASS" } else { "FAIL" };
                        s.push_str(&format!("{tag} {}/{}: {}\n", o.suite, o.check, o.detail));
                    }
                    s.push_str(&format!("{} of {} checks passed\n", outcomes.len() - failed, outcomes.len()));
                    s
                }
            };
            let status = (failed > 0).then(|| Failed(format!("{failed} check(s) failed")));
            Ok((out, status))
        }
        Command::Oracle {
            experiment,
            n,
            alpha,
            seed,
            export,
        } => {
            let rep = experiments::run(experiment, n, alpha, seed)?;
            if let Some(path) = &export {
                rep.grid
                    .to_csv_path(path)
                    .with_context(|| format!("writing {}", path.display()))?;
            }
            let out = match fmt {
                Format::Json => render::json(&rep),
                Format::Csv => render::csv(
                    &["experiment", "samples", "h", "measured", "reference", "tolerance", "passed"],
                    &[vec![
                        rep.experiment.clone(),
                        rep.samples.to_string(),
                        rep.h.to_string(),
                        rep.measured.to_string(),
                        rep.reference.to_string(),
                        rep.tolerance.to_string(),
                        rep.passed.to_string(),
                    ]],
                ),
                Format::Text => render::text(&[
                    ("experiment", rep.experiment.clone()),
                    ("samples", rep.samples.to_string()),
                    ("h", rep.h.to_string()),
                    ("measured", rep.measured.to_string()),
                    ("reference", rep.reference.to_string()),
                    ("tolerance", rep.tolerance.to_string()),
                    ("passed", rep.passed.to_string()),
                ]),
            };
            let status = (!rep.passed).then(|| Failed(format!("{} outside tolerance", rep.experiment)));
            Ok((out, status))
        }
        Command::Cantor {
            alpha,
            beta,
            max_level,
            grid_n,
        } => {
            let probes: Vec<CantorProbe> = (1..=max_level)
                .map(|level| Ok(cantor_probe(&cantor_build(alpha, level, grid_n)?, beta)?))
                .collect::<anyhow::Result<_>>()?;
            let growing = probes.windows(2).all(|w| w[1].quotient > w[0].quotient);
            let out = match fmt {
                Format::Json => render::json(&serde_json::json!({
                    "alpha": alpha,
                    "beta": beta,
                    "quotients_increasing": growing,
                    "levels": probes,
                })),
                Format::Csv | Format::Text => render::csv(
                    &["level", "samples", "displayed_bound", "bound_holds", "witness_w", "mf_w", "quotient", "lip_alpha"],
                    &probes
                        .iter()
                        .map(|p| {
                            vec![
                                p.level.to_string(),
                                p.samples.to_string(),
                                p.displayed_bound.to_string(),
                                p.bound_holds.to_string(),
                                p.witness_w.to_string(),
                                p.mf_w.to_string(),
                                p.quotient.to_string(),
                                p.lip_alpha.to_string(),
                            ]
                        })
                        .collect::<Vec<_>>(),
                ),
            };
            let status = probes
                .iter()
                .find(|p| !p.bound_holds)
                .map(|p| Failed(format!("displayed bound fails at level {}", p.level)));
            Ok((out, status))
        }
        Command::EstimateGeneral { q, dim, seed, samples } => {
            if q.domain != Domain::Global {
                bail!(Error::Argument("the Monte Carlo estimate is global only".into()));
            }
            let budget = McBudget {
                ball_samples: samples,
                ..McBudget::default()
            };
            let est = general_opnorm_estimate(&q.norm, &q.modulus, dim, &budget, seed)?;
            let out = match fmt {
                Format::Json => render::json(&est),
                Format::Csv => render::csv(
                    &["value", "stderr", "low_confidence", "r_star", "t_star", "samples", "norm", "dim", "modulus"],
                    &[vec![
                        est.value.to_string(),
                        est.stderr.to_string(),
                        est.low_confidence.to_string(),
                        est.r_star.to_string(),
                        est.t_star.to_string(),
                        est.samples.to_string(),
                        est.norm.clone(),
                        est.dim.to_string(),
                        est.modulus.clone(),
                    ]],
                ),
                Format::Text => render::text(&[
                    ("value", est.value.to_string()),
                    ("stderr", est.stderr.to_string()),
                    ("low_confidence", est.low_confidence.to_string()),
                    ("r_star", est.r_star.to_string()),
                    ("t_star", est.t_star.to_string()),
                    ("samples", est.samples.to_string()),
                    ("norm", est.norm.clone()),
                    ("dim", est.dim.to_string()),
                    ("modulus", est.modulus.clone()),
                ]),
            };
            Ok((out, None))
        }
    }
}

fn init_threads() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var("MAXMOD_THREADS") {
        let n: usize = v
            .parse()
            .ok()
            .filter(|&n| n > 0)
            .with_context(|| format!("MAXMOD_THREADS must be a positive integer, got '{v}'"))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

/// Bad input is a usage error; anything else is a failed computation.
fn is_usage(e: &anyhow::Error) -> bool {
    matches!(
        e.downcast_ref::<Error>(),
        Some(Error::Argument(_) | Error::Parse(_) | Error::Config(_) | Error::Unsupported(_))
    )
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(e) = init_threads() {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    match run(cli) {
        Ok((out, status)) => {
            let mut stdout = std::io::stdout().lock();
            if stdout.write_all(out.as_bytes()).and_then(|_| stdout.flush()).is_err() {
                return ExitCode::from(1);
            }
            match status {
                None => ExitCode::SUCCESS,
                Some(Failed(msg)) => {
                    eprintln!("{msg}");
                    ExitCode::from(1)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(if is_usage(&e) { 2 } else { 1 })
        }
    }
}
