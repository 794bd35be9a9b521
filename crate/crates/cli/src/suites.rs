//! Named verification suites.

use anyhow::Result;
use maxmod::numerics::minimize_unimodal;
use maxmod::opnorm::*;
use maxmod::oracle::{cantor_build, cantor_probe, cantor_sequence, CantorModel};
use maxmod::{ModulusSpec, NormKind};
use serde::Serialize;

use crate::experiments::{self, Experiment};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    L1Linf,
    CubeSandwich,
    CubeMonotone,
    ClosedForms,
    EuclidCeiling,
    Normalization,
    Local1d,
    OracleLip,
    Kinnunen,
    Centered,
    Mc,
    Cantor,
    All,
}

pub const ALL: [Suite; 12] = [
    Suite::ClosedForms,
    Suite::CubeSandwich,
    Suite::CubeMonotone,
    Suite::L1Linf,
    Suite::EuclidCeiling,
    Suite::Normalization,
    Suite::Local1d,
    Suite::OracleLip,
    Suite::Kinnunen,
    Suite::Centered,
    Suite::Mc,
    Suite::Cantor,
];

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::L1Linf => "l1-linf",
            Suite::CubeSandwich => "cube-sandwich",
            Suite::CubeMonotone => "cube-monotone",
            Suite::ClosedForms => "closed-forms",
            Suite::EuclidCeiling => "euclid-ceiling",
            Suite::Normalization => "normalization",
            Suite::Local1d => "local-1d",
            Suite::OracleLip => "oracle-lip",
            Suite::Kinnunen => "kinnunen",
            Suite::Centered => "centered",
            Suite::Mc => "mc",
            Suite::Cantor => "cantor",
            Suite::All => "all",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Outcome {
    pub suite: &'static str,
    pub check: String,
    pub passed: bool,
    pub detail: String,
}

struct Recorder {
    suite: &'static str,
    out: Vec<Outcome>,
}

impl Recorder {
    fn check(&mut self, check: impl Into<String>, passed: bool, detail: impl Into<String>) {
        self.out.push(Outcome {
            suite: self.suite,
            check: check.into(),
            passed,
            detail: detail.into(),
        });
    }

    /// Records a computation that failed before its check could run.
    fn attempt(&mut self, check: &str, f: impl FnOnce(&mut Self) -> Result<()>) {
        if let Err(e) = f(self) {
            self.check(check, false, format!("error: {e:#}"));
        }
    }
}

fn holder(alpha: f64) -> ModulusSpec {
    ModulusSpec::holder(alpha).expect("valid exponent")
}

pub fn run(suite: Suite, dims: &[usize], cfg: &EvalConfig) -> Vec<Outcome> {
    let mut r = Recorder {
        suite: suite.name(),
        out: Vec::new(),
    };
    match suite {
        Suite::All => {
            return ALL.iter().flat_map(|&s| run(s, dims, cfg)).collect();
        }
        Suite::ClosedForms => closed_forms(&mut r, cfg),
        Suite::CubeSandwich => cube_sandwich(&mut r),
        Suite::CubeMonotone => cube_monotone(&mut r, dims, cfg),
        Suite::L1Linf => l1_linf(&mut r, dims, cfg),
        Suite::EuclidCeiling => euclid_ceiling(&mut r, dims, cfg),
        Suite::Normalization => normalization(&mut r, dims),
        Suite::Local1d => local_1d(&mut r, cfg),
        Suite::OracleLip => {
            oracle(&mut r, Experiment::Hat, 1.0);
            oracle(&mut r, Experiment::Cone, 1.0);
            oracle(&mut r, Experiment::Local, 0.5);
            oracle(&mut r, Experiment::Local, 1.0);
        }
        Suite::Kinnunen => oracle(&mut r, Experiment::Kinnunen, 1.0),
        Suite::Centered => oracle(&mut r, Experiment::Centered, 1.0),
        Suite::Mc => monte_carlo(&mut r, cfg),
        Suite::Cantor => cantor(&mut r),
    }
    r.out
}

fn closed_forms(r: &mut Recorder, cfg: &EvalConfig) {
    let s1 = std::f64::consts::SQRT_2 - 1.0;
    r.attempt("d=1", |r| {
        let quad = cube_opnorm(&holder(1.0), 1, cfg)?.value;
        let closed = cube_opnorm_holder_closed(1.0, 1)?.value;
        let m = minimize_unimodal(|s| (1.0 + s * s) / (2.0 * (1.0 + s)), 0.0, 1.0, 1e-12).f;
        let ok = (quad - s1).abs() <= 1e-8 && (m - s1).abs() <= 1e-8 && (closed - s1).abs() <= 1e-12;
        r.check("d=1", ok, format!("quadrature {quad:.12}, closed {closed:.15}, minimizer {m:.12}"));
        Ok(())
    });
    r.attempt("d=2", |r| {
        let a = cube_opnorm(&holder(1.0), 2, cfg)?.value;
        let b = cube_opnorm_holder_closed(1.0, 2)?.value;
        let c = cube_d2_trig_form();
        let ok = (a - b).abs() <= 1e-9 && (a - c).abs() <= 1e-9 && (b - c).abs() <= 1e-9 && (b - 0.574).abs() <= 5e-4;
        r.check("d=2", ok, format!("quadrature {a:.12}, closed {b:.12}, trig {c:.12}"));
        Ok(())
    });
    r.attempt("d=3", |r| {
        let a = cube_opnorm(&holder(1.0), 3, cfg)?.value;
        let b = cube_opnorm_holder_closed(1.0, 3)?.value;
        let c = cube_d3_closed_form()?;
        let res = (2.0 * c.t3.powi(4) - 8.0 * c.t3 + 3.0).abs();
        let ok = (a - b).abs() <= 1e-9
            && (a - c.value).abs() <= 1e-9
            && (b - c.value).abs() <= 1e-9
            && (b - 0.66155).abs() <= 5e-5
            && res <= 1e-12;
        r.check("d=3", ok, format!("quadrature {a:.12}, closed {b:.12}, radical {:.12}, residual {res:.1e}", c.value));
        Ok(())
    });
}

fn cube_sandwich(r: &mut Recorder) {
    r.attempt("d=1..100", |r| {
        let mut bad = Vec::new();
        for d in 1..=100 {
            let v = cube_opnorm_holder_closed(1.0, d)?.value;
            let (lo, hi) = cube_asymptotic_bounds(d);
            if !(v > lo && v <= hi) {
                bad.push(d);
            }
        }
        let detail = if bad.is_empty() { "all inside".to_string() } else { format!("outside at {bad:?}") };
        r.check("d=1..100", bad.is_empty(), detail);
        Ok(())
    });
}

fn cube_monotone(r: &mut Recorder, dims: &[usize], cfg: &EvalConfig) {
    let top = dims.iter().copied().max().unwrap_or(12).max(12);
    let name = format!("d=1..{top}");
    r.attempt(&name.clone(), |r| {
        let mut prev = 0.0;
        let mut bad = None;
        for d in 1..=top {
            let v = cube_opnorm(&holder(1.0), d, cfg)?.value;
            if v < prev - 1e-7 && bad.is_none() {
                bad = Some(d);
            }
            prev = v;
        }
        let detail = match bad {
            None => format!("nondecreasing, d={top}: {prev:.9}"),
            Some(d) => format!("decreases at d={d}"),
        };
        r.check(name, bad.is_none(), detail);
        Ok(())
    });
}

fn identity_moduli() -> [ModulusSpec; 3] {
    [holder(1.0), holder(0.5), ModulusSpec::capped_holder(0.75, 0.5).expect("valid cap")]
}

fn l1_linf(r: &mut Recorder, dims: &[usize], cfg: &EvalConfig) {
    for &d in dims.iter().filter(|&&d| d >= 2) {
        let name = format!("identity d={d}");
        r.attempt(&name.clone(), |r| {
            let mut worst = 0.0_f64;
            for w in &identity_moduli() {
                for radius in [0.5, 0.7, 0.9] {
                    worst = worst.max(l1_linf_identity_check(w, d, 0.8, radius)?.diff);
                }
            }
            r.check(name, worst <= 1e-8, format!("max diff {worst:.1e}"));
            Ok(())
        });
        for alpha in [0.5, 1.0] {
            let name = format!("opnorm d={d} holder:{alpha}");
            r.attempt(&name.clone(), |r| {
                let c = cross_opnorm(&holder(alpha), d, cfg)?.value;
                let q = cube_opnorm(&holder(alpha), d, cfg)?.value;
                r.check(name, (c - q).abs() <= 1e-6, format!("cross {c:.12}, cube {q:.12}"));
                Ok(())
            });
        }
    }
}

fn euclid_ceiling(r: &mut Recorder, dims: &[usize], cfg: &EvalConfig) {
    for alpha in [0.5, 1.0] {
        let ceiling = 2f64.powf(-alpha / 2.0);
        for &d in dims.iter().filter(|&&d| d >= 2) {
            let name = format!("d={d} holder:{alpha}");
            r.attempt(&name.clone(), |r| {
                let v = euclid_opnorm(&holder(alpha), d, cfg)?.value;
                r.check(name, v <= ceiling + 1e-8, format!("{v:.12} <= {ceiling:.12}"));
                Ok(())
            });
        }
    }
}

fn normalization(r: &mut Recorder, dims: &[usize]) {
    for &d in dims.iter().filter(|&&d| d >= 2) {
        let name = format!("d={d}");
        r.attempt(&name.clone(), |r| {
            let mut worst = 0.0_f64;
            for radius in [0.5, 0.75, 1.0] {
                worst = worst.max((euclid_normalization_probe(d, radius)? - 1.0).abs());
                worst = worst.max((cross_normalization_probe(d, radius)? - 1.0).abs());
            }
            r.check(name, worst <= 1e-8, format!("max |probe - 1| {worst:.1e}"));
            Ok(())
        });
    }
}

fn local_1d(r: &mut Recorder, cfg: &EvalConfig) {
    for alpha in [0.1, 0.25, 0.5, 0.75, 1.0] {
        let name = format!("holder:{alpha}");
        r.attempt(&name.clone(), |r| {
            let v = local_opnorm_1d(&holder(alpha), f64::INFINITY, cfg)?.value;
            let want = 1.0 / (1.0 + alpha);
            r.check(name, (v - want).abs() <= 1e-12, format!("{v:.15}"));
            Ok(())
        });
    }
    r.attempt("capped:1:1 half-line", |r| {
        let v = local_opnorm_1d(&ModulusSpec::capped_holder(1.0, 1.0)?, f64::INFINITY, cfg)?.value;
        r.check("capped:1:1 half-line", v >= 0.999, format!("{v:.6}"));
        Ok(())
    });
}

fn oracle(r: &mut Recorder, exp: Experiment, alpha: f64) {
    let name = match exp {
        Experiment::Hat => "hat on [-8, 8]".to_string(),
        Experiment::Cone => "cone on [-2, 2]^2".to_string(),
        Experiment::Local => format!("local holder:{alpha}"),
        Experiment::Kinnunen => "50 random piecewise-linear functions".to_string(),
        Experiment::Centered => "centered hat near the peak".to_string(),
    };
    r.attempt(&name.clone(), |r| {
        let rep = experiments::run(exp, None, alpha, 20)?;
        r.check(
            name,
            rep.passed,
            format!("measured {:.6}, reference {:.6} ± {:.1e}", rep.measured, rep.reference, rep.tolerance),
        );
        Ok(())
    });
}

fn monte_carlo(r: &mut Recorder, cfg: &EvalConfig) {
    let w = holder(1.0);
    let cases: [(NormKind, usize); 3] = [(NormKind::Linf, 2), (NormKind::L2, 2), (NormKind::L1, 3)];
    for (norm, d) in cases {
        let name = format!("{} d={d}", norm.label());
        r.attempt(&name.clone(), |r| {
            let certified = opnorm(
                &OpNormQuery {
                    norm: norm.clone(),
                    d,
                    modulus: w.clone(),
                    domain: Domain::Global,
                },
                cfg,
            )?
            .value;
            let est = general_opnorm_estimate(&norm, &w, d, &McBudget::default(), 1)?;
            let gap = (est.value - certified).abs();
            r.check(
                name,
                gap <= 0.01 && gap <= 3.0 * est.stderr,
                format!("estimate {:.5} ± {:.5}, certified {certified:.5}", est.value, est.stderr),
            );
            Ok(())
        });
    }
}

fn cantor(r: &mut Recorder) {
    r.attempt("geometry", |r| {
        let mut ok = true;
        for level in 1..=3 {
            let grid = (level == 3).then_some(maxmod::oracle::SAMPLES_PER_HOLE * 16usize.pow(3) + 1);
            let m = cantor_build(0.5, level, grid)?;
            ok &= m.component_count().to_string() == CantorModel::expected_count(level).to_string()
                && m.measure() == CantorModel::expected_measure(level)
                && m.component_length() == CantorModel::expected_length(level);
        }
        r.check("geometry", ok, "counts, lengths and measures for levels 1..3");
        Ok(())
    });
    r.attempt("displayed bound", |r| {
        let p = cantor_probe(&cantor_build(0.5, 1, None)?, 1.0)?;
        let top = p.centre_values.iter().map(|c| c.1).fold(0.0, f64::max);
        r.check("displayed bound", p.bound_holds, format!("max {top:.6} <= {:.6}", p.displayed_bound));
        Ok(())
    });
    r.attempt("quotient growth", |r| {
        let q: Vec<f64> = cantor_sequence(0.25, 1.0, 3)?.iter().map(|p| p.quotient).collect();
        let ok = q.windows(2).all(|w| w[1] > w[0]);
        let shown: Vec<String> = q.iter().map(|v| format!("{v:.3e}")).collect();
        r.check("quotient growth", ok, format!("alpha 0.25, beta 1: {}", shown.join(" < ")));
        Ok(())
    });
}
