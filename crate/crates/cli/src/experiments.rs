//! Grid experiments shared by `oracle` and `verify`.

use anyhow::Result;
use maxmod::oracle::{
    empirical_modulus, grid_max_box, grid_max_centered_1d, grid_max_uncentered_1d, holder_constant_1d, GridFunction,
};
use maxmod::{Extremal, ExtremalDomain, ModulusSpec, NormKind};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Experiment {
    /// Lipschitz ratio of the hat on [-8, 8].
    Hat,
    /// Lipschitz ratio of the cone on [-2, 2]^2 with cubes.
    Cone,
    /// Hölder ratio of the local extremal on [0, 8].
    Local,
    /// w(Mf, t) <= w(f, t) for random piecewise-linear f.
    Kinnunen,
    /// Centered maximal function of the hat near the peak.
    Centered,
}

#[derive(Debug, Clone, Serialize)]
pub struct OracleReport {
    pub experiment: String,
    pub samples: usize,
    pub h: f64,
    pub measured: f64,
    pub reference: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(skip)]
    pub grid: GridFunction,
}

fn hat(x: f64) -> f64 {
    (1.0 - x.abs()).max(0.0)
}

/// Largest `w(g, t) / t^alpha` over distances well above the grid step.
fn ratio_at_scale(g: &GridFunction, ts: &[f64], alpha: f64, norm: &NormKind) -> Result<f64> {
    Ok(empirical_modulus(g, ts, norm)?
        .into_iter()
        .map(|(t, w)| w / t.powf(alpha))
        .fold(0.0, f64::max))
}

pub fn run(exp: Experiment, n: Option<usize>, alpha: f64, seed: u64) -> Result<OracleReport> {
    match exp {
        Experiment::Hat => {
            let n = n.unwrap_or(8193);
            let f = GridFunction::sample_interval(-8.0, 8.0, n, hat)?;
            let m = grid_max_uncentered_1d(&f)?;
            let ts = [0.125, 0.25, 0.5, 1.0];
            let lip = ratio_at_scale(&m, &ts, 1.0, &NormKind::Linf)? / ratio_at_scale(&f, &ts, 1.0, &NormKind::Linf)?;
            Ok(report("hat", &f, lip, std::f64::consts::SQRT_2 - 1.0, 5e-3, m))
        }
        Experiment::Cone => {
            let n = n.unwrap_or(129);
            let f = GridFunction::sample_box(&[-2.0, -2.0], &[2.0, 2.0], n, |x| hat(NormKind::Linf.eval(x)))?;
            let m = grid_max_box(&f, &NormKind::Linf)?.max;
            let ts = [0.5, 1.0];
            let lip = ratio_at_scale(&m, &ts, 1.0, &NormKind::Linf)? / ratio_at_scale(&f, &ts, 1.0, &NormKind::Linf)?;
            let reference = maxmod::opnorm::cube_opnorm_holder_closed(1.0, 2)?.value;
            Ok(report("cone", &f, lip, reference, 1e-2, m))
        }
        Experiment::Local => {
            let n = n.unwrap_or(8193);
            let w = ModulusSpec::holder(alpha)?;
            let psi = Extremal::construct(&w, ExtremalDomain::Interval { length: 8.0 }, None)?;
            let f = GridFunction::sample_interval(0.0, 8.0, n, |x| psi.eval_1d(x))?;
            let m = grid_max_uncentered_1d(&f)?;
            let c = holder_constant_1d(&m, alpha, None)? / holder_constant_1d(&f, alpha, None)?;
            Ok(report("local", &f, c, 1.0 / (1.0 + alpha), 1e-2, m))
        }
        Experiment::Kinnunen => {
            let n = n.unwrap_or(513);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let ts: Vec<f64> = (1..=16).map(|k| k as f64 / 32.0).collect();
            let mut worst = f64::NEG_INFINITY;
            let mut last = None;
            for _ in 0..50 {
                let knots = rng.gen_range(3..12);
                let ys: Vec<f64> = (0..=knots).map(|_| rng.gen::<f64>()).collect();
                let f = GridFunction::sample_interval(0.0, 1.0, n, |x| {
                    let s = x * knots as f64;
                    let i = (s.floor() as usize).min(knots - 1);
                    ys[i] + (s - i as f64) * (ys[i + 1] - ys[i])
                })?;
                let m = grid_max_uncentered_1d(&f)?;
                let wf = empirical_modulus(&f, &ts, &NormKind::Linf)?;
                let wm = empirical_modulus(&m, &ts, &NormKind::Linf)?;
                for ((_, a), (_, b)) in wf.iter().zip(&wm) {
                    worst = worst.max((b - a) / f.h());
                }
                last = Some((f, m));
            }
            let (f, m) = last.expect("fifty trials");
            // measured: worst excess of w(Mf, t) over w(f, t), in grid steps
            Ok(report("kinnunen", &f, worst.max(0.0), 0.0, 2.0, m))
        }
        Experiment::Centered => {
            let n = n.unwrap_or(1601);
            let f = GridFunction::sample_interval(-4.0, 4.0, n, hat)?;
            let m = grid_max_centered_1d(&f)?;
            let gap = (0..f.n())
                .filter(|&i| f.x(i).abs() <= 0.5)
                .map(|i| (m.values()[i] - f.values()[i]).abs())
                .fold(0.0, f64::max);
            Ok(report("centered", &f, gap, 0.0, 2.0 * f.h(), m))
        }
    }
}

fn report(name: &str, f: &GridFunction, measured: f64, reference: f64, tol: f64, m: GridFunction) -> OracleReport {
    OracleReport {
        experiment: name.into(),
        samples: f.n(),
        h: f.h(),
        measured,
        reference,
        tolerance: tol,
        passed: (measured - reference).abs() <= tol,
        grid: m,
    }
}
