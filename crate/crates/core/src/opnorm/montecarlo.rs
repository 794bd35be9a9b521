//! Monte Carlo estimate of the operator norm for an arbitrary norm.
//!
//! For a unit vector `v`, a radius `R <= 1` and a unit vector `w`, the ball
//! `B(v - R w, R)` has `v` on its boundary. The estimate is
//! `max_v min_{R, w} avg_{u in B} w(t N(v - R w + R u)) / w(t)`, with one fixed
//! sample of the unit ball shared by every candidate.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::omega_at;
use crate::error::{Error, Result};
use crate::moduli::ModulusSpec;
use crate::norm::NormKind;
use crate::numerics::TGrid;

/// Largest dimension accepted; rejection sampling degrades quickly beyond it.
pub const MAX_DIM: usize = 6;

const STREAM_BALL: u64 = 0;
const STREAM_DIRECTIONS: u64 = 1;
const STREAM_CENTRES: u64 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McBudget {
    pub ball_samples: usize,
    /// Random unit vectors `v` tried besides the coordinate and diagonal ones.
    pub directions: usize,
    /// Random unit vectors `w` tried besides `w = v`.
    pub centres: usize,
    pub r_grid: usize,
    pub refine_iters: usize,
}

impl Default for McBudget {
    fn default() -> Self {
        Self {
            ball_samples: 40_000,
            directions: 5,
            centres: 8,
            r_grid: 9,
            refine_iters: 16,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct McEstimate {
    pub value: f64,
    pub stderr: f64,
    pub low_confidence: bool,
    pub v_star: Vec<f64>,
    pub w_star: Vec<f64>,
    pub r_star: f64,
    pub t_star: f64,
    pub samples: usize,
    pub acceptance_rate: f64,
    pub norm: String,
    pub dim: usize,
    pub modulus: String,
    pub method: String,
    pub citations: Vec<String>,
}

fn stream(seed: u64, id: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(id);
    rng
}

fn random_unit(rng: &mut ChaCha8Rng, norm: &NormKind, d: usize) -> Vec<f64> {
    loop {
        let x: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let n = norm.eval(&x);
        if n > 1e-3 {
            return x.iter().map(|v| v / n).collect();
        }
    }
}

fn normalize(x: &[f64], norm: &NormKind) -> Vec<f64> {
    let n = norm.eval(x);
    x.iter().map(|v| v / n).collect()
}

struct Objective<'a> {
    norm: &'a NormKind,
    spec: &'a ModulusSpec,
    ball: &'a [f64],
    d: usize,
    t: f64,
    wt: f64,
    scratch: Vec<f64>,
}

impl Objective<'_> {
    /// Sample mean and standard deviation of the normalized modulus over the ball.
    fn stats(&mut self, v: &[f64], r: f64, w: &[f64]) -> (f64, f64) {
        let d = self.d;
        let n = self.ball.len() / d;
        let (mut sum, mut sum2) = (0.0, 0.0);
        for u in self.ball.chunks_exact(d) {
            for k in 0..d {
                self.scratch[k] = v[k] - r * w[k] + r * u[k];
            }
            let y = self.spec.at(self.t * self.norm.eval(&self.scratch)) / self.wt;
            sum += y;
            sum2 += y * y;
        }
        let mean = sum / n as f64;
        let var = (sum2 / n as f64 - mean * mean).max(0.0) * n as f64 / (n as f64 - 1.0).max(1.0);
        (mean, var.sqrt())
    }

    fn mean(&mut self, v: &[f64], r: f64, w: &[f64]) -> f64 {
        self.stats(v, r, w).0
    }

    /// `min_R` by grid and golden section; returns `(value, R)`.
    fn min_over_r(&mut self, v: &[f64], w: &[f64], budget: &McBudget) -> (f64, f64) {
        let n = budget.r_grid.max(2);
        let rs: Vec<f64> = (1..=n).map(|j| j as f64 / n as f64).collect();
        let mut best = (f64::INFINITY, 1.0);
        let mut best_j = 0;
        for (j, &r) in rs.iter().enumerate() {
            let f = self.mean(v, r, w);
            if f < best.0 {
                best = (f, r);
                best_j = j;
            }
        }
        let g = 0.618_033_988_749_894_8;
        let mut lo = if best_j == 0 { 1e-6 } else { rs[best_j - 1] };
        let mut hi = rs[(best_j + 1).min(n - 1)];
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let mut f1 = self.mean(v, x1, w);
        let mut f2 = self.mean(v, x2, w);
        for _ in 0..budget.refine_iters {
            if f1 <= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = self.mean(v, x1, w);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = self.mean(v, x2, w);
            }
        }
        for (f, r) in [(f1, x1), (f2, x2)] {
            if f < best.0 {
                best = (f, r);
            }
        }
        best
    }
}

/// Candidate directions: coordinate axis, full diagonal, two-coordinate diagonal, random.
fn direction_candidates(norm: &NormKind, d: usize, budget: &McBudget, seed: u64) -> Vec<Vec<f64>> {
    let mut out = Vec::new();
    let mut e1 = vec![0.0; d];
    e1[0] = 1.0;
    out.push(normalize(&e1, norm));
    if d > 1 {
        out.push(normalize(&vec![1.0; d], norm));
    }
    if d > 2 {
        let mut x = vec![0.0; d];
        x[0] = 1.0;
        x[1] = 1.0;
        out.push(normalize(&x, norm));
    }
    let mut rng = stream(seed, STREAM_DIRECTIONS);
    for _ in 0..budget.directions {
        out.push(random_unit(&mut rng, norm, d));
    }
    out
}

/// Best-effort, biased-low estimate of the operator norm for any norm in
/// dimension at most [`MAX_DIM`]. Never a certified constant.
pub fn general_opnorm_estimate(
    norm: &NormKind,
    spec: &ModulusSpec,
    d: usize,
    budget: &McBudget,
    seed: u64,
) -> Result<McEstimate> {
    if d == 0 || d > MAX_DIM {
        return Err(Error::Argument(format!("Monte Carlo estimate supports 1 <= d <= {MAX_DIM}, got {d}")));
    }
    if budget.ball_samples < 2 {
        return Err(Error::Argument("need at least two ball samples".into()));
    }

    let mut rng = stream(seed, STREAM_BALL);
    let mut ball = Vec::with_capacity(budget.ball_samples * d);
    let mut attempts = 0usize;
    let max_attempts = budget.ball_samples.saturating_mul(1000);
    let mut x = vec![0.0; d];
    while ball.len() < budget.ball_samples * d {
        attempts += 1;
        if attempts > max_attempts {
            return Err(Error::Argument(format!(
                "rejection sampling accepted too few points for norm {}",
                norm.label()
            )));
        }
        for xi in x.iter_mut() {
            *xi = rng.gen_range(-1.0..1.0);
        }
        if norm.eval(&x) <= 1.0 {
            ball.extend_from_slice(&x);
        }
    }

    let ts: Vec<f64> = if spec.is_homogeneous() {
        vec![1.0]
    } else {
        let g = TGrid { per_decade: 2, ..TGrid::default() };
        g.points(None)
    };

    let dirs = direction_candidates(norm, d, budget, seed);
    let mut centre_rng = stream(seed, STREAM_CENTRES);
    let centres: Vec<Vec<f64>> = (0..budget.centres).map(|_| random_unit(&mut centre_rng, norm, d)).collect();

    let mut best: Option<(f64, Vec<f64>, Vec<f64>, f64, f64)> = None;
    for &t in &ts {
        let mut obj = Objective {
            norm,
            spec,
            ball: &ball,
            d,
            t,
            wt: omega_at(spec, t)?,
            scratch: vec![0.0; d],
        };
        for v in &dirs {
            let mut inner: Option<(f64, Vec<f64>, f64)> = None;
            for w in std::iter::once(v).chain(centres.iter()) {
                let (f, r) = obj.min_over_r(v, w, budget);
                if inner.as_ref().map_or(true, |b| f < b.0) {
                    inner = Some((f, w.clone(), r));
                }
            }
            let (f, w, r) = inner.expect("at least one centre");
            if best.as_ref().map_or(true, |b| f > b.0) {
                best = Some((f, v.clone(), w, r, t));
            }
        }
    }
    let (value, v_star, w_star, r_star, t_star) = best.expect("at least one direction");
    let mut obj = Objective {
        norm,
        spec,
        ball: &ball,
        d,
        t: t_star,
        wt: omega_at(spec, t_star)?,
        scratch: vec![0.0; d],
    };
    let (_, sd) = obj.stats(&v_star, r_star, &w_star);
    let stderr = sd / (budget.ball_samples as f64).sqrt();
    Ok(McEstimate {
        value,
        stderr,
        low_confidence: budget.ball_samples < 10_000 || stderr > 0.01,
        v_star,
        w_star,
        r_star,
        t_star,
        samples: budget.ball_samples,
        acceptance_rate: budget.ball_samples as f64 / attempts as f64,
        norm: norm.label(),
        dim: d,
        modulus: spec.label(),
        method: format!("monte carlo, seed {seed}, best effort"),
        citations: vec!["general-monte-carlo".to_string()],
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> McBudget {
        McBudget {
            ball_samples: 4000,
            ..McBudget::default()
        }
    }

    #[test]
    fn deterministic_per_seed() {
        let w = ModulusSpec::holder(1.0).unwrap();
        let a = general_opnorm_estimate(&NormKind::Linf, &w, 2, &small(), 7).unwrap();
        let b = general_opnorm_estimate(&NormKind::Linf, &w, 2, &small(), 7).unwrap();
        assert_eq!(a, b);
        assert!(a.low_confidence);
    }

    #[test]
    fn one_dimensional_estimate() {
        let w = ModulusSpec::holder(1.0).unwrap();
        let e = general_opnorm_estimate(&NormKind::L2, &w, 1, &small(), 1).unwrap();
        assert!((e.value - (2f64.sqrt() - 1.0)).abs() < 0.02, "{e:?}");
    }

    #[test]
    fn rejects_large_dimension() {
        let w = ModulusSpec::holder(1.0).unwrap();
        assert!(general_opnorm_estimate(&NormKind::L2, &w, 7, &small(), 1).is_err());
    }

    #[test]
    fn lp_norm_estimate_is_plausible() {
        let w = ModulusSpec::holder(1.0).unwrap();
        let e = general_opnorm_estimate(&NormKind::Lp(1.5), &w, 2, &small(), 3).unwrap();
        assert!(e.value > 0.4 && e.value <= 2.0 / 3.0 + 0.02, "{e:?}");
    }
}
