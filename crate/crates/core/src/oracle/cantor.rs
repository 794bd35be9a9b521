//! A fat Cantor set and a Hölder function whose maximal function has large
//! Hölder quotients near the set.
//!
//! Stage `j` removes `4^j` open intervals of length `16^{-j} L` from every
//! component of length `L`, leaving `4^j + 1` components of equal length.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::one_d::{holder_constant_1d, trapezoid_prefix, uncentered_at};
use super::GridFunction;
use crate::error::{Error, Result};

pub const MAX_LEVEL: u32 = 3;
/// Samples required across the smallest removed interval.
pub const SAMPLES_PER_HOLE: usize = 32;

#[derive(Debug, Clone, PartialEq)]
pub struct DeletedInterval {
    pub stage: u32,
    pub centre: BigRational,
    pub half_length: BigRational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CantorModel {
    pub alpha: f64,
    pub level: u32,
    /// Components of `F_level`, left to right.
    pub components: Vec<(BigRational, BigRational)>,
    /// Removed intervals of every stage, left to right.
    pub deleted: Vec<DeletedInterval>,
    /// Length of the components of `F_{level-1}`; the component `[0, window]`
    /// is where the function is sampled.
    pub window: BigRational,
    /// `f_level` sampled on `[0, window]`.
    pub f: GridFunction,
    holes: Vec<(f64, f64)>,
}

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn pow4(j: u32) -> BigRational {
    BigRational::from_integer(BigInt::from(4u32).pow(j))
}

pub fn to_f64(r: &BigRational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

impl CantorModel {
    pub fn component_count(&self) -> usize {
        self.components.len()
    }

    pub fn component_length(&self) -> BigRational {
        let (l, r) = &self.components[0];
        r - l
    }

    pub fn measure(&self) -> BigRational {
        self.components.iter().fold(BigRational::zero(), |acc, (l, r)| acc + (r - l))
    }

    /// `prod_{i=1}^{level} (4^i + 1)`.
    pub fn expected_count(level: u32) -> BigInt {
        (1..=level).fold(BigInt::one(), |acc, i| acc * (BigInt::from(4u32).pow(i) + 1))
    }

    /// `prod_{i=1}^{level} (1 - 4^{-i})`.
    pub fn expected_measure(level: u32) -> BigRational {
        (1..=level).fold(BigRational::one(), |acc, i| acc * (BigRational::one() - pow4(i).recip()))
    }

    /// Length of the components of `F_level`, from the recursion.
    pub fn expected_length(level: u32) -> BigRational {
        (1..=level).fold(BigRational::one(), |len, i| {
            (BigRational::one() - pow4(i).recip()) * len / (pow4(i) + BigRational::one())
        })
    }

    /// `f_level(x)`: one on `F_level`, a reflected `alpha`-power spike on each hole.
    pub fn eval(&self, x: f64) -> f64 {
        let i = self.holes.partition_point(|&(c, t)| c + t <= x);
        match self.holes.get(i) {
            Some(&(c, t)) if (x - c).abs() < t => 1.0 - (t - (x - c).abs()).powf(self.alpha),
            _ => 1.0,
        }
    }

    /// Centres of the last-stage holes inside the sampled window.
    pub fn window_centres(&self) -> Vec<f64> {
        let w = to_f64(&self.window);
        self.deleted
            .iter()
            .filter(|h| h.stage == self.level)
            .map(|h| to_f64(&h.centre))
            .filter(|&c| c < w)
            .collect()
    }
}

/// Builds `F_level` with exact rational endpoints and samples `f_level` on the
/// component of `F_{level-1}` that contains the origin.
pub fn cantor_build(alpha: f64, level: u32, grid_n: Option<usize>) -> Result<CantorModel> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Argument(format!("exponent must lie in (0, 1], got {alpha}")));
    }
    if level == 0 || level > MAX_LEVEL {
        return Err(Error::Argument(format!("level must be between 1 and {MAX_LEVEL}, got {level}")));
    }
    let mut components = vec![(BigRational::zero(), BigRational::one())];
    let mut deleted = Vec::new();
    let mut window = BigRational::one();
    for j in 1..=level {
        window = components[0].1.clone() - components[0].0.clone();
        let holes_per = pow4(j);
        let m = 4usize.pow(j);
        let mut next = Vec::with_capacity(components.len() * (m + 1));
        for (l, r) in &components {
            let len = r - l;
            let hole = &len / (&holes_per * &holes_per);
            let half = &hole / rat(2, 1);
            let piece = (&len - &holes_per * &hole) / (&holes_per + BigRational::one());
            let step = &piece + &hole;
            for i in 0..=m {
                let left = l + &step * rat(i as i64, 1);
                next.push((left.clone(), &left + &piece));
                if i < m {
                    deleted.push(DeletedInterval {
                        stage: j,
                        centre: &left + &piece + &half,
                        half_length: half.clone(),
                    });
                }
            }
        }
        components = next;
    }
    deleted.sort_by(|a, b| a.centre.cmp(&b.centre));
    let holes: Vec<(f64, f64)> = deleted.iter().map(|h| (to_f64(&h.centre), to_f64(&h.half_length))).collect();

    let w = to_f64(&window);
    let smallest = 2.0 * to_f64(&deleted.iter().filter(|h| h.stage == level).next().unwrap().half_length);
    let minimum = SAMPLES_PER_HOLE * 16usize.pow(level) + 1;
    let n = grid_n.unwrap_or(minimum.max(4097));
    let h = w / (n - 1) as f64;
    if smallest / h < SAMPLES_PER_HOLE as f64 * (1.0 - 1e-9) {
        return Err(Error::Resolution(format!(
            "{n} samples on [0, {w:.3e}] give {:.1} samples across the smallest hole; need {SAMPLES_PER_HOLE} (use at least {minimum})",
            smallest / h
        )));
    }
    let mut model = CantorModel {
        alpha,
        level,
        components,
        deleted,
        window,
        f: GridFunction::interval(0.0, 1.0, vec![0.0, 0.0])?,
        holes,
    };
    model.f = GridFunction::sample_interval(0.0, w, n, |x| model.eval(x))?;
    Ok(model)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CantorProbe {
    pub level: u32,
    pub alpha: f64,
    pub beta: f64,
    pub samples: usize,
    /// `(x_i, Mf(x_i))` at the last-stage hole centres in the window.
    pub centre_values: Vec<(f64, f64)>,
    pub displayed_bound: f64,
    pub bound_holds: bool,
    pub witness_z: f64,
    pub witness_w: f64,
    pub mf_z: f64,
    pub mf_w: f64,
    /// `|Mf(z) - Mf(w)| / |z - w|^beta`.
    pub quotient: f64,
    /// Empirical Hölder-alpha constant of the sampled `f`.
    pub lip_alpha: f64,
}

/// Evaluates the grid maximal function at the hole centres and along the
/// witness pair `z = 0`, `w` = centre of the first last-stage hole.
pub fn cantor_probe(model: &CantorModel, beta: f64) -> Result<CantorProbe> {
    if !(beta >= model.alpha && beta <= 1.0) {
        return Err(Error::Argument(format!("beta must lie in [alpha, 1], got {beta}")));
    }
    let f = &model.f;
    let prefix = trapezoid_prefix(f.values(), f.h());
    let n = model.level as f64;
    let a = model.alpha;
    let w = to_f64(&model.window);
    let displayed_bound = 1.0 - 2f64.powf(-4.0 * a * n - 2.0 * n - a - 2.0) * w.powf(a);

    let centre_values: Vec<(f64, f64)> = model
        .window_centres()
        .into_iter()
        .map(|c| {
            let i = f.index_of(c);
            (f.x(i), uncentered_at(f, &prefix, i))
        })
        .collect();
    let bound_holds = centre_values.iter().all(|&(_, m)| m <= displayed_bound);

    let (witness_w, mf_w) = centre_values[0];
    let mf_z = uncentered_at(f, &prefix, 0);
    let quotient = (mf_z - mf_w).abs() / witness_w.powf(beta);

    // only last-stage holes meet the window
    let spike = 2.0 * to_f64(&model.deleted.iter().find(|h| h.stage == model.level).unwrap().half_length);
    let lag = ((2.0 * spike / f.h()).ceil() as usize).max(1);
    let lip_alpha = holder_constant_1d(f, a, Some(lag))?;

    Ok(CantorProbe {
        level: model.level,
        alpha: a,
        beta,
        samples: f.n(),
        centre_values,
        displayed_bound,
        bound_holds,
        witness_z: 0.0,
        witness_w,
        mf_z,
        mf_w,
        quotient,
        lip_alpha,
    })
}

/// Probes for levels `1..=max_level` with default grids.
pub fn cantor_sequence(alpha: f64, beta: f64, max_level: u32) -> Result<Vec<CantorProbe>> {
    (1..=max_level)
        .map(|level| cantor_probe(&cantor_build(alpha, level, None)?, beta))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_one_geometry() {
        let m = cantor_build(0.5, 1, None).unwrap();
        assert_eq!(m.component_count(), 5);
        assert_eq!(m.component_length(), rat(3, 20));
        assert!(m.components.iter().all(|(l, r)| r - l == rat(3, 20)));
        let removed: BigRational = m.deleted.iter().fold(BigRational::zero(), |acc, h| acc + &h.half_length * rat(2, 1));
        assert_eq!(removed, rat(1, 4));
        assert_eq!(m.deleted.len(), 4);
        assert_eq!(m.window, BigRational::one());
    }

    #[test]
    fn level_two_measure() {
        let m = cantor_build(0.5, 2, Some(8193)).unwrap();
        assert_eq!(m.component_count(), 85);
        assert_eq!(m.measure(), rat(45, 64));
        assert_eq!(m.component_length(), rat(9, 1088));
        assert_eq!(m.component_length(), CantorModel::expected_length(2));
        assert_eq!(m.window, rat(3, 20));
        assert!(to_f64(&CantorModel::expected_measure(40)) > 2.0 / 3.0);
    }

    #[test]
    fn function_shape() {
        let m = cantor_build(0.5, 1, None).unwrap();
        let h = &m.deleted[0];
        let c = to_f64(&h.centre);
        let t = to_f64(&h.half_length);
        assert!((m.eval(c) - (1.0 - t.sqrt())).abs() < 1e-15);
        assert_eq!(m.eval(c + t), 1.0);
        assert_eq!(m.eval(0.0), 1.0);
        assert!((m.eval(c - 0.5 * t) - (1.0 - (0.5 * t).sqrt())).abs() < 1e-15);
    }

    #[test]
    fn resolution_guard() {
        assert!(matches!(cantor_build(0.5, 2, Some(1000)), Err(Error::Resolution(_))));
        assert!(cantor_build(0.5, 4, None).is_err());
    }

    #[test]
    fn level_one_probe() {
        let p = cantor_probe(&cantor_build(0.5, 1, None).unwrap(), 1.0).unwrap();
        assert!((p.displayed_bound - (1.0 - 2f64.powf(-6.5))).abs() < 1e-15);
        assert!(p.bound_holds, "{:?}", p.centre_values);
        assert_eq!(p.mf_z, 1.0);
        assert!(p.lip_alpha <= 1.0 + 1e-9 && p.lip_alpha > 0.95);
    }
}
