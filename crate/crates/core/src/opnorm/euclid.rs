//! Euclidean balls.

use serde::Serialize;

use super::{cube_opnorm, euclid_prefactor, omega_at, EvalConfig, OpNormResult};
use crate::error::{Error, Result};
use crate::moduli::ModulusSpec;
use crate::norm::NormKind;
use crate::numerics::{sup_over_t, try_integrate, try_minimize, Minimum, TGrid};

/// `int_{-1}^{1} int_0^{sqrt(1-u^2)} g(sqrt((1-R+Ru)^2 + R^2 rho^2)) rho^{d-2} drho du`
/// with `rho = z^{1/(d-1)}` in the inner integral. `kinks` lists radii where
/// `g` is not smooth.
pub(crate) fn euclid_integral<G>(g: G, kinks: &[f64], d: usize, r: f64, cfg: &EvalConfig) -> Result<(f64, f64)>
where
    G: Fn(f64) -> f64,
{
    let m = (d - 1) as f64;
    let expo = 2.0 / m;
    let r2 = r * r;
    let mut inner_err = 0.0_f64;

    let mut outer_q = cfg.quad.clone();
    outer_q.breakpoints.clear();
    outer_q.breakpoints.push((r - 1.0) / r);
    for &k in kinks {
        outer_q.breakpoints.push((k - (1.0 - r)) / r);
        outer_q.breakpoints.push((-k - (1.0 - r)) / r);
        if r < 1.0 {
            outer_q.breakpoints.push((k * k - (1.0 - r).powi(2) - r2) / (2.0 * r * (1.0 - r)));
        }
    }

    let mut inner_q = cfg.inner_quad.clone();
    let outer = try_integrate(
        |u| {
            let a = 1.0 - r + r * u;
            let a2 = a * a;
            let top = (1.0 - u * u).max(0.0).powf(m / 2.0);
            if top == 0.0 {
                return Ok(0.0);
            }
            inner_q.breakpoints.clear();
            for &k in kinks {
                if k > a.abs() {
                    let z = ((k * k - a2).sqrt() / r).powf(m);
                    inner_q.breakpoints.push(z);
                }
            }
            let res = if d == 2 {
                try_integrate(|z| Ok(g((a2 + r2 * z * z).sqrt())), 0.0, top, &inner_q)?
            } else {
                try_integrate(|z| Ok(g((a2 + r2 * z.powf(expo)).sqrt())), 0.0, top, &inner_q)?
            };
            inner_err += res.err;
            Ok(res.value / m)
        },
        -1.0,
        1.0,
        &outer_q,
    )?;
    Ok((outer.value, outer.err + inner_err / m))
}

/// The euclidean objective at scale `t` and radius `R in [1/2, 1]`.
pub fn euclid_value_with(spec: &ModulusSpec, d: usize, t: f64, r: f64, cfg: &EvalConfig) -> Result<(f64, f64)> {
    if d < 2 {
        return Err(Error::Argument("the euclidean formula needs d >= 2".into()));
    }
    if !(0.5..=1.0).contains(&r) {
        return Err(Error::Argument(format!("R must lie in [1/2, 1], got {r}")));
    }
    let wt = omega_at(spec, t)?;
    let kinks: Vec<f64> = spec.kinks().into_iter().map(|k| k / t).collect();
    let (v, e) = euclid_integral(|x| spec.at(t * x), &kinks, d, r, cfg)?;
    let c = euclid_prefactor(d) / wt;
    Ok((c * v, c * e))
}

pub fn euclid_value(spec: &ModulusSpec, d: usize, t: f64, r: f64) -> Result<f64> {
    euclid_value_with(spec, d, t, r, &EvalConfig::default()).map(|v| v.0)
}

/// The reduced euclidean formula with the modulus replaced by `1`; equals `1`.
pub fn euclid_normalization_probe(d: usize, r: f64) -> Result<f64> {
    if d < 2 {
        return Err(Error::Argument("the euclidean formula needs d >= 2".into()));
    }
    let (v, _) = euclid_integral(|_| 1.0, &[], d, r, &EvalConfig::default())?;
    Ok(euclid_prefactor(d) * v)
}

/// `sup_t min_{1/2 <= R <= 1}` of the euclidean objective.
pub fn euclid_opnorm(spec: &ModulusSpec, d: usize, cfg: &EvalConfig) -> Result<OpNormResult> {
    if d == 1 {
        let mut r = cube_opnorm(spec, 1, cfg)?;
        r.norm = NormKind::L2.label();
        return Ok(r);
    }
    let mut seen: Vec<(f64, Minimum)> = Vec::new();
    let ts = sup_over_t(
        |t| {
            let m = try_minimize(
                |r| euclid_value_with(spec, d, t, r, cfg).map(|v| v.0),
                0.5,
                1.0,
                cfg.nested_scan,
                cfg.min_tol,
            )?;
            seen.push((t, m));
            Ok(m.f)
        },
        spec,
        None,
        &cfg.tgrid,
    )?;
    let best = seen
        .iter()
        .find(|(t, _)| *t == ts.t_star)
        .map(|p| p.1)
        .ok_or_else(|| Error::Consistency("lost track of the optimal scale".into()))?;
    let (_, err) = euclid_value_with(spec, d, ts.t_star, best.x, cfg)?;
    let mut res = OpNormResult::new(ts.value, &NormKind::L2, d, spec, "euclidean quadrature", "euclid-quadrature")
        .with_tsup(&ts);
    res.r_star = Some(best.x);
    res.err_estimate = err;
    Ok(res)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LimitBounds {
    pub lower: f64,
    pub upper: f64,
    /// The dimension-free ceiling, available when the modulus is concave.
    pub ceiling: Option<f64>,
}

/// Bounds on the large-dimension limit of the euclidean constant.
pub fn euclid_limit_bounds(spec: &ModulusSpec, grid: &TGrid) -> Result<LimitBounds> {
    let sup_ratio = |r: f64| -> Result<f64> {
        sup_over_t(
            |t| Ok(spec.at(r * t / std::f64::consts::SQRT_2) / omega_at(spec, t)?),
            spec,
            None,
            grid,
        )
        .map(|s| s.value)
    };
    let lower = sup_ratio(1.0)?;
    let mut upper = f64::INFINITY;
    let n = 121;
    for i in 0..n {
        // r - 1 on a log grid from 1e-12 to 3
        let e = -12.0 + (12.0 + 3f64.log10()) * i as f64 / (n - 1) as f64;
        upper = upper.min(sup_ratio(1.0 + 10f64.powf(e))?);
    }
    Ok(LimitBounds {
        lower,
        upper,
        ceiling: spec.is_concave().then_some(lower),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        for d in [2, 3, 5, 10, 40] {
            for r in [0.5, 0.8, 1.0] {
                let p = euclid_normalization_probe(d, r).unwrap();
                assert!((p - 1.0).abs() < 1e-10, "d {d} R {r}: {p}");
            }
        }
    }

    #[test]
    fn concentric_ball_value() {
        // R = 1 centres the ball at the origin: the average of |x| over B is d/(d+1)
        let w = ModulusSpec::holder(1.0).unwrap();
        for d in [2, 3, 6] {
            let v = euclid_value(&w, d, 1.0, 1.0).unwrap();
            assert!((v - d as f64 / (d as f64 + 1.0)).abs() < 1e-10, "d {d}: {v}");
        }
    }

    #[test]
    fn small_d_below_ceiling() {
        let w = ModulusSpec::holder(1.0).unwrap();
        let r = euclid_opnorm(&w, 2, &EvalConfig::default()).unwrap();
        assert!(r.value < std::f64::consts::FRAC_1_SQRT_2);
        assert!(r.value > 1.0 / 3.0);
        let rs = r.r_star.unwrap();
        assert!((0.5..=1.0).contains(&rs));
    }

    #[test]
    fn limit_bounds() {
        let g = TGrid::default();
        let b = euclid_limit_bounds(&ModulusSpec::holder(0.5).unwrap(), &g).unwrap();
        assert!((b.lower - 2f64.powf(-0.25)).abs() < 1e-14);
        assert!((b.upper - b.lower).abs() < 1e-11);
        assert_eq!(b.ceiling, Some(b.lower));
        let b = euclid_limit_bounds(&ModulusSpec::capped_holder(1.0, 1.0).unwrap(), &g).unwrap();
        assert_eq!(b.lower, 1.0);
        assert_eq!(b.upper, 1.0);
    }
}
