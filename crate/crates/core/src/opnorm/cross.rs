//! Cross-polytopes, i.e. balls of the `l1` norm.

use serde::Serialize;

use super::{cross_prefactor, cube::cube_value_with, cube_opnorm, omega_at, EvalConfig, OpNormResult};
use crate::error::{Error, Result};
use crate::moduli::ModulusSpec;
use crate::norm::NormKind;
use crate::numerics::{sup_over_t, try_integrate, try_minimize, Minimum};

/// `int_{-1}^{1} int_0^{1-|u|} g(|1-R+Ru| + R rho) rho^{d-2} drho du` with
/// `rho = z^{1/(d-1)}` in the inner integral.
pub(crate) fn cross_integral<G>(g: G, kinks: &[f64], d: usize, r: f64, cfg: &EvalConfig) -> Result<(f64, f64)>
where
    G: Fn(f64) -> f64,
{
    let m = (d - 1) as f64;
    let expo = 1.0 / m;
    let mut inner_err = 0.0_f64;

    let mut outer_q = cfg.quad.clone();
    outer_q.breakpoints.clear();
    outer_q.breakpoints.extend([(r - 1.0) / r, 0.0]);
    for &k in kinks {
        outer_q.breakpoints.push((k - (1.0 - r)) / r);
        outer_q.breakpoints.push((-k - (1.0 - r)) / r);
        outer_q.breakpoints.push((k - 1.0) / (2.0 * r));
    }

    let mut inner_q = cfg.inner_quad.clone();
    let outer = try_integrate(
        |u| {
            let a = (1.0 - r + r * u).abs();
            let top = (1.0 - u.abs()).max(0.0).powf(m);
            if top == 0.0 {
                return Ok(0.0);
            }
            inner_q.breakpoints.clear();
            for &k in kinks {
                if k > a {
                    inner_q.breakpoints.push(((k - a) / r).powf(m));
                }
            }
            let res = if d == 2 {
                try_integrate(|z| Ok(g(a + r * z)), 0.0, top, &inner_q)?
            } else {
                try_integrate(|z| Ok(g(a + r * z.powf(expo))), 0.0, top, &inner_q)?
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

fn check_args(d: usize, r: f64) -> Result<()> {
    if d < 2 {
        return Err(Error::Argument("the cross-polytope formula needs d >= 2".into()));
    }
    if !(0.5..=1.0).contains(&r) {
        return Err(Error::Argument(format!("R must lie in [1/2, 1], got {r}")));
    }
    Ok(())
}

/// `d(d-1)/2` times the double integral, before dividing by `w(t)`.
pub fn cross_integral_scaled(spec: &ModulusSpec, d: usize, t: f64, r: f64, cfg: &EvalConfig) -> Result<(f64, f64)> {
    check_args(d, r)?;
    let kinks: Vec<f64> = spec.kinks().into_iter().map(|k| k / t).collect();
    let (v, e) = cross_integral(|x| spec.at(t * x), &kinks, d, r, cfg)?;
    let c = cross_prefactor(d);
    Ok((c * v, c * e))
}

/// The cross-polytope objective at scale `t` and radius `R in [1/2, 1]`.
pub fn cross_value_with(spec: &ModulusSpec, d: usize, t: f64, r: f64, cfg: &EvalConfig) -> Result<(f64, f64)> {
    let wt = omega_at(spec, t)?;
    let (v, e) = cross_integral_scaled(spec, d, t, r, cfg)?;
    Ok((v / wt, e / wt))
}

pub fn cross_value(spec: &ModulusSpec, d: usize, t: f64, r: f64) -> Result<f64> {
    cross_value_with(spec, d, t, r, &EvalConfig::default()).map(|v| v.0)
}

/// The reduced cross-polytope formula with the modulus replaced by `1`; equals `1`.
pub fn cross_normalization_probe(d: usize, r: f64) -> Result<f64> {
    check_args(d, r)?;
    let (v, _) = cross_integral(|_| 1.0, &[], d, r, &EvalConfig::default())?;
    Ok(cross_prefactor(d) * v)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub diff: f64,
}

/// Compares the cross-polytope integral at `R` with the cube objective at
/// `s = 2R - 1`, both multiplied by `w(t)`.
pub fn l1_linf_identity_check(spec: &ModulusSpec, d: usize, t: f64, r: f64) -> Result<IdentityCheck> {
    let cfg = EvalConfig::default();
    let (lhs, _) = cross_integral_scaled(spec, d, t, r, &cfg)?;
    let (cube, _) = cube_value_with(spec, d, t, 2.0 * r - 1.0, &cfg.quad)?;
    let rhs = cube * omega_at(spec, t)?;
    Ok(IdentityCheck {
        lhs,
        rhs,
        diff: (lhs - rhs).abs(),
    })
}

/// `sup_t min_{1/2 <= R <= 1}` of the cross-polytope objective.
pub fn cross_opnorm(spec: &ModulusSpec, d: usize, cfg: &EvalConfig) -> Result<OpNormResult> {
    if d == 1 {
        let mut r = cube_opnorm(spec, 1, cfg)?;
        r.norm = NormKind::L1.label();
        return Ok(r);
    }
    let mut seen: Vec<(f64, Minimum)> = Vec::new();
    let ts = sup_over_t(
        |t| {
            let m = try_minimize(
                |r| cross_value_with(spec, d, t, r, cfg).map(|v| v.0),
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
    let (_, err) = cross_value_with(spec, d, ts.t_star, best.x, cfg)?;
    let mut res = OpNormResult::new(ts.value, &NormKind::L1, d, spec, "cross-polytope quadrature", "cross-quadrature")
        .with_tsup(&ts);
    res.r_star = Some(best.x);
    res.s_star = Some(2.0 * best.x - 1.0);
    res.err_estimate = err;
    Ok(res)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalization() {
        for d in [2, 3, 7, 10] {
            for r in [0.5, 0.75, 1.0] {
                let p = cross_normalization_probe(d, r).unwrap();
                assert!((p - 1.0).abs() < 1e-10, "d {d} R {r}: {p}");
            }
        }
    }

    #[test]
    fn identity_examples() {
        let c = l1_linf_identity_check(&ModulusSpec::holder(1.0).unwrap(), 2, 1.0, 0.7).unwrap();
        assert!(c.diff <= 1e-9, "{c:?}");
        let w = ModulusSpec::capped_holder(0.5, 2.0).unwrap();
        let c = l1_linf_identity_check(&w, 5, 1.0, 0.9).unwrap();
        assert!(c.diff <= 1e-8, "{c:?}");
        let c = l1_linf_identity_check(&ModulusSpec::holder(0.5).unwrap(), 3, 1.0, 0.5).unwrap();
        assert!(c.diff <= 1e-9, "{c:?}");
    }

    #[test]
    fn rotated_square() {
        let r = cross_opnorm(&ModulusSpec::holder(1.0).unwrap(), 2, &EvalConfig::default()).unwrap();
        assert!((r.value - 0.5740).abs() < 5e-4);
    }
}
