//! Cubes, i.e. balls of the `linf` norm.

use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use super::{omega_at, scaled_kinks, EvalConfig, OpNormResult};
use crate::error::{Error, Result};
use crate::moduli::ModulusSpec;
use crate::norm::NormKind;
use crate::numerics::{minimize_unimodal, solve_pd_root, sup_over_t, try_integrate, try_minimize, Minimum, QuadConfig};

/// The cube objective at scale `t` and shift `s`, with its quadrature error.
///
/// `d/((1+s)^d w(t)) [2^d int_0^s u^{d-1} w(tu) du + int_s^1 (u+s)^{d-1} w(tu) du]`,
/// with the weights rewritten as powers of numbers in `[0, 1]`.
pub fn cube_value_with(spec: &ModulusSpec, d: usize, t: f64, s: f64, quad: &QuadConfig) -> Result<(f64, f64)> {
    if d == 0 {
        return Err(Error::Argument("dimension must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::Argument(format!("s must lie in [0, 1], got {s}")));
    }
    let wt = omega_at(spec, t)?;
    let e = d as i32 - 1;
    let df = d as f64;
    let inv = 1.0 / (1.0 + s);

    let mut q = quad.clone();
    q.breakpoints = scaled_kinks(spec, t, 0.0, s);
    let first = try_integrate(|u| Ok(2.0 * inv * (2.0 * u * inv).powi(e) * spec.at(t * u)), 0.0, s, &q)?;
    q.breakpoints = scaled_kinks(spec, t, s, 1.0);
    let second = try_integrate(|u| Ok(inv * ((u + s) * inv).powi(e) * spec.at(t * u)), s, 1.0, &q)?;

    let scale = df / wt;
    Ok((scale * (first.value + second.value), scale * (first.err + second.err)))
}

pub fn cube_value(spec: &ModulusSpec, d: usize, t: f64, s: f64) -> Result<f64> {
    cube_value_with(spec, d, t, s, &EvalConfig::default().quad).map(|r| r.0)
}

/// `sup_t min_{s in [0,1]}` of the cube objective.
pub fn cube_opnorm(spec: &ModulusSpec, d: usize, cfg: &EvalConfig) -> Result<OpNormResult> {
    let mut seen: Vec<(f64, Minimum)> = Vec::new();
    let ts = sup_over_t(
        |t| {
            let m = try_minimize(|s| cube_value_with(spec, d, t, s, &cfg.quad).map(|r| r.0), 0.0, 1.0, cfg.scan, cfg.min_tol)?;
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
    let (_, err) = cube_value_with(spec, d, ts.t_star, best.x, &cfg.quad)?;
    let mut r = OpNormResult::new(ts.value, &NormKind::Linf, d, spec, "cube quadrature", "cube-quadrature").with_tsup(&ts);
    r.s_star = Some(best.x);
    r.err_estimate = err;
    Ok(r)
}

/// The cube objective for `w = t^alpha` as a finite sum.
///
/// The binomial terms are evaluated as a binomial distribution with success
/// probability `1/(1+s)` so that large `d` stays finite.
pub fn cube_holder_sum(alpha: f64, d: usize, s: f64) -> f64 {
    let df = d as f64;
    if s <= 0.0 {
        return df / (df + alpha);
    }
    let ratio = 2.0 * s / (1.0 + s);
    let head = df * s.powf(alpha) * ratio.powi(d as i32) / (alpha + df);
    let n = d - 1;
    let ln_c = ln_gamma(df);
    let lp = (s / (1.0 + s)).ln();
    let lq = -(1.0 + s).ln();
    let mut tail = 0.0;
    for j in 0..=n {
        let ln_w = ln_c - ln_gamma(j as f64 + 1.0) - ln_gamma((n - j) as f64 + 1.0)
            + (n - j) as f64 * lp
            + j as f64 * lq;
        let jf = j as f64;
        tail += ln_w.exp() * (1.0 - s.powf(jf + alpha + 1.0)) / (alpha + jf + 1.0);
    }
    head + df / (1.0 + s) * tail
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClosedForm {
    pub value: f64,
    pub s_star: f64,
    pub method: &'static str,
}

/// The Hölder cube constant without quadrature. At `alpha = 1` the optimal
/// shift is the root of `p_d`; otherwise the finite sum is minimized.
pub fn cube_opnorm_holder_closed(alpha: f64, d: usize) -> Result<ClosedForm> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Argument(format!("exponent must lie in (0, 1], got {alpha}")));
    }
    if d == 0 {
        return Err(Error::Argument("dimension must be at least 1".into()));
    }
    if alpha == 1.0 {
        let c = solve_pd_root(d as u32);
        return Ok(ClosedForm {
            value: c.value(),
            s_star: c.root,
            method: "cube-closed-lipschitz",
        });
    }
    let m = minimize_unimodal(|s| cube_holder_sum(alpha, d, s), 0.0, 1.0, 1e-12);
    Ok(ClosedForm {
        value: m.f,
        s_star: m.x,
        method: "cube-closed-holder",
    })
}

/// The two-dimensional Lipschitz constant in trigonometric form.
pub fn cube_d2_trig_form() -> f64 {
    let th = 5.0 * std::f64::consts::PI / 18.0;
    let sec = 1.0 / th.cos();
    4.0 / 3f64.sqrt() * th.cos() + 3f64.sqrt() * sec - 0.25 * sec * sec - 3.0
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct D3ClosedForm {
    pub value: f64,
    pub t3: f64,
    pub residual: f64,
}

/// The three-dimensional Lipschitz constant `1 - t^{-3}`, where `t > 1` is the
/// root of `2t^4 - 8t + 3` written with radicals.
pub fn cube_d3_closed_form() -> Result<D3ClosedForm> {
    let a = (8f64.sqrt() + 7f64.sqrt()).cbrt() + (8f64.sqrt() - 7f64.sqrt()).cbrt();
    let t3 = a.sqrt() / 2f64.powf(0.75) * (1.0 + (2f64.powf(2.25) / a.powf(1.5) - 1.0).sqrt());
    let residual = 2.0 * t3.powi(4) - 8.0 * t3 + 3.0;
    if residual.abs() > 1e-12 {
        return Err(Error::Consistency(format!("quartic residual {residual:e} exceeds 1e-12")));
    }
    Ok(D3ClosedForm {
        value: 1.0 - t3.powi(-3),
        t3,
        residual,
    })
}

/// Lower bound `(d-1)/(d+1)` and the explicit upper bound for the Lipschitz cube constant.
pub fn cube_asymptotic_bounds(d: usize) -> (f64, f64) {
    let df = d as f64;
    let lower = (df - 1.0) / (df + 1.0);
    let sq = df.sqrt();
    let base = 1.0 / (2.0 * sq - 1.0);
    let pow = if base >= 1.0 { 0.0 } else { (df * (-base).ln_1p()).exp() };
    let upper = df / (df + 1.0) - (1.0 - 1.0 / sq) * (1.0 - pow) / (df + 1.0);
    (lower, upper)
}

#[cfg(test)]
mod tests {
    use super::*;

    const S1: f64 = std::f64::consts::SQRT_2 - 1.0;

    #[test]
    fn boundary_values() {
        for &alpha in &[0.25, 0.5, 1.0] {
            let w = ModulusSpec::holder(alpha).unwrap();
            for d in 1..=6 {
                let want = d as f64 / (d as f64 + alpha);
                assert!((cube_value(&w, d, 1.0, 0.0).unwrap() - want).abs() < 1e-10);
                assert!((cube_value(&w, d, 1.0, 1.0).unwrap() - want).abs() < 1e-10);
            }
        }
        let w = ModulusSpec::holder(1.0).unwrap();
        assert!((cube_value(&w, 1, 1.0, S1).unwrap() - S1).abs() < 1e-12);
    }

    #[test]
    fn homogeneity() {
        let w = ModulusSpec::holder(0.5).unwrap();
        let base = cube_value(&w, 3, 1.0, 0.4).unwrap();
        for t in [0.01, 100.0] {
            assert!((cube_value(&w, 3, t, 0.4).unwrap() / base - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn sum_matches_quadrature() {
        for &alpha in &[0.3, 0.5, 1.0] {
            let w = ModulusSpec::holder(alpha).unwrap();
            for d in [1, 2, 5, 9] {
                for s in [0.0, 0.2, 0.6, 1.0] {
                    let a = cube_holder_sum(alpha, d, s);
                    let b = cube_value(&w, d, 1.0, s).unwrap();
                    assert!((a - b).abs() < 1e-11, "alpha {alpha} d {d} s {s}: {a} vs {b}");
                }
            }
        }
    }

    #[test]
    fn lipschitz_objective_matches_h() {
        for d in [1u32, 2, 4, 8] {
            for s in [0.1, 0.5, 0.9] {
                let h = crate::numerics::CubePolynomial::h(d, s);
                assert!((cube_holder_sum(1.0, d as usize, s) - h).abs() < 1e-13);
            }
        }
    }

    #[test]
    fn closed_examples() {
        let c = cube_opnorm_holder_closed(1.0, 1).unwrap();
        assert!((c.value - S1).abs() < 1e-14);
        let c = cube_opnorm_holder_closed(1.0, 2).unwrap();
        assert!((c.value - cube_d2_trig_form()).abs() < 1e-12);
        assert!((c.value - 0.573977952239538).abs() < 1e-12);
        let c = cube_opnorm_holder_closed(0.5, 1).unwrap();
        assert!((c.value - 0.5960716).abs() < 1e-6);
        let d3 = cube_d3_closed_form().unwrap();
        assert!((d3.t3 - 1.43494787254153).abs() < 1e-12);
        assert!((d3.value - 0.661552254192268).abs() < 1e-12);
        assert!((cube_opnorm_holder_closed(1.0, 3).unwrap().value - d3.value).abs() < 1e-10);
    }

    #[test]
    fn asymptotic_bounds() {
        let (lo, hi) = cube_asymptotic_bounds(10);
        assert!((lo - 9.0 / 11.0).abs() < 1e-15);
        assert!((hi - 0.8547).abs() < 1e-4);
        let (lo, hi) = cube_asymptotic_bounds(1);
        assert!(lo == 0.0 && hi >= S1);
        assert!(cube_asymptotic_bounds(1_000_000).1 > 0.99);
    }

    #[test]
    fn quadrature_opnorm_small_d() {
        let w = ModulusSpec::holder(1.0).unwrap();
        let r = cube_opnorm(&w, 1, &EvalConfig::default()).unwrap();
        assert!((r.value - S1).abs() < 1e-10);
        assert!((r.s_star.unwrap() - S1).abs() < 1e-6);
        assert_eq!(r.t_star, 1.0);
    }

    #[test]
    fn capped_modulus_uses_t_grid() {
        let w = ModulusSpec::capped_holder(1.0, 1.0).unwrap();
        let cfg = EvalConfig { scan: 101, ..EvalConfig::default() };
        let r = cube_opnorm(&w, 1, &cfg).unwrap();
        assert!(r.value <= 1.0 + 1e-9 && r.value >= S1 - 1e-9);
        assert!(r.method.contains("t-grid"));
    }
}
