//! Intervals and the half-line.

use super::{omega_at, scaled_kinks, EvalConfig, OpNormResult};
use crate::error::{Error, Result};
use crate::moduli::ModulusSpec;
use crate::norm::NormKind;
use crate::numerics::{sup_over_t, try_integrate};

/// `(1/w(t)) int_0^1 w(tu) du`.
pub fn local_ratio(spec: &ModulusSpec, t: f64, cfg: &EvalConfig) -> Result<f64> {
    let wt = omega_at(spec, t)?;
    let q = cfg.quad.clone().breakpoints(scaled_kinks(spec, t, 0.0, 1.0));
    let r = try_integrate(|u| Ok(spec.at(t * u)), 0.0, 1.0, &q)?;
    Ok(r.value / wt)
}

/// `sup_{0 < t < length}` of [`local_ratio`]; `length` may be infinite.
pub fn local_opnorm_1d(spec: &ModulusSpec, length: f64, cfg: &EvalConfig) -> Result<OpNormResult> {
    if !(length > 0.0) {
        return Err(Error::Argument(format!("interval length must be positive, got {length}")));
    }
    if let Some(alpha) = spec.homogeneous_exponent() {
        return Ok(OpNormResult::new(
            1.0 / (1.0 + alpha),
            &NormKind::Linf,
            1,
            spec,
            "local interval; exact for t^alpha",
            "local-1d-holder",
        ));
    }
    let limit = length.is_finite().then_some(length);
    let ts = sup_over_t(|t| local_ratio(spec, t, cfg), spec, limit, &cfg.tgrid)?;
    Ok(OpNormResult::new(ts.value, &NormKind::Linf, 1, spec, "local interval quadrature", "local-1d").with_tsup(&ts))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn holder_values() {
        let cfg = EvalConfig::default();
        let r = local_opnorm_1d(&ModulusSpec::holder(1.0).unwrap(), f64::INFINITY, &cfg).unwrap();
        assert_eq!(r.value, 0.5);
        let r = local_opnorm_1d(&ModulusSpec::holder(0.5).unwrap(), 1.0, &cfg).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-15);
        let w = ModulusSpec::holder(0.5).unwrap();
        assert!((local_ratio(&w, 3.0, &cfg).unwrap() - 2.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn capped_half_line_reaches_one() {
        let cfg = EvalConfig::default();
        let w = ModulusSpec::capped_holder(1.0, 1.0).unwrap();
        let r = local_opnorm_1d(&w, f64::INFINITY, &cfg).unwrap();
        assert!(r.value >= 0.999 && r.value <= 1.0);
        assert!((local_ratio(&w, 4.0, &cfg).unwrap() - (1.0 - 1.0 / 8.0)).abs() < 1e-12);
    }

    #[test]
    fn interval_length_limits_t() {
        let cfg = EvalConfig::default();
        let w = ModulusSpec::capped_holder(1.0, 1.0).unwrap();
        let r = local_opnorm_1d(&w, 2.0, &cfg).unwrap();
        assert!(r.t_star < 2.0);
        assert!((r.value - 0.75).abs() < 1e-6);
    }
}
