//! Operator norms of the maximal operator on `Lip(w)` for cubes, euclidean
//! balls, cross-polytopes, general norms and one-dimensional local domains.

pub mod constants;
pub mod cross;
pub mod cube;
pub mod euclid;
pub mod local;
pub mod montecarlo;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::moduli::ModulusSpec;
use crate::norm::NormKind;
use crate::numerics::{QuadConfig, TGrid, TSup};

pub use constants::{
    ball_volume, cross_prefactor, euclid_prefactor, gamma_ratio, gamma_ratio_bounds, general_norm_upper_bound,
    DimensionalConstants, GammaRatioBounds,
};
pub use cross::{
    cross_integral_scaled, cross_normalization_probe, cross_opnorm, cross_value, cross_value_with, l1_linf_identity_check,
    IdentityCheck,
};
pub use cube::{
    cube_asymptotic_bounds, cube_d2_trig_form, cube_d3_closed_form, cube_holder_sum, cube_opnorm,
    cube_opnorm_holder_closed, cube_value, cube_value_with, ClosedForm, D3ClosedForm,
};
pub use euclid::{euclid_limit_bounds, euclid_normalization_probe, euclid_opnorm, euclid_value, euclid_value_with, LimitBounds};
pub use local::local_opnorm_1d;
pub use montecarlo::{general_opnorm_estimate, McBudget, McEstimate};

/// Tolerance for the ceiling `value <= 1`.
pub const CEILING_TOL: f64 = 1e-9;

/// Where the balls live.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "domain", rename_all = "snake_case")]
pub enum Domain {
    Global,
    /// A one-dimensional interval of the given length (possibly infinite).
    Local1d { length: f64 },
}

#[derive(Debug, Clone)]
pub struct OpNormQuery {
    pub norm: NormKind,
    pub d: usize,
    pub modulus: ModulusSpec,
    pub domain: Domain,
}

/// Numerical knobs shared by the evaluators.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalConfig {
    pub quad: QuadConfig,
    /// Tolerance of the inner integral in the nested formulas.
    pub inner_quad: QuadConfig,
    pub tgrid: TGrid,
    /// Scan points for the one-dimensional cube minimization.
    pub scan: usize,
    /// Scan points for the minimization over `R` in the nested formulas.
    pub nested_scan: usize,
    pub min_tol: f64,
}

impl Default for EvalConfig {
    fn default() -> Self {
        Self {
            quad: QuadConfig::with_tol(1e-12, 1e-12),
            inner_quad: QuadConfig::with_tol(1e-13, 1e-12),
            tgrid: TGrid::default(),
            scan: 1001,
            nested_scan: 65,
            min_tol: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpNormResult {
    pub value: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub r_star: Option<f64>,
    pub t_star: f64,
    pub err_estimate: f64,
    pub method: String,
    pub norm: String,
    pub dim: usize,
    pub modulus: String,
    pub citations: Vec<String>,
}

impl OpNormResult {
    pub(crate) fn new(
        value: f64,
        norm: &NormKind,
        d: usize,
        modulus: &ModulusSpec,
        method: impl Into<String>,
        citation: &str,
    ) -> Self {
        Self {
            value,
            s_star: None,
            r_star: None,
            t_star: 1.0,
            err_estimate: 0.0,
            method: method.into(),
            norm: norm.label(),
            dim: d,
            modulus: modulus.label(),
            citations: vec![citation.to_string()],
        }
    }

    pub(crate) fn with_tsup(mut self, ts: &TSup) -> Self {
        self.t_star = ts.t_star;
        self.method = format!("{}; {}", self.method, ts.describe());
        self
    }

    /// Errors if the value exceeds the universal ceiling `1`.
    pub fn check_ceiling(self) -> Result<Self> {
        if self.value > 1.0 + CEILING_TOL || !(self.value > 0.0) {
            return Err(Error::Consistency(format!(
                "operator norm {} lies outside (0, 1]",
                self.value
            )));
        }
        Ok(self)
    }
}

pub(crate) fn omega_at(spec: &ModulusSpec, t: f64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(Error::Argument(format!("scale t must be positive, got {t}")));
    }
    let w = spec.at(t);
    if !(w > 0.0) {
        return Err(Error::Argument(format!("modulus vanishes at t = {t}")));
    }
    Ok(w)
}

/// Kinks of `u -> w(t u)` inside `(lo, hi)`.
pub(crate) fn scaled_kinks(spec: &ModulusSpec, t: f64, lo: f64, hi: f64) -> Vec<f64> {
    spec.kinks()
        .into_iter()
        .map(|k| k / t)
        .filter(|&u| u > lo && u < hi)
        .collect()
}

/// Evaluates a query with the certified formula for its norm.
///
/// Dimension one always uses the cube formula. `lp` and custom norms in
/// higher dimensions have no certified formula; use
/// [`general_opnorm_estimate`] for those.
pub fn opnorm(query: &OpNormQuery, cfg: &EvalConfig) -> Result<OpNormResult> {
    if query.d == 0 {
        return Err(Error::Argument("dimension must be at least 1".into()));
    }
    let res = match query.domain {
        Domain::Local1d { length } => {
            if query.d != 1 {
                return Err(Error::Argument("local domains are one-dimensional".into()));
            }
            local_opnorm_1d(&query.modulus, length, cfg)?
        }
        Domain::Global => {
            if query.d == 1 {
                let mut r = cube_opnorm(&query.modulus, 1, cfg)?;
                r.norm = query.norm.label();
                r
            } else {
                match query.norm.canonical() {
                    NormKind::Linf => cube_opnorm(&query.modulus, query.d, cfg)?,
                    NormKind::L2 => euclid_opnorm(&query.modulus, query.d, cfg)?,
                    NormKind::L1 => cross_opnorm(&query.modulus, query.d, cfg)?,
                    other => {
                        return Err(Error::Unsupported(format!(
                            "no certified formula for norm {} in dimension {}; use the Monte Carlo estimate",
                            other.label(),
                            query.d
                        )))
                    }
                }
            }
        }
    };
    res.check_ceiling()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn routes_dimension_one_to_cube() {
        let q = OpNormQuery {
            norm: NormKind::L2,
            d: 1,
            modulus: ModulusSpec::holder(1.0).unwrap(),
            domain: Domain::Global,
        };
        let r = opnorm(&q, &EvalConfig::default()).unwrap();
        assert!((r.value - (2f64.sqrt() - 1.0)).abs() < 1e-10);
        assert_eq!(r.norm, "l2");
    }

    #[test]
    fn rejects_unsupported() {
        let q = OpNormQuery {
            norm: NormKind::Lp(3.0),
            d: 2,
            modulus: ModulusSpec::holder(1.0).unwrap(),
            domain: Domain::Global,
        };
        assert!(matches!(opnorm(&q, &EvalConfig::default()), Err(Error::Unsupported(_))));
        let q = OpNormQuery {
            norm: NormKind::Linf,
            d: 2,
            modulus: ModulusSpec::holder(1.0).unwrap(),
            domain: Domain::Local1d { length: 1.0 },
        };
        assert!(matches!(opnorm(&q, &EvalConfig::default()), Err(Error::Argument(_))));
    }
}
