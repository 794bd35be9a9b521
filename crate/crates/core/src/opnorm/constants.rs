use serde::Serialize;
use statrs::function::gamma::ln_gamma;

use crate::norm::NormKind;

/// `Gamma(1 + d/2) / Gamma(1/2 + d/2)`.
pub fn gamma_ratio(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    (ln_gamma(1.0 + h) - ln_gamma(0.5 + h)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaRatioBounds {
    pub value: f64,
    pub lower: f64,
    pub upper: f64,
}

impl GammaRatioBounds {
    pub fn holds(&self) -> bool {
        self.lower <= self.value && self.value <= self.upper
    }
}

/// The ratio together with the sandwich `sqrt(d/2) <= ratio <= sqrt((d+1)/2)`.
pub fn gamma_ratio_bounds(d: usize) -> GammaRatioBounds {
    let df = d as f64;
    GammaRatioBounds {
        value: gamma_ratio(d),
        lower: (df / 2.0).sqrt(),
        upper: ((df + 1.0) / 2.0).sqrt(),
    }
}

/// Normalizing constant of the reduced euclidean formula.
pub fn euclid_prefactor(d: usize) -> f64 {
    (d as f64 - 1.0) * gamma_ratio(d) / std::f64::consts::PI.sqrt()
}

/// Normalizing constant of the reduced cross-polytope formula.
pub fn cross_prefactor(d: usize) -> f64 {
    let df = d as f64;
    df * (df - 1.0) / 2.0
}

/// Lebesgue measure of the unit ball of an `lp` norm in dimension `d`.
/// Returns `None` for custom norms.
pub fn ball_volume(norm: &NormKind, d: usize) -> Option<f64> {
    let df = d as f64;
    let p = match norm.canonical() {
        NormKind::Linf => return Some(2f64.powi(d as i32)),
        NormKind::L2 => 2.0,
        NormKind::L1 => 1.0,
        NormKind::Lp(p) => p,
        NormKind::Custom(_) => return None,
    };
    Some((df * (2.0f64.ln() + ln_gamma(1.0 + 1.0 / p)) - ln_gamma(1.0 + df / p)).exp())
}

/// Upper bound `d/(d+1)` valid for every norm at the Lipschitz modulus.
pub fn general_norm_upper_bound(d: usize) -> f64 {
    let df = d as f64;
    df / (df + 1.0)
}

/// Bundle of the dimension-dependent constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DimensionalConstants {
    pub d: usize,
    pub gamma_ratio: f64,
    pub euclid_prefactor: f64,
    pub cross_prefactor: f64,
    pub volume_l1: f64,
    pub volume_l2: f64,
    pub volume_linf: f64,
}

impl DimensionalConstants {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            gamma_ratio: gamma_ratio(d),
            euclid_prefactor: euclid_prefactor(d),
            cross_prefactor: cross_prefactor(d),
            volume_l1: ball_volume(&NormKind::L1, d).unwrap(),
            volume_l2: ball_volume(&NormKind::L2, d).unwrap(),
            volume_linf: ball_volume(&NormKind::Linf, d).unwrap(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn gamma_ratio_examples() {
        let b = gamma_ratio_bounds(2);
        assert!((b.value - 2.0 / PI.sqrt()).abs() < 1e-13);
        assert!(b.holds());
        let b = gamma_ratio_bounds(1);
        assert!((b.value - PI.sqrt() / 2.0).abs() < 1e-13);
        assert!(b.holds());
        for d in 1..=500 {
            assert!(gamma_ratio_bounds(d).holds(), "d = {d}");
        }
    }

    #[test]
    fn volumes() {
        assert!((ball_volume(&NormKind::L2, 2).unwrap() - PI).abs() < 1e-13);
        assert!((ball_volume(&NormKind::L2, 3).unwrap() - 4.0 * PI / 3.0).abs() < 1e-13);
        assert!((ball_volume(&NormKind::L1, 3).unwrap() - 8.0 / 6.0).abs() < 1e-13);
        assert_eq!(ball_volume(&NormKind::Linf, 3), Some(8.0));
        assert!((ball_volume(&NormKind::Lp(2.0), 2).unwrap() - PI).abs() < 1e-13);
    }

    #[test]
    fn universal_bound() {
        assert_eq!(general_norm_upper_bound(1), 0.5);
        assert_eq!(general_norm_upper_bound(3), 0.75);
        assert!(general_norm_upper_bound(1_000_000) > 0.999);
    }

    #[test]
    fn prefactors() {
        // (d-1) Gamma(1+d/2) / (sqrt(pi) Gamma(1/2+d/2)) at d = 3 is 2 * (3 sqrt(pi)/4) / sqrt(pi)
        assert!((euclid_prefactor(3) - 1.5).abs() < 1e-13);
        assert_eq!(cross_prefactor(4), 6.0);
        let c = DimensionalConstants::new(2);
        assert!((c.volume_l1 - 2.0).abs() < 1e-13);
    }
}
