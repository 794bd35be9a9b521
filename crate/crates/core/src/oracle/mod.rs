//! Brute-force discrete maximal operators, empirical moduli of continuity and
//! the fat Cantor example.

pub mod boxes;
pub mod cantor;
mod grid;
pub mod one_d;

pub use boxes::{grid_max_box, holder_constant_box, BoxMax};
pub use cantor::{cantor_build, cantor_probe, cantor_sequence, CantorModel, CantorProbe, DeletedInterval, SAMPLES_PER_HOLE};
pub use grid::GridFunction;
pub use one_d::{
    grid_max_all_intervals_1d, grid_max_centered_1d, grid_max_uncentered_1d, holder_constant_1d, one_sided_1d,
};

use crate::error::{Error, Result};
use crate::norm::NormKind;

/// `(t, w(f, t))` for each requested `t`, maximizing over node pairs at
/// distance at most `t` in `norm` (ignored in dimension one).
pub fn empirical_modulus(f: &GridFunction, t_list: &[f64], norm: &NormKind) -> Result<Vec<(f64, f64)>> {
    if let Some(t) = t_list.iter().find(|t| !(**t > 0.0)) {
        return Err(Error::Argument(format!("distances must be positive, got {t}")));
    }
    t_list
        .iter()
        .map(|&t| {
            let w = if f.dim() == 1 {
                let m = ((t / f.h()) + 1e-9).floor() as usize;
                one_d::max_oscillation(f.values(), m.min(f.n() - 1))
            } else {
                boxes::modulus_box(f, t, norm)?
            };
            Ok((t, w))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_modulus() {
        let f = GridFunction::sample_interval(0.0, 1.0, 101, |x| x).unwrap();
        let ts = [0.01, 0.05, 0.37, 2.0];
        for (t, w) in empirical_modulus(&f, &ts, &NormKind::Linf).unwrap() {
            assert!((w - t.min(1.0)).abs() < 1e-12);
        }
        assert!(empirical_modulus(&f, &[0.0], &NormKind::Linf).is_err());
    }

    #[test]
    fn extremal_realizes_its_modulus() {
        use crate::moduli::{Extremal, ExtremalDomain, ModulusSpec};
        let w = ModulusSpec::holder(0.5).unwrap();
        let psi = Extremal::construct(&w, ExtremalDomain::HalfLine, Some(1.0)).unwrap();
        let f = GridFunction::sample_interval(0.0, 4.0, 4001, |x| psi.eval_1d(x)).unwrap();
        for (t, wt) in empirical_modulus(&f, &[0.01, 0.1, 0.5, 0.9], &NormKind::Linf).unwrap() {
            assert!((wt - w.at(t)).abs() < 1e-9, "t {t}: {wt}");
        }
    }

    #[test]
    fn box_modulus_of_cone() {
        let f = GridFunction::sample_box(&[-1.0, -1.0], &[1.0, 1.0], 41, |x| {
            (1.0 - NormKind::Linf.eval(x)).max(0.0)
        })
        .unwrap();
        let r = empirical_modulus(&f, &[0.1, 0.25], &NormKind::Linf).unwrap();
        assert!((r[0].1 - 0.1).abs() < 1e-12 && (r[1].1 - 0.25).abs() < 1e-12);
    }
}
