//! Browser demo: the cube objective, one-dimensional maximal functions of the
//! extremal and a small table of constants.

use maxmod::opnorm::{cube_holder_sum, cube_opnorm_holder_closed, euclid_opnorm, EvalConfig};
use maxmod::oracle::{grid_max_centered_1d, grid_max_uncentered_1d, GridFunction};
use maxmod::{Extremal, ExtremalDomain, ModulusSpec};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// `s -> value(s)` for `w = t^alpha` on `points` samples of `[0, 1]`,
/// followed by `s*` and the minimum.
pub fn cube_profile(alpha: f64, d: usize, points: usize) -> Result<Vec<f64>, String> {
    if !(alpha > 0.0 && alpha <= 1.0) || d == 0 || points < 2 {
        return Err(format!("need 0 < alpha <= 1, d >= 1 and points >= 2; got {alpha}, {d}, {points}"));
    }
    let mut out: Vec<f64> = (0..points)
        .map(|i| cube_holder_sum(alpha, d, i as f64 / (points - 1) as f64))
        .collect();
    let best = cube_opnorm_holder_closed(alpha, d).map_err(|e| e.to_string())?;
    out.push(best.s_star);
    out.push(best.value);
    Ok(out)
}

/// `x`, `psi`, `M psi` and `M^c psi` concatenated, for the extremal of
/// `min(t^alpha, 1)` sampled on `[-half_width, half_width]`.
pub fn maximal_curves(alpha: f64, half_width: f64, n: usize) -> Result<Vec<f64>, String> {
    let err = |e: maxmod::Error| e.to_string();
    if !(half_width > 0.0) || n > 20_001 {
        return Err(format!("need half_width > 0 and at most 20001 samples; got {half_width}, {n}"));
    }
    let w = ModulusSpec::capped_holder(alpha, 1.0).map_err(err)?;
    let psi = Extremal::construct(&w, ExtremalDomain::Global { dim: 1 }, None).map_err(err)?;
    let f = GridFunction::sample_interval(-half_width, half_width, n, |x| psi.eval_1d(x)).map_err(err)?;
    let m = grid_max_uncentered_1d(&f).map_err(err)?;
    let c = grid_max_centered_1d(&f).map_err(err)?;
    let mut out: Vec<f64> = (0..n).map(|i| f.x(i)).collect();
    out.extend_from_slice(f.values());
    out.extend_from_slice(m.values());
    out.extend_from_slice(c.values());
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct Row {
    pub d: usize,
    pub linf: f64,
    pub l2: f64,
    pub l1: f64,
    pub l2_ceiling: f64,
}

/// Constants for the cube, ball and cross-polytope at `t^alpha`, `d = 1..=max_d`.
pub fn constants(alpha: f64, max_d: usize) -> Result<Vec<Row>, String> {
    if !(1..=12).contains(&max_d) {
        return Err(format!("max_d must lie in 1..=12, got {max_d}"));
    }
    let w = ModulusSpec::holder(alpha).map_err(|e| e.to_string())?;
    let cfg = EvalConfig::default();
    (1..=max_d)
        .map(|d| {
            let cube = cube_opnorm_holder_closed(alpha, d).map_err(|e| e.to_string())?.value;
            let l2 = euclid_opnorm(&w, d, &cfg).map_err(|e| e.to_string())?.value;
            Ok(Row {
                d,
                linf: cube,
                l2,
                l1: cube,
                l2_ceiling: 2f64.powf(-alpha / 2.0),
            })
        })
        .collect()
}

#[wasm_bindgen(js_name = cubeProfile)]
pub fn cube_profile_js(alpha: f64, d: usize, points: usize) -> Result<Vec<f64>, JsError> {
    cube_profile(alpha, d, points).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen(js_name = maximalCurves)]
pub fn maximal_curves_js(alpha: f64, half_width: f64, n: usize) -> Result<Vec<f64>, JsError> {
    maximal_curves(alpha, half_width, n).map_err(|e| JsError::new(&e))
}

/// JSON array of rows.
#[wasm_bindgen(js_name = constantsTable)]
pub fn constants_js(alpha: f64, max_d: usize) -> Result<String, JsError> {
    let rows = constants(alpha, max_d).map_err(|e| JsError::new(&e))?;
    serde_json::to_string(&rows).map_err(|e| JsError::new(&e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn profile_ends_with_the_optimum() {
        let p = cube_profile(1.0, 2, 101).unwrap();
        assert_eq!(p.len(), 103);
        let (s, v) = (p[101], p[102]);
        assert!((v - 0.573977952239538).abs() < 1e-12);
        assert!(p[..101].iter().all(|&x| x >= v - 1e-12));
        assert!((s - 0.484454397937118).abs() < 1e-9);
        assert!(cube_profile(1.5, 2, 10).is_err());
    }

    #[test]
    fn curves_are_ordered() {
        let n = 401;
        let c = maximal_curves(1.0, 2.0, n).unwrap();
        assert_eq!(c.len(), 4 * n);
        let (psi, m, mc) = (&c[n..2 * n], &c[2 * n..3 * n], &c[3 * n..]);
        for i in 0..n {
            assert!(m[i] >= mc[i] - 1e-15 && mc[i] >= psi[i]);
        }
        assert_eq!(m[n / 2], 1.0);
    }

    #[test]
    fn table_rows() {
        let rows = constants(1.0, 3).unwrap();
        assert_eq!(rows.len(), 3);
        assert!((rows[0].linf - (2f64.sqrt() - 1.0)).abs() < 1e-12);
        assert!(rows.iter().all(|r| r.l2 <= r.l2_ceiling + 1e-8));
        assert!(constants(1.0, 40).is_err());
    }
}
