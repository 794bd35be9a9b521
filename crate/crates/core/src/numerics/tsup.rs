//! Supremum over the scale parameter `t`.

use serde::Serialize;

use crate::error::Result;
use crate::moduli::ModulusSpec;

/// Log-spaced grid of candidate scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TGrid {
    pub lo: f64,
    pub hi: f64,
    pub per_decade: usize,
    /// Golden-section iterations spent refining around the best grid point.
    pub refine_iters: usize,
}

impl Default for TGrid {
    fn default() -> Self {
        Self {
            lo: 1e-4,
            hi: 1e4,
            per_decade: 8,
            refine_iters: 30,
        }
    }
}

impl TGrid {
    /// Grid points, clipped below `t_limit` with one point just under the limit.
    pub fn points(&self, t_limit: Option<f64>) -> Vec<f64> {
        let decades = (self.hi / self.lo).log10();
        let n = (decades * self.per_decade as f64).ceil().max(1.0) as usize;
        let mut pts: Vec<f64> = (0..=n)
            .map(|i| self.lo * 10f64.powf(decades * i as f64 / n as f64))
            .collect();
        if let Some(lim) = t_limit.filter(|l| l.is_finite()) {
            let edge = lim * (1.0 - 1e-9);
            pts.retain(|&t| t < edge);
            pts.push(edge);
        }
        pts
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TSup {
    pub t_star: f64,
    pub value: f64,
    /// Whether the homogeneous fast path was used.
    pub homogeneous: bool,
    pub grid: Option<TGridUsed>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TGridUsed {
    pub lo: f64,
    pub hi: f64,
    pub points: usize,
}

impl TSup {
    /// A short description of how `t` was chosen.
    pub fn describe(&self) -> String {
        match &self.grid {
            None => "t=1 (scale invariant)".to_string(),
            Some(g) => format!("t-grid [{:e}, {:e}] x{} + refinement (best effort)", g.lo, g.hi, g.points),
        }
    }
}

/// Best-effort `sup_t ratio(t)`. Hölder moduli make the ratio independent of
/// `t`, so it is evaluated once at `t = 1`.
pub fn sup_over_t<F>(mut ratio: F, spec: &ModulusSpec, t_limit: Option<f64>, grid: &TGrid) -> Result<TSup>
where
    F: FnMut(f64) -> Result<f64>,
{
    if spec.is_homogeneous() {
        return Ok(TSup {
            t_star: 1.0,
            value: ratio(1.0)?,
            homogeneous: true,
            grid: None,
        });
    }
    let pts = grid.points(t_limit);
    let mut vals = Vec::with_capacity(pts.len());
    for &t in &pts {
        vals.push(ratio(t)?);
    }
    let mut best_i = 0;
    for i in 1..vals.len() {
        if vals[i] > vals[best_i] {
            best_i = i;
        }
    }
    let (mut t_star, mut value) = (pts[best_i], vals[best_i]);

    // golden section in log t on the neighbouring cells
    let mut lo = pts[best_i.saturating_sub(1)].ln();
    let mut hi = pts[(best_i + 1).min(pts.len() - 1)].ln();
    if hi > lo && grid.refine_iters > 0 {
        let g = 0.618_033_988_749_894_8;
        let mut x1 = hi - g * (hi - lo);
        let mut x2 = lo + g * (hi - lo);
        let mut f1 = ratio(x1.exp())?;
        let mut f2 = ratio(x2.exp())?;
        for _ in 0..grid.refine_iters {
            if f1 >= f2 {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - g * (hi - lo);
                f1 = ratio(x1.exp())?;
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + g * (hi - lo);
                f2 = ratio(x2.exp())?;
            }
        }
        for (x, f) in [(x1, f1), (x2, f2)] {
            if f > value {
                value = f;
                t_star = x.exp();
            }
        }
    }
    Ok(TSup {
        t_star,
        value,
        homogeneous: false,
        grid: Some(TGridUsed {
            lo: pts[0],
            hi: pts[pts.len() - 1],
            points: pts.len(),
        }),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn homogeneous_fast_path() {
        let w = ModulusSpec::holder(1.0).unwrap();
        let mut calls = Vec::new();
        let r = sup_over_t(|t| { calls.push(t); Ok(2.0 * t) }, &w, None, &TGrid::default()).unwrap();
        assert_eq!((r.t_star, r.value), (1.0, 2.0));
        assert_eq!(calls, vec![1.0]);
    }

    #[test]
    fn capped_local_ratio_approaches_one() {
        let w = ModulusSpec::capped_holder(1.0, 1.0).unwrap();
        let ratio = |t: f64| Ok(if t <= 1.0 { 0.5 } else { 1.0 - 1.0 / (2.0 * t) });
        let r = sup_over_t(ratio, &w, None, &TGrid::default()).unwrap();
        assert!(r.value >= 0.999);
        assert!(r.t_star > 1e3);
    }

    #[test]
    fn grid_respects_limit() {
        let w = ModulusSpec::capped_holder(1.0, 1.0).unwrap();
        let mut max_t: f64 = 0.0;
        let r = sup_over_t(
            |t| {
                max_t = max_t.max(t);
                Ok(t)
            },
            &w,
            Some(3.0),
            &TGrid::default(),
        )
        .unwrap();
        assert!(max_t < 3.0);
        assert!(r.value > 3.0 - 1e-6);
        assert!(r.grid.unwrap().hi < 3.0);
    }

    #[test]
    fn interior_maximum_is_refined() {
        let w = ModulusSpec::capped_holder(1.0, 1.0).unwrap();
        let r = sup_over_t(|t: f64| Ok(-(t.ln() - 0.3).powi(2)), &w, None, &TGrid::default()).unwrap();
        assert!((r.t_star.ln() - 0.3).abs() < 1e-4);
    }
}
