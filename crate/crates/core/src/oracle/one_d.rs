//! One-dimensional discrete maximal operators.
//!
//! Averages are exact integrals of the piecewise-linear interpolant over
//! grid-aligned windows, so integrals over adjacent windows add up and the
//! one-sided decomposition holds exactly on the grid.

use std::collections::VecDeque;

use super::GridFunction;
use crate::error::Result;

/// `P[i] = int_{x_0}^{x_i}` of the interpolant.
pub fn trapezoid_prefix(values: &[f64], h: f64) -> Vec<f64> {
    let mut p = Vec::with_capacity(values.len());
    let mut acc = 0.0;
    p.push(0.0);
    for w in values.windows(2) {
        acc += 0.5 * h * (w[0] + w[1]);
        p.push(acc);
    }
    p
}

/// Best average over windows `[x_i, x_j]`, `j > i`; `-inf` at the right end.
fn right_sided(prefix: &[f64], h: f64, i: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let pi = prefix[i];
    for (k, &pj) in prefix[i + 1..].iter().enumerate() {
        let avg = (pj - pi) / ((k + 1) as f64 * h);
        if avg > best {
            best = avg;
        }
    }
    best
}

fn left_sided(prefix: &[f64], h: f64, i: usize) -> f64 {
    let mut best = f64::NEG_INFINITY;
    let pi = prefix[i];
    for (k, &pj) in prefix[..i].iter().rev().enumerate() {
        let avg = (pi - pj) / ((k + 1) as f64 * h);
        if avg > best {
            best = avg;
        }
    }
    best
}

/// Left and right one-sided maximal functions. Degenerate windows count, so
/// both are at least `f`.
pub fn one_sided_1d(f: &GridFunction) -> Result<(GridFunction, GridFunction)> {
    f.require_1d()?;
    let h = f.h();
    let v = f.values();
    let p = trapezoid_prefix(v, h);
    let left = (0..v.len()).map(|i| left_sided(&p, h, i).max(v[i])).collect();
    let right = (0..v.len()).map(|i| right_sided(&p, h, i).max(v[i])).collect();
    Ok((f.with_values(left)?, f.with_values(right)?))
}

/// Uncentered maximal function at sample `i` in `O(n)`.
pub fn uncentered_at(f: &GridFunction, prefix: &[f64], i: usize) -> f64 {
    let h = f.h();
    f.values()[i].max(left_sided(prefix, h, i)).max(right_sided(prefix, h, i))
}

/// Uncentered maximal function: every window containing the point, inside the domain.
pub fn grid_max_uncentered_1d(f: &GridFunction) -> Result<GridFunction> {
    f.require_1d()?;
    let p = trapezoid_prefix(f.values(), f.h());
    let out = (0..f.n()).map(|i| uncentered_at(f, &p, i)).collect();
    f.with_values(out)
}

/// Brute force over all windows `[x_a, x_b] ∋ x_i`; cubic cost, reference only.
pub fn grid_max_all_intervals_1d(f: &GridFunction) -> Result<GridFunction> {
    f.require_1d()?;
    let h = f.h();
    let v = f.values();
    let p = trapezoid_prefix(v, h);
    let mut out = v.to_vec();
    for a in 0..v.len() {
        for b in a + 1..v.len() {
            let avg = (p[b] - p[a]) / ((b - a) as f64 * h);
            for m in &mut out[a..=b] {
                if avg > *m {
                    *m = avg;
                }
            }
        }
    }
    f.with_values(out)
}

/// Centered maximal function over symmetric windows inside the domain.
pub fn grid_max_centered_1d(f: &GridFunction) -> Result<GridFunction> {
    f.require_1d()?;
    let h = f.h();
    let v = f.values();
    let n = v.len();
    let p = trapezoid_prefix(v, h);
    let out = (0..n)
        .map(|i| {
            let reach = i.min(n - 1 - i);
            let mut best = v[i];
            for k in 1..=reach {
                let avg = (p[i + k] - p[i - k]) / (2.0 * k as f64 * h);
                if avg > best {
                    best = avg;
                }
            }
            best
        })
        .collect();
    f.with_values(out)
}

/// `max(window) - min(window)` over all windows of `m + 1` consecutive samples.
pub(crate) fn max_oscillation(v: &[f64], m: usize) -> f64 {
    if m == 0 || v.len() < 2 {
        return 0.0;
    }
    let w = (m + 1).min(v.len());
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut best = 0.0_f64;
    for i in 0..v.len() {
        while maxq.back().map_or(false, |&j| v[j] <= v[i]) {
            maxq.pop_back();
        }
        maxq.push_back(i);
        while minq.back().map_or(false, |&j| v[j] >= v[i]) {
            minq.pop_back();
        }
        minq.push_back(i);
        while maxq[0] + w <= i {
            maxq.pop_front();
        }
        while minq[0] + w <= i {
            minq.pop_front();
        }
        if i + 1 >= w {
            best = best.max(v[maxq[0]] - v[minq[0]]);
        }
    }
    best
}

/// `sup_{|i-j| <= lag} |f_i - f_j| / (|i-j| h)^alpha` over lags up to `max_lag`.
pub fn holder_constant_1d(f: &GridFunction, alpha: f64, max_lag: Option<usize>) -> Result<f64> {
    f.require_1d()?;
    let v = f.values();
    let n = v.len();
    let h = f.h();
    let lag_cap = max_lag.unwrap_or(n - 1).min(n - 1);
    let mut best = 0.0_f64;
    for k in 1..=lag_cap {
        let denom = (k as f64 * h).powf(alpha);
        let mut m = 0.0_f64;
        for i in 0..n - k {
            m = m.max((v[i + k] - v[i]).abs());
        }
        best = best.max(m / denom);
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn hat(x: f64) -> f64 {
        (1.0 - x.abs()).max(0.0)
    }

    #[test]
    fn spec_examples() {
        let f = GridFunction::sample_interval(-2.0, 2.0, 401, hat).unwrap();
        let m = grid_max_uncentered_1d(&f).unwrap();
        assert_eq!(m.values()[200], 1.0);

        let f = GridFunction::sample_interval(0.0, 4.0, 801, |x| (1.0 - x).max(0.0)).unwrap();
        let m = grid_max_uncentered_1d(&f).unwrap();
        let i = f.index_of(2.0);
        assert!((m.values()[i] - 0.25).abs() <= 2.0 * f.h());

        let c = GridFunction::sample_interval(0.0, 1.0, 50, |_| 0.7).unwrap();
        for g in [grid_max_uncentered_1d(&c).unwrap(), grid_max_centered_1d(&c).unwrap()] {
            assert!(g.values().iter().all(|&v| (v - 0.7).abs() < 1e-14));
        }
    }

    #[test]
    fn one_sided_identity_is_exact() {
        let f = GridFunction::sample_interval(0.0, 3.0, 97, |x| (5.0 * x).sin() + 0.3 * x).unwrap();
        let (l, r) = one_sided_1d(&f).unwrap();
        let brute = grid_max_all_intervals_1d(&f).unwrap();
        let fast = grid_max_uncentered_1d(&f).unwrap();
        for i in 0..f.n() {
            let one_sided = l.values()[i].max(r.values()[i]);
            assert!((one_sided - brute.values()[i]).abs() <= 1e-14);
            assert_eq!(one_sided, fast.values()[i]);
        }
    }

    #[test]
    fn centered_hat_matches_hat_near_peak() {
        let f = GridFunction::sample_interval(-2.0, 2.0, 801, hat).unwrap();
        let c = grid_max_centered_1d(&f).unwrap();
        let m = grid_max_uncentered_1d(&f).unwrap();
        let h = f.h();
        for i in 0..f.n() {
            let x = f.x(i);
            if x.abs() <= 0.5 {
                assert!((c.values()[i] - hat(x)).abs() <= 2.0 * h);
            }
            assert!(c.values()[i] <= m.values()[i] + 1e-15);
            assert!(c.values()[i] >= f.values()[i]);
        }
        // away from the peak the centered operator sees mass on both sides
        assert!(c.values()[f.index_of(0.9)] > hat(0.9) + 0.01);
    }

    #[test]
    fn oscillation_and_holder() {
        let f = GridFunction::sample_interval(0.0, 1.0, 101, |x| x).unwrap();
        assert!((max_oscillation(f.values(), 10) - 0.1).abs() < 1e-12);
        assert!((holder_constant_1d(&f, 1.0, None).unwrap() - 1.0).abs() < 1e-12);
        let g = GridFunction::sample_interval(0.0, 1.0, 101, |x| x.sqrt()).unwrap();
        assert!((holder_constant_1d(&g, 0.5, None).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn refinement_consistency_for_hat() {
        let coarse = grid_max_uncentered_1d(&GridFunction::sample_interval(-4.0, 4.0, 401, hat).unwrap()).unwrap();
        let fine = grid_max_uncentered_1d(&GridFunction::sample_interval(-4.0, 4.0, 801, hat).unwrap()).unwrap();
        let h = coarse.h();
        let worst = (0..coarse.n())
            .map(|i| (coarse.values()[i] - fine.values()[2 * i]).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 2.0 * h, "sup difference {worst} vs h {h}");
    }
}
