//! Coarse scan followed by golden-section refinement.

use crate::error::Result;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// Default number of scan points; the step is `1e-3 (b - a)`.
pub const DEFAULT_SCAN: usize = 1001;
pub const DEFAULT_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub f: f64,
}

/// Minimizes `f` on `[a, b]` with the default scan and tolerance.
pub fn minimize_unimodal<F>(f: F, a: f64, b: f64, tol: f64) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    minimize_scan_golden(f, a, b, DEFAULT_SCAN, tol)
}

pub fn minimize_scan_golden<F>(mut f: F, a: f64, b: f64, scan: usize, tol: f64) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    try_minimize(|x| Ok(f(x)), a, b, scan, tol).expect("infallible objective")
}

/// Scans `scan` equispaced points, then runs golden section on the two cells
/// around the best one. Ties go to the smallest `x`: the refined point only
/// replaces the scanned one if it is strictly better.
pub fn try_minimize<F>(mut f: F, a: f64, b: f64, scan: usize, tol: f64) -> Result<Minimum>
where
    F: FnMut(f64) -> Result<f64>,
{
    let n = scan.max(3);
    let step = (b - a) / (n - 1) as f64;
    let x_at = |i: usize| if i == n - 1 { b } else { a + step * i as f64 };
    let mut best = Minimum { x: a, f: f(a)? };
    let mut best_i = 0;
    for i in 1..n {
        let x = x_at(i);
        let y = f(x)?;
        if y < best.f {
            best = Minimum { x, f: y };
            best_i = i;
        }
    }

    let mut lo = x_at(best_i.saturating_sub(1));
    let mut hi = x_at((best_i + 1).min(n - 1));
    let mut x1 = hi - INV_PHI * (hi - lo);
    let mut x2 = lo + INV_PHI * (hi - lo);
    let mut f1 = f(x1)?;
    let mut f2 = f(x2)?;
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - INV_PHI * (hi - lo);
            f1 = f(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + INV_PHI * (hi - lo);
            f2 = f(x2)?;
        }
    }
    let (xr, fr) = if f1 <= f2 { (x1, f1) } else { (x2, f2) };
    if fr < best.f {
        best = Minimum { x: xr, f: fr };
    }
    Ok(best)
}

/// Maximizes by minimizing `-f`.
pub fn maximize_scan_golden<F>(mut f: F, a: f64, b: f64, scan: usize, tol: f64) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let m = minimize_scan_golden(|x| -f(x), a, b, scan, tol);
    Minimum { x: m.x, f: -m.f }
}
