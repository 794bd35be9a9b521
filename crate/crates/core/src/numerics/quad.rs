//! Globally adaptive 15-point Gauss-Kronrod quadrature with breakpoints.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

// Kronrod abscissae, largest first; odd indices and the centre are Gauss nodes.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];

const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];

const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

#[derive(Debug, Clone, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    /// Maximum number of bisections of any initial segment.
    pub max_depth: u32,
    pub max_segments: usize,
    /// Interior points where the integrand is known to be non-smooth.
    pub breakpoints: Vec<f64>,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            max_depth: 48,
            max_segments: 4000,
            breakpoints: Vec::new(),
        }
    }
}

impl QuadConfig {
    pub fn with_tol(abs_tol: f64, rel_tol: f64) -> Self {
        Self {
            abs_tol,
            rel_tol,
            ..Self::default()
        }
    }

    pub fn breakpoints(mut self, pts: impl IntoIterator<Item = f64>) -> Self {
        self.breakpoints = pts.into_iter().collect();
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    pub value: f64,
    pub err: f64,
    pub evals: usize,
}

struct Segment {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
    depth: u32,
}

impl PartialEq for Segment {
    fn eq(&self, other: &Self) -> bool {
        self.err == other.err
    }
}
impl Eq for Segment {}
impl PartialOrd for Segment {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Segment {
    fn cmp(&self, other: &Self) -> Ordering {
        self.err.total_cmp(&other.err)
    }
}

/// One Kronrod rule on `[a, b]`: (value, error estimate, roundoff floor reached).
fn qk15<F>(f: &mut F, a: f64, b: f64) -> Result<(f64, f64, bool)>
where
    F: FnMut(f64) -> Result<f64>,
{
    let centr = 0.5 * (a + b);
    let hlgth = 0.5 * (b - a);
    let dhlgth = hlgth.abs();

    let mut eval = |x: f64| -> Result<f64> {
        let y = f(x)?;
        if y.is_finite() {
            Ok(y)
        } else {
            Err(Error::Argument(format!("integrand is not finite at x = {x}")))
        }
    };

    let fc = eval(centr)?;
    let mut resg = fc * WG[3];
    let mut resk = fc * WGK[7];
    let mut resabs = resk.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let absc = hlgth * XGK[j];
        let f1 = eval(centr - absc)?;
        let f2 = eval(centr + absc)?;
        fv1[j] = f1;
        fv2[j] = f2;
        resk += WGK[j] * (f1 + f2);
        resabs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            resg += WG[j / 2] * (f1 + f2);
        }
    }
    let reskh = resk * 0.5;
    let mut resasc = WGK[7] * (fc - reskh).abs();
    for j in 0..7 {
        resasc += WGK[j] * ((fv1[j] - reskh).abs() + (fv2[j] - reskh).abs());
    }
    let result = resk * hlgth;
    resabs *= dhlgth;
    resasc *= dhlgth;
    let mut abserr = ((resk - resg) * hlgth).abs();
    if resasc != 0.0 && abserr != 0.0 {
        abserr = resasc * (200.0 * abserr / resasc).powf(1.5).min(1.0);
    }
    let floor = 50.0 * f64::EPSILON * resabs;
    let mut limited = false;
    if resabs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) && abserr <= floor {
        abserr = floor;
        limited = true;
    }
    Ok((result, abserr, limited))
}

/// Integrates a fallible integrand over `[a, b]`.
pub fn try_integrate<F>(mut f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> Result<f64>,
{
    if !(a.is_finite() && b.is_finite()) {
        return Err(Error::Argument(format!("integration bounds must be finite, got [{a}, {b}]")));
    }
    if a == b {
        return Ok(QuadResult { value: 0.0, err: 0.0, evals: 0 });
    }
    if a > b {
        let r = try_integrate(f, b, a, cfg)?;
        return Ok(QuadResult { value: -r.value, ..r });
    }

    let mut pts = vec![a];
    let mut inner: Vec<f64> = cfg
        .breakpoints
        .iter()
        .copied()
        .filter(|&x| x > a && x < b)
        .collect();
    inner.sort_by(f64::total_cmp);
    inner.dedup();
    pts.extend(inner);
    pts.push(b);

    let mut heap = BinaryHeap::new();
    let mut done_value = 0.0;
    let mut done_err = 0.0;
    let mut evals = 0;
    for w in pts.windows(2) {
        let (value, err, limited) = qk15(&mut f, w[0], w[1])?;
        evals += 15;
        if limited {
            done_value += value;
            done_err += err;
        } else {
            heap.push(Segment { a: w[0], b: w[1], value, err, depth: 0 });
        }
    }

    loop {
        let total: f64 = done_value + heap.iter().map(|s| s.value).sum::<f64>();
        let err: f64 = done_err + heap.iter().map(|s| s.err).sum::<f64>();
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if err <= tol || heap.is_empty() {
            return Ok(QuadResult { value: total, err, evals });
        }
        let worst = heap.pop().expect("nonempty heap");
        let mid = 0.5 * (worst.a + worst.b);
        if worst.depth >= cfg.max_depth || heap.len() + 2 > cfg.max_segments || mid <= worst.a || mid >= worst.b {
            let total = total;
            return Err(Error::Quadrature { best: total, err });
        }
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (value, err, limited) = qk15(&mut f, lo, hi)?;
            evals += 15;
            if limited {
                done_value += value;
                done_err += err;
            } else {
                heap.push(Segment { a: lo, b: hi, value, err, depth: worst.depth + 1 });
            }
        }
    }
}

/// Integrates `f` over `[a, b]`.
pub fn integrate<F>(mut f: F, a: f64, b: f64, cfg: &QuadConfig) -> Result<QuadResult>
where
    F: FnMut(f64) -> f64,
{
    try_integrate(|x| Ok(f(x)), a, b, cfg)
}
