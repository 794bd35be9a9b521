//! Moduli of continuity and the extremal functions built from them.
//!
//! A modulus is a nondecreasing, subadditive function `w: [0, inf) -> [0, inf)`
//! vanishing at the origin. Three families are supported: Hölder `t^a`,
//! capped Hölder `min(t^a, cap)`, and tabulated moduli given by knots with
//! linear interpolation and constant extension past the last knot.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::norm::NormKind;

/// Default absolute tolerance for the modulus axioms.
pub const AXIOM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModulusKind {
    Holder { alpha: f64 },
    CappedHolder { alpha: f64, cap: f64 },
    Tabulated { knots: Vec<(f64, f64)> },
}

/// A validated-at-construction modulus of continuity with its cached supremum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ModulusSpec {
    kind: ModulusKind,
    cached_sup: f64,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha <= 1.0 {
        Ok(())
    } else {
        Err(Error::Argument(format!("exponent must lie in (0, 1], got {alpha}")))
    }
}

impl ModulusSpec {
    pub fn holder(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            kind: ModulusKind::Holder { alpha },
            cached_sup: f64::INFINITY,
        })
    }

    pub fn capped_holder(alpha: f64, cap: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(cap > 0.0 && cap.is_finite()) {
            return Err(Error::Argument(format!("cap must be positive and finite, got {cap}")));
        }
        Ok(Self {
            kind: ModulusKind::CappedHolder { alpha, cap },
            cached_sup: cap,
        })
    }

    /// Knots must start at `t = 0` and be strictly increasing in `t`.
    /// Monotonicity of the values is checked by [`ModulusSpec::validate`], not here.
    pub fn tabulated(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.len() < 2 {
            return Err(Error::Argument("tabulated modulus needs at least two knots".into()));
        }
        if knots[0].0 != 0.0 {
            return Err(Error::Argument(format!(
                "first knot must sit at t = 0, got t = {}",
                knots[0].0
            )));
        }
        for w in knots.windows(2) {
            if !(w[1].0 > w[0].0) {
                return Err(Error::Argument(format!(
                    "knots must be strictly increasing in t ({} then {})",
                    w[0].0, w[1].0
                )));
            }
        }
        if knots.iter().any(|&(t, v)| !t.is_finite() || !v.is_finite() || v < 0.0) {
            return Err(Error::Argument("knot values must be finite and nonnegative".into()));
        }
        let cached_sup = knots.iter().fold(0.0_f64, |m, &(_, v)| m.max(v));
        Ok(Self {
            kind: ModulusKind::Tabulated { knots },
            cached_sup,
        })
    }

    /// Reads `t,omega` rows. A leading header row is skipped if it is not numeric.
    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .comment(Some(b'#'))
            .from_path(path.as_ref())?;
        let mut knots = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let rec = rec?;
            if rec.len() < 2 {
                return Err(Error::Parse(format!("row {} needs two columns", i + 1)));
            }
            match (rec[0].parse::<f64>(), rec[1].parse::<f64>()) {
                (Ok(t), Ok(v)) => knots.push((t, v)),
                _ if i == 0 => continue,
                _ => return Err(Error::Parse(format!("row {} is not numeric", i + 1))),
            }
        }
        Self::tabulated(knots)
    }

    pub fn kind(&self) -> &ModulusKind {
        &self.kind
    }

    /// `sup w`, possibly infinite.
    pub fn sup(&self) -> f64 {
        self.cached_sup
    }

    pub fn is_bounded(&self) -> bool {
        self.cached_sup.is_finite()
    }

    /// The exponent when the modulus is `t^a` (the scale-invariant case).
    pub fn homogeneous_exponent(&self) -> Option<f64> {
        match self.kind {
            ModulusKind::Holder { alpha } => Some(alpha),
            _ => None,
        }
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous_exponent().is_some()
    }

    /// Evaluates `w(t)`; negative arguments are rejected.
    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Argument(format!("modulus argument must be >= 0, got {t}")));
        }
        Ok(self.at(t))
    }

    /// Unchecked evaluation for hot loops; `t` is clamped at zero.
    #[inline]
    pub fn at(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        match &self.kind {
            ModulusKind::Holder { alpha } => pow_alpha(t, *alpha),
            ModulusKind::CappedHolder { alpha, cap } => pow_alpha(t, *alpha).min(*cap),
            ModulusKind::Tabulated { knots } => interpolate(knots, t),
        }
    }

    /// Points where `w` fails to be smooth; quadrature splits there.
    pub fn kinks(&self) -> Vec<f64> {
        match &self.kind {
            ModulusKind::Holder { .. } => Vec::new(),
            ModulusKind::CappedHolder { alpha, cap } => vec![cap.powf(1.0 / alpha)],
            ModulusKind::Tabulated { knots } => knots.iter().skip(1).map(|k| k.0).collect(),
        }
    }

    pub fn is_concave(&self) -> bool {
        match &self.kind {
            ModulusKind::Holder { .. } | ModulusKind::CappedHolder { .. } => true,
            ModulusKind::Tabulated { knots } => {
                let slopes: Vec<f64> = knots
                    .windows(2)
                    .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
                    .collect();
                knots[0].1 == 0.0
                    && slopes.windows(2).all(|s| s[1] <= s[0] + AXIOM_TOL)
                    && slopes.last().map_or(true, |&s| s >= -AXIOM_TOL)
            }
        }
    }

    /// Smallest `t` with `w(t) >= level`, or `None` if the level is never reached.
    pub fn inverse(&self, level: f64) -> Option<f64> {
        if level <= 0.0 {
            return Some(0.0);
        }
        match &self.kind {
            ModulusKind::Holder { alpha } => Some(level.powf(1.0 / alpha)),
            ModulusKind::CappedHolder { alpha, cap } => {
                (level <= *cap).then(|| level.powf(1.0 / alpha))
            }
            ModulusKind::Tabulated { knots } => {
                for w in knots.windows(2) {
                    let ((t0, v0), (t1, v1)) = (w[0], w[1]);
                    if v1 >= level {
                        if v0 >= level {
                            return Some(t0);
                        }
                        return Some(t0 + (level - v0) / (v1 - v0) * (t1 - t0));
                    }
                }
                None
            }
        }
    }

    /// The parse syntax that reproduces this modulus (tabulated moduli print inline).
    pub fn label(&self) -> String {
        match &self.kind {
            ModulusKind::Holder { alpha } => format!("holder:{alpha}"),
            ModulusKind::CappedHolder { alpha, cap } => format!("capped:{alpha}:{cap}"),
            ModulusKind::Tabulated { knots } => format!("tabulated[{} knots]", knots.len()),
        }
    }

    pub fn validate(&self, grid: &[f64]) -> ValidationReport {
        self.validate_with_tol(grid, AXIOM_TOL)
    }

    /// Checks `w(0) = 0`, monotonicity along the sorted grid and subadditivity
    /// over every pair of grid points.
    pub fn validate_with_tol(&self, grid: &[f64], tol: f64) -> ValidationReport {
        let mut violations = Vec::new();
        let w0 = self.at(0.0);
        if w0.abs() > tol {
            violations.push(Violation::NonzeroAtOrigin { value: w0 });
        }
        let mut pts: Vec<f64> = grid.iter().copied().filter(|t| *t >= 0.0).collect();
        for &t in grid.iter().filter(|t| !(**t >= 0.0)) {
            violations.push(Violation::NegativeArgument { t });
        }
        pts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        pts.dedup();
        let vals: Vec<f64> = pts.iter().map(|&t| self.at(t)).collect();
        for i in 1..pts.len() {
            if vals[i] < vals[i - 1] - tol {
                violations.push(Violation::Decreasing {
                    a: pts[i - 1],
                    b: pts[i],
                    wa: vals[i - 1],
                    wb: vals[i],
                });
            }
        }
        for i in 0..pts.len() {
            for j in i..pts.len() {
                let lhs = self.at(pts[i] + pts[j]);
                let rhs = vals[i] + vals[j];
                if lhs > rhs + tol {
                    violations.push(Violation::Superadditive {
                        a: pts[i],
                        b: pts[j],
                        lhs,
                        rhs,
                    });
                }
            }
        }
        ValidationReport {
            ok: violations.is_empty(),
            violations,
        }
    }
}

#[inline]
fn pow_alpha(t: f64, alpha: f64) -> f64 {
    if alpha == 1.0 {
        t
    } else if alpha == 0.5 {
        t.sqrt()
    } else {
        t.powf(alpha)
    }
}

fn interpolate(knots: &[(f64, f64)], t: f64) -> f64 {
    let last = knots[knots.len() - 1];
    if t >= last.0 {
        return last.1;
    }
    // first knot index with knot.t > t
    let i = knots.partition_point(|k| k.0 <= t);
    let (t0, v0) = knots[i - 1];
    let (t1, v1) = knots[i];
    v0 + (t - t0) / (t1 - t0) * (v1 - v0)
}

impl fmt::Display for ModulusSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

impl FromStr for ModulusSpec {
    type Err = Error;

    /// `holder:<a>`, `capped:<a>:<cap>` or `file:<path>`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let num = |x: &str| -> Result<f64> {
            x.parse::<f64>()
                .map_err(|_| Error::Parse(format!("'{x}' is not a number in modulus '{s}'")))
        };
        if let Some(rest) = s.strip_prefix("holder:") {
            return Self::holder(num(rest)?);
        }
        if let Some(rest) = s.strip_prefix("capped:") {
            let (a, c) = rest
                .split_once(':')
                .ok_or_else(|| Error::Parse(format!("expected capped:<alpha>:<cap>, got '{s}'")))?;
            return Self::capped_holder(num(a)?, num(c)?);
        }
        if let Some(path) = s.strip_prefix("file:") {
            return Self::from_csv_path(path);
        }
        Err(Error::Parse(format!("unknown modulus syntax '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    NonzeroAtOrigin { value: f64 },
    NegativeArgument { t: f64 },
    Decreasing { a: f64, b: f64, wa: f64, wb: f64 },
    Superadditive { a: f64, b: f64, lhs: f64, rhs: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "domain", rename_all = "snake_case")]
pub enum ExtremalDomain {
    Global { dim: usize },
    HalfLine,
    Interval { length: f64 },
}

/// The extremal function `psi(x) = (H - w(|x|))^+`.
///
/// `H` is `sup w` for bounded moduli. Unbounded moduli are truncated at a
/// single finite height, so `w(psi, t) = w(t)` holds only below
/// [`Extremal::exact_radius`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Extremal {
    pub base_modulus: ModulusSpec,
    pub domain: ExtremalDomain,
    pub truncation_cap: Option<f64>,
    height: f64,
}

impl Extremal {
    pub fn construct(spec: &ModulusSpec, domain: ExtremalDomain, cap: Option<f64>) -> Result<Self> {
        if let Some(c) = cap {
            if !(c > 0.0 && c.is_finite()) {
                return Err(Error::Config(format!("truncation cap must be positive, got {c}")));
            }
        }
        match domain {
            ExtremalDomain::Global { dim } if dim == 0 => {
                return Err(Error::Config("dimension must be at least 1".into()))
            }
            ExtremalDomain::Interval { length } if !(length > 0.0) => {
                return Err(Error::Config(format!("interval length must be positive, got {length}")))
            }
            _ => {}
        }
        let natural = match domain {
            // on a bounded interval only w up to w(|I|) is ever seen
            ExtremalDomain::Interval { length } if length.is_finite() => {
                spec.sup().min(spec.at(length))
            }
            _ => spec.sup(),
        };
        let height = match cap {
            Some(c) => c.min(natural),
            None if natural.is_finite() => natural,
            None => {
                return Err(Error::Config(format!(
                    "modulus {spec} is unbounded; a truncation cap is required"
                )))
            }
        };
        Ok(Self {
            base_modulus: spec.clone(),
            domain,
            truncation_cap: cap,
            height,
        })
    }

    /// `max psi`, attained at the origin.
    pub fn height(&self) -> f64 {
        self.height
    }

    /// `psi` as a function of the distance to the origin.
    #[inline]
    pub fn profile(&self, r: f64) -> f64 {
        (self.height - self.base_modulus.at(r.abs())).max(0.0)
    }

    pub fn eval_1d(&self, x: f64) -> f64 {
        self.profile(x.abs())
    }

    pub fn eval_point(&self, x: &[f64], norm: &NormKind) -> f64 {
        self.profile(norm.eval(x))
    }

    /// Largest `t` for which `w(psi, t) = w(t)` is guaranteed.
    pub fn exact_radius(&self) -> f64 {
        let r = if self.height >= self.base_modulus.sup() {
            f64::INFINITY
        } else {
            self.base_modulus.inverse(self.height).unwrap_or(f64::INFINITY)
        };
        match self.domain {
            ExtremalDomain::Interval { length } => r.min(length),
            _ => r,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn grid(n: usize, hi: f64) -> Vec<f64> {
        (0..=n).map(|i| hi * i as f64 / n as f64).collect()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(ModulusSpec::holder(0.5).unwrap().eval(4.0).unwrap(), 2.0);
        assert_eq!(ModulusSpec::capped_holder(1.0, 1.0).unwrap().eval(3.0).unwrap(), 1.0);
        let tab = ModulusSpec::tabulated(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 1.5)]).unwrap();
        assert_eq!(tab.eval(0.5).unwrap(), 0.5);
        assert_eq!(tab.eval(1.5).unwrap(), 1.25);
        assert_eq!(tab.eval(10.0).unwrap(), 1.5);
        assert_eq!(tab.sup(), 1.5);
    }

    #[test]
    fn negative_argument_is_an_error() {
        let w = ModulusSpec::holder(1.0).unwrap();
        assert!(matches!(w.eval(-1.0), Err(Error::Argument(_))));
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(ModulusSpec::holder(0.0).is_err());
        assert!(ModulusSpec::holder(1.5).is_err());
        assert!(ModulusSpec::capped_holder(0.5, -1.0).is_err());
        assert!(ModulusSpec::tabulated(vec![(0.0, 0.0)]).is_err());
        assert!(ModulusSpec::tabulated(vec![(0.0, 0.0), (1.0, 1.0), (1.0, 2.0)]).is_err());
        assert!(ModulusSpec::tabulated(vec![(0.5, 0.0), (1.0, 1.0)]).is_err());
    }

    #[test]
    fn validate_examples() {
        let rep = ModulusSpec::holder(0.7).unwrap().validate(&grid(100, 10.0));
        assert!(rep.ok, "{:?}", rep.violations);

        // t^2 sampled at 0,1,2 fails subadditivity: w(2) = 4 > w(1) + w(1)
        let sq = ModulusSpec::tabulated(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 4.0)]).unwrap();
        let rep = sq.validate(&[0.0, 1.0, 2.0]);
        assert!(!rep.ok);
        assert!(rep.violations.iter().any(|v| matches!(
            v,
            Violation::Superadditive { a, b, lhs, rhs } if *a == 1.0 && *b == 1.0 && *lhs == 4.0 && *rhs == 2.0
        )));

        let dec = ModulusSpec::tabulated(vec![(0.0, 0.0), (1.0, 2.0), (2.0, 1.0)]).unwrap();
        let rep = dec.validate(&grid(20, 3.0));
        assert!(rep.violations.iter().any(|v| matches!(v, Violation::Decreasing { .. })));

        let shifted = ModulusSpec::tabulated(vec![(0.0, 0.5), (1.0, 1.0)]).unwrap();
        assert!(matches!(
            shifted.validate(&[0.0, 1.0]).violations[0],
            Violation::NonzeroAtOrigin { .. }
        ));
    }

    #[test]
    fn parse_syntax() {
        let w: ModulusSpec = "holder:0.25".parse().unwrap();
        assert_eq!(w.homogeneous_exponent(), Some(0.25));
        let c: ModulusSpec = "capped:1:2".parse().unwrap();
        assert_eq!(c.sup(), 2.0);
        assert!("capped:1".parse::<ModulusSpec>().is_err());
        assert!("holder:x".parse::<ModulusSpec>().is_err());
        assert!("cubic:1".parse::<ModulusSpec>().is_err());
    }

    #[test]
    fn parse_file() {
        let dir = std::env::temp_dir().join(format!("maxmod-mod-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("w.csv");
        std::fs::write(&p, "t,omega\n0,0\n1,1\n2,1.5\n").unwrap();
        let w: ModulusSpec = format!("file:{}", p.display()).parse().unwrap();
        assert_eq!(w.eval(0.5).unwrap(), 0.5);
        assert_eq!(w.kinks(), vec![1.0, 2.0]);
        std::fs::write(&p, "t,omega\n0,0\nx,1\n").unwrap();
        assert!(format!("file:{}", p.display()).parse::<ModulusSpec>().is_err());
    }

    #[test]
    fn inverse_and_kinks() {
        let c = ModulusSpec::capped_holder(0.5, 2.0).unwrap();
        assert_eq!(c.kinks(), vec![4.0]);
        assert_eq!(c.inverse(1.0), Some(1.0));
        assert_eq!(c.inverse(3.0), None);
        let tab = ModulusSpec::tabulated(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 1.5)]).unwrap();
        assert_eq!(tab.inverse(1.25), Some(1.5));
        assert!(tab.is_concave());
        let convex = ModulusSpec::tabulated(vec![(0.0, 0.0), (1.0, 1.0), (2.0, 3.0)]).unwrap();
        assert!(!convex.is_concave());
    }

    #[test]
    fn extremal_examples() {
        let hat = Extremal::construct(
            &ModulusSpec::capped_holder(1.0, 1.0).unwrap(),
            ExtremalDomain::Global { dim: 1 },
            None,
        )
        .unwrap();
        for &x in &[-2.0, -1.0, -0.25, 0.0, 0.5, 1.0, 3.0] {
            let want: f64 = (1.0 - f64::abs(x)).max(0.0);
            assert!((hat.eval_1d(x) - want).abs() < 1e-15);
        }
        assert_eq!(hat.exact_radius(), f64::INFINITY);

        let half = Extremal::construct(
            &ModulusSpec::holder(0.5).unwrap(),
            ExtremalDomain::HalfLine,
            Some(1.0),
        )
        .unwrap();
        for &x in &[0.0, 0.04, 0.25, 1.0, 4.0] {
            let want: f64 = (1.0 - f64::sqrt(x)).max(0.0);
            assert!((half.eval_1d(x) - want).abs() < 1e-15);
        }
        assert_eq!(half.exact_radius(), 1.0);

        let err = Extremal::construct(
            &ModulusSpec::holder(0.5).unwrap(),
            ExtremalDomain::Global { dim: 2 },
            None,
        );
        assert!(matches!(err, Err(Error::Config(_))));

        // a bounded interval needs no cap even for an unbounded modulus
        let iv = Extremal::construct(
            &ModulusSpec::holder(1.0).unwrap(),
            ExtremalDomain::Interval { length: 2.0 },
            None,
        )
        .unwrap();
        assert_eq!(iv.height(), 2.0);
        assert_eq!(iv.exact_radius(), 2.0);
    }

    fn arb_modulus() -> impl Strategy<Value = ModulusSpec> {
        prop_oneof![
            (0.05f64..=1.0).prop_map(|a| ModulusSpec::holder(a).unwrap()),
            (0.05f64..=1.0, 0.1f64..5.0).prop_map(|(a, c)| ModulusSpec::capped_holder(a, c).unwrap()),
            // concave increasing tables through the origin are moduli
            proptest::collection::vec((0.05f64..2.0, 0.0f64..1.0), 1..6).prop_map(|steps| {
                let mut slopes: Vec<f64> = steps.iter().map(|s| s.1).collect();
                slopes.sort_by(|a, b| b.partial_cmp(a).unwrap());
                let mut knots = vec![(0.0, 0.0)];
                let (mut t, mut v) = (0.0, 0.0);
                for (dt, s) in steps.iter().map(|s| s.0).zip(slopes) {
                    t += dt;
                    v += s * dt;
                    knots.push((t, v));
                }
                ModulusSpec::tabulated(knots).unwrap()
            }),
        ]
    }

    proptest! {
        #[test]
        fn generated_moduli_satisfy_axioms(w in arb_modulus()) {
            let g = grid(60, 8.0);
            let rep = w.validate(&g);
            prop_assert!(rep.ok, "{:?}", rep.violations);
            for i in 0..g.len() {
                for j in i..g.len() {
                    prop_assert!(w.at(g[i]) <= w.at(g[j]));
                    prop_assert!(w.at(g[i] + g[j]) <= w.at(g[i]) + w.at(g[j]) + 1e-12);
                }
            }
        }

        #[test]
        fn bounded_extremal_peaks_at_origin(w in arb_modulus(), dim in 1usize..4) {
            prop_assume!(w.is_bounded());
            let psi = Extremal::construct(&w, ExtremalDomain::Global { dim }, None).unwrap();
            prop_assert_eq!(psi.profile(0.0), w.sup());
            let rs = grid(80, 10.0);
            for r in rs.windows(2) {
                prop_assert!(psi.profile(r[1]) <= psi.profile(r[0]));
                prop_assert!(psi.profile(r[0]) <= w.sup());
            }
        }
    }
}
