use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A user-supplied norm on R^d.
#[derive(Clone)]
pub struct CustomNorm {
    name: String,
    f: Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>,
}

impl CustomNorm {
    pub fn new<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            f: Arc::new(f),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }
}

impl fmt::Debug for CustomNorm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CustomNorm").field("name", &self.name).finish()
    }
}

/// The norm that defines both the averaging balls and the distance.
#[derive(Debug, Clone)]
pub enum NormKind {
    Linf,
    L2,
    L1,
    Lp(f64),
    Custom(CustomNorm),
}

impl NormKind {
    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            NormKind::Linf => x.iter().fold(0.0_f64, |m, v| m.max(v.abs())),
            NormKind::L2 => x.iter().map(|v| v * v).sum::<f64>().sqrt(),
            NormKind::L1 => x.iter().map(|v| v.abs()).sum(),
            NormKind::Lp(p) => {
                if p.is_infinite() {
                    return NormKind::Linf.eval(x);
                }
                // scale by the largest entry so that high powers stay finite
                let m = x.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
                if m == 0.0 {
                    return 0.0;
                }
                m * x
                    .iter()
                    .map(|v| (v.abs() / m).powf(*p))
                    .sum::<f64>()
                    .powf(1.0 / p)
            }
            NormKind::Custom(c) => (c.f)(x),
        }
    }

    /// Short machine-readable name, the same syntax accepted by `FromStr`.
    pub fn label(&self) -> String {
        match self {
            NormKind::Linf => "linf".into(),
            NormKind::L2 => "l2".into(),
            NormKind::L1 => "l1".into(),
            NormKind::Lp(p) => format!("lp:{p}"),
            NormKind::Custom(c) => format!("custom:{}", c.name()),
        }
    }

    /// Returns the equivalent named norm for `Lp(1)`, `Lp(2)` and `Lp(inf)`.
    pub fn canonical(&self) -> NormKind {
        match self {
            NormKind::Lp(p) if *p == 1.0 => NormKind::L1,
            NormKind::Lp(p) if *p == 2.0 => NormKind::L2,
            NormKind::Lp(p) if p.is_infinite() => NormKind::Linf,
            other => other.clone(),
        }
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "linf" | "l_inf" | "inf" => Ok(NormKind::Linf),
            "l2" => Ok(NormKind::L2),
            "l1" => Ok(NormKind::L1),
            other => {
                let p = other
                    .strip_prefix("lp:")
                    .ok_or_else(|| Error::Parse(format!("unknown norm '{other}'")))?;
                let p: f64 = p
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent in '{other}'")))?;
                if !(p >= 1.0) {
                    return Err(Error::Parse(format!("lp exponent must be >= 1, got {p}")));
                }
                Ok(NormKind::Lp(p))
            }
        }
    }
}
