//! The polynomial `p_d` whose root in `(0, 1)` fixes the Lipschitz cube constant.

use serde::Serialize;

/// Above this dimension `p_d` is evaluated through logarithms.
pub const DIRECT_LIMIT: u32 = 50;

/// `p_d(s) = 2^d s^{d+1} - (1+s)^{d+1} + 2^d (d+1) s^d` and its root `s_d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CubePolynomial {
    pub d: u32,
    pub root: f64,
    /// `p_d(s_d) / (1+s_d)^{d+1}`.
    pub scaled_residual: f64,
    pub iterations: u32,
}

/// `(2s/(1+s))^d`.
#[inline]
fn ratio_pow(d: u32, s: f64) -> f64 {
    if d <= DIRECT_LIMIT {
        (2.0 * s / (1.0 + s)).powi(d as i32)
    } else {
        (d as f64 * (2.0 * s / (1.0 + s)).ln()).exp()
    }
}

impl CubePolynomial {
    /// Direct evaluation; overflows for very large `d`.
    pub fn p(d: u32, s: f64) -> f64 {
        let df = d as f64;
        let two_d = 2f64.powi(d as i32);
        two_d * s.powi(d as i32 + 1) - (1.0 + s).powi(d as i32 + 1) + two_d * (df + 1.0) * s.powi(d as i32)
    }

    /// `p_d(s) / (1+s)^{d+1}`, finite for every `d` and `s in [0, 1]`.
    pub fn p_scaled(d: u32, s: f64) -> f64 {
        if s <= 0.0 {
            return -1.0;
        }
        ratio_pow(d, s) * (s + d as f64 + 1.0) / (1.0 + s) - 1.0
    }

    fn p_scaled_derivative(d: u32, s: f64) -> f64 {
        let df = d as f64;
        let q1 = ratio_pow(d, s) * (s + df + 1.0) / (1.0 + s);
        q1 * (df / (s * (1.0 + s)) + 1.0 / (s + df + 1.0) - 1.0 / (1.0 + s))
    }

    fn p_derivative(d: u32, s: f64) -> f64 {
        let df = d as f64;
        let two_d = 2f64.powi(d as i32);
        let mut v = two_d * (df + 1.0) * s.powi(d as i32) - (df + 1.0) * (1.0 + s).powi(d as i32);
        if d >= 1 {
            v += two_d * df * (df + 1.0) * s.powi(d as i32 - 1);
        }
        v
    }

    /// `g_d(s) = s - 2^d s^{d+1} / (1+s)^d`.
    pub fn g(d: u32, s: f64) -> f64 {
        s - s * ratio_pow(d, s)
    }

    /// `h_d(s) = d/(d+1) - g_d(s)/(d+1)`, the Lipschitz cube objective.
    pub fn h(d: u32, s: f64) -> f64 {
        let df = d as f64;
        (df - Self::g(d, s)) / (df + 1.0)
    }

    pub fn value(&self) -> f64 {
        Self::h(self.d, self.root)
    }
}

/// Bisection on the sign bracket `p_d(0) < 0 < p_d(1)`, then Newton steps that
/// are only accepted inside the current bracket.
pub fn solve_pd_root(d: u32) -> CubePolynomial {
    assert!(d >= 1, "dimension must be at least 1");
    let direct = d <= DIRECT_LIMIT;
    let f = |s: f64| {
        if direct {
            CubePolynomial::p(d, s)
        } else {
            CubePolynomial::p_scaled(d, s)
        }
    };
    let df = |s: f64| {
        if direct {
            CubePolynomial::p_derivative(d, s)
        } else {
            CubePolynomial::p_scaled_derivative(d, s)
        }
    };

    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    let mut iterations = 0;
    // bisect until Newton is safe
    while hi - lo > 1e-3 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let mut s = 0.5 * (lo + hi);
    for _ in 0..100 {
        iterations += 1;
        let fs = f(s);
        if fs == 0.0 {
            lo = s;
            hi = s;
            break;
        }
        if fs < 0.0 {
            lo = s;
        } else {
            hi = s;
        }
        let step = fs / df(s);
        let mut next = s - step;
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        if (next - s).abs() <= 4.0 * f64::EPSILON * s || hi - lo <= 4.0 * f64::EPSILON {
            s = next;
            break;
        }
        s = next;
    }
    debug_assert!(s >= lo && s <= hi);
    CubePolynomial {
        d,
        root: s,
        scaled_residual: CubePolynomial::p_scaled(d, s),
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn spec_examples() {
        let c = solve_pd_root(1);
        assert!((c.root - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        assert!((c.value() - (2f64.sqrt() - 1.0)).abs() < 1e-15);
        let c2 = solve_pd_root(2);
        // root of 3s^3 + 9s^2 - 3s - 1
        let cubic = |s: f64| 3.0 * s.powi(3) + 9.0 * s * s - 3.0 * s - 1.0;
        assert!(cubic(c2.root).abs() < 1e-13);
        let trig = 4.0 / 3f64.sqrt() * (5.0 * std::f64::consts::PI / 18.0).cos() - 1.0;
        assert!((c2.root - trig).abs() < 1e-13);
        assert!((c2.root - 0.484454397937118).abs() < 1e-13);
    }

    #[test]
    fn d1_polynomial_is_s2_plus_2s_minus_1() {
        for s in [0.0, 0.25, 0.5, 1.0] {
            assert!((CubePolynomial::p(1, s) - (s * s + 2.0 * s - 1.0)).abs() < 1e-15);
        }
    }

    #[test]
    fn bracket_signs() {
        for d in 1..=60 {
            assert_eq!(CubePolynomial::p(d, 0.0), -1.0);
            assert_eq!(CubePolynomial::p(d, 1.0), 2f64.powi(d as i32) * d as f64);
        }
        for d in [100, 1000, 100_000] {
            assert_eq!(CubePolynomial::p_scaled(d, 0.0), -1.0);
            assert!(CubePolynomial::p_scaled(d, 1.0) > 0.0);
        }
    }

    #[test]
    fn scaled_and_direct_agree() {
        for d in [1, 5, 20, 50] {
            for s in [0.1, 0.5, 0.9] {
                let direct = CubePolynomial::p(d, s) / (1.0 + s).powi(d as i32 + 1);
                assert!((direct - CubePolynomial::p_scaled(d, s)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn large_d_roots_increase_toward_one() {
        let roots: Vec<f64> = [10, 50, 100, 200].iter().map(|&d| solve_pd_root(d).root).collect();
        assert!(roots.windows(2).all(|w| w[1] >= w[0]));
        assert!(roots[3] > 0.9 && roots[3] < 1.0);
        assert!(solve_pd_root(5000).root < 1.0);
    }

    proptest! {
        #[test]
        fn root_properties(d in 1u32..=200) {
            let c = solve_pd_root(d);
            prop_assert!(c.root > 0.0 && c.root < 1.0);
            prop_assert!(c.scaled_residual.abs() <= 1e-13);
            let df = d as f64;
            let v = c.value();
            prop_assert!(v > (df - 1.0) / (df + 1.0) && v < df / (df + 1.0));
        }
    }
}
