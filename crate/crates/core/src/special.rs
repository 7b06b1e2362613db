//! Exponential integral `E_1` and its exponentially scaled variant.
//!
//! Serves as the independent closed-form reference for the capacity-type
//! integral `int_0^inf ln(1+a z) e^{-z} dz = e^{1/a} E_1(1/a)`. The quadrature
//! module must never call into this one; the two routes are compared in tests.
//!
//! Internals run in `f64` regardless of the public scalar type: the series and
//! continued fraction converge to ~1e-15 relative, which is what the oracle
//! comparisons rely on.

use crate::real::Real;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Exponential integral `E_1(x)` for `x > 0`.
///
/// Power series for `x <= 1`, modified Lentz continued fraction above.
pub fn exp1<T: Real>(x: T) -> T {
    T::of(exp1_f64(x.as_f64()))
}

/// Exponentially scaled exponential integral `e^x E_1(x)` for `x > 0`.
///
/// Stable for large `x` where `E_1(x)` itself underflows.
pub fn exp1_scaled<T: Real>(x: T) -> T {
    T::of(exp1_scaled_f64(x.as_f64()))
}

fn exp1_f64(x: f64) -> f64 {
    if x.is_nan() || x < 0.0 {
        return f64::NAN;
    }
    if x == 0.0 {
        return f64::INFINITY;
    }
    if x <= 1.0 {
        exp1_series(x)
    } else {
        (-x).exp() * exp1_cf(x)
    }
}

fn exp1_scaled_f64(x: f64) -> f64 {
    if x.is_nan() || x <= 0.0 {
        return f64::NAN;
    }
    if x <= 1.0 {
        x.exp() * exp1_series(x)
    } else {
        exp1_cf(x)
    }
}

/// E_1(x) = -gamma - ln x + sum_{k>=1} (-1)^{k+1} x^k / (k * k!)
fn exp1_series(x: f64) -> f64 {
    let mut sum = 0.0;
    let mut term = 1.0;
    for k in 1..=60 {
        let kf = k as f64;
        term *= -x / kf;
        let add = -term / kf;
        sum += add;
        if add.abs() < 1e-18 * sum.abs().max(1e-300) {
            break;
        }
    }
    -EULER_GAMMA - x.ln() + sum
}

/// Continued fraction for e^x E_1(x), x > 1 (modified Lentz):
/// e^x E_1(x) = 1/(x+1- 1^2/(x+3- 2^2/(x+5- ...)))
fn exp1_cf(x: f64) -> f64 {
    let tiny = 1e-300;
    let mut b = x + 1.0;
    let mut c = 1.0 / tiny;
    let mut d = 1.0 / b;
    let mut h = d;
    for k in 1..=200 {
        let kf = k as f64;
        let a = -kf * kf;
        b += 2.0;
        d = 1.0 / (a * d + b);
        c = b + a / c;
        let delta = c * d;
        h *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    h
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn exp1_matches_scipy_references() {
        // Reference values from scipy.special.exp1
        assert_relative_eq!(exp1(1e-5f64), 10.935719800043696, max_relative = 1e-13);
        assert_relative_eq!(exp1(0.25f64), 1.0442826344437381, max_relative = 1e-13);
        assert_relative_eq!(exp1(0.33f64), 0.8361011614550026, max_relative = 1e-13);
        assert_relative_eq!(exp1(1.0f64), 0.21938393439552062, max_relative = 1e-13);
        assert_relative_eq!(exp1(2.5f64), 0.024914917870269736, max_relative = 1e-13);
        assert_relative_eq!(exp1(43.0f64), 4.809496556950017e-21, max_relative = 1e-12);
    }

    #[test]
    fn scaled_variant_consistent_with_plain() {
        for &x in &[0.01f64, 0.3, 0.999, 1.0001, 2.0, 10.0, 100.0] {
            assert_relative_eq!(
                exp1_scaled(x),
                x.exp() * exp1(x),
                max_relative = 1e-12
            );
        }
    }

    #[test]
    fn scaled_variant_survives_huge_arguments() {
        // e^x E_1(x) ~ 1/x for large x even where e^{-x} underflows.
        let v = exp1_scaled(2000.0f64);
        assert!(v > 0.0 && v < 1.0 / 1999.0);
        assert_relative_eq!(v, 1.0 / 2000.0, max_relative = 1e-3);
    }

    #[test]
    fn domain_edges() {
        assert_eq!(exp1(0.0f64), f64::INFINITY);
        assert!(exp1(-1.0f64).is_nan());
    }
}
