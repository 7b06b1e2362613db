//! Numerical integration kernels.
//!
//! Two workhorses:
//!
//! * `exp_log_moment` — the expectation `int_0^inf ln(1+a z) e^{-z} dz` behind
//!   every capacity-type expression. A fixed 64-node Gauss-Laguerre rule is
//!   used when a 32-node companion rule agrees with it; otherwise the integral
//!   falls back to adaptive panels on `[0, Z]` with `Z = 50 + 10 ln(1+a)`,
//!   beyond which the tail is below 1e-20.
//! * `freq_integral` — adaptive Gauss-Legendre panels over the normalized
//!   frequency band `[-1/2, 1/2]`, honoring caller-supplied breakpoints so
//!   that piecewise-defined spectra are integrated without straddling their
//!   seams.
//!
//! All rule nodes are generated at first use by Newton iteration on the
//! orthogonal-polynomial recurrences, in `f64`, then cast to the working
//! scalar type. Everything here stays in natural log units; unit conversion
//! happens at the public rate-bound boundary.

use once_cell::sync::Lazy;

use crate::real::Real;
use crate::{Error, Result};

/// Tolerances and subdivision budget for adaptive integration.
#[derive(Clone, Copy, Debug)]
pub struct IntegralSpec<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_subdivisions: usize,
}

impl<T: Real> Default for IntegralSpec<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::of(1e-10),
            abs_tol: T::of(1e-12),
            max_subdivisions: 4000,
        }
    }
}

impl<T: Real> IntegralSpec<T> {
    fn validate(&self) -> Result<()> {
        if !(self.rel_tol > T::zero()) || !(self.abs_tol > T::zero()) || self.max_subdivisions == 0
        {
            return Err(Error::InvalidConfig(
                "integration tolerances must be positive and max_subdivisions >= 1".into(),
            ));
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Rule generation
// ---------------------------------------------------------------------------

/// Gauss-Laguerre nodes/weights for weight e^{-x} on [0, inf).
fn gauss_laguerre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let nf = n as f64;
    let mut z = 0.0;
    for i in 0..n {
        // initial guesses per standard practice
        z = match i {
            0 => 3.0 / (1.0 + 2.4 * nf),
            1 => z + 15.0 / (1.0 + 2.5 * nf),
            _ => {
                let ai = (i - 1) as f64;
                z + ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - x[i - 2])
            }
        };
        let mut pp;
        for _ in 0..100 {
            // Laguerre recurrence: p1 = L_n(z), p2 = L_{n-1}(z)
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
            }
            pp = nf * (p1 - p2) / z;
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 * z.max(1.0) {
                break;
            }
        }
        // recompute L_{n-1} at the converged node for the weight
        let mut p1 = 1.0;
        let mut p2 = 0.0;
        for j in 1..=n {
            let jf = j as f64;
            let p3 = p2;
            p2 = p1;
            p1 = ((2.0 * jf - 1.0 - z) * p2 - (jf - 1.0) * p3) / jf;
        }
        pp = nf * (p1 - p2) / z;
        x[i] = z;
        w[i] = -1.0 / (pp * nf * p2);
        debug_assert!(w[i] > 0.0, "Laguerre weight must be positive");
    }
    (x, w)
}

/// Gauss-Legendre nodes/weights on [-1, 1].
fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let m = n.div_ceil(2);
    let nf = n as f64;
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (nf + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 1..=n {
                let jf = j as f64;
                let p3 = p2;
                p2 = p1;
                p1 = ((2.0 * jf - 1.0) * z * p2 - (jf - 1.0) * p3) / jf;
            }
            pp = nf * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() <= 1e-15 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * pp * pp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

static LAGUERRE_64: Lazy<(Vec<f64>, Vec<f64>)> = Lazy::new(|| gauss_laguerre(64));
static LAGUERRE_32: Lazy<(Vec<f64>, Vec<f64>)> = Lazy::new(|| gauss_laguerre(32));
static LEGENDRE_10: Lazy<(Vec<f64>, Vec<f64>)> = Lazy::new(|| gauss_legendre(10));
static LEGENDRE_21: Lazy<(Vec<f64>, Vec<f64>)> = Lazy::new(|| gauss_legendre(21));

fn laguerre_sum<T: Real>(rule: &(Vec<f64>, Vec<f64>), f: impl Fn(T) -> T) -> T {
    rule.0
        .iter()
        .zip(&rule.1)
        .map(|(&xi, &wi)| T::of(wi) * f(T::of(xi)))
        .sum()
}

// ---------------------------------------------------------------------------
// Adaptive panels
// ---------------------------------------------------------------------------

struct Panel<T> {
    a: T,
    b: T,
    estimate: T,
    error: T,
}

fn panel_estimates<T: Real, F: Fn(T) -> T>(f: &F, a: T, b: T) -> Result<(T, T)> {
    let half = (b - a) * T::of(0.5);
    let mid = (a + b) * T::of(0.5);
    let eval = |t: f64| -> Result<T> {
        let x = mid + half * T::of(t);
        let y = f(x);
        if !y.is_finite() {
            return Err(Error::NonFiniteIntegrand { f: x.as_f64() });
        }
        Ok(y)
    };
    let mut g21 = T::zero();
    for (&xi, &wi) in LEGENDRE_21.0.iter().zip(&LEGENDRE_21.1) {
        g21 += T::of(wi) * eval(xi)?;
    }
    let mut g10 = T::zero();
    for (&xi, &wi) in LEGENDRE_10.0.iter().zip(&LEGENDRE_10.1) {
        g10 += T::of(wi) * eval(xi)?;
    }
    let est = g21 * half;
    let err = ((g21 - g10) * half).abs();
    Ok((est, err))
}

/// Adaptive Gauss-Legendre integration of `f` over `[a, b]`.
///
/// The worst panel is bisected until the summed error estimate meets the
/// spec, the budget is exhausted (error), or panels shrink to rounding width.
pub fn integrate_adaptive<T: Real>(
    f: impl Fn(T) -> T,
    a: T,
    b: T,
    spec: &IntegralSpec<T>,
) -> Result<T> {
    spec.validate()?;
    if a == b {
        return Ok(T::zero());
    }
    let (est, err) = panel_estimates(&f, a, b)?;
    let mut panels = vec![Panel { a, b, estimate: est, error: err }];
    loop {
        let total: T = panels.iter().map(|p| p.estimate).sum();
        let total_err: T = panels.iter().map(|p| p.error).sum();
        let target = spec.abs_tol.max(spec.rel_tol * total.abs());
        if total_err <= target {
            return Ok(total);
        }
        if panels.len() >= spec.max_subdivisions {
            return Err(Error::ToleranceNotReached { panels: panels.len() });
        }
        // split the worst panel (ties resolved by scan order: leftmost first)
        let mut worst = 0;
        for (k, p) in panels.iter().enumerate() {
            if p.error > panels[worst].error {
                worst = k;
            }
        }
        let Panel { a: pa, b: pb, .. } = panels[worst];
        let mid = (pa + pb) * T::of(0.5);
        if !(mid > pa && mid < pb) {
            // panel at rounding width; accept its estimate as-is
            panels[worst].error = T::zero();
            continue;
        }
        let (le, lerr) = panel_estimates(&f, pa, mid)?;
        let (re, rerr) = panel_estimates(&f, mid, pb)?;
        panels[worst] = Panel { a: pa, b: mid, estimate: le, error: lerr };
        panels.push(Panel { a: mid, b: pb, estimate: re, error: rerr });
    }
}

/// Integrates `f` over the normalized band `[-1/2, 1/2]` with panel seams at
/// the given breakpoints.
pub fn freq_integral<T: Real>(
    f: impl Fn(T) -> T,
    breakpoints: &[T],
    spec: &IntegralSpec<T>,
) -> Result<T> {
    spec.validate()?;
    let half = T::of(0.5);
    let mut cuts: Vec<T> = Vec::with_capacity(breakpoints.len() + 2);
    cuts.push(-half);
    for &bp in breakpoints {
        if !(bp > -half && bp < half) {
            return Err(Error::FrequencyOutOfRange { f: bp.as_f64() });
        }
        cuts.push(bp);
    }
    cuts.push(half);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup_by(|x, y| (*x - *y).abs() <= T::of(1e-15));

    let mut total = T::zero();
    for win in cuts.windows(2) {
        total += integrate_adaptive(&f, win[0], win[1], spec)?;
    }
    Ok(total)
}

// ---------------------------------------------------------------------------
// Capacity-type expectations
// ---------------------------------------------------------------------------

/// `int_0^inf ln(1 + a z) e^{-z} dz` in nats; equals `e^{1/a} E_1(1/a)`.
pub fn exp_log_moment<T: Real>(a: T) -> Result<T> {
    if !(a >= T::zero()) || !a.is_finite() {
        return Err(Error::Domain(format!(
            "exp_log_moment needs a finite nonnegative gain, got {a}"
        )));
    }
    if a == T::zero() {
        return Ok(T::zero());
    }
    let g64 = laguerre_sum(&LAGUERRE_64, |z| (a * z).ln_1p());
    let g32 = laguerre_sum(&LAGUERRE_32, |z| (a * z).ln_1p());
    let tol = T::of(1e-12).max(T::of(1e-11) * g64.abs());
    if (g64 - g32).abs() <= tol {
        return Ok(g64);
    }
    // slow log turn near the origin for large gains: adaptive on [0, Z]
    let upper = T::of(50.0) + T::of(10.0) * a.ln_1p();
    let knee = (T::one() / a).min(upper * T::of(0.5));
    let spec = IntegralSpec { rel_tol: T::of(1e-12), abs_tol: T::of(1e-14), max_subdivisions: 4000 };
    let f = |z: T| (a * z).ln_1p() * (-z).exp();
    let left = integrate_adaptive(&f, T::zero(), knee, &spec)?;
    let right = integrate_adaptive(&f, knee, upper, &spec)?;
    Ok(left + right)
}

/// `int_0^inf (a z - ln(1 + a z)) e^{-z} dz` in nats.
///
/// Equals `a - exp_log_moment(a)` but stays accurate for small `a`, where the
/// direct difference would cancel catastrophically.
pub fn exp_log_moment_complement<T: Real>(a: T) -> Result<T> {
    if !(a >= T::zero()) || !a.is_finite() {
        return Err(Error::Domain(format!(
            "exp_log_moment_complement needs a finite nonnegative gain, got {a}"
        )));
    }
    if a == T::zero() {
        return Ok(T::zero());
    }
    // u - ln(1+u), by series when u is small
    let residual = |u: T| {
        if u < T::of(1e-4) {
            // u^2/2 - u^3/3 + u^4/4 - ...
            let mut term = u * u * T::of(0.5);
            let mut sum = term;
            let mut k = T::of(2.0);
            loop {
                term = -term * u * k / (k + T::one());
                let prev = sum;
                sum += term;
                k += T::one();
                if sum == prev {
                    break sum;
                }
            }
        } else {
            u - u.ln_1p()
        }
    };
    let g64 = laguerre_sum(&LAGUERRE_64, |z| residual(a * z));
    let g32 = laguerre_sum(&LAGUERRE_32, |z| residual(a * z));
    let tol = T::of(1e-12).max(T::of(1e-11) * g64.abs());
    if (g64 - g32).abs() <= tol {
        return Ok(g64);
    }
    let upper = T::of(50.0) + T::of(10.0) * a.ln_1p();
    let knee = (T::one() / a).min(upper * T::of(0.5));
    let spec = IntegralSpec { rel_tol: T::of(1e-12), abs_tol: T::of(1e-14), max_subdivisions: 4000 };
    let f = |z: T| residual(a * z) * (-z).exp();
    Ok(integrate_adaptive(&f, T::zero(), knee, &spec)?
        + integrate_adaptive(&f, knee, upper, &spec)?)
}

/// Output unit for rate quantities.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LogBase {
    Bits,
    Nats,
}

/// Ergodic capacity with perfect receiver channel knowledge,
/// `E[log(1 + rho |h|^2 / sigma_h^2)]` for Rayleigh fading.
pub fn coherent_capacity<T: Real>(rho: T, base: LogBase) -> Result<T> {
    let nats = exp_log_moment(rho)?;
    Ok(match base {
        LogBase::Nats => nats,
        LogBase::Bits => nats / T::LN_2(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::exp1_scaled;
    use approx::assert_relative_eq;

    #[test]
    fn laguerre_rule_reproduces_moments() {
        // int z^k e^{-z} dz = k!
        let mut fact = 1.0f64;
        for k in 0..=20 {
            if k > 0 {
                fact *= k as f64;
            }
            let got = laguerre_sum(&LAGUERRE_64, |z: f64| z.powi(k as i32));
            assert_relative_eq!(got, fact, max_relative = 1e-11);
        }
        assert_relative_eq!(laguerre_sum(&LAGUERRE_32, |_: f64| 1.0), 1.0, max_relative = 1e-13);
    }

    #[test]
    fn exp_log_moment_trivial_and_anchors() {
        assert_eq!(exp_log_moment(0.0f64).unwrap(), 0.0);
        // e^1 E_1(1), cross-checked against a 30-digit evaluation
        assert_relative_eq!(
            exp_log_moment(1.0f64).unwrap(),
            0.59634736232319407,
            max_relative = 1e-11
        );
        // 6 dB anchor e^{1/a} E_1(1/a), a = 3.9811
        assert_relative_eq!(
            exp_log_moment(3.9811f64).unwrap(),
            1.3377388180703247,
            max_relative = 1e-11
        );
        assert!(exp_log_moment(-0.5f64).is_err());
    }

    #[test]
    fn exp_log_moment_matches_oracle_on_log_grid() {
        // 64 log-spaced gains over [1e-3, 1e3] vs the independent E_1 route
        for k in 0..64 {
            let a = 10f64.powf(-3.0 + 6.0 * k as f64 / 63.0);
            let got = exp_log_moment(a).unwrap();
            let want = exp1_scaled(1.0 / a);
            assert_relative_eq!(got, want, max_relative = 1e-9);
        }
    }

    #[test]
    fn complement_is_stable_for_tiny_gains() {
        // targets from 30-digit quadrature
        assert_relative_eq!(
            exp_log_moment_complement(1e-8f64).unwrap(),
            9.9999998e-17,
            max_relative = 1e-6
        );
        assert_relative_eq!(
            exp_log_moment_complement(1e-3f64).unwrap(),
            9.980059761e-7,
            max_relative = 1e-9
        );
        assert_relative_eq!(
            exp_log_moment_complement(1.0f64).unwrap(),
            0.4036526377,
            max_relative = 1e-9
        );
        // consistency with the direct difference where that is safe
        for &a in &[0.5f64, 2.0, 20.0, 500.0] {
            assert_relative_eq!(
                exp_log_moment_complement(a).unwrap(),
                a - exp_log_moment(a).unwrap(),
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn coherent_capacity_units_and_anchors() {
        assert_eq!(coherent_capacity(0.0f64, LogBase::Bits).unwrap(), 0.0);
        assert_relative_eq!(
            coherent_capacity(1.0f64, LogBase::Bits).unwrap(),
            0.86034738227088595,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            coherent_capacity(3.9811f64, LogBase::Bits).unwrap(),
            1.9299491588347207,
            max_relative = 1e-10
        );
        assert_relative_eq!(
            coherent_capacity(2.0f64, LogBase::Nats).unwrap(),
            coherent_capacity(2.0f64, LogBase::Bits).unwrap() * std::f64::consts::LN_2,
            max_relative = 1e-14
        );
    }

    #[test]
    fn coherent_capacity_concave_increasing() {
        let n = 80;
        let vals: Vec<f64> = (0..n)
            .map(|k| {
                let rho = 0.05 + 0.25 * k as f64;
                coherent_capacity(rho, LogBase::Nats).unwrap()
            })
            .collect();
        for w in vals.windows(2) {
            assert!(w[1] > w[0]);
        }
        for w in vals.windows(3) {
            let second = w[2] - 2.0 * w[1] + w[0];
            assert!(second <= 1e-9, "second difference {second}");
        }
    }

    #[test]
    fn freq_integral_basics() {
        let spec = IntegralSpec::default();
        let one = freq_integral(|_: f64| 1.0, &[], &spec).unwrap();
        assert_relative_eq!(one, 1.0, max_relative = 1e-14);

        // indicator of |f| <= 0.05 with seams at the jumps
        let ind = freq_integral(
            |f: f64| if f.abs() <= 0.05 { 1.0 } else { 0.0 },
            &[-0.05, 0.05],
            &spec,
        )
        .unwrap();
        assert_relative_eq!(ind, 0.1, max_relative = 1e-13);
    }

    #[test]
    fn freq_integral_exact_for_panel_degree_polynomials() {
        let spec = IntegralSpec::default();
        for k in 0..=13u32 {
            let got = freq_integral(|f: f64| f.powi(k as i32), &[], &spec).unwrap();
            let want = if k % 2 == 1 {
                0.0
            } else {
                2.0 * 0.5f64.powi(k as i32 + 1) / (k as f64 + 1.0)
            };
            assert_relative_eq!(got, want, epsilon = 1e-15, max_relative = 1e-13);
        }
    }

    #[test]
    fn freq_integral_rejects_bad_inputs() {
        let spec = IntegralSpec::default();
        assert!(matches!(
            freq_integral(|_: f64| 1.0, &[0.6], &spec),
            Err(Error::FrequencyOutOfRange { .. })
        ));
        let err = freq_integral(
            |f: f64| if f > 0.15 && f < 0.35 { f64::NAN } else { 1.0 },
            &[],
            &spec,
        );
        match err {
            Err(Error::NonFiniteIntegrand { f }) => assert!(f > 0.15 && f < 0.35),
            other => panic!("expected NonFiniteIntegrand, got {other:?}"),
        }
    }

    #[test]
    fn szego_ratio_closed_form_cross_check() {
        // rectangular spectrum: the ratio integral collapses to a closed form
        let rho = 3.9811f64;
        let fd = 0.05f64;
        let l = 10.0f64;
        let sh = 1.0 / (2.0 * fd);
        let spec = IntegralSpec::default();
        let quad = freq_integral(
            |f: f64| {
                let s = if f.abs() <= fd { sh } else { 0.0 };
                ((rho * s + 1.0) / (rho / l * s + 1.0)).ln()
            },
            &[-fd, fd],
            &spec,
        )
        .unwrap();
        let closed = 2.0 * fd * ((rho / (2.0 * fd) + 1.0) / (rho / (2.0 * fd * l) + 1.0)).ln();
        assert_relative_eq!(quad, closed, max_relative = 1e-9);
    }
}
