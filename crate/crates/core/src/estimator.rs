//! Finite-block LMMSE channel estimation and error-correlation analysis.
//!
//! The estimate of the fading vector from observations `y = X h + n` is
//! `h_hat = R_h X^H (X R_h X^H + sigma_n^2 I)^{-1} y`. This inverse-free form
//! is used throughout: symbols with zero power simply drop out of the active
//! observation set, so pilot-only estimation is the special case of a mostly
//! zero power profile. The error correlation
//! `R_e = R_h - R_h X^H (X R_h X^H + sigma_n^2 I)^{-1} X R_h`
//! depends only on the symbol powers, not their phases.
//!
//! On top of the block algebra sit the asymptotic diagnostics:
//!
//! * Wiener interpolation spectra for pilot-only and all-symbol estimation,
//!   whose log ratio integrates to the rate penalty of the joint-processing
//!   bound.
//! * `logdet_rate_gap` — normalized log-determinant difference between two
//!   error correlations, which converges to that integral as the block grows.
//! * `concavity_probe` / `cm_minimality_check` — verify that
//!   `g(Z) = log det(R_h Z / sigma_n^2 + I)` is concave on diagonal power
//!   matrices and that constant-modulus symbols extremize it under the
//!   average power budget.

use num_complex::Complex;

use crate::linalg::{
    cholesky, hermitian_eigen, logdet_hermitian_with_jitter, sqrt_psd, CMatrix, Cholesky,
};
use crate::psd::{CorrelationToeplitz, FadingPsd};
use crate::quadrature::{freq_integral, IntegralSpec};
use crate::real::Real;
use crate::{Error, Result};

// ---------------------------------------------------------------------------
// Power profiles
// ---------------------------------------------------------------------------

/// Per-symbol transmit powers, the diagonal of `Z = X X^H`.
#[derive(Clone, Debug, PartialEq)]
pub struct PowerProfile<T> {
    z: Vec<T>,
}

impl<T: Real> PowerProfile<T> {
    pub fn new(z: Vec<T>) -> Result<Self> {
        if z.is_empty() {
            return Err(Error::InvalidConfig("power profile must be nonempty".into()));
        }
        if z.iter().any(|v| !(*v >= T::zero()) || !v.is_finite()) {
            return Err(Error::InvalidConfig(
                "power profile entries must be finite and nonnegative".into(),
            ));
        }
        Ok(Self { z })
    }

    /// All symbols at the same power.
    pub fn uniform(n: usize, power: T) -> Result<Self> {
        Self::new(vec![power; n])
    }

    /// Power at every `spacing`-th position starting from 0, zero elsewhere.
    pub fn pilot_pattern(n: usize, spacing: u32, power: T) -> Result<Self> {
        let step = spacing as usize;
        if step == 0 {
            return Err(Error::InvalidConfig("pilot spacing must be at least 1".into()));
        }
        let mut z = vec![T::zero(); n];
        for k in (0..n).step_by(step) {
            z[k] = power;
        }
        Self::new(z)
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn values(&self) -> &[T] {
        &self.z
    }

    pub fn mean_power(&self) -> T {
        self.z.iter().copied().sum::<T>() / T::from_usize(self.z.len()).unwrap()
    }

    /// Enforces the average power budget `mean(z) <= sigma_x^2` to 1e-12.
    pub fn validate_budget(&self, sigma_x_sq: T) -> Result<()> {
        let mean = self.mean_power();
        if mean > sigma_x_sq * (T::one() + T::of(1e-12)) + T::of(1e-300) {
            return Err(Error::PowerBudgetExceeded {
                mean: mean.as_f64(),
                budget: sigma_x_sq.as_f64(),
            });
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Interpolation spectra
// ---------------------------------------------------------------------------

/// Transfer function of the Wiener interpolation filter at the pilot rate,
/// `(S_h/L) / (S_h/L + sigma_n^2/sigma_x^2)`, expressed through the average
/// SNR; real-valued in `[0, 1)`.
pub fn wiener_filter_spectrum<T: Real>(
    model: &FadingPsd<T>,
    rho: T,
    spacing: u32,
    f: T,
) -> Result<T> {
    if spacing < 1 || spacing > crate::bounds::max_pilot_spacing(model.f_d()) {
        return Err(Error::NyquistViolation { spacing, f_d: model.f_d().as_f64() });
    }
    let s = model.value(f)? / model.sigma_h_sq();
    let g = rho / T::from_u32(spacing).unwrap() * s;
    Ok(g / (g + T::one()))
}

/// Error spectrum of the pilot-only estimate,
/// `S_h / ((rho/L) S_h/sigma_h^2 + 1)`; integrates to the stationary error
/// variance.
pub fn error_spectrum_pilot<T: Real>(
    model: &FadingPsd<T>,
    rho: T,
    spacing: u32,
    f: T,
) -> Result<T> {
    if spacing < 1 || spacing > crate::bounds::max_pilot_spacing(model.f_d()) {
        return Err(Error::NyquistViolation { spacing, f_d: model.f_d().as_f64() });
    }
    let s = model.value(f)?;
    let g = rho / T::from_u32(spacing).unwrap() * s / model.sigma_h_sq();
    Ok(s / (g + T::one()))
}

/// Error spectrum when every symbol is a known constant-modulus symbol:
/// the pilot-only spectrum at unit spacing, `S_h / (rho S_h/sigma_h^2 + 1)`.
pub fn error_spectrum_joint_cm<T: Real>(model: &FadingPsd<T>, rho: T, f: T) -> Result<T> {
    let s = model.value(f)?;
    let g = rho * s / model.sigma_h_sq();
    Ok(s / (g + T::one()))
}

// ---------------------------------------------------------------------------
// Block LMMSE
// ---------------------------------------------------------------------------

fn check_estimation_inputs<T: Real>(r_h: &CMatrix<T>, sigma_n_sq: T) -> Result<()> {
    if !r_h.is_hermitian(T::of(1e-10)) {
        return Err(Error::NotHermitian);
    }
    if !(sigma_n_sq > T::zero()) || !sigma_n_sq.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "noise variance must be positive, got {sigma_n_sq}"
        )));
    }
    Ok(())
}

/// Active-set system for a set of observed positions with nonzero symbols:
/// `A = X_a R_aa X_a^H + sigma_n^2 I`, factored.
fn factor_active_system<T: Real>(
    r_h: &CMatrix<T>,
    active: &[usize],
    x_active: &[Complex<T>],
    sigma_n_sq: T,
) -> Result<Cholesky<T>> {
    let a = active.len();
    let mut m = CMatrix::from_fn(a, a, |i, j| {
        x_active[i] * r_h.get(active[i], active[j]) * x_active[j].conj()
    });
    m.add_scaled_identity(sigma_n_sq);
    cholesky(&m).map_err(|e| match e {
        Error::NotPositiveDefinite { pivot, value } => Error::NotPositiveDefinite { pivot, value },
        other => other,
    })
}

/// MAP/LMMSE estimate of the fading vector from `y = X h + n`.
///
/// `x` carries the symbol values (zero entries contribute no information and
/// are skipped exactly); the estimate is evaluated at all positions.
pub fn lmmse_estimate<T: Real>(
    r_h: &CMatrix<T>,
    x: &[Complex<T>],
    y: &[Complex<T>],
    sigma_n_sq: T,
) -> Result<Vec<Complex<T>>> {
    let n = r_h.rows();
    if x.len() != n || y.len() != n {
        return Err(Error::DimensionMismatch {
            context: "symbol and observation vectors must match the correlation size",
        });
    }
    check_estimation_inputs(r_h, sigma_n_sq)?;

    let active: Vec<usize> = (0..n).filter(|&k| x[k].norm_sqr() > T::zero()).collect();
    if active.is_empty() {
        // no informative observations: the estimate is the prior mean
        return Ok(vec![Complex::new(T::zero(), T::zero()); n]);
    }
    let x_active: Vec<Complex<T>> = active.iter().map(|&k| x[k]).collect();
    let factor = factor_active_system(r_h, &active, &x_active, sigma_n_sq)?;
    let y_active: Vec<Complex<T>> = active.iter().map(|&k| y[k]).collect();
    let w = factor.solve(&y_active);

    // h_hat = sum_j R[:, a_j] x_j^* w_j
    let mut h_hat = vec![Complex::new(T::zero(), T::zero()); n];
    for (j, &aj) in active.iter().enumerate() {
        let coeff = x_active[j].conj() * w[j];
        for (hi, &rij) in h_hat.iter_mut().zip(r_h.col(aj)) {
            *hi += rij * coeff;
        }
    }
    Ok(h_hat)
}

/// Which estimation setting an error correlation describes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    PilotOnly,
    JointGeneral,
    JointCm,
}

/// Hermitian error correlation of the block LMMSE estimate.
#[derive(Clone, Debug)]
pub struct ErrorCorrelation<T> {
    matrix: CMatrix<T>,
    kind: ErrorKind,
}

impl<T: Real> ErrorCorrelation<T> {
    pub fn matrix(&self) -> &CMatrix<T> {
        &self.matrix
    }

    pub fn kind(&self) -> ErrorKind {
        self.kind
    }

    pub fn len(&self) -> usize {
        self.matrix.rows()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.rows() == 0
    }

    pub fn diagonal(&self) -> Vec<T> {
        self.matrix.diagonal().iter().map(|v| v.re).collect()
    }
}

fn classify_profile<T: Real>(z: &[T]) -> ErrorKind {
    let first = z[0];
    if z.iter().all(|&v| v == first) && first > T::zero() {
        return ErrorKind::JointCm;
    }
    let active: Vec<usize> = (0..z.len()).filter(|&k| z[k] > T::zero()).collect();
    if let Some(&first_idx) = active.first() {
        if first_idx == 0 && active.len() >= 2 {
            let step = active[1];
            let periodic = active.iter().enumerate().all(|(i, &k)| k == i * step);
            let covers = active.last().unwrap() + step > z.len() - 1;
            let equal = active.iter().all(|&k| z[k] == z[0]);
            if periodic && covers && equal {
                return ErrorKind::PilotOnly;
            }
        }
    }
    ErrorKind::JointGeneral
}

/// Error correlation `R_h - R_h X^H (X R_h X^H + sigma_n^2 I)^{-1} X R_h`
/// for a power profile (phases are immaterial).
pub fn error_correlation<T: Real>(
    r_h: &CMatrix<T>,
    profile: &PowerProfile<T>,
    sigma_n_sq: T,
) -> Result<ErrorCorrelation<T>> {
    let n = r_h.rows();
    if profile.len() != n {
        return Err(Error::DimensionMismatch {
            context: "power profile must match the correlation size",
        });
    }
    check_estimation_inputs(r_h, sigma_n_sq)?;
    let kind = classify_profile(profile.values());

    let active: Vec<usize> = (0..n)
        .filter(|&k| profile.values()[k] > T::zero())
        .collect();
    let mut out = r_h.clone();
    if active.is_empty() {
        return Ok(ErrorCorrelation { matrix: out, kind });
    }
    let x_active: Vec<Complex<T>> = active
        .iter()
        .map(|&k| Complex::new(profile.values()[k].sqrt(), T::zero()))
        .collect();
    let factor = factor_active_system(r_h, &active, &x_active, sigma_n_sq)?;

    // B[j, :] = x_j R[a_j, :]; R_e = R_h - (L^{-1} B)^H (L^{-1} B)
    let a = active.len();
    let b = CMatrix::from_fn(a, n, |j, i| x_active[j] * r_h.get(active[j], i));
    let m = factor.solve_lower_multi(&b);
    out.sub_gram_in_place(&m);
    Ok(ErrorCorrelation { matrix: out, kind })
}

/// Result of a log-determinant rate-gap evaluation.
#[derive(Clone, Copy, Debug)]
pub struct LogdetGap<T> {
    /// `(log det A - log det B) / n` in nats per symbol.
    pub nats_per_symbol: T,
    /// Whether the diagonal jitter safeguard fired on either factorization.
    pub jitter_a: bool,
    pub jitter_b: bool,
}

/// Normalized log-determinant gap between two error correlations, via
/// Hermitian factorization with a recorded jitter fallback.
///
/// Band-limited fading makes both matrices numerically rank deficient at
/// large blocks; the shared floor cancels in the difference, so the gap
/// remains meaningful where either log-determinant alone would not be.
pub fn logdet_rate_gap<T: Real>(
    a: &ErrorCorrelation<T>,
    b: &ErrorCorrelation<T>,
) -> Result<LogdetGap<T>> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch {
            context: "rate gap needs error correlations of equal size",
        });
    }
    let n = T::from_usize(a.len()).unwrap();
    let (la, ja) = logdet_hermitian_with_jitter(a.matrix())?;
    let (lb, jb) = logdet_hermitian_with_jitter(b.matrix())?;
    Ok(LogdetGap {
        nats_per_symbol: (la - lb) / n,
        jitter_a: ja,
        jitter_b: jb,
    })
}

/// The same pilot-vs-all-symbol gap through a determinant identity that
/// avoids the rank-deficient error matrices entirely.
///
/// Both error determinants factor as `det R_h * det(sigma_n^2 I) / det A`
/// with `A` the active-set observation Gram matrix; `det R_h` cancels in the
/// gap, leaving only well-conditioned factors:
/// `gap = [ld(sx^2 R + sn^2 I) - ld(sx^2 R_PP + sn^2 I) - (n-p) ln sn^2] / n`.
pub fn pilot_joint_logdet_gap<T: Real>(
    corr: &CorrelationToeplitz<T>,
    spacing: u32,
    sigma_x_sq: T,
    sigma_n_sq: T,
) -> Result<T> {
    if spacing < 1 {
        return Err(Error::InvalidConfig("pilot spacing must be at least 1".into()));
    }
    if !(sigma_n_sq > T::zero()) {
        return Err(Error::InvalidConfig(format!(
            "noise variance must be positive, got {sigma_n_sq}"
        )));
    }
    let n = corr.len();
    let pilots: Vec<usize> = (0..n).step_by(spacing as usize).collect();
    let p = pilots.len();
    let r = corr.first_row();
    let entry = |i: usize, j: usize| -> Complex<T> {
        if i >= j {
            r[i - j].conj()
        } else {
            r[j - i]
        }
    };

    let mut full = CMatrix::from_fn(n, n, |i, j| entry(i, j) * sigma_x_sq);
    full.add_scaled_identity(sigma_n_sq);
    let ld_full = cholesky(&full)?.logdet();

    let mut sub = CMatrix::from_fn(p, p, |i, j| entry(pilots[i], pilots[j]) * sigma_x_sq);
    sub.add_scaled_identity(sigma_n_sq);
    let ld_sub = cholesky(&sub)?.logdet();

    let nf = T::from_usize(n).unwrap();
    let rest = T::from_usize(n - p).unwrap();
    Ok((ld_full - ld_sub - rest * sigma_n_sq.ln()) / nf)
}

/// Asymptotic target of the pilot-vs-all-symbol gap: the band integral of the
/// log ratio of the two error spectra.
pub fn szego_gap_target<T: Real>(model: &FadingPsd<T>, rho: T, spacing: u32) -> Result<T> {
    let l = T::from_u32(spacing).unwrap();
    let sig_h = model.sigma_h_sq();
    let spec = IntegralSpec::default();
    freq_integral(
        |f| {
            let s = model.value_unchecked(f) / sig_h;
            ((rho * s + T::one()) / (rho / l * s + T::one())).ln()
        },
        &model.breakpoints(),
        &spec,
    )
}

// ---------------------------------------------------------------------------
// Concavity and constant-modulus checks
// ---------------------------------------------------------------------------

/// `g(Z) = log det(R_h Z / sigma_n^2 + I)`, evaluated through the congruent
/// Hermitian form `sqrt(Z) R_h sqrt(Z) / sigma_n^2 + I` (same determinant,
/// eigenvalues >= 1, so the factorization never struggles).
pub fn logdet_gain<T: Real>(
    r_h: &CMatrix<T>,
    profile: &PowerProfile<T>,
    sigma_n_sq: T,
) -> Result<T> {
    let n = r_h.rows();
    if profile.len() != n {
        return Err(Error::DimensionMismatch {
            context: "power profile must match the correlation size",
        });
    }
    let s: Vec<T> = profile.values().iter().map(|&v| v.sqrt()).collect();
    let mut m = CMatrix::from_fn(n, n, |i, j| {
        r_h.get(i, j) * (s[i] * s[j] / sigma_n_sq)
    });
    m.add_scaled_identity(T::one());
    Ok(cholesky(&m)?.logdet())
}

/// One Jensen check along the segment between two power profiles.
#[derive(Clone, Copy, Debug)]
pub struct JensenCheck<T> {
    pub theta: T,
    /// `g(theta Z1 + (1-theta) Z2)`
    pub combined: T,
    /// `theta g(Z1) + (1-theta) g(Z2)`
    pub chord: T,
    /// `combined - chord`; nonnegative up to rounding for a concave `g`.
    pub margin: T,
    /// `d^2 g / d theta^2` from the line eigenvalues; nonpositive.
    pub second_derivative: T,
}

/// Report of a concavity probe along one segment of power profiles.
#[derive(Clone, Debug)]
pub struct ConcavityReport<T> {
    pub checks: Vec<JensenCheck<T>>,
    /// Worst (smallest) Jensen margin across the requested points.
    pub min_margin: T,
    /// Largest second derivative (most positive; expected <= 0).
    pub max_second_derivative: T,
    /// Worst relative disagreement between the direct log-determinant and the
    /// line-eigenvalue expansion `g(0) + sum ln(1 + theta lambda_k)`.
    pub eig_identity_rel_err: T,
}

/// Verifies concavity of `g` along the segment `theta Z1 + (1-theta) Z2` and
/// evaluates the line curvature `-sum lambda_k^2/(1+theta lambda_k)^2` from
/// the eigenvalues of the congruent direction matrix.
pub fn concavity_probe<T: Real>(
    r_h: &CMatrix<T>,
    z1: &PowerProfile<T>,
    z2: &PowerProfile<T>,
    thetas: &[T],
    sigma_n_sq: T,
) -> Result<ConcavityReport<T>> {
    let n = r_h.rows();
    if z1.len() != n || z2.len() != n {
        return Err(Error::DimensionMismatch {
            context: "probe profiles must match the correlation size",
        });
    }
    check_estimation_inputs(r_h, sigma_n_sq)?;
    if thetas.iter().any(|t| !(*t >= T::zero() && *t <= T::one())) {
        return Err(Error::Domain("probe weights must lie in [0, 1]".into()));
    }

    // line eigenvalues: B = S Z2 S / sn^2 + I, C = S (Z1 - Z2) S / sn^2,
    // lambda = eig(L^{-1} C L^{-H}) with B = L L^H; then
    // g(theta) = g(0) + sum ln(1 + theta lambda_k).
    let s = sqrt_psd(r_h)?;
    let mut b = CMatrix::from_fn(n, n, |i, j| {
        let mut acc = Complex::new(T::zero(), T::zero());
        for k in 0..n {
            acc += s.get(i, k) * Complex::new(z2.values()[k], T::zero()) * s.get(k, j);
        }
        acc / sigma_n_sq
    });
    b.add_scaled_identity(T::one());
    let c = CMatrix::from_fn(n, n, |i, j| {
        let mut acc = Complex::new(T::zero(), T::zero());
        for k in 0..n {
            let d = z1.values()[k] - z2.values()[k];
            acc += s.get(i, k) * Complex::new(d, T::zero()) * s.get(k, j);
        }
        acc / sigma_n_sq
    });
    let bf = cholesky(&b)?;
    let w1 = bf.solve_lower_multi(&c);
    let w1h = CMatrix::from_fn(n, n, |i, j| w1.get(j, i).conj());
    let w2 = bf.solve_lower_multi(&w1h);
    let mut w = CMatrix::from_fn(n, n, |i, j| w2.get(j, i).conj());
    // clean rounding asymmetry before the eigensolver
    let wh = CMatrix::from_fn(n, n, |i, j| w.get(j, i).conj());
    for j in 0..n {
        for i in 0..n {
            let avg = (w.get(i, j) + wh.get(i, j)) * Complex::new(T::of(0.5), T::zero());
            w.set(i, j, avg);
        }
    }
    let (lambda, _) = hermitian_eigen(&w, false)?;

    let g1 = logdet_gain(r_h, z1, sigma_n_sq)?;
    let g0 = bf.logdet(); // = g(Z2) by det(I + AB) = det(I + BA)

    let mut checks = Vec::with_capacity(thetas.len());
    let mut min_margin = T::infinity();
    let mut max_second = T::neg_infinity();
    let mut worst_rel = T::zero();
    for &theta in thetas {
        let mix: Vec<T> = z1
            .values()
            .iter()
            .zip(z2.values())
            .map(|(&a, &b)| theta * a + (T::one() - theta) * b)
            .collect();
        let combined = logdet_gain(r_h, &PowerProfile::new(mix)?, sigma_n_sq)?;
        let chord = theta * g1 + (T::one() - theta) * g0;
        let margin = combined - chord;

        let mut expansion = g0;
        let mut second = T::zero();
        for &l in &lambda {
            expansion += (theta * l).ln_1p();
            let d = T::one() + theta * l;
            second -= l * l / (d * d);
        }
        let rel = (combined - expansion).abs() / combined.abs().max(T::one());
        worst_rel = worst_rel.max(rel);
        min_margin = min_margin.min(margin);
        max_second = max_second.max(second);
        checks.push(JensenCheck {
            theta,
            combined,
            chord,
            margin,
            second_derivative: second,
        });
    }
    Ok(ConcavityReport {
        checks,
        min_margin,
        max_second_derivative: max_second,
        eig_identity_rel_err: worst_rel,
    })
}

/// Report of the constant-modulus extremality check over sampled profiles.
#[derive(Clone, Debug)]
pub struct CmReport<T> {
    pub sample_count: usize,
    /// Sample mean and standard error of `g` over the profiles.
    pub mean_g: T,
    pub se_g: T,
    /// `g` at the supplied distribution mean profile.
    pub g_mean_profile: T,
    /// `g` at the full-budget uniform profile.
    pub g_cm: T,
    /// `g(E[Z]) - mean_i g(Z_i)`; nonnegative in expectation by concavity.
    pub jensen_margin: T,
    /// `g(budget I) - g(E[Z])`; nonnegative when the mean profile respects
    /// the budget entrywise.
    pub monotonicity_margin: T,
    /// Per-symbol margin by which the uniform-power error log-determinant
    /// sits below the profile-averaged one: `(g_cm - mean_g)/n`.
    pub ldet_margin_per_symbol: T,
}

/// Verifies the finite-block Jensen and monotonicity inequalities behind the
/// constant-modulus extremality of the joint estimation error.
///
/// `mean_profile` is the distribution mean of the sampled profiles (known
/// analytically for the generating distribution); it must satisfy the power
/// budget. Individual samples only need nonnegative entries — a sampled
/// profile may exceed the budget even when its distribution honors it.
pub fn cm_minimality_check<T: Real>(
    r_h: &CMatrix<T>,
    profiles: &[PowerProfile<T>],
    mean_profile: &PowerProfile<T>,
    sigma_x_sq: T,
    sigma_n_sq: T,
) -> Result<CmReport<T>> {
    let n = r_h.rows();
    if profiles.is_empty() {
        return Err(Error::InvalidConfig("need at least one sampled profile".into()));
    }
    if mean_profile.len() != n || profiles.iter().any(|p| p.len() != n) {
        return Err(Error::DimensionMismatch {
            context: "profiles must match the correlation size",
        });
    }
    mean_profile.validate_budget(sigma_x_sq)?;
    if mean_profile
        .values()
        .iter()
        .any(|&v| v > sigma_x_sq * (T::one() + T::of(1e-12)))
    {
        return Err(Error::PowerBudgetExceeded {
            mean: mean_profile
                .values()
                .iter()
                .fold(T::zero(), |m, &v| m.max(v))
                .as_f64(),
            budget: sigma_x_sq.as_f64(),
        });
    }

    let gs: Vec<T> = profiles
        .iter()
        .map(|p| logdet_gain(r_h, p, sigma_n_sq))
        .collect::<Result<_>>()?;
    let count = T::from_usize(gs.len()).unwrap();
    let mean_g = gs.iter().copied().sum::<T>() / count;
    let var = gs
        .iter()
        .map(|&g| (g - mean_g) * (g - mean_g))
        .sum::<T>()
        / count.max(T::one());
    let se_g = (var / count).sqrt();

    let g_mean_profile = logdet_gain(r_h, mean_profile, sigma_n_sq)?;
    let cm = PowerProfile::uniform(n, sigma_x_sq)?;
    let g_cm = logdet_gain(r_h, &cm, sigma_n_sq)?;

    Ok(CmReport {
        sample_count: gs.len(),
        mean_g,
        se_g,
        g_mean_profile,
        g_cm,
        jensen_margin: g_mean_profile - mean_g,
        monotonicity_margin: g_cm - g_mean_profile,
        ldet_margin_per_symbol: (g_cm - mean_g) / T::from_usize(n).unwrap(),
    })
}
