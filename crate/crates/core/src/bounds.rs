//! Achievable-rate bounds for pilot-aided transmission.
//!
//! Every `L`-th symbol is a known pilot with power `sigma_x^2`; the receiver
//! interpolates the fading from the pilot observations. The bounds split into
//! three families:
//!
//! * separate processing (`sep_lower` / `sep_upper`) — coherent detection
//!   against the pilot-based estimate, treating the residual estimation error
//!   as white noise. Both bounds are driven by the stationary interpolation
//!   error variance `pilot_error_variance`.
//! * joint processing (`joint_lower`, `joint_lower_rect`) — the decoder also
//!   exploits the information buried in the temporal correlation of the
//!   estimation error. The penalty term is the band integral of the log ratio
//!   of the pilot-only and all-symbol error spectra.
//! * pilot-free references (`iid_pg_lower` / `iid_pg_upper`, `coherent`) —
//!   i.i.d. proper-Gaussian input bounds for the flat spectrum and the
//!   perfect-knowledge ceiling.
//!
//! All math runs in nats; [`RateBound`] converts once to bits per channel use
//! at construction.

use crate::psd::FadingPsd;
use crate::quadrature::{
    exp_log_moment, exp_log_moment_complement, freq_integral, IntegralSpec,
};
use crate::real::Real;
use crate::{Error, Result};

/// Largest pilot spacing that still samples a Doppler bandwidth `f_d` at the
/// Nyquist rate, `floor(1 / (2 f_d))`; spacings equal to the bound sample the
/// fading exactly at Nyquist rate and are admitted.
///
/// The floor is taken with a small forward nudge so that parameter sets where
/// `1/(2 f_d)` is an exact integer (e.g. `f_d = 0.05`) are not knocked down a
/// step by representation error.
pub fn max_pilot_spacing<T: Real>(f_d: T) -> u32 {
    let raw = T::one() / (T::of(2.0) * f_d) + T::of(1e-9);
    raw.floor().to_u32().unwrap_or(u32::MAX).max(1)
}

fn check_nyquist<T: Real>(spacing: u32, f_d: T) -> Result<()> {
    if spacing < 1 || spacing > max_pilot_spacing(f_d) {
        return Err(Error::NyquistViolation { spacing, f_d: f_d.as_f64() });
    }
    Ok(())
}

/// Scalar channel and pilot parameters tied to a spectrum model.
///
/// Maintains `rho = sigma_x^2 sigma_h^2 / sigma_n^2` and the Nyquist pilot
/// constraint as construction invariants.
#[derive(Clone, Debug)]
pub struct ChannelConfig<T> {
    psd: FadingPsd<T>,
    rho: T,
    sigma_x_sq: T,
    sigma_n_sq: T,
    spacing: u32,
}

impl<T: Real> ChannelConfig<T> {
    /// Builds a config from explicit powers; the SNR is derived.
    pub fn new(psd: FadingPsd<T>, sigma_x_sq: T, sigma_n_sq: T, spacing: u32) -> Result<Self> {
        if !(sigma_x_sq >= T::zero()) || !sigma_x_sq.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "symbol power must be nonnegative, got {sigma_x_sq}"
            )));
        }
        if !(sigma_n_sq > T::zero()) || !sigma_n_sq.is_finite() {
            return Err(Error::InvalidConfig(format!(
                "noise variance must be positive, got {sigma_n_sq}"
            )));
        }
        check_nyquist(spacing, psd.f_d())?;
        let rho = sigma_x_sq * psd.sigma_h_sq() / sigma_n_sq;
        Ok(Self { psd, rho, sigma_x_sq, sigma_n_sq, spacing })
    }

    /// Builds a config from a target linear SNR with unit noise variance.
    pub fn from_snr(psd: FadingPsd<T>, rho: T, spacing: u32) -> Result<Self> {
        if !(rho >= T::zero()) || !rho.is_finite() {
            return Err(Error::InvalidConfig(format!("SNR must be nonnegative, got {rho}")));
        }
        let sigma_n_sq = T::one();
        let sigma_x_sq = rho * sigma_n_sq / psd.sigma_h_sq();
        Self::new(psd, sigma_x_sq, sigma_n_sq, spacing)
    }

    /// Verifies the stored SNR against the power ratio to 1e-12 relative.
    pub fn validate(&self) -> Result<()> {
        let derived = self.sigma_x_sq * self.psd.sigma_h_sq() / self.sigma_n_sq;
        let scale = self.rho.abs().max(T::of(1e-300));
        if (derived - self.rho).abs() > T::of(1e-12) * scale {
            return Err(Error::InvalidConfig(format!(
                "SNR {} inconsistent with sigma_x^2 sigma_h^2 / sigma_n^2 = {derived}",
                self.rho
            )));
        }
        check_nyquist(self.spacing, self.psd.f_d())
    }

    /// Same channel with a different pilot spacing.
    pub fn with_spacing(&self, spacing: u32) -> Result<Self> {
        check_nyquist(spacing, self.psd.f_d())?;
        let mut c = self.clone();
        c.spacing = spacing;
        Ok(c)
    }

    pub fn psd(&self) -> &FadingPsd<T> {
        &self.psd
    }

    pub fn rho(&self) -> T {
        self.rho
    }

    pub fn sigma_x_sq(&self) -> T {
        self.sigma_x_sq
    }

    pub fn sigma_n_sq(&self) -> T {
        self.sigma_n_sq
    }

    pub fn spacing(&self) -> u32 {
        self.spacing
    }
}

/// Which bound a [`RateBound`] value carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BoundKind {
    SepLower,
    SepUpper,
    JointLower,
    IidPgLower,
    IidPgUpper,
    Coherent,
}

impl BoundKind {
    pub const ALL: [BoundKind; 6] = [
        BoundKind::SepLower,
        BoundKind::SepUpper,
        BoundKind::JointLower,
        BoundKind::IidPgLower,
        BoundKind::IidPgUpper,
        BoundKind::Coherent,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            BoundKind::SepLower => "sep-lower",
            BoundKind::SepUpper => "sep-upper",
            BoundKind::JointLower => "joint-lower",
            BoundKind::IidPgLower => "iid-pg-lower",
            BoundKind::IidPgUpper => "iid-pg-upper",
            BoundKind::Coherent => "coherent",
        }
    }
}

impl std::str::FromStr for BoundKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| format!("unknown metric `{s}`"))
    }
}

/// A named bound value in bits per channel use, echoing the parameters it was
/// evaluated at. `spacing` is `None` for the pilot-free bounds.
#[derive(Clone, Copy, Debug)]
pub struct RateBound<T> {
    pub kind: BoundKind,
    bits: T,
    pub rho: T,
    pub f_d: T,
    pub spacing: Option<u32>,
}

impl<T: Real> RateBound<T> {
    fn from_nats(kind: BoundKind, nats: T, rho: T, f_d: T, spacing: Option<u32>) -> Self {
        Self { kind, bits: nats / T::LN_2(), rho, f_d, spacing }
    }

    pub fn bits(&self) -> T {
        self.bits
    }

    pub fn nats(&self) -> T {
        self.bits * T::LN_2()
    }
}

/// Stationary interpolation error variance of the pilot-based estimate,
/// `int S_h / ((rho/L) S_h/sigma_h^2 + 1) df`; lies in `(0, sigma_h^2]`.
pub fn pilot_error_variance<T: Real>(cfg: &ChannelConfig<T>) -> Result<T> {
    let psd = cfg.psd();
    let sig_h = psd.sigma_h_sq();
    let gain = cfg.rho() / T::from_u32(cfg.spacing()).unwrap() / sig_h;
    let spec = IntegralSpec::default();
    freq_integral(
        |f| {
            let s = psd.value_unchecked(f);
            s / (gain * s + T::one())
        },
        &psd.breakpoints(),
        &spec,
    )
}

/// Separate-processing lower bound from an explicit normalized error
/// variance `sigma_e^2 / sigma_h^2`; nats per channel use.
///
/// `((L-1)/L) E[ln(1 + rho_eff z)]` with the effective SNR
/// `rho (1 - e) / (1 + rho e)`: pilots cost the pre-log factor, the residual
/// estimation error costs SNR.
pub fn sep_lower_nats_from_error<T: Real>(rho: T, err_norm: T, spacing: u32) -> Result<T> {
    let l = T::from_u32(spacing).unwrap();
    let prelog = (l - T::one()) / l;
    let rho_eff = rho * (T::one() - err_norm) / (T::one() + rho * err_norm);
    Ok(prelog * exp_log_moment(rho_eff)?)
}

/// Separate-processing upper bound from an explicit normalized error
/// variance; nats per channel use.
///
/// Adds the Jensen gap `ln(1 + rho e) - E[ln(1 + rho e z)]` (nonnegative) that
/// accounts for the effective noise being non-Gaussian.
pub fn sep_upper_nats_from_error<T: Real>(rho: T, err_norm: T, spacing: u32) -> Result<T> {
    let l = T::from_u32(spacing).unwrap();
    let prelog = (l - T::one()) / l;
    let re = rho * err_norm;
    let correction = re.ln_1p() - exp_log_moment(re)?;
    Ok(sep_lower_nats_from_error(rho, err_norm, spacing)? + prelog * correction)
}

/// Lower bound on the achievable rate with separate processing of pilot and
/// data symbols.
pub fn sep_lower<T: Real>(cfg: &ChannelConfig<T>) -> Result<RateBound<T>> {
    let err_norm = pilot_error_variance(cfg)? / cfg.psd().sigma_h_sq();
    let nats = sep_lower_nats_from_error(cfg.rho(), err_norm, cfg.spacing())?;
    Ok(RateBound::from_nats(
        BoundKind::SepLower,
        nats,
        cfg.rho(),
        cfg.psd().f_d(),
        Some(cfg.spacing()),
    ))
}

/// Upper bound on the achievable rate with separate processing.
pub fn sep_upper<T: Real>(cfg: &ChannelConfig<T>) -> Result<RateBound<T>> {
    let err_norm = pilot_error_variance(cfg)? / cfg.psd().sigma_h_sq();
    let nats = sep_upper_nats_from_error(cfg.rho(), err_norm, cfg.spacing())?;
    Ok(RateBound::from_nats(
        BoundKind::SepUpper,
        nats,
        cfg.rho(),
        cfg.psd().f_d(),
        Some(cfg.spacing()),
    ))
}

/// Lower bound on the achievable rate with joint processing of pilot and
/// data symbols, for a general spectrum:
/// `((L-1)/L) C_perf(rho) - int ln((rho S/sigma_h^2 + 1)/((rho/L) S/sigma_h^2 + 1)) df`.
///
/// Not clamped at zero; at high Doppler the bound goes slack and can turn
/// negative.
pub fn joint_lower<T: Real>(cfg: &ChannelConfig<T>) -> Result<RateBound<T>> {
    let psd = cfg.psd();
    let l = T::from_u32(cfg.spacing()).unwrap();
    let rho = cfg.rho();
    let sig_h = psd.sigma_h_sq();
    let prelog = (l - T::one()) / l;
    let spec = IntegralSpec::default();
    let penalty = freq_integral(
        |f| {
            let s = psd.value_unchecked(f) / sig_h;
            ((rho * s + T::one()) / (rho / l * s + T::one())).ln()
        },
        &psd.breakpoints(),
        &spec,
    )?;
    let nats = prelog * exp_log_moment(rho)? - penalty;
    Ok(RateBound::from_nats(
        BoundKind::JointLower,
        nats,
        rho,
        psd.f_d(),
        Some(cfg.spacing()),
    ))
}

/// Joint-processing lower bound specialized to the rectangular spectrum:
/// `((L-1)/L) C_perf(rho) - 2 f_d ln((rho/(2 f_d) + 1)/(rho/(2 f_d L) + 1))`.
pub fn joint_lower_rect<T: Real>(rho: T, f_d: T, spacing: u32) -> Result<RateBound<T>> {
    if !(f_d > T::zero() && f_d < T::of(0.5)) {
        return Err(Error::InvalidConfig(format!(
            "maximum Doppler shift must lie in (0, 0.5), got {f_d}"
        )));
    }
    if !(rho >= T::zero()) || !rho.is_finite() {
        return Err(Error::InvalidConfig(format!("SNR must be nonnegative, got {rho}")));
    }
    check_nyquist(spacing, f_d)?;
    let l = T::from_u32(spacing).unwrap();
    let two_fd = T::of(2.0) * f_d;
    let prelog = (l - T::one()) / l;
    let penalty = two_fd * ((rho / two_fd + T::one()) / (rho / (two_fd * l) + T::one())).ln();
    let nats = prelog * exp_log_moment(rho)? - penalty;
    Ok(RateBound::from_nats(BoundKind::JointLower, nats, rho, f_d, Some(spacing)))
}

/// Optimal pilot spacing for the joint-processing lower bound.
#[derive(Clone, Copy, Debug)]
pub struct PilotSpacing<T> {
    /// Integer maximizer: the largest Nyquist-admissible spacing.
    pub integer: u32,
    /// Continuous stationary point of the rectangular-spectrum bound.
    pub continuous: T,
    /// `C_perf(rho) rho / (rho - C_perf(rho))` in nats; always exceeds 1, so
    /// the stationary point lies beyond the admissible range.
    pub factor: T,
}

/// Spacing that maximizes the joint-processing lower bound for a rectangular
/// spectrum: the bound increases in `L` up to the (inadmissible) continuous
/// stationary point, so the integer maximizer is `floor(1/(2 f_d))`.
pub fn optimal_pilot_spacing<T: Real>(rho: T, f_d: T) -> Result<PilotSpacing<T>> {
    if !(rho > T::zero()) || !rho.is_finite() {
        return Err(Error::Domain(format!(
            "optimal spacing needs a positive SNR, got {rho}"
        )));
    }
    if !(f_d > T::zero() && f_d < T::of(0.5)) {
        return Err(Error::InvalidConfig(format!(
            "maximum Doppler shift must lie in (0, 0.5), got {f_d}"
        )));
    }
    let cap = exp_log_moment(rho)?;
    // rho - C computed by its own quadrature; the plain difference cancels
    // catastrophically at small SNR
    let denom = exp_log_moment_complement(rho)?;
    let factor = cap * rho / denom;
    if !(factor > T::one()) {
        return Err(Error::Domain(format!(
            "stationary-point factor {factor} did not exceed 1"
        )));
    }
    let nyquist = T::one() / (T::of(2.0) * f_d);
    Ok(PilotSpacing {
        integer: max_pilot_spacing(f_d),
        continuous: nyquist * factor,
        factor,
    })
}

/// Spacing that maximizes the separate-processing lower bound, by exhaustive
/// search over the Nyquist-admissible integers; ties break toward the
/// smaller spacing.
pub fn sep_optimal_spacing<T: Real>(psd: &FadingPsd<T>, rho: T) -> Result<u32> {
    let l_max = max_pilot_spacing(psd.f_d());
    let mut best = (1u32, T::neg_infinity());
    for l in 1..=l_max {
        let cfg = ChannelConfig::from_snr(psd.clone(), rho, l)?;
        let err_norm = pilot_error_variance(&cfg)? / psd.sigma_h_sq();
        let nats = sep_lower_nats_from_error(rho, err_norm, l)?;
        if nats > best.1 {
            best = (l, nats);
        }
    }
    Ok(best.0)
}

/// Lower bound on the achievable rate with i.i.d. zero-mean proper Gaussian
/// inputs and no pilots, flat spectrum: clamped at zero.
pub fn iid_pg_lower<T: Real>(rho: T, f_d: T) -> Result<RateBound<T>> {
    if !(f_d > T::zero() && f_d < T::of(0.5)) {
        return Err(Error::InvalidConfig(format!(
            "maximum Doppler shift must lie in (0, 0.5), got {f_d}"
        )));
    }
    let two_fd = T::of(2.0) * f_d;
    let nats = (exp_log_moment(rho)? - two_fd * (rho / two_fd).ln_1p()).max(T::zero());
    Ok(RateBound::from_nats(BoundKind::IidPgLower, nats, rho, f_d, None))
}

/// Upper bound on the achievable rate with i.i.d. zero-mean proper Gaussian
/// inputs, flat spectrum: the smaller of the spectral expression and the
/// coherent ceiling.
pub fn iid_pg_upper<T: Real>(rho: T, f_d: T) -> Result<RateBound<T>> {
    if !(f_d > T::zero() && f_d < T::of(0.5)) {
        return Err(Error::InvalidConfig(format!(
            "maximum Doppler shift must lie in (0, 0.5), got {f_d}"
        )));
    }
    let two_fd = T::of(2.0) * f_d;
    let branch = rho.ln_1p() - two_fd * exp_log_moment(rho / two_fd)?;
    let nats = branch.min(exp_log_moment(rho)?);
    Ok(RateBound::from_nats(BoundKind::IidPgUpper, nats, rho, f_d, None))
}

/// Perfect-knowledge ceiling as a [`RateBound`].
pub fn coherent<T: Real>(rho: T, f_d: T) -> Result<RateBound<T>> {
    Ok(RateBound::from_nats(
        BoundKind::Coherent,
        exp_log_moment(rho)?,
        rho,
        f_d,
        None,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{coherent_capacity, LogBase};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const RHO_6DB: f64 = 3.9811;

    fn rect_cfg(rho: f64, f_d: f64, l: u32) -> ChannelConfig<f64> {
        let psd = FadingPsd::rectangular(f_d, 1.0).unwrap();
        ChannelConfig::from_snr(psd, rho, l).unwrap()
    }

    #[test]
    fn nyquist_edge_cases() {
        assert_eq!(max_pilot_spacing(0.05f64), 10);
        assert_eq!(max_pilot_spacing(0.013f64), 38);
        assert_eq!(max_pilot_spacing(0.25f64), 2);
        assert_eq!(max_pilot_spacing(0.499f64), 1);
        // spacing at exactly the Nyquist bound is admitted
        assert!(rect_cfg(1.0, 0.05, 10).validate().is_ok());
        assert!(ChannelConfig::from_snr(FadingPsd::rectangular(0.05f64, 1.0).unwrap(), 1.0, 11)
            .is_err());
    }

    #[test]
    fn config_snr_consistency() {
        let psd = FadingPsd::rectangular(0.05f64, 2.0).unwrap();
        let cfg = ChannelConfig::new(psd, 3.0, 1.5, 4).unwrap();
        assert_relative_eq!(cfg.rho(), 4.0);
        cfg.validate().unwrap();
    }

    #[test]
    fn pilot_error_variance_rect_closed_form() {
        // sigma_h^2 / (1 + rho/(2 f_d L)) over a parameter grid
        for &rho in &[1.0f64, RHO_6DB, 15.8489] {
            for &fd in &[0.01, 0.05, 0.1] {
                for &l in &[1u32, 4, 8] {
                    if l > max_pilot_spacing(fd) {
                        continue;
                    }
                    let cfg = rect_cfg(rho, fd, l);
                    let got = pilot_error_variance(&cfg).unwrap();
                    let want = 1.0 / (1.0 + rho / (2.0 * fd * l as f64));
                    assert_relative_eq!(got, want, max_relative = 1e-9);
                }
            }
        }
        // frozen anchor for the 6 dB example configuration
        let got = pilot_error_variance(&rect_cfg(RHO_6DB, 0.05, 8)).unwrap();
        assert_relative_eq!(got, 0.16732551086570036, max_relative = 1e-9);
    }

    #[test]
    fn pilot_error_variance_zero_snr_is_prior_variance() {
        let cfg = rect_cfg(0.0, 0.05, 8);
        assert_relative_eq!(pilot_error_variance(&cfg).unwrap(), 1.0, max_relative = 1e-10);
        let psd = FadingPsd::raised_cosine(0.1f64, 2.5, 0.5).unwrap();
        let cfg = ChannelConfig::from_snr(psd, 0.0, 4).unwrap();
        assert_relative_eq!(pilot_error_variance(&cfg).unwrap(), 2.5, max_relative = 1e-10);
    }

    #[test]
    fn sep_lower_perfect_estimation_limit() {
        // zero error variance: ((L-1)/L) C_perf exactly
        let nats = sep_lower_nats_from_error(RHO_6DB, 0.0, 8).unwrap();
        let want = 7.0 / 8.0 * coherent_capacity(RHO_6DB, LogBase::Nats).unwrap();
        assert_relative_eq!(nats, want, max_relative = 1e-12);
        // and the upper bound collapses onto it
        let up = sep_upper_nats_from_error(RHO_6DB, 0.0, 8).unwrap();
        assert_relative_eq!(up, want, max_relative = 1e-12);
    }

    #[test]
    fn sep_bounds_anchor_values() {
        // frozen from the closed-form chain evaluated at 30 digits
        let cfg = rect_cfg(RHO_6DB, 0.05, 8);
        let lb = sep_lower(&cfg).unwrap();
        assert_relative_eq!(lb.bits(), 1.1615045525082503, max_relative = 1e-9);
        let ub = sep_upper(&cfg).unwrap();
        assert_relative_eq!(ub.bits(), 1.2404167346375253, max_relative = 1e-9);
        assert!(ub.bits() >= lb.bits());
        assert_eq!(lb.spacing, Some(8));
    }

    #[test]
    fn sep_bounds_vanish_at_zero_snr() {
        let cfg = rect_cfg(0.0, 0.05, 8);
        assert_eq!(sep_lower(&cfg).unwrap().bits(), 0.0);
        assert_eq!(sep_upper(&cfg).unwrap().bits(), 0.0);
    }

    #[test]
    fn joint_lower_rect_anchor_and_degenerate_spacing() {
        let b = joint_lower_rect(RHO_6DB, 0.05, 10).unwrap();
        assert_relative_eq!(b.bits(), 1.4335120647637881, max_relative = 1e-9);
        // all-pilot spacing: zero pre-log and unit log ratio
        let b1 = joint_lower_rect(RHO_6DB, 0.05, 1).unwrap();
        assert_eq!(b1.bits(), 0.0);
        assert_eq!(joint_lower(&rect_cfg(RHO_6DB, 0.05, 1)).unwrap().bits(), 0.0);
        assert_eq!(joint_lower_rect(0.0, 0.05, 8).unwrap().bits(), 0.0);
        assert!(joint_lower_rect(RHO_6DB, 0.05, 11).is_err());
    }

    #[test]
    fn joint_lower_general_matches_rect_closed_form() {
        // deterministic pseudo-random admissible triples
        let mut state = 0x2545f4914f6cdd1du64;
        let mut uniform = move || {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            (state >> 11) as f64 / (1u64 << 53) as f64
        };
        for _ in 0..20 {
            let rho = 0.2 + 30.0 * uniform();
            let f_d = 0.004 + 0.24 * uniform();
            let l_max = max_pilot_spacing(f_d);
            let l = 1 + (uniform() * l_max as f64) as u32;
            let l = l.min(l_max);
            let gen = joint_lower(&rect_cfg(rho, f_d, l)).unwrap();
            let rect = joint_lower_rect(rho, f_d, l).unwrap();
            assert_relative_eq!(gen.bits(), rect.bits(), max_relative = 1e-9, epsilon = 1e-12);
        }
    }

    #[test]
    fn optimal_spacing_floor_and_factor() {
        assert_eq!(optimal_pilot_spacing(RHO_6DB, 0.05f64).unwrap().integer, 10);
        assert_eq!(optimal_pilot_spacing(RHO_6DB, 0.013f64).unwrap().integer, 38);
        // factor anchors at 0/6/12 dB
        for (rho, want) in [
            (1.0, 1.4773775931588827),
            (RHO_6DB, 2.0147348932210563),
            (15.8489, 2.8205259624693012),
        ] {
            let sp = optimal_pilot_spacing(rho, 0.05f64).unwrap();
            assert_relative_eq!(sp.factor, want, max_relative = 1e-9);
            assert!(sp.factor > 1.0);
            assert!(sp.continuous > 1.0 / (2.0 * 0.05));
        }
        // stays well-posed at tiny SNR thanks to the stable denominator
        let sp = optimal_pilot_spacing(1e-8, 0.05f64).unwrap();
        assert!(sp.factor > 1.0 && sp.factor < 1.001);
        assert!(optimal_pilot_spacing(0.0, 0.05f64).is_err());
    }

    #[test]
    fn brute_force_confirms_optimal_spacing() {
        for &rho in &[1.0f64, RHO_6DB, 15.8489] {
            for &fd in &[0.005f64, 0.01, 0.05] {
                let l_max = max_pilot_spacing(fd);
                let mut best = (0u32, f64::NEG_INFINITY);
                for l in 1..=l_max {
                    let v = joint_lower_rect(rho, fd, l).unwrap().bits();
                    if v > best.1 {
                        best = (l, v);
                    }
                }
                assert_eq!(best.0, l_max, "rho={rho} fd={fd}");
                assert_eq!(optimal_pilot_spacing(rho, fd).unwrap().integer, l_max);
            }
        }
    }

    #[test]
    fn sep_optimal_spacing_beats_neighbors() {
        let psd = FadingPsd::rectangular(0.01f64, 1.0).unwrap();
        let l = sep_optimal_spacing(&psd, RHO_6DB).unwrap();
        let val = |l: u32| {
            sep_lower(&rect_cfg(RHO_6DB, 0.01, l)).unwrap().bits()
        };
        assert!(l > 1 && l < 50);
        assert!(val(l) >= val(l - 1));
        assert!(val(l) >= val(l + 1));
    }

    #[test]
    fn iid_bounds_anchors_and_clamp() {
        let lb = iid_pg_lower(RHO_6DB, 0.05f64).unwrap();
        assert_relative_eq!(lb.bits(), 1.3948605431788961, max_relative = 1e-9);
        let ub = iid_pg_upper(RHO_6DB, 0.05f64).unwrap();
        assert_relative_eq!(ub.bits(), 1.8531349682375679, max_relative = 1e-9);
        assert!(ub.bits() >= lb.bits());
        assert_eq!(lb.spacing, None);

        // penalty exceeding the capacity activates the clamp
        let clamped = iid_pg_lower(0.1f64, 0.45).unwrap();
        assert_eq!(clamped.bits(), 0.0);
        // near-static fading: the coherent branch of the upper bound wins
        let ub0 = iid_pg_upper(RHO_6DB, 1e-4f64).unwrap();
        assert_relative_eq!(
            ub0.bits(),
            coherent_capacity(RHO_6DB, LogBase::Bits).unwrap(),
            max_relative = 1e-12
        );
        assert_eq!(iid_pg_lower(0.0, 0.05f64).unwrap().bits(), 0.0);
        assert_eq!(iid_pg_upper(0.0, 0.05f64).unwrap().bits(), 0.0);
    }

    #[test]
    fn all_bounds_vanish_as_snr_vanishes() {
        let rho = 1e-8f64;
        let cfg = rect_cfg(rho, 0.05, 8);
        let values = [
            sep_lower(&cfg).unwrap().bits(),
            sep_upper(&cfg).unwrap().bits(),
            joint_lower(&cfg).unwrap().bits(),
            iid_pg_lower(rho, 0.05).unwrap().bits(),
            iid_pg_upper(rho, 0.05).unwrap().bits(),
            coherent(rho, 0.05).unwrap().bits(),
        ];
        for v in values {
            assert!(v.abs() < 1e-6, "bound {v} not vanishing");
        }
    }

    #[test]
    fn joint_lower_rect_increases_below_continuous_optimum() {
        for &rho in &[1.0f64, RHO_6DB] {
            let fd = 0.01f64;
            let mut prev = f64::NEG_INFINITY;
            for l in 1..=max_pilot_spacing(fd) {
                let v = joint_lower_rect(rho, fd, l).unwrap().bits();
                assert!(v >= prev, "not increasing at L={l}");
                prev = v;
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn bound_ordering_holds_everywhere(
            rho in 0.01f64..40.0,
            fd in 0.002f64..0.32,
            lsel in 0.0f64..1.0,
        ) {
            let l_max = max_pilot_spacing(fd);
            let l = (1.0 + lsel * (l_max as f64 - 1.0)).round() as u32;
            let cfg = rect_cfg(rho, fd, l);
            let cap = coherent_capacity(rho, LogBase::Bits).unwrap();
            let sl = sep_lower(&cfg).unwrap().bits();
            let su = sep_upper(&cfg).unwrap().bits();
            let jl = joint_lower(&cfg).unwrap().bits();
            let il = iid_pg_lower(rho, fd).unwrap().bits();
            let iu = iid_pg_upper(rho, fd).unwrap().bits();
            prop_assert!(sl >= 0.0);
            prop_assert!(su >= sl - 1e-12);
            prop_assert!(il >= 0.0);
            prop_assert!(iu >= il - 1e-12);
            for v in [sl, su, jl, il, iu] {
                prop_assert!(v.is_finite());
                prop_assert!(v <= cap + 1e-9, "bound {v} above capacity {cap}");
            }
        }
    }
}
