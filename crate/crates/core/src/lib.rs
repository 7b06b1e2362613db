//! Achievable-rate bounds for pilot-aided transmission over stationary
//! Rayleigh flat-fading channels, with cross-verified LMMSE estimation-error
//! analysis.
//!
//! The crate covers three layers:
//!
//! * [`psd`] and [`quadrature`] — Doppler spectrum models, their
//!   autocorrelation and Toeplitz/circulant correlation matrices, plus the
//!   integration kernels everything else rests on.
//! * [`bounds`] — closed-form and quadrature evaluations of the achievable
//!   rate for separate and joint processing of pilot and data symbols, the
//!   i.i.d. proper-Gaussian comparison bounds, and the optimal pilot spacing.
//! * [`estimator`] and [`montecarlo`] — finite-block LMMSE estimation,
//!   error-correlation algebra, log-determinant asymptotics, and a
//!   deterministic Monte Carlo harness that verifies the analytic error
//!   statistics empirically.
//!
//! All numerics are generic over the scalar type via [`Real`] (`f32`/`f64`);
//! concrete `f64` aliases for the main types are exported at the crate root.
//!
//! ```
//! use pilotrate::{bounds, FadingPsd64};
//!
//! let psd = FadingPsd64::rectangular(0.05, 1.0).unwrap();
//! let cfg = bounds::ChannelConfig::from_snr(psd, 3.9811, 10).unwrap();
//! let lb = bounds::joint_lower(&cfg).unwrap();
//! assert!((lb.bits() - 1.4335120647637881).abs() < 1e-6);
//! ```

pub mod bounds;
pub mod estimator;
pub mod linalg;
pub mod montecarlo;
pub mod psd;
pub mod quadrature;
pub mod real;
pub mod special;

pub use real::Real;

/// Concrete `f64` aliases for the main domain types.
pub type FadingPsd64 = psd::FadingPsd<f64>;
pub type ChannelConfig64 = bounds::ChannelConfig<f64>;
pub type RateBound64 = bounds::RateBound<f64>;
pub type CMatrix64 = linalg::CMatrix<f64>;
pub type McConfig64 = montecarlo::McConfig<f64>;
pub type McReport64 = montecarlo::McReport<f64>;

/// `f32` aliases, for consumers that trade accuracy for footprint.
pub type FadingPsd32 = psd::FadingPsd<f32>;
pub type ChannelConfig32 = bounds::ChannelConfig<f32>;
pub type RateBound32 = bounds::RateBound<f32>;
pub type CMatrix32 = linalg::CMatrix<f32>;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("frequency {f} outside the normalized band [-0.5, 0.5]")]
    FrequencyOutOfRange { f: f64 },

    #[error("invalid model or configuration: {0}")]
    InvalidConfig(String),

    #[error("pilot spacing {spacing} undersamples the fading (max Doppler {f_d})")]
    NyquistViolation { spacing: u32, f_d: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: &'static str },

    #[error("matrix is not Hermitian")]
    NotHermitian,

    #[error("matrix is not positive definite (pivot {pivot} = {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },

    #[error("integrand is not finite at frequency {f}")]
    NonFiniteIntegrand { f: f64 },

    #[error("integral did not reach the requested tolerance after {panels} panels")]
    ToleranceNotReached { panels: usize },

    #[error("power profile violates the average power budget: mean {mean:e} > {budget:e}")]
    PowerBudgetExceeded { mean: f64, budget: f64 },

    #[error("spectral synthesis found eigenvalue {value:e} below the tolerance floor")]
    NegativeSpectrum { value: f64 },
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
