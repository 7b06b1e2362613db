//! Doppler power spectral density models and fading correlation matrices.
//!
//! The fading process is zero-mean jointly proper Gaussian with a compactly
//! supported spectrum `S_h(f)` on `[-f_d, f_d]`, `0 < f_d < 0.5`, normalized
//! so the band integral equals the fading variance. Two shapes are provided:
//!
//! * `Rectangular` — flat at `sigma_h^2 / (2 f_d)` over the support. Its
//!   autocorrelation is `sigma_h^2 sinc(2 f_d l)`, which is not absolutely
//!   summable; it is the classical worst-case band-limited model.
//! * `RaisedCosine` — flat core over `|f| <= (1-beta) f_d` with a squared
//!   cosine taper to zero at `f_d`. The taper makes the autocorrelation
//!   absolutely summable, which the asymptotic Toeplitz/circulant machinery
//!   requires; as `beta -> 0` it approaches the rectangular shape.
//!
//! The correlation values of these symmetric spectra are real, but the matrix
//! side is kept complex Hermitian throughout so the algebra matches the
//! proper-Gaussian model it feeds.

use num_complex::Complex;
use rustfft::FftPlanner;

use crate::linalg::{weak_norm_diff, CMatrix};
use crate::real::Real;
use crate::{Error, Result};

/// Parametric Doppler spectrum model.
#[derive(Clone, Debug, PartialEq)]
pub enum FadingPsd<T> {
    Rectangular {
        f_d: T,
        sigma_h_sq: T,
    },
    RaisedCosine {
        f_d: T,
        sigma_h_sq: T,
        /// Rolloff `beta` in `(0, 1]`; the flat core ends at `(1-beta) f_d`.
        rolloff: T,
    },
}

impl<T: Real> FadingPsd<T> {
    pub fn rectangular(f_d: T, sigma_h_sq: T) -> Result<Self> {
        validate_common(f_d, sigma_h_sq)?;
        Ok(Self::Rectangular { f_d, sigma_h_sq })
    }

    pub fn raised_cosine(f_d: T, sigma_h_sq: T, rolloff: T) -> Result<Self> {
        validate_common(f_d, sigma_h_sq)?;
        if !(rolloff > T::zero() && rolloff <= T::one()) {
            return Err(Error::InvalidConfig(format!(
                "rolloff must lie in (0, 1], got {rolloff}"
            )));
        }
        Ok(Self::RaisedCosine { f_d, sigma_h_sq, rolloff })
    }

    pub fn f_d(&self) -> T {
        match *self {
            Self::Rectangular { f_d, .. } | Self::RaisedCosine { f_d, .. } => f_d,
        }
    }

    pub fn sigma_h_sq(&self) -> T {
        match *self {
            Self::Rectangular { sigma_h_sq, .. } | Self::RaisedCosine { sigma_h_sq, .. } => {
                sigma_h_sq
            }
        }
    }

    /// Frequencies where the piecewise definition changes; integration seams.
    pub fn breakpoints(&self) -> Vec<T> {
        match *self {
            Self::Rectangular { f_d, .. } => vec![-f_d, f_d],
            Self::RaisedCosine { f_d, rolloff, .. } => {
                let inner = (T::one() - rolloff) * f_d;
                vec![-f_d, -inner, inner, f_d]
            }
        }
    }

    /// Spectrum value `S_h(f)` at a normalized frequency in `[-1/2, 1/2]`.
    pub fn value(&self, f: T) -> Result<T> {
        if !(f.abs() <= T::of(0.5)) {
            return Err(Error::FrequencyOutOfRange { f: f.as_f64() });
        }
        Ok(self.value_unchecked(f))
    }

    #[inline]
    pub(crate) fn value_unchecked(&self, f: T) -> T {
        let fa = f.abs();
        match *self {
            Self::Rectangular { f_d, sigma_h_sq } => {
                if fa <= f_d {
                    sigma_h_sq / (T::of(2.0) * f_d)
                } else {
                    T::zero()
                }
            }
            Self::RaisedCosine { f_d, sigma_h_sq, rolloff } => {
                let inner = (T::one() - rolloff) * f_d;
                let height =
                    sigma_h_sq / (T::of(2.0) * f_d * (T::one() - rolloff * T::of(0.5)));
                if fa <= inner {
                    height
                } else if fa <= f_d {
                    let phase = T::PI() * (fa - inner) / (T::of(2.0) * (f_d - inner));
                    height * phase.cos() * phase.cos()
                } else {
                    T::zero()
                }
            }
        }
    }

    /// Autocorrelation `r_h(l)` at an integer lag; the inverse transform of
    /// the spectrum. Real for these symmetric models, and even in the lag.
    pub fn autocorrelation(&self, lag: i64) -> T {
        if lag == 0 {
            return self.sigma_h_sq();
        }
        let l = T::from_i64(lag.abs()).unwrap();
        match *self {
            Self::Rectangular { f_d, sigma_h_sq } => sigma_h_sq * sinc(T::of(2.0) * f_d * l),
            Self::RaisedCosine { f_d, sigma_h_sq, rolloff } => {
                let inner = (T::one() - rolloff) * f_d;
                // standard raised-cosine time response for band edges
                // (inner, f_d); the taper ratio has a removable singularity
                // where 2 (f_d - inner) l = 1.
                let a = (inner + f_d) * l;
                let b = (f_d - inner) * l;
                sigma_h_sq * sinc(a) * taper_ratio(T::of(2.0) * b)
            }
        }
    }
}

fn validate_common<T: Real>(f_d: T, sigma_h_sq: T) -> Result<()> {
    if !(f_d > T::zero() && f_d < T::of(0.5)) {
        return Err(Error::InvalidConfig(format!(
            "maximum Doppler shift must lie in (0, 0.5), got {f_d}"
        )));
    }
    if !(sigma_h_sq > T::zero()) || !sigma_h_sq.is_finite() {
        return Err(Error::InvalidConfig(format!(
            "fading variance must be positive, got {sigma_h_sq}"
        )));
    }
    Ok(())
}

/// `sin(pi x) / (pi x)` with the removable singularity at 0.
fn sinc<T: Real>(x: T) -> T {
    if x == T::zero() {
        return T::one();
    }
    let px = T::PI() * x;
    px.sin() / px
}

/// `cos(pi u / 2) / (1 - u^2)` for `u >= 0`, finite at `u = 1` where it
/// equals `pi/4`; switches to an equivalent `sinc`-based form near the
/// singular point.
fn taper_ratio<T: Real>(u: T) -> T {
    let eps = u - T::one();
    if eps.abs() > T::of(1e-6) {
        (T::PI() * u * T::of(0.5)).cos() / (T::one() - u * u)
    } else {
        // cos(pi u/2)/(1-u^2) = sinc(eps/2) * pi / (2 (2 + eps))
        sinc(eps * T::of(0.5)) * T::PI() / (T::of(2.0) * (T::of(2.0) + eps))
    }
}

/// Hermitian Toeplitz fading correlation, stored by its first row.
#[derive(Clone, Debug)]
pub struct CorrelationToeplitz<T> {
    first_row: Vec<Complex<T>>,
}

impl<T: Real> CorrelationToeplitz<T> {
    pub fn len(&self) -> usize {
        self.first_row.len()
    }

    pub fn is_empty(&self) -> bool {
        self.first_row.is_empty()
    }

    pub fn first_row(&self) -> &[Complex<T>] {
        &self.first_row
    }

    /// Dense matrix with entry `(k, l) = r_h(k - l)`, `r_h(-m) = r_h(m)*`.
    pub fn to_matrix(&self) -> CMatrix<T> {
        let n = self.first_row.len();
        CMatrix::from_fn(n, n, |i, j| {
            if i >= j {
                self.first_row[i - j].conj()
            } else {
                self.first_row[j - i]
            }
        })
    }
}

/// Fading correlation data for a block of `n` symbols.
pub fn toeplitz_correlation<T: Real>(
    model: &FadingPsd<T>,
    n: usize,
) -> Result<CorrelationToeplitz<T>> {
    if n == 0 {
        return Err(Error::InvalidConfig("block length must be at least 1".into()));
    }
    let r0 = model.sigma_h_sq();
    let guard = r0 * (T::one() + T::of(1e-12));
    let first_row: Vec<Complex<T>> = (0..n)
        .map(|l| {
            let r = model.autocorrelation(l as i64);
            debug_assert!(r.abs() <= guard, "correlation magnitude exceeds the variance");
            Complex::new(r, T::zero())
        })
        .collect();
    Ok(CorrelationToeplitz { first_row })
}

/// Circulant matrix asymptotically equivalent to the Toeplitz correlation:
/// DFT eigenvectors, eigenvalues sampling the periodized spectrum.
#[derive(Clone, Debug)]
pub struct CirculantEquivalent<T> {
    first_column: Vec<Complex<T>>,
    eigenvalues: Vec<T>,
}

impl<T: Real> CirculantEquivalent<T> {
    pub fn len(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn is_empty(&self) -> bool {
        self.eigenvalues.is_empty()
    }

    pub fn first_column(&self) -> &[Complex<T>] {
        &self.first_column
    }

    /// Eigenvalue `k` is the periodized spectrum at grid frequency `k / n`.
    pub fn eigenvalues(&self) -> &[T] {
        &self.eigenvalues
    }

    /// Dense circulant matrix generated by the first column.
    pub fn to_matrix(&self) -> CMatrix<T> {
        let n = self.first_column.len();
        CMatrix::from_fn(n, n, |i, j| self.first_column[(i + n - j) % n])
    }
}

/// Builds the circulant equivalent on an `n`-point grid: eigenvalue `k` is
/// the periodized spectrum at `k/n`, and the first column is its inverse DFT.
pub fn circulant_equivalent<T: Real>(
    model: &FadingPsd<T>,
    n: usize,
) -> Result<CirculantEquivalent<T>> {
    if n < 2 {
        return Err(Error::InvalidConfig(
            "circulant construction needs a grid of at least 2 points".into(),
        ));
    }
    let nf = T::from_usize(n).unwrap();
    let half = T::of(0.5);
    let eigenvalues: Vec<T> = (0..n)
        .map(|k| {
            let mut f = T::from_usize(k).unwrap() / nf;
            if f >= half {
                f -= T::one();
            }
            model.value_unchecked(f)
        })
        .collect();

    let mut spectrum: Vec<Complex<T>> = eigenvalues
        .iter()
        .map(|&v| Complex::new(v, T::zero()))
        .collect();
    FftPlanner::new().plan_fft_inverse(n).process(&mut spectrum);
    let scale = T::one() / nf;
    for v in &mut spectrum {
        *v = Complex::new(v.re * scale, v.im * scale);
    }
    Ok(CirculantEquivalent { first_column: spectrum, eigenvalues })
}

/// Weak-norm distance `(tr[(A-B)^H (A-B)] / n)^{1/2}` between two square
/// matrices of equal size.
pub fn weak_norm_gap<T: Real>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<T> {
    weak_norm_diff(a, b)
}
