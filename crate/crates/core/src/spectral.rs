//! Spectrum, resolvent, idempotents and spectral projections of a paravector.
//!
//! A paravector `κ` has spectrum `{s_+, s_-}` with `s_± = Re κ ± i|Im κ|`. When
//! `Im κ != 0` the unit `s = Im κ / |Im κ|` gives commuting idempotents
//! `ι_± = (1 ∓ i s)/2` and left multiplication splits as `κ = s_+ ι_+ + s_- ι_-`.

use num_complex::Complex;

use crate::clifford::{CMultivector, Multivector, Paravector};
use crate::error::{Error, Result};
use crate::scalar::{cx, cx_real, Real};

/// Relative threshold below which `λ² - 2λ Re κ + |κ|²` counts as zero.
pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-12;

/// Selects the `+` or `-` spectral branch.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn flip(self) -> Self {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectralData<T> {
    /// Eigenvalue with nonnegative imaginary part.
    pub s_plus: Complex<T>,
    pub s_minus: Complex<T>,
    /// `Im κ / |Im κ|`; `None` for real `κ`.
    pub s_unit: Option<Paravector<T>>,
    pub iota_plus: Option<CMultivector<T>>,
    pub iota_minus: Option<CMultivector<T>>,
}

impl<T: Real> SpectralData<T> {
    pub fn eigenvalue(&self, sign: Sign) -> Complex<T> {
        match sign {
            Sign::Plus => self.s_plus,
            Sign::Minus => self.s_minus,
        }
    }

    pub fn idempotent(&self, sign: Sign) -> Option<&CMultivector<T>> {
        match sign {
            Sign::Plus => self.iota_plus.as_ref(),
            Sign::Minus => self.iota_minus.as_ref(),
        }
    }

    pub fn is_real(&self) -> bool {
        self.s_unit.is_none()
    }
}

/// `(1 ∓ i s)/2` for a unit imaginary paravector `s`.
pub fn idempotent<T: Real>(s: &Paravector<T>, sign: Sign) -> CMultivector<T> {
    let half = T::half();
    let w = match sign {
        Sign::Plus => cx(T::zero(), -half),
        Sign::Minus => cx(T::zero(), half),
    };
    let mut out = s.im().to_cmultivector().scale(w);
    out.coeffs_mut()[0] = cx_real(half);
    out
}

pub fn eigenvalues<T: Real>(kappa: &Paravector<T>) -> SpectralData<T> {
    let (re, r) = (kappa.re(), kappa.im_norm());
    let s_unit = kappa.unit_imag();
    let (iota_plus, iota_minus) = match &s_unit {
        Some(s) => (Some(idempotent(s, Sign::Plus)), Some(idempotent(s, Sign::Minus))),
        None => (None, None),
    };
    SpectralData { s_plus: cx(re, r), s_minus: cx(re, -r), s_unit, iota_plus, iota_minus }
}

/// `λ² - 2λ Re κ + |κ|²`, which vanishes exactly on `σ(κ)`.
pub fn characteristic<T: Real>(lambda: Complex<T>, kappa: &Paravector<T>) -> Complex<T> {
    lambda * lambda - lambda * (T::two() * kappa.re()) + cx_real(kappa.norm_sqr())
}

/// `(λ - κ)^{-1}` with the default spectral-point tolerance.
pub fn resolvent<T: Real>(lambda: Complex<T>, kappa: &Paravector<T>) -> Result<CMultivector<T>> {
    resolvent_with_tol(lambda, kappa, T::lit(DEFAULT_SPECTRAL_TOL))
}

pub fn resolvent_with_tol<T: Real>(
    lambda: Complex<T>,
    kappa: &Paravector<T>,
    tol: T,
) -> Result<CMultivector<T>> {
    let den = characteristic(lambda, kappa);
    let scale = T::one() + lambda.norm_sqr() + kappa.norm_sqr();
    if den.norm() < tol * scale {
        return Err(Error::SpectralPoint {
            re: lambda.re.to_f64_lossy(),
            im: lambda.im.to_f64_lossy(),
        });
    }
    let inv = den.inv();
    // λ - κ^* = (λ - a_0) + Σ a_j e_j
    let mut out = kappa.im().to_cmultivector().scale(inv);
    out.coeffs_mut()[0] = (lambda - cx_real(kappa.re())) * inv;
    Ok(out)
}

/// Result of applying a spectral projection.
#[derive(Clone, Debug, PartialEq)]
pub struct Projection<T> {
    pub value: CMultivector<T>,
    /// Set when `κ` is real: the projection degenerates to the identity.
    pub identity: bool,
}

/// `P_±(κ) a = ι_± a`; the identity when `κ` is real.
pub fn spectral_projection<T: Real>(
    kappa: &Paravector<T>,
    a: &CMultivector<T>,
    sign: Sign,
) -> Result<Projection<T>> {
    if kappa.rank() != a.rank() {
        return Err(Error::RankMismatch { left: kappa.rank(), right: a.rank() });
    }
    match kappa.unit_imag() {
        Some(s) => Ok(Projection { value: idempotent(&s, sign).try_mul(a)?, identity: false }),
        None => Ok(Projection { value: a.clone(), identity: true }),
    }
}

/// `|κ a - s_+ P_+ a - s_- P_- a|`; for real `κ = r` the single projection gives `|κ a - r a|`.
pub fn left_mult_decomposition_check<T: Real>(kappa: &Paravector<T>, a: &CMultivector<T>) -> Result<T> {
    let direct = kappa.to_cmultivector().try_mul(a)?;
    let data = eigenvalues(kappa);
    let split = match (&data.iota_plus, &data.iota_minus) {
        (Some(ip), Some(im)) => {
            let mut acc = ip.try_mul(a)?.scale(data.s_plus);
            acc.axpy(data.s_minus, &im.try_mul(a)?);
            acc
        }
        _ => a.scale(data.s_plus),
    };
    Ok(direct.dist(&split))
}

/// `ν_± = (1 ∓ i s) x`, an eigenvector of left multiplication by `κ` for `s_±`.
pub fn eigenvector<T: Real>(kappa: &Paravector<T>, sign: Sign, x: &Multivector<T>) -> Result<CMultivector<T>> {
    if kappa.rank() != x.rank() {
        return Err(Error::RankMismatch { left: kappa.rank(), right: x.rank() });
    }
    let s = kappa.unit_imag().ok_or(Error::DegenerateDirection)?;
    let factor = idempotent(&s, sign).scale_real(T::two());
    factor.try_mul(&x.to_complex())
}
