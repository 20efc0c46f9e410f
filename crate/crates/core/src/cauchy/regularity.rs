//! Finite-difference residual of the slice Cauchy-Riemann operator.

use crate::clifford::{CMultivector, Paravector};
use crate::error::{Error, Result};
use crate::scalar::Real;

pub const DEFAULT_FD_STEP: f64 = 1e-4;
pub const DEFAULT_REGULARITY_TOL: f64 = 1e-6;

/// `|½(∂_x Φ + (∂_y Φ) s)|` at `κ = x + y s`, by central differences of step `h`.
///
/// The unit `s` multiplies from the right. Evaluation failures at stencil points
/// that leave the domain are reported as [`Error::StencilOutsideDomain`].
pub fn slice_regularity_residual<T: Real>(
    phi: &dyn Fn(&Paravector<T>) -> Result<CMultivector<T>>,
    kappa: &Paravector<T>,
    h: T,
) -> Result<T> {
    if h.is_nan() || h <= T::zero() {
        return Err(Error::Invalid("finite-difference step must be positive".into()));
    }
    let s = kappa.unit_imag().ok_or(Error::DegenerateDirection)?;
    let (x, y) = (kappa.re(), kappa.im_norm());
    let at = |x: T, y: T| {
        phi(&Paravector::from_slice(x, y, &s)).map_err(|e| match e {
            Error::OutsideDomain { .. } => Error::StencilOutsideDomain,
            other => other,
        })
    };
    let dx = at(x + h, y)?.try_sub(&at(x - h, y)?)?;
    let dy = at(x, y + h)?.try_sub(&at(x, y - h)?)?;
    let dbar = dx.try_add(&dy.try_mul(&s.to_cmultivector())?)?;
    Ok(dbar.norm() / (T::lit(4.0) * h))
}
