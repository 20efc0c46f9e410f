//! The Cauchy transform `C[F](κ) = (1/2πi) ∮ F(ζ)(ζ - κ)^{-1} dζ` and its derivatives.

use num_complex::Complex;

use super::contour::{build_contour, Contour, ContourPolicy};
use super::quadrature::{integrate, QuadratureOptions, QuadratureResult};
use crate::clifford::{CMultivector, Paravector};
use crate::error::{Error, Result};
use crate::scalar::Real;
use crate::spectral::{eigenvalues, resolvent};
use crate::stem::StemFunction;

/// Contour around `σ(κ)` inside the domain of `f`, avoiding its singularities.
pub fn contour_for<T: Real>(
    f: &StemFunction<T>,
    kappa: &Paravector<T>,
    policy: &ContourPolicy<T>,
) -> Result<Contour<T>> {
    let data = eigenvalues(kappa);
    build_contour(&[data.s_plus, data.s_minus], f.domain(), f.singularities(), policy)
}

fn check_setup<T: Real>(f: &StemFunction<T>, kappa: &Paravector<T>, contour: &Contour<T>) -> Result<()> {
    if f.rank() != kappa.rank() {
        return Err(Error::RankMismatch { left: f.rank(), right: kappa.rank() });
    }
    let data = eigenvalues(kappa);
    contour.check_encloses(&[data.s_plus, data.s_minus])?;
    contour.check_inside(f.domain(), f.singularities())
}

fn resolvent_on_contour<T: Real>(zeta: Complex<T>, kappa: &Paravector<T>) -> Result<CMultivector<T>> {
    resolvent(zeta, kappa).map_err(|e| match e {
        Error::SpectralPoint { re, im } => Error::ContourThroughSpectrum { re, im },
        other => other,
    })
}

/// `C[F](κ)` by trapezoidal quadrature on `contour`.
pub fn cauchy_transform<T: Real>(
    f: &StemFunction<T>,
    kappa: &Paravector<T>,
    contour: &Contour<T>,
    opts: &QuadratureOptions<T>,
) -> Result<CMultivector<T>> {
    Ok(cauchy_transform_report(f, kappa, contour, opts)?.value)
}

/// As [`cauchy_transform`], also reporting node count and convergence data.
pub fn cauchy_transform_report<T: Real>(
    f: &StemFunction<T>,
    kappa: &Paravector<T>,
    contour: &Contour<T>,
    opts: &QuadratureOptions<T>,
) -> Result<QuadratureResult<CMultivector<T>, T>> {
    check_setup(f, kappa, contour)?;
    integrate(contour, opts, |node| {
        let g = f.eval(node.zeta)?.try_mul(&resolvent_on_contour(node.zeta, kappa)?)?;
        Ok(g.scale(node.zeta - node.center))
    })
}

/// `(1/2πi) ∮ F^{(m)}(ζ)(ζ - κ)^{-1} dζ`.
///
/// Uses the evaluator's exact derivative when it has one, otherwise
/// [`cauchy_differentiate`] at every node.
pub fn cauchy_derivative<T: Real>(
    f: &StemFunction<T>,
    order: usize,
    kappa: &Paravector<T>,
    contour: &Contour<T>,
    opts: &QuadratureOptions<T>,
) -> Result<CMultivector<T>> {
    check_setup(f, kappa, contour)?;
    let result = integrate(contour, opts, |node| {
        let d = match f.exact_derivative(order, node.zeta) {
            Some(d) => d?,
            None => cauchy_differentiate(f, order, node.zeta)?,
        };
        let g = d.try_mul(&resolvent_on_contour(node.zeta, kappa)?)?;
        Ok(g.scale(node.zeta - node.center))
    })?;
    Ok(result.value)
}

/// `F^{(m)}(z) ≈ (m!/M) Σ F(w_k)(w_k - z)^{-m}` on a small circle `w_k` around `z`.
///
/// The circle radius is a quarter of the free space around `z`, capped at 1.
pub fn cauchy_differentiate<T: Real>(f: &StemFunction<T>, order: usize, z: Complex<T>) -> Result<CMultivector<T>> {
    if order == 0 {
        return f.eval(z);
    }
    let free = f
        .singularities()
        .iter()
        .map(|&q| (q - z).norm())
        .fold(f.domain().inner_distance(z), T::min);
    if free <= T::zero() {
        return Err(Error::OutsideDomain { re: z.re.to_f64_lossy(), im: z.im.to_f64_lossy() });
    }
    let rho = (free * T::lit(0.25)).min(T::one());
    let m = 64 + 8 * order;
    let mut terms = Vec::with_capacity(m);
    for k in 0..m {
        let offset = Complex::from_polar(rho, T::lit(std::f64::consts::TAU * k as f64 / m as f64));
        terms.push(f.eval(z + offset)?.scale(offset.powi(-(order as i32))));
    }
    let sum = crate::scalar::pairwise_sum(&terms, &|a: &CMultivector<T>, b: &CMultivector<T>| a + b)
        .expect("nonempty stencil");
    let factorial = (1..=order).fold(T::one(), |acc, k| acc * T::from(k).expect("small integer"));
    Ok(sum.scale_real(factorial / T::from(m).expect("small integer")))
}
