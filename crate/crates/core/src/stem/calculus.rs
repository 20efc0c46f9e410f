//! The direct functional calculus `F -> F_σ` and its companion predicates.

use std::sync::Arc;

use num_complex::Complex;

use super::domain::PlanarDomain;
use super::function::{StemFunction, StemKind};
use crate::clifford::{CMultivector, Paravector};
use crate::error::{Error, Result};
use crate::scalar::{cx, cx_real, Real};
use crate::spectral::{eigenvalues, idempotent, Sign};

/// Default stem-check sample count per domain piece.
pub const DEFAULT_STEM_SAMPLES: usize = 512;
/// Default tolerance for sampled stem checks.
pub const DEFAULT_STEM_TOL: f64 = 1e-10;

/// Outcome of a sampled check: the worst residual and where it occurred.
#[derive(Clone, Debug, PartialEq)]
pub struct SampledCheck<T> {
    pub passed: bool,
    pub worst: T,
    pub worst_at: Option<Complex<T>>,
    pub samples: usize,
}

/// Samples `F(conj λ) = bar(F(λ))` at `samples` low-discrepancy points per piece of `domain`.
///
/// Residuals are relative to `max(1, |F(λ)|)`.
pub fn verify_stem<T: Real>(
    f: &StemFunction<T>,
    domain: &PlanarDomain<T>,
    samples: usize,
    tol: T,
) -> Result<SampledCheck<T>> {
    if samples == 0 {
        return Err(Error::Invalid("stem check needs at least one sample".into()));
    }
    let mut worst = T::zero();
    let mut worst_at = None;
    let points: Vec<_> = domain
        .sample_points(samples)
        .into_iter()
        .filter(|z| !f.singularities().iter().any(|p| (*p - *z).norm() < T::lit(1e-6)))
        .collect();
    for &z in &points {
        let v = f.eval(z)?;
        let w = f.eval(z.conj())?;
        let r = w.dist(&v.conjugation_bar()) / v.norm().max(T::one());
        if r > worst || worst_at.is_none() {
            worst = r;
            worst_at = Some(z);
        }
    }
    Ok(SampledCheck { passed: worst <= tol, worst, worst_at, samples: points.len() })
}

fn spectrum_in_domain<T: Real>(f: &StemFunction<T>, kappa: &Paravector<T>) -> Result<()> {
    if f.rank() != kappa.rank() {
        return Err(Error::RankMismatch { left: f.rank(), right: kappa.rank() });
    }
    let s = eigenvalues(kappa).s_plus;
    if !f.domain().contains(s) {
        return Err(Error::OutsideDomain { re: s.re.to_f64_lossy(), im: s.im.to_f64_lossy() });
    }
    Ok(())
}

/// `F_σ(κ) = F(s_+) ι_+ + F(s_-) ι_-`, or `F(r)` for real `κ = r`.
pub fn gfc_eval<T: Real>(f: &StemFunction<T>, kappa: &Paravector<T>) -> Result<CMultivector<T>> {
    spectrum_in_domain(f, kappa)?;
    let data = eigenvalues(kappa);
    match (&data.iota_plus, &data.iota_minus) {
        (Some(ip), Some(im)) => {
            let plus = f.eval(data.s_plus)?.try_mul(ip)?;
            let minus = f.eval(data.s_minus)?.try_mul(im)?;
            plus.try_add(&minus)
        }
        _ => f.eval(data.s_plus),
    }
}

/// Checks, at each sample `κ = x + y s`, that `f_σ(κ^*) = f_σ(κ)^*` and that
/// `f_σ(κ)` lies in the real slice `R + R s`.
pub fn intrinsic_check<T: Real>(
    f: &StemFunction<T>,
    samples: &[Paravector<T>],
    tol: T,
) -> Result<SampledCheck<T>> {
    let mut worst = T::zero();
    let mut worst_at = None;
    for kappa in samples {
        let v = gfc_eval(f, kappa)?;
        let w = gfc_eval(f, &kappa.conj())?;
        let mut r = w.dist(&v.involution());
        if let Some(s) = kappa.unit_imag() {
            let s = s.to_cmultivector();
            let alpha = v.coeffs()[0].re;
            let beta: T = v.coeffs().iter().zip(s.coeffs()).map(|(a, b)| a.re * b.re).sum();
            let mut slice = s.scale_real(beta);
            slice.coeffs_mut()[0] = cx_real(alpha);
            r = r.max(v.dist(&slice));
        } else {
            r = r.max(v.dist(&CMultivector::scalar(v.rank(), cx_real(v.coeffs()[0].re))));
        }
        r /= v.norm().max(T::one());
        if r > worst || worst_at.is_none() {
            worst = r;
            worst_at = Some(eigenvalues(kappa).s_plus);
        }
    }
    Ok(SampledCheck { passed: worst <= tol, worst, worst_at, samples: samples.len() })
}

/// `κ` is a zero of `F_σ` iff `F` vanishes on `σ(κ)`.
pub fn zero_set_membership<T: Real>(f: &StemFunction<T>, kappa: &Paravector<T>, tol: T) -> Result<bool> {
    spectrum_in_domain(f, kappa)?;
    let data = eigenvalues(kappa);
    Ok(f.eval(data.s_plus)?.norm() <= tol && f.eval(data.s_minus)?.norm() <= tol)
}

/// `κ ∈ S_σ`, i.e. `σ(κ) ⊂ S`.
pub fn saturated_membership<T: Real>(s: &PlanarDomain<T>, kappa: &Paravector<T>) -> bool {
    let data = eigenvalues(kappa);
    s.contains(data.s_plus) && s.contains(data.s_minus)
}

/// `λ ∈ 𝔖(A)` for a spectrally saturated `A`, tested through `Re λ + |Im λ| s` for the sampled units `s`.
pub fn spectra_of_set_membership<T: Real>(
    a: &dyn Fn(&Paravector<T>) -> bool,
    lambda: Complex<T>,
    slices: &[Paravector<T>],
) -> bool {
    slices.iter().any(|s| a(&Paravector::from_slice(lambda.re, lambda.im.abs(), s)))
}

/// `|(F f)_σ(κ) - F_σ(κ) f_σ(κ)|`.
pub fn product_rule_check<T: Real>(
    f_big: &StemFunction<T>,
    f_small: &StemFunction<T>,
    kappa: &Paravector<T>,
) -> Result<T> {
    let lhs = gfc_eval(&f_big.product(f_small)?, kappa)?;
    let rhs = gfc_eval(f_big, kappa)?.try_mul(&gfc_eval(f_small, kappa)?)?;
    Ok(lhs.dist(&rhs))
}

fn one_minus_i_s<T: Real>(s: &Paravector<T>, sign: Sign) -> CMultivector<T> {
    idempotent(s, sign).scale_real(T::two())
}

/// Recovers `(F(x + iy), F(x - iy))` from the two slice values `F_σ(x ± y s)`.
pub fn representation_formula<T: Real>(
    f: &StemFunction<T>,
    x: T,
    y: T,
    s: &Paravector<T>,
) -> Result<(CMultivector<T>, CMultivector<T>)> {
    let s = unit_check(s)?;
    let up = gfc_eval(f, &Paravector::from_slice(x, y, &s))?;
    let down = gfc_eval(f, &Paravector::from_slice(x, -y, &s))?;
    Ok(recombine(&up, &down, &s))
}

/// `(½[A(1 - i s) + B(1 + i s)], ½[A(1 + i s) + B(1 - i s)])`.
fn recombine<T: Real>(
    a: &CMultivector<T>,
    b: &CMultivector<T>,
    s: &Paravector<T>,
) -> (CMultivector<T>, CMultivector<T>) {
    let minus = idempotent(s, Sign::Plus);
    let plus = idempotent(s, Sign::Minus);
    let at = |p: &CMultivector<T>, q: &CMultivector<T>| &(a * p) + &(b * q);
    (at(&minus, &plus), at(&plus, &minus))
}

fn unit_check<T: Real>(s: &Paravector<T>) -> Result<Paravector<T>> {
    let r = s.im_norm();
    if s.re().abs() > T::lit(1e-12) || (r - T::one()).abs() > T::lit(1e-10) {
        return Err(Error::Invalid("slice direction must be a unit imaginary paravector".into()));
    }
    Ok(s.clone())
}

/// A `K_n`-valued function on one slice `x + y s`, given as `(x, y) -> Ψ(x + y s)`.
pub type SliceFunction<T> = Arc<dyn Fn(T, T) -> Result<CMultivector<T>> + Send + Sync>;

/// Lifts `Ψ` on the slice through `s` to `F(x + iy) = ½[Ψ(x + y s)(1 - i s) + Ψ(x - y s)(1 + i s)]`.
pub fn slice_lift<T: Real>(
    psi: SliceFunction<T>,
    s: &Paravector<T>,
    domain: PlanarDomain<T>,
) -> Result<StemFunction<T>> {
    let s = unit_check(s)?;
    let n = s.rank();
    let one_minus = one_minus_i_s(&s, Sign::Plus);
    let one_plus = one_minus_i_s(&s, Sign::Minus);
    Ok(StemFunction::new(n, domain, StemKind::General, move |z: Complex<T>| {
        let a = psi(z.re, z.im)?.try_mul(&one_minus)?;
        let b = psi(z.re, -z.im)?.try_mul(&one_plus)?;
        Ok(a.try_add(&b)?.scale(cx(T::half(), T::zero())))
    }))
}

/// `(x, y) -> F_σ(x + y s)`, the slice restriction used with [`slice_lift`].
pub fn slice_restriction<T: Real>(f: &StemFunction<T>, s: &Paravector<T>) -> SliceFunction<T> {
    let (f, s) = (f.clone(), s.clone());
    Arc::new(move |x, y| gfc_eval(&f, &Paravector::from_slice(x, y, &s)))
}
