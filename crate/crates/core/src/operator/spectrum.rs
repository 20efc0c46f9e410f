//! Complex and Clifford spectra of Clifford operators.

use num_complex::Complex;

use super::CliffordOperator;
use crate::clifford::Paravector;
use crate::error::Result;
use crate::linalg::{pair_conjugates, real_eigenvalues, max_norm, singularity_test_scaled, ComplexMatrix, SingularityTest, DEFAULT_SINGULAR_TOL, DEFAULT_SIZE_CAP};
use crate::scalar::{cx_real, Real};
use crate::spectral::eigenvalues;

/// Tolerance `|λ - s_±(κ)| <= tol (1 + |λ|)` for the eigenvalue-intersection test.
pub const DEFAULT_INTERSECTION_TOL: f64 = 1e-8;

/// Eigenvalues of `T_C`, with multiplicity, arranged in exact conjugate pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumSet<T> {
    pub eigenvalues: Vec<Complex<T>>,
    /// Largest mismatch found while pairing `λ` with `conj(λ)`.
    pub pairing_defect: T,
}

impl<T: Real> SpectrumSet<T> {
    /// Eigenvalues with `Im λ >= 0`, repeated by multiplicity.
    pub fn upper(&self) -> impl Iterator<Item = Complex<T>> + '_ {
        self.eigenvalues.iter().copied().filter(|z| z.im >= T::zero())
    }
}

/// `σ_C(T)` with the default size cap.
pub fn complex_spectrum<T: Real>(t: &CliffordOperator<T>) -> Result<SpectrumSet<T>> {
    complex_spectrum_with_cap(t, DEFAULT_SIZE_CAP)
}

pub fn complex_spectrum_with_cap<T: Real>(t: &CliffordOperator<T>, cap: usize) -> Result<SpectrumSet<T>> {
    let raw = real_eigenvalues(&t.real_matrix(), cap)?;
    let (eigenvalues, pairing_defect) = pair_conjugates(&raw, T::lit(1e-10));
    Ok(SpectrumSet { eigenvalues, pairing_defect })
}

/// Verdict of the Clifford-spectrum test for one paravector.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Membership<T> {
    pub member: bool,
    /// Smallest pivot of `Q` relative to its largest entry.
    pub relative_pivot: T,
    /// `log10(relative_pivot / threshold)`; near zero means a borderline verdict.
    pub margin: T,
}

/// `Q(κ) = T_C² - 2 Re(κ) T_C + |κ|² I`.
pub(crate) fn quadratic<T: Real>(tc: &ComplexMatrix<T>, kappa: &Paravector<T>) -> ComplexMatrix<T> {
    let size = tc.nrows();
    let mut q = tc * tc - tc * cx_real(T::two() * kappa.re());
    for i in 0..size {
        q[(i, i)] += cx_real(kappa.norm_sqr());
    }
    q
}

/// Singularity of `Q(κ)`, with pivots relative to the size of the terms that cancel in it.
pub(crate) fn quadratic_singularity<T: Real>(tc: &ComplexMatrix<T>, kappa: &Paravector<T>) -> (ComplexMatrix<T>, SingularityTest<T>) {
    let q = quadratic(tc, kappa);
    let t = max_norm(tc);
    let scale = t * t * T::lit(tc.nrows() as f64) + T::two() * kappa.re().abs() * t + kappa.norm_sqr();
    let test = singularity_test_scaled(&q, scale, T::lit(DEFAULT_SINGULAR_TOL));
    (q, test)
}

/// `κ ∈ σ_Cl(T)` iff `Q(κ)` is singular, judged by column-pivoted QR.
pub fn cl_spectrum_membership<T: Real>(t: &CliffordOperator<T>, kappa: &Paravector<T>) -> Membership<T> {
    let (_, test) = quadratic_singularity(&t.complexify(), kappa);
    Membership { member: test.singular, relative_pivot: test.relative_pivot, margin: test.margin() }
}

/// `σ_C(T) ∩ σ(κ) ≠ ∅`, the eigenvalue route to Clifford-spectrum membership.
pub fn spectral_intersection_membership<T: Real>(spectrum: &SpectrumSet<T>, kappa: &Paravector<T>, tol: T) -> bool {
    let data = eigenvalues(kappa);
    spectrum.eigenvalues.iter().any(|&l| {
        let bound = tol * (T::one() + l.norm());
        (l - data.s_plus).norm() <= bound || (l - data.s_minus).norm() <= bound
    })
}

/// Representatives `Re λ + |Im λ| s` of `σ_Cl(T)` on the slice through unit `s`,
/// one per distinct eigenvalue in the closed upper half plane.
pub fn cl_spectrum_slice<T: Real>(t: &CliffordOperator<T>, s: &Paravector<T>) -> Result<Vec<Paravector<T>>> {
    let spectrum = complex_spectrum(t)?;
    let mut reps: Vec<Complex<T>> = Vec::new();
    for l in spectrum.upper() {
        let tol = T::lit(1e-9) * (T::one() + l.norm());
        if !reps.iter().any(|r| (*r - l).norm() <= tol) {
            reps.push(l);
        }
    }
    Ok(reps.into_iter().map(|l| Paravector::from_slice(l.re, l.im.abs(), s)).collect())
}
