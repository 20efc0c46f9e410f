//! The S-resolvent and the slice functional calculus.

use num_complex::Complex;

use super::calculus::{check_operator_contour, operator_contour, project, OperatorValue};
use super::spectrum::quadratic_singularity;
use super::{left_mult_matrix, CliffordOperator};
use crate::cauchy::{integrate, Contour, ContourPolicy, QuadratureOptions};
use crate::clifford::{CMultivector, Paravector};
use crate::error::{Error, Result};
use crate::linalg::{identity, solve, ComplexMatrix};
use crate::scalar::Real;
use crate::stem::{gfc_eval, StemFunction};

fn resolvent_on_matrix<T: Real>(s: &Paravector<T>, tc: &ComplexMatrix<T>, d: usize) -> Result<ComplexMatrix<T>> {
    let (q, test) = quadratic_singularity(tc, s);
    if test.singular {
        return Err(Error::SingularMatrix { pivot: test.relative_pivot.to_f64_lossy() });
    }
    let q_inv = solve(&q, &identity(q.nrows()))?;
    let shifted = tc - left_mult_matrix(&s.conj().to_cmultivector(), d);
    Ok(-(shifted * q_inv))
}

/// `S_R^{-1}(s, T_C) = -(T_C - L_{s^*})(T_C² - 2 Re(s) T_C + |s|² I)^{-1}`.
pub fn s_resolvent_right<T: Real>(s: &Paravector<T>, t: &CliffordOperator<T>) -> Result<ComplexMatrix<T>> {
    if s.rank() != t.rank() {
        return Err(Error::RankMismatch { left: t.rank(), right: s.rank() });
    }
    resolvent_on_matrix(s, &t.complexify(), t.dim())
}

/// Slice-calculus matrix `Φ(T)` for `Φ = F_σ`, integrated on the slice through `unit`.
///
/// A node `ζ = u + iv` of the planar contour becomes `s = u + v·unit`, and the line
/// element `dζ = du + i dv` becomes `-unit (du + dv·unit)` acting from the left.
pub fn slice_calculus_matrix<T: Real>(
    f: &StemFunction<T>,
    t: &CliffordOperator<T>,
    unit: &Paravector<T>,
    contour: Option<&Contour<T>>,
    policy: &ContourPolicy<T>,
    opts: &QuadratureOptions<T>,
) -> Result<ComplexMatrix<T>> {
    if f.rank() != t.rank() || unit.rank() != t.rank() {
        return Err(Error::RankMismatch { left: t.rank(), right: f.rank().max(unit.rank()) });
    }
    if unit.re().abs() > T::lit(1e-12) || (unit.im_norm() - T::one()).abs() > T::lit(1e-10) {
        return Err(Error::Invalid("slice direction must be a unit imaginary paravector".into()));
    }
    let (built, spectrum) = match contour {
        Some(c) => (c.clone(), super::spectrum::complex_spectrum(t)?.eigenvalues),
        None => operator_contour(f, t, policy)?,
    };
    check_operator_contour(f, &built, &spectrum)?;
    let tc = t.complexify();
    let d = t.dim();
    let minus_unit = unit.scale(-T::one()).to_cmultivector();
    let result = integrate(&built, opts, |node| {
        let s = Paravector::from_slice(node.zeta.re, node.zeta.im, unit);
        let phi = gfc_eval(f, &s)?;
        // ζ'(θ) = i (ζ - c) = u' + i v'
        let dz = (node.zeta - node.center) * Complex::new(T::zero(), T::one());
        let line = Paravector::from_slice(dz.re, dz.im, unit).to_cmultivector();
        let weight: CMultivector<T> = phi.try_mul(&minus_unit)?.try_mul(&line)?;
        let kernel = resolvent_on_matrix(&s, &tc, d).map_err(|e| match e {
            Error::SingularMatrix { .. } => Error::ContourThroughSpectrum {
                re: node.zeta.re.to_f64_lossy(),
                im: node.zeta.im.to_f64_lossy(),
            },
            other => other,
        })?;
        Ok(left_mult_matrix(&weight, d) * kernel)
    })?;
    Ok(result.value)
}

/// `Φ(T)` projected back to a real Clifford operator.
pub fn slice_calculus_eval<T: Real>(
    f: &StemFunction<T>,
    t: &CliffordOperator<T>,
    unit: &Paravector<T>,
    contour: Option<&Contour<T>>,
    policy: &ContourPolicy<T>,
    opts: &QuadratureOptions<T>,
    flat_tol: T,
) -> Result<OperatorValue<T>> {
    let s = slice_calculus_matrix(f, t, unit, contour, policy, opts)?;
    project(s, t.dim(), t.rank(), flat_tol)
}
