//! Riesz–Dunford calculus `F(T_C) = (1/2πi) ∮ F(ζ)(ζ - T_C)^{-1} dζ` and the ♭-conjugation.

use std::sync::Arc;

use num_complex::Complex;

use super::spectrum::complex_spectrum;
use super::{left_mult_matrix, CliffordOperator};
use crate::cauchy::{build_contour, integrate, Contour, ContourPolicy, QuadratureOptions};
use crate::error::{Error, Result};
use crate::linalg::{frobenius, hausdorff, identity, solve, ComplexMatrix};
use crate::scalar::Real;
use crate::stem::{PlanarDomain, StemFunction, StemKind};

/// Largest accepted relative ♭-residual for a result to count as real.
pub const DEFAULT_FLAT_TOL: f64 = 1e-9;

/// Something that can be integrated against the operator resolvent.
pub trait OperatorSymbol<T: Real> {
    fn domain(&self) -> &PlanarDomain<T>;
    fn singularities(&self) -> &[Complex<T>];
    /// `F(ζ)` as a matrix on `C^(d·2^n)`.
    fn matrix_at(&self, z: Complex<T>, d: usize, n: usize) -> Result<ComplexMatrix<T>>;
    /// Scalar shortcut: `Some(c)` when `F(ζ) = c I`.
    fn scalar_at(&self, _z: Complex<T>) -> Option<Result<Complex<T>>> {
        None
    }
}

impl<T: Real> OperatorSymbol<T> for StemFunction<T> {
    fn domain(&self) -> &PlanarDomain<T> {
        StemFunction::domain(self)
    }

    fn singularities(&self) -> &[Complex<T>] {
        StemFunction::singularities(self)
    }

    fn matrix_at(&self, z: Complex<T>, d: usize, n: usize) -> Result<ComplexMatrix<T>> {
        if self.rank() != n {
            return Err(Error::RankMismatch { left: n, right: self.rank() });
        }
        Ok(left_mult_matrix(&self.eval(z)?, d))
    }

    fn scalar_at(&self, z: Complex<T>) -> Option<Result<Complex<T>>> {
        (self.kind() == StemKind::ComplexValued).then(|| self.eval(z).map(|v| v.coeffs()[0]))
    }
}

type MatrixEval<T> = dyn Fn(Complex<T>) -> Result<ComplexMatrix<T>> + Send + Sync;

/// Operator-valued function `ζ -> F(ζ)` on `C^(d·2^n)`; it is a stem function when
/// `F(conj ζ) = flat_conj(F(ζ))`.
#[derive(Clone)]
pub struct MatrixFunction<T: Real> {
    domain: PlanarDomain<T>,
    singularities: Vec<Complex<T>>,
    size: usize,
    f: Arc<MatrixEval<T>>,
}

impl<T: Real> MatrixFunction<T> {
    pub fn new<F>(domain: PlanarDomain<T>, size: usize, f: F) -> Self
    where
        F: Fn(Complex<T>) -> Result<ComplexMatrix<T>> + Send + Sync + 'static,
    {
        MatrixFunction { domain, singularities: Vec::new(), size, f: Arc::new(f) }
    }

    pub fn with_singularities(mut self, points: Vec<Complex<T>>) -> Self {
        self.singularities = points;
        self
    }

    pub fn eval(&self, z: Complex<T>) -> Result<ComplexMatrix<T>> {
        if !self.domain.contains(z) {
            return Err(Error::OutsideDomain { re: z.re.to_f64_lossy(), im: z.im.to_f64_lossy() });
        }
        (self.f)(z)
    }
}

impl<T: Real> OperatorSymbol<T> for MatrixFunction<T> {
    fn domain(&self) -> &PlanarDomain<T> {
        &self.domain
    }

    fn singularities(&self) -> &[Complex<T>] {
        &self.singularities
    }

    fn matrix_at(&self, z: Complex<T>, d: usize, n: usize) -> Result<ComplexMatrix<T>> {
        if self.size != d << n {
            return Err(Error::DimensionMismatch(format!("function acts on size {}, operator on {}", self.size, d << n)));
        }
        self.eval(z)
    }
}

/// `S^♭ = C S C`: entrywise conjugation in the real basis.
pub fn flat_conj<T: Real>(s: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    s.map(|z| z.conj())
}

/// `|S - S^♭| / max(1, |S|)` in the Frobenius norm.
pub fn flat_residual<T: Real>(s: &ComplexMatrix<T>) -> T {
    frobenius(&(s - flat_conj(s))) / frobenius(s).max(T::one())
}

/// Contour around `σ_C(T)` inside the symbol's domain.
pub(crate) fn operator_contour<T: Real, S: OperatorSymbol<T> + ?Sized>(
    f: &S,
    t: &CliffordOperator<T>,
    policy: &ContourPolicy<T>,
) -> Result<(Contour<T>, Vec<Complex<T>>)> {
    let spectrum = complex_spectrum(t)?.eigenvalues;
    let contour = build_contour(&spectrum, f.domain(), f.singularities(), policy)?;
    Ok((contour, spectrum))
}

pub(crate) fn check_operator_contour<T: Real, S: OperatorSymbol<T> + ?Sized>(
    f: &S,
    contour: &Contour<T>,
    spectrum: &[Complex<T>],
) -> Result<()> {
    contour.check_encloses(spectrum)?;
    contour.check_inside(f.domain(), f.singularities())
}

pub(crate) fn through_spectrum<T: Real>(z: Complex<T>) -> impl Fn(Error) -> Error {
    move |e| match e {
        Error::SingularMatrix { .. } => Error::ContourThroughSpectrum { re: z.re.to_f64_lossy(), im: z.im.to_f64_lossy() },
        other => other,
    }
}

/// The raw matrix `F(T_C)`; no realness or linearity check.
///
/// With `contour = None` a contour is built around `σ_C(T)` with `policy`.
pub fn riesz_dunford_matrix<T: Real, S: OperatorSymbol<T> + ?Sized>(
    f: &S,
    t: &CliffordOperator<T>,
    contour: Option<&Contour<T>>,
    policy: &ContourPolicy<T>,
    opts: &QuadratureOptions<T>,
) -> Result<ComplexMatrix<T>> {
    let (built, spectrum) = match contour {
        Some(c) => (c.clone(), complex_spectrum(t)?.eigenvalues),
        None => operator_contour(f, t, policy)?,
    };
    check_operator_contour(f, &built, &spectrum)?;
    let tc = t.complexify();
    let (d, n, size) = (t.dim(), t.rank(), t.size());
    let result = integrate(&built, opts, |node| {
        let z = node.zeta;
        let shifted = identity::<T>(size) * z - &tc;
        let res = solve(&shifted, &identity(size)).map_err(through_spectrum(z))?;
        let w = z - node.center;
        match f.scalar_at(z) {
            Some(c) => Ok(res * (c? * w)),
            None => Ok(f.matrix_at(z, d, n)? * res * w),
        }
    })?;
    Ok(result.value)
}

/// Result of an operator calculus evaluation.
#[derive(Clone, Debug)]
pub struct OperatorValue<T: Real> {
    pub operator: CliffordOperator<T>,
    pub matrix: ComplexMatrix<T>,
    /// Relative ♭-residual `|S - S^♭| / max(1, |S|)`.
    pub flat_residual: T,
    /// Relative residual of reading `S` back as a right-linear operator.
    pub linearity_residual: T,
}

pub(crate) fn project<T: Real>(s: ComplexMatrix<T>, d: usize, n: usize, tol: T) -> Result<OperatorValue<T>> {
    let (operator, flat, linear) = CliffordOperator::from_complex_matrix(&s, d, n)?;
    if flat > tol {
        return Err(Error::StemViolation { residual: flat.to_f64_lossy(), tol: tol.to_f64_lossy() });
    }
    if linear > tol {
        return Err(Error::NotRightLinear { residual: linear.to_f64_lossy() });
    }
    Ok(OperatorValue { operator, matrix: s, flat_residual: flat, linearity_residual: linear })
}

/// `F(T)` projected back to a real Clifford operator.
///
/// Fails with a stem violation if the ♭-residual exceeds `flat_tol`.
pub fn riesz_dunford_eval<T: Real, S: OperatorSymbol<T> + ?Sized>(
    f: &S,
    t: &CliffordOperator<T>,
    contour: Option<&Contour<T>>,
    policy: &ContourPolicy<T>,
    opts: &QuadratureOptions<T>,
    flat_tol: T,
) -> Result<OperatorValue<T>> {
    let s = riesz_dunford_matrix(f, t, contour, policy, opts)?;
    project(s, t.dim(), t.rank(), flat_tol)
}

/// Hausdorff distance between `f(σ_C(T))` and `σ_C(f(T))` for complex-valued `f`.
pub fn spectral_mapping_check<T: Real>(
    f: &StemFunction<T>,
    t: &CliffordOperator<T>,
    policy: &ContourPolicy<T>,
    opts: &QuadratureOptions<T>,
) -> Result<T> {
    if f.kind() != StemKind::ComplexValued {
        return Err(Error::Invalid("spectral mapping needs a complex-valued function".into()));
    }
    let image: Vec<Complex<T>> = complex_spectrum(t)?
        .eigenvalues
        .iter()
        .map(|&l| f.eval(l).map(|v| v.coeffs()[0]))
        .collect::<Result<_>>()?;
    let ft = riesz_dunford_eval(f, t, None, policy, opts, T::lit(DEFAULT_FLAT_TOL))?;
    let after = complex_spectrum(&ft.operator)?.eigenvalues;
    Ok(hausdorff(&image, &after))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::{parse_paravector, CMultivector};
    use crate::scalar::cx;
    use nalgebra::DMatrix;

    fn disk() -> PlanarDomain<f64> {
        PlanarDomain::disk(cx(0.0, 0.0), 10.0).unwrap()
    }

    fn sample_op() -> CliffordOperator<f64> {
        CliffordOperator::tuple(&[
            DMatrix::from_row_slice(2, 2, &[0.3, 0.1, -0.2, 0.5]),
            DMatrix::from_row_slice(2, 2, &[0.0, 0.4, 0.2, 0.1]),
            DMatrix::from_row_slice(2, 2, &[0.6, 0.0, -0.1, -0.3]),
        ])
        .unwrap()
    }

    fn rd(f: &StemFunction<f64>, t: &CliffordOperator<f64>) -> OperatorValue<f64> {
        riesz_dunford_eval(f, t, None, &ContourPolicy::default(), &QuadratureOptions::default(), 1e-9).unwrap()
    }

    #[test]
    fn polynomials_of_operators() {
        let t = sample_op();
        let one = StemFunction::scalar(2, disk(), |_| cx(1.0, 0.0));
        assert!(rd(&one, &t).operator.distance(&CliffordOperator::identity(2, 2)).unwrap() < 1e-12);
        let sq = StemFunction::scalar(2, disk(), |z| z * z);
        assert!(rd(&sq, &t).operator.distance(&t.pow(2)).unwrap() < 1e-12);
    }

    #[test]
    fn exponential_of_rotation() {
        let t = CliffordOperator::from_paravector(&parse_paravector("1.5707963267948966e1", 1).unwrap());
        let exp = StemFunction::scalar(1, disk(), |z| z.exp());
        let e1 = CliffordOperator::from_paravector(&parse_paravector("e1", 1).unwrap());
        assert!(rd(&exp, &t).operator.distance(&e1).unwrap() < 1e-12);
    }

    #[test]
    fn non_stem_symbol_fails_flat_check() {
        let t = sample_op();
        let f = StemFunction::constant(disk(), CMultivector::scalar(2, cx(0.0, 1.0))).with_kind(StemKind::General);
        let s = riesz_dunford_matrix(&f, &t, None, &ContourPolicy::default(), &QuadratureOptions::default()).unwrap();
        assert!(flat_residual(&s) > 1e-3);
        let r = riesz_dunford_eval(&f, &t, None, &ContourPolicy::default(), &QuadratureOptions::default(), 1e-9);
        assert!(matches!(r, Err(Error::StemViolation { .. })));
    }

    #[test]
    fn spectral_mapping_of_square() {
        let t = CliffordOperator::from_paravector(&parse_paravector("e1", 1).unwrap());
        let sq = StemFunction::scalar(1, disk(), |z| z * z);
        let d = spectral_mapping_check(&sq, &t, &ContourPolicy::default(), &QuadratureOptions::default()).unwrap();
        assert!(d < 1e-10);
    }

    #[test]
    fn flat_conj_examples() {
        let i = identity::<f64>(3) * cx(0.0, 1.0);
        assert_eq!(flat_conj(&i), identity::<f64>(3) * cx(0.0, -1.0));
        let real = sample_op().complexify();
        assert_eq!(flat_conj(&real), real);
    }
}
