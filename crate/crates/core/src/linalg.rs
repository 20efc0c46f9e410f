//! Dense complex linear algebra on top of nalgebra.

use nalgebra::{ComplexField, DMatrix, Schur};
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Real;

/// Dense complex matrix; the carrier of complexified operators.
pub type ComplexMatrix<T> = DMatrix<Complex<T>>;

/// Default cap on matrix size for eigenvalue computations.
pub const DEFAULT_SIZE_CAP: usize = 256;
/// Relative pivot threshold below which a matrix counts as singular.
pub const DEFAULT_SINGULAR_TOL: f64 = 1e-10;
/// Deflation tolerance of the Schur iteration.
pub const DEFLATION_TOL: f64 = 1e-13;

fn to_field<T: Real>(m: &ComplexMatrix<T>) -> DMatrix<Complex<T::Field>> {
    m.map(|z| Complex::new(z.re.to_field(), z.im.to_field()))
}

fn from_field<T: Real>(m: &DMatrix<Complex<T::Field>>) -> ComplexMatrix<T> {
    m.map(|z| Complex::new(T::from_field(z.re), T::from_field(z.im)))
}

pub fn frobenius<T: Real>(m: &ComplexMatrix<T>) -> T {
    m.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
}

/// Largest entry modulus.
pub fn max_norm<T: Real>(m: &ComplexMatrix<T>) -> T {
    m.iter().map(|z| z.norm()).fold(T::zero(), T::max)
}

pub fn identity<T: Real>(size: usize) -> ComplexMatrix<T> {
    ComplexMatrix::identity(size, size)
}

pub fn from_real<T: Real>(m: &DMatrix<T>) -> ComplexMatrix<T> {
    m.map(|x| Complex::new(x, T::zero()))
}

/// Solves `a x = b` by LU with partial pivoting.
pub fn solve<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    if !a.is_square() || a.nrows() != b.nrows() {
        return Err(Error::DimensionMismatch(format!(
            "cannot solve {}x{} system with {} right-hand rows",
            a.nrows(),
            a.ncols(),
            b.nrows()
        )));
    }
    let lu = to_field(a).lu();
    let u = lu.u();
    let pivot = u.diagonal().iter().map(|z| z.modulus()).fold(None, |acc: Option<T::Field>, x| {
        Some(match acc {
            Some(a) if a < x => a,
            _ => x,
        })
    });
    let scale = max_norm(a);
    let pivot = pivot.map(T::from_field).unwrap_or_else(T::zero);
    if pivot <= T::epsilon() * scale * T::from(a.nrows()).expect("size fits") {
        return Err(Error::SingularMatrix { pivot: pivot.to_f64_lossy() });
    }
    lu.solve(&to_field(b))
        .map(|x| from_field::<T>(&x))
        .ok_or(Error::SingularMatrix { pivot: pivot.to_f64_lossy() })
}

pub fn inverse<T: Real>(a: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    solve(a, &identity(a.nrows()))
}

/// Rank-revealing verdict from a column-pivoted QR factorization.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SingularityTest<T> {
    pub singular: bool,
    /// Smallest `|R_ii|` relative to the largest entry of the matrix.
    pub relative_pivot: T,
    pub threshold: T,
}

impl<T: Real> SingularityTest<T> {
    /// `log10(relative_pivot / threshold)`: how far the verdict is from flipping.
    pub fn margin(&self) -> T {
        (self.relative_pivot / self.threshold).log10()
    }
}

pub fn singularity_test<T: Real>(a: &ComplexMatrix<T>, rel_tol: T) -> SingularityTest<T> {
    singularity_test_scaled(a, max_norm(a), rel_tol)
}

/// As [`singularity_test`], with pivots measured against `scale` (at least the largest entry).
///
/// Use when `a` is formed by cancellation and its own entries understate the working magnitude.
pub fn singularity_test_scaled<T: Real>(a: &ComplexMatrix<T>, scale: T, rel_tol: T) -> SingularityTest<T> {
    let scale = scale.max(max_norm(a));
    if scale == T::zero() || a.nrows() == 0 {
        return SingularityTest { singular: a.nrows() > 0, relative_pivot: T::zero(), threshold: rel_tol };
    }
    let qr = to_field(a).col_piv_qr();
    let r = qr.unpack_r();
    let min_pivot = r
        .diagonal()
        .iter()
        .map(|z| T::from_field(z.modulus()))
        .fold(T::infinity(), T::min);
    let relative_pivot = min_pivot / scale;
    SingularityTest { singular: relative_pivot < rel_tol, relative_pivot, threshold: rel_tol }
}

fn check_size(size: usize, cap: usize) -> Result<()> {
    if size > cap {
        return Err(Error::TooLarge { size, cap });
    }
    Ok(())
}

fn deflation_eps<T: Real>() -> T::Field {
    T::lit(DEFLATION_TOL).max(T::epsilon() * T::lit(4.0)).to_field()
}

/// Eigenvalues of a real matrix: balancing, then the real Schur form.
///
/// Falls back to the complex Schur iteration when the real one stalls.
pub fn real_eigenvalues<T: Real>(a: &DMatrix<T>, cap: usize) -> Result<Vec<Complex<T>>> {
    check_size(a.nrows(), cap)?;
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let mut m = a.map(|x| x.to_field());
    nalgebra::linalg::balancing::balance_parlett_reinsch(&mut m);
    let max_iter = 100 * a.nrows();
    match Schur::try_new(m.clone(), deflation_eps::<T>(), max_iter) {
        Some(s) => Ok(s
            .complex_eigenvalues()
            .iter()
            .map(|z| Complex::new(T::from_field(z.re), T::from_field(z.im)))
            .collect()),
        None => eigenvalues(&from_real(&a.clone()), cap),
    }
}

/// Eigenvalues of a complex matrix from its complex Schur form.
pub fn eigenvalues<T: Real>(a: &ComplexMatrix<T>, cap: usize) -> Result<Vec<Complex<T>>> {
    check_size(a.nrows(), cap)?;
    if a.nrows() == 0 {
        return Ok(Vec::new());
    }
    let max_iter = 100 * a.nrows();
    let schur = Schur::try_new(to_field(a), deflation_eps::<T>(), max_iter)
        .ok_or(Error::NonConvergence { what: "Schur iteration", residual: f64::NAN })?;
    let (_, t) = schur.unpack();
    Ok(t.diagonal().iter().map(|z| Complex::new(T::from_field(z.re), T::from_field(z.im))).collect())
}

/// Reorders eigenvalues into exact conjugate pairs.
///
/// Each eigenvalue with positive imaginary part is matched to its nearest
/// partner in the lower half plane; both are replaced by the average pair.
/// Values within `real_tol` of the axis become real. Returns the pairs and the
/// largest mismatch `|λ - conj(μ)|` encountered.
pub fn pair_conjugates<T: Real>(eigs: &[Complex<T>], real_tol: T) -> (Vec<Complex<T>>, T) {
    let mut pending: Vec<Complex<T>> = eigs.to_vec();
    let mut out = Vec::with_capacity(eigs.len());
    let mut defect = T::zero();
    let scale = eigs.iter().map(|z| z.norm()).fold(T::one(), T::max);
    let near_axis = |z: &Complex<T>| z.im.abs() <= real_tol * scale;
    let mut reals: Vec<Complex<T>> = Vec::new();
    pending.retain(|z| {
        if near_axis(z) {
            reals.push(*z);
            false
        } else {
            true
        }
    });
    for z in reals {
        defect = defect.max(z.im.abs());
        out.push(Complex::new(z.re, T::zero()));
    }
    let (mut upper, mut lower): (Vec<_>, Vec<_>) = pending.into_iter().partition(|z| z.im > T::zero());
    upper.sort_by(|a, b| cmp_complex(a, b));
    for u in upper {
        let best = lower
            .iter()
            .enumerate()
            .min_by(|(_, a), (_, b)| {
                (**a - u.conj()).norm().partial_cmp(&(**b - u.conj()).norm()).unwrap_or(std::cmp::Ordering::Equal)
            })
            .map(|(i, _)| i);
        match best {
            Some(i) => {
                let l = lower.swap_remove(i);
                defect = defect.max((l - u.conj()).norm());
                let avg = Complex::new((u.re + l.re) * T::half(), (u.im - l.im) * T::half());
                out.push(avg);
                out.push(avg.conj());
            }
            None => {
                defect = defect.max(u.im.abs());
                out.push(u);
                out.push(u.conj());
            }
        }
    }
    for l in lower {
        defect = defect.max(l.im.abs());
        out.push(l.conj());
        out.push(l);
    }
    out.sort_by(cmp_complex);
    (out, defect)
}

/// Total order by real part, then imaginary part (NaNs last).
pub fn cmp_complex<T: Real>(a: &Complex<T>, b: &Complex<T>) -> std::cmp::Ordering {
    a.re.partial_cmp(&b.re)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
}

/// Hausdorff distance between two finite point sets.
pub fn hausdorff<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> T {
    if a.is_empty() || b.is_empty() {
        return if a.is_empty() && b.is_empty() { T::zero() } else { T::infinity() };
    }
    let directed = |x: &[Complex<T>], y: &[Complex<T>]| {
        x.iter()
            .map(|p| y.iter().map(|q| (*p - *q).norm()).fold(T::infinity(), T::min))
            .fold(T::zero(), T::max)
    };
    directed(a, b).max(directed(b, a))
}
