//! Stem functions: `K_n`-valued evaluators on a conjugate-symmetric domain.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use super::domain::PlanarDomain;
use crate::clifford::CMultivector;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Caller-declared nature of a stem function.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StemKind {
    General,
    /// Values carry only the scalar blade.
    ComplexValued,
    /// Declared holomorphic; checked numerically rather than trusted.
    AnalyticClaimed,
}

/// A reentrant map `ζ -> F(ζ)`.
pub trait Evaluator<T: Real>: Send + Sync {
    fn eval(&self, z: Complex<T>) -> Result<CMultivector<T>>;

    /// Exact `order`-th complex derivative when the evaluator knows one.
    fn derivative(&self, _order: usize, _z: Complex<T>) -> Option<Result<CMultivector<T>>> {
        None
    }
}

struct FnEvaluator<F>(F);

impl<T: Real, F> Evaluator<T> for FnEvaluator<F>
where
    F: Fn(Complex<T>) -> Result<CMultivector<T>> + Send + Sync,
{
    fn eval(&self, z: Complex<T>) -> Result<CMultivector<T>> {
        (self.0)(z)
    }
}

#[derive(Clone)]
pub struct StemFunction<T: Real> {
    n: usize,
    domain: PlanarDomain<T>,
    kind: StemKind,
    evaluator: Arc<dyn Evaluator<T>>,
    singularities: Vec<Complex<T>>,
}

impl<T: Real> fmt::Debug for StemFunction<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("StemFunction")
            .field("n", &self.n)
            .field("domain", &self.domain)
            .field("kind", &self.kind)
            .field("singularities", &self.singularities)
            .finish_non_exhaustive()
    }
}

impl<T: Real> StemFunction<T> {
    pub fn from_evaluator(
        n: usize,
        domain: PlanarDomain<T>,
        kind: StemKind,
        evaluator: Arc<dyn Evaluator<T>>,
    ) -> Self {
        StemFunction { n, domain, kind, evaluator, singularities: Vec::new() }
    }

    /// Wraps a fallible closure returning `K_n` values of rank `n`.
    pub fn new<F>(n: usize, domain: PlanarDomain<T>, kind: StemKind, f: F) -> Self
    where
        F: Fn(Complex<T>) -> Result<CMultivector<T>> + Send + Sync + 'static,
    {
        Self::from_evaluator(n, domain, kind, Arc::new(FnEvaluator(f)))
    }

    /// Wraps a complex scalar function, embedded on the scalar blade.
    pub fn scalar<F>(n: usize, domain: PlanarDomain<T>, f: F) -> Self
    where
        F: Fn(Complex<T>) -> Complex<T> + Send + Sync + 'static,
    {
        Self::new(n, domain, StemKind::ComplexValued, move |z| Ok(CMultivector::scalar(n, f(z))))
    }

    /// Constant function.
    pub fn constant(domain: PlanarDomain<T>, value: CMultivector<T>) -> Self {
        let kind = if value.is_scalar() { StemKind::ComplexValued } else { StemKind::AnalyticClaimed };
        Self::new(value.rank(), domain, kind, move |_| Ok(value.clone()))
    }

    /// Records isolated singularities that contours must avoid.
    pub fn with_singularities(mut self, points: Vec<Complex<T>>) -> Self {
        self.singularities = points;
        self
    }

    pub fn with_kind(mut self, kind: StemKind) -> Self {
        self.kind = kind;
        self
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn domain(&self) -> &PlanarDomain<T> {
        &self.domain
    }

    pub fn kind(&self) -> StemKind {
        self.kind
    }

    pub fn singularities(&self) -> &[Complex<T>] {
        &self.singularities
    }

    pub fn evaluator(&self) -> &Arc<dyn Evaluator<T>> {
        &self.evaluator
    }

    /// `F(z)`, rejecting points outside the domain and rank-inconsistent values.
    pub fn eval(&self, z: Complex<T>) -> Result<CMultivector<T>> {
        if !self.domain.contains(z) {
            return Err(Error::OutsideDomain { re: z.re.to_f64_lossy(), im: z.im.to_f64_lossy() });
        }
        let v = self.evaluator.eval(z)?;
        if v.rank() != self.n {
            return Err(Error::RankMismatch { left: self.n, right: v.rank() });
        }
        Ok(v)
    }

    /// Exact derivative if the evaluator provides one.
    pub fn exact_derivative(&self, order: usize, z: Complex<T>) -> Option<Result<CMultivector<T>>> {
        if order == 0 {
            return Some(self.eval(z));
        }
        self.evaluator.derivative(order, z)
    }

    /// Pointwise product `ζ -> F(ζ) G(ζ)` on the intersection of the domains.
    pub fn product(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::RankMismatch { left: self.n, right: other.n });
        }
        let (f, g) = (self.clone(), other.clone());
        let kind = combine_kinds(self.kind, other.kind);
        let mut out = Self::new(self.n, self.domain.clone(), kind, move |z| f.eval(z)?.try_mul(&g.eval(z)?));
        out.singularities = merged(&self.singularities, &other.singularities);
        Ok(out)
    }

    /// `α F + β G` for real `α`, `β`.
    pub fn linear_combination(&self, alpha: T, other: &Self, beta: T) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::RankMismatch { left: self.n, right: other.n });
        }
        let (f, g) = (self.clone(), other.clone());
        let kind = combine_kinds(self.kind, other.kind);
        let mut out = Self::new(self.n, self.domain.clone(), kind, move |z| {
            f.eval(z)?.scale_real(alpha).try_add(&g.eval(z)?.scale_real(beta))
        });
        out.singularities = merged(&self.singularities, &other.singularities);
        Ok(out)
    }
}

fn combine_kinds(a: StemKind, b: StemKind) -> StemKind {
    use StemKind::*;
    match (a, b) {
        (ComplexValued, ComplexValued) => ComplexValued,
        (General, _) | (_, General) => General,
        _ => AnalyticClaimed,
    }
}

fn merged<T: Real>(a: &[Complex<T>], b: &[Complex<T>]) -> Vec<Complex<T>> {
    let mut out = a.to_vec();
    out.extend(b.iter().filter(|z| !a.contains(z)));
    out
}
