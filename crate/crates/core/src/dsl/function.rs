//! DSL expressions as stem functions.

use std::sync::{Arc, RwLock};

use num_complex::Complex;

use super::{differentiate, parse, Expr};
use crate::clifford::CMultivector;
use crate::error::Result;
use crate::scalar::{cx, Real};
use crate::stem::{Evaluator, PlanarDomain, StemFunction, StemKind};

/// Radius of the centred disk used when no domain is given.
pub const DEFAULT_DSL_RADIUS: f64 = 10.0;

const POLE_GRID: usize = 81;
const NEWTON_STEPS: usize = 60;

/// A parsed expression with lazily computed symbolic derivatives.
#[derive(Debug)]
pub struct DslFunction {
    n: usize,
    derivatives: RwLock<Vec<Expr>>,
}

impl DslFunction {
    pub fn new(expr: Expr, n: usize) -> Self {
        DslFunction { n, derivatives: RwLock::new(vec![expr]) }
    }

    pub fn expr(&self) -> Expr {
        self.nth(0)
    }

    /// The `order`-th derivative as an expression.
    pub fn nth(&self, order: usize) -> Expr {
        if let Some(e) = self.derivatives.read().expect("derivative cache poisoned").get(order) {
            return e.clone();
        }
        let mut cache = self.derivatives.write().expect("derivative cache poisoned");
        while cache.len() <= order {
            let next = differentiate(cache.last().expect("cache starts nonempty"));
            cache.push(next);
        }
        cache[order].clone()
    }

    fn with_nth<R>(&self, order: usize, f: impl FnOnce(&Expr) -> R) -> R {
        {
            let cache = self.derivatives.read().expect("derivative cache poisoned");
            if let Some(e) = cache.get(order) {
                return f(e);
            }
        }
        f(&self.nth(order))
    }
}

impl<T: Real> Evaluator<T> for DslFunction {
    fn eval(&self, z: Complex<T>) -> Result<CMultivector<T>> {
        self.with_nth(0, |e| e.eval(self.n, z))
    }

    fn derivative(&self, order: usize, z: Complex<T>) -> Option<Result<CMultivector<T>>> {
        Some(self.with_nth(order, |e| e.eval(self.n, z)))
    }
}

/// Zeros of the scalar divisors of `expr` inside `domain`.
///
/// Heuristic: local minima of `|divisor|` on a grid over the domain's bounding
/// box seed Newton's method; converged roots inside the domain are kept.
/// Zeros missed by the grid are still caught at evaluation time as division errors.
pub fn find_poles(expr: &Expr, domain: &PlanarDomain<f64>) -> Vec<Complex<f64>> {
    let (lo, hi) = bounding_box(domain);
    let mut poles: Vec<Complex<f64>> = Vec::new();
    for divisor in expr.divisors() {
        if divisor.is_constant() {
            continue;
        }
        let derivative = differentiate(divisor);
        let at = |z: Complex<f64>| divisor.eval_scalar(z).unwrap_or(cx(f64::NAN, f64::NAN));
        let step = |k: usize, a: f64, b: f64| a + (b - a) * k as f64 / (POLE_GRID - 1) as f64;
        let grid: Vec<Vec<f64>> = (0..POLE_GRID)
            .map(|i| (0..POLE_GRID).map(|j| at(cx(step(i, lo.re, hi.re), step(j, lo.im, hi.im))).norm()).collect())
            .collect();
        for i in 0..POLE_GRID {
            for j in 0..POLE_GRID {
                let v = grid[i][j];
                if v.is_nan() {
                    continue;
                }
                let is_min = (i.saturating_sub(1)..=(i + 1).min(POLE_GRID - 1))
                    .flat_map(|a| (j.saturating_sub(1)..=(j + 1).min(POLE_GRID - 1)).map(move |b| (a, b)))
                    .all(|(a, b)| grid[a][b].is_nan() || grid[a][b] >= v);
                if !is_min {
                    continue;
                }
                let seed = cx(step(i, lo.re, hi.re), step(j, lo.im, hi.im));
                if let Some(root) = newton(&at, &derivative, seed) {
                    let tol = 1e-6 * (1.0 + root.norm());
                    if domain.contains(root) && !poles.iter().any(|p| (p - root).norm() <= tol) {
                        poles.push(root);
                    }
                }
            }
        }
    }
    poles.sort_by(crate::linalg::cmp_complex);
    poles
}

fn newton(at: &dyn Fn(Complex<f64>) -> Complex<f64>, derivative: &Expr, seed: Complex<f64>) -> Option<Complex<f64>> {
    let mut z = seed;
    for _ in 0..NEWTON_STEPS {
        let v = at(z);
        if v.norm() == 0.0 {
            return Some(z);
        }
        let d = derivative.eval_scalar(z).ok()?;
        if d.norm() == 0.0 || !d.norm().is_finite() {
            break;
        }
        let dz = v / d;
        z -= dz;
        if !z.norm().is_finite() {
            return None;
        }
        if dz.norm() <= 1e-14 * (1.0 + z.norm()) {
            break;
        }
    }
    // Multiple roots converge slowly; accept anything with a tiny residual.
    let scale = 1.0 + at(z + cx(1.0, 0.0)).norm();
    (at(z).norm() <= 1e-10 * scale).then_some(z)
}

fn bounding_box(domain: &PlanarDomain<f64>) -> (Complex<f64>, Complex<f64>) {
    let mut lo = cx(f64::INFINITY, f64::INFINITY);
    let mut hi = cx(f64::NEG_INFINITY, f64::NEG_INFINITY);
    let mut grow = |a: Complex<f64>, b: Complex<f64>| {
        lo = cx(lo.re.min(a.re), lo.im.min(a.im));
        hi = cx(hi.re.max(b.re), hi.im.max(b.im));
    };
    for d in domain.disks() {
        grow(d.center - cx(d.radius, d.radius), d.center + cx(d.radius, d.radius));
    }
    for r in domain.rects() {
        grow(cx(r.re.0, r.im.0), cx(r.re.1, r.im.1));
    }
    (lo, hi)
}

/// Parses `src` and wraps it as a stem function of rank `n`.
///
/// The domain defaults to the disk of radius [`DEFAULT_DSL_RADIUS`] about 0.
/// Poles found by [`find_poles`] are recorded as singularities.
pub fn stem_function<T: Real>(src: &str, n: usize, domain: Option<PlanarDomain<T>>) -> Result<StemFunction<T>> {
    let expr = parse(src, n)?;
    let domain = match domain {
        Some(d) => d,
        None => PlanarDomain::disk(cx(T::zero(), T::zero()), T::lit(DEFAULT_DSL_RADIUS))?,
    };
    let domain64 = PlanarDomain::<f64>::from_json(&domain.to_json())?;
    let poles = find_poles(&expr, &domain64)
        .into_iter()
        .map(|p| cx(T::lit(p.re), T::lit(p.im)))
        .collect();
    let kind = if expr.is_scalar() { StemKind::ComplexValued } else { StemKind::AnalyticClaimed };
    Ok(StemFunction::from_evaluator(n, domain, kind, Arc::new(DslFunction::new(expr, n))).with_singularities(poles))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    #[test]
    fn poles_of_rational_functions() {
        let domain = PlanarDomain::disk(cx(0.0, 0.0), 10.0).unwrap();
        let e = parse("1/(z^2 + 1) + e1/(z - 2.5)", 1).unwrap();
        let poles = find_poles(&e, &domain);
        assert_eq!(poles.len(), 3, "{poles:?}");
        for expected in [cx(0.0, -1.0), cx(0.0, 1.0), cx(2.5, 0.0)] {
            assert!(poles.iter().any(|p| (p - expected).norm() < 1e-9));
        }
        assert!(find_poles(&parse("1/(z - 20)", 0).unwrap(), &domain).is_empty());
        let double = find_poles(&parse("1/(z - 0.3)^2", 0).unwrap(), &domain);
        assert_eq!(double.len(), 1);
        assert!((double[0] - cx(0.3, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn exact_derivatives_through_the_evaluator() {
        let f = stem_function::<f64>("z^3*e1 + sin(z)", 1, None).unwrap();
        let z = cx(0.4, -0.7);
        let d2 = f.exact_derivative(2, z).unwrap().unwrap();
        let expected0 = 6.0 * z;
        let expected1 = -z.sin();
        assert!((d2.coeffs()[1] - expected0).norm() < 1e-13);
        assert!((d2.coeffs()[0] - expected1).norm() < 1e-13);
        assert_eq!(f.kind(), StemKind::AnalyticClaimed);
    }
}
