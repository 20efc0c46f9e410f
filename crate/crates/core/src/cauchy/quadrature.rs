//! Trapezoidal quadrature on circles with nested node doubling.
//!
//! For a circle `ζ = c + r e^{iθ}`, `(1/2πi) ∮ g(ζ) dζ = (1/2π) ∫ g(ζ)(ζ - c) dθ`,
//! approximated by the mean of `g(ζ_k)(ζ_k - c)` over equispaced `θ_k`.

use nalgebra::DMatrix;
use num_complex::Complex;

use super::contour::{Circle, Contour};
use crate::clifford::CMultivector;
use crate::error::{Error, Result};
use crate::scalar::{pairwise_sum, Real};

pub const DEFAULT_INITIAL_NODES: usize = 64;
pub const DEFAULT_MAX_NODES: usize = 4096;
pub const DEFAULT_QUADRATURE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QuadratureOptions<T> {
    /// Upper bound on nodes per circle.
    pub max_nodes: usize,
    /// Doubling stops once successive estimates differ by at most `tol * max(1, mass)`,
    /// where `mass` is the quadrature of the integrand's magnitude.
    pub tol: T,
}

impl<T: Real> Default for QuadratureOptions<T> {
    fn default() -> Self {
        let tol = T::lit(DEFAULT_QUADRATURE_TOL).max(T::epsilon() * T::lit(100.0));
        QuadratureOptions { max_nodes: DEFAULT_MAX_NODES, tol }
    }
}

/// Values that can be summed by the quadrature engine.
pub trait QuadValue<T: Real>: Clone {
    fn add(&self, other: &Self) -> Self;
    fn scale(&self, s: T) -> Self;
    fn dist(&self, other: &Self) -> T;
    fn magnitude(&self) -> T;
}

impl<T: Real> QuadValue<T> for CMultivector<T> {
    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn scale(&self, s: T) -> Self {
        self.scale_real(s)
    }

    fn dist(&self, other: &Self) -> T {
        CMultivector::dist(self, other)
    }

    fn magnitude(&self) -> T {
        self.norm()
    }
}

impl<T: Real> QuadValue<T> for DMatrix<Complex<T>> {
    fn add(&self, other: &Self) -> Self {
        self + other
    }

    fn scale(&self, s: T) -> Self {
        self.map(|z| z * s)
    }

    fn dist(&self, other: &Self) -> T {
        self.iter().zip(other.iter()).map(|(a, b)| (*a - *b).norm_sqr()).sum::<T>().sqrt()
    }

    fn magnitude(&self) -> T {
        self.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt()
    }
}

/// One quadrature node on a circle.
#[derive(Clone, Copy, Debug)]
pub struct Node<T> {
    pub zeta: Complex<T>,
    pub center: Complex<T>,
    pub radius: T,
    /// Angle `θ_k`.
    pub theta: T,
}

#[derive(Clone, Debug)]
pub struct QuadratureResult<V, T> {
    pub value: V,
    pub nodes_per_circle: usize,
    /// Difference between the last two doubling estimates.
    pub change: T,
    /// Quadrature of the term magnitudes, the scale for `change`.
    pub mass: T,
}

fn node_at<T: Real>(c: &Circle<T>, k: usize, n: usize) -> Node<T> {
    let theta = T::lit(std::f64::consts::TAU * k as f64 / n as f64);
    let zeta = c.center + Complex::from_polar(c.radius, theta);
    Node { zeta, center: c.center, radius: c.radius, theta }
}

/// Mean over equispaced nodes of `term(node)` on each circle, summed over circles.
///
/// `term` must return the full trapezoid summand, e.g. `g(ζ)(ζ - c)` for a Cauchy
/// integral. Node counts double from `contour.nodes_per_circle` until the
/// convergence test of [`QuadratureOptions`] passes; summation order is fixed,
/// so results are reproducible bit for bit.
pub fn integrate<T, V, F>(contour: &Contour<T>, opts: &QuadratureOptions<T>, term: F) -> Result<QuadratureResult<V, T>>
where
    T: Real,
    V: QuadValue<T>,
    F: Fn(&Node<T>) -> Result<V>,
{
    if contour.circles.is_empty() {
        return Err(Error::Invalid("empty contour".into()));
    }
    let mut n = contour.nodes_per_circle.max(1);
    if 2 * n > opts.max_nodes {
        return Err(Error::Invalid(format!("node cap {} leaves no room to double {n} nodes", opts.max_nodes)));
    }
    let mut terms: Vec<Vec<V>> = Vec::with_capacity(contour.circles.len());
    for c in &contour.circles {
        terms.push((0..n).map(|k| term(&node_at(c, k, n))).collect::<Result<_>>()?);
    }
    let mut prev = estimate(&terms, n);
    loop {
        let n2 = 2 * n;
        for (c, old) in contour.circles.iter().zip(terms.iter_mut()) {
            let mut refined = Vec::with_capacity(n2);
            for (k, t) in old.drain(..).enumerate() {
                refined.push(t);
                refined.push(term(&node_at(c, 2 * k + 1, n2))?);
            }
            *old = refined;
        }
        n = n2;
        let next = estimate(&terms, n);
        let change = next.dist(&prev);
        let mass = mass_of(&terms, n);
        if change <= opts.tol * mass.max(T::one()) {
            return Ok(QuadratureResult { value: next, nodes_per_circle: n, change, mass });
        }
        if 2 * n > opts.max_nodes {
            return Err(Error::NonConvergence { what: "contour quadrature", residual: change.to_f64_lossy() });
        }
        prev = next;
    }
}

fn estimate<T: Real, V: QuadValue<T>>(terms: &[Vec<V>], n: usize) -> V {
    let inv = T::one() / T::from(n).expect("node count fits in a float");
    let per_circle: Vec<V> = terms
        .iter()
        .map(|t| pairwise_sum(t, &|a: &V, b: &V| a.add(b)).expect("nonempty node set").scale(inv))
        .collect();
    pairwise_sum(&per_circle, &|a: &V, b: &V| a.add(b)).expect("nonempty contour")
}

fn mass_of<T: Real, V: QuadValue<T>>(terms: &[Vec<V>], n: usize) -> T {
    let inv = T::one() / T::from(n).expect("node count fits in a float");
    terms.iter().flatten().map(|t| t.magnitude()).sum::<T>() * inv
}
