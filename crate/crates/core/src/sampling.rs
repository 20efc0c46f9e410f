//! Seeded random inputs for property suites.
//!
//! Every generator draws from a caller-owned [`ChaCha8Rng`], so a fixed seed
//! reproduces the same cases on every platform.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use num_complex::Complex;

use crate::clifford::{parse_multivector, BasisIndex, CMultivector, Multivector, Paravector};
use crate::dsl::{Expr, Func};
use crate::operator::CliffordOperator;
use crate::scalar::{cx, Real};
use crate::stem::{PlanarDomain, StemFunction, StemKind};

pub const DEFAULT_SEED: u64 = 20_240_917;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn uniform<T: Real>(rng: &mut ChaCha8Rng, scale: f64) -> T {
    T::lit(rng.random_range(-scale..=scale))
}

/// Dense multivector with coefficients uniform in `[-scale, scale]`.
pub fn multivector<T: Real>(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Multivector<T> {
    let coeffs = (0..1usize << n).map(|_| uniform(rng, scale)).collect();
    Multivector::new(n, coeffs).expect("length matches rank")
}

pub fn cmultivector<T: Real>(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> CMultivector<T> {
    let re = multivector(rng, n, scale);
    let im = multivector(rng, n, scale);
    CMultivector::from_parts(&re, &im).expect("equal ranks")
}

/// Paravector uniform in the ball of radius `radius`.
pub fn paravector<T: Real>(rng: &mut ChaCha8Rng, n: usize, radius: f64) -> Paravector<T> {
    loop {
        let comps: Vec<f64> = (0..=n).map(|_| rng.random_range(-radius..=radius)).collect();
        if comps.iter().map(|c| c * c).sum::<f64>() <= radius * radius {
            return Paravector::new(n, comps.into_iter().map(T::lit).collect()).expect("n + 1 components");
        }
    }
}

/// Paravector with a nonzero imaginary part of at least `min_im`, inside the ball of radius `radius`.
pub fn nonreal_paravector<T: Real>(rng: &mut ChaCha8Rng, n: usize, radius: f64, min_im: f64) -> Paravector<T> {
    assert!(n >= 1, "rank 0 has no imaginary units");
    loop {
        let k: Paravector<T> = paravector(rng, n, radius);
        if k.im_norm().to_f64_lossy() >= min_im {
            return k;
        }
    }
}

/// Uniformly distributed unit imaginary paravector (`n >= 1`).
pub fn unit_imaginary<T: Real>(rng: &mut ChaCha8Rng, n: usize) -> Paravector<T> {
    nonreal_paravector::<T>(rng, n, 1.0, 0.1).unit_imag().expect("nonzero imaginary part")
}

/// Operator with every component matrix entry uniform in `[-scale, scale]`.
pub fn operator<T: Real>(rng: &mut ChaCha8Rng, d: usize, n: usize, scale: f64) -> CliffordOperator<T> {
    let components: Vec<_> = (0..1u32 << n)
        .map(|bits| (BasisIndex(bits), DMatrix::from_fn(d, d, |_, _| uniform(rng, scale))))
        .collect();
    CliffordOperator::new(d, n, components).expect("consistent shapes")
}

/// Operator supported on the paravector blades `1, e_1, .., e_n`.
pub fn tuple_operator<T: Real>(rng: &mut ChaCha8Rng, d: usize, n: usize, scale: f64) -> CliffordOperator<T> {
    let mats: Vec<DMatrix<T>> = (0..=n).map(|_| DMatrix::from_fn(d, d, |_, _| uniform(rng, scale))).collect();
    CliffordOperator::tuple(&mats).expect("consistent shapes")
}

/// Coefficients `a_0 .. a_degree` of a polynomial with `Cl_n` coefficients.
pub fn polynomial_coeffs(rng: &mut ChaCha8Rng, n: usize, degree: usize, scale: f64) -> Vec<Multivector<f64>> {
    (0..=degree).map(|_| sparse_multivector(rng, n, scale)).collect()
}

fn round2(x: f64) -> f64 {
    (x * 100.0).round() / 100.0
}

/// Multivector with each blade present with probability one half and short decimal coefficients.
fn sparse_multivector(rng: &mut ChaCha8Rng, n: usize, scale: f64) -> Multivector<f64> {
    let mut m = Multivector::zero(n);
    for (i, c) in m.coeffs_mut().iter_mut().enumerate() {
        if i == 0 || rng.random_bool(0.5) {
            *c = round2(rng.random_range(-scale..=scale));
        }
    }
    m
}

/// Expression for a multivector constant, e.g. `0.5 - 0.25e12`.
pub fn constant_expr(m: &Multivector<f64>) -> Expr {
    let terms: Vec<Expr> = m
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(i, &c)| Expr::Literal { coeff: c.abs(), blade: BasisIndex(i as u32) }.signed(c < 0.0))
        .collect();
    sum(terms)
}

impl Expr {
    fn signed(self, negative: bool) -> Expr {
        if negative {
            Expr::Neg(Box::new(self))
        } else {
            self
        }
    }
}

fn sum(terms: Vec<Expr>) -> Expr {
    let mut iter = terms.into_iter();
    let Some(first) = iter.next() else {
        return Expr::number(0.0);
    };
    iter.fold(first, |acc, t| match t {
        Expr::Neg(inner) => Expr::Sub(Box::new(acc), inner),
        t => Expr::Add(Box::new(acc), Box::new(t)),
    })
}

fn mul(a: Expr, b: Expr) -> Expr {
    Expr::Mul(Box::new(a), Box::new(b))
}

/// `Σ a_k z^k` as an expression.
pub fn polynomial_expr(coeffs: &[Multivector<f64>]) -> Expr {
    let terms = coeffs
        .iter()
        .enumerate()
        .filter(|(_, a)| a.coeffs().iter().any(|c| *c != 0.0))
        .map(|(k, a)| match k {
            0 => constant_expr(a),
            1 => mul(constant_expr(a), Expr::Var),
            k => mul(constant_expr(a), Expr::Pow(Box::new(Expr::Var), k as u32)),
        })
        .collect();
    sum(terms)
}

/// Shape of random DSL expressions.
#[derive(Clone, Copy, Debug)]
pub struct ExprOptions {
    pub max_degree: usize,
    pub coeff_scale: f64,
    /// Include a Clifford multiple of `exp/sin/cos/sinh/cosh(a z + b)`.
    pub transcendental: bool,
    /// Include a term with a real pole of modulus between 3 and 5.
    pub rational: bool,
}

impl Default for ExprOptions {
    fn default() -> Self {
        ExprOptions { max_degree: 3, coeff_scale: 1.0, transcendental: true, rational: true }
    }
}

/// Random stem-function expression: a polynomial with `Cl_n` coefficients plus optional
/// transcendental and rational terms, all with real coefficients.
pub fn expr(rng: &mut ChaCha8Rng, n: usize, opts: &ExprOptions) -> Expr {
    let degree = rng.random_range(0..=opts.max_degree);
    let mut terms = vec![polynomial_expr(&polynomial_coeffs(rng, n, degree, opts.coeff_scale))];
    if opts.transcendental && rng.random_bool(0.7) {
        let f = Func::ALL[rng.random_range(0..Func::ALL.len())];
        let a = round2(rng.random_range(0.2..=1.0)) * if rng.random_bool(0.5) { -1.0 } else { 1.0 };
        let b = round2(rng.random_range(-0.5..=0.5));
        let linear = mul(Expr::number(a.abs()).signed(a < 0.0), Expr::Var);
        let arg = if b == 0.0 { linear } else { sum(vec![linear, Expr::number(b.abs()).signed(b < 0.0)]) };
        terms.push(mul(constant_expr(&sparse_multivector(rng, n, opts.coeff_scale)), Expr::Call(f, Box::new(arg))));
    }
    if opts.rational && rng.random_bool(0.5) {
        let p = round2(rng.random_range(3.0..=5.0)) * if rng.random_bool(0.5) { -1.0 } else { 1.0 };
        let divisor = sum(vec![Expr::Var, Expr::number(p.abs()).signed(p > 0.0)]);
        terms.push(Expr::Div(
            Box::new(constant_expr(&sparse_multivector(rng, n, opts.coeff_scale))),
            Box::new(divisor),
        ));
    }
    sum(terms)
}

/// Random complex-valued polynomial with real coefficients, as an expression.
pub fn scalar_polynomial_expr(rng: &mut ChaCha8Rng, degree: usize, scale: f64) -> Expr {
    polynomial_expr(&polynomial_coeffs(rng, 0, degree, scale))
}

/// A point of the open unit disk scaled by `radius`, as a complex number.
pub fn complex_point(rng: &mut ChaCha8Rng, radius: f64) -> Complex<f64> {
    loop {
        let z = cx(rng.random_range(-1.0..=1.0), rng.random_range(-1.0..=1.0));
        if z.norm() < 1.0 {
            return z * radius;
        }
    }
}

/// Ten evaluators that violate `F(conj λ) = bar(F(λ))`, on the disk of radius 10 (`n >= 2`).
pub fn non_stem_functions(n: usize) -> Vec<(&'static str, StemFunction<f64>)> {
    assert!(n >= 2, "the family uses e1 and e2");
    let domain = PlanarDomain::disk(cx(0.0, 0.0), 10.0).expect("valid disk");
    let blade = |key: &str| parse_multivector::<f64>(key, n).expect("valid blade").to_complex();
    let i = cx(0.0, 1.0);
    let (e1, e12) = (blade("e1"), blade("e12"));
    let scalar = move |z: Complex<f64>| CMultivector::scalar(n, z);
    let build = |f: Box<dyn Fn(Complex<f64>) -> CMultivector<f64> + Send + Sync>| {
        StemFunction::new(n, domain.clone(), StemKind::General, move |z| Ok(f(z)))
    };
    vec![
        ("i", build(Box::new(move |_| scalar(i)))),
        ("i*z", build(Box::new(move |z| scalar(i * z)))),
        ("i*e1*z", build({
            let e1 = e1.clone();
            Box::new(move |z| e1.scale(i * z))
        })),
        ("exp(i*z)", build(Box::new(move |z| scalar((i * z).exp())))),
        ("z + 0.1i*z^2", build(Box::new(move |z| scalar(z + i * z * z * 0.1)))),
        ("Im(z)*e1", build({
            let e1 = e1.clone();
            Box::new(move |z| e1.scale_real(z.im))
        })),
        ("(1 + 0.5i)*sin(z)", build(Box::new(move |z| scalar(cx(1.0, 0.5) * z.sin())))),
        ("(z - 0.3i)^2", build(Box::new(move |z| scalar((z - i * 0.3).powu(2))))),
        ("i*e12*z^2", build(Box::new(move |z| e12.scale(i * z * z)))),
        ("exp(z)*e1 + 0.2i", build(Box::new(move |z| {
            e1.scale(z.exp()).try_add(&scalar(i * 0.2)).expect("equal ranks")
        }))),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dsl::parse;

    #[test]
    fn generators_are_reproducible() {
        let a: Multivector<f64> = multivector(&mut rng(7), 3, 1.0);
        let b: Multivector<f64> = multivector(&mut rng(7), 3, 1.0);
        assert_eq!(a, b);
        let k: Paravector<f64> = paravector(&mut rng(1), 4, 1.5);
        assert!(k.norm() <= 1.5);
        let u: Paravector<f64> = unit_imaginary(&mut rng(2), 3);
        assert!((u.im_norm() - 1.0).abs() < 1e-15 && u.re() == 0.0);
    }

    #[test]
    fn random_expressions_print_and_parse_back() {
        let mut r = rng(3);
        for n in 0..4 {
            for _ in 0..50 {
                let e = expr(&mut r, n, &ExprOptions::default());
                let text = e.to_string();
                assert_eq!(parse(&text, n).unwrap(), e, "{text}");
            }
        }
    }
}
