//! Symbolic differentiation in `z` and algebraic cleanup.

use super::{Expr, Func};
use crate::clifford::{blade_product, BasisIndex};

fn b(e: Expr) -> Box<Expr> {
    Box::new(e)
}

fn mul(a: Expr, c: Expr) -> Expr {
    Expr::Mul(b(a), b(c))
}

/// Derivative in `z`, simplified. Products are differentiated without
/// reordering factors, so Clifford coefficients stay where they were.
pub fn differentiate(e: &Expr) -> Expr {
    simplify(&raw_derivative(e))
}

fn raw_derivative(e: &Expr) -> Expr {
    match e {
        Expr::Literal { .. } => Expr::number(0.0),
        Expr::Var => Expr::number(1.0),
        Expr::Neg(a) => Expr::Neg(b(raw_derivative(a))),
        Expr::Add(x, y) => Expr::Add(b(raw_derivative(x)), b(raw_derivative(y))),
        Expr::Sub(x, y) => Expr::Sub(b(raw_derivative(x)), b(raw_derivative(y))),
        Expr::Mul(x, y) => Expr::Add(
            b(mul(raw_derivative(x), (**y).clone())),
            b(mul((**x).clone(), raw_derivative(y))),
        ),
        // (u/v)' = u'/v - u v'/v^2, with v scalar
        Expr::Div(u, v) => Expr::Sub(
            b(Expr::Div(b(raw_derivative(u)), v.clone())),
            b(Expr::Div(b(mul((**u).clone(), raw_derivative(v))), b(Expr::Pow(v.clone(), 2)))),
        ),
        Expr::Pow(u, k) => {
            let k = *k;
            if k == 0 {
                return Expr::number(0.0);
            }
            let du = raw_derivative(u);
            if u.is_scalar() {
                mul(mul(Expr::number(k as f64), Expr::Pow(u.clone(), k - 1)), du)
            } else {
                // Σ_j u^j u' u^{k-1-j}
                (0..k)
                    .map(|j| mul(mul(Expr::Pow(u.clone(), j), du.clone()), Expr::Pow(u.clone(), k - 1 - j)))
                    .reduce(|acc, t| Expr::Add(b(acc), b(t)))
                    .expect("k >= 1")
            }
        }
        Expr::Call(f, u) => {
            let outer = match f {
                Func::Exp => Expr::Call(Func::Exp, u.clone()),
                Func::Sin => Expr::Call(Func::Cos, u.clone()),
                Func::Cos => Expr::Neg(b(Expr::Call(Func::Sin, u.clone()))),
                Func::Sinh => Expr::Call(Func::Cosh, u.clone()),
                Func::Cosh => Expr::Call(Func::Sinh, u.clone()),
            };
            mul(outer, raw_derivative(u))
        }
    }
}

fn literal(e: &Expr) -> Option<(f64, BasisIndex)> {
    match e {
        Expr::Literal { coeff, blade } => Some((*coeff, *blade)),
        _ => None,
    }
}

fn scalar_literal(e: &Expr) -> Option<f64> {
    literal(e).filter(|(_, bl)| *bl == BasisIndex::SCALAR).map(|(c, _)| c)
}

fn is_number(e: &Expr, v: f64) -> bool {
    scalar_literal(e) == Some(v) || matches!(literal(e), Some((c, _)) if c == 0.0 && v == 0.0)
}

/// Bottom-up cleanup: folds literals, drops zeros and ones, and moves scalar
/// literal factors to the front. Never reorders non-scalar factors.
pub fn simplify(e: &Expr) -> Expr {
    match e {
        Expr::Literal { .. } | Expr::Var => e.clone(),
        Expr::Neg(a) => match simplify(a) {
            Expr::Literal { coeff, blade } => Expr::Literal { coeff: -coeff, blade },
            Expr::Neg(inner) => *inner,
            Expr::Mul(l, r) if scalar_literal(&l).is_some() => {
                mul(Expr::number(-scalar_literal(&l).expect("checked")), *r)
            }
            s => Expr::Neg(b(s)),
        },
        Expr::Add(x, y) => {
            let (x, y) = (simplify(x), simplify(y));
            match (literal(&x), literal(&y)) {
                (Some((c1, b1)), Some((c2, b2))) if b1 == b2 => Expr::Literal { coeff: c1 + c2, blade: b1 },
                _ if is_number(&x, 0.0) => y,
                _ if is_number(&y, 0.0) => x,
                _ => match y {
                    Expr::Neg(inner) => Expr::Sub(b(x), inner),
                    y => Expr::Add(b(x), b(y)),
                },
            }
        }
        Expr::Sub(x, y) => {
            let (x, y) = (simplify(x), simplify(y));
            match (literal(&x), literal(&y)) {
                (Some((c1, b1)), Some((c2, b2))) if b1 == b2 => Expr::Literal { coeff: c1 - c2, blade: b1 },
                _ if is_number(&y, 0.0) => x,
                _ if is_number(&x, 0.0) => simplify(&Expr::Neg(b(y))),
                _ => match y {
                    Expr::Neg(inner) => Expr::Add(b(x), inner),
                    y => Expr::Sub(b(x), b(y)),
                },
            }
        }
        Expr::Mul(x, y) => simplify_product(simplify(x), simplify(y)),
        Expr::Div(x, y) => {
            let (x, y) = (simplify(x), simplify(y));
            if is_number(&y, 1.0) {
                x
            } else if is_number(&x, 0.0) {
                Expr::number(0.0)
            } else {
                match (literal(&x), scalar_literal(&y)) {
                    (Some((c, bl)), Some(d)) if d != 0.0 => Expr::Literal { coeff: c / d, blade: bl },
                    _ => Expr::Div(b(x), b(y)),
                }
            }
        }
        Expr::Pow(a, k) => {
            let a = simplify(a);
            match (*k, scalar_literal(&a)) {
                (0, _) => Expr::number(1.0),
                (1, _) => a,
                (k, Some(c)) => Expr::number(c.powi(k as i32)),
                (k, None) => match a {
                    Expr::Pow(inner, j) if j.checked_mul(k).is_some() => Expr::Pow(inner, j * k),
                    a => Expr::Pow(b(a), k),
                },
            }
        }
        Expr::Call(f, a) => {
            let a = simplify(a);
            match (f, scalar_literal(&a)) {
                (Func::Exp | Func::Cos | Func::Cosh, Some(0.0)) => Expr::number(1.0),
                (Func::Sin | Func::Sinh, Some(0.0)) => Expr::number(0.0),
                _ => Expr::Call(*f, b(a)),
            }
        }
    }
}

fn simplify_product(x: Expr, y: Expr) -> Expr {
    if is_number(&x, 0.0) || is_number(&y, 0.0) {
        return Expr::number(0.0);
    }
    if is_number(&x, 1.0) {
        return y;
    }
    if is_number(&y, 1.0) {
        return x;
    }
    if let (Some((c1, b1)), Some((c2, b2))) = (literal(&x), literal(&y)) {
        let (neg, bits) = blade_product(b1.bits(), b2.bits());
        let coeff = if neg { -c1 * c2 } else { c1 * c2 };
        return Expr::Literal { coeff, blade: BasisIndex(bits) };
    }
    // Pull a leading negation out: (-u) v = -(u v).
    if let Expr::Neg(inner) = x {
        return simplify(&Expr::Neg(b(simplify_product(*inner, y))));
    }
    if let Expr::Neg(inner) = y {
        return simplify(&Expr::Neg(b(simplify_product(x, *inner))));
    }
    // Scalar literals commute: u c = c u, and c1 (c2 u) = (c1 c2) u.
    if let Some(c) = scalar_literal(&y) {
        return simplify_product(Expr::number(c), x);
    }
    if let Some(c1) = scalar_literal(&x) {
        if let Expr::Mul(l, r) = &y {
            if let Some(c2) = scalar_literal(l) {
                return simplify_product(Expr::number(c1 * c2), (**r).clone());
            }
        }
    }
    mul(x, y)
}
