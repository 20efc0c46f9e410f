//! Printing with the fewest parentheses that parse back to the same tree.

use std::fmt;

use super::Expr;
use crate::clifford::BasisIndex;

const SUM: u8 = 1;
const PRODUCT: u8 = 2;
const UNARY: u8 = 3;
const POWER: u8 = 4;
const ATOM: u8 = 5;

fn level(e: &Expr) -> u8 {
    match e {
        Expr::Add(..) | Expr::Sub(..) => SUM,
        Expr::Mul(..) | Expr::Div(..) => PRODUCT,
        Expr::Neg(_) => UNARY,
        Expr::Literal { coeff, .. } if coeff.is_sign_negative() => UNARY,
        Expr::Pow(..) => POWER,
        Expr::Literal { .. } | Expr::Var | Expr::Call(..) => ATOM,
    }
}

fn write_at(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if level(e) < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Literal { coeff, blade } => {
                if coeff.is_sign_negative() {
                    f.write_str("-")?;
                }
                let mag = coeff.abs();
                if *blade == BasisIndex::SCALAR {
                    write!(f, "{mag}")
                } else if mag == 1.0 {
                    write!(f, "{blade}")
                } else {
                    write!(f, "{mag}{blade}")
                }
            }
            Expr::Var => f.write_str("z"),
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_at(f, a, UNARY)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) => {
                write_at(f, a, SUM)?;
                f.write_str(if matches!(self, Expr::Add(..)) { " + " } else { " - " })?;
                write_at(f, b, PRODUCT)
            }
            Expr::Mul(a, b) | Expr::Div(a, b) => {
                write_at(f, a, PRODUCT)?;
                f.write_str(if matches!(self, Expr::Mul(..)) { "*" } else { "/" })?;
                write_at(f, b, UNARY)
            }
            Expr::Pow(a, k) => {
                write_at(f, a, ATOM)?;
                write!(f, "^{k}")
            }
            Expr::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}
