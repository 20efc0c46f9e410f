//! Expression language for stem functions.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := '-' unary | power
//! power := atom ('^' uint)?
//! atom  := number blade? | blade | 'z' | func '(' expr ')' | '(' expr ')'
//! func  := exp | sin | cos | sinh | cosh
//! ```
//!
//! Numbers are plain decimals without exponents, so `2.5e13` is `2.5 e_1e_3`.
//! Coefficients are real, function arguments and divisors must be scalar
//! subexpressions, and products keep their order.

mod diff;
mod eval;
mod function;
mod parse;
mod print;

pub use diff::{differentiate, simplify};
pub use function::{find_poles, stem_function, DslFunction, DEFAULT_DSL_RADIUS};
pub use parse::parse;

use crate::clifford::BasisIndex;

/// Scalar functions available inside expressions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    Exp,
    Sin,
    Cos,
    Sinh,
    Cosh,
}

impl Func {
    pub const ALL: [Func; 5] = [Func::Exp, Func::Sin, Func::Cos, Func::Sinh, Func::Cosh];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == name)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    /// Real multiple of a blade; the scalar blade gives a plain number.
    Literal { coeff: f64, blade: BasisIndex },
    /// The variable `z`.
    Var,
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Division by a scalar subexpression.
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, u32),
    /// Function of a scalar subexpression.
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn number(coeff: f64) -> Self {
        Expr::Literal { coeff, blade: BasisIndex::SCALAR }
    }

    /// Whether the value is always a complex scalar (no non-scalar blade can appear).
    pub fn is_scalar(&self) -> bool {
        match self {
            Expr::Literal { coeff, blade } => *blade == BasisIndex::SCALAR || *coeff == 0.0,
            Expr::Var | Expr::Call(..) => true,
            Expr::Neg(a) | Expr::Pow(a, _) => a.is_scalar(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.is_scalar() && b.is_scalar(),
        }
    }

    /// Whether `z` does not occur.
    pub fn is_constant(&self) -> bool {
        match self {
            Expr::Literal { .. } => true,
            Expr::Var => false,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.is_constant(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.is_constant() && b.is_constant(),
        }
    }

    /// Divisor subexpressions, outermost first, without duplicates.
    pub fn divisors(&self) -> Vec<&Expr> {
        let mut out = Vec::new();
        self.collect_divisors(&mut out);
        out
    }

    fn collect_divisors<'a>(&'a self, out: &mut Vec<&'a Expr>) {
        match self {
            Expr::Literal { .. } | Expr::Var => {}
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.collect_divisors(out),
            Expr::Div(a, b) => {
                if !out.contains(&&**b) {
                    out.push(b);
                }
                a.collect_divisors(out);
                b.collect_divisors(out);
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_divisors(out);
                b.collect_divisors(out);
            }
        }
    }

    /// Largest generator index used by a literal, 0 if none.
    pub fn max_generator(&self) -> usize {
        match self {
            Expr::Literal { blade, .. } => blade.generators().last().unwrap_or(0),
            Expr::Var => 0,
            Expr::Neg(a) | Expr::Pow(a, _) | Expr::Call(_, a) => a.max_generator(),
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => a.max_generator().max(b.max_generator()),
        }
    }
}
