//! Numeric evaluation.

use num_complex::Complex;

use super::{Expr, Func};
use crate::clifford::{BasisIndex, CMultivector};
use crate::error::{Error, Result};
use crate::scalar::{cx_real, Real};

enum Value<T: Real> {
    Scalar(Complex<T>),
    Clifford(CMultivector<T>),
}

impl<T: Real> Value<T> {
    fn into_cmv(self, n: usize) -> CMultivector<T> {
        match self {
            Value::Scalar(s) => CMultivector::scalar(n, s),
            Value::Clifford(c) => c,
        }
    }

    fn add(self, other: Self, n: usize) -> Result<Self> {
        Ok(match (self, other) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a + b),
            (a, b) => Value::Clifford(a.into_cmv(n).try_add(&b.into_cmv(n))?),
        })
    }

    fn mul(self, other: Self) -> Result<Self> {
        Ok(match (self, other) {
            (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a * b),
            (Value::Scalar(a), Value::Clifford(c)) | (Value::Clifford(c), Value::Scalar(a)) => Value::Clifford(c.scale(a)),
            (Value::Clifford(a), Value::Clifford(b)) => Value::Clifford(a.try_mul(&b)?),
        })
    }

    fn neg(self) -> Self {
        match self {
            Value::Scalar(a) => Value::Scalar(-a),
            Value::Clifford(c) => Value::Clifford(c.scale_real(-T::one())),
        }
    }

    fn scalar(self) -> Complex<T> {
        match self {
            Value::Scalar(a) => a,
            Value::Clifford(c) => c.coeffs()[0],
        }
    }
}

fn apply<T: Real>(f: Func, a: Complex<T>) -> Complex<T> {
    match f {
        Func::Exp => a.exp(),
        Func::Sin => a.sin(),
        Func::Cos => a.cos(),
        Func::Sinh => a.sinh(),
        Func::Cosh => a.cosh(),
    }
}

impl Expr {
    /// Value at `z` in `K_n`.
    pub fn eval<T: Real>(&self, n: usize, z: Complex<T>) -> Result<CMultivector<T>> {
        if let Some(index) = Some(self.max_generator()).filter(|&j| j > n) {
            return Err(Error::RankViolation { index, n });
        }
        Ok(self.value(n, z)?.into_cmv(n))
    }

    /// Value at `z` of an expression known to be scalar.
    pub fn eval_scalar<T: Real>(&self, z: Complex<T>) -> Result<Complex<T>> {
        if !self.is_scalar() {
            return Err(Error::Invalid("expression is not scalar".into()));
        }
        Ok(self.value(0, z)?.scalar())
    }

    fn value<T: Real>(&self, n: usize, z: Complex<T>) -> Result<Value<T>> {
        Ok(match self {
            Expr::Literal { coeff, blade } => {
                if *blade == BasisIndex::SCALAR || *coeff == 0.0 {
                    Value::Scalar(cx_real(T::lit(*coeff)))
                } else {
                    let mut c = CMultivector::zero(n);
                    c.coeffs_mut()[blade.index()] = cx_real(T::lit(*coeff));
                    Value::Clifford(c)
                }
            }
            Expr::Var => Value::Scalar(z),
            Expr::Neg(a) => a.value(n, z)?.neg(),
            Expr::Add(a, b) => a.value(n, z)?.add(b.value(n, z)?, n)?,
            Expr::Sub(a, b) => a.value(n, z)?.add(b.value(n, z)?.neg(), n)?,
            Expr::Mul(a, b) => a.value(n, z)?.mul(b.value(n, z)?)?,
            Expr::Div(a, b) => {
                let d = b.value(n, z)?.scalar();
                if d.norm().is_nan() || d.norm() <= T::epsilon() {
                    return Err(Error::DivisionByZero { re: z.re.to_f64_lossy(), im: z.im.to_f64_lossy() });
                }
                a.value(n, z)?.mul(Value::Scalar(d.inv()))?
            }
            Expr::Pow(a, k) => match a.value(n, z)? {
                Value::Scalar(s) => Value::Scalar(s.powu(*k)),
                Value::Clifford(c) => {
                    let mut acc = CMultivector::one(n);
                    for _ in 0..*k {
                        acc = acc.try_mul(&c)?;
                    }
                    Value::Clifford(acc)
                }
            },
            Expr::Call(f, a) => Value::Scalar(apply(*f, a.value(n, z)?.scalar())),
        })
    }
}
