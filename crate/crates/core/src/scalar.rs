//! Scalar abstraction shared by every numeric routine in the crate.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, NumAssign};

/// Real floating-point scalar: implemented for `f32` and `f64`.
pub trait Real:
    Float + FloatConst + NumAssign + Sum + Default + Debug + Display + LowerExp + Send + Sync + 'static
{
    /// The same type viewed through nalgebra's field traits.
    ///
    /// Kept separate so generic code over `Real` never sees two competing `sqrt`/`abs` methods.
    type Field: nalgebra::RealField + Copy;

    /// Converts an `f64` literal; exact for `f64`, rounded for `f32`.
    fn lit(x: f64) -> Self;

    fn to_field(self) -> Self::Field;

    fn from_field(x: Self::Field) -> Self;

    fn to_f64_lossy(self) -> f64;

    fn two() -> Self {
        Self::one() + Self::one()
    }

    fn half() -> Self {
        Self::lit(0.5)
    }
}

impl Real for f32 {
    type Field = f32;

    fn to_field(self) -> f32 {
        self
    }

    fn from_field(x: f32) -> f32 {
        x
    }

    fn lit(x: f64) -> Self {
        x as f32
    }

    fn to_f64_lossy(self) -> f64 {
        self as f64
    }
}

impl Real for f64 {
    type Field = f64;

    fn to_field(self) -> f64 {
        self
    }

    fn from_field(x: f64) -> f64 {
        x
    }

    fn lit(x: f64) -> Self {
        x
    }

    fn to_f64_lossy(self) -> f64 {
        self
    }
}

/// Complex number over a [`Real`] scalar.
pub type Cx<T> = Complex<T>;

pub(crate) fn cx<T: Real>(re: T, im: T) -> Complex<T> {
    Complex::new(re, im)
}

pub(crate) fn cx_real<T: Real>(re: T) -> Complex<T> {
    Complex::new(re, T::zero())
}

/// Sums `values` pairwise in a fixed order so results are reproducible bit-for-bit.
pub(crate) fn pairwise_sum<V, F>(values: &[V], add: &F) -> Option<V>
where
    V: Clone,
    F: Fn(&V, &V) -> V,
{
    match values.len() {
        0 => None,
        1 => Some(values[0].clone()),
        len => {
            let (lo, hi) = values.split_at(len / 2);
            let a = pairwise_sum(lo, add)?;
            let b = pairwise_sum(hi, add)?;
            Some(add(&a, &b))
        }
    }
}
