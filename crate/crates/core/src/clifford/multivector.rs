//! Dense elements of `Cl_n` and of its complexification `K_n = C ⊗ Cl_n`.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex;
use num_traits::Zero;

use super::basis::{blade_product, involution_sign, BasisIndex, MAX_RANK};
use crate::error::{Error, Result};
use crate::scalar::{cx_real, Real};

/// Ring operations needed by the blade-product kernel.
pub(crate) trait Coeff:
    Copy + Zero + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
}

impl<C> Coeff for C where
    C: Copy + Zero + Add<Output = C> + Sub<Output = C> + Mul<Output = C> + Neg<Output = C>
{
}

/// Bilinear extension of the blade product to dense coefficient arrays.
pub(crate) fn dense_product<C: Coeff>(a: &[C], b: &[C]) -> Vec<C> {
    debug_assert_eq!(a.len(), b.len());
    let mut out = vec![C::zero(); a.len()];
    for (i, &x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            let (neg, k) = blade_product(i as u32, j as u32);
            let p = x * y;
            let slot = &mut out[k as usize];
            *slot = if neg { *slot - p } else { *slot + p };
        }
    }
    out
}

fn check_rank(n: usize) -> Result<()> {
    if n > MAX_RANK {
        return Err(Error::Invalid(format!("rank {n} exceeds maximum {MAX_RANK}")));
    }
    Ok(())
}

fn same_rank(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::RankMismatch { left: a, right: b });
    }
    Ok(())
}

/// Element `a = Σ_J a_J e_J` of `Cl_n`, stored densely by blade mask.
#[derive(Clone, Debug, PartialEq)]
pub struct Multivector<T> {
    n: usize,
    coeffs: Vec<T>,
}

impl<T: Real> Multivector<T> {
    pub fn new(n: usize, coeffs: Vec<T>) -> Result<Self> {
        check_rank(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::LengthMismatch { expected: 1 << n, got: coeffs.len() });
        }
        Ok(Self { n, coeffs })
    }

    pub fn zero(n: usize) -> Self {
        Self { n, coeffs: vec![T::zero(); 1 << n] }
    }

    pub fn scalar(n: usize, value: T) -> Self {
        let mut m = Self::zero(n);
        m.coeffs[0] = value;
        m
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, T::one())
    }

    /// `coeff * e_J`.
    pub fn blade(n: usize, blade: BasisIndex, coeff: T) -> Result<Self> {
        blade.check(n)?;
        let mut m = Self::zero(n);
        m.coeffs[blade.index()] = coeff;
        Ok(m)
    }

    /// The generator `e_j`, `1 <= j <= n`.
    pub fn generator(n: usize, j: usize) -> Result<Self> {
        if j == 0 || j > n {
            return Err(Error::RankViolation { index: j, n });
        }
        Self::blade(n, BasisIndex::generator(j), T::one())
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[T] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [T] {
        &mut self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.coeffs
    }

    pub fn coeff(&self, blade: BasisIndex) -> T {
        self.coeffs.get(blade.index()).copied().unwrap_or_else(T::zero)
    }

    /// `Re(a) = a_0`.
    pub fn scalar_part(&self) -> T {
        self.coeffs[0]
    }

    /// `Im(a) = a - Re(a)`.
    pub fn nonscalar_part(&self) -> Self {
        let mut m = self.clone();
        m.coeffs[0] = T::zero();
        m
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        same_rank(self.n, rhs.n)?;
        Ok(Self { n: self.n, coeffs: dense_product(&self.coeffs, &rhs.coeffs) })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        same_rank(self.n, rhs.n)?;
        Ok(self.zip(rhs, |a, b| a + b))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        same_rank(self.n, rhs.n)?;
        Ok(self.zip(rhs, |a, b| a - b))
    }

    fn zip(&self, rhs: &Self, f: impl Fn(T, T) -> T) -> Self {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| f(a, b)).collect();
        Self { n: self.n, coeffs }
    }

    pub fn scale(&self, s: T) -> Self {
        Self { n: self.n, coeffs: self.coeffs.iter().map(|&c| c * s).collect() }
    }

    /// Anti-automorphism fixed by `e_j^* = -e_j`.
    pub fn involution(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, &c)| if involution_sign(mask as u32) { -c } else { c })
            .collect();
        Self { n: self.n, coeffs }
    }

    pub fn norm_sqr(&self) -> T {
        self.coeffs.iter().map(|&c| c * c).sum()
    }

    /// `|a|^2 = Σ_J a_J^2`.
    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn to_complex(&self) -> CMultivector<T> {
        CMultivector { n: self.n, coeffs: self.coeffs.iter().map(|&c| cx_real(c)).collect() }
    }

    /// Nonzero terms as `(blade, coefficient)` in mask order.
    pub fn terms(&self) -> impl Iterator<Item = (BasisIndex, T)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(m, &c)| (BasisIndex(m as u32), c))
    }
}

macro_rules! forward_binop {
    ($ty:ident, $trait:ident, $method:ident, $checked:ident) => {
        impl<'a, T: Real> $trait<&'a $ty<T>> for &'a $ty<T> {
            type Output = $ty<T>;

            fn $method(self, rhs: &'a $ty<T>) -> $ty<T> {
                self.$checked(rhs).expect("operands must share a rank")
            }
        }

        impl<T: Real> $trait for $ty<T> {
            type Output = $ty<T>;

            fn $method(self, rhs: $ty<T>) -> $ty<T> {
                (&self).$checked(&rhs).expect("operands must share a rank")
            }
        }
    };
}

forward_binop!(Multivector, Mul, mul, try_mul);
forward_binop!(Multivector, Add, add, try_add);
forward_binop!(Multivector, Sub, sub, try_sub);

impl<T: Real> Neg for Multivector<T> {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale(-T::one())
    }
}

/// Element `c = a + i b` of `K_n`, stored as complex blade coefficients.
#[derive(Clone, Debug, PartialEq)]
pub struct CMultivector<T> {
    n: usize,
    coeffs: Vec<Complex<T>>,
}

impl<T: Real> CMultivector<T> {
    pub fn new(n: usize, coeffs: Vec<Complex<T>>) -> Result<Self> {
        check_rank(n)?;
        if coeffs.len() != 1 << n {
            return Err(Error::LengthMismatch { expected: 1 << n, got: coeffs.len() });
        }
        Ok(Self { n, coeffs })
    }

    pub fn zero(n: usize) -> Self {
        Self { n, coeffs: vec![Complex::zero(); 1 << n] }
    }

    pub fn scalar(n: usize, value: Complex<T>) -> Self {
        let mut m = Self::zero(n);
        m.coeffs[0] = value;
        m
    }

    pub fn one(n: usize) -> Self {
        Self::scalar(n, Complex::new(T::one(), T::zero()))
    }

    /// `a + i b`.
    pub fn from_parts(re: &Multivector<T>, im: &Multivector<T>) -> Result<Self> {
        same_rank(re.n, im.n)?;
        let coeffs = re.coeffs.iter().zip(&im.coeffs).map(|(&a, &b)| Complex::new(a, b)).collect();
        Ok(Self { n: re.n, coeffs })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn coeffs(&self) -> &[Complex<T>] {
        &self.coeffs
    }

    pub fn coeffs_mut(&mut self) -> &mut [Complex<T>] {
        &mut self.coeffs
    }

    pub fn coeff(&self, blade: BasisIndex) -> Complex<T> {
        self.coeffs.get(blade.index()).copied().unwrap_or_else(Complex::zero)
    }

    /// The `a` of `c = a + i b`.
    pub fn real_part(&self) -> Multivector<T> {
        Multivector { n: self.n, coeffs: self.coeffs.iter().map(|c| c.re).collect() }
    }

    /// The `b` of `c = a + i b`.
    pub fn imag_part(&self) -> Multivector<T> {
        Multivector { n: self.n, coeffs: self.coeffs.iter().map(|c| c.im).collect() }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        same_rank(self.n, rhs.n)?;
        Ok(Self { n: self.n, coeffs: dense_product(&self.coeffs, &rhs.coeffs) })
    }

    pub fn try_add(&self, rhs: &Self) -> Result<Self> {
        same_rank(self.n, rhs.n)?;
        Ok(self.zip(rhs, |a, b| a + b))
    }

    pub fn try_sub(&self, rhs: &Self) -> Result<Self> {
        same_rank(self.n, rhs.n)?;
        Ok(self.zip(rhs, |a, b| a - b))
    }

    fn zip(&self, rhs: &Self, f: impl Fn(Complex<T>, Complex<T>) -> Complex<T>) -> Self {
        let coeffs = self.coeffs.iter().zip(&rhs.coeffs).map(|(&a, &b)| f(a, b)).collect();
        Self { n: self.n, coeffs }
    }

    pub fn scale(&self, s: Complex<T>) -> Self {
        Self { n: self.n, coeffs: self.coeffs.iter().map(|&c| c * s).collect() }
    }

    pub fn scale_real(&self, s: T) -> Self {
        Self { n: self.n, coeffs: self.coeffs.iter().map(|&c| c * s).collect() }
    }

    /// `self += w * other`.
    pub fn axpy(&mut self, w: Complex<T>, other: &Self) {
        debug_assert_eq!(self.n, other.n);
        for (a, &b) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *a += w * b;
        }
    }

    /// `c^* = a^* - i b^*`: the `Cl_n` involution extended antilinearly.
    pub fn involution(&self) -> Self {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(mask, &c)| {
                let c = c.conj();
                if involution_sign(mask as u32) {
                    -c
                } else {
                    c
                }
            })
            .collect();
        Self { n: self.n, coeffs }
    }

    /// `bar(a + i b) = a - i b`.
    pub fn conjugation_bar(&self) -> Self {
        Self { n: self.n, coeffs: self.coeffs.iter().map(|c| c.conj()).collect() }
    }

    pub fn norm_sqr(&self) -> T {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum()
    }

    /// Euclidean norm of the `2^(n+1)` real coordinates.
    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    /// Distance to `Cl_n`, i.e. `|b|` for `c = a + i b`.
    pub fn imag_norm(&self) -> T {
        self.coeffs.iter().map(|c| c.im * c.im).sum::<T>().sqrt()
    }

    pub fn dist(&self, other: &Self) -> T {
        self.coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(&a, &b)| (a - b).norm_sqr())
            .sum::<T>()
            .sqrt()
    }

    /// True when every coefficient outside the scalar blade is zero.
    pub fn is_scalar(&self) -> bool {
        self.coeffs[1..].iter().all(|c| c.is_zero())
    }
}

forward_binop!(CMultivector, Mul, mul, try_mul);
forward_binop!(CMultivector, Add, add, try_add);
forward_binop!(CMultivector, Sub, sub, try_sub);

impl<T: Real> Neg for CMultivector<T> {
    type Output = Self;

    fn neg(self) -> Self {
        self.scale_real(-T::one())
    }
}

impl<T: Real> From<&Multivector<T>> for CMultivector<T> {
    fn from(m: &Multivector<T>) -> Self {
        m.to_complex()
    }
}

/// Paravector `a_0 + Σ_{j=1}^n a_j e_j`, an element of `P_n ≅ R^(n+1)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Paravector<T> {
    n: usize,
    components: Vec<T>,
}

impl<T: Real> Paravector<T> {
    pub fn new(n: usize, components: Vec<T>) -> Result<Self> {
        check_rank(n)?;
        if components.len() != n + 1 {
            return Err(Error::LengthMismatch { expected: n + 1, got: components.len() });
        }
        Ok(Self { n, components })
    }

    pub fn real(n: usize, x: T) -> Self {
        let mut components = vec![T::zero(); n + 1];
        components[0] = x;
        Self { n, components }
    }

    /// `x + y s` for a purely imaginary `s` (its real component is ignored).
    pub fn from_slice(x: T, y: T, s: &Paravector<T>) -> Self {
        let mut components: Vec<T> = s.components.iter().map(|&c| c * y).collect();
        components[0] = x;
        Self { n: s.n, components }
    }

    /// Extracts a paravector, rejecting blades of grade two or more above `tol`.
    pub fn from_multivector(m: &Multivector<T>, tol: T) -> Result<Self> {
        let mut components = vec![m.coeffs[0]; m.n + 1];
        for (mask, &c) in m.coeffs.iter().enumerate() {
            match mask.count_ones() {
                0 => {}
                1 => components[mask.trailing_zeros() as usize + 1] = c,
                _ if c.abs() > tol => {
                    return Err(Error::Invalid(format!(
                        "not a paravector: blade {} has coefficient {}",
                        BasisIndex(mask as u32),
                        c
                    )))
                }
                _ => {}
            }
        }
        Ok(Self { n: m.n, components })
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn components(&self) -> &[T] {
        &self.components
    }

    /// `Re(κ) = a_0`.
    pub fn re(&self) -> T {
        self.components[0]
    }

    /// `Im(κ)` as a paravector with zero real part.
    pub fn im(&self) -> Self {
        let mut p = self.clone();
        p.components[0] = T::zero();
        p
    }

    /// `|Im(κ)|`.
    pub fn im_norm(&self) -> T {
        self.components[1..].iter().map(|&c| c * c).sum::<T>().sqrt()
    }

    pub fn norm_sqr(&self) -> T {
        self.components.iter().map(|&c| c * c).sum()
    }

    pub fn norm(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn is_real(&self) -> bool {
        self.components[1..].iter().all(|c| c.is_zero())
    }

    /// `κ^* = a_0 - Σ a_j e_j`.
    pub fn conj(&self) -> Self {
        let mut p = self.clone();
        for c in &mut p.components[1..] {
            *c = -*c;
        }
        p
    }

    pub fn scale(&self, s: T) -> Self {
        Self { n: self.n, components: self.components.iter().map(|&c| c * s).collect() }
    }

    pub fn shift(&self, x: T) -> Self {
        let mut p = self.clone();
        p.components[0] += x;
        p
    }

    /// Unit imaginary direction `Im(κ)/|Im(κ)|`, absent for real `κ`.
    pub fn unit_imag(&self) -> Option<Self> {
        let r = self.im_norm();
        if r.is_zero() {
            return None;
        }
        Some(self.im().scale(T::one() / r))
    }

    /// `κ^{-1} = |κ|^{-2} κ^*`.
    pub fn inverse(&self) -> Result<Self> {
        let q = self.norm_sqr();
        if q.is_zero() {
            return Err(Error::SingularInput("zero paravector has no inverse".into()));
        }
        Ok(self.conj().scale(T::one() / q))
    }

    pub fn to_multivector(&self) -> Multivector<T> {
        let mut m = Multivector::zero(self.n);
        m.coeffs[0] = self.components[0];
        for j in 1..=self.n {
            m.coeffs[1 << (j - 1)] = self.components[j];
        }
        m
    }

    pub fn to_cmultivector(&self) -> CMultivector<T> {
        self.to_multivector().to_complex()
    }
}
