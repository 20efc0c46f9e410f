//! Clifford operators `T = Σ_J M_J e_J` on `V_n = R^d ⊗ Cl_n` and their functional calculi.
//!
//! Vectors of `V_n` are stored as `d` multivectors. The complexified operator acts on
//! `C^(d·2^n)` with basis vector `r·2^n + K` standing for `x_r ⊗ e_K`.

mod calculus;
mod slice;
mod spectrum;

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex;
use serde_json::{json, Value};

use crate::clifford::{blade_product, BasisIndex, CMultivector, Multivector, Paravector, MAX_RANK};
use crate::error::{Error, Result};
use crate::linalg::{frobenius, ComplexMatrix};
use crate::scalar::Real;

pub use calculus::{
    flat_conj, flat_residual, riesz_dunford_eval, riesz_dunford_matrix, spectral_mapping_check, MatrixFunction,
    OperatorSymbol, OperatorValue, DEFAULT_FLAT_TOL,
};
pub use slice::{s_resolvent_right, slice_calculus_eval, slice_calculus_matrix};
pub use spectrum::{
    cl_spectrum_membership, cl_spectrum_slice, complex_spectrum, complex_spectrum_with_cap,
    spectral_intersection_membership, Membership, SpectrumSet, DEFAULT_INTERSECTION_TOL,
};

/// Right `Cl_n`-linear operator `T = Σ_J M_J e_J` with real `d × d` components.
#[derive(Clone, Debug, PartialEq)]
pub struct CliffordOperator<T: Real> {
    d: usize,
    n: usize,
    components: BTreeMap<BasisIndex, DMatrix<T>>,
}

impl<T: Real> CliffordOperator<T> {
    pub fn new(d: usize, n: usize, components: impl IntoIterator<Item = (BasisIndex, DMatrix<T>)>) -> Result<Self> {
        if n > MAX_RANK {
            return Err(Error::Invalid(format!("rank {n} exceeds maximum {MAX_RANK}")));
        }
        let mut map = BTreeMap::new();
        for (blade, m) in components {
            blade.check(n)?;
            if m.nrows() != d || m.ncols() != d {
                return Err(Error::DimensionMismatch(format!(
                    "component {blade} is {}x{}, expected {d}x{d}",
                    m.nrows(),
                    m.ncols()
                )));
            }
            if map.insert(blade, m).is_some() {
                return Err(Error::Invalid(format!("component {blade} given twice")));
            }
        }
        map.retain(|_, m| m.iter().any(|x| !x.is_zero()));
        Ok(CliffordOperator { d, n, components: map })
    }

    pub fn zero(d: usize, n: usize) -> Self {
        CliffordOperator { d, n, components: BTreeMap::new() }
    }

    pub fn identity(d: usize, n: usize) -> Self {
        Self::left_multiplication(d, &Multivector::one(n))
    }

    /// `I_d ⊗ L_a`: left multiplication by a constant `a` on every coordinate.
    pub fn left_multiplication(d: usize, a: &Multivector<T>) -> Self {
        let components = a.terms().map(|(blade, c)| (blade, DMatrix::identity(d, d) * c)).collect();
        CliffordOperator { d, n: a.rank(), components }
    }

    /// `L_κ` on `Cl_n` itself (`d = 1`).
    pub fn from_paravector(kappa: &Paravector<T>) -> Self {
        Self::left_multiplication(1, &kappa.to_multivector())
    }

    /// `T_0 + Σ_{j=1}^n T_j e_j` for a tuple of possibly non-commuting real matrices.
    pub fn tuple(matrices: &[DMatrix<T>]) -> Result<Self> {
        let first = matrices.first().ok_or_else(|| Error::Invalid("empty operator tuple".into()))?;
        let d = first.nrows();
        let n = matrices.len() - 1;
        let components = matrices.iter().enumerate().map(|(j, m)| {
            let blade = if j == 0 { BasisIndex::SCALAR } else { BasisIndex::generator(j) };
            (blade, m.clone())
        });
        Self::new(d, n, components)
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    /// Dimension `d · 2^n` of the complexified carrier.
    pub fn size(&self) -> usize {
        self.d << self.n
    }

    pub fn component(&self, blade: BasisIndex) -> Option<&DMatrix<T>> {
        self.components.get(&blade)
    }

    pub fn components(&self) -> impl Iterator<Item = (BasisIndex, &DMatrix<T>)> {
        self.components.iter().map(|(b, m)| (*b, m))
    }

    /// Real matrix of `T` on `R^d ⊗ Cl_n`.
    pub fn real_matrix(&self) -> DMatrix<T> {
        let blades = 1usize << self.n;
        let mut out = DMatrix::zeros(self.size(), self.size());
        for (blade, m) in &self.components {
            for k in 0..blades {
                let (neg, l) = blade_product(blade.bits(), k as u32);
                for r in 0..self.d {
                    for c in 0..self.d {
                        let v = m[(r, c)];
                        if v.is_zero() {
                            continue;
                        }
                        out[(r * blades + l as usize, c * blades + k)] += if neg { -v } else { v };
                    }
                }
            }
        }
        out
    }

    /// `T_C`, the complexification `x + iy -> Tx + iTy`.
    pub fn complexify(&self) -> ComplexMatrix<T> {
        self.real_matrix().map(|x| Complex::new(x, T::zero()))
    }

    /// Reads back `T` from a matrix on `C^(d·2^n)`: `M_J[r][c] = Re S[(r, J), (c, ∅)]`.
    ///
    /// Returns the operator with the relative residuals of dropping the imaginary
    /// part and of enforcing right linearity.
    pub fn from_complex_matrix(s: &ComplexMatrix<T>, d: usize, n: usize) -> Result<(Self, T, T)> {
        let blades = 1usize << n;
        if s.nrows() != d * blades || s.ncols() != d * blades {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}x{}, expected size {}",
                s.nrows(),
                s.ncols(),
                d * blades
            )));
        }
        let mut components = Vec::with_capacity(blades);
        for j in 0..blades {
            let m = DMatrix::from_fn(d, d, |r, c| s[(r * blades + j, c * blades)].re);
            components.push((BasisIndex(j as u32), m));
        }
        let op = Self::new(d, n, components)?;
        let scale = frobenius(s).max(T::one());
        let flat = flat_residual(s);
        let real_part = s.map(|z| Complex::new(z.re, T::zero()));
        let linear = frobenius(&(real_part - op.complexify())) / scale;
        Ok((op, flat, linear))
    }

    fn same_shape(&self, other: &Self) -> Result<()> {
        if self.d != other.d || self.n != other.n {
            return Err(Error::DimensionMismatch(format!(
                "operators on (d={}, n={}) and (d={}, n={})",
                self.d, self.n, other.d, other.n
            )));
        }
        Ok(())
    }

    /// Composition `self ∘ other`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut acc: BTreeMap<BasisIndex, DMatrix<T>> = BTreeMap::new();
        for (j, mj) in &self.components {
            for (k, nk) in &other.components {
                let (neg, l) = blade_product(j.bits(), k.bits());
                let p = mj * nk;
                let slot = acc.entry(BasisIndex(l)).or_insert_with(|| DMatrix::zeros(self.d, self.d));
                if neg {
                    *slot -= p;
                } else {
                    *slot += p;
                }
            }
        }
        Self::new(self.d, self.n, acc)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other)?;
        let mut acc = self.components.clone();
        for (k, m) in &other.components {
            *acc.entry(*k).or_insert_with(|| DMatrix::zeros(self.d, self.d)) += m;
        }
        Self::new(self.d, self.n, acc)
    }

    pub fn scale(&self, s: T) -> Self {
        let components = self.components.iter().map(|(k, m)| (*k, m * s)).collect();
        CliffordOperator { d: self.d, n: self.n, components }
    }

    /// `T^k` by repeated composition.
    pub fn pow(&self, k: u32) -> Self {
        let mut out = Self::identity(self.d, self.n);
        for _ in 0..k {
            out = out.compose(self).expect("same shape");
        }
        out
    }

    /// `Σ_k A_k T^k` with constant Clifford coefficients acting from the left.
    pub fn polynomial(&self, coeffs: &[Multivector<T>]) -> Result<Self> {
        let mut acc = Self::zero(self.d, self.n);
        let mut power = Self::identity(self.d, self.n);
        for (k, a) in coeffs.iter().enumerate() {
            if a.rank() != self.n {
                return Err(Error::RankMismatch { left: self.n, right: a.rank() });
            }
            if k > 0 {
                power = power.compose(self)?;
            }
            acc = acc.add(&Self::left_multiplication(self.d, a).compose(&power)?)?;
        }
        Ok(acc)
    }

    /// `T(v)` for `v` given as `d` multivectors.
    pub fn apply(&self, v: &[Multivector<T>]) -> Result<Vec<Multivector<T>>> {
        if v.len() != self.d {
            return Err(Error::LengthMismatch { expected: self.d, got: v.len() });
        }
        let mut out = vec![Multivector::zero(self.n); self.d];
        for (blade, m) in &self.components {
            let e = Multivector::blade(self.n, *blade, T::one())?;
            for (r, slot) in out.iter_mut().enumerate() {
                for (c, vc) in v.iter().enumerate() {
                    let x = m[(r, c)];
                    if !x.is_zero() {
                        *slot = slot.try_add(&e.try_mul(vc)?.scale(x))?;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Frobenius distance between complexified matrices.
    pub fn distance(&self, other: &Self) -> Result<T> {
        self.same_shape(other)?;
        Ok(frobenius(&(self.complexify() - other.complexify())))
    }

    /// `{"d": .., "n": .., "components": {"": [[..]], "1": [[..]]}}`.
    pub fn to_json(&self) -> Value {
        let components: BTreeMap<String, Value> = self
            .components
            .iter()
            .map(|(b, m)| {
                let rows: Vec<Vec<f64>> =
                    (0..self.d).map(|r| (0..self.d).map(|c| m[(r, c)].to_f64_lossy()).collect()).collect();
                (b.key(), json!(rows))
            })
            .collect();
        json!({"d": self.d, "n": self.n, "components": components})
    }

    pub fn from_json(v: &Value) -> Result<Self> {
        let bad = |what: &str| Error::Invalid(format!("malformed operator JSON: {what}"));
        let d = v.get("d").and_then(Value::as_u64).ok_or_else(|| bad("missing \"d\""))? as usize;
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| bad("missing \"n\""))? as usize;
        let comps = v.get("components").and_then(Value::as_object).ok_or_else(|| bad("missing \"components\""))?;
        let mut list = Vec::with_capacity(comps.len());
        for (key, rows) in comps {
            let blade = BasisIndex::from_key(key)?;
            let rows = rows.as_array().ok_or_else(|| bad("component must be a list of rows"))?;
            if rows.len() != d {
                return Err(Error::DimensionMismatch(format!("component {key:?} has {} rows, expected {d}", rows.len())));
            }
            let mut m = DMatrix::zeros(d, d);
            for (r, row) in rows.iter().enumerate() {
                let row = row.as_array().filter(|row| row.len() == d).ok_or_else(|| {
                    Error::DimensionMismatch(format!("component {key:?} row {r} must have {d} entries"))
                })?;
                for (c, x) in row.iter().enumerate() {
                    m[(r, c)] = T::lit(x.as_f64().ok_or_else(|| bad("non-numeric entry"))?);
                }
            }
            list.push((blade, m));
        }
        Self::new(d, n, list)
    }
}

/// Matrix of `I_d ⊗ L_a` on `C^(d·2^n)`.
pub fn left_mult_matrix<T: Real>(a: &CMultivector<T>, d: usize) -> ComplexMatrix<T> {
    let blades = 1usize << a.rank();
    let mut out = ComplexMatrix::zeros(d * blades, d * blades);
    for (j, &c) in a.coeffs().iter().enumerate() {
        if c.re.is_zero() && c.im.is_zero() {
            continue;
        }
        for k in 0..blades {
            let (neg, l) = blade_product(j as u32, k as u32);
            let v = if neg { -c } else { c };
            for r in 0..d {
                out[(r * blades + l as usize, r * blades + k)] += v;
            }
        }
    }
    out
}

/// Matrix of `I_d ⊗ R_a` (right multiplication by `a`) on `C^(d·2^n)`.
pub fn right_mult_matrix<T: Real>(a: &CMultivector<T>, d: usize) -> ComplexMatrix<T> {
    let blades = 1usize << a.rank();
    let mut out = ComplexMatrix::zeros(d * blades, d * blades);
    for (j, &c) in a.coeffs().iter().enumerate() {
        if c.re.is_zero() && c.im.is_zero() {
            continue;
        }
        for k in 0..blades {
            let (neg, l) = blade_product(k as u32, j as u32);
            let v = if neg { -c } else { c };
            for r in 0..d {
                out[(r * blades + l as usize, r * blades + k)] += v;
            }
        }
    }
    out
}

/// `max_j |S R_{e_j} - R_{e_j} S| / max(1, |S|)`: zero exactly for right `Cl_n`-linear `S`.
pub fn right_linearity_residual<T: Real>(s: &ComplexMatrix<T>, d: usize, n: usize) -> T {
    let scale = frobenius(s).max(T::one());
    (1..=n)
        .map(|j| {
            let e = Multivector::generator(n, j).expect("generator in range").to_complex();
            let r = right_mult_matrix(&e, d);
            frobenius(&(s * &r - &r * s)) / scale
        })
        .fold(T::zero(), T::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::clifford::parse_multivector;
    use crate::scalar::cx;

    #[test]
    fn complexify_examples() {
        let id = CliffordOperator::<f64>::identity(2, 2);
        assert_eq!(id.complexify(), ComplexMatrix::identity(8, 8));
        let e1 = CliffordOperator::left_multiplication(1, &parse_multivector::<f64>("e1", 1).unwrap());
        let expected = ComplexMatrix::from_row_slice(2, 2, &[cx(0.0, 0.0), cx(-1.0, 0.0), cx(1.0, 0.0), cx(0.0, 0.0)]);
        assert_eq!(e1.complexify(), expected);
    }

    #[test]
    fn projection_round_trip() {
        let t = CliffordOperator::new(
            2,
            2,
            [
                (BasisIndex(0), DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 3.0, 4.0])),
                (BasisIndex(3), DMatrix::from_row_slice(2, 2, &[0.0, -1.0, 0.5, 0.0])),
            ],
        )
        .unwrap();
        let (back, flat, linear) = CliffordOperator::from_complex_matrix(&t.complexify(), 2, 2).unwrap();
        assert_eq!(back, t);
        assert_eq!((flat, linear), (0.0, 0.0));
        assert_eq!(right_linearity_residual(&t.complexify(), 2, 2), 0.0);
    }

    #[test]
    fn apply_matches_matrix() {
        let t = CliffordOperator::tuple(&[
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 2.0, -1.0]),
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
        ])
        .unwrap();
        let v = vec![parse_multivector::<f64>("1+e1", 1).unwrap(), parse_multivector("2e1", 1).unwrap()];
        let tv = t.apply(&v).unwrap();
        let flat: Vec<f64> = v.iter().flat_map(|m| m.coeffs().to_vec()).collect();
        let y = t.real_matrix() * nalgebra::DVector::from_vec(flat);
        let got: Vec<f64> = tv.iter().flat_map(|m| m.coeffs().to_vec()).collect();
        assert_eq!(got, y.as_slice());
    }

    #[test]
    fn composition_matches_matrix_product() {
        let a = CliffordOperator::tuple(&[
            DMatrix::from_row_slice(2, 2, &[1.0, 2.0, 0.0, 1.0]),
            DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]),
            DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]),
        ])
        .unwrap();
        let sq = a.compose(&a).unwrap();
        assert_eq!(sq.real_matrix(), a.real_matrix() * a.real_matrix());
    }

    #[test]
    fn json_round_trip() {
        let t = CliffordOperator::from_paravector(&crate::clifford::parse_paravector::<f64>("1+2e2", 2).unwrap());
        assert_eq!(CliffordOperator::<f64>::from_json(&t.to_json()).unwrap(), t);
        assert!(CliffordOperator::<f64>::from_json(&json!({"d": 2, "n": 1, "components": {"": [[1.0]]}})).is_err());
    }
}
