//! Blade bookkeeping for `Cl_n`: a blade `e_J` is identified with the bitmask of `J`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest rank accepted by the dense representation.
pub const MAX_RANK: usize = 16;

/// Bitmask naming the blade `e_J`; bit `j - 1` set means `e_j` is a factor.
///
/// The empty mask is the unit `e_0 = 1`. Because factors are always kept in
/// increasing generator order, a mask identifies exactly one blade.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BasisIndex(pub u32);

impl BasisIndex {
    pub const SCALAR: BasisIndex = BasisIndex(0);

    /// Blade of the single generator `e_j`, `j >= 1`.
    pub fn generator(j: usize) -> Self {
        assert!((1..=32).contains(&j), "generator index {j} out of range");
        BasisIndex(1 << (j - 1))
    }

    /// Blade from generator indices (any order, no repeats).
    pub fn from_generators(gens: &[usize]) -> Result<Self> {
        let mut bits = 0u32;
        for &j in gens {
            if j == 0 || j > MAX_RANK {
                return Err(Error::Invalid(format!("generator index {j} out of range")));
            }
            let bit = 1u32 << (j - 1);
            if bits & bit != 0 {
                return Err(Error::Invalid(format!("repeated generator e{j}")));
            }
            bits |= bit;
        }
        Ok(BasisIndex(bits))
    }

    pub fn bits(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn grade(self) -> u32 {
        self.0.count_ones()
    }

    /// Generator indices in increasing order.
    pub fn generators(self) -> impl Iterator<Item = usize> {
        let bits = self.0;
        (0..32).filter(move |b| bits & (1 << b) != 0).map(|b| b + 1)
    }

    pub fn check(self, n: usize) -> Result<Self> {
        if n < 32 && (self.0 >> n) != 0 {
            return Err(Error::MaskOutOfRange { mask: self.0, n });
        }
        Ok(self)
    }

    /// Digit-string key used by the text and JSON formats (`""` for the scalar).
    pub fn key(self) -> String {
        self.generators().map(|j| j.to_string()).collect()
    }

    pub fn from_key(key: &str) -> Result<Self> {
        let mut prev = 0usize;
        let mut gens = Vec::with_capacity(key.len());
        for ch in key.chars() {
            let j = ch
                .to_digit(10)
                .ok_or_else(|| Error::Invalid(format!("bad blade key {key:?}")))? as usize;
            if j <= prev {
                return Err(Error::Invalid(format!(
                    "blade digits must be strictly increasing in {key:?}"
                )));
            }
            prev = j;
            gens.push(j);
        }
        Self::from_generators(&gens)
    }
}

impl fmt::Display for BasisIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            f.write_str("1")
        } else {
            write!(f, "e{}", self.key())
        }
    }
}

/// Product of canonical blades without range checks: returns `(negative, a xor b)`.
///
/// Moving each generator of `b` left past the larger generators of `a` costs one
/// sign flip per swap; each shared generator then contributes `e_j^2 = -1`.
#[inline]
pub(crate) fn blade_product(a: u32, b: u32) -> (bool, u32) {
    let mut swaps = (a & b).count_ones();
    let mut rest = b;
    while rest != 0 {
        let low = rest.trailing_zeros();
        swaps += (a >> (low + 1)).count_ones();
        rest &= rest - 1;
    }
    (swaps & 1 == 1, a ^ b)
}

/// `e_J * e_K = sign * e_L`.
pub fn basis_mul(j: BasisIndex, k: BasisIndex, n: usize) -> Result<(i8, BasisIndex)> {
    j.check(n)?;
    k.check(n)?;
    let (neg, l) = blade_product(j.0, k.0);
    Ok((if neg { -1 } else { 1 }, BasisIndex(l)))
}

/// Sign `s` with `e_J^* = s e_J`: `(-1)^(p(p+1)/2)` for a blade of grade `p`.
#[inline]
pub(crate) fn involution_sign(mask: u32) -> bool {
    let p = mask.count_ones();
    (p * (p + 1) / 2) % 2 == 1
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(g: &[usize]) -> BasisIndex {
        BasisIndex::from_generators(g).unwrap()
    }

    #[test]
    fn defining_relations() {
        assert_eq!(basis_mul(set(&[1]), set(&[2]), 2).unwrap(), (1, set(&[1, 2])));
        assert_eq!(basis_mul(set(&[1]), set(&[1]), 2).unwrap(), (-1, BasisIndex::SCALAR));
        assert_eq!(basis_mul(set(&[1]), set(&[1, 2]), 2).unwrap(), (-1, set(&[2])));
        assert_eq!(basis_mul(set(&[2]), set(&[1]), 2).unwrap(), (-1, set(&[1, 2])));
    }

    #[test]
    fn out_of_range_mask() {
        assert!(matches!(
            basis_mul(set(&[3]), set(&[1]), 2),
            Err(Error::MaskOutOfRange { .. })
        ));
    }

    #[test]
    fn rank_zero_scalar_only() {
        assert_eq!(basis_mul(BasisIndex::SCALAR, BasisIndex::SCALAR, 0).unwrap(), (1, BasisIndex::SCALAR));
        assert!(set(&[1]).check(0).is_err());
    }

    #[test]
    fn keys_round_trip() {
        assert_eq!(set(&[3, 1]).key(), "13");
        assert_eq!(BasisIndex::from_key("13").unwrap(), set(&[1, 3]));
        assert_eq!(BasisIndex::from_key("").unwrap(), BasisIndex::SCALAR);
        assert!(BasisIndex::from_key("31").is_err());
        assert_eq!(set(&[1, 2]).to_string(), "e12");
    }

    #[test]
    fn involution_signs_by_grade() {
        let signs: Vec<bool> = (0..5u32).map(|p| involution_sign((1 << p) - 1)).collect();
        assert_eq!(signs, vec![false, true, true, false, false]);
    }
}
