use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::BigRational;

use super::{AffineExponent, Symbol, SymbolicError};

/// An integral-or-symbolic weight written over fundamental weights
/// `omega_1 .. omega_l`. Coefficient `i` is the pairing with coroot `i`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Weight {
    omega: Vec<AffineExponent>,
}

impl Weight {
    pub fn new(omega: Vec<AffineExponent>) -> Self {
        Weight { omega }
    }

    pub fn zero(rank: usize) -> Self {
        Weight {
            omega: vec![AffineExponent::zero(); rank],
        }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Weight::new(coeffs.iter().map(|&c| AffineExponent::int(c)).collect())
    }

    pub fn rank(&self) -> usize {
        self.omega.len()
    }

    pub fn coeffs(&self) -> &[AffineExponent] {
        &self.omega
    }

    /// `<self, alpha_i^vee>`, with `i` 1-based.
    pub fn pair_coroot(&self, i: usize) -> &AffineExponent {
        &self.omega[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.omega.iter().all(AffineExponent::is_zero)
    }

    pub fn checked_add(&self, other: &Weight) -> Result<Weight, SymbolicError> {
        if self.rank() != other.rank() {
            return Err(SymbolicError::RankMismatch {
                left: self.rank(),
                right: other.rank(),
            });
        }
        Ok(Weight::new(
            self.omega.iter().zip(&other.omega).map(|(a, b)| a + b).collect(),
        ))
    }

    pub fn scale(&self, k: &BigRational) -> Weight {
        Weight::new(self.omega.iter().map(|c| c.scale(k)).collect())
    }

    pub fn substitute(&self, map: &BTreeMap<Symbol, AffineExponent>) -> Weight {
        Weight::new(self.omega.iter().map(|c| c.substitute(map)).collect())
    }

    pub fn specialize(&self, bindings: &BTreeMap<Symbol, BigRational>) -> Weight {
        Weight::new(self.omega.iter().map(|c| c.specialize(bindings)).collect())
    }
}

impl Add<&Weight> for &Weight {
    type Output = Weight;
    /// Panics on rank mismatch; use [`Weight::checked_add`] for fallible code.
    fn add(self, rhs: &Weight) -> Weight {
        self.checked_add(rhs).expect("weight rank mismatch")
    }
}

impl Add for Weight {
    type Output = Weight;
    fn add(self, rhs: Weight) -> Weight {
        &self + &rhs
    }
}

impl Neg for &Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        Weight::new(self.omega.iter().map(|c| -c).collect())
    }
}

impl Neg for Weight {
    type Output = Weight;
    fn neg(self) -> Weight {
        -&self
    }
}

impl Sub<&Weight> for &Weight {
    type Output = Weight;
    fn sub(self, rhs: &Weight) -> Weight {
        self + &(-rhs)
    }
}

impl Sub for Weight {
    type Output = Weight;
    fn sub(self, rhs: Weight) -> Weight {
        &self - &rhs
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.omega.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "({c})w{}", i + 1)?;
            first = false;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pairing_is_the_coefficient() {
        let w = Weight::from_ints(&[3, -1]);
        assert_eq!(w.pair_coroot(1), &AffineExponent::int(3));
        assert_eq!(w.pair_coroot(2), &AffineExponent::int(-1));
        // fundamental weights pair to the identity matrix
        for i in 1..=2 {
            let mut e = vec![0; 2];
            e[i - 1] = 1;
            let om = Weight::from_ints(&e);
            for j in 1..=2 {
                let expect = if i == j { 1 } else { 0 };
                assert_eq!(om.pair_coroot(j), &AffineExponent::int(expect));
            }
        }
    }

    #[test]
    fn group_laws() {
        let a = Weight::new(vec![AffineExponent::mu(1) - AffineExponent::mu(2)]);
        let z = Weight::zero(1);
        assert_eq!(&a + &z, a);
        assert!((&a - &a).is_zero());
    }

    #[test]
    fn rank_mismatch_is_an_error() {
        let err = Weight::zero(1).checked_add(&Weight::zero(2)).unwrap_err();
        assert_eq!(err, SymbolicError::RankMismatch { left: 1, right: 2 });
    }
}
