use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::BigRational;

use super::{AffineExponent, RationalFunction, Symbol, SymbolicError, Weight};

/// A Borel l-weight: a weight together with the `l` plus-series written as
/// rational functions of `Z`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LWeight {
    pub weight: Weight,
    pub series: Vec<RationalFunction>,
}

impl LWeight {
    pub fn new(weight: Weight, series: Vec<RationalFunction>) -> Result<Self, SymbolicError> {
        if weight.rank() != series.len() {
            return Err(SymbolicError::RankMismatch {
                left: weight.rank(),
                right: series.len(),
            });
        }
        Ok(LWeight { weight, series })
    }

    pub fn identity(rank: usize) -> Self {
        LWeight {
            weight: Weight::zero(rank),
            series: vec![RationalFunction::one(); rank],
        }
    }

    pub fn rank(&self) -> usize {
        self.weight.rank()
    }

    pub fn is_identity(&self) -> bool {
        self.weight.is_zero() && self.series.iter().all(RationalFunction::is_one)
    }

    pub fn mul(&self, other: &LWeight) -> Result<LWeight, SymbolicError> {
        let weight = self.weight.checked_add(&other.weight)?;
        let series = self
            .series
            .iter()
            .zip(&other.series)
            .map(|(f, g)| f.mul(g))
            .collect();
        Ok(LWeight { weight, series })
    }

    pub fn inv(&self) -> LWeight {
        LWeight {
            weight: -&self.weight,
            series: self.series.iter().map(RationalFunction::inv).collect(),
        }
    }

    /// Moves the weight by `xi`; the series are untouched.
    pub fn shift(&self, xi: &Weight) -> Result<LWeight, SymbolicError> {
        Ok(LWeight {
            weight: self.weight.checked_add(xi)?,
            series: self.series.clone(),
        })
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for c in self.weight.coeffs() {
            out.extend(c.symbols());
        }
        for f in &self.series {
            out.extend(f.symbols());
        }
        out
    }

    pub fn substitute(&self, map: &BTreeMap<Symbol, AffineExponent>) -> LWeight {
        LWeight {
            weight: self.weight.substitute(map),
            series: self.series.iter().map(|f| f.substitute(map)).collect(),
        }
    }

    /// Partial specialization of the bound symbols.
    pub fn specialize(&self, bindings: &BTreeMap<Symbol, BigRational>) -> LWeight {
        LWeight {
            weight: self.weight.specialize(bindings),
            series: self.series.iter().map(|f| f.specialize(bindings)).collect(),
        }
    }

    /// Specialization that requires every symbol to be bound.
    pub fn specialize_full(&self, bindings: &BTreeMap<Symbol, BigRational>) -> Result<LWeight, SymbolicError> {
        if let Some(s) = self.symbols().into_iter().find(|s| !bindings.contains_key(s)) {
            return Err(SymbolicError::Unbound(s));
        }
        Ok(self.specialize(bindings))
    }
}

impl fmt::Display for LWeight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}; ", self.weight)?;
        for (i, s) in self.series.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::symbolic::rat;

    fn sample() -> LWeight {
        let mu1 = AffineExponent::mu(1);
        let mu2 = AffineExponent::mu(2);
        LWeight::new(
            Weight::new(vec![&mu1 - &mu2]),
            vec![RationalFunction::from_exponents([mu2.scale_int(2)], [mu1.scale_int(2)])],
        )
        .unwrap()
    }

    #[test]
    fn identity_and_inverse() {
        let l = sample();
        assert_eq!(l.mul(&LWeight::identity(1)).unwrap(), l);
        assert!(l.mul(&l.inv()).unwrap().is_identity());
    }

    #[test]
    fn rank_mismatch() {
        assert!(sample().mul(&LWeight::identity(2)).is_err());
        assert!(LWeight::new(Weight::zero(2), vec![RationalFunction::one()]).is_err());
    }

    #[test]
    fn shift_moves_only_the_weight() {
        let mu1 = AffineExponent::mu(1);
        let mu2 = AffineExponent::mu(2);
        let f = sample().series[0].clone();
        let low = LWeight::new(Weight::from_ints(&[-2]), vec![f.clone()]).unwrap();
        let xi = Weight::new(vec![&mu1 - &mu2 + AffineExponent::int(2)]);
        let up = low.shift(&xi).unwrap();
        assert_eq!(up.weight, Weight::new(vec![&mu1 - &mu2]));
        assert_eq!(up.series, vec![f]);
        assert_eq!(up.shift(&-&xi).unwrap(), low);
        assert_eq!(low.shift(&Weight::zero(1)).unwrap(), low);
    }

    #[test]
    fn specialization_of_highest_series() {
        let bind: BTreeMap<_, _> = [(Symbol::Mu(1), rat(1)), (Symbol::Mu(2), rat(0))].into();
        let s = sample().specialize_full(&bind).unwrap();
        assert_eq!(
            s.series[0],
            RationalFunction::from_exponents([AffineExponent::int(0)], [AffineExponent::int(2)])
        );
        assert_eq!(s.weight, Weight::from_ints(&[1]));
    }
}
