use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num::BigRational;

use super::{AffineExponent, Symbol, SymbolicError};

/// The factor `1 - q^exponent * Z^z_power` in the formal variable
/// `Z = zeta^s u`. Only `z_power` 1 occurs in well-formed l-weights; power 0
/// encodes a Z-independent constant `1 - q^exponent`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct LinearFactor {
    pub exponent: AffineExponent,
    pub z_power: u8,
}

impl LinearFactor {
    pub fn new(exponent: AffineExponent) -> Self {
        LinearFactor { exponent, z_power: 1 }
    }

    pub fn constant(exponent: AffineExponent) -> Self {
        LinearFactor { exponent, z_power: 0 }
    }

    fn map_exponent(&self, f: impl Fn(&AffineExponent) -> AffineExponent) -> Self {
        LinearFactor {
            exponent: f(&self.exponent),
            z_power: self.z_power,
        }
    }
}

impl fmt::Display for LinearFactor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.z_power {
            0 => write!(f, "(1 - q^({}))", self.exponent),
            1 => write!(f, "(1 - q^({})Z)", self.exponent),
            k => write!(f, "(1 - q^({})Z^{k})", self.exponent),
        }
    }
}

/// `q^prefactor * prod(numerator) / prod(denominator)` with numerator and
/// denominator multisets kept disjoint.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RationalFunction {
    prefactor: AffineExponent,
    numerator: BTreeMap<LinearFactor, u32>,
    denominator: BTreeMap<LinearFactor, u32>,
}

impl Default for RationalFunction {
    fn default() -> Self {
        Self::one()
    }
}

impl RationalFunction {
    pub fn one() -> Self {
        RationalFunction {
            prefactor: AffineExponent::zero(),
            numerator: BTreeMap::new(),
            denominator: BTreeMap::new(),
        }
    }

    /// Builds and cancels common factors.
    pub fn new(
        prefactor: AffineExponent,
        numerator: impl IntoIterator<Item = LinearFactor>,
        denominator: impl IntoIterator<Item = LinearFactor>,
    ) -> Self {
        let mut counts: BTreeMap<LinearFactor, i64> = BTreeMap::new();
        for f in numerator {
            *counts.entry(f).or_default() += 1;
        }
        for f in denominator {
            *counts.entry(f).or_default() -= 1;
        }
        Self::from_counts(prefactor, counts)
    }

    /// Shorthand for factors `1 - q^e Z` given by their exponents.
    pub fn from_exponents(
        numerator: impl IntoIterator<Item = AffineExponent>,
        denominator: impl IntoIterator<Item = AffineExponent>,
    ) -> Self {
        Self::new(
            AffineExponent::zero(),
            numerator.into_iter().map(LinearFactor::new),
            denominator.into_iter().map(LinearFactor::new),
        )
    }

    fn from_counts(prefactor: AffineExponent, counts: BTreeMap<LinearFactor, i64>) -> Self {
        let mut numerator = BTreeMap::new();
        let mut denominator = BTreeMap::new();
        for (f, k) in counts {
            match k {
                k if k > 0 => {
                    numerator.insert(f, k as u32);
                }
                k if k < 0 => {
                    denominator.insert(f, (-k) as u32);
                }
                _ => {}
            }
        }
        RationalFunction {
            prefactor,
            numerator,
            denominator,
        }
    }

    fn signed_counts(&self) -> BTreeMap<LinearFactor, i64> {
        let mut counts: BTreeMap<LinearFactor, i64> = BTreeMap::new();
        for (f, &k) in &self.numerator {
            *counts.entry(f.clone()).or_default() += i64::from(k);
        }
        for (f, &k) in &self.denominator {
            *counts.entry(f.clone()).or_default() -= i64::from(k);
        }
        counts
    }

    pub fn prefactor(&self) -> &AffineExponent {
        &self.prefactor
    }

    pub fn numerator(&self) -> &BTreeMap<LinearFactor, u32> {
        &self.numerator
    }

    pub fn denominator(&self) -> &BTreeMap<LinearFactor, u32> {
        &self.denominator
    }

    pub fn is_one(&self) -> bool {
        self.prefactor.is_zero() && self.numerator.is_empty() && self.denominator.is_empty()
    }

    pub fn mul(&self, other: &RationalFunction) -> RationalFunction {
        let mut counts = self.signed_counts();
        for (f, k) in other.signed_counts() {
            *counts.entry(f).or_default() += k;
        }
        Self::from_counts(&self.prefactor + &other.prefactor, counts)
    }

    pub fn inv(&self) -> RationalFunction {
        RationalFunction {
            prefactor: -&self.prefactor,
            numerator: self.denominator.clone(),
            denominator: self.numerator.clone(),
        }
    }

    pub fn div(&self, other: &RationalFunction) -> RationalFunction {
        self.mul(&other.inv())
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = self.prefactor.symbols();
        for f in self.numerator.keys().chain(self.denominator.keys()) {
            out.extend(f.exponent.symbols());
        }
        out
    }

    fn map_exponents(&self, f: impl Fn(&AffineExponent) -> AffineExponent) -> RationalFunction {
        let num = self
            .numerator
            .iter()
            .flat_map(|(lf, &k)| std::iter::repeat_n(lf.map_exponent(&f), k as usize));
        let den = self
            .denominator
            .iter()
            .flat_map(|(lf, &k)| std::iter::repeat_n(lf.map_exponent(&f), k as usize));
        RationalFunction::new(f(&self.prefactor), num, den)
    }

    /// Adds `c` to every factor exponent, i.e. `Z -> q^c Z`; the prefactor is
    /// untouched.
    pub fn shift_argument(&self, c: &AffineExponent) -> RationalFunction {
        let num = self.numerator.iter().flat_map(|(lf, &k)| {
            let g = if lf.z_power == 0 {
                lf.clone()
            } else {
                lf.map_exponent(|e| e + &c.scale_int(i64::from(lf.z_power)))
            };
            std::iter::repeat_n(g, k as usize)
        });
        let den = self.denominator.iter().flat_map(|(lf, &k)| {
            let g = if lf.z_power == 0 {
                lf.clone()
            } else {
                lf.map_exponent(|e| e + &c.scale_int(i64::from(lf.z_power)))
            };
            std::iter::repeat_n(g, k as usize)
        });
        RationalFunction::new(self.prefactor.clone(), num, den)
    }

    pub fn substitute(&self, map: &BTreeMap<Symbol, AffineExponent>) -> RationalFunction {
        self.map_exponents(|e| e.substitute(map))
    }

    pub fn specialize(&self, bindings: &BTreeMap<Symbol, BigRational>) -> RationalFunction {
        self.map_exponents(|e| e.specialize(bindings))
    }

    /// Specializes and fails if any symbol is left unbound.
    pub fn specialize_full(&self, bindings: &BTreeMap<Symbol, BigRational>) -> Result<RationalFunction, SymbolicError> {
        if let Some(s) = self.symbols().into_iter().find(|s| !bindings.contains_key(s)) {
            return Err(SymbolicError::Unbound(s));
        }
        Ok(self.specialize(bindings))
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_one() {
            return f.write_str("1");
        }
        let mut wrote = false;
        if !self.prefactor.is_zero() {
            write!(f, "q^({})", self.prefactor)?;
            wrote = true;
        }
        for (lf, &k) in &self.numerator {
            write!(f, "{lf}")?;
            if k > 1 {
                write!(f, "^{k}")?;
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("1")?;
        }
        if !self.denominator.is_empty() {
            f.write_str(" / ")?;
            for (lf, &k) in &self.denominator {
                write!(f, "{lf}")?;
                if k > 1 {
                    write!(f, "^{k}")?;
                }
            }
        }
        Ok(())
    }
}
