use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num::{BigInt, BigRational, One, Signed, Zero};

use super::SymbolicError;

/// A symbolic parameter appearing in q-exponents.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Symbol {
    /// Highest-weight parameter `mu_a`, 1-based.
    Mu(u8),
    /// Twist parameter `t_i`, 1-based.
    Twist(u8),
    /// A module index (such as `m12` or `n1`) promoted to a symbol.
    Index(String),
}

impl Symbol {
    pub fn index(name: impl Into<String>) -> Self {
        Symbol::Index(name.into())
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Symbol::Mu(a) => write!(f, "mu{a}"),
            Symbol::Twist(i) => write!(f, "t{i}"),
            Symbol::Index(name) => f.write_str(name),
        }
    }
}

pub fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Affine-linear expression `constant + sum coeff * symbol` with exact
/// rational coefficients. Zero coefficients are never stored, so structural
/// equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct AffineExponent {
    constant: BigRational,
    coeffs: BTreeMap<Symbol, BigRational>,
}

impl Default for AffineExponent {
    fn default() -> Self {
        Self::zero()
    }
}

impl AffineExponent {
    pub fn zero() -> Self {
        AffineExponent {
            constant: BigRational::zero(),
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRational) -> Self {
        AffineExponent {
            constant: c,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(rat(n))
    }

    pub fn symbol(s: Symbol) -> Self {
        Self::term(s, BigRational::one())
    }

    pub fn mu(a: u8) -> Self {
        Self::symbol(Symbol::Mu(a))
    }

    pub fn term(s: Symbol, c: BigRational) -> Self {
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(s, c);
        }
        AffineExponent {
            constant: BigRational::zero(),
            coeffs,
        }
    }

    /// Builds from a constant and a list of terms; repeated symbols are summed.
    pub fn from_terms(
        constant: BigRational,
        terms: impl IntoIterator<Item = (Symbol, BigRational)>,
    ) -> Self {
        let mut out = Self::constant(constant);
        for (s, c) in terms {
            out.add_term(s, &c);
        }
        out
    }

    fn add_term(&mut self, s: Symbol, c: &BigRational) {
        if c.is_zero() {
            return;
        }
        let remove = {
            let entry = self.coeffs.entry(s.clone()).or_insert_with(BigRational::zero);
            *entry += c;
            entry.is_zero()
        };
        if remove {
            self.coeffs.remove(&s);
        }
    }

    pub fn constant_part(&self) -> &BigRational {
        &self.constant
    }

    pub fn coeff(&self, s: &Symbol) -> BigRational {
        self.coeffs.get(s).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Symbol, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        self.coeffs.keys().cloned().collect()
    }

    pub fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// The value if no symbols remain.
    pub fn as_constant(&self) -> Option<&BigRational> {
        self.is_constant().then_some(&self.constant)
    }

    /// The value if it is a constant integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_constant()
            .filter(|c| c.is_integer())
            .map(|c| c.to_integer())
    }

    /// The symbolic part with the constant dropped.
    pub fn linear_part(&self) -> AffineExponent {
        AffineExponent {
            constant: BigRational::zero(),
            coeffs: self.coeffs.clone(),
        }
    }

    pub fn scale(&self, k: &BigRational) -> AffineExponent {
        if k.is_zero() {
            return Self::zero();
        }
        AffineExponent {
            constant: &self.constant * k,
            coeffs: self.coeffs.iter().map(|(s, c)| (s.clone(), c * k)).collect(),
        }
    }

    pub fn scale_int(&self, k: i64) -> AffineExponent {
        self.scale(&rat(k))
    }

    /// Simultaneous substitution of symbols by affine expressions.
    pub fn substitute(&self, map: &BTreeMap<Symbol, AffineExponent>) -> AffineExponent {
        let mut out = Self::constant(self.constant.clone());
        for (s, c) in &self.coeffs {
            match map.get(s) {
                Some(v) => out = out + v.scale(c),
                None => out.add_term(s.clone(), c),
            }
        }
        out
    }

    /// Partial specialization: bound symbols become numbers, the rest stay.
    pub fn specialize(&self, bindings: &BTreeMap<Symbol, BigRational>) -> AffineExponent {
        let mut out = Self::constant(self.constant.clone());
        for (s, c) in &self.coeffs {
            match bindings.get(s) {
                Some(v) => out.constant += c * v,
                None => out.add_term(s.clone(), c),
            }
        }
        out
    }

    /// Full specialization; every symbol must be bound.
    pub fn evaluate(&self, bindings: &BTreeMap<Symbol, BigRational>) -> Result<BigRational, SymbolicError> {
        let mut v = self.constant.clone();
        for (s, c) in &self.coeffs {
            let b = bindings
                .get(s)
                .ok_or_else(|| SymbolicError::Unbound(s.clone()))?;
            v += c * b;
        }
        Ok(v)
    }
}

impl From<i64> for AffineExponent {
    fn from(n: i64) -> Self {
        Self::int(n)
    }
}

impl From<BigRational> for AffineExponent {
    fn from(c: BigRational) -> Self {
        Self::constant(c)
    }
}

impl Add<&AffineExponent> for &AffineExponent {
    type Output = AffineExponent;
    fn add(self, rhs: &AffineExponent) -> AffineExponent {
        let mut out = self.clone();
        out.constant += &rhs.constant;
        for (s, c) in &rhs.coeffs {
            out.add_term(s.clone(), c);
        }
        out
    }
}

impl Add for AffineExponent {
    type Output = AffineExponent;
    fn add(self, rhs: AffineExponent) -> AffineExponent {
        &self + &rhs
    }
}

impl Add<&AffineExponent> for AffineExponent {
    type Output = AffineExponent;
    fn add(self, rhs: &AffineExponent) -> AffineExponent {
        &self + rhs
    }
}

impl Neg for &AffineExponent {
    type Output = AffineExponent;
    fn neg(self) -> AffineExponent {
        AffineExponent {
            constant: -&self.constant,
            coeffs: self.coeffs.iter().map(|(s, c)| (s.clone(), -c)).collect(),
        }
    }
}

impl Neg for AffineExponent {
    type Output = AffineExponent;
    fn neg(self) -> AffineExponent {
        -&self
    }
}

impl Sub<&AffineExponent> for &AffineExponent {
    type Output = AffineExponent;
    fn sub(self, rhs: &AffineExponent) -> AffineExponent {
        self + &(-rhs)
    }
}

impl Sub for AffineExponent {
    type Output = AffineExponent;
    fn sub(self, rhs: AffineExponent) -> AffineExponent {
        &self - &rhs
    }
}

impl Sub<&AffineExponent> for AffineExponent {
    type Output = AffineExponent;
    fn sub(self, rhs: &AffineExponent) -> AffineExponent {
        &self - rhs
    }
}

fn write_coeff(f: &mut fmt::Formatter<'_>, first: bool, c: &BigRational, body: Option<&Symbol>) -> fmt::Result {
    let neg = c.is_negative();
    let mag = c.abs();
    match (first, neg) {
        (true, true) => f.write_str("-")?,
        (true, false) => {}
        (false, true) => f.write_str(" - ")?,
        (false, false) => f.write_str(" + ")?,
    }
    match body {
        Some(s) if mag.is_one() => write!(f, "{s}"),
        Some(s) => write!(f, "{mag}*{s}"),
        None => write!(f, "{mag}"),
    }
}

impl fmt::Display for AffineExponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (s, c) in &self.coeffs {
            write_coeff(f, first, c, Some(s))?;
            first = false;
        }
        if !self.constant.is_zero() {
            write_coeff(f, first, &self.constant, None)?;
        }
        Ok(())
    }
}
