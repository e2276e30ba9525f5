//! Closed-form l-weights of the evaluation modules and the q-oscillator
//! modules for `l = 1, 2`, the specialization plans that make the oscillator
//! highest l-weights multiply to an evaluation highest l-weight, and the
//! associated shift weights.

use std::collections::BTreeMap;

use num::BigRational;
use serde::Serialize;

use crate::symbolic::{AffineExponent, LWeight, LinearFactor, RationalFunction, Symbol, SymbolicError, Weight};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CatalogError {
    #[error("unsupported rank l = {0}")]
    Rank(usize),
    #[error("invalid index: {0}")]
    Index(String),
    #[error("evaluation point may not depend on module indices: {0}")]
    Point(AffineExponent),
    #[error("plan shift {found} does not match {expected}")]
    PlanShift { expected: Weight, found: Weight },
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

fn check_rank(l: usize) -> Result<(), CatalogError> {
    if l == 1 || l == 2 {
        Ok(())
    } else {
        Err(CatalogError::Rank(l))
    }
}

fn int(n: i64) -> AffineExponent {
    AffineExponent::int(n)
}

fn mu(a: u8) -> AffineExponent {
    AffineExponent::mu(a)
}

/// The point `q^{c/s} zeta`; only the exponent `c` is stored since every
/// series depends on `zeta^s u` alone.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ZetaPoint {
    c: AffineExponent,
}

impl ZetaPoint {
    /// The unshifted point `zeta`.
    pub fn base() -> Self {
        ZetaPoint { c: AffineExponent::zero() }
    }

    pub fn new(c: AffineExponent) -> Result<Self, CatalogError> {
        if c.symbols().iter().any(|s| matches!(s, Symbol::Index(_))) {
            return Err(CatalogError::Point(c));
        }
        Ok(ZetaPoint { c })
    }

    pub fn offset(&self) -> &AffineExponent {
        &self.c
    }

    pub fn substitute(&self, map: &BTreeMap<Symbol, AffineExponent>) -> Self {
        ZetaPoint { c: self.c.substitute(map) }
    }
}

/// Basis label `m` of an evaluation module, in colexicographic order:
/// `(m12)` for `l = 1`, `(m12, m13, m23)` for `l = 2`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct EvalIndex {
    m: Vec<u32>,
}

impl EvalIndex {
    pub fn new(l: usize, m: Vec<u32>) -> Result<Self, CatalogError> {
        check_rank(l)?;
        if m.len() != l * (l + 1) / 2 {
            return Err(CatalogError::Index(format!("expected {} entries for l = {l}, got {}", l * (l + 1) / 2, m.len())));
        }
        Ok(EvalIndex { m })
    }

    pub fn rank(&self) -> usize {
        if self.m.len() == 1 { 1 } else { 2 }
    }

    pub fn entries(&self) -> &[u32] {
        &self.m
    }
}

/// Basis label of an oscillator module `theta_a`, `1 <= a <= l + 1`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct OscIndex {
    l: usize,
    a: usize,
    n: Vec<u32>,
}

impl OscIndex {
    pub fn new(l: usize, a: usize, n: Vec<u32>) -> Result<Self, CatalogError> {
        check_rank(l)?;
        if !(1..=l + 1).contains(&a) {
            return Err(CatalogError::Index(format!("a = {a} outside 1..={}", l + 1)));
        }
        if n.len() != l {
            return Err(CatalogError::Index(format!("expected {l} entries, got {}", n.len())));
        }
        Ok(OscIndex { l, a, n })
    }

    pub fn rank(&self) -> usize {
        self.l
    }

    pub fn a(&self) -> usize {
        self.a
    }

    pub fn entries(&self) -> &[u32] {
        &self.n
    }
}

fn ints(v: &[u32]) -> Vec<AffineExponent> {
    v.iter().map(|&x| int(i64::from(x))).collect()
}

fn rf(num: Vec<AffineExponent>, den: Vec<AffineExponent>, at: &ZetaPoint) -> RationalFunction {
    RationalFunction::from_exponents(
        num.into_iter().map(|e| e + at.offset()),
        den.into_iter().map(|e| e + at.offset()),
    )
}

/// Evaluation-module l-weight with symbolic `mu` and symbolic or numeric
/// index entries `m`.
pub fn eval_lweight_symbolic(m: &[AffineExponent], at: &ZetaPoint) -> Result<LWeight, CatalogError> {
    let lw = match m {
        [m12] => {
            let weight = Weight::new(vec![mu(1) - mu(2) - m12.scale_int(2)]);
            let s = rf(
                vec![mu(1).scale_int(2) + int(2), mu(2).scale_int(2)],
                vec![
                    mu(1).scale_int(2) + int(2) - m12.scale_int(2),
                    mu(1).scale_int(2) - m12.scale_int(2),
                ],
                at,
            );
            LWeight::new(weight, vec![s])?
        }
        [m12, m13, m23] => {
            let weight = Weight::new(vec![
                mu(1) - mu(2) - m12.scale_int(2) - m13.clone() + m23.clone(),
                mu(2) - mu(3) + m12.clone() - m13.clone() - m23.scale_int(2),
            ]);
            let (m12, m13, m23) = (m12.scale_int(2), m13.scale_int(2), m23.scale_int(2));
            let mu1 = mu(1).scale_int(2);
            let mu2 = mu(2).scale_int(2);
            let mu3 = mu(3).scale_int(2);
            let s1 = rf(
                vec![&mu1 - &m13 + int(2), &mu2 - &m23],
                vec![&mu1 - &m12 - &m13 + int(2), &mu1 - &m12 - &m13],
                at,
            );
            let s2 = rf(
                vec![
                    &mu1 - &m12 - &m13 + int(1),
                    &mu1 + &int(3),
                    &mu2 + &int(1),
                    &mu3 - &int(1),
                ],
                vec![
                    &mu1 - &m13 + int(1),
                    &mu1 - &m13 + int(3),
                    &mu2 - &m23 + int(1),
                    &mu2 - &m23 - int(1),
                ],
                at,
            );
            LWeight::new(weight, vec![s1, s2])?
        }
        _ => return Err(CatalogError::Index(format!("{} evaluation index entries", m.len()))),
    };
    Ok(lw)
}

pub fn eval_lweight(idx: &EvalIndex, at: &ZetaPoint) -> Result<LWeight, CatalogError> {
    eval_lweight_symbolic(&ints(&idx.m), at)
}

/// The shape of the second series of `theta_2` for `l = 2`:
/// `(1 - q^x Z) / ((1 - q^{-2 n1 + y1} Z^{k1}) (1 - q^{-2 n1 + y2} Z^{k2}))`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SecondSeriesForm {
    pub numerator: i64,
    pub denominators: [(i64, u8); 2],
}

impl SecondSeriesForm {
    /// The form used throughout the library.
    pub const CORRECTED: SecondSeriesForm = SecondSeriesForm {
        numerator: 1,
        denominators: [(-1, 1), (1, 1)],
    };

    /// The variant whose last denominator factor carries no `Z`.
    pub const LITERAL: SecondSeriesForm = SecondSeriesForm {
        numerator: 1,
        denominators: [(-1, 1), (1, 0)],
    };

    fn build(&self, n1: &AffineExponent, at: &ZetaPoint) -> RationalFunction {
        let factor = |e: AffineExponent, k: u8| {
            if k == 0 {
                LinearFactor::constant(e)
            } else {
                LinearFactor::new(e + at.offset().scale_int(i64::from(k)))
            }
        };
        let num = factor(int(self.numerator), 1);
        let den = self
            .denominators
            .iter()
            .map(|&(y, k)| factor(int(y) - n1.scale_int(2), k));
        RationalFunction::new(AffineExponent::zero(), [num], den)
    }
}

impl Default for SecondSeriesForm {
    fn default() -> Self {
        Self::CORRECTED
    }
}

/// Oscillator l-weight with symbolic or numeric indices `n`.
pub fn osc_lweight_symbolic(
    l: usize,
    a: usize,
    n: &[AffineExponent],
    at: &ZetaPoint,
    form: &SecondSeriesForm,
) -> Result<LWeight, CatalogError> {
    check_rank(l)?;
    if n.len() != l || !(1..=l + 1).contains(&a) {
        return Err(CatalogError::Index(format!("l = {l}, a = {a}, {} entries", n.len())));
    }
    let one = || int(1);
    let lw = match (l, a) {
        (1, 1) => {
            let n1 = &n[0];
            LWeight::new(
                Weight::new(vec![-n1.scale_int(2) - int(2)]),
                vec![rf(vec![one()], vec![-n1.scale_int(2) - int(1), -n1.scale_int(2) + int(1)], at)],
            )?
        }
        (1, 2) => LWeight::new(Weight::new(vec![-n[0].scale_int(2)]), vec![rf(vec![one()], vec![], at)])?,
        (2, 1) => {
            let (n1, n2) = (&n[0], &n[1]);
            let s = -(n1 + n2).scale_int(2);
            LWeight::new(
                Weight::new(vec![-n1.scale_int(2) - n2.clone() - int(3), n1 - n2]),
                vec![
                    rf(vec![-n2.scale_int(2)], vec![s.clone(), &s - &int(2)], at),
                    rf(
                        vec![one(), &s - &int(1)],
                        vec![-n2.scale_int(2) - int(1), -n2.scale_int(2) + int(1)],
                        at,
                    ),
                ],
            )?
        }
        (2, 2) => {
            let (n1, n2) = (&n[0], &n[1]);
            LWeight::new(
                Weight::new(vec![n1 - &n2.scale_int(2) + int(1), -n1.scale_int(2) + n2.clone() - int(2)]),
                vec![rf(vec![-n1.scale_int(2)], vec![], at), form.build(n1, at)],
            )?
        }
        (2, 3) => {
            let (n1, n2) = (&n[0], &n[1]);
            LWeight::new(
                Weight::new(vec![n2 - n1, -n1.clone() - n2.scale_int(2)]),
                vec![RationalFunction::one(), rf(vec![one()], vec![], at)],
            )?
        }
        _ => unreachable!("rank and a checked above"),
    };
    Ok(lw)
}

pub fn osc_lweight(idx: &OscIndex, at: &ZetaPoint) -> Result<LWeight, CatalogError> {
    osc_lweight_with(idx, at, &SecondSeriesForm::CORRECTED)
}

pub fn osc_lweight_with(idx: &OscIndex, at: &ZetaPoint, form: &SecondSeriesForm) -> Result<LWeight, CatalogError> {
    osc_lweight_symbolic(idx.l, idx.a, &ints(&idx.n), at, form)
}

/// Offsets `k_a` in the plan points `c_a = 2 mu_a + k_a`.
pub fn specialization_offsets(l: usize) -> Result<Vec<i64>, CatalogError> {
    match l {
        1 => Ok(vec![1, -1]),
        2 => Ok(vec![2, 0, -2]),
        _ => Err(CatalogError::Rank(l)),
    }
}

/// Weight of the oscillator tensor product with labels `n[a-1][i-1] = n_{a i}`.
pub fn product_weight(l: usize, n: &[Vec<AffineExponent>]) -> Result<Weight, CatalogError> {
    check_rank(l)?;
    let c = |a: usize, i: usize| n[a - 1][i - 1].clone();
    Ok(match l {
        1 => Weight::new(vec![int(-2) - c(1, 1).scale_int(2) - c(2, 1).scale_int(2)]),
        _ => Weight::new(vec![
            int(-2) - c(1, 1).scale_int(2) - c(1, 2) + c(2, 1) - c(2, 2).scale_int(2) - c(3, 1) + c(3, 2),
            int(-2) + c(1, 1) - c(1, 2) - c(2, 1).scale_int(2) + c(2, 2) - c(3, 1) - c(3, 2).scale_int(2),
        ]),
    })
}

/// Number of entries of `n'`: the labels of all oscillator factors but the
/// first that do not enter the evaluation-module label.
pub fn shift_arity(l: usize) -> usize {
    l * (l + 1) / 2
}

/// The shift `delta_{n'}` relating a fixed-`n'` slice of the oscillator
/// product to the shifted evaluation module. `n' = (n21)` for `l = 1` and
/// `(n22, n31, n32)` for `l = 2`.
pub fn shift_weight(l: usize, n_prime: &[AffineExponent]) -> Result<Weight, CatalogError> {
    match (l, n_prime) {
        (1, [n21]) => Ok(Weight::new(vec![int(-2) - mu(1) + mu(2) - n21.scale_int(2)])),
        (2, [n22, n31, n32]) => Ok(Weight::new(vec![
            int(-2) - mu(1) + mu(2) - n22.scale_int(2) - n31.clone() + n32.clone(),
            int(-2) - mu(2) + mu(3) + n22.clone() - n31.clone() - n32.scale_int(2),
        ])),
        (1 | 2, _) => Err(CatalogError::Index(format!("{} shift entries for l = {l}", n_prime.len()))),
        _ => Err(CatalogError::Rank(l)),
    }
}

/// Evaluation points of the oscillator factors together with the weight
/// shift carrying the evaluation highest weight to their product's weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpecializationPlan {
    l: usize,
    points: Vec<ZetaPoint>,
    hw_shift: Weight,
}

impl SpecializationPlan {
    /// Validates that `hw_shift` is the difference between the oscillator
    /// highest-product weight and the evaluation highest weight.
    pub fn new(l: usize, points: Vec<ZetaPoint>, hw_shift: Weight) -> Result<Self, CatalogError> {
        let plan = Self::from_points(l, points)?;
        if plan.hw_shift != hw_shift {
            return Err(CatalogError::PlanShift {
                expected: plan.hw_shift,
                found: hw_shift,
            });
        }
        Ok(plan)
    }

    /// Derives the shift from the points.
    pub fn from_points(l: usize, points: Vec<ZetaPoint>) -> Result<Self, CatalogError> {
        check_rank(l)?;
        if points.len() != l + 1 {
            return Err(CatalogError::Index(format!("{} points for l = {l}", points.len())));
        }
        let top = highest_product_at(l, &points, &SecondSeriesForm::CORRECTED)?;
        let eval_top = eval_lweight_symbolic(&vec![int(0); l * (l + 1) / 2], &ZetaPoint::base())?;
        let hw_shift = &top.weight - &eval_top.weight;
        Ok(SpecializationPlan { l, points, hw_shift })
    }

    /// The plan with `c_a = 2 mu_a + k_a`.
    pub fn standard(l: usize) -> Result<Self, CatalogError> {
        let offsets = specialization_offsets(l)?;
        let points = offsets
            .iter()
            .enumerate()
            .map(|(i, &k)| ZetaPoint::new(mu(i as u8 + 1).scale_int(2) + int(k)))
            .collect::<Result<Vec<_>, _>>()?;
        let hw_shift = shift_weight(l, &vec![int(0); shift_arity(l)])?;
        Self::new(l, points, hw_shift)
    }

    pub fn rank(&self) -> usize {
        self.l
    }

    pub fn points(&self) -> &[ZetaPoint] {
        &self.points
    }

    pub fn point_exponents(&self) -> Vec<AffineExponent> {
        self.points.iter().map(|p| p.offset().clone()).collect()
    }

    pub fn hw_shift(&self) -> &Weight {
        &self.hw_shift
    }

    /// The plan with every point replaced by `f(a, c_a)`; the shift is
    /// recomputed.
    pub fn map_points(&self, f: impl Fn(usize, &AffineExponent) -> AffineExponent) -> Result<Self, CatalogError> {
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(i, p)| ZetaPoint::new(f(i + 1, p.offset())))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_points(self.l, points)
    }

    pub fn substitute(&self, map: &BTreeMap<Symbol, AffineExponent>) -> Self {
        SpecializationPlan {
            l: self.l,
            points: self.points.iter().map(|p| p.substitute(map)).collect(),
            hw_shift: self.hw_shift.substitute(map),
        }
    }
}

fn highest_product_at(l: usize, points: &[ZetaPoint], form: &SecondSeriesForm) -> Result<LWeight, CatalogError> {
    let zero = vec![int(0); l];
    let mut acc = LWeight::identity(l);
    for (i, p) in points.iter().enumerate() {
        acc = acc.mul(&osc_lweight_symbolic(l, i + 1, &zero, p, form)?)?;
    }
    Ok(acc)
}

/// Product of the oscillator highest l-weights at the plan points.
pub fn highest_lweight_product(plan: &SpecializationPlan) -> Result<LWeight, CatalogError> {
    highest_product_at(plan.l, &plan.points, &SecondSeriesForm::CORRECTED)
}

/// Binds `mu_a` to the given rationals.
pub fn mu_bindings(values: &[BigRational]) -> BTreeMap<Symbol, BigRational> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| (Symbol::Mu(i as u8 + 1), v.clone()))
        .collect()
}
