//! Truncated q-characters: finite multisets of l-weights graded by their
//! root-lattice depth below a reference top weight.

use std::collections::BTreeMap;

use num::{BigRational, Signed, ToPrimitive};
use rayon::prelude::*;

use crate::catalog::{
    eval_lweight_symbolic, osc_lweight_symbolic, shift_arity, shift_weight, CatalogError, SecondSeriesForm,
    SpecializationPlan, ZetaPoint,
};
use crate::lie::root_coordinates;
use crate::report::VerificationReport;
use crate::symbolic::{AffineExponent, LWeight, Symbol, SymbolicError, Weight};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum QCharError {
    #[error("rank mismatch: {left} vs {right}")]
    Rank { left: usize, right: usize },
    #[error("depth of {weight} below {top} is not a constant non-negative integer")]
    Depth { weight: Weight, top: Weight },
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Symbolic(#[from] SymbolicError),
}

/// Depth of `weight` below `top`: the sum of the simple-root coordinates of
/// `top - weight`.
pub fn depth_below(top: &Weight, weight: &Weight) -> Result<u32, QCharError> {
    let drop = top.checked_add(&-weight)?;
    let total = root_coordinates(&drop)
        .into_iter()
        .fold(AffineExponent::zero(), |a, b| a + b);
    total
        .as_integer()
        .filter(|d| !d.is_negative())
        .and_then(|d| d.to_u32())
        .ok_or_else(|| QCharError::Depth {
            weight: weight.clone(),
            top: top.clone(),
        })
}

/// A truncated q-character. Every stored l-weight has depth at most
/// `cutoff` below `top`; multiplicities are positive.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QCharacter {
    rank: usize,
    top: Weight,
    cutoff: u32,
    entries: BTreeMap<LWeight, u64>,
}

/// Result of comparing two characters as multisets.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CharDiff {
    /// Entries where the left multiplicity exceeds the right, with the excess.
    pub left_excess: Vec<(LWeight, u64)>,
    pub right_excess: Vec<(LWeight, u64)>,
}

impl CharDiff {
    pub fn is_empty(&self) -> bool {
        self.left_excess.is_empty() && self.right_excess.is_empty()
    }

    pub fn len(&self) -> usize {
        self.left_excess.len() + self.right_excess.len()
    }

    /// Human-readable lines, at most `limit`.
    pub fn sample(&self, limit: usize) -> Vec<String> {
        self.left_excess
            .iter()
            .map(|(lw, k)| format!("left +{k}: {lw}"))
            .chain(self.right_excess.iter().map(|(lw, k)| format!("right +{k}: {lw}")))
            .take(limit)
            .collect()
    }
}

impl QCharacter {
    /// An empty character with the given reference top.
    pub fn empty(top: Weight, cutoff: u32) -> Self {
        QCharacter {
            rank: top.rank(),
            top,
            cutoff,
            entries: BTreeMap::new(),
        }
    }

    /// The character `{identity}`.
    pub fn trivial(rank: usize, cutoff: u32) -> Self {
        let mut c = Self::empty(Weight::zero(rank), cutoff);
        c.entries.insert(LWeight::identity(rank), 1);
        c
    }

    /// Builds from entries, dropping those deeper than `cutoff`.
    pub fn from_entries(
        top: Weight,
        cutoff: u32,
        entries: impl IntoIterator<Item = (LWeight, u64)>,
    ) -> Result<Self, QCharError> {
        let mut c = Self::empty(top, cutoff);
        c.absorb(entries)?;
        Ok(c)
    }

    fn absorb(&mut self, entries: impl IntoIterator<Item = (LWeight, u64)>) -> Result<(), QCharError> {
        for (lw, k) in entries {
            if lw.rank() != self.rank {
                return Err(QCharError::Rank {
                    left: self.rank,
                    right: lw.rank(),
                });
            }
            if k == 0 || depth_below(&self.top, &lw.weight)? > self.cutoff {
                continue;
            }
            *self.entries.entry(lw).or_insert(0) += k;
        }
        Ok(())
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn top(&self) -> &Weight {
        &self.top
    }

    pub fn cutoff(&self) -> u32 {
        self.cutoff
    }

    pub fn entries(&self) -> &BTreeMap<LWeight, u64> {
        &self.entries
    }

    /// Number of distinct l-weights.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sum of multiplicities.
    pub fn total(&self) -> u64 {
        self.entries.values().sum()
    }

    pub fn depth(&self, lw: &LWeight) -> Result<u32, QCharError> {
        depth_below(&self.top, &lw.weight)
    }

    /// Product of characters: pairwise l-weight products, truncated at the
    /// smaller cutoff below the sum of the tops.
    pub fn mul(&self, other: &QCharacter) -> Result<QCharacter, QCharError> {
        if self.rank != other.rank {
            return Err(QCharError::Rank {
                left: self.rank,
                right: other.rank,
            });
        }
        let top = &self.top + &other.top;
        let cutoff = self.cutoff.min(other.cutoff);
        let left = self.graded()?;
        let right = other.graded()?;
        let products: Vec<Vec<(LWeight, u64)>> = left
            .par_iter()
            .map(|(dx, x, kx)| {
                right
                    .iter()
                    .filter(|(dy, _, _)| dx + dy <= cutoff)
                    .map(|(_, y, ky)| x.mul(y).map(|p| (p, kx * ky)))
                    .collect::<Result<Vec<_>, _>>()
            })
            .collect::<Result<_, _>>()?;
        let mut out = QCharacter::empty(top, cutoff);
        for (lw, k) in products.into_iter().flatten() {
            *out.entries.entry(lw).or_insert(0) += k;
        }
        Ok(out)
    }

    fn graded(&self) -> Result<Vec<(u32, &LWeight, u64)>, QCharError> {
        self.entries
            .iter()
            .map(|(lw, &k)| Ok((self.depth(lw)?, lw, k)))
            .collect()
    }

    /// Moves every weight and the top by `xi`.
    pub fn shift(&self, xi: &Weight) -> Result<QCharacter, QCharError> {
        let top = self.top.checked_add(xi)?;
        let entries = self
            .entries
            .iter()
            .map(|(lw, &k)| Ok((lw.shift(xi)?, k)))
            .collect::<Result<BTreeMap<_, _>, QCharError>>()?;
        Ok(QCharacter {
            rank: self.rank,
            top,
            cutoff: self.cutoff,
            entries,
        })
    }

    /// Drops everything deeper than `cutoff`.
    pub fn truncate(&self, cutoff: u32) -> Result<QCharacter, QCharError> {
        let cutoff = cutoff.min(self.cutoff);
        QCharacter::from_entries(
            self.top.clone(),
            cutoff,
            self.entries.iter().map(|(lw, &k)| (lw.clone(), k)),
        )
    }

    /// Sum of characters, re-graded against `top` and truncated at `cutoff`.
    pub fn sum<'a>(
        top: Weight,
        cutoff: u32,
        parts: impl IntoIterator<Item = &'a QCharacter>,
    ) -> Result<QCharacter, QCharError> {
        let mut out = QCharacter::empty(top, cutoff);
        for p in parts {
            out.absorb(p.entries.iter().map(|(lw, &k)| (lw.clone(), k)))?;
        }
        Ok(out)
    }

    /// Binds symbols to rationals; entries that become equal are merged.
    pub fn specialize(&self, bindings: &BTreeMap<Symbol, BigRational>) -> QCharacter {
        let mut entries = BTreeMap::new();
        for (lw, &k) in &self.entries {
            *entries.entry(lw.specialize(bindings)).or_insert(0) += k;
        }
        QCharacter {
            rank: self.rank,
            top: self.top.specialize(bindings),
            cutoff: self.cutoff,
            entries,
        }
    }

    /// Exact multiset comparison.
    pub fn compare(&self, other: &QCharacter) -> CharDiff {
        let mut diff = CharDiff::default();
        for (lw, &k) in &self.entries {
            let j = other.entries.get(lw).copied().unwrap_or(0);
            if k > j {
                diff.left_excess.push((lw.clone(), k - j));
            }
        }
        for (lw, &k) in &other.entries {
            let j = self.entries.get(lw).copied().unwrap_or(0);
            if k > j {
                diff.right_excess.push((lw.clone(), k - j));
            }
        }
        diff
    }
}

/// All tuples of length `len` with entries in `0..=bound`.
pub(crate) fn index_box(len: usize, bound: u32) -> Vec<Vec<u32>> {
    let mut out = vec![vec![]];
    for _ in 0..len {
        out = out
            .into_iter()
            .flat_map(|t| {
                (0..=bound).map(move |x| {
                    let mut t = t.clone();
                    t.push(x);
                    t
                })
            })
            .collect();
    }
    out
}

fn ints(v: &[u32]) -> Vec<AffineExponent> {
    v.iter().map(|&x| AffineExponent::int(i64::from(x))).collect()
}

/// Character of an evaluation module truncated at depth `cutoff`; every
/// l-weight space is taken to be one-dimensional.
pub fn char_evaluation(l: usize, at: &ZetaPoint, cutoff: u32) -> Result<QCharacter, QCharError> {
    let arity = l * (l + 1) / 2;
    let top = eval_lweight_symbolic(&vec![AffineExponent::zero(); arity], at)?.weight;
    // every index unit lowers the depth by at least one
    let entries = index_box(arity, cutoff)
        .par_iter()
        .map(|m| eval_lweight_symbolic(&ints(m), at).map(|lw| (lw, 1)))
        .collect::<Result<Vec<_>, _>>()?;
    QCharacter::from_entries(top, cutoff, entries)
}

/// Character of the oscillator module `theta_a` truncated at depth `cutoff`.
pub fn char_oscillator(
    l: usize,
    a: usize,
    at: &ZetaPoint,
    cutoff: u32,
    form: &SecondSeriesForm,
) -> Result<QCharacter, QCharError> {
    let top = osc_lweight_symbolic(l, a, &vec![AffineExponent::zero(); l], at, form)?.weight;
    let entries = index_box(l, cutoff)
        .par_iter()
        .map(|n| osc_lweight_symbolic(l, a, &ints(n), at, form).map(|lw| (lw, 1)))
        .collect::<Result<Vec<_>, _>>()?;
    QCharacter::from_entries(top, cutoff, entries)
}

/// How the two sides of the Grothendieck identity are compared.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum CompareMode {
    /// Exact comparison with `mu` kept symbolic.
    #[default]
    Symbolic,
    /// Comparison after binding `mu_a` to the given rationals.
    Numeric(Vec<BigRational>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct GrothendieckSides {
    pub product: QCharacter,
    pub shifted_sum: QCharacter,
}

/// Builds both sides: the product of oscillator characters at the plan
/// points, and the sum over `n'` of evaluation characters shifted by
/// `delta_{n'}`, all truncated at `depth`.
pub fn grothendieck_sides(
    plan: &SpecializationPlan,
    depth: u32,
    form: &SecondSeriesForm,
) -> Result<GrothendieckSides, QCharError> {
    let l = plan.rank();
    let mut product = QCharacter::trivial(l, depth);
    for (i, p) in plan.points().iter().enumerate() {
        product = product.mul(&char_oscillator(l, i + 1, p, depth, form)?)?;
    }

    let base = ZetaPoint::base();
    let eval_top = eval_lweight_symbolic(&vec![AffineExponent::zero(); l * (l + 1) / 2], &base)?.weight;
    let delta0 = shift_weight(l, &vec![AffineExponent::zero(); shift_arity(l)])?;
    let sum_top = &eval_top + &delta0;
    let mut parts = Vec::new();
    for np in index_box(shift_arity(l), depth) {
        let delta = shift_weight(l, &ints(&np))?;
        let d = depth_below(&delta0, &delta)?;
        if d > depth {
            continue;
        }
        parts.push(char_evaluation(l, &base, depth - d)?.shift(&delta)?);
    }
    let shifted_sum = QCharacter::sum(sum_top, depth, &parts)?;
    Ok(GrothendieckSides { product, shifted_sum })
}

/// Checks that the oscillator product character equals the sum of shifted
/// evaluation characters up to `depth`.
pub fn verify_grothendieck(l: usize, depth: u32) -> Result<VerificationReport, QCharError> {
    let plan = SpecializationPlan::standard(l)?;
    verify_grothendieck_with(&plan, depth, &SecondSeriesForm::CORRECTED, &CompareMode::Symbolic)
}

pub fn verify_grothendieck_with(
    plan: &SpecializationPlan,
    depth: u32,
    form: &SecondSeriesForm,
    mode: &CompareMode,
) -> Result<VerificationReport, QCharError> {
    let sides = grothendieck_sides(plan, depth, form)?;
    let (lhs, rhs) = match mode {
        CompareMode::Symbolic => (sides.product, sides.shifted_sum),
        CompareMode::Numeric(mu) => {
            let b = crate::catalog::mu_bindings(mu);
            (sides.product.specialize(&b), sides.shifted_sum.specialize(&b))
        }
    };
    let diff = lhs.compare(&rhs);
    let mut report = VerificationReport::new("grothendieck")
        .param("l", plan.rank())
        .param("depth", depth)
        .param(
            "mode",
            match mode {
                CompareMode::Symbolic => "symbolic".to_string(),
                CompareMode::Numeric(mu) => {
                    format!("numeric mu = ({})", mu.iter().map(|m| m.to_string()).collect::<Vec<_>>().join(", "))
                }
            },
        )
        .param("points", plan.point_exponents().iter().map(|c| c.to_string()).collect::<Vec<_>>())
        .metric("product_distinct", lhs.len())
        .metric("product_total", lhs.total())
        .metric("shifted_sum_distinct", rhs.len())
        .metric("shifted_sum_total", rhs.total())
        .metric("symmetric_difference", diff.len());
    for line in diff.sample(crate::report::DIFF_SAMPLE_LIMIT) {
        report.fail(line);
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::SpecializationPlan;

    fn form() -> SecondSeriesForm {
        SecondSeriesForm::CORRECTED
    }

    #[test]
    fn evaluation_counts() {
        let z = ZetaPoint::base();
        assert_eq!(char_evaluation(1, &z, 0).unwrap().len(), 1);
        assert_eq!(char_evaluation(1, &z, 2).unwrap().len(), 3);
        let c = char_evaluation(2, &z, 1).unwrap();
        assert_eq!(c.len(), 3);
    }

    #[test]
    fn oscillator_counts() {
        let z = ZetaPoint::base();
        assert_eq!(char_oscillator(1, 2, &z, 0, &form()).unwrap().len(), 1);
        assert_eq!(char_oscillator(1, 1, &z, 3, &form()).unwrap().len(), 4);
        // depth 2 n1 + n2 for theta_3 at l = 2
        assert_eq!(char_oscillator(2, 3, &z, 2, &form()).unwrap().len(), 4);
    }

    #[test]
    fn product_of_l1_oscillators() {
        let plan = SpecializationPlan::standard(1).unwrap();
        let a = char_oscillator(1, 1, &plan.points()[0], 2, &form()).unwrap();
        let b = char_oscillator(1, 2, &plan.points()[1], 2, &form()).unwrap();
        let p = a.mul(&b).unwrap();
        assert_eq!(p.total(), 6);
        let distinct_series: std::collections::BTreeSet<_> = p.entries().keys().map(|lw| lw.series.clone()).collect();
        assert_eq!(distinct_series.len(), 3);
        assert_eq!(p, b.mul(&a).unwrap());
    }

    #[test]
    fn trivial_is_identity() {
        let x = char_evaluation(2, &ZetaPoint::base(), 2).unwrap();
        assert_eq!(x.mul(&QCharacter::trivial(2, 2)).unwrap(), x);
        assert_ne!(x.mul(&x).unwrap(), x);
        assert!(x.compare(&x).is_empty());
    }

    #[test]
    fn shift_roundtrip() {
        let x = char_evaluation(1, &ZetaPoint::base(), 3).unwrap();
        let xi = Weight::new(vec![AffineExponent::mu(1) + AffineExponent::int(4)]);
        assert_eq!(x.shift(&xi).unwrap().shift(&-&xi).unwrap(), x);
        assert_eq!(x.shift(&Weight::zero(1)).unwrap(), x);
    }

    #[test]
    fn depth_of_non_root_drop_is_rejected() {
        let top = Weight::from_ints(&[0]);
        assert!(depth_below(&top, &Weight::from_ints(&[-1])).is_err());
        assert!(depth_below(&top, &Weight::from_ints(&[2])).is_err());
        assert_eq!(depth_below(&top, &Weight::from_ints(&[-4])).unwrap(), 2);
    }

    #[test]
    fn small_identities() {
        let r = verify_grothendieck(1, 0).unwrap();
        assert!(r.passed());
        assert_eq!(r.metrics["product_total"], 1);
        assert!(verify_grothendieck(1, 5).unwrap().passed());
        assert!(verify_grothendieck(2, 3).unwrap().passed());
    }

    #[test]
    fn numeric_mode_agrees() {
        let plan = SpecializationPlan::standard(2).unwrap();
        let mu = vec![crate::symbolic::ratio(7, 3), crate::symbolic::ratio(-2, 5), crate::symbolic::rat(1)];
        let r = verify_grothendieck_with(&plan, 2, &form(), &CompareMode::Numeric(mu)).unwrap();
        assert!(r.passed(), "{:?}", r.diff_sample);
    }

    #[test]
    fn literal_second_series_fails() {
        let plan = SpecializationPlan::standard(2).unwrap();
        let r = verify_grothendieck_with(&plan, 1, &SecondSeriesForm::LITERAL, &CompareMode::Symbolic).unwrap();
        assert!(!r.passed());
        assert!(!r.diff_sample.is_empty());
    }
}
