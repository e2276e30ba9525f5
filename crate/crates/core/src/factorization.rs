//! Symbol-level assembly of the factorization identity: resummation of the
//! shift weights into a series in `t_i = q^{alpha~_i / 2}`, the closed-form
//! normalization coefficient, Q-operator renormalization exponents, and the
//! Weyl-group argument matching behind the determinant formula.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use num::{BigRational, One, Signed, Zero};
use rayon::prelude::*;
use serde_json::json;

use crate::catalog::{shift_arity, shift_weight, SecondSeriesForm, SpecializationPlan};
use crate::lie::{epsilon_projection, rho, root_coordinates};
use crate::qchar::{index_box, verify_grothendieck_with, CompareMode, QCharError};
use crate::report::{VerificationReport, DIFF_SAMPLE_LIMIT};
use crate::symbolic::{rat, AffineExponent, Symbol};

/// Truncated power series in commuting variables `t_1 .. t_k` with exact
/// rational coefficients and rational exponents. Terms of total degree above
/// `order` are discarded.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TSeries {
    nvars: usize,
    order: BigRational,
    terms: BTreeMap<Vec<BigRational>, BigRational>,
}

fn degree(e: &[BigRational]) -> BigRational {
    e.iter().fold(BigRational::zero(), |a, b| a + b)
}

impl TSeries {
    pub fn zero(nvars: usize, order: BigRational) -> Self {
        TSeries {
            nvars,
            order,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(nvars: usize, order: BigRational) -> Self {
        Self::monomial(vec![BigRational::zero(); nvars], BigRational::one(), order)
    }

    pub fn monomial(exps: Vec<BigRational>, coeff: BigRational, order: BigRational) -> Self {
        let mut s = Self::zero(exps.len(), order);
        s.add_term(exps, coeff);
        s
    }

    /// `1 / (1 - t^exps)` expanded to `order`; `exps` must have positive degree.
    pub fn geometric(exps: &[BigRational], order: BigRational) -> Self {
        let d = degree(exps);
        assert!(d.is_positive(), "geometric series needs a positive-degree monomial");
        let mut s = Self::zero(exps.len(), order);
        let mut k = BigRational::zero();
        while &k * &d <= s.order {
            s.add_term(exps.iter().map(|e| e * &k).collect(), BigRational::one());
            k += BigRational::one();
        }
        s
    }

    pub fn add_term(&mut self, exps: Vec<BigRational>, coeff: BigRational) {
        assert_eq!(exps.len(), self.nvars);
        if degree(&exps) > self.order || coeff.is_zero() {
            return;
        }
        let remove = {
            let c = self.terms.entry(exps.clone()).or_insert_with(BigRational::zero);
            *c += coeff;
            c.is_zero()
        };
        if remove {
            self.terms.remove(&exps);
        }
    }

    pub fn order(&self) -> &BigRational {
        &self.order
    }

    pub fn terms(&self) -> &BTreeMap<Vec<BigRational>, BigRational> {
        &self.terms
    }

    pub fn coeff(&self, exps: &[BigRational]) -> BigRational {
        self.terms.get(exps).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Product truncated at the smaller order.
    pub fn mul(&self, other: &TSeries) -> TSeries {
        assert_eq!(self.nvars, other.nvars);
        let order = (&self.order).min(&other.order).clone();
        let mut out = TSeries::zero(self.nvars, order);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<_> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                out.add_term(e, ca * cb);
            }
        }
        out
    }

    /// Multiplies by the monomial `t^exps`. Terms are valid up to
    /// `order + deg(exps)`, which becomes the new order.
    pub fn shift(&self, exps: &[BigRational]) -> TSeries {
        let order = &self.order + degree(exps);
        let mut out = TSeries::zero(self.nvars, order);
        for (e, c) in &self.terms {
            out.add_term(e.iter().zip(exps).map(|(x, y)| x + y).collect(), c.clone());
        }
        out
    }

    pub fn truncate(&self, order: BigRational) -> TSeries {
        let order = (&self.order).min(&order).clone();
        let mut out = TSeries::zero(self.nvars, order);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Terms on which the two series disagree, as readable lines.
    pub fn differences(&self, other: &TSeries) -> Vec<String> {
        let keys: BTreeSet<_> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter()
            .filter_map(|k| {
                let a = self.coeff(k);
                let b = other.coeff(k);
                (a != b).then(|| format!("t^{}: {a} vs {b}", fmt_exps(k)))
            })
            .collect()
    }
}

fn fmt_exps(e: &[BigRational]) -> String {
    format!("({})", e.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", "))
}

/// Element of the t-algebra: a symbolic monomial prefactor `t^prefactor`
/// times a numeric truncated series.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TAlgebraElement {
    pub prefactor: Vec<AffineExponent>,
    pub series: TSeries,
}

fn check_rank(l: usize) -> Result<(), QCharError> {
    if l == 1 || l == 2 {
        Ok(())
    } else {
        Err(crate::catalog::CatalogError::Rank(l).into())
    }
}

/// Exponents of `t_j` in `q^{-sum_i <delta, alpha_i^vee> c_ij alpha~_j}`.
fn shift_t_exponents(l: usize, np: &[AffineExponent]) -> Result<Vec<AffineExponent>, QCharError> {
    let delta = shift_weight(l, np)?;
    let k = root_coordinates(&delta);
    Ok(k.into_iter().map(|x| x.scale_int(-2)).collect())
}

/// Sum over `n'` of the shift monomials, with the `mu`-dependent monomial
/// split off as the prefactor.
pub fn resummation_coefficient(l: usize, order: u32) -> Result<TAlgebraElement, QCharError> {
    check_rank(l)?;
    let order_r = rat(i64::from(order));
    let zero = vec![AffineExponent::zero(); shift_arity(l)];
    let prefactor: Vec<AffineExponent> = shift_t_exponents(l, &zero)?
        .iter()
        .map(AffineExponent::linear_part)
        .collect();
    let mut series = TSeries::zero(l, order_r);
    for np in index_box(shift_arity(l), order) {
        let np: Vec<_> = np.iter().map(|&x| AffineExponent::int(i64::from(x))).collect();
        let e = shift_t_exponents(l, &np)?;
        let mut exps = Vec::with_capacity(l);
        for (x, p) in e.iter().zip(&prefactor) {
            let rest = x - p;
            let c = rest.as_constant().cloned().ok_or_else(|| {
                QCharError::Depth {
                    weight: shift_weight(l, &np).expect("checked above"),
                    top: shift_weight(l, &zero).expect("checked above"),
                }
            })?;
            exps.push(c);
        }
        series.add_term(exps, BigRational::one());
    }
    Ok(TAlgebraElement { prefactor, series })
}

/// A factor `t^numerator / (1 - t^denominator)` of the closed-form
/// normalization coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CFactor {
    pub numerator: Vec<i64>,
    pub denominator: Vec<i64>,
}

/// Closed data for the normalization coefficient `C_l`.
pub fn normalized_c_factors(l: usize) -> Result<Vec<CFactor>, QCharError> {
    check_rank(l)?;
    let f = |n: &[i64], d: &[i64]| CFactor {
        numerator: n.to_vec(),
        denominator: d.to_vec(),
    };
    Ok(match l {
        1 => vec![f(&[1], &[2])],
        _ => vec![f(&[1, 0], &[2, 0]), f(&[1, 1], &[2, 2]), f(&[0, 1], &[0, 2])],
    })
}

/// Series expansion of `C_l` to total degree `order`.
pub fn normalized_c(l: usize, order: u32) -> Result<TSeries, QCharError> {
    let order = rat(i64::from(order));
    let mut acc = TSeries::one(l, order.clone());
    for f in normalized_c_factors(l)? {
        let num: Vec<_> = f.numerator.iter().map(|&x| rat(x)).collect();
        let den: Vec<_> = f.denominator.iter().map(|&x| rat(x)).collect();
        let g = TSeries::geometric(&den, order.clone()).shift(&num).truncate(order.clone());
        acc = acc.mul(&g);
    }
    Ok(acc)
}

/// Coefficients `x_{a,j}` such that `Q_a(zeta) = zeta^{s sum_j x_{a,j} alpha~_j} Q'_a(zeta)`.
pub fn q_operator_renormalization(l: usize, a: usize) -> Result<Vec<BigRational>, QCharError> {
    check_rank(l)?;
    if !(1..=l + 1).contains(&a) {
        return Err(crate::catalog::CatalogError::Index(format!("a = {a}")).into());
    }
    let half = -BigRational::new(1.into(), 2.into());
    Ok(root_coordinates(&epsilon_projection(l, a))
        .into_iter()
        .map(|x| x.as_constant().expect("numeric weight").clone() * &half)
        .collect())
}

/// Exponent of `t` collected from the renormalizations at the plan points
/// together with the resummation prefactor; for a consistent plan this is
/// free of `mu`.
pub fn normalization_exponent(plan: &SpecializationPlan, prefactor: &[AffineExponent]) -> Result<Vec<AffineExponent>, QCharError> {
    let l = plan.rank();
    let mut k: Vec<AffineExponent> = prefactor.to_vec();
    for (i, c) in plan.point_exponents().iter().enumerate() {
        let x = q_operator_renormalization(l, i + 1)?;
        for (kj, xj) in k.iter_mut().zip(&x) {
            *kj = &*kj + &c.scale(&(xj * rat(2)));
        }
    }
    Ok(k)
}

/// Checks the character identity and that the resummed shift series times
/// the renormalization monomial equals `C_l` to `order`.
pub fn verify_factorization_symbolic(l: usize, depth: u32, order: u32) -> Result<VerificationReport, QCharError> {
    let plan = SpecializationPlan::standard(l)?;
    verify_factorization_with(&plan, depth, order)
}

pub fn verify_factorization_with(plan: &SpecializationPlan, depth: u32, order: u32) -> Result<VerificationReport, QCharError> {
    let l = plan.rank();
    let mut report = VerificationReport::new("factorization")
        .param("l", l)
        .param("depth", depth)
        .param("torder", order)
        .param("points", plan.point_exponents().iter().map(|c| c.to_string()).collect::<Vec<_>>());

    let groth = verify_grothendieck_with(plan, depth, &SecondSeriesForm::CORRECTED, &CompareMode::Symbolic)?;
    report.push_subcheck(groth);

    let x_sum = (1..=l + 1).try_fold(vec![BigRational::zero(); l], |acc, a| {
        q_operator_renormalization(l, a).map(|x| acc.iter().zip(&x).map(|(p, q)| p + q).collect::<Vec<_>>())
    })?;
    report.set_metric("renormalization_sum", x_sum.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    if x_sum.iter().any(|x| !x.is_zero()) {
        report.fail(format!("renormalization exponents sum to {}", fmt_exps(&x_sum)));
    }

    // the widest prefactor shift is -2 per variable, so two extra orders suffice
    let resum = resummation_coefficient(l, order + 2 * l as u32)?;
    report.set_metric(
        "mu_prefactor",
        resum.prefactor.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
    );
    let k = normalization_exponent(plan, &resum.prefactor)?;
    report.set_metric("normalization_exponent", k.iter().map(|c| c.to_string()).collect::<Vec<_>>());
    let Some(k) = k.iter().map(|c| c.as_constant().cloned()).collect::<Option<Vec<_>>>() else {
        report.fail("normalization exponent depends on mu");
        return Ok(report);
    };
    let lhs = resum.series.shift(&k).truncate(rat(i64::from(order)));
    let rhs = normalized_c(l, order)?;
    report.set_metric("c_terms", rhs.terms().len());
    let diffs = lhs.differences(&rhs);
    report.set_metric("series_mismatches", diffs.len());
    for d in diffs.into_iter().take(DIFF_SAMPLE_LIMIT) {
        report.fail(d);
    }
    Ok(report)
}

/// A permutation of `{1 .. l+1}`, stored 0-based: `perm[a] = w(a)`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WeylElement {
    perm: Vec<usize>,
}

impl WeylElement {
    pub fn identity(n: usize) -> Self {
        WeylElement { perm: (0..n).collect() }
    }

    /// From 1-based images.
    pub fn from_images(images: &[usize]) -> Option<Self> {
        let perm: Vec<usize> = images.iter().map(|&x| x.checked_sub(1)).collect::<Option<_>>()?;
        let set: BTreeSet<_> = perm.iter().collect();
        (set.len() == perm.len() && perm.iter().all(|&x| x < perm.len())).then_some(WeylElement { perm })
    }

    /// The simple reflection exchanging `i` and `i + 1` (1-based).
    pub fn simple(n: usize, i: usize) -> Self {
        let mut w = Self::identity(n);
        w.perm.swap(i - 1, i);
        w
    }

    /// All elements of `S_{l+1}` in lexicographic order of images.
    pub fn all(l: usize) -> Vec<WeylElement> {
        fn go(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<WeylElement>) {
            if prefix.len() == n {
                out.push(WeylElement { perm: prefix.clone() });
                return;
            }
            for x in 0..n {
                if !prefix.contains(&x) {
                    prefix.push(x);
                    go(prefix, n, out);
                    prefix.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(&mut Vec::new(), l + 1, &mut out);
        out
    }

    pub fn size(&self) -> usize {
        self.perm.len()
    }

    /// 1-based image of `a`.
    pub fn apply(&self, a: usize) -> usize {
        self.perm[a - 1] + 1
    }

    pub fn images(&self) -> Vec<usize> {
        self.perm.iter().map(|x| x + 1).collect()
    }

    /// `(self * other)(a) = self(other(a))`.
    pub fn compose(&self, other: &WeylElement) -> WeylElement {
        WeylElement {
            perm: other.perm.iter().map(|&x| self.perm[x]).collect(),
        }
    }

    pub fn inverse(&self) -> WeylElement {
        let mut perm = vec![0; self.perm.len()];
        for (a, &b) in self.perm.iter().enumerate() {
            perm[b] = a;
        }
        WeylElement { perm }
    }

    /// `(-1)^{#inversions}`.
    pub fn sign(&self) -> i64 {
        let mut inv = 0;
        for i in 0..self.perm.len() {
            for j in i + 1..self.perm.len() {
                if self.perm[i] > self.perm[j] {
                    inv += 1;
                }
            }
        }
        if inv % 2 == 0 { 1 } else { -1 }
    }

    /// Length as the shortest word in simple reflections, by breadth-first
    /// search over the Cayley graph.
    pub fn length(&self) -> usize {
        let n = self.perm.len();
        let start = WeylElement::identity(n);
        let mut seen = BTreeMap::from([(start.clone(), 0usize)]);
        let mut queue = VecDeque::from([start]);
        while let Some(w) = queue.pop_front() {
            let d = seen[&w];
            if w == *self {
                return d;
            }
            for i in 1..n {
                let v = w.compose(&WeylElement::simple(n, i));
                if !seen.contains_key(&v) {
                    seen.insert(v.clone(), d + 1);
                    queue.push_back(v);
                }
            }
        }
        unreachable!("the simple reflections generate the symmetric group")
    }

    /// Linear action on `epsilon` coordinates: `(w lambda)_{w(a)} = lambda_a`.
    pub fn act<T: Clone>(&self, lambda: &[T]) -> Vec<T> {
        let mut out = lambda.to_vec();
        for (a, x) in lambda.iter().enumerate() {
            out[self.perm[a]] = x.clone();
        }
        out
    }
}

/// `w . mu = w(mu + rho) - rho`.
pub fn weyl_affine_action(w: &WeylElement, mu: &[AffineExponent]) -> Vec<AffineExponent> {
    let l = w.size() - 1;
    let r = rho(l);
    let shifted: Vec<AffineExponent> = mu
        .iter()
        .zip(&r)
        .map(|(m, p)| m + &AffineExponent::constant(p.clone()))
        .collect();
    w.act(&shifted)
        .into_iter()
        .zip(&r)
        .map(|(x, p)| x - AffineExponent::constant(p.clone()))
        .collect()
}

fn symbolic_mu(l: usize) -> Vec<AffineExponent> {
    (1..=l + 1).map(|a| AffineExponent::mu(a as u8)).collect()
}

fn mu_substitution(values: &[AffineExponent]) -> BTreeMap<Symbol, AffineExponent> {
    values
        .iter()
        .enumerate()
        .map(|(i, v)| (Symbol::Mu(i as u8 + 1), v.clone()))
        .collect()
}

/// For every permutation, checks that the determinant term's arguments
/// `q^{2(mu_b + rho_b)/s} zeta` coincide with the plan points for `w . mu`,
/// and that the permutation sign equals `(-1)^length`.
pub fn verify_determinant_arguments(l: usize) -> Result<VerificationReport, QCharError> {
    let plan = SpecializationPlan::standard(l)?;
    let mu = symbolic_mu(l);
    let r = rho(l);
    let targets: Vec<AffineExponent> = mu
        .iter()
        .zip(&r)
        .map(|(m, p)| (m + &AffineExponent::constant(p.clone())).scale_int(2))
        .collect();

    let elements = WeylElement::all(l);
    let rows: Vec<(serde_json::Value, Vec<String>)> = elements
        .par_iter()
        .map(|w| {
            let sigma = w.inverse();
            let args: Vec<AffineExponent> = (1..=l + 1).map(|a| targets[sigma.apply(a) - 1].clone()).collect();
            let w_mu = weyl_affine_action(w, &mu);
            let points = plan.substitute(&mu_substitution(&w_mu)).point_exponents();
            let sign = w.sign();
            let length = w.length();
            let mut problems = Vec::new();
            if args != points {
                problems.push(format!("w = {:?}: arguments do not match plan points", w.images()));
            }
            if sign != if length % 2 == 0 { 1 } else { -1 } {
                problems.push(format!("w = {:?}: sign {sign} but length {length}", w.images()));
            }
            let row = json!({
                "permutation": w.images(),
                "sign": sign,
                "length": length,
                "affine_action": w_mu.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "arguments": args.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "plan_points": points.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                "pass": problems.is_empty(),
            });
            (row, problems)
        })
        .collect();

    let mut report = VerificationReport::new("determinant")
        .param("l", l)
        .metric("permutations", elements.len())
        .metric("rho", r.iter().map(|x| x.to_string()).collect::<Vec<_>>());
    for (row, problems) in rows {
        report.details.push(row);
        for p in problems {
            report.fail(p);
        }
    }
    let x_sum = (1..=l + 1).try_fold(vec![BigRational::zero(); l], |acc, a| {
        q_operator_renormalization(l, a).map(|x| acc.iter().zip(&x).map(|(p, q)| p + q).collect::<Vec<_>>())
    })?;
    if x_sum.iter().any(|x| !x.is_zero()) {
        report.fail("renormalization exponents do not cancel in the determinant");
    }
    Ok(report)
}
