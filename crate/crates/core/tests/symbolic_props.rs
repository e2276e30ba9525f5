//! Randomized checks of the l-weight group laws and of canonicalization
//! against an independent power-series expansion in `Z`.

use std::collections::BTreeMap;

use num::{BigRational, One, Zero};
use proptest::prelude::*;
use qloop_core::symbolic::{rat, ratio, AffineExponent, LWeight, LinearFactor, RationalFunction, Symbol, Weight};

const SERIES_ORDER: usize = 10;

fn exponent() -> impl Strategy<Value = AffineExponent> {
    (-3i64..=3, -2i64..=2, -2i64..=2, 1i64..=2).prop_map(|(c, a, b, d)| {
        AffineExponent::from_terms(
            ratio(c, d),
            [(Symbol::Mu(1), rat(a)), (Symbol::Mu(2), rat(b))],
        )
    })
}

// small pool so that cancellations actually happen
fn factor() -> impl Strategy<Value = LinearFactor> {
    (-2i64..=2, -1i64..=1).prop_map(|(c, a)| {
        LinearFactor::new(AffineExponent::from_terms(rat(c), [(Symbol::Mu(1), rat(2 * a))]))
    })
}

fn rational() -> impl Strategy<Value = RationalFunction> {
    (
        exponent(),
        prop::collection::vec(factor(), 0..4),
        prop::collection::vec(factor(), 0..4),
    )
        .prop_map(|(p, n, d)| RationalFunction::new(p, n, d))
}

fn lweight(rank: usize) -> impl Strategy<Value = LWeight> {
    (
        prop::collection::vec(exponent(), rank),
        prop::collection::vec(rational(), rank),
    )
        .prop_map(|(w, s)| LWeight::new(Weight::new(w), s).unwrap())
}

fn bindings() -> impl Strategy<Value = BTreeMap<Symbol, BigRational>> {
    (-4i64..=4, 1i64..=3, -4i64..=4, 1i64..=3)
        .prop_map(|(a, b, c, d)| [(Symbol::Mu(1), ratio(a, b)), (Symbol::Mu(2), ratio(c, d))].into())
}

/// Polynomial in `q` with rational exponents.
type QPoly = BTreeMap<BigRational, BigRational>;
/// Truncated series in `Z` with `QPoly` coefficients.
type ZSeries = Vec<QPoly>;

fn qpoly_add(acc: &mut QPoly, e: BigRational, c: BigRational) {
    let v = acc.entry(e.clone()).or_insert_with(BigRational::zero);
    *v += c;
    if v.is_zero() {
        acc.remove(&e);
    }
}

fn series_one() -> ZSeries {
    let mut s = vec![QPoly::new(); SERIES_ORDER + 1];
    s[0].insert(BigRational::zero(), BigRational::one());
    s
}

fn series_mul(a: &ZSeries, b: &ZSeries) -> ZSeries {
    let mut out = vec![QPoly::new(); SERIES_ORDER + 1];
    for i in 0..=SERIES_ORDER {
        for j in 0..=SERIES_ORDER - i {
            for (ea, ca) in &a[i] {
                for (eb, cb) in &b[j] {
                    qpoly_add(&mut out[i + j], ea + eb, ca * cb);
                }
            }
        }
    }
    out
}

/// `1 - q^e Z`
fn series_factor(e: &BigRational) -> ZSeries {
    let mut s = series_one();
    s[1].insert(e.clone(), -BigRational::one());
    s
}

/// `1 / (1 - q^e Z) = sum_k q^{k e} Z^k`
fn series_factor_inv(e: &BigRational) -> ZSeries {
    (0..=SERIES_ORDER)
        .map(|k| QPoly::from([(e * rat(k as i64), BigRational::one())]))
        .collect()
}

fn series_qpow(p: &BigRational) -> ZSeries {
    let mut s = vec![QPoly::new(); SERIES_ORDER + 1];
    s[0].insert(p.clone(), BigRational::one());
    s
}

fn value(e: &AffineExponent, b: &BTreeMap<Symbol, BigRational>) -> BigRational {
    e.evaluate(b).unwrap()
}

/// Expands an explicit product of factors, without any cancellation.
fn expand_raw(
    prefactor: &AffineExponent,
    num: &[LinearFactor],
    den: &[LinearFactor],
    b: &BTreeMap<Symbol, BigRational>,
) -> ZSeries {
    let mut s = series_qpow(&value(prefactor, b));
    for f in num {
        s = series_mul(&s, &series_factor(&value(&f.exponent, b)));
    }
    for f in den {
        s = series_mul(&s, &series_factor_inv(&value(&f.exponent, b)));
    }
    s
}

fn expand(f: &RationalFunction, b: &BTreeMap<Symbol, BigRational>) -> ZSeries {
    let flat = |m: &BTreeMap<LinearFactor, u32>| -> Vec<LinearFactor> {
        m.iter()
            .flat_map(|(f, &k)| std::iter::repeat_n(f.clone(), k as usize))
            .collect()
    };
    expand_raw(f.prefactor(), &flat(f.numerator()), &flat(f.denominator()), b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn exponent_addition_is_associative_and_commutative(a in exponent(), b in exponent(), c in exponent()) {
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a + &b, &b + &a);
        prop_assert!((&a - &a).is_zero());
    }

    #[test]
    fn lweight_group_laws(a in lweight(2), b in lweight(2), c in lweight(2)) {
        let ab = a.mul(&b).unwrap();
        prop_assert_eq!(ab.mul(&c).unwrap(), a.mul(&b.mul(&c).unwrap()).unwrap());
        prop_assert_eq!(&ab, &b.mul(&a).unwrap());
        prop_assert_eq!(a.mul(&LWeight::identity(2)).unwrap(), a.clone());
        prop_assert!(a.mul(&a.inv()).unwrap().is_identity());
    }

    #[test]
    fn products_are_fully_cancelled(f in rational(), g in rational()) {
        let p = f.mul(&g);
        for k in p.numerator().keys() {
            prop_assert!(!p.denominator().contains_key(k));
        }
        prop_assert!(p.numerator().values().all(|&k| k > 0));
        prop_assert!(p.denominator().values().all(|&k| k > 0));
    }

    #[test]
    fn specialization_is_a_homomorphism(a in lweight(1), b in lweight(1), bind in bindings()) {
        let lhs = a.mul(&b).unwrap().specialize(&bind);
        let rhs = a.specialize(&bind).mul(&b.specialize(&bind)).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn canonical_product_matches_series_of_factors(
        p in exponent(),
        n1 in prop::collection::vec(factor(), 0..4),
        d1 in prop::collection::vec(factor(), 0..4),
        n2 in prop::collection::vec(factor(), 0..3),
        d2 in prop::collection::vec(factor(), 0..3),
        bind in bindings(),
    ) {
        let f = RationalFunction::new(p.clone(), n1.clone(), d1.clone());
        let g = RationalFunction::new(AffineExponent::zero(), n2.clone(), d2.clone());
        let oracle = series_mul(
            &expand_raw(&p, &n1, &d1, &bind),
            &expand_raw(&AffineExponent::zero(), &n2, &d2, &bind),
        );
        prop_assert_eq!(expand(&f.mul(&g), &bind), oracle);
    }
}

#[test]
fn series_oracle_sanity() {
    // (1 - q Z) / (1 - q Z) = 1 without relying on canonicalization
    let b = BTreeMap::new();
    let e = LinearFactor::new(AffineExponent::int(1));
    let s = expand_raw(&AffineExponent::zero(), std::slice::from_ref(&e), std::slice::from_ref(&e), &b);
    assert_eq!(s, series_one());
    // 1 / (1 - q^2 Z) has coefficient q^{2k} at Z^k
    let f = RationalFunction::from_exponents([], [AffineExponent::int(2)]);
    let s = expand(&f, &b);
    assert_eq!(s[3], QPoly::from([(rat(6), rat(1))]));
}
