use std::collections::BTreeMap;

use proptest::prelude::*;

use super::*;
use crate::sampling;

fn g(table: &Arc<VarTable>, k: u32) -> Polynomial {
    Polynomial::var(table, k - 1)
}

/// One even variable `x[1,1]` followed by odd Grassmann generators.
fn mixed_table(odd: u32) -> Arc<VarTable> {
    let x = VarKind::Covector {
        t: GradedIndex::even(1),
        i: GradedIndex::even(1),
    };
    VarTable::new(std::iter::once(x).chain((1..=odd).map(VarKind::Grassmann))).unwrap()
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

#[test]
fn odd_square_vanishes() {
    let t = VarTable::grassmann(2);
    assert!((&g(&t, 1) * &g(&t, 1)).is_zero());
}

#[test]
fn transposition_sign() {
    let t = VarTable::grassmann(2);
    let p = &g(&t, 2) * &g(&t, 1);
    assert_eq!(p, -(&g(&t, 1) * &g(&t, 2)));
    assert_eq!(p.canonical_text(), "-1 * g1*g2");
}

#[test]
fn square_of_even_nilpotent_sum() {
    let t = mixed_table(2);
    let x = Polynomial::var(&t, 0);
    let xi = &Polynomial::var(&t, 1) * &Polynomial::var(&t, 2);
    let s = &x + &xi;
    let expected = x.pow(2).add_scaled(&(&x * &xi), &int(2)).unwrap();
    assert_eq!(&s * &s, expected);
}

#[test]
fn add_examples() {
    let t = mixed_table(2);
    let x = Polynomial::var(&t, 0);
    assert!(x.add_scaled(&x, &int(-1)).unwrap().is_zero());
    let a = &Polynomial::var(&t, 1) * &Polynomial::var(&t, 2);
    let b = &Polynomial::var(&t, 2) * &Polynomial::var(&t, 1);
    assert!(a.add_scaled(&b, &int(1)).unwrap().is_zero());
    let s = x.pow(2).add_scaled(&a, &rat(1, 2)).unwrap();
    assert_eq!(s.canonical_text(), "1 * x[1,1]^2 + 1/2 * g1*g2");
}

#[test]
fn table_mismatch_is_an_error() {
    let a = Polynomial::var(&VarTable::grassmann(1), 0);
    let b = Polynomial::var(&VarTable::grassmann(2), 0);
    assert!(matches!(a.try_mul(&b), Err(Error::TableMismatch)));
    assert!(matches!(
        a.add_scaled(&b, &int(1)),
        Err(Error::TableMismatch)
    ));
}

#[test]
fn zero_renders_as_zero() {
    let t = VarTable::grassmann(1);
    assert_eq!(Polynomial::zero(&t).canonical_text(), "0");
    assert_eq!(parse("0", &t).unwrap(), Polynomial::zero(&t));
}

#[test]
fn odd_labels_carry_apostrophes() {
    let kind = VarKind::Covector {
        t: GradedIndex::odd(1),
        i: GradedIndex::even(1),
    };
    assert_eq!(kind.label(), "x[1',1]");
    assert_eq!(kind.parity(), Parity::Odd);
    let star = VarKind::Vector {
        i: GradedIndex::odd(2),
        s: GradedIndex::odd(1),
    };
    assert_eq!(star.label(), "xs[2',1']");
    assert_eq!(star.parity(), Parity::Even);
}

#[test]
fn monomial_order_is_graded_then_by_id_sequence() {
    let a = Monomial::from_pairs([(0, 2)]);
    let b = Monomial::from_pairs([(0, 1), (1, 1)]);
    let c = Monomial::from_pairs([(1, 2)]);
    let d = Monomial::from_pairs([(5, 1)]);
    assert!(d < a && a < b && b < c);
}

#[test]
fn exact_div_by_even_variable() {
    let t = mixed_table(2);
    let mut rng = sampling::rng(11);
    let x = Polynomial::var(&t, 0);
    for _ in 0..20 {
        let f = sampling::polynomial(&mut rng, &t, 5, 3);
        assert_eq!((&x * &f).exact_div(&x).unwrap(), f);
    }
}

#[test]
fn odd_by_even_is_not_divisible() {
    let t = mixed_table(1);
    let r = Polynomial::var(&t, 1).exact_div(&Polynomial::var(&t, 0));
    assert!(matches!(r, Err(Error::NotDivisible { .. })));
}

#[test]
fn exact_div_by_unit_with_nilpotent_part() {
    let t = mixed_table(3);
    let mut rng = sampling::rng(12);
    let x = Polynomial::var(&t, 0);
    let b = &(&x + &Polynomial::from_int(&t, 2)) + &(&g2(&t) * &g3(&t));
    for _ in 0..20 {
        let f = sampling::polynomial(&mut rng, &t, 4, 3);
        assert_eq!((&f * &b).exact_div(&b).unwrap(), f);
    }
}

fn g2(t: &Arc<VarTable>) -> Polynomial {
    Polynomial::var(t, 2)
}

fn g3(t: &Arc<VarTable>) -> Polynomial {
    Polynomial::var(t, 3)
}

#[test]
fn exact_div_by_single_odd_term() {
    let t = VarTable::grassmann(3);
    let a = &g(&t, 2) * &g(&t, 1);
    let q = a.exact_div(&g(&t, 1)).unwrap();
    assert_eq!(&q * &g(&t, 1), a);
    assert!(matches!(
        g(&t, 2).exact_div(&g(&t, 1)),
        Err(Error::NotDivisible { .. })
    ));
    let sum = &g(&t, 1) + &g(&t, 2);
    assert!(matches!(a.exact_div(&sum), Err(Error::UnsupportedDivisor)));
    assert!(matches!(
        a.exact_div(&Polynomial::zero(&t)),
        Err(Error::DivisionByZero)
    ));
}

#[test]
fn evaluate_constant_and_parity_error() {
    let star = VarKind::Vector {
        i: GradedIndex::even(1),
        s: GradedIndex::even(1),
    };
    let src = VarTable::new([star, VarKind::Grassmann(1)]).unwrap();
    let target = mixed_table(1);
    let mut a = BTreeMap::new();
    a.insert(0, Polynomial::from_int(&target, 3));
    a.insert(1, Polynomial::var(&target, 1));
    assert_eq!(
        Polynomial::var(&src, 0).evaluate(&a, &target).unwrap(),
        Polynomial::from_int(&target, 3)
    );

    a.insert(1, Polynomial::var(&target, 0));
    let err = Polynomial::var(&src, 1).evaluate(&a, &target);
    assert!(matches!(err, Err(Error::ParityMismatch { .. })));

    let mut partial = BTreeMap::new();
    partial.insert(0, Polynomial::from_int(&target, 3));
    let err = Polynomial::var(&src, 1).evaluate(&partial, &target);
    assert!(matches!(err, Err(Error::MissingAssignment { .. })));
}

#[test]
fn localized_reduces_and_adds() {
    let t = mixed_table(2);
    let x = Polynomial::var(&t, 0);
    let e = LocalizedElement::new(x.pow(3), x.clone(), 2).unwrap();
    assert!(e.is_polynomial());
    assert_eq!(e.clone().into_polynomial().unwrap(), x);
    let half = LocalizedElement::new(Polynomial::one(&t), x.clone(), 1).unwrap();
    assert!(matches!(
        half.clone().into_polynomial(),
        Err(Error::NotPolynomial { exponent: 1 })
    ));
    let sum = half.add(&half.scale(&int(-1))).unwrap();
    assert!(sum.is_zero() && sum.is_polynomial());
    let prod = half.mul_poly(&x).unwrap();
    assert_eq!(prod.into_polynomial().unwrap(), Polynomial::one(&t));
    let other = LocalizedElement::new(Polynomial::one(&t), x.pow(2), 1).unwrap();
    assert!(matches!(half.add(&other), Err(Error::BaseMismatch)));
}

fn seeded_table() -> Arc<VarTable> {
    let kinds = [
        VarKind::Covector {
            t: GradedIndex::even(1),
            i: GradedIndex::even(1),
        },
        VarKind::Covector {
            t: GradedIndex::even(1),
            i: GradedIndex::odd(1),
        },
        VarKind::Vector {
            i: GradedIndex::even(1),
            s: GradedIndex::even(1),
        },
        VarKind::Vector {
            i: GradedIndex::odd(1),
            s: GradedIndex::even(1),
        },
        VarKind::Grassmann(1),
        VarKind::Grassmann(2),
    ];
    VarTable::new(kinds).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn supercommutativity(seed in any::<u64>()) {
        let t = seeded_table();
        let mut rng = sampling::rng(seed);
        let pa = if seed & 1 == 0 { Parity::Even } else { Parity::Odd };
        let pb = if seed & 2 == 0 { Parity::Even } else { Parity::Odd };
        let a = sampling::homogeneous(&mut rng, &t, pa, 4, 3);
        let b = sampling::homogeneous(&mut rng, &t, pb, 4, 3);
        let ab = &a * &b;
        let ba = &b * &a;
        prop_assert_eq!(ab, if pa.sign_with(pb) { -ba } else { ba });
    }

    #[test]
    fn ring_axioms(seed in any::<u64>()) {
        let t = seeded_table();
        let mut rng = sampling::rng(seed);
        let a = sampling::polynomial(&mut rng, &t, 4, 3);
        let b = sampling::polynomial(&mut rng, &t, 4, 3);
        let c = sampling::polynomial(&mut rng, &t, 4, 3);
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
    }

    #[test]
    fn odd_elements_square_to_zero(seed in any::<u64>()) {
        let t = seeded_table();
        let mut rng = sampling::rng(seed);
        let f = sampling::homogeneous(&mut rng, &t, Parity::Odd, 5, 4);
        prop_assert!((&f * &f).is_zero());
    }

    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let t = seeded_table();
        let mut rng = sampling::rng(seed);
        let f = sampling::polynomial(&mut rng, &t, 6, 4);
        let text = f.canonical_text();
        let back = parse(&text, &t).unwrap();
        prop_assert_eq!(back.canonical_text(), text);
        prop_assert_eq!(back, f);
    }

    #[test]
    fn canonicalization_is_idempotent(seed in any::<u64>()) {
        let t = seeded_table();
        let mut rng = sampling::rng(seed);
        let f = sampling::polynomial(&mut rng, &t, 6, 4);
        let rebuilt = f.iter().fold(Polynomial::zero(&t), |acc, (m, c)| &acc + &Polynomial::term(&t, m.clone(), c.clone()));
        prop_assert_eq!(rebuilt, f);
    }

    #[test]
    fn evaluate_is_a_morphism(seed in any::<u64>()) {
        let src = seeded_table();
        let target = VarTable::grassmann(4);
        let mut rng = sampling::rng(seed);
        let f = sampling::polynomial(&mut rng, &src, 4, 3);
        let h = sampling::polynomial(&mut rng, &src, 4, 3);
        let sigma = sampling::assignment(&mut rng, &src, &target, 3, 2);
        let ef = f.evaluate(&sigma, &target).unwrap();
        let eh = h.evaluate(&sigma, &target).unwrap();
        prop_assert_eq!((&f * &h).evaluate(&sigma, &target).unwrap(), &ef * &eh);
        prop_assert_eq!((&f + &h).evaluate(&sigma, &target).unwrap(), &ef + &eh);
    }

    #[test]
    fn division_inverts_multiplication(seed in any::<u64>()) {
        let t = seeded_table();
        let mut rng = sampling::rng(seed);
        let f = sampling::polynomial(&mut rng, &t, 4, 3);
        let mut b = sampling::homogeneous(&mut rng, &t, Parity::Even, 3, 2);
        if b.body().is_zero() {
            b = &b + &Polynomial::var(&t, 0);
        }
        prop_assert_eq!((&f * &b).exact_div(&b).unwrap(), f);
    }
}
