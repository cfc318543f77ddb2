use std::sync::Arc;

use proptest::prelude::*;

use super::*;
use crate::poly::{int, Monomial, PolyRing, Polynomial, Rational};

const S_RELATIONS: [&str; 10] = [
    "x^4", "y^4", "w^4", "z^4", "x^2*y^2", "y^2*w^2", "z^2*w^2", "x*t", "z*t", "w*t",
];

fn ambient() -> Arc<PolyRing> {
    PolyRing::standard(&["x", "y", "z", "w", "t"]).unwrap()
}

fn p(r: &Arc<PolyRing>, s: &str) -> Polynomial {
    r.parse(s).unwrap()
}

fn ideal(r: &Arc<PolyRing>, gens: &[&str]) -> IdealPresentation {
    IdealPresentation::new(r, gens.iter().map(|g| p(r, g)).collect()).unwrap()
}

fn i_s(r: &Arc<PolyRing>) -> IdealPresentation {
    ideal(r, &S_RELATIONS)
}

const F: &str = "x^2+y^2+z^2+w^2";
const G: &str = "x^2+y^2-z^2-w^2";

#[test]
fn single_monomial_is_its_own_basis() {
    let r = PolyRing::standard(&["u", "v"]).unwrap();
    let b = buchberger(&ideal(&r, &["u*v"]));
    assert_eq!(b.elements(), &[p(&r, "u*v")]);
    assert!(b.verify_cofactors());
}

#[test]
fn monomial_ideal_is_its_own_reduced_basis() {
    let r = ambient();
    let b = buchberger(&i_s(&r));
    // oracle: a set of monomials is its own reduced basis once divisible
    // members are removed; none of the ten generators divides another
    let gens: Vec<Monomial> = S_RELATIONS
        .iter()
        .map(|g| p(&r, g).leading_monomial().unwrap().clone())
        .collect();
    for a in &gens {
        assert!(gens.iter().filter(|b| b.divides(a)).count() == 1);
    }
    let mut got: Vec<Monomial> = b.leading_monomials().cloned().collect();
    let mut want = gens.clone();
    got.sort_by(|a, b| a.exponents().cmp(b.exponents()));
    want.sort_by(|a, b| a.exponents().cmp(b.exponents()));
    assert_eq!(got, want);
    assert!(b.elements().iter().all(|e| e.len() == 1));
    assert!(b.verify_cofactors());
    assert!(b.verify_criterion());
}

#[test]
fn quotient_basis_is_order_independent() {
    let r = ambient();
    let i_r = i_s(&r).with_generator(p(&r, F)).unwrap();
    let normal = GroebnerBasis::compute_with(&i_r, true, PairStrategy::Normal);
    assert!(normal.is_reduced());
    assert!(normal.verify_cofactors());
    assert!(normal.verify_criterion());
    // f is already reduced against the monomial relations; its leading term is x^2
    assert!(normal.elements().contains(&p(&r, F)));
    for seed in 0..5 {
        let shuffled = GroebnerBasis::compute_with(&i_r, true, PairStrategy::Shuffled(seed));
        assert_eq!(shuffled.elements(), normal.elements());
        assert!(shuffled.verify_cofactors());
    }
}

#[test]
fn normal_form_examples() {
    let r = PolyRing::standard(&["u", "v"]).unwrap();
    let b = buchberger(&ideal(&r, &["u*v"]));
    assert!(normal_form(&p(&r, "u*v"), &b).unwrap().is_zero());

    let r = ambient();
    let b = buchberger(&i_s(&r));
    for q in ["1", "y^3 - 2*z", "x*y*w + t^2"] {
        let input = &p(&r, "y^2*t") + &(&p(&r, "x*t") * &p(&r, q));
        assert_eq!(b.normal_form(&input), p(&r, "y^2*t"));
    }
    let other = PolyRing::standard(&["x", "y"]).unwrap();
    assert_eq!(
        normal_form(&p(&other, "x"), &b),
        Err(GroebnerError::RingMismatch)
    );
}

#[test]
fn membership_with_certificates() {
    let r = ambient();
    let i = i_s(&r);
    let m = ideal_member(&p(&r, "x^2*y^2"), &i).unwrap();
    assert!(m.member);
    let cert = m.certificate.unwrap();
    let mut acc = Polynomial::zero(&r);
    for (c, g) in cert.iter().zip(i.generators()) {
        acc = &acc + &(c * g);
    }
    assert_eq!(acc, p(&r, "x^2*y^2"));
    assert!(!ideal_member(&p(&r, "t"), &i).unwrap().member);
}

#[test]
fn quotient_examples() {
    let r = PolyRing::standard(&["u", "v"]).unwrap();
    let q = ideal_quotient(&ideal(&r, &["u*v"]), &p(&r, "u")).unwrap();
    assert!(ideals_equal(&q, &ideal(&r, &["v"])));
    let q = ideal_quotient(&ideal(&r, &["u*v"]), &Polynomial::one(&r)).unwrap();
    assert!(ideals_equal(&q, &ideal(&r, &["u*v"])));
    assert_eq!(
        ideal_quotient(&ideal(&r, &["u*v"]), &Polynomial::zero(&r)),
        Err(GroebnerError::ZeroDivisor)
    );
    // quotient by an element of the ideal is the unit ideal
    let q = ideal_quotient(&ideal(&r, &["u*v"]), &p(&r, "u^2*v")).unwrap();
    assert!(ideals_equal(&q, &ideal(&r, &["1"])));
    // zero ideal: nothing kills a nonzero element of a domain
    let q = ideal_quotient(&IdealPresentation::zero(&r), &p(&r, "u+v")).unwrap();
    assert!(q.generators().is_empty());
}

#[test]
fn annihilator_of_f_in_s_is_generated_by_g() {
    let r = ambient();
    let i = i_s(&r);
    let q = ideal_quotient(&i, &p(&r, F)).unwrap();
    let expected = i.with_generator(p(&r, G)).unwrap();
    assert!(ideals_equal(&q, &expected));
}

#[test]
fn certified_division_examples() {
    let r = ambient();
    let i = i_s(&r);
    let f = p(&r, F);
    let div = Divider::new(&f, &i).unwrap();

    let y2t = p(&r, "y^2*t");
    let cert = div.divide(&y2t).unwrap().unwrap();
    assert!(cert.verify(&y2t, &f, &i));
    // the hand-picked quotient t satisfies the same contract
    let b = buchberger(&i);
    assert!(b.contains(&(&(&f * &p(&r, "t")) - &y2t)));

    let y2z2 = p(&r, "y^2*z^2");
    let cert = div.divide(&y2z2).unwrap().unwrap();
    assert!(cert.verify(&y2z2, &f, &i));
    assert!(b.contains(&(&(&f * &p(&r, "z^2-x^2+w^2")) - &y2z2)));

    let zero = Polynomial::zero(&r);
    let cert = div.divide(&zero).unwrap().unwrap();
    assert!(cert.quotient.is_zero());
    assert!(cert.verify(&zero, &f, &i));

    // t is not a multiple of f modulo the relations
    assert!(div.divide(&p(&r, "t")).unwrap().is_none());

    assert!(matches!(
        Divider::new(&p(&r, "x*t"), &i),
        Err(GroebnerError::DegenerateDivisor(_))
    ));
}

#[test]
fn certificates_are_scaled_correctly() {
    let r = ambient();
    let i = i_s(&r);
    let f = p(&r, F).scale(&int(3));
    let div = Divider::new(&f, &i).unwrap();
    let target = p(&r, "y^2*t").scale(&Rational::new(5.into(), 7.into()));
    let cert = div.divide(&target).unwrap().unwrap();
    assert!(cert.verify(&target, &f, &i));
}

fn arb_small(r: Arc<PolyRing>) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((prop::collection::vec(0u32..4, 5), -4i64..5), 0..5).prop_map(
        move |terms| {
            Polynomial::from_terms(
                &r,
                terms
                    .into_iter()
                    .map(|(e, c)| (Monomial::from_exponents(e), int(c))),
            )
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn normal_form_is_idempotent(q in arb_small(ambient())) {
        let r = q.ring().clone();
        let b = buchberger(&i_s(&r).with_generator(p(&r, F)).unwrap());
        let once = b.normal_form(&q);
        prop_assert_eq!(b.normal_form(&once), once.clone());
        prop_assert!(once.terms().iter().all(|(m, _)| b.is_standard(m)));
        let (rem, cof) = b.normal_form_with_cofactors(&q).unwrap();
        prop_assert_eq!(&rem, &once);
        let mut acc = rem.clone();
        for (c, g) in cof.iter().zip(b.generators()) {
            acc = &acc + &(c * g);
        }
        prop_assert_eq!(acc, q);
    }

    #[test]
    fn constructed_combinations_are_members(
        a in arb_small(ambient()), b in arb_small(ambient()), c in arb_small(ambient())
    ) {
        let r = a.ring().clone();
        let i = ideal(&r, &["x^4", "x*t", F, "y^2*w^2"]);
        let combo = &(&(&a * &i.generators()[0]) + &(&b * &i.generators()[2])) + &(&c * &i.generators()[1]);
        let m = ideal_member(&combo, &i).unwrap();
        prop_assert!(m.member);
        let cert = m.certificate.unwrap();
        let mut acc = Polynomial::zero(&r);
        for (k, g) in cert.iter().zip(i.generators()) {
            acc = &acc + &(k * g);
        }
        prop_assert_eq!(acc, combo);
    }

    #[test]
    fn division_contract_holds(q in arb_small(ambient())) {
        let r = q.ring().clone();
        let i = i_s(&r);
        let f = p(&r, F);
        let div = Divider::new(&f, &i).unwrap();
        let target = &f * &q;
        let cert = div.divide(&target).unwrap().unwrap();
        prop_assert!(cert.verify(&target, &f, &i));
    }
}
