use super::*;
use crate::complex::{compose, GradedFreeModule};
use crate::example::{self, Example};
use crate::resolution::extend_resolution;
use crate::ring::quotient_by;
use std::sync::OnceLock;

fn ex() -> &'static Example {
    static EX: OnceLock<Example> = OnceLock::new();
    EX.get_or_init(|| Example::new().unwrap())
}

fn builder() -> &'static OperatorBuilder {
    static B: OnceLock<OperatorBuilder> = OnceLock::new();
    B.get_or_init(|| {
        let e = ex();
        OperatorBuilder::new(&e.quotient, &e.f, &e.g).unwrap()
    })
}

fn p(text: &str) -> Polynomial {
    ex().s.poly_ring().parse(text).unwrap()
}

#[test]
fn canonical_lift_reads_the_same_matrices() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap();
    let l = lift_complex(&f, &e.quotient, LiftPolicy::Canonical).unwrap();
    for i in 1..=3 {
        assert_eq!(l.lifted.differential(i).unwrap().matrix, f.differential(i).unwrap().matrix);
    }
}

#[test]
fn randomized_lifts_project_back() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap();
    let mut changed = 0;
    for seed in 0..100 {
        let l = lift_complex(&f, &e.quotient, LiftPolicy::Randomized(seed)).unwrap();
        for i in 1..=3 {
            let lifted = l.lifted.differential(i).unwrap().matrix;
            let base = f.differential(i).unwrap().matrix;
            assert_eq!(lifted.reduce(&e.r), base);
            if lifted != base {
                changed += 1;
            }
        }
    }
    assert!(changed > 0);
}

#[test]
fn supplied_lifts_are_checked() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap();
    let mut ms: Vec<PolyMatrix> = (1..=3).map(|i| f.differential(i).unwrap().matrix).collect();
    let ok = lift_complex(&f, &e.quotient, LiftPolicy::Supplied(ms.clone()));
    assert!(ok.is_ok());
    ms[0].set(0, 0, p("y+x"));
    let err = lift_complex(&f, &e.quotient, LiftPolicy::Supplied(ms)).unwrap_err();
    assert!(matches!(err, OperatorError::LiftMismatch { index: 1, .. }) || matches!(err, OperatorError::Complex(_)));
}

#[test]
fn example_operators_satisfy_their_contracts() {
    let e = ex();
    let b = builder();
    let f = e.resolution_window(&e.r).unwrap();
    let bundle = b.build(&f, &[p("t")], LiftPolicy::Canonical).unwrap();
    verify_contracts(b, &bundle).unwrap();
    assert_eq!(bundle.psi_tilde.internal_degree, Some(-2));
    assert_eq!(bundle.phi_tilde.internal_degree, Some(-4));
    let (_, psi_t) = &bundle.psi_z[0];
    assert_eq!(psi_t.internal_degree, Some(-1));
    psi_t.check_internal_degree().unwrap();
    bundle.phi.check_internal_degree().unwrap();
    assert_eq!(bundle.chain_checks[0].1, Some(true));
    // On F_0..F_3 every equation for phi lands in F_{-1} = 0.
    assert_eq!(bundle.chain_checks[1].1, None);
    assert_eq!(bundle.psi_range(), Some((0, 3)));
    assert_eq!(bundle.phi_range(), Some((1, 3)));
}

#[test]
fn stated_operator_matrices_satisfy_the_identities() {
    let e = ex();
    let s = &e.s;
    let f = e.resolution_window(s).unwrap();
    let d = |i| f.differential(i).unwrap().matrix;
    let psi2 = e.matrix(&example::PSI_TILDE_2).unwrap();
    let psi3 = e.matrix(&example::PSI_TILDE_3).unwrap();
    let phi3 = e.matrix(&example::PHI_TILDE_3).unwrap();
    let fx = e.f.rep();
    let gy = e.g.rep();
    let zero = |m: PolyMatrix| m.reduce(s).is_zero();
    assert!(zero(psi2.mul_scalar(fx).sub(&d(1).mul(&d(2)).unwrap()).unwrap()));
    assert!(zero(psi3.mul_scalar(fx).sub(&d(2).mul(&d(3)).unwrap()).unwrap()));
    let num = d(1).mul(&psi3).unwrap().sub(&psi2.mul(&d(3)).unwrap()).unwrap();
    assert_eq!(num.reduce(s), e.matrix(&example::PHI_NUMERATOR_3).unwrap().reduce(s));
    assert!(zero(phi3.mul_scalar(gy).sub(&num).unwrap()));
}

#[test]
fn phi_is_a_chain_map_on_a_longer_window() {
    let e = ex();
    let b = builder();
    let f = extend_resolution(&e.resolution_window(&e.r).unwrap(), 4, 8).unwrap().complex;
    let zs = [p("t"), p("y^2"), p("z^2-w^2")];
    let bundle = b.build(&f, &zs, LiftPolicy::Canonical).unwrap();
    assert!(bundle.chain_checks.iter().all(|(_, v)| *v == Some(true)), "{:?}", bundle.chain_checks);
    // psi_z psi_z' = psi_z' psi_z as matrices
    let (a, c) = (&bundle.psi_z[0].1, &bundle.psi_z[1].1);
    assert!(compose(a, c).unwrap().matrices_equal(&compose(c, a).unwrap()));
    // bilinearity
    let sum = bundle.psi_z[1].1.add(&bundle.psi_z[2].1).unwrap();
    assert!(sum.matrices_equal(&bundle.psi_for(&p("y^2+z^2-w^2"))));
    let tripled = bundle.psi_z[0].1.scale(&int(3));
    assert!(tripled.matrices_equal(&bundle.psi_for(&p("3*t"))));
}

#[test]
fn zero_z_gives_zero_and_bad_z_is_rejected() {
    let e = ex();
    let b = builder();
    let f = e.resolution_window(&e.r).unwrap();
    let bundle = b.build(&f, &[p("0")], LiftPolicy::Canonical).unwrap();
    assert!(bundle.psi_z[0].1.is_zero());
    let err = b.build(&f, &[p("x")], LiftPolicy::Canonical).unwrap_err();
    assert!(matches!(err, OperatorError::NotInAnnihilator(_)));
}

#[test]
fn two_differentials_give_zero_psi() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap().truncate(0, 1).unwrap();
    let bundle = builder().build(&f, &[], LiftPolicy::Canonical).unwrap();
    assert!(bundle.psi_tilde.is_zero());
    assert!(bundle.phi_tilde.is_zero());
}

#[test]
fn non_complexes_are_not_divisible() {
    let e = ex();
    let y = e.r.poly_ring().parse("y").unwrap();
    let f = GradedComplex::new(
        &e.r,
        0,
        vec![GradedFreeModule::new(vec![0]), GradedFreeModule::new(vec![-1]), GradedFreeModule::new(vec![-2])],
        vec![
            PolyMatrix::from_rows(e.r.poly_ring(), vec![vec![y.clone()]], 1).unwrap(),
            PolyMatrix::from_rows(e.r.poly_ring(), vec![vec![y]], 1).unwrap(),
        ],
        true,
    )
    .unwrap();
    let err = builder().build(&f, &[], LiftPolicy::Canonical).unwrap_err();
    assert!(matches!(err, OperatorError::NotDivisible { op: "psi", index: 2, .. }));
}

#[test]
fn inexact_pairs_are_rejected() {
    let e = Example::with_f("x^2+y^2").unwrap();
    let g = e.g.clone();
    let err = OperatorBuilder::new(&e.quotient, &e.f, &g).unwrap_err();
    assert!(matches!(err, OperatorError::NotExactPair { .. }));
}

#[test]
fn line_pair_warns_and_builds_phi() {
    let s = PresentedRing::make_ring("S", &[("u", 1), ("v", 1)], &["u*v"], true).unwrap();
    let u = s.parse_elem("u").unwrap();
    let v = s.parse_elem("v").unwrap();
    let q = quotient_by(&s, &u, "R").unwrap();
    let r = q.target.clone();
    let vv = r.poly_ring().parse("v").unwrap();
    let f = GradedComplex::new(
        &r,
        0,
        vec![GradedFreeModule::new(vec![0]), GradedFreeModule::new(vec![-1])],
        vec![PolyMatrix::from_rows(r.poly_ring(), vec![vec![vv]], 1).unwrap()],
        true,
    )
    .unwrap();
    let bundle = operator_pipeline(&f, &q, &u, &v, &[], LiftPolicy::Randomized(3)).unwrap();
    assert!(bundle.warnings.iter().any(|w| w.contains("ann_R(y) = 0")));
    assert!(bundle.phi.is_zero());
}
