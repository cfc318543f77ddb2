use super::*;
use crate::complex::random_map;
use crate::example::Example;
use crate::operators::{LiftPolicy, OperatorBuilder};
use crate::resolution::extend_resolution;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
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

fn window4() -> &'static GradedComplex {
    static F: OnceLock<GradedComplex> = OnceLock::new();
    F.get_or_init(|| {
        let e = ex();
        extend_resolution(&e.resolution_window(&e.r).unwrap(), 4, 8).unwrap().complex
    })
}

fn p(text: &str) -> Polynomial {
    ex().s.poly_ring().parse(text).unwrap()
}

/// A random `theta` of degree `m + 1` and its boundary under `conv`.
fn boundary(f: &GradedComplex, m: i64, e: i64, conv: Convention, seed: u64) -> ComplexMap {
    let ring = f.ring();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut theta = ComplexMap::new(ring, m + 1, Some(e));
    for j in f.lo()..=f.hi() {
        if let (Some(s), Some(t)) = (f.module(j), f.module(j + m + 1)) {
            theta.insert(j, random_map(ring, &s, &t, e, &mut rng)).unwrap();
        }
    }
    let shape = ComplexMap::new(ring, m, Some(e));
    let prob = HomotopyProblem::new(&shape, f, (f.lo(), f.hi())).with_convention(conv);
    let mut g = ComplexMap::new(ring, m, Some(e));
    for i in f.lo()..=f.hi() {
        if let (Some(s), Some(t)) = (f.module(i), f.module(i + m)) {
            if prob.theta_modules(i - 1).is_some() && prob.theta_modules(i).is_some() {
                g.insert(i, FreeMap::new(s, t, prob.apply(&theta, i).unwrap()).unwrap()).unwrap();
            }
        }
    }
    g
}

#[test]
fn phi_is_not_null_homotopic() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap();
    let bundle = builder().build(&f, &[], LiftPolicy::Canonical).unwrap();
    let (nonzero, out) = ext_class_nonzero(&bundle.phi, &f, (0, 3)).unwrap();
    assert!(nonzero);
    let HomotopyOutcome::NotNullHomotopic(cert) = out else { unreachable!() };
    assert!(cert.verify());
    let prob = HomotopyProblem::new(&bundle.phi, &f, (0, 3));
    assert!(cert.verify_against(&prob).unwrap());
    assert!(cert.support().iter().all(|l| l.starts_with("index 3")));
    assert!(!cert.bounded);
    // The other sign convention agrees.
    let flipped = null_homotopy(&prob.clone().with_convention(Convention::Flipped)).unwrap();
    assert!(!flipped.is_null_homotopic());
}

#[test]
fn phi_stays_nonzero_on_a_longer_window() {
    let f = window4();
    let bundle = builder().build(f, &[], LiftPolicy::Canonical).unwrap();
    let (nonzero, _) = ext_class_nonzero(&bundle.phi, f, (0, 4)).unwrap();
    assert!(nonzero);
}

#[test]
fn psi_t_is_not_null_homotopic() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap();
    let bundle = builder().build(&f, &[p("t")], LiftPolicy::Canonical).unwrap();
    let psi_t = bundle.psi_for(&p("t"));
    assert_eq!(psi_t.internal_degree, Some(-1));
    let (nonzero, out) = ext_class_nonzero(&psi_t, &f, (0, 3)).unwrap();
    assert!(nonzero);
    let HomotopyOutcome::NotNullHomotopic(cert) = out else { unreachable!() };
    assert!(cert.verify());
}

#[test]
fn tampered_witness_is_rejected() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap();
    let bundle = builder().build(&f, &[], LiftPolicy::Canonical).unwrap();
    let HomotopyOutcome::NotNullHomotopic(mut cert) = ext_class_nonzero(&bundle.phi, &f, (0, 3)).unwrap().1 else {
        unreachable!()
    };
    let k = cert.witness.iter().position(|v| !v.is_zero()).unwrap();
    cert.witness[k] += Rational::one();
    assert!(!cert.verify());
    cert.witness.pop();
    assert!(!cert.verify());
}

#[test]
fn boundaries_are_null_homotopic_in_both_conventions() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap();
    for (seed, (m, deg)) in [(-3, -4), (-2, -1), (-2, -2), (-1, 0), (0, 1)].into_iter().enumerate() {
        for conv in [Convention::Standard, Convention::Flipped] {
            let g = boundary(&f, m, deg, conv, seed as u64);
            let prob = HomotopyProblem::new(&g, &f, (0, 3)).with_convention(conv);
            match null_homotopy(&prob) {
                Ok(HomotopyOutcome::NullHomotopic(cert)) => assert!(cert.verify(&prob).unwrap()),
                Ok(_) => panic!("boundary at ({m}, {deg}) reported infeasible"),
                Err(HomotopyError::WindowTooSmall(..)) => {}
                Err(err) => panic!("{err}"),
            }
        }
    }
}

#[test]
fn conventions_differ_by_an_alternating_sign() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap();
    let bundle = builder().build(&f, &[p("t")], LiftPolicy::Canonical).unwrap();
    for g in [bundle.phi.clone(), bundle.psi_for(&p("t")), boundary(&f, -3, -4, Convention::Standard, 9)] {
        let mut alt = ComplexMap::new(&g.ring, g.hom_degree, g.internal_degree);
        for i in g.indices() {
            let c = g.component(i).unwrap().clone();
            let c = if i.rem_euclid(2) == 1 { FreeMap::new(c.source, c.target, c.matrix.neg()).unwrap() } else { c };
            alt.insert(i, c).unwrap();
        }
        let a = null_homotopy(&HomotopyProblem::new(&g, &f, (0, 3))).unwrap();
        let b = null_homotopy(&HomotopyProblem::new(&alt, &f, (0, 3)).with_convention(Convention::Flipped)).unwrap();
        assert_eq!(a.is_null_homotopic(), b.is_null_homotopic());
    }
}

#[test]
fn bounded_mode_finds_small_homotopies() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap();
    let g = boundary(&f, -2, -1, Convention::Standard, 3);
    let prob = HomotopyProblem::new(&g, &f, (0, 3)).with_mode(Mode::Bounded(3));
    let HomotopyOutcome::NullHomotopic(cert) = null_homotopy(&prob).unwrap() else { panic!("infeasible") };
    assert!(cert.bounded);
    assert!(cert.verify(&prob).unwrap());
}

#[test]
fn empty_windows_are_reported() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap();
    let bundle = builder().build(&f, &[], LiftPolicy::Canonical).unwrap();
    let err = null_homotopy(&HomotopyProblem::new(&bundle.phi, &f, (5, 7))).unwrap_err();
    assert_eq!(err, HomotopyError::WindowTooSmall(5, 7));
    // phi_3: F_3 -> F_0 needs theta_2: F_2 -> F_0, so index 3 alone is a valid window.
    assert!(null_homotopy(&HomotopyProblem::new(&bundle.phi, &f, (3, 3))).is_ok());
}

#[test]
fn lifts_give_homotopic_operators() {
    let f = window4();
    let z = p("t");
    let canon = builder().build(f, std::slice::from_ref(&z), LiftPolicy::Canonical).unwrap();
    for seed in [1, 2] {
        let other = builder().build(f, std::slice::from_ref(&z), LiftPolicy::Randomized(seed)).unwrap();
        let id = ComplexMap::identity(f);
        let report = check_naturality(&id, &canon, &other, std::slice::from_ref(&z), (0, 4)).unwrap();
        assert!(report.all_homotopic(), "seed {seed}");
    }
}

#[test]
fn mismatched_degrees_are_rejected() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap();
    let bundle = builder().build(&f, &[p("t")], LiftPolicy::Canonical).unwrap();
    let err = homotopic(&bundle.phi, &bundle.psi_for(&p("t")), &f, &f, (0, 3)).unwrap_err();
    assert!(matches!(err, HomotopyError::DegreeMismatch(_)));
}
