use super::*;
use crate::example::{self, Example};
use crate::linalg::QMatrix;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::sync::OnceLock;

fn ex() -> &'static Example {
    static EX: OnceLock<Example> = OnceLock::new();
    EX.get_or_init(|| Example::new().unwrap())
}

#[test]
fn example_window_is_a_complex_over_r_only() {
    let e = ex();
    let over_r = e.resolution_window(&e.r).unwrap();
    let rep = validate_complex(&over_r);
    assert!(rep.valid, "{:?}", rep.violations);

    let over_s = e.resolution_window(&e.s).unwrap();
    let rep = validate_complex(&over_s);
    assert!(!rep.valid);
    let d1 = over_s.differential(1).unwrap();
    let d2 = over_s.differential(2).unwrap();
    let d1d2 = d2.compose(&d1, &e.s).err();
    assert!(d1d2.is_some(), "d2 then d1 in the wrong order must not compose");
    let d1d2 = d1.compose(&d2, &e.s).unwrap();
    assert_eq!(d1d2.matrix, e.matrix(&example::D1D2).unwrap());
    let d2d3 = d2.compose(&over_s.differential(3).unwrap(), &e.s).unwrap();
    assert_eq!(d2d3.matrix, e.matrix(&example::D2D3).unwrap().reduce(&e.s));
}

#[test]
fn zero_complex_is_valid() {
    let e = ex();
    let z = GradedComplex::new(
        &e.r,
        0,
        vec![GradedFreeModule::zero(), GradedFreeModule::zero()],
        vec![PolyMatrix::zeros(e.r.poly_ring(), 0, 0)],
        true,
    )
    .unwrap();
    assert!(validate_complex(&z).valid);
}

#[test]
fn construction_rejects_bad_degrees_and_shapes() {
    let e = ex();
    let bad = PolyMatrix::parse(e.r.poly_ring(), &[&["y^2"]], 1).unwrap();
    let err = GradedComplex::new(
        &e.r,
        0,
        vec![GradedFreeModule::new(vec![0]), GradedFreeModule::new(vec![-1])],
        vec![bad],
        true,
    )
    .unwrap_err();
    assert!(matches!(err, ComplexError::Degree { expected: 1, .. }));
    let wide = PolyMatrix::parse(e.r.poly_ring(), &[&["y", "y"]], 2).unwrap();
    assert!(matches!(
        GradedComplex::new(
            &e.r,
            0,
            vec![GradedFreeModule::new(vec![0]), GradedFreeModule::new(vec![-1])],
            vec![wide],
            true
        ),
        Err(ComplexError::Shape(_))
    ));
}

#[test]
fn multiplication_by_y_degreewise() {
    let e = ex();
    let y = e.r.poly_ring().parse("y").unwrap();
    let map = FreeMap::new(
        GradedFreeModule::new(vec![0]),
        GradedFreeModule::new(vec![0]),
        PolyMatrix::from_rows(e.r.poly_ring(), vec![vec![y.clone()]], 1).unwrap(),
    )
    .unwrap();
    let m = map.degreewise_matrix(&e.r, 1, 1).unwrap();
    assert_eq!((m.nrows(), m.ncols()), (11, 5));
    let r1 = e.r.graded_basis(1).unwrap();
    for (k, mono) in r1.monomials.iter().enumerate() {
        let p = Polynomial::term(e.r.poly_ring(), int(1), mono.clone());
        let want = e.r.coordinates(&e.r.reduce(&(&p * &y)), 2).unwrap();
        assert_eq!(m.column(k), want);
    }
    let zero = FreeMap::zero(e.r.poly_ring(), &map.source, &map.target);
    assert!(zero.degreewise_matrix(&e.r, 1, 1).unwrap().is_zero());
}

#[test]
fn identity_and_composition() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap();
    let id = ComplexMap::identity(&f);
    assert!(is_chain_map(&id, &f, &f).unwrap());
    let mut d = ComplexMap::new(&e.r, -1, Some(0));
    for i in 1..=3 {
        d.insert(i, f.differential(i).unwrap()).unwrap();
    }
    assert!(compose(&id, &d).unwrap().matrices_equal(&d));
    let dd = compose(&d, &d).unwrap();
    assert_eq!(dd.indices(), vec![2, 3]);
    assert!(dd.is_zero());
}

#[test]
fn multiplication_maps_are_chain_maps_and_perturbations_are_not() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap();
    let c = e.r.poly_ring().parse("x+t").unwrap();
    let mul = ComplexMap::identity(&f).mul_element(&c);
    assert_eq!(mul.internal_degree, Some(1));
    assert!(is_chain_map(&mul, &f, &f).unwrap());
    let mut bad = mul.clone();
    let mut comp = bad.components[&1].clone();
    comp.matrix.set(0, 0, e.r.poly_ring().parse("x").unwrap());
    bad.components.insert(1, comp);
    assert!(!is_chain_map(&bad, &f, &f).unwrap());
}

#[test]
fn window_too_small() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap();
    let g = ComplexMap::new(&e.r, -7, Some(0));
    assert!(matches!(is_chain_map(&g, &f, &f), Err(ComplexError::WindowTooSmall(_))));
}

fn random_window_map(rng: &mut ChaCha8Rng, f: &GradedComplex, m: i64, e: i64) -> ComplexMap {
    let mut g = ComplexMap::new(f.ring(), m, Some(e));
    for i in f.lo()..=f.hi() {
        if let (Some(s), Some(t)) = (f.module(i), f.module(i + m)) {
            g.insert(i, random_map(f.ring(), &s, &t, e, rng)).unwrap();
        }
    }
    g
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn composition_is_associative(seed in any::<u64>()) {
        let e = ex();
        let f = e.resolution_window(&e.r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = random_window_map(&mut rng, &f, 0, 1);
        let b = random_window_map(&mut rng, &f, -1, 1);
        let c = random_window_map(&mut rng, &f, 0, 0);
        let left = compose(&compose(&a, &b).unwrap(), &c).unwrap();
        let right = compose(&a, &compose(&b, &c).unwrap()).unwrap();
        prop_assert!(left.matrices_equal(&right));
        prop_assert!(left.check_internal_degree().is_ok());
    }

    #[test]
    fn degreewise_matrices_are_functorial(seed in any::<u64>(), d in 0i64..=4) {
        let e = ex();
        let f = e.resolution_window(&e.r).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let h = random_window_map(&mut rng, &f, -1, 1);
        let g = random_window_map(&mut rng, &f, 0, 1);
        let gh = compose(&g, &h).unwrap();
        for i in gh.indices() {
            let prod: QMatrix = g.degreewise_matrix(i - 1, d + 1).unwrap().mul(&h.degreewise_matrix(i, d).unwrap());
            prop_assert_eq!(gh.degreewise_matrix(i, d).unwrap(), prod);
        }
    }
}
