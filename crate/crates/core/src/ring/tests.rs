use super::*;
use crate::linalg::Echelon;
use crate::poly::int;
use proptest::prelude::*;

const S_RELS: [&str; 10] = [
    "x^4", "y^4", "w^4", "z^4", "x^2*y^2", "y^2*w^2", "z^2*w^2", "x*t", "z*t", "w*t",
];
const VARS: [(&str, u32); 5] = [("x", 1), ("y", 1), ("z", 1), ("w", 1), ("t", 1)];

fn ring_s() -> Arc<PresentedRing> {
    PresentedRing::make_ring("S", &VARS, &S_RELS, true).unwrap()
}

fn ring_r() -> (Arc<PresentedRing>, QuotientMap) {
    let s = ring_s();
    let f = s.parse_elem("x^2+y^2+z^2+w^2").unwrap();
    let q = quotient_by(&s, &f, "R").unwrap();
    (q.target.clone(), q)
}

/// Dimension of `(P/I)_d` from the raw relations by linear algebra on all
/// monomials of `P_d`, without any Gröbner basis.
fn brute_dim(ring: &PresentedRing, d: u64) -> usize {
    let weights = ring.poly_ring().weights().to_vec();
    let all = Monomial::enumerate(&weights, d);
    let pos: HashMap<Monomial, usize> = all.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let mut ech = Echelon::new(all.len());
    for r in ring.ideal().generators() {
        let e = r.homogeneous_degree().unwrap();
        if e > d {
            continue;
        }
        for m in Monomial::enumerate(&weights, d - e) {
            let row: Vec<(usize, Rational)> = r
                .terms()
                .iter()
                .map(|(t, c)| (pos[&t.mul(&m)], c.clone()))
                .collect();
            ech.insert(&row);
        }
    }
    all.len() - ech.rank()
}

/// Dimension of the degree-`d` part of the ideal generated by `gens` in the ring.
fn ideal_piece_dim(ring: &PresentedRing, gens: &[Polynomial], d: i64) -> usize {
    let piece = ring.graded_basis(d).unwrap();
    let mut ech = Echelon::new(piece.dim());
    for g in gens {
        let e = g.homogeneous_degree().unwrap() as i64;
        if e > d {
            continue;
        }
        for m in Monomial::enumerate(ring.poly_ring().weights(), (d - e) as u64) {
            let p = g.mul_term(&int(1), &m);
            ech.insert_dense(&ring.coordinates(&p, d).unwrap());
        }
    }
    ech.rank()
}

/// Kernel dimension of multiplication by `a` from `R_d` to `R_{d+deg a}`.
fn mult_kernel_dim(ring: &PresentedRing, a: &Polynomial, d: i64) -> usize {
    let e = a.homogeneous_degree().unwrap() as i64;
    let piece = ring.graded_basis(d).unwrap();
    let cols: Vec<Vec<Rational>> = piece
        .monomials
        .iter()
        .map(|m| ring.coordinates(&a.mul_term(&int(1), m), d + e).unwrap())
        .collect();
    let mut ech = Echelon::new(usize::MAX);
    for c in &cols {
        ech.insert_dense(c);
    }
    piece.dim() - ech.rank()
}

#[test]
fn graded_dimensions_match_brute_force() {
    let s = ring_s();
    let (r, _) = ring_r();
    for d in 0..=8u64 {
        assert_eq!(s.graded_basis(d as i64).unwrap().dim(), brute_dim(&s, d), "S_{d}");
        assert_eq!(r.graded_basis(d as i64).unwrap().dim(), brute_dim(&r, d), "R_{d}");
    }
    assert_eq!(s.graded_basis(2).unwrap().dim(), 12);
    assert_eq!(r.graded_basis(1).unwrap().dim(), 5);
    assert_eq!(r.graded_basis(2).unwrap().dim(), 11);
    assert_eq!(r.graded_basis(-1).unwrap().dim(), 0);
}

#[test]
fn listed_quadrics_span_r2() {
    let (r, _) = ring_r();
    let listed = ["x^2", "y^2", "w^2", "t^2", "x*y", "x*z", "x*w", "y*z", "y*w", "z*w", "y*t"];
    let mut ech = Echelon::new(usize::MAX);
    for m in listed {
        let p = r.poly_ring().parse(m).unwrap();
        ech.insert_dense(&r.coordinates(&p, 2).unwrap());
    }
    assert_eq!(ech.rank(), 11);
}

#[test]
fn coordinates_round_trip() {
    let (r, _) = ring_r();
    let p = r.parse("x^2*y + 3*z^3 - y*t^2 + x*z*w").unwrap();
    let v = r.coordinates(&p, 3).unwrap();
    assert_eq!(r.from_coordinates(3, &v).unwrap(), p);
}

#[test]
fn annihilators_in_the_example() {
    let s = ring_s();
    let (r, q) = ring_r();
    let g = r.parse_elem("x^2+y^2-z^2-w^2").unwrap();
    let ann = annihilator(&r, &g).unwrap();
    let expected: Vec<Polynomial> = ["t", "y^2", "z^2", "w^2"]
        .iter()
        .map(|t| r.poly_ring().parse(t).unwrap())
        .collect();
    assert!(r.ideals_equal(&ann, &expected));
    assert_eq!(ann.len(), 4);

    let gs = s.parse_elem("x^2+y^2-z^2-w^2").unwrap();
    let ann_s = annihilator(&s, &gs).unwrap();
    assert!(s.ideals_equal(&ann_s, std::slice::from_ref(&q.divisor)));
}

#[test]
fn exact_pairs() {
    let s = ring_s();
    let f = s.parse_elem("x^2+y^2+z^2+w^2").unwrap();
    let g = s.parse_elem("x^2+y^2-z^2-w^2").unwrap();
    let rep = check_exact_pair(&s, &f, &g).unwrap();
    assert!(rep.exact, "{:?}", rep.failures);

    let uv = PresentedRing::make_ring("A", &[("u", 1), ("v", 1)], &["u*v"], true).unwrap();
    let u = uv.parse_elem("u").unwrap();
    let v = uv.parse_elem("v").unwrap();
    assert!(check_exact_pair(&uv, &u, &v).unwrap().exact);
    let ann_u = annihilator(&uv, &u).unwrap();
    assert!(uv.ideals_equal(&ann_u, &[v.rep().clone()]));

    let free = PresentedRing::make_ring("F", &[("x", 1), ("y", 1)], &[], true).unwrap();
    let x = free.parse_elem("x").unwrap();
    let y = free.parse_elem("y").unwrap();
    let rep = check_exact_pair(&free, &x, &y).unwrap();
    assert!(!rep.exact);
    assert!(rep.ann_x.is_empty());
}

#[test]
fn errors() {
    let s = ring_s();
    let z = s.parse_elem("x*t").unwrap();
    assert_eq!(annihilator(&s, &z).unwrap_err(), RingError::ZeroElement);
    assert!(matches!(
        PresentedRing::make_ring("B", &[("a", 1)], &["a^2+a"], true),
        Err(RingError::Inhomogeneous(_))
    ));
    let ung = PresentedRing::make_ring("B", &[("a", 1)], &["a^2+a"], false).unwrap();
    assert!(matches!(ung.graded_basis(1), Err(RingError::NotGraded(_))));
    assert_eq!(ung.standard_monomials_up_to(3).len(), 2);
}

#[test]
fn projection_and_lift() {
    let (r, q) = ring_r();
    let p = q.source.poly_ring().parse("x^2*y+t").unwrap();
    let lifted = q.lift(&p);
    assert_eq!(q.project(&lifted), q.project(&p));
    assert!(r.is_zero(&(&lifted - &p)));
    assert_eq!(q.source.reduce(&lifted), lifted);
}

fn homogeneous_element(ring: &PresentedRing, d: i64, coeffs: &[i64]) -> Polynomial {
    let piece = ring.graded_basis(d).unwrap();
    let v: Vec<Rational> = (0..piece.dim()).map(|i| int(coeffs[i % coeffs.len()])).collect();
    ring.from_coordinates(d, &v).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn annihilator_is_degreewise_complete(
        d in 1i64..=2,
        coeffs in prop::collection::vec(-2i64..=2, 1..6),
    ) {
        let (r, _) = ring_r();
        let a = homogeneous_element(&r, d, &coeffs);
        prop_assume!(!a.is_zero());
        let ae = r.elem(&a).unwrap();
        let ann = annihilator(&r, &ae).unwrap();
        for g in &ann {
            prop_assert!(r.is_zero(&(g * &a)));
        }
        for e in 0..=5 {
            prop_assert_eq!(ideal_piece_dim(&r, &ann, e), mult_kernel_dim(&r, &a, e), "degree {}", e);
        }
    }
}

