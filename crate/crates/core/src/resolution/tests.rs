use super::*;
use crate::example::{self, Example};
use std::sync::OnceLock;

fn ex() -> &'static Example {
    static EX: OnceLock<Example> = OnceLock::new();
    EX.get_or_init(|| Example::new().unwrap())
}

fn module_y() -> ModulePresentation {
    let e = ex();
    ModulePresentation::cyclic(&e.r, &[e.r.poly_ring().parse("y").unwrap()]).unwrap()
}

fn sorted(v: &[i64]) -> Vec<i64> {
    let mut v = v.to_vec();
    v.sort_unstable_by(|a, b| b.cmp(a));
    v
}

#[test]
fn betti_numbers_of_r_mod_y() {
    let e = ex();
    let t = std::time::Instant::now();
    let res = minimal_resolution(&e.r, &module_y(), 3, 10).unwrap();
    eprintln!("resolution in {:?}", t.elapsed());
    let want = example::twists();
    for i in 0..=3 {
        assert_eq!(res.betti(i), sorted(&want[i as usize]), "step {i}");
    }
    assert!(res.all_certified(), "{:?}", res.steps);
    let report = verify_resolution_window(&res.complex, &module_y(), 8).unwrap();
    assert!(report.passed(), "{:?}", report.failures);
}

#[test]
fn low_dmax_leaves_later_steps_uncertified() {
    let e = ex();
    let res = minimal_resolution(&e.r, &module_y(), 3, 3).unwrap();
    assert_eq!(res.steps[0].status, StepStatus::Certified);
    assert_eq!(res.steps[2].status, StepStatus::Uncertified);
}

#[test]
fn betti_numbers_ignore_basis_order() {
    let e = ex();
    let want = minimal_resolution(&e.r, &module_y(), 3, 7).unwrap();
    for seed in [1u64, 2] {
        let got = minimal_resolution_with(&e.r, &module_y(), 3, 7, Some(seed)).unwrap();
        for i in 0..=3 {
            assert_eq!(got.betti(i), want.betti(i));
        }
        assert!(validate_complex(&got.complex).valid);
    }
}

#[test]
fn stated_window_verifies() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap();
    let rep = verify_resolution_window(&f, &module_y(), 8).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
}

#[test]
fn dropping_a_column_breaks_exactness() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap();
    let d3 = f.differential(3).unwrap();
    let keep: Vec<usize> = (0..16).filter(|&c| c != 4).collect();
    let rows: Vec<Vec<Polynomial>> = (0..4).map(|r| keep.iter().map(|&c| d3.matrix.get(r, c).clone()).collect()).collect();
    let mut twists = example::twists();
    twists[3].remove(4);
    let g = GradedComplex::new(
        &e.r,
        0,
        twists.into_iter().map(GradedFreeModule::new).collect(),
        vec![
            f.differential(1).unwrap().matrix,
            f.differential(2).unwrap().matrix,
            PolyMatrix::from_rows(e.r.poly_ring(), rows, 15).unwrap(),
        ],
        true,
    )
    .unwrap();
    let rep = verify_resolution_window(&g, &module_y(), 8).unwrap();
    assert!(rep.d_squared_zero && rep.minimal);
    assert!(!rep.exact);
    assert!(rep.failures.iter().any(|m| m.starts_with("index 2")));
}

#[test]
fn unit_entries_are_not_minimal() {
    let a = PresentedRing::make_ring("A", &[("v", 1)], &[], true).unwrap();
    let one = PolyMatrix::parse(a.poly_ring(), &[&["1"]], 1).unwrap();
    let f = GradedComplex::new(
        &a,
        0,
        vec![GradedFreeModule::new(vec![0]), GradedFreeModule::new(vec![0])],
        vec![one],
        true,
    )
    .unwrap();
    let m = ModulePresentation::cyclic(&a, &[a.poly_ring().parse("1").unwrap()]).unwrap();
    let rep = verify_resolution_window(&f, &m, 4).unwrap();
    assert!(!rep.minimal);
}

#[test]
fn residue_field_of_a_line() {
    let a = PresentedRing::make_ring("A", &[("v", 1)], &[], true).unwrap();
    let m = ModulePresentation::cyclic(&a, &[a.poly_ring().parse("v").unwrap()]).unwrap();
    let res = minimal_resolution(&a, &m, 3, 6).unwrap();
    assert_eq!(res.betti(1), vec![-1]);
    assert!(res.betti(2).is_empty());
    assert!(res.betti(3).is_empty());
    assert!(res.all_certified());
}

#[test]
fn extension_continues_the_stated_window() {
    let e = ex();
    let f = e.resolution_window(&e.r).unwrap();
    let ext = extend_resolution(&f, 4, 9).unwrap();
    assert_eq!(ext.complex.hi(), 4);
    assert!(ext.complex.module(4).unwrap().rank() > 0);
    assert!(validate_complex(&ext.complex).valid);
    let rep = verify_resolution_window(&ext.complex, &module_y(), 7).unwrap();
    assert!(rep.passed(), "{:?}", rep.failures);
    eprintln!("F_4 twists {:?}", ext.betti(4));
}
