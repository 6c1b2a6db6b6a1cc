use motzkin_core::equivalence::{
    mutation_battery, run_suites, verify_boundary_locked, verify_zipper_bt, verify_zipper_cs,
    Sample,
};
use motzkin_core::network::{hrn_open, pyramid, u1_mera};
use motzkin_core::tiles::Family;
use motzkin_core::TensorSet;
use num_bigint::BigInt;

type Z = BigInt;

#[test]
fn shipped_set_passes_every_suite() {
    let set = TensorSet::<Z>::standard();
    for r in run_suites(&set) {
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn zipper_tables_have_one_row_per_labeling() {
    let set = TensorSet::<Z>::standard();
    let bt = verify_zipper_bt(&set).unwrap();
    assert_eq!(bt.rows.len(), 36);
    assert!(bt
        .rows
        .iter()
        .all(|r| r.lhs_tiles.len() == 1 && r.rhs_tiles.len() == 1));
    let cs = verify_zipper_cs(&set).unwrap();
    assert_eq!(cs.rows.len(), 64);
    // labelings that need the ω tiles still have exactly one tiling per side
    assert!(cs.rows.iter().all(|r| r.lhs.len() == 1 && r.rhs.len() == 1));
}

#[test]
fn locked_sampling() {
    let set = TensorSet::<Z>::standard();
    let u = u1_mera(2, &set).unwrap();
    let r = verify_boundary_locked(&u, Sample::All).unwrap();
    assert!(r.passed());
    assert_eq!((r.checked, r.nonzero), (81, 19));
    let p = pyramid(2, &Z::from(1), &set).unwrap();
    let r = verify_boundary_locked(&p, Sample::All).unwrap();
    assert_eq!(r.nonzero, 9);
    let h = hrn_open(4, &set).unwrap();
    let a = verify_boundary_locked(&h, Sample::Random { count: 50, seed: 7 }).unwrap();
    let b = verify_boundary_locked(&h, Sample::Random { count: 50, seed: 7 }).unwrap();
    assert!(a.passed());
    assert_eq!(a, b);
}

#[test]
fn every_single_deletion_is_caught() {
    let set = TensorSet::<Z>::standard();
    let report = mutation_battery(&set);
    let sizes: usize = [
        Family::B,
        Family::T,
        Family::C,
        Family::S,
        Family::G,
        Family::W,
    ]
    .iter()
    .map(|&f| set.family(f).nnz())
    .sum();
    assert_eq!(report.rows.len(), sizes);
    for row in &report.rows {
        match &row.caught_by {
            Some((suite, c)) => println!("{:?} {:?}: {suite}: {c}", row.family, row.key),
            None => println!("{:?} {:?}: not caught", row.family, row.key),
        }
    }
    assert!(report.all_caught());
}
