use motzkin_core::contraction::{
    amplitude, contract_full, contract_with_order, contraction_plan, count_tensors,
    internal_labelings, locked_propagate,
};
use motzkin_core::network::{
    hrn_open, hrn_periodic, periodic_boundary, pyramid, pyramid_weighted, rectangle, u1_mera,
    wrap_fredkin, NodeKind,
};
use motzkin_core::tensor::AreaWeighting;
use motzkin_core::walk::{
    enumerate_walks, ground_state_vector, periodic_sector_state, Boundary, WalkKind,
};
use motzkin_core::{Poly, Scalar, SpinConfig, StateVector, TensorSet};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

type Z = BigInt;

fn z(v: i64) -> Z {
    Z::from(v)
}

#[test]
fn pyramid_matches_oracle_over_t() {
    let zs = TensorSet::<Z>::standard();
    let qs = TensorSet::<BigRational>::standard();
    let ps = TensorSet::<Poly>::standard();
    for n in 1..=5 {
        for t in [z(1), z(2)] {
            let net = pyramid(n, &t, &zs).unwrap();
            assert_eq!(
                contract_full(&net).unwrap(),
                ground_state_vector(2 * n, &t, WalkKind::Motzkin).unwrap()
            );
        }
        let half = BigRational::new(z(1), z(2));
        let net = pyramid(n, &half, &qs).unwrap();
        assert_eq!(
            contract_full(&net).unwrap(),
            ground_state_vector(2 * n, &half, WalkKind::Motzkin).unwrap()
        );
        let t = Poly::t();
        let net = pyramid(n, &t, &ps).unwrap();
        assert_eq!(
            contract_full(&net).unwrap(),
            ground_state_vector(2 * n, &t, WalkKind::Motzkin).unwrap()
        );
    }
}

#[test]
fn both_edge_weighting_squares_t() {
    let ps = TensorSet::<Poly>::standard();
    let t = Poly::t();
    for n in 1..=3 {
        let net = pyramid_weighted(n, &t, AreaWeighting::BothEdges, &ps).unwrap();
        let t2 = t.clone() * t.clone();
        assert_eq!(
            contract_full(&net).unwrap(),
            ground_state_vector(2 * n, &t2, WalkKind::Motzkin).unwrap()
        );
    }
}

#[test]
fn pyramid_amplitude_examples() {
    let ps = TensorSet::<Poly>::standard();
    let t = Poly::t();
    let net = pyramid(2, &t, &ps).unwrap();
    let amp = amplitude(&net, &SpinConfig(vec![1, 1, -1, -1])).unwrap();
    assert_eq!(amp, t.pow(4));
}

#[test]
fn open_walk_counts() {
    let zs = TensorSet::<Z>::standard();
    for (n, count) in [(1, 2), (2, 9), (3, 51), (4, 323)] {
        let st = contract_full(&pyramid(n, &z(1), &zs).unwrap()).unwrap();
        assert_eq!(st.nnz(), count);
        assert_eq!(st.norm_squared(), z(count as i64));
    }
}

#[test]
fn rectangles() {
    let zs = TensorSet::<Z>::standard();
    for n in 1usize..=4 {
        let m = (2 * n).ilog2() as usize;
        let flat = rectangle(n, m, 0, 0, &z(1), &zs).unwrap();
        let pyr = contract_full(&pyramid(n, &z(1), &zs).unwrap()).unwrap();
        assert_eq!(contract_full(&flat).unwrap(), pyr);
        // padding with extra zero rows changes nothing
        let padded = rectangle(n, m + 2, 0, 0, &z(1), &zs).unwrap();
        assert_eq!(contract_full(&padded).unwrap(), pyr);
    }
    let r = rectangle(2, 3, 4, 3, &z(1), &zs).unwrap();
    let st = contract_full(&r).unwrap();
    let sector = periodic_sector_state::<Z>(4, -1).unwrap();
    assert_eq!(st, sector);
    let r = rectangle(1, 2, 2, 0, &z(1), &zs).unwrap();
    let st = contract_full(&r).unwrap();
    let walks = enumerate_walks(2, WalkKind::Motzkin, Boundary::Fixed { p: 2, q: 0 }).unwrap();
    assert_eq!(st.nnz(), walks.len());
    assert_eq!(st.get(&SpinConfig(vec![-1, -1])), z(1));
}

#[test]
fn hrn_networks_match_oracles() {
    let zs = TensorSet::<Z>::standard();
    for n in [1, 2, 4] {
        let gs = ground_state_vector(2 * n, &z(1), WalkKind::Motzkin).unwrap();
        assert_eq!(contract_full(&hrn_open(n, &zs).unwrap()).unwrap(), gs);
        let sector = periodic_sector_state::<Z>(2 * n, 0).unwrap();
        assert_eq!(contract_full(&u1_mera(n, &zs).unwrap()).unwrap(), sector);
    }
    for n in [1, 2] {
        for k in -(2 * n as i64)..=2 * n as i64 {
            let (p, q) = periodic_boundary(n, k).unwrap();
            let st = contract_full(&hrn_periodic(n, p, q, &zs).unwrap()).unwrap();
            assert_eq!(
                st,
                periodic_sector_state(2 * n, q as i64 - p as i64).unwrap(),
                "n={n} k={k}"
            );
        }
    }
    let st = contract_full(&hrn_periodic(4, 8, 8, &zs).unwrap()).unwrap();
    assert_eq!(st, periodic_sector_state(8, 0).unwrap());
}

#[test]
fn fredkin_matches_dyck() {
    let zs = TensorSet::<Z>::standard();
    for (n, catalan) in [(1, 1), (2, 2), (3, 5), (4, 14)] {
        for t in [z(1), z(3)] {
            let net = wrap_fredkin(&pyramid(n, &t, &zs).unwrap(), &zs).unwrap();
            let st = contract_full(&net).unwrap();
            assert_eq!(st, ground_state_vector(2 * n, &t, WalkKind::Dyck).unwrap());
            if t == z(1) {
                assert_eq!(st.nnz(), catalan);
            }
        }
    }
    let net = wrap_fredkin(&hrn_open(2, &zs).unwrap(), &zs).unwrap();
    assert_eq!(
        contract_full(&net).unwrap(),
        ground_state_vector(4, &z(1), WalkKind::Dyck).unwrap()
    );
}

#[test]
fn tensor_counts() {
    let zs = TensorSet::<Z>::standard();
    for (n, b) in [(1usize, 2usize), (3, 10), (7, 34), (15, 98)] {
        let counts = count_tensors(&pyramid(n, &z(1), &zs).unwrap());
        assert_eq!(counts.get(&NodeKind::B), Some(&b));
        let formula = 2.0 * (n as f64 + 1.0) * (n as f64 + 1.0).log2() - 2.0 * n as f64;
        assert_eq!(formula, b as f64);
    }
    let counts = count_tensors(&hrn_open(2, &zs).unwrap());
    let got: Vec<(NodeKind, usize)> = counts.into_iter().collect();
    assert_eq!(
        got,
        vec![(NodeKind::C, 6), (NodeKind::S, 3), (NodeKind::Pi, 4)]
    );
}

fn all_configs(sites: usize, values: &[i8]) -> Vec<SpinConfig> {
    let mut out = vec![Vec::new()];
    for _ in 0..sites {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i8>| {
                values.iter().map(move |&v| {
                    let mut q = p.clone();
                    q.push(v);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(SpinConfig).collect()
}

#[test]
fn locked_propagation_agrees_everywhere() {
    let zs = TensorSet::<Z>::standard();
    let mut nets = Vec::new();
    for n in 1..=3 {
        nets.push(pyramid(n, &z(1), &zs).unwrap());
    }
    for n in [1, 2] {
        nets.push(hrn_open(n, &zs).unwrap());
        nets.push(u1_mera(n, &zs).unwrap());
        for k in -(2 * n as i64)..=2 * n as i64 {
            let (p, q) = periodic_boundary(n, k).unwrap();
            nets.push(hrn_periodic(n, p, q, &zs).unwrap());
        }
    }
    for net in &nets {
        let full = contract_full(net).unwrap();
        for c in all_configs(net.n_physical(), &[-1, 0, 1]) {
            let out = locked_propagate(net, &c).unwrap();
            assert_eq!(out.violation, None);
            assert_eq!(out.value, full.get(&c));
            let labelings = internal_labelings(net, &c, 2).unwrap();
            assert_eq!(labelings.len(), usize::from(!full.get(&c).is_zero()));
        }
    }
}

#[test]
fn u1_locked_count_at_four_sites() {
    let zs = TensorSet::<Z>::standard();
    let net = u1_mera(2, &zs).unwrap();
    let locked = all_configs(4, &[-1, 0, 1])
        .into_iter()
        .filter(|c| c.sum() == 0)
        .filter(|c| internal_labelings(&net, c, 2).unwrap().len() == 1)
        .count();
    assert_eq!(locked, 19);
}

fn shuffle(order: &mut [usize], seed: u64) {
    let mut s = seed | 1;
    for i in (1..order.len()).rev() {
        s ^= s << 13;
        s ^= s >> 7;
        s ^= s << 17;
        order.swap(i, (s % (i as u64 + 1)) as usize);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn any_order_gives_same_state(seed in any::<u64>(), which in 0usize..4) {
        let zs = TensorSet::<Z>::standard();
        let net = match which {
            0 => pyramid(2, &z(2), &zs).unwrap(),
            1 => hrn_open(2, &zs).unwrap(),
            2 => u1_mera(2, &zs).unwrap(),
            _ => hrn_periodic(2, 4, 3, &zs).unwrap(),
        };
        let mut order = contraction_plan(&net).order;
        shuffle(&mut order, seed);
        let a: StateVector<Z> = contract_full(&net).unwrap();
        prop_assert_eq!(contract_with_order(&net, &order).unwrap(), a);
    }
}
