use motzkin::hamiltonian::{
    annihilation_residual, build_hamiltonian, dense_vector, index_config, term_residuals,
    ChainBoundary, SparseHamiltonian,
};
use motzkin::json::{state_from_json, state_to_json, StateJson};
use motzkin::spectrum::schmidt_weights_svd;
use motzkin_core::contraction::contract_full;
use motzkin_core::network::pyramid;
use motzkin_core::schmidt::{entanglement_entropy, schmidt_spectrum_exact};
use motzkin_core::{SiteKind, SpinConfig, StateVector, TensorSet};
use num_rational::BigRational;
use num_traits::One;
use proptest::prelude::*;

type Q = BigRational;

fn rational() -> impl Strategy<Value = Q> {
    (1i64..=6, 1i64..=6).prop_map(|(n, d)| Q::new(n.into(), d.into()))
}

fn boundary() -> impl Strategy<Value = ChainBoundary> {
    prop_oneof![Just(ChainBoundary::Open), Just(ChainBoundary::Periodic)]
}

fn ground_state(n: usize, t: &Q) -> StateVector<Q> {
    contract_full(&pyramid(n, t, &TensorSet::<Q>::standard()).unwrap()).unwrap()
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn hamiltonian(sites: usize, t: &Q, b: ChainBoundary) -> SparseHamiltonian {
    build_hamiltonian(sites, t, b).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn hamiltonian_is_psd_and_symmetric(n in 1usize..=2, t in rational(), b in boundary()) {
        let h = hamiltonian(2 * n, &t, b);
        prop_assert!(h.asymmetry() < 1e-12);
        let min = h.eigenvalues().unwrap().into_iter().fold(f64::INFINITY, f64::min);
        prop_assert!(min > -1e-9, "min eigenvalue {min}");
    }

    #[test]
    fn terms_are_projectors(n in 1usize..=3, t in rational(), b in boundary(), seed in any::<u64>()) {
        let h = hamiltonian(2 * n, &t, b);
        let dim = h.dimension();
        let v: Vec<f64> = (0..dim)
            .map(|i| ((seed.wrapping_mul(i as u64 + 1) >> 11) % 1000) as f64 / 500.0 - 1.0)
            .collect();
        for k in 0..h.terms().len() {
            let once = h.apply_term(k, &v);
            let twice = h.apply_term(k, &once);
            let err = once.iter().zip(&twice).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            prop_assert!(err < 1e-12, "term {k}: {err}");
            // projector: <v, P v> = |P v|^2
            prop_assert!((dot(&v, &once) - dot(&once, &once)).abs() < 1e-9);
        }
    }

    #[test]
    fn ground_state_is_frustration_free(n in 1usize..=3, t in rational()) {
        let h = hamiltonian(2 * n, &t, ChainBoundary::Open);
        let st = ground_state(n, &t);
        for (k, r) in term_residuals(&h, &st).unwrap().into_iter().enumerate() {
            prop_assert!(r < 1e-12, "term {k}: {r}");
        }
    }

    #[test]
    fn other_states_are_not_annihilated(n in 1usize..=3, t in rational(), pick in any::<prop::sample::Index>()) {
        let h = hamiltonian(2 * n, &t, ChainBoundary::Open);
        // the unique ground state has at least two configurations, so no
        // single basis state is annihilated
        let dim = 3usize.pow(2 * n as u32);
        let idx = pick.index(dim);
        let config = index_config(idx, 2 * n);
        let mut st = StateVector::new(2 * n, SiteKind::SpinOne);
        st.accumulate(config.clone(), Q::one());
        let r = annihilation_residual(&h, &st).unwrap();
        prop_assert!(r > 1e-6, "{config:?} residual {r}");
        let v = dense_vector(&st, 2 * n).unwrap();
        prop_assert!(dot(&v, &h.matvec(&v)) >= -1e-12);
    }

    #[test]
    fn schmidt_spectrum_is_consistent(n in 1usize..=4, t in rational(), cut_frac in 0usize..=8) {
        let st = ground_state(n, &t);
        let cut = cut_frac * 2 * n / 8;
        let exact = schmidt_spectrum_exact(&st, cut).unwrap();
        prop_assert_eq!(exact.total(), Q::one());
        let s = exact.entropy();
        prop_assert!(s >= -1e-12 && s <= (exact.rank() as f64).ln() + 1e-12);
        let svd = schmidt_weights_svd(&st, cut).unwrap();
        prop_assert_eq!(svd.len(), exact.rank());
        prop_assert!((entanglement_entropy(&svd) - s).abs() < 1e-9);
        prop_assert!((svd.iter().sum::<f64>() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn state_json_round_trips(entries in prop::collection::btree_map(
        prop::collection::vec(-1i8..=1, 4),
        (-9i64..=9, 1i64..=9),
        0..12,
    )) {
        let mut st = StateVector::<Q>::new(4, SiteKind::SpinOne);
        for (c, (num, den)) in entries {
            st.accumulate(SpinConfig(c), Q::new(num.into(), den.into()));
        }
        let text = serde_json::to_string(&state_to_json(&st)).unwrap();
        let parsed: StateJson = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(state_from_json::<Q>(&parsed).unwrap(), st);
    }
}
