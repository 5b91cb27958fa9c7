mod common;

use chaos_itineraries::relunet::{
    depth_width_demo, eps_approx, net_to_pl, stack, synth_from_pl, ReluNetwork,
};
use chaos_itineraries::spectra::rho_inc;
use chaos_itineraries::{PiecewiseLinear, Rat};
use common::{arb_pl, arb_unimodal};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn synthesis_round_trips(f in arb_pl(12)) {
        let net = synth_from_pl(&f);
        prop_assert!(net.width() <= f.num_pieces());
        prop_assert_eq!(net_to_pl(&net).unwrap(), f.clone());
        let text = serde_json::to_string(&net).unwrap();
        let back: ReluNetwork = serde_json::from_str(&text).unwrap();
        prop_assert_eq!(net_to_pl(&back).unwrap(), f);
    }

    #[test]
    fn eps_approx_contract(f in arb_pl(12), e in prop::sample::select(vec![4i64, 16, 64])) {
        let eps = Rat::new(1, e);
        let g = eps_approx(&f, &eps).unwrap();
        prop_assert!(f.linf_diff(&g) <= eps);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn stacking_commutes_with_iteration(f in arb_unimodal(3), k in 1usize..=8) {
        let block = synth_from_pl(&f);
        prop_assume!(block.width() <= 8);
        let deep = stack(&block, k).unwrap();
        prop_assert_eq!(deep.width(), block.width());
        prop_assert_eq!(deep.depth(), block.depth() * k);
        prop_assert_eq!(net_to_pl(&deep).unwrap(), f.iterate(k).unwrap());
    }
}

#[test]
fn tent_block_stacks() {
    let tent = PiecewiseLinear::tent(&Rat::one()).unwrap();
    for k in 1..=10 {
        let deep = stack(&ReluNetwork::tent_block(), k).unwrap();
        assert_eq!(net_to_pl(&deep).unwrap(), tent.iterate(k).unwrap());
        let shallow = synth_from_pl(&tent.iterate(k).unwrap());
        assert!(shallow.width().abs_diff(1 << k) <= 1);
    }
}

#[test]
fn depth_beats_width_at_k8() {
    let f = PiecewiseLinear::tent(&Rat::dyadic_ceil(rho_inc(4).unwrap() / 2.0, 8)).unwrap();
    let d = depth_width_demo(&f, 8).unwrap();
    assert!(d.deep_width <= 4 * f.monotone_pieces());
    assert_eq!(d.deep_depth, 16);
    assert_eq!(d.shallow_width, d.monotone_pieces_fk);
    assert!(d.monotone_pieces_fk as f64 >= 0.5 * rho_inc(4).unwrap().powi(8));
}
