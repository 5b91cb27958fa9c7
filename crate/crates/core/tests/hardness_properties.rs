mod common;

use chaos_itineraries::cycles::{find_cycles, Itinerary};
use chaos_itineraries::hardness::{
    adversarial_sample, build_need_concavity, build_need_symmetry, certify_against_candidate,
    direct_certificate, increasing_certificate, increasing_certificate_for_map, stefan_certificate,
    three_piece_approximant, MIN_WIDTH_INCREASING,
};
use chaos_itineraries::spectra::{rho_inc, GOLDEN_RATIO};
use chaos_itineraries::{MapFamily, PiecewiseLinear, Rat};
use common::arb_pl;
use proptest::prelude::*;

/// Fraction of sample points on opposite sides of `t`, computed directly.
fn disagreement(f: &PiecewiseLinear, g: &PiecewiseLinear, pts: &[Rat], t: &Rat) -> Rat {
    let bad = pts
        .iter()
        .filter(|x| (f.eval(x).unwrap() >= *t) != (g.eval(x).unwrap() >= *t))
        .count();
    Rat::new(bad as i64, pts.len() as i64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn counting_bound_holds_for_any_pl(g in arb_pl(12)) {
        let k = 8;
        let tent = MapFamily::tent(Rat::one()).unwrap();
        let fk = tent.to_pl().unwrap().iterate(k).unwrap();
        let cert = direct_certificate(&tent, k, &Rat::zero(), &Rat::one(), 2.0).unwrap();
        let s = adversarial_sample(&fk, &cert).unwrap();
        let n = s.len() as i64;
        let cls = disagreement(&fk, &g, s.points(), s.threshold());
        prop_assert_eq!(&cls, &fk.classification_error(&g, &s).unwrap());
        let floor = Rat::half() - Rat::new(g.monotone_pieces() as i64, n);
        prop_assert!(cls >= floor);
        let rep = certify_against_candidate(&fk, &g, &cert, &s).unwrap();
        prop_assert!(rep.ok(), "{:?}", rep.violations);
    }

    #[test]
    fn certificates_revalidate(num in 53i64..=64, k in 4usize..=9) {
        let m = MapFamily::tent(Rat::new(num, 64)).unwrap();
        if let Ok(cert) = increasing_certificate_for_map(&m, 3, k) {
            prop_assert!(cert.revalidate(&m).unwrap());
            prop_assert!(cert.width >= 1.0 / 18.0);
            prop_assert!(cert.count as f64 >= cert.required);
        }
    }
}

#[test]
fn tent_corollary_cycles() {
    for p in 3..=5 {
        let r = rho_inc(p).unwrap() / 2.0;
        let m = MapFamily::tent(Rat::from_f64(r).unwrap()).unwrap();
        let mut orbit = vec![0.5];
        for _ in 0..p {
            orbit.push(m.eval_f64(*orbit.last().unwrap()));
        }
        assert!((orbit[p] - 0.5).abs() <= 1e-9, "p={p}");
        assert_eq!(
            Itinerary::from_orbit(&orbit[..p]).unwrap(),
            Itinerary::increasing(p)
        );
    }
}

#[test]
fn counterexample_contrast() {
    let eps = Rat::new(1, 100);
    for f in [
        build_need_symmetry(3, &eps).unwrap(),
        build_need_concavity(3, &eps).unwrap(),
    ] {
        let f10 = f.iterate(10).unwrap();
        let g = three_piece_approximant(&f10).unwrap();
        assert!(g.num_pieces() <= 3);
        assert!(f10.linf_diff(&g) <= eps);
    }
    let logistic = MapFamily::logistic(0.9580).unwrap();
    let cycles = find_cycles(&logistic, 3).unwrap();
    let three = cycles.iter().find(|c| c.period == 3).unwrap();
    let cert = increasing_certificate(&logistic, three, 10).unwrap();
    assert!(cert.width >= MIN_WIDTH_INCREASING);
    assert!(cert.count as f64 >= GOLDEN_RATIO.powi(10) / 2.0);
    assert!(cert.count > 60);
    let stefan = stefan_certificate(&logistic, three, 10).unwrap();
    assert!(stefan.revalidate(&logistic).unwrap());
}
