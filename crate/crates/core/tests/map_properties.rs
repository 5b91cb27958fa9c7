use chaos_itineraries::{MapFamily, Rat};
use proptest::prelude::*;

fn families(r: f64) -> Vec<MapFamily> {
    let exact_r = Rat::from_f64(r).unwrap();
    vec![
        MapFamily::tent(exact_r.clone()).unwrap(),
        MapFamily::logistic(r).unwrap(),
        MapFamily::sine(r).unwrap(),
        MapFamily::flat_tent(exact_r).unwrap(),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn smooth_preimages_are_sound(r in 0.05f64..=1.0, y in 0.0f64..=1.0) {
        for m in [MapFamily::logistic(r).unwrap(), MapFamily::sine(r).unwrap()] {
            let pre = m.preimages_f64(y);
            prop_assert!(pre.len() <= 2);
            for x in &pre {
                prop_assert!((m.eval_f64(*x) - y).abs() <= 1e-12);
            }
            prop_assert!(pre.iter().filter(|x| **x < 0.5).count() <= 1);
        }
    }

    #[test]
    fn tent_preimages_are_exact(num in 1i64..=64, yn in 0i64..=1000) {
        let m = MapFamily::tent(Rat::new(num, 64)).unwrap();
        let y = Rat::new(yn, 1000);
        for x in m.preimages_exact(&y).unwrap() {
            prop_assert_eq!(m.eval_exact(&x).unwrap(), y.clone());
        }
    }

    #[test]
    fn to_pl_agrees_with_eval(num in 1i64..=64, xn in 0i64..=997) {
        for m in [MapFamily::tent(Rat::new(num, 64)).unwrap(), MapFamily::flat_tent(Rat::new(num, 64)).unwrap()] {
            let x = Rat::new(xn, 997);
            prop_assert_eq!(m.to_pl().unwrap().eval(&x).unwrap(), m.eval_exact(&x).unwrap());
        }
    }

    #[test]
    fn symmetric_families(r in 0.05f64..=1.0, x in 0.0f64..=1.0) {
        for m in families(r).into_iter().take(3) {
            prop_assert!((m.eval_f64(x) - m.eval_f64(1.0 - x)).abs() <= 1e-15);
        }
    }
}

#[test]
fn unimodality_audit_over_parameters() {
    for i in 1..=20 {
        let r = i as f64 / 20.0;
        for m in families(r) {
            m.audit().unwrap();
            assert_eq!(m.eval_f64(0.0), 0.0);
            assert!(m.eval_f64(1.0).abs() < 1e-15);
            assert!((1..=100).all(|j| m.eval_f64(j as f64 / 101.0) > 0.0), "{m}");
        }
    }
}
