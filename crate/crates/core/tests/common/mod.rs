#![allow(dead_code)]

use chaos_itineraries::{PiecewiseLinear, Rat};
use proptest::prelude::*;

pub const DEN: i64 = 64;

/// Continuous PL self-map of [0,1] with knots on a 1/64 grid.
pub fn arb_pl(max_interior: usize) -> impl Strategy<Value = PiecewiseLinear> {
    (
        prop::collection::btree_set(1..DEN, 0..=max_interior),
        prop::collection::vec(0..=DEN, max_interior + 2),
    )
        .prop_map(|(xs, ys)| {
            let mut grid = vec![0];
            grid.extend(xs);
            grid.push(DEN);
            let knots = grid
                .iter()
                .zip(ys)
                .map(|(&x, y)| (Rat::new(x, DEN), Rat::new(y, DEN)))
                .collect();
            PiecewiseLinear::new(knots).expect("valid grid PL")
        })
}

/// Unimodal PL with `f(0) = f(1) = 0`, used where iteration must stay small.
pub fn arb_unimodal(max_side: usize) -> impl Strategy<Value = PiecewiseLinear> {
    (
        2..DEN - 1,
        1..=DEN,
        prop::collection::vec(1..DEN, 0..=max_side),
        prop::collection::vec(1..DEN, 0..=max_side),
    )
        .prop_map(|(apex, top, left, right)| {
            let mut knots = vec![(Rat::zero(), Rat::zero())];
            let mut lx: Vec<i64> = left.into_iter().map(|v| 1 + v % (apex - 1)).collect();
            lx.sort();
            lx.dedup();
            for (i, x) in lx.iter().enumerate() {
                let y = top * (i as i64 + 1) / (lx.len() as i64 + 1);
                knots.push((Rat::new(*x, DEN), Rat::new(y.max(0), DEN)));
            }
            knots.push((Rat::new(apex, DEN), Rat::new(top, DEN)));
            let mut rx: Vec<i64> = right
                .into_iter()
                .map(|v| apex + 1 + v % (DEN - apex - 1).max(1))
                .filter(|x| *x < DEN)
                .collect();
            rx.sort();
            rx.dedup();
            for (i, x) in rx.iter().enumerate() {
                let y = top * (rx.len() - i) as i64 / (rx.len() as i64 + 1);
                knots.push((Rat::new(*x, DEN), Rat::new(y, DEN)));
            }
            knots.push((Rat::one(), Rat::zero()));
            PiecewiseLinear::new(knots).expect("valid unimodal PL")
        })
}

pub fn arb_unit_rat() -> impl Strategy<Value = Rat> {
    (1i64..1000).prop_flat_map(|d| (0..=d).prop_map(move |n| Rat::new(n, d)))
}

/// `f^k(x)` by repeated evaluation, never forming the iterate.
pub fn orbit_value(f: &PiecewiseLinear, x: &Rat, k: usize) -> Rat {
    (0..k).fold(x.clone(), |y, _| f.eval(&y).expect("in domain"))
}
