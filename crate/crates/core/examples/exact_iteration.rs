//! Exact composition of piecewise-linear maps.
//!
//! Builds the full tent map, iterates it, and reports knots, monotone
//! pieces and crossings of the band [1/4, 3/4].

use chaos_itineraries::{PiecewiseLinear, Rat};

fn main() -> chaos_itineraries::Result<()> {
    let tent = PiecewiseLinear::tent(&Rat::one())?;
    let (lo, hi) = (Rat::new(1, 4), Rat::new(3, 4));
    println!("k  knots  monotone  crossings");
    for k in 1..=10 {
        let fk = tent.iterate(k)?;
        println!(
            "{k:<2} {:<6} {:<9} {}",
            fk.num_knots(),
            fk.monotone_pieces(),
            fk.crossings(&lo, &hi)?
        );
    }

    // Exact values survive composition: f^3(1/7) for the tent map.
    let x = Rat::new(1, 7);
    println!("tent^3(1/7) = {}", tent.iterate(3)?.eval(&x)?);

    let f = PiecewiseLinear::from_fracs(&[(0, 1, 0, 1), (1, 3, 1, 1), (1, 1, 0, 1)])?;
    println!("asymmetric map as JSON: {}", f.to_json());
    println!("sup |f - tent| = {}", f.linf_diff(&tent));
    Ok(())
}
