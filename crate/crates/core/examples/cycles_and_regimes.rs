//! Periodic orbits, their itineraries, and the doubling/chaotic split.

use chaos_itineraries::cycles::{
    classify_regime, find_cycles, superstable_r, Itinerary, FORCING_TABLE,
};
use chaos_itineraries::maps::MapKind;
use chaos_itineraries::MapFamily;

fn main() -> chaos_itineraries::Result<()> {
    for r in [0.8090, 0.8671, 0.9580, 0.9901] {
        let m = MapFamily::logistic(r)?;
        let cycles = find_cycles(&m, 8)?;
        let regime = classify_regime(&cycles, 8);
        let itins: Vec<String> = cycles.iter().map(|c| c.itinerary.to_string()).collect();
        println!(
            "logistic r={r}: {:?} via {} | cycles {}",
            regime.regime,
            regime.witness,
            itins.join(" ")
        );
    }

    for p in [3, 5, 7] {
        println!("Stefan itinerary, p={p}: {}", Itinerary::stefan(p)?);
    }

    println!("\nsuper-stable parameters");
    for row in FORCING_TABLE.iter().take(6) {
        let r = superstable_r(MapKind::Logistic, &row.itinerary(), row.bracket())?;
        println!("  {:<8} {:.6}  (tabulated {:.4})", row.itinerary, r, row.r);
    }
    Ok(())
}
