//! Growth of monotone pieces `M(f^k)` and the entropy estimate.

use chaos_itineraries::oscillation::{count_monotone_series, entropy_estimate};
use chaos_itineraries::{MapFamily, Rat};

fn main() -> chaos_itineraries::Result<()> {
    let k_max = 14;
    let maps = [
        MapFamily::logistic(0.8090)?,
        MapFamily::logistic(0.8671)?,
        MapFamily::logistic(0.9580)?,
        MapFamily::tent(Rat::one())?,
    ];
    for m in &maps {
        let counts = count_monotone_series(m, k_max)?;
        let h = entropy_estimate(m, k_max)?;
        println!("{m}");
        println!("  M(f^k), k=1..{k_max}: {counts:?}");
        println!(
            "  entropy ~ {:.4} (ratio form {:.4})",
            h.entropy(),
            h.ratio_entropy()
        );
    }
    Ok(())
}
