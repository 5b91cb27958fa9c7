//! Long-run orbit clouds across a parameter sweep.

use chaos_itineraries::experiments::bifurcation::{clusters, slice, sweep, BifurcationSpec};
use chaos_itineraries::MapFamily;

fn main() -> chaos_itineraries::Result<()> {
    for r in [0.70, 0.8090, 0.8671, 0.9580, 1.0] {
        let xs = slice(&MapFamily::logistic(r)?, 500, 200)?;
        println!("r={r:.4}: {} clusters", clusters(&xs, 1e-3).len());
    }
    let spec = BifurcationSpec {
        steps: 50,
        ..BifurcationSpec::default()
    };
    let cloud = sweep(&spec)?;
    println!("{} slices of {} points", cloud.len(), cloud[0].1.len());
    Ok(())
}
