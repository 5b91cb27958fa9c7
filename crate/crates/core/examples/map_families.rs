//! The built-in unimodal families and their critical orbits.

use chaos_itineraries::{MapFamily, Rat};

fn main() -> chaos_itineraries::Result<()> {
    let maps = [
        MapFamily::tent(Rat::new(4, 5))?,
        MapFamily::logistic(0.9580)?,
        MapFamily::sine(0.9)?,
        MapFamily::flat_tent(Rat::new(9, 10))?,
    ];
    for m in &maps {
        let audit = m.audit()?;
        let orbit = m.critical_orbit(6)?;
        println!("{m}");
        println!(
            "  exact: {}  symmetric: {}  concave: {}",
            m.is_exact(),
            m.is_symmetric(),
            m.is_concave()
        );
        println!("  audit: {audit:?}");
        println!("  f(0.3) = {:.6}", m.eval_f64(0.3));
        println!("  preimages of 0.5: {:?}", m.preimages_f64(0.5));
        println!("  critical orbit: {orbit:?}");
    }
    Ok(())
}
