//! Weak VC bounds from the regular-expression calculus, the doubling
//! bound, and an explicit shattered set for the full tent map.

use chaos_itineraries::vcbounds::{doubling_vc_bound, shatter, vcw_bound, RegexExpr};
use chaos_itineraries::{MapFamily, Rat};

fn main() -> chaos_itineraries::Result<()> {
    for text in ["1*0(01)^∞ ∪ 10^∞", "0^∞", "(01)^∞ ⊕ 1^∞", "0*1^∞"] {
        let e: RegexExpr = text.parse()?;
        println!("{e}: bound {}", vcw_bound(&e));
    }
    for p in [2, 4, 8] {
        println!(
            "doubling regime with {p}-cycles: VC dim <= {}",
            doubling_vc_bound(p)?
        );
    }

    let tent = MapFamily::tent(Rat::one())?;
    let w = shatter(&tent, 3, 2)?;
    println!(
        "points {:?}",
        w.points.iter().map(|x| x.to_string()).collect::<Vec<_>>()
    );
    println!("labeling -> k: {:?}", w.table);
    println!("verified: {}", w.verify(&tent)?);
    Ok(())
}
