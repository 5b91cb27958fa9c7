//! Maps with an increasing 3-cycle whose iterates all stay within 1/10 of a
//! three-piece function: one concave but asymmetric, one symmetric but not
//! concave.

use chaos_itineraries::hardness::{
    build_need_concavity, build_need_symmetry, three_piece_approximant,
};
use chaos_itineraries::relunet::synth_from_pl;
use chaos_itineraries::{PiecewiseLinear, Rat};

fn main() -> chaos_itineraries::Result<()> {
    let eps = Rat::new(1, 10);
    for (name, f) in [
        ("need_symmetry", build_need_symmetry(3, &eps)?),
        ("need_concavity", build_need_concavity(3, &eps)?),
    ] {
        println!(
            "{name}: concave={} symmetric={}",
            f.is_concave(),
            f.is_symmetric()
        );
        let mut fk = PiecewiseLinear::identity();
        for k in 1..=8 {
            fk = PiecewiseLinear::compose(&fk, &f);
            let g = three_piece_approximant(&fk)?;
            println!(
                "  k={k}: {} pieces, sup error {}",
                fk.num_pieces(),
                fk.linf_diff(&g)
            );
        }
        let net = synth_from_pl(&three_piece_approximant(&fk)?);
        println!("  network: width {} depth {}", net.width(), net.depth());
    }
    Ok(())
}
