//! ReLU networks from piecewise-linear maps: exact synthesis, deep stacks
//! and the width a shallow network needs.

use chaos_itineraries::relunet::{
    depth_width_demo, eps_approx, net_to_pl, stack, synth_from_pl, ReluNetwork,
};
use chaos_itineraries::{PiecewiseLinear, Rat};

fn main() -> chaos_itineraries::Result<()> {
    let block = ReluNetwork::tent_block();
    let deep = stack(&block, 6)?;
    let tent = PiecewiseLinear::tent(&Rat::one())?;
    assert_eq!(net_to_pl(&deep)?, tent.iterate(6)?);
    println!(
        "tent^6 as a stack: width {}, depth {}",
        deep.width(),
        deep.depth()
    );

    let shallow = synth_from_pl(&tent.iterate(6)?);
    println!("tent^6 in one hidden layer: width {}", shallow.width());

    let f = PiecewiseLinear::tent(&Rat::new(15, 16))?;
    for k in [4, 8] {
        let d = depth_width_demo(&f, k)?;
        println!("{d:?}");
    }

    let fk = f.iterate(8)?;
    let g = eps_approx(&fk, &Rat::new(1, 8))?;
    println!(
        "1/8-approximation of f^8: {} pieces, sup error {}",
        g.num_pieces(),
        fk.linf_diff(&g)
    );
    println!(
        "{}",
        serde_json::to_string(&ReluNetwork::tent_block()).expect("serializable")
    );
    Ok(())
}
