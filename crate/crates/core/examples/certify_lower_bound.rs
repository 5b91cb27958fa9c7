//! Oscillation certificates and the error floors they force on any
//! approximant with few pieces.

use chaos_itineraries::cycles::find_cycles;
use chaos_itineraries::hardness::{
    adversarial_sample, certify_against_candidate, direct_certificate,
    increasing_certificate_for_map, least_squares_pl, stefan_certificate, width_threshold,
    ErrorMode,
};
use chaos_itineraries::{MapFamily, Rat};

fn main() -> chaos_itineraries::Result<()> {
    let k = 10;
    let tent = MapFamily::tent(Rat::one())?;
    let cert = increasing_certificate_for_map(&tent, 3, k)?;
    println!("{}", cert.to_json());

    let full = direct_certificate(&tent, k, &Rat::zero(), &Rat::one(), 2.0)?;
    let fk = tent.to_pl()?.iterate(k)?;
    let s = adversarial_sample(&fk, &full)?;
    for pieces in [4, 16, 64] {
        let g = least_squares_pl(&fk, pieces, 4097)?;
        let rep = certify_against_candidate(&fk, &g, &full, &s)?;
        println!(
            "least squares, {pieces:>2} pieces: sup error {:.4}, classification error {} (floor {})",
            rep.linf.to_f64(),
            rep.cls_error,
            rep.cls_floor
        );
    }

    for mode in [ErrorMode::Linf, ErrorMode::L1] {
        println!("{:?}", width_threshold(3, k, 2, mode)?);
    }

    let logistic = MapFamily::logistic(0.9580)?;
    let three = find_cycles(&logistic, 3)?
        .into_iter()
        .find(|c| c.period == 3)
        .expect("3-cycle");
    let cert = stefan_certificate(&logistic, &three, k)?;
    println!(
        "Stefan certificate on [{:.4}, {:.4}]: {} crossings",
        cert.a, cert.b, cert.count
    );
    Ok(())
}
