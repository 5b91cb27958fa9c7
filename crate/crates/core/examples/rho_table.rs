//! Characteristic roots, the transition matrix and crossing vectors.

use chaos_itineraries::spectra::{
    crossing_lb_vector, rho_table, rho_table_csv, spectral_radius, transition_matrix,
};

fn main() -> chaos_itineraries::Result<()> {
    print!("{}", rho_table_csv(&rho_table(3..=10)?)?);

    let a = transition_matrix(5)?;
    println!("\nA_5 = {:?}", a.entries);
    println!("spectral radius {:.12}", spectral_radius(&a)?);
    for k in [1, 5, 10] {
        let y = crossing_lb_vector(5, k)?;
        println!("y^({k}) = {:?}", y.y);
    }
    Ok(())
}
