//! The dimensionless barycenter shift γ as a function of source distance
//! and observation time: γ → 1 puts the barycenter on the surface facing
//! the source, γ → 0 leaves it at the center.
//!
//! Run with: cargo run --example gamma_table

use barychan::barycenter::{gamma, GammaInputs};

fn main() -> barychan::Result<()> {
    let radius = 1.0;
    let diffusion = 79.4;
    let times = [0.1, 0.5, 1.0, 2.0];

    print!("{:>8}", "d [µm]");
    for t in times {
        print!(" {:>9}", format!("t={t}"));
    }
    println!();

    for d in [2.0, 3.0, 4.0, 6.0, 8.0, 10.0, 12.0] {
        print!("{:>8.1}", d);
        for t in times {
            let g = gamma(&GammaInputs::new(d, radius, diffusion, t)?)?;
            print!(" {:>9.5}", g);
        }
        println!();
    }
    Ok(())
}
