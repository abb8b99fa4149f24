//! Coupled two-receiver response from the closed-form series solution,
//! compared with the isolated (uncoupled) response of each receiver.
//!
//! Run with: cargo run --example sito_series

use barychan::analytic::{cum_absorbed_siso, cum_absorbed_sito, SitoConfig};

fn main() -> barychan::Result<()> {
    let d = 79.4;
    let n_t = 1e4;

    // two equal receivers at 6 µm from the transmitter, 4 µm apart;
    // the negative sources sit at the centers here
    let cfg = SitoConfig {
        radius_1: 1.0,
        radius_2: 1.0,
        d_c1_tx: 6.0,
        d_c2_tx: 6.0,
        d_c1_b2: 4.0,
        d_c2_b1: 4.0,
        released_molecules: n_t,
        diffusion: d,
    };

    println!("{:>6} {:>12} {:>12} {:>12}", "t [s]", "N1 coupled", "N1 isolated", "lost to R2");
    for k in 1..=8 {
        let t = 0.25 * k as f64;
        let (n1, _n2) = cum_absorbed_sito(&cfg, t)?;
        let iso = cum_absorbed_siso(6.0, 1.0, d, t, n_t);
        println!("{:>6.2} {:>12.2} {:>12.2} {:>12.2}", t, n1, iso, iso - n1);
    }
    Ok(())
}
