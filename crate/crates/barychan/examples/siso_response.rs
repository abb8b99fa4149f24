//! Closed-form response of a single fully absorbing receiver: hitting rate
//! and expected cumulative absorbed count over time.
//!
//! Run with: cargo run --example siso_response

use barychan::analytic::SisoChannel;

fn main() -> barychan::Result<()> {
    let n_t = 1e4; // released molecules
    let channel = SisoChannel::new(6.0, 1.0, 79.4)?; // d = 6 µm, R = 1 µm

    println!("{:>6} {:>14} {:>12}", "t [s]", "rate [1/s]", "N absorbed");
    for k in 1..=20 {
        let t = 0.1 * k as f64;
        println!(
            "{:>6.1} {:>14.3} {:>12.2}",
            t,
            n_t * channel.hitting_rate(t),
            channel.cum_absorbed(t, n_t)
        );
    }

    // the response saturates at the hitting probability R/d
    println!("\nhitting probability R/d = {:.4}", 1.0 / 6.0);
    println!("N(t→∞)/N_T            ≈ {:.4}", channel.cum_absorbed(1e4, n_t) / n_t);
    Ok(())
}
