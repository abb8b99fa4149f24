//! Five receivers around one transmitter: analytic barycenter model versus
//! the centered baseline for every receiver at the final output time.
//!
//! Run with: cargo run --example five_receivers

use barychan::barycenter::compose_barycenters;
use barychan::harness::load_scenario;
use barychan::solver::{solve_centered, solve_simo};

fn main() -> anyhow::Result<()> {
    let scenario = load_scenario(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/scenarios/five_receivers.json"
    ))?;

    let t = 2.0;
    let barycenters = compose_barycenters(&scenario, t)?;
    let with_bary = solve_simo(&scenario, &barycenters)?;
    let centered = solve_centered(&scenario, t)?;

    println!("t = {t} s");
    println!("{:>4} {:>10} {:>14} {:>14}", "rx", "d_tx [µm]", "N barycenter", "N centered");
    let mut total = 0.0;
    for (i, rcv) in scenario.receivers().iter().enumerate() {
        total += with_bary.final_cumulative(i);
        println!(
            "{:>4} {:>10.3} {:>14.2} {:>14.2}",
            rcv.id,
            scenario.tx_distance(i),
            with_bary.final_cumulative(i),
            centered.final_cumulative(i)
        );
    }
    let n_t = scenario.transmitter().released_molecules as f64;
    println!("\ntotal absorbed: {total:.1} of {n_t} released ({:.1}%)", 100.0 * total / n_t);
    Ok(())
}
