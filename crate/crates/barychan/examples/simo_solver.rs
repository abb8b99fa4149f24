//! Numerical solve of the coupled absorption system for two receivers,
//! with the negative sources at the analytic barycenters versus the naive
//! centered placement.
//!
//! Run with: cargo run --example simo_solver

use barychan::barycenter::compose_barycenters;
use barychan::harness::load_scenario;
use barychan::solver::{solve_centered, solve_simo};

fn main() -> anyhow::Result<()> {
    let scenario = load_scenario(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/scenarios/two_receivers.json"
    ))?;

    println!(
        "{:>6} {:>4} {:>14} {:>14}",
        "t [s]", "rx", "N barycenter", "N centered"
    );
    for &t in &scenario.time_grid().output_times_s {
        let barycenters = compose_barycenters(&scenario, t)?;
        let with_bary = solve_simo(&scenario, &barycenters)?;
        let centered = solve_centered(&scenario, t)?;
        for (i, rcv) in scenario.receivers().iter().enumerate() {
            println!(
                "{:>6.2} {:>4} {:>14.2} {:>14.2}",
                t,
                rcv.id,
                with_bary.final_cumulative(i),
                centered.final_cumulative(i)
            );
        }
    }
    Ok(())
}
