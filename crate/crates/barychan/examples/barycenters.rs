//! Composed barycenters of a two-receiver scenario: where each receiver's
//! negative point source ends up once the pull of the transmitter and the
//! push of the neighbor are combined with the gravitation-style weights.
//!
//! Run with: cargo run --example barycenters

use barychan::barycenter::{compose_barycenters, zeta_weights};
use barychan::harness::load_scenario;

fn main() -> anyhow::Result<()> {
    let scenario = load_scenario(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/scenarios/two_receivers.json"
    ))?;

    for t in [0.5, 1.0, 2.0] {
        let set = compose_barycenters(&scenario, t)?;
        println!("t = {t} s");
        for (i, b) in set.receivers.iter().enumerate() {
            let z = zeta_weights(i, &scenario);
            let c = scenario.receivers()[i].center_um;
            println!(
                "  {}: B = ({:+.4}, {:+.4}, {:+.4})  |B - C| = {:.4} µm  ζ_self = {:.3}",
                b.receiver_id,
                b.position.x,
                b.position.y,
                b.position.z,
                b.position.distance(&c),
                z.self_weight,
            );
            println!(
                "      transmitter pull → ({:+.4}, {:+.4}, {:+.4})",
                b.from_tx.x, b.from_tx.y, b.from_tx.z
            );
            for (j, p) in &b.from_rx {
                println!(
                    "      push from {} → ({:+.4}, {:+.4}, {:+.4})",
                    scenario.receivers()[*j].id,
                    p.x,
                    p.y,
                    p.z
                );
            }
        }
    }
    Ok(())
}
