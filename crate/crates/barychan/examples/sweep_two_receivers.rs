//! Sweep the angular position Ω of a second receiver around the first and
//! emit the analytic / centered / simulated comparison as CSV.
//!
//! Run with: cargo run --release --example sweep_two_receivers

use barychan::harness::{load_scenario, run_sweep, write_csv, SweepParameter, SweepSpec};
use barychan::model::PbsParams;

fn main() -> anyhow::Result<()> {
    let mut base = load_scenario(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/scenarios/two_receivers.json"
    ))?
    .into_scenario();
    // small ensemble so the example finishes quickly
    base.pbs = Some(PbsParams { dt_s: 1e-4, trials: 3, seed: 11 });

    let spec = SweepSpec {
        base,
        parameter: SweepParameter::OmegaDeg { center_distance_um: 2.0 },
        values: vec![0.0, 45.0, 90.0, 135.0, 180.0],
    };
    let rows = run_sweep(&spec)?;
    write_csv(&rows, std::io::stdout().lock())?;
    Ok(())
}
