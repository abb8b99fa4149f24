//! Byte-exact regression of the sweep/CSV pipeline against a frozen
//! fixture: same scenario, same seed, same bytes. Any change to the
//! simulator's random streams, the solver discretization, or the CSV
//! formatting shows up here.

use barychan::harness::{run_sweep, write_csv, SweepParameter, SweepSpec};
use barychan::model::{
    Medium, PbsParams, Point3, ReceiverGeometry, Scenario, TimeGrid, Transmitter,
};

const GOLDEN: &str = include_str!("fixtures/omega_sweep_golden.csv");

#[test]
fn omega_sweep_reproduces_frozen_csv() {
    let base = Scenario {
        medium: Medium { diffusion_um2_per_s: 79.4 },
        transmitter: Transmitter { position_um: Point3::ORIGIN, released_molecules: 2_000 },
        receivers: vec![
            ReceiverGeometry { id: "R1".into(), center_um: [6.0, 0.0, 0.0].into(), radius_um: 1.0 },
            ReceiverGeometry { id: "R2".into(), center_um: [4.0, 0.0, 0.0].into(), radius_um: 1.0 },
        ],
        time_grid: TimeGrid { t_end_s: 1.0, dt_solver_s: 2e-3, output_times_s: vec![1.0] },
        pbs: Some(PbsParams { dt_s: 1e-4, trials: 3, seed: 42 }),
    };
    let spec = SweepSpec {
        base,
        parameter: SweepParameter::OmegaDeg { center_distance_um: 4.0 },
        values: vec![0.0, 90.0, 180.0],
    };
    let rows = run_sweep(&spec).unwrap();
    let mut buf = Vec::new();
    write_csv(&rows, &mut buf).unwrap();
    assert_eq!(String::from_utf8(buf).unwrap(), GOLDEN);
}
