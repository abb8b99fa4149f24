//! Randomized property tests over the scenario model and the closed-form
//! channel responses.

use barychan::analytic::SisoChannel;
use barychan::harness::{write_csv, ComparisonRow};
use barychan::model::{
    Medium, Point3, ReceiverGeometry, Scenario, TimeGrid, Transmitter,
};
use proptest::prelude::*;

fn arbitrary_point() -> impl Strategy<Value = Point3> {
    (-20.0..20.0f64, -20.0..20.0f64, -20.0..20.0f64).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

proptest! {
    #[test]
    fn point_distance_is_symmetric_and_triangular(
        a in arbitrary_point(),
        b in arbitrary_point(),
        c in arbitrary_point(),
    ) {
        prop_assert!((a.distance(&b) - b.distance(&a)).abs() < 1e-12);
        prop_assert!(a.distance(&c) <= a.distance(&b) + b.distance(&c) + 1e-9);
    }

    #[test]
    fn scenario_json_round_trips(
        d in 2.5..15.0f64,
        radius in 0.5..1.2f64,
        n_t in 100u64..100_000,
    ) {
        let scenario = Scenario {
            medium: Medium { diffusion_um2_per_s: 79.4 },
            transmitter: Transmitter { position_um: Point3::ORIGIN, released_molecules: n_t },
            receivers: vec![ReceiverGeometry {
                id: "R1".into(),
                center_um: Point3::new(d, 0.0, 0.0),
                radius_um: radius,
            }],
            time_grid: TimeGrid { t_end_s: 2.0, dt_solver_s: 1e-3, output_times_s: vec![1.0, 2.0] },
            pbs: None,
        };
        let json = serde_json::to_string(&scenario).unwrap();
        let back: Scenario = serde_json::from_str(&json).unwrap();
        let validated = back.validate().unwrap();
        prop_assert_eq!(validated.transmitter().released_molecules, n_t);
        prop_assert!((validated.tx_distance(0) - d).abs() < 1e-12);
    }

    #[test]
    fn cumulative_response_is_monotone_and_bounded(
        d in 1.5..12.0f64,
        t1 in 0.01..2.0f64,
        dt in 0.01..1.0f64,
    ) {
        let radius = 1.0;
        prop_assume!(d > radius + 0.1);
        let ch = SisoChannel::new(d, radius, 79.4).unwrap();
        let n_t = 1e4;
        let early = ch.cum_absorbed(t1, n_t);
        let late = ch.cum_absorbed(t1 + dt, n_t);
        prop_assert!(early >= 0.0);
        prop_assert!(late >= early);
        // total hitting probability caps the response at N_T·R/d
        prop_assert!(late <= n_t * radius / d * (1.0 + 1e-12));
    }

    #[test]
    fn csv_has_one_line_per_row_plus_header(n in 1usize..20) {
        let rows: Vec<ComparisonRow> = (0..n)
            .map(|k| ComparisonRow {
                sweep_value: k as f64,
                receiver_id: format!("R{k}"),
                n_analytic: 1.0,
                n_centered: 2.0,
                n_pbs_mean: 3.0,
                n_pbs_std: 0.5,
                barycenter_analytic: Point3::ORIGIN,
                barycenter_empirical: Point3::ORIGIN,
            })
            .collect();
        let mut buf = Vec::new();
        write_csv(&rows, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        prop_assert_eq!(text.lines().count(), n + 1);
    }
}

#[test]
fn csv_rejects_an_empty_row_set() {
    let mut buf = Vec::new();
    assert!(write_csv(&[], &mut buf).is_err());
    assert!(buf.is_empty());
}
