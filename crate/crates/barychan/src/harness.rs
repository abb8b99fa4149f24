//! Scenario files, sweep experiments, analytic vs. simulation comparison,
//! and CSV emission.
//!
//! A sweep repositions the second receiver of the base scenario, either
//! around the first receiver (two-receiver topologies, angle Ω or center
//! distance) or around the transmitter (multi-receiver topologies, angle
//! α), always in the xy-plane. For every sweep value the barycenter
//! model, the centered baseline, and the particle simulation are all
//! evaluated at the scenario's last output time.

use rayon::prelude::*;
use std::fs;
use std::io::Write;
use std::path::Path;

use crate::barycenter::compose_barycenters;
use crate::error::{Error, Result};
use crate::model::{Point3, Scenario, ValidatedScenario};
use crate::pbs::{empirical_barycenter, run_ensemble};
use crate::solver::{solve_centered, solve_simo};

/// Loads and validates a scenario file (strict JSON; unknown keys are
/// rejected with the offending line and column).
pub fn load_scenario(path: impl AsRef<Path>) -> Result<ValidatedScenario> {
    let text = fs::read_to_string(path)?;
    let scenario: Scenario = serde_json::from_str(&text)?;
    scenario.validate()
}

pub fn save_scenario(scenario: &Scenario, path: impl AsRef<Path>) -> Result<()> {
    let text = serde_json::to_string_pretty(scenario)?;
    fs::write(path, text)?;
    Ok(())
}

/// Which geometry parameter a sweep varies. The receiver at index 1 is
/// repositioned; everything else stays fixed.
#[derive(Debug, Clone, Copy)]
pub enum SweepParameter {
    /// Angle Ω in degrees at the first receiver, measured from its
    /// line of sight to the transmitter; Ω = 0 puts the second receiver
    /// between transmitter and first receiver.
    OmegaDeg { center_distance_um: f64 },
    /// Center distance d(C1, C2) in µm at a fixed angle Ω.
    CenterDistanceUm { omega_deg: f64 },
    /// Angle α in degrees of the second receiver around the transmitter
    /// at a fixed transmitter distance.
    AlphaDeg { tx_distance_um: f64 },
}

#[derive(Debug, Clone)]
pub struct SweepSpec {
    pub base: Scenario,
    pub parameter: SweepParameter,
    pub values: Vec<f64>,
}

/// One output line of a comparison: analytic (barycenter model), centered
/// baseline, and PBS statistics for one receiver at one sweep value.
#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub sweep_value: f64,
    pub receiver_id: String,
    pub n_analytic: f64,
    pub n_centered: f64,
    pub n_pbs_mean: f64,
    pub n_pbs_std: f64,
    pub barycenter_analytic: Point3,
    pub barycenter_empirical: Point3,
}

impl ComparisonRow {
    fn is_finite(&self) -> bool {
        [self.sweep_value, self.n_analytic, self.n_centered, self.n_pbs_mean, self.n_pbs_std]
            .iter()
            .all(|v| v.is_finite())
            && self.barycenter_analytic.is_finite()
            && self.barycenter_empirical.is_finite()
    }
}

/// Places the second receiver of `base` according to the sweep parameter.
pub fn place_second_receiver(base: &Scenario, parameter: SweepParameter, value: f64) -> Result<Scenario> {
    if base.receivers.len() < 2 {
        return Err(Error::Empty("sweep base scenario needs at least two receivers"));
    }
    let mut scenario = base.clone();
    let tx = scenario.transmitter.position_um;
    let center = match parameter {
        SweepParameter::OmegaDeg { center_distance_um } => {
            around_first_receiver(&scenario, tx, center_distance_um, value)
        }
        SweepParameter::CenterDistanceUm { omega_deg } => {
            around_first_receiver(&scenario, tx, value, omega_deg)
        }
        SweepParameter::AlphaDeg { tx_distance_um } => {
            let a = value.to_radians();
            tx + Point3::new(tx_distance_um * a.cos(), tx_distance_um * a.sin(), 0.0)
        }
    };
    scenario.receivers[1].center_um = center;
    Ok(scenario)
}

fn around_first_receiver(scenario: &Scenario, tx: Point3, distance: f64, omega_deg: f64) -> Point3 {
    let c1 = scenario.receivers[0].center_um;
    // angle of the line of sight C1 -> T in the xy-plane
    let los = (tx.y - c1.y).atan2(tx.x - c1.x);
    let phi = los - omega_deg.to_radians();
    c1 + Point3::new(distance * phi.cos(), distance * phi.sin(), 0.0)
}

/// Evaluates one scenario at its last output time: barycenter-model
/// solve, centered baseline, and a PBS ensemble. Emits one row per
/// receiver, tagged with `sweep_value`.
pub fn compare_scenario(scenario: &ValidatedScenario, sweep_value: f64) -> Result<Vec<ComparisonRow>> {
    let t_eval = *scenario
        .time_grid()
        .output_times_s
        .last()
        .ok_or(Error::Empty("scenario has no output times"))?;

    let barycenters = compose_barycenters(scenario, t_eval)?;
    let analytic = solve_simo(scenario, &barycenters)?;
    let centered = solve_centered(scenario, t_eval)?;
    let ensemble = run_ensemble(scenario)?;

    let mut rows = Vec::with_capacity(scenario.receivers().len());
    for (i, rcv) in scenario.receivers().iter().enumerate() {
        let (mean, std) = ensemble.count_mean_std(i, t_eval);
        let row = ComparisonRow {
            sweep_value,
            receiver_id: rcv.id.clone(),
            n_analytic: analytic.final_cumulative(i),
            n_centered: centered.final_cumulative(i),
            n_pbs_mean: mean,
            n_pbs_std: std,
            barycenter_analytic: barycenters.position(i),
            barycenter_empirical: empirical_barycenter(&ensemble.logs, i, t_eval)?,
        };
        if !row.is_finite() {
            return Err(Error::NonFiniteRow { receiver: row.receiver_id, sweep_value });
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Runs every sweep point and joins the rows ordered by sweep value.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<ComparisonRow>> {
    if spec.values.is_empty() {
        return Err(Error::Empty("sweep value list"));
    }
    let mut values = spec.values.clone();
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());

    let per_value: Vec<Vec<ComparisonRow>> = values
        .par_iter()
        .map(|&value| {
            let scenario = place_second_receiver(&spec.base, spec.parameter, value)?.validate()?;
            compare_scenario(&scenario, value)
        })
        .collect::<Result<_>>()?;
    Ok(per_value.into_iter().flatten().collect())
}

pub const CSV_HEADER: &str =
    "sweep_value,receiver_id,N_analytic,N_centered,N_pbs_mean,N_pbs_std,bx_a,by_a,bz_a,bx_e,by_e,bz_e";

/// Writes rows as UTF-8 CSV with the fixed column order, decimal points,
/// and no locale formatting. Non-finite rows are rejected before any
/// byte is written.
pub fn write_csv<W: Write>(rows: &[ComparisonRow], mut out: W) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::Empty("comparison rows"));
    }
    for row in rows {
        if !row.is_finite() {
            return Err(Error::NonFiniteRow {
                receiver: row.receiver_id.clone(),
                sweep_value: row.sweep_value,
            });
        }
    }
    writeln!(out, "{CSV_HEADER}")?;
    for r in rows {
        let (a, e) = (&r.barycenter_analytic, &r.barycenter_empirical);
        writeln!(
            out,
            "{},{},{},{},{},{},{},{},{},{},{},{}",
            r.sweep_value,
            r.receiver_id,
            r.n_analytic,
            r.n_centered,
            r.n_pbs_mean,
            r.n_pbs_std,
            a.x,
            a.y,
            a.z,
            e.x,
            e.y,
            e.z
        )?;
    }
    Ok(())
}

pub fn emit_csv(rows: &[ComparisonRow], path: impl AsRef<Path>) -> Result<()> {
    let mut buf = Vec::new();
    write_csv(rows, &mut buf)?;
    fs::write(path, buf)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{Medium, PbsParams, ReceiverGeometry, TimeGrid, Transmitter};
    use approx::assert_relative_eq;

    fn base_two_receivers() -> Scenario {
        Scenario {
            medium: Medium { diffusion_um2_per_s: 79.4 },
            transmitter: Transmitter { position_um: Point3::ORIGIN, released_molecules: 10_000 },
            receivers: vec![
                ReceiverGeometry { id: "R1".into(), center_um: [6.0, 0.0, 0.0].into(), radius_um: 1.0 },
                ReceiverGeometry { id: "R2".into(), center_um: [6.0, 4.0, 0.0].into(), radius_um: 1.0 },
            ],
            time_grid: TimeGrid { t_end_s: 2.0, dt_solver_s: 1e-3, output_times_s: vec![2.0] },
            pbs: Some(PbsParams { dt_s: 1e-5, trials: 2, seed: 11 }),
        }
    }

    #[test]
    fn scenario_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("scenario.json");
        let scenario = base_two_receivers();
        save_scenario(&scenario, &path).unwrap();
        let loaded = load_scenario(&path).unwrap();
        let reserialized = serde_json::to_string(loaded.scenario()).unwrap();
        assert_eq!(serde_json::to_string(&scenario).unwrap(), reserialized);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let text = r#"{
            "medium": {"diffusion_um2_per_s": 79.4, "viscosity": 1.0},
            "transmitter": {"position_um": [0,0,0], "released_molecules": 10},
            "receivers": [],
            "time_grid": {"t_end_s": 1.0, "dt_solver_s": 0.001, "output_times_s": [1.0]}
        }"#;
        let err = serde_json::from_str::<Scenario>(text).unwrap_err();
        assert!(err.to_string().contains("viscosity"));
    }

    #[test]
    fn negative_diffusion_fails_validation() {
        let text = r#"{
            "medium": {"diffusion_um2_per_s": -1.0},
            "transmitter": {"position_um": [0,0,0], "released_molecules": 10},
            "receivers": [{"id": "R1", "center_um": [6,0,0], "radius_um": 1.0}],
            "time_grid": {"t_end_s": 1.0, "dt_solver_s": 0.001, "output_times_s": [1.0]}
        }"#;
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.json");
        fs::write(&path, text).unwrap();
        assert!(matches!(load_scenario(&path), Err(Error::NonPositiveParameter { .. })));
    }

    #[test]
    fn omega_zero_blocks_the_line_of_sight() {
        let base = base_two_receivers();
        let placed =
            place_second_receiver(&base, SweepParameter::OmegaDeg { center_distance_um: 2.0 }, 0.0)
                .unwrap();
        let c2 = placed.receivers[1].center_um;
        assert_relative_eq!(c2.x, 4.0, epsilon = 1e-12);
        assert_relative_eq!(c2.y, 0.0, epsilon = 1e-12);

        let behind =
            place_second_receiver(&base, SweepParameter::OmegaDeg { center_distance_um: 2.0 }, 180.0)
                .unwrap();
        assert_relative_eq!(behind.receivers[1].center_um.x, 8.0, epsilon = 1e-12);

        let side =
            place_second_receiver(&base, SweepParameter::OmegaDeg { center_distance_um: 4.0 }, 90.0)
                .unwrap();
        assert_relative_eq!(side.receivers[1].center_um.y, 4.0, epsilon = 1e-12);
        assert_relative_eq!(side.receivers[1].center_um.x, 6.0, epsilon = 1e-12);
    }

    #[test]
    fn alpha_places_around_the_transmitter() {
        let base = base_two_receivers();
        let placed =
            place_second_receiver(&base, SweepParameter::AlphaDeg { tx_distance_um: 6.0 }, 90.0)
                .unwrap();
        let c2 = placed.receivers[1].center_um;
        assert_relative_eq!(c2.x, 0.0, epsilon = 1e-12);
        assert_relative_eq!(c2.y, 6.0, epsilon = 1e-12);
    }

    fn tiny_rows() -> Vec<ComparisonRow> {
        vec![ComparisonRow {
            sweep_value: 90.0,
            receiver_id: "R1".into(),
            n_analytic: 1234.5,
            n_centered: 1240.0,
            n_pbs_mean: 1230.0,
            n_pbs_std: 12.5,
            barycenter_analytic: Point3::new(5.8, 0.01, 0.0),
            barycenter_empirical: Point3::new(5.81, 0.009, -0.001),
        }]
    }

    #[test]
    fn csv_single_row_is_two_lines() {
        let mut buf = Vec::new();
        write_csv(&tiny_rows(), &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.trim_end().lines().collect();
        assert_eq!(lines.len(), 2);
        assert_eq!(lines[0], CSV_HEADER);
        assert!(lines[1].starts_with("90,R1,1234.5,1240,1230,12.5,"));
    }

    #[test]
    fn csv_rejects_nan_rows() {
        let mut rows = tiny_rows();
        rows[0].n_pbs_mean = f64::NAN;
        let mut buf = Vec::new();
        assert!(matches!(write_csv(&rows, &mut buf), Err(Error::NonFiniteRow { .. })));
        assert!(buf.is_empty());
    }

    #[test]
    fn csv_is_deterministic() {
        let mut a = Vec::new();
        let mut b = Vec::new();
        write_csv(&tiny_rows(), &mut a).unwrap();
        write_csv(&tiny_rows(), &mut b).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn single_value_sweep_equals_direct_run() {
        // desk-scale down so the PBS stays fast
        let mut base = base_two_receivers();
        base.transmitter.released_molecules = 300;
        base.time_grid = TimeGrid { t_end_s: 0.2, dt_solver_s: 1e-3, output_times_s: vec![0.2] };
        base.pbs = Some(PbsParams { dt_s: 1e-4, trials: 1, seed: 3 });

        let spec = SweepSpec {
            base: base.clone(),
            parameter: SweepParameter::OmegaDeg { center_distance_um: 4.0 },
            values: vec![90.0],
        };
        let sweep_rows = run_sweep(&spec).unwrap();

        let direct = place_second_receiver(&base, SweepParameter::OmegaDeg { center_distance_um: 4.0 }, 90.0)
            .unwrap()
            .validate()
            .unwrap();
        let direct_rows = compare_scenario(&direct, 90.0).unwrap();

        assert_eq!(sweep_rows.len(), direct_rows.len());
        for (a, b) in sweep_rows.iter().zip(&direct_rows) {
            assert_eq!(a.n_analytic, b.n_analytic);
            assert_eq!(a.n_pbs_mean, b.n_pbs_mean);
            assert_eq!(a.barycenter_empirical, b.barycenter_empirical);
        }
    }
}
