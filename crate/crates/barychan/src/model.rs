//! Scenario and geometry data model shared by every other module.
//!
//! Units are micrometers and seconds throughout; there is no conversion
//! layer. A [`Scenario`] is validated once into a [`ValidatedScenario`],
//! which caches pairwise distances and is immutable afterwards.

use serde::{Deserialize, Serialize};
use std::ops::{Add, Mul, Sub};

use crate::error::{Error, Result};

/// A point or displacement in 3D space, in micrometers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct Point3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Point3 {
    pub const ORIGIN: Point3 = Point3 { x: 0.0, y: 0.0, z: 0.0 };

    pub fn new(x: f64, y: f64, z: f64) -> Self {
        Point3 { x, y, z }
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    pub fn norm(&self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn distance(&self, other: &Point3) -> f64 {
        (*self - *other).norm()
    }

    /// Unit vector from `self` toward `target`. Caller guarantees the two
    /// points are distinct.
    pub fn direction_to(&self, target: &Point3) -> Point3 {
        let d = *target - *self;
        let n = d.norm();
        d * (1.0 / n)
    }
}

impl From<[f64; 3]> for Point3 {
    fn from(v: [f64; 3]) -> Self {
        Point3::new(v[0], v[1], v[2])
    }
}

impl From<Point3> for [f64; 3] {
    fn from(p: Point3) -> Self {
        [p.x, p.y, p.z]
    }
}

impl Add for Point3 {
    type Output = Point3;
    fn add(self, rhs: Point3) -> Point3 {
        Point3::new(self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Sub for Point3 {
    type Output = Point3;
    fn sub(self, rhs: Point3) -> Point3 {
        Point3::new(self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Mul<f64> for Point3 {
    type Output = Point3;
    fn mul(self, s: f64) -> Point3 {
        Point3::new(self.x * s, self.y * s, self.z * s)
    }
}

/// The diffusive medium.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Medium {
    /// Diffusion coefficient D of the signaling molecule, in µm²/s.
    pub diffusion_um2_per_s: f64,
}

/// Point transmitter releasing all molecules impulsively at t = 0.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Transmitter {
    pub position_um: Point3,
    /// Number of released molecules N_T.
    pub released_molecules: u64,
}

/// One fully absorbing spherical receiver.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReceiverGeometry {
    pub id: String,
    pub center_um: Point3,
    pub radius_um: f64,
}

/// Time discretization for the solver and the requested output times.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TimeGrid {
    pub t_end_s: f64,
    /// Uniform step of the Volterra time-stepping.
    pub dt_solver_s: f64,
    /// Times at which responses are reported; each must lie in (0, t_end].
    pub output_times_s: Vec<f64>,
}

/// Particle-based simulation parameters.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PbsParams {
    pub dt_s: f64,
    pub trials: u32,
    pub seed: u64,
}

/// Full experiment description: medium, transmitter, receivers, time grid,
/// and optional PBS parameters.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub medium: Medium,
    pub transmitter: Transmitter,
    pub receivers: Vec<ReceiverGeometry>,
    pub time_grid: TimeGrid,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pbs: Option<PbsParams>,
}

fn check_positive(name: &str, value: f64) -> Result<()> {
    if !value.is_finite() {
        return Err(Error::NonFiniteParameter { name: name.to_string() });
    }
    if value <= 0.0 {
        return Err(Error::NonPositiveParameter { name: name.to_string(), value });
    }
    Ok(())
}

impl Scenario {
    /// Checks every physical invariant and caches the pairwise distances.
    pub fn validate(self) -> Result<ValidatedScenario> {
        check_positive("medium.diffusion_um2_per_s", self.medium.diffusion_um2_per_s)?;
        if !self.transmitter.position_um.is_finite() {
            return Err(Error::NonFiniteParameter { name: "transmitter.position_um".into() });
        }
        if self.transmitter.released_molecules == 0 {
            return Err(Error::NonPositiveParameter {
                name: "transmitter.released_molecules".into(),
                value: 0.0,
            });
        }

        check_positive("time_grid.t_end_s", self.time_grid.t_end_s)?;
        check_positive("time_grid.dt_solver_s", self.time_grid.dt_solver_s)?;
        if self.time_grid.dt_solver_s > self.time_grid.t_end_s {
            return Err(Error::NonPositiveParameter {
                name: "time_grid.t_end_s - time_grid.dt_solver_s".into(),
                value: self.time_grid.t_end_s - self.time_grid.dt_solver_s,
            });
        }
        let mut prev = 0.0;
        for (i, &t) in self.time_grid.output_times_s.iter().enumerate() {
            check_positive(&format!("time_grid.output_times_s[{i}]"), t)?;
            if t <= prev && i > 0 {
                return Err(Error::NonPositiveParameter {
                    name: format!("time_grid.output_times_s[{i}] (must be strictly increasing)"),
                    value: t - prev,
                });
            }
            if t > self.time_grid.t_end_s {
                return Err(Error::NonPositiveParameter {
                    name: format!("time_grid.t_end_s - output_times_s[{i}]"),
                    value: self.time_grid.t_end_s - t,
                });
            }
            prev = t;
        }

        if let Some(pbs) = &self.pbs {
            check_positive("pbs.dt_s", pbs.dt_s)?;
            if pbs.trials == 0 {
                return Err(Error::NonPositiveParameter { name: "pbs.trials".into(), value: 0.0 });
            }
        }

        let mut tx_distances = Vec::with_capacity(self.receivers.len());
        for (i, r) in self.receivers.iter().enumerate() {
            check_positive(&format!("receivers[{i}].radius_um"), r.radius_um)?;
            if !r.center_um.is_finite() {
                return Err(Error::NonFiniteParameter {
                    name: format!("receivers[{i}].center_um"),
                });
            }
            if self.receivers[..i].iter().any(|o| o.id == r.id) {
                return Err(Error::DuplicateReceiverId(r.id.clone()));
            }
            let d = r.center_um.distance(&self.transmitter.position_um);
            if d <= r.radius_um {
                return Err(Error::TransmitterInsideReceiver {
                    receiver: r.id.clone(),
                    distance: d,
                    radius: r.radius_um,
                });
            }
            tx_distances.push(d);
        }

        // Touching spheres (d == R_i + R_j) are allowed; interpenetration is not.
        let p = self.receivers.len();
        let mut center_distances = vec![vec![0.0; p]; p];
        for i in 0..p {
            for j in (i + 1)..p {
                let d = self.receivers[i].center_um.distance(&self.receivers[j].center_um);
                let rsum = self.receivers[i].radius_um + self.receivers[j].radius_um;
                // touching is allowed; the relative slack keeps exact-touch
                // placements computed in floating point from being rejected
                if d < rsum * (1.0 - 1e-12) {
                    return Err(Error::OverlappingReceivers {
                        first: self.receivers[i].id.clone(),
                        second: self.receivers[j].id.clone(),
                        distance: d,
                        radius_sum: rsum,
                    });
                }
                center_distances[i][j] = d;
                center_distances[j][i] = d;
            }
        }

        Ok(ValidatedScenario { scenario: self, tx_distances, center_distances })
    }
}

/// A [`Scenario`] whose invariants have been checked, with cached distances.
///
/// Immutable after validation; safe to share across concurrent workers.
#[derive(Debug, Clone)]
pub struct ValidatedScenario {
    scenario: Scenario,
    tx_distances: Vec<f64>,
    center_distances: Vec<Vec<f64>>,
}

impl ValidatedScenario {
    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn medium(&self) -> &Medium {
        &self.scenario.medium
    }

    pub fn transmitter(&self) -> &Transmitter {
        &self.scenario.transmitter
    }

    pub fn receivers(&self) -> &[ReceiverGeometry] {
        &self.scenario.receivers
    }

    pub fn time_grid(&self) -> &TimeGrid {
        &self.scenario.time_grid
    }

    pub fn pbs(&self) -> Option<&PbsParams> {
        self.scenario.pbs.as_ref()
    }

    /// Cached distance between the transmitter and the center of receiver `i`.
    pub fn tx_distance(&self, i: usize) -> f64 {
        self.tx_distances[i]
    }

    /// Cached distance between the centers of receivers `i` and `j`.
    pub fn center_distance(&self, i: usize, j: usize) -> f64 {
        self.center_distances[i][j]
    }

    pub fn into_scenario(self) -> Scenario {
        self.scenario
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn base(receivers: Vec<ReceiverGeometry>) -> Scenario {
        Scenario {
            medium: Medium { diffusion_um2_per_s: 79.4 },
            transmitter: Transmitter {
                position_um: Point3::ORIGIN,
                released_molecules: 10_000,
            },
            receivers,
            time_grid: TimeGrid {
                t_end_s: 2.0,
                dt_solver_s: 1e-3,
                output_times_s: vec![2.0],
            },
            pbs: None,
        }
    }

    fn sphere(id: &str, center: [f64; 3], radius: f64) -> ReceiverGeometry {
        ReceiverGeometry { id: id.into(), center_um: center.into(), radius_um: radius }
    }

    #[test]
    fn single_receiver_at_distance_six_is_valid() {
        let v = base(vec![sphere("R1", [6.0, 0.0, 0.0], 1.0)]).validate().unwrap();
        assert_eq!(v.tx_distance(0), 6.0);
    }

    #[test]
    fn transmitter_inside_receiver_is_rejected() {
        let err = base(vec![sphere("R1", [0.5, 0.0, 0.0], 1.0)]).validate().unwrap_err();
        assert!(matches!(err, Error::TransmitterInsideReceiver { ref receiver, .. } if receiver == "R1"));
    }

    #[test]
    fn touching_receivers_are_valid() {
        let v = base(vec![
            sphere("R1", [6.0, 0.0, 0.0], 1.0),
            sphere("R2", [8.0, 0.0, 0.0], 1.0),
        ])
        .validate()
        .unwrap();
        assert_eq!(v.center_distance(0, 1), 2.0);
    }

    #[test]
    fn interpenetrating_receivers_are_rejected() {
        let err = base(vec![
            sphere("R1", [6.0, 0.0, 0.0], 1.0),
            sphere("R2", [7.5, 0.0, 0.0], 1.0),
        ])
        .validate()
        .unwrap_err();
        assert!(matches!(err, Error::OverlappingReceivers { .. }));
    }

    #[test]
    fn nonpositive_diffusion_is_rejected() {
        let mut s = base(vec![sphere("R1", [6.0, 0.0, 0.0], 1.0)]);
        s.medium.diffusion_um2_per_s = -1.0;
        assert!(matches!(s.validate(), Err(Error::NonPositiveParameter { .. })));
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let err = base(vec![
            sphere("R1", [6.0, 0.0, 0.0], 1.0),
            sphere("R1", [10.0, 0.0, 0.0], 1.0),
        ])
        .validate()
        .unwrap_err();
        assert!(matches!(err, Error::DuplicateReceiverId(_)));
    }

    #[test]
    fn validation_is_idempotent() {
        let s = base(vec![
            sphere("R1", [6.0, 0.0, 0.0], 1.0),
            sphere("R2", [6.0, 4.0, 0.0], 1.0),
        ]);
        let v1 = s.clone().validate().unwrap();
        let v2 = v1.clone().into_scenario().validate().unwrap();
        assert_eq!(v1.tx_distances, v2.tx_distances);
        assert_eq!(v1.center_distances, v2.center_distances);
    }

    #[test]
    fn cached_distances_satisfy_triangle_inequality() {
        let s = base(vec![
            sphere("R1", [6.0, 0.0, 0.0], 1.0),
            sphere("R2", [3.0, 5.0, 0.0], 1.0),
            sphere("R3", [-4.0, -2.0, 3.0], 1.0),
        ]);
        let v = s.validate().unwrap();
        for i in 0..3 {
            for j in 0..3 {
                if i == j {
                    continue;
                }
                // |T,Ci| <= |T,Cj| + |Cj,Ci|
                let lhs = v.tx_distance(i);
                let rhs = v.tx_distance(j) + v.center_distance(j, i);
                assert!(lhs <= rhs * (1.0 + 1e-12));
                for k in 0..3 {
                    if k == i || k == j {
                        continue;
                    }
                    let lhs = v.center_distance(i, j);
                    let rhs = v.center_distance(i, k) + v.center_distance(k, j);
                    assert!(lhs <= rhs * (1.0 + 1e-12));
                }
            }
        }
    }
}
