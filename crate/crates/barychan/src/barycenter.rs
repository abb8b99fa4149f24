//! Analytic barycenter model: ring-weighted γ, per-source attraction and
//! repulsion components, gravitation-style ζ weights, and the composed
//! barycenters for an arbitrary number of receivers.
//!
//! Each fully absorbing receiver seen from another receiver acts as a
//! source of negative molecules; the barycenter is the point where that
//! fictitious source is placed. γ ∈ [0, 1] slides the per-source component
//! between the receiver center (γ = 0) and the surface point nearest the
//! source (γ = 1).

use crate::error::{Error, Result};
use crate::model::{Point3, ReceiverGeometry, ValidatedScenario};
use crate::numerics::{erfc, integrate_adaptive, QuadratureSpec};

/// Closest admissible ratio d/R; below this the ring integrand is singular
/// at θ = 0.
pub const MIN_DISTANCE_RATIO: f64 = 1.0 + 1e-6;

/// Inputs of the γ quadrature: source at distance `distance` from the
/// center of a sphere of radius `radius`, observed at time `time`.
#[derive(Debug, Clone, Copy)]
pub struct GammaInputs {
    pub distance: f64,
    pub radius: f64,
    pub diffusion: f64,
    pub time: f64,
}

impl GammaInputs {
    pub fn new(distance: f64, radius: f64, diffusion: f64, time: f64) -> Result<Self> {
        for (name, value) in [("radius", radius), ("diffusion", diffusion), ("time", time)] {
            if !(value > 0.0) {
                return Err(Error::NonPositiveParameter { name: name.into(), value });
            }
        }
        if !(distance >= radius * MIN_DISTANCE_RATIO) {
            return Err(Error::NonPositiveParameter {
                name: "distance - radius*(1+1e-6)".into(),
                value: distance - radius * MIN_DISTANCE_RATIO,
            });
        }
        Ok(GammaInputs { distance, radius, diffusion, time })
    }
}

/// Fully absorbing (w → ∞) limit of the per-ring absorption fraction at
/// polar angle θ measured from the source direction:
///
/// (αR + βR²)/(2α^{3/2})·erfc(k/(2√t)) + R²e^{-k²/(4t)}/(2√π)·(k√D + β)/(α√(Dt))
///
/// with α = R² + d² - 2dR·cosθ, β = -R + d·cosθ - d·sinθ, k = √(α/D).
pub fn ring_weight_limit(theta: f64, g: &GammaInputs) -> f64 {
    debug_assert!((0.0..=core::f64::consts::PI + 1e-12).contains(&theta));
    let (d, r, diff, t) = (g.distance, g.radius, g.diffusion, g.time);
    let alpha = r * r + d * d - 2.0 * d * r * theta.cos();
    let beta = -r + d * theta.cos() - d * theta.sin();
    let k = (alpha / diff).sqrt();

    let first = (alpha * r + beta * r * r) / (2.0 * alpha.powf(1.5)) * erfc(k / (2.0 * t.sqrt()));
    let second = r * r * (-k * k / (4.0 * t)).exp() / (2.0 * core::f64::consts::PI.sqrt())
        * ((k * diff.sqrt() + beta) / (alpha * (diff * t).sqrt()));
    first + second
}

/// γ(d, t): cosθ-weighted mean of the ring weights over θ ∈ [0, π],
/// normalized by the total ring weight.
///
/// When the total weight underflows to zero (no molecule is absorbed
/// within machine precision, e.g. extremely distant sources) the
/// barycenter component carries no information and γ is defined as 0,
/// placing it at the receiver center.
///
/// Raw results outside [0, 1] by at most 1e-9 are clamped; larger
/// excursions surface as [`Error::GammaOutOfRange`].
pub fn gamma(g: &GammaInputs) -> Result<f64> {
    let spec = QuadratureSpec::default();
    let r = g.radius;
    let numerator =
        integrate_adaptive(|th| ring_weight_limit(th, g) * r * th.cos(), 0.0, core::f64::consts::PI, &spec)?;
    let denominator =
        integrate_adaptive(|th| ring_weight_limit(th, g) * r, 0.0, core::f64::consts::PI, &spec)?;

    if denominator == 0.0 {
        return Ok(0.0);
    }
    let raw = numerator / denominator;
    if raw < -1e-9 || raw > 1.0 + 1e-9 {
        return Err(Error::GammaOutOfRange { value: raw });
    }
    Ok(raw.clamp(0.0, 1.0))
}

/// Attraction component: the barycenter contribution of the transmitter,
/// γ·S + (1-γ)·C with S the surface point of `rcv` nearest `source_pos`.
pub fn barycenter_from_tx(rcv: &ReceiverGeometry, source_pos: &Point3, gamma: f64) -> Point3 {
    debug_assert!((0.0..=1.0).contains(&gamma));
    let surface = surface_point(rcv, source_pos);
    surface * gamma + rcv.center_um * (1.0 - gamma)
}

/// Repulsion component: the barycenter contribution of a neighboring
/// receiver treated as a negative source, -γ·S + (1+γ)·C, i.e. the point
/// on the far side from the neighbor.
pub fn barycenter_from_rx(rcv: &ReceiverGeometry, neighbor_center: &Point3, gamma: f64) -> Point3 {
    debug_assert!((0.0..=1.0).contains(&gamma));
    let surface = surface_point(rcv, neighbor_center);
    surface * (-gamma) + rcv.center_um * (1.0 + gamma)
}

/// Point on the surface of `rcv` nearest to `toward`.
pub fn surface_point(rcv: &ReceiverGeometry, toward: &Point3) -> Point3 {
    rcv.center_um + rcv.center_um.direction_to(toward) * rcv.radius_um
}

/// Normalized gravitation-style weights for receiver `i`: the self weight
/// multiplies the transmitter component, the cross weights multiply the
/// neighbor components. All weights sum to 1.
#[derive(Debug, Clone)]
pub struct ZetaWeights {
    pub self_weight: f64,
    /// Cross weight per receiver index; entry `i` itself is 0.
    pub cross: Vec<f64>,
}

pub fn zeta_weights(i: usize, scenario: &ValidatedScenario) -> ZetaWeights {
    let receivers = scenario.receivers();
    let r_i = receivers[i].radius_um;
    let mut coupling = vec![0.0; receivers.len()];
    let mut total = 0.0;
    for (j, rcv_j) in receivers.iter().enumerate() {
        if j == i {
            continue;
        }
        let d = scenario.center_distance(i, j);
        coupling[j] = r_i * rcv_j.radius_um / (d * d);
        total += coupling[j];
    }
    let self_weight = 1.0 / (1.0 + total);
    for c in &mut coupling {
        *c *= self_weight;
    }
    ZetaWeights { self_weight, cross: coupling }
}

/// Barycenter of one receiver together with its components.
#[derive(Debug, Clone)]
pub struct ReceiverBarycenter {
    pub receiver_id: String,
    /// Composed barycenter B_i.
    pub position: Point3,
    /// Transmitter (attraction) component.
    pub from_tx: Point3,
    /// Repulsion component per neighbor index.
    pub from_rx: Vec<(usize, Point3)>,
}

/// Per-receiver barycenters at one evaluation time.
#[derive(Debug, Clone)]
pub struct BarycenterSet {
    pub eval_time: f64,
    pub receivers: Vec<ReceiverBarycenter>,
}

impl BarycenterSet {
    pub fn position(&self, i: usize) -> Point3 {
        self.receivers[i].position
    }
}

/// Composes the barycenter of every receiver at time `t` in one pass:
/// B_i = ζ_(i,i)·B_(Ri,T) + Σ_{j≠i} ζ_(i,j)·B_(Ri,Rj), with every γ
/// evaluated at the center-to-source distance at the snapshot time `t`.
pub fn compose_barycenters(scenario: &ValidatedScenario, t: f64) -> Result<BarycenterSet> {
    if !(t > 0.0) {
        return Err(Error::NonPositiveParameter { name: "t".into(), value: t });
    }
    let diffusion = scenario.medium().diffusion_um2_per_s;
    let tx_pos = scenario.transmitter().position_um;
    let receivers = scenario.receivers();

    let mut out = Vec::with_capacity(receivers.len());
    for (i, rcv) in receivers.iter().enumerate() {
        let g_tx = gamma(&GammaInputs::new(scenario.tx_distance(i), rcv.radius_um, diffusion, t)?)?;
        let from_tx = barycenter_from_tx(rcv, &tx_pos, g_tx);

        let zeta = zeta_weights(i, scenario);
        let mut position = from_tx * zeta.self_weight;
        let mut from_rx = Vec::new();
        for (j, neighbor) in receivers.iter().enumerate() {
            if j == i {
                continue;
            }
            let g_rx = gamma(&GammaInputs::new(
                scenario.center_distance(i, j),
                rcv.radius_um,
                diffusion,
                t,
            )?)?;
            let component = barycenter_from_rx(rcv, &neighbor.center_um, g_rx);
            position = position + component * zeta.cross[j];
            from_rx.push((j, component));
        }
        out.push(ReceiverBarycenter { receiver_id: rcv.id.clone(), position, from_tx, from_rx });
    }
    Ok(BarycenterSet { eval_time: t, receivers: out })
}
