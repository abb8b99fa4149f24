//! Closed-form channel responses: the single-receiver hitting rate and
//! cumulative absorption, and the two-receiver coupled series solution.

use crate::error::{Error, Result};
use crate::numerics::{erfc, sum_geometric_series};

/// Relative truncation tolerance for the coupled two-receiver series.
pub const SITO_SERIES_TOL: f64 = 1e-12;

/// Channel between a point source and one isolated fully absorbing sphere.
#[derive(Debug, Clone, Copy)]
pub struct SisoChannel {
    /// Distance between the source point and the receiver center, µm.
    pub distance: f64,
    /// Receiver radius, µm.
    pub radius: f64,
    /// Diffusion coefficient, µm²/s.
    pub diffusion: f64,
}

impl SisoChannel {
    /// Requires the source strictly outside the sphere (d > R).
    pub fn new(distance: f64, radius: f64, diffusion: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::NonPositiveParameter { name: "radius".into(), value: radius });
        }
        if !(diffusion > 0.0) {
            return Err(Error::NonPositiveParameter { name: "diffusion".into(), value: diffusion });
        }
        if !(distance > radius) {
            return Err(Error::NonPositiveParameter {
                name: "distance - radius".into(),
                value: distance - radius,
            });
        }
        Ok(SisoChannel { distance, radius, diffusion })
    }

    /// Hitting rate f(d, t) in 1/s: the probability density per unit time
    /// that a molecule released at distance d is absorbed at time t.
    /// Continuous limit 0 at t = 0.
    pub fn hitting_rate(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let d = self.distance;
        let r = self.radius;
        let gap = d - r;
        let four_dt = 4.0 * self.diffusion * t;
        r * gap / (d * (core::f64::consts::PI * four_dt * t * t).sqrt())
            * (-gap * gap / four_dt).exp()
    }

    /// Expected number of molecules absorbed up to time t out of `n_t`.
    pub fn cum_absorbed(&self, t: f64, n_t: f64) -> f64 {
        cum_absorbed_siso(self.distance, self.radius, self.diffusion, t, n_t)
    }
}

/// N(t) = N_T·(R/d)·erfc((d-R)/(2√(Dt))) for d >= R.
///
/// The boundary d = R is admitted here (every molecule starts on the
/// surface, so N(t) = N_T for any t > 0); it is rejected by
/// [`SisoChannel::new`] because the hitting-rate formula is only derived
/// for a source strictly outside the sphere.
pub fn cum_absorbed_siso(distance: f64, radius: f64, diffusion: f64, t: f64, n_t: f64) -> f64 {
    debug_assert!(distance >= radius);
    if t <= 0.0 {
        return 0.0;
    }
    n_t * radius / distance * erfc((distance - radius) / (2.0 * (diffusion * t).sqrt()))
}

/// Geometry of one transmitter and two coupled fully absorbing receivers,
/// with the negative sources placed at the barycenters.
#[derive(Debug, Clone, Copy)]
pub struct SitoConfig {
    pub radius_1: f64,
    pub radius_2: f64,
    /// Transmitter to center distances.
    pub d_c1_tx: f64,
    pub d_c2_tx: f64,
    /// Center of receiver 1 to barycenter of receiver 2, and vice versa.
    pub d_c1_b2: f64,
    pub d_c2_b1: f64,
    pub released_molecules: f64,
    pub diffusion: f64,
}

impl SitoConfig {
    fn checked(&self) -> Result<()> {
        for (name, value) in [
            ("radius_1", self.radius_1),
            ("radius_2", self.radius_2),
            ("d_c1_tx - radius_1", self.d_c1_tx - self.radius_1),
            ("d_c2_tx - radius_2", self.d_c2_tx - self.radius_2),
            ("d_c1_b2", self.d_c1_b2),
            ("d_c2_b1", self.d_c2_b1),
            ("diffusion", self.diffusion),
        ] {
            if !(value > 0.0) {
                return Err(Error::NonPositiveParameter { name: name.into(), value });
            }
        }
        Ok(())
    }

    /// Role swap 1 <-> 2, used to obtain N_2 from the N_1 formula.
    fn swapped(&self) -> SitoConfig {
        SitoConfig {
            radius_1: self.radius_2,
            radius_2: self.radius_1,
            d_c1_tx: self.d_c2_tx,
            d_c2_tx: self.d_c1_tx,
            d_c1_b2: self.d_c2_b1,
            d_c2_b1: self.d_c1_b2,
            ..*self
        }
    }
}

/// Expected cumulative absorbed counts (N_1, N_2) at time t from the
/// closed-form series solution of the coupled two-receiver system.
pub fn cum_absorbed_sito(cfg: &SitoConfig, t: f64) -> Result<(f64, f64)> {
    cfg.checked()?;
    let n1 = sito_n1(cfg, t)?;
    let n2 = sito_n1(&cfg.swapped(), t)?;
    Ok((n1, n2))
}

fn sito_n1(cfg: &SitoConfig, t: f64) -> Result<f64> {
    if t <= 0.0 {
        return Ok(0.0);
    }
    let ratio = cfg.radius_1 * cfg.radius_2 / (cfg.d_c1_b2 * cfg.d_c2_b1);
    let two_sqrt_dt = 2.0 * (cfg.diffusion * t).sqrt();
    // Per-reflection path increment shared by both sums.
    let step = cfg.d_c1_b2 + cfg.d_c2_b1 - cfg.radius_1 - cfg.radius_2;

    let direct_gap = cfg.d_c1_tx - cfg.radius_1;
    let (direct, _) = sum_geometric_series(
        |n| ratio.powi(n as i32) * erfc((direct_gap + n as f64 * step) / two_sqrt_dt),
        ratio,
        SITO_SERIES_TOL,
    )?;

    let coupled_gap = cfg.d_c1_b2 + cfg.d_c2_tx - cfg.radius_1 - cfg.radius_2;
    let (coupled, _) = sum_geometric_series(
        |n| ratio.powi(n as i32) * erfc((coupled_gap + n as f64 * step) / two_sqrt_dt),
        ratio,
        SITO_SERIES_TOL,
    )?;

    let n_t = cfg.released_molecules;
    Ok(n_t * cfg.radius_1 / cfg.d_c1_tx * direct
        - n_t * cfg.radius_1 * cfg.radius_2 / (cfg.d_c1_b2 * cfg.d_c2_tx) * coupled)
}
