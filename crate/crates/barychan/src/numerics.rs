//! Special functions and quadrature/series primitives used by the
//! analytical modules.

use crate::error::{Error, Result};

/// Complementary error function, 1 - erf(x).
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Scaled complementary error function, e^{x²}·erfc(x), for x >= 0.
///
/// The direct product is exact up to the accuracy of `erfc` as long as
/// neither factor overflows or underflows; beyond that the asymptotic
/// expansion 1/(√π x)·Σ (-1)^n (2n-1)!!/(2x²)^n takes over.
pub fn erfcx(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 20.0 {
        (x * x).exp() * libm::erfc(x)
    } else {
        let inv2x2 = 1.0 / (2.0 * x * x);
        let mut term = 1.0;
        let mut sum = 1.0;
        for n in 1..=8u32 {
            term *= -((2 * n - 1) as f64) * inv2x2;
            sum += term;
        }
        sum / (core::f64::consts::PI.sqrt() * x)
    }
}

/// Accuracy controls for [`integrate_adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct QuadratureSpec {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        QuadratureSpec { abs_tol: 1e-12, rel_tol: 1e-10, max_subdivisions: 200 }
    }
}

// 15-point Kronrod extension of the 7-point Gauss rule (abscissae and
// weights on [-1, 1]).
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One G7/K15 evaluation over [a, b]: returns (kronrod estimate, error estimate).
fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);

    let fc = f(center);
    let mut result_gauss = WG[3] * fc;
    let mut result_kronrod = WGK[7] * fc;

    for j in 0..7 {
        let x = half * XGK[j];
        let fsum = f(center - x) + f(center + x);
        result_kronrod += WGK[j] * fsum;
        if j % 2 == 1 {
            result_gauss += WG[j / 2] * fsum;
        }
    }

    let result = result_kronrod * half;
    let err = ((result_kronrod - result_gauss) * half).abs();
    (result, err)
}

/// Globally adaptive quadrature of `f` over [a, b] by bisection of the
/// worst interval, with a G7/K15 rule on each piece.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, spec: &QuadratureSpec) -> Result<f64> {
    let (mut estimate, err0) = gauss_kronrod_15(&f, a, b);
    // (neg_error, a, b, estimate): max-heap keyed on error via sort.
    let mut intervals = vec![(err0, a, b, estimate)];
    let mut total_err = err0;

    for _ in 0..spec.max_subdivisions {
        let tol = spec.abs_tol.max(spec.rel_tol * estimate.abs());
        if total_err <= tol {
            return Ok(estimate);
        }
        // Split the interval with the largest error estimate.
        let worst = intervals
            .iter()
            .enumerate()
            .max_by(|a, b| a.1 .0.partial_cmp(&b.1 .0).unwrap())
            .map(|(i, _)| i)
            .unwrap();
        let (err, lo, hi, old) = intervals.swap_remove(worst);
        let mid = 0.5 * (lo + hi);
        let (left, err_l) = gauss_kronrod_15(&f, lo, mid);
        let (right, err_r) = gauss_kronrod_15(&f, mid, hi);
        estimate += left + right - old;
        total_err += err_l + err_r - err;
        intervals.push((err_l, lo, mid, left));
        intervals.push((err_r, mid, hi, right));
    }

    let tol = spec.abs_tol.max(spec.rel_tol * estimate.abs());
    if total_err <= tol {
        Ok(estimate)
    } else {
        Err(Error::MaxSubdivisionsExceeded {
            max_subdivisions: spec.max_subdivisions,
            error: total_err,
        })
    }
}

/// Default truncation length for [`sum_geometric_series`].
pub const SERIES_N_MAX: usize = 200;

/// Sums `term(0) + term(1) + ...` for terms that eventually decay at least
/// geometrically, truncating once `|term(n)| < tol·|partial sum|`.
///
/// Returns the partial sum and the number of terms evaluated.
pub fn sum_geometric_series<F: Fn(usize) -> f64>(
    term: F,
    ratio_bound: f64,
    tol: f64,
) -> Result<(f64, usize)> {
    debug_assert!(ratio_bound > 0.0 && ratio_bound < 1.0);
    let mut sum = 0.0;
    for n in 0..SERIES_N_MAX {
        let t = term(n);
        sum += t;
        if t.abs() <= tol * sum.abs() || t == 0.0 {
            return Ok((sum, n + 1));
        }
    }
    let last = term(SERIES_N_MAX - 1);
    Err(Error::NotConverged {
        n_max: SERIES_N_MAX,
        last_ratio: if sum != 0.0 { (last / sum).abs() } else { last.abs() },
    })
}
