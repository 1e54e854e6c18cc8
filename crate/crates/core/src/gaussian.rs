//! Standard-normal tail probabilities and truncated moments.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

/// Standard normal density.
pub fn normal_density(x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    (-0.5 * x * x).exp() / (2.0 * PI).sqrt()
}

/// Gaussian tail probability `P[Z > x]`.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x * FRAC_1_SQRT_2)
}

/// `P[t1 <= Z <= t2]`, evaluated on whichever side of zero avoids cancellation.
fn interval_probability(t1: f64, t2: f64) -> f64 {
    if t1 >= 0.0 {
        q_function(t1) - q_function(t2)
    } else if t2 <= 0.0 {
        q_function(-t2) - q_function(-t1)
    } else {
        1.0 - q_function(-t1) - q_function(t2)
    }
}

/// `t * phi(t)`, with the limit 0 at infinity.
fn scaled_density(t: f64) -> f64 {
    if t.is_infinite() {
        0.0
    } else {
        t * normal_density(t)
    }
}

/// Zeroth, first and second moments of a standard normal restricted to an
/// interval: `E[Z^k 1{t1 <= Z <= t2}]` for `k = 0, 1, 2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TruncatedGaussianMoments {
    pub m0: f64,
    pub m1: f64,
    pub m2: f64,
}

pub fn truncated_moments(t1: f64, t2: f64) -> Result<TruncatedGaussianMoments> {
    if t1.is_nan() || t2.is_nan() || t1 > t2 {
        return Err(Error::EmptyInterval { t1, t2 });
    }
    let m0 = interval_probability(t1, t2);
    Ok(TruncatedGaussianMoments {
        m0,
        m1: normal_density(t1) - normal_density(t2),
        m2: m0 + scaled_density(t1) - scaled_density(t2),
    })
}
