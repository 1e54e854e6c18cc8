//! Gaussian smoothing of the shrinkage objective.
//!
//! `J(a)` is piecewise quadratic in `a`, so `E[J(s + c Z)]` splits into five
//! truncated-Gaussian quadratic forms, one per region of the shrinkage map.

use crate::error::{Error, Result};
use crate::gaussian::truncated_moments;
use crate::prior::Prior;
use crate::shrinkage::{shrinkage_objective, BoxBounds};

/// A region `lo <= a <= hi` on which `J` coincides with one quadratic.
struct Piece {
    lo: f64,
    hi: f64,
    /// Value, slope and curvature of that quadratic at the evaluation point.
    taylor: fn(s: f64, gamma: f64, l: f64, u: f64) -> (f64, f64, f64),
}

const PIECES: usize = 5;

fn pieces(gamma: f64, bounds: BoxBounds) -> [Piece; PIECES] {
    let (l, u) = (bounds.lower(), bounds.upper());
    [
        Piece {
            lo: u + gamma,
            hi: f64::INFINITY,
            taylor: |s, g, _, u| (0.5 * (u - s) * (u - s) + g * u, s - u, 1.0),
        },
        Piece {
            lo: gamma,
            hi: u + gamma,
            taylor: |s, g, _, _| (g * s - 0.5 * g * g, g, 0.0),
        },
        Piece {
            lo: -gamma,
            hi: gamma,
            taylor: |s, _, _, _| (0.5 * s * s, s, 1.0),
        },
        Piece {
            lo: l - gamma,
            hi: -gamma,
            taylor: |s, g, _, _| (-g * s - 0.5 * g * g, -g, 0.0),
        },
        Piece {
            lo: f64::NEG_INFINITY,
            hi: l - gamma,
            taylor: |s, g, l, _| (0.5 * (l - s) * (l - s) - g * l, s - l, 1.0),
        },
    ]
}

/// `E[J(s + scale * Z; gamma, l, u)]` for a fixed `s` and `Z ~ N(0, 1)`.
pub fn smoothed_objective(s: f64, scale: f64, gamma: f64, bounds: BoxBounds) -> f64 {
    if scale == 0.0 {
        return shrinkage_objective(s, gamma, bounds);
    }
    let (l, u) = (bounds.lower(), bounds.upper());
    pieces(gamma, bounds)
        .iter()
        .filter(|p| p.lo < p.hi && p.lo < f64::INFINITY && p.hi > f64::NEG_INFINITY)
        .map(|p| {
            let m = truncated_moments((p.lo - s) / scale, (p.hi - s) / scale)
                .expect("piece endpoints are ordered");
            if m.m0 == 0.0 && m.m2 == 0.0 {
                return 0.0;
            }
            let (value, slope, curvature) = (p.taylor)(s, gamma, l, u);
            value * m.m0 + scale * slope * m.m1 + 0.5 * curvature * scale * scale * m.m2
        })
        .sum()
}

/// `E[J(S + noise_scale * Z; threshold, l, u)]` with `S` drawn from `prior`.
///
/// Discrete priors are integrated exactly; continuous ones use Gauss-Hermite
/// nodes around the same per-point closed form.
pub fn expected_j(noise_scale: f64, threshold: f64, prior: &Prior, bounds: BoxBounds) -> Result<f64> {
    if !noise_scale.is_finite() || noise_scale < 0.0 {
        return Err(Error::invalid("noise_scale", noise_scale, "must be finite and non-negative"));
    }
    if !threshold.is_finite() || threshold < 0.0 {
        return Err(Error::invalid("threshold", threshold, "must be finite and non-negative"));
    }
    Ok(mixture_expectation(&prior.atoms(), noise_scale, threshold, bounds))
}

/// Unchecked core of [`expected_j`] over precomputed `(probability, value)` atoms.
pub(crate) fn mixture_expectation(atoms: &[(f64, f64)], noise_scale: f64, threshold: f64, bounds: BoxBounds) -> f64 {
    atoms
        .iter()
        .map(|&(p, s)| p * smoothed_objective(s, noise_scale, threshold, bounds))
        .sum()
}
