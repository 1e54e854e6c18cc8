//! Saturated shrinkage: the proximal operator of `gamma * |s|` restricted to an
//! interval, together with its optimal value.

use crate::error::{Error, Result};

/// An interval `[lower, upper]` containing zero. Either end may be infinite;
/// the fully unbounded box turns the Box-LASSO into the standard LASSO.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoxBounds {
    lower: f64,
    upper: f64,
}

impl BoxBounds {
    pub const UNBOUNDED: BoxBounds = BoxBounds {
        lower: f64::NEG_INFINITY,
        upper: f64::INFINITY,
    };

    pub fn new(lower: f64, upper: f64) -> Result<Self> {
        if lower.is_nan() || upper.is_nan() || lower > 0.0 || upper < 0.0 {
            return Err(Error::InvalidBox { lower, upper });
        }
        Ok(BoxBounds { lower, upper })
    }

    /// `[0, 1]`, the natural box for GSSK symbols.
    pub fn unit() -> Self {
        BoxBounds {
            lower: 0.0,
            upper: 1.0,
        }
    }

    /// `[-r, r]` for `r >= 0`.
    pub fn symmetric(radius: f64) -> Result<Self> {
        Self::new(-radius, radius)
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn is_unbounded(&self) -> bool {
        self.lower == f64::NEG_INFINITY && self.upper == f64::INFINITY
    }

    pub fn contains(&self, s: f64) -> bool {
        s >= self.lower && s <= self.upper
    }

    pub fn clamp(&self, s: f64) -> f64 {
        s.max(self.lower).min(self.upper)
    }
}

/// `argmin_{l <= s <= u} (s - a)^2 / 2 + gamma |s|`.
///
/// Cases are tested top to bottom; neighbouring cases agree at every boundary.
pub fn saturated_shrinkage(a: f64, gamma: f64, bounds: BoxBounds) -> f64 {
    let (l, u) = (bounds.lower, bounds.upper);
    if a >= u + gamma {
        u
    } else if a > gamma {
        (a - gamma).min(u)
    } else if a >= -gamma {
        0.0
    } else if a > l - gamma {
        (a + gamma).max(l)
    } else {
        l
    }
}

/// `min_{l <= s <= u} (s - a)^2 / 2 + gamma |s|`, in closed form.
pub fn shrinkage_objective(a: f64, gamma: f64, bounds: BoxBounds) -> f64 {
    let (l, u) = (bounds.lower, bounds.upper);
    if a >= u + gamma {
        0.5 * (u - a) * (u - a) + gamma * u
    } else if a > gamma {
        gamma * a - 0.5 * gamma * gamma
    } else if a >= -gamma {
        0.5 * a * a
    } else if a > l - gamma {
        -gamma * a - 0.5 * gamma * gamma
    } else {
        0.5 * (l - a) * (l - a) - gamma * l
    }
}
