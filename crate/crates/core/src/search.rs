//! Derivative-free one-dimensional minimization.

use crate::error::{Error, Result};

const INV_PHI: f64 = 0.618_033_988_749_894_9;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub arg: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Golden-section search for a unimodal `f` on `[lo, hi]`, stopping once the
/// bracket is shorter than `tol`. Returns the best point evaluated.
pub fn golden_section<F: FnMut(f64) -> f64>(mut f: F, lo: f64, hi: f64, tol: f64) -> Minimum {
    let (mut a, mut b) = (lo.min(hi), lo.max(hi));
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    let mut evaluations = 2;
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
        evaluations += 1;
    }
    let (arg, value) = if fc <= fd { (c, fc) } else { (d, fd) };
    Minimum {
        arg,
        value,
        evaluations,
    }
}

/// Search window for a strictly positive parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PositiveBracket {
    pub lo: f64,
    pub hi: f64,
    /// Expansion stops at `[limit_lo, limit_hi]`.
    pub limit_lo: f64,
    pub limit_hi: f64,
    pub expansion: f64,
}

impl Default for PositiveBracket {
    fn default() -> Self {
        PositiveBracket {
            lo: 1e-3,
            hi: 1e3,
            limit_lo: 1e-6,
            limit_hi: 1e6,
            expansion: 10.0,
        }
    }
}

impl PositiveBracket {
    pub fn new(lo: f64, hi: f64) -> Self {
        PositiveBracket {
            lo,
            hi,
            ..Default::default()
        }
    }
}

/// Minimizes `f` over `x > 0` by golden section on `ln x`, widening the
/// bracket whenever the optimum lands on one of its edges. `tol` is an
/// absolute tolerance on `ln x`, i.e. a relative tolerance on `x`.
pub fn minimize_positive<F: FnMut(f64) -> f64>(
    mut f: F,
    bracket: PositiveBracket,
    tol: f64,
    parameter: &'static str,
) -> Result<Minimum> {
    let (mut lo, mut hi) = (bracket.lo.ln(), bracket.hi.ln());
    let (limit_lo, limit_hi) = (bracket.limit_lo.ln(), bracket.limit_hi.ln());
    let grow = bracket.expansion.ln();
    let mut evaluations = 0;
    loop {
        let found = golden_section(|t| f(t.exp()), lo, hi, tol);
        evaluations += found.evaluations;
        let edge = 4.0 * tol;
        let at_lo = found.arg - lo < edge;
        let at_hi = hi - found.arg < edge;
        if !at_lo && !at_hi {
            return Ok(Minimum {
                arg: found.arg.exp(),
                value: found.value,
                evaluations,
            });
        }
        if at_lo {
            if lo <= limit_lo + 1e-12 {
                return Err(Error::NoInteriorOptimum {
                    parameter,
                    limit: bracket.limit_lo,
                });
            }
            lo = (lo - grow).max(limit_lo);
            hi = found.arg + grow.min(hi - found.arg);
        } else {
            if hi >= limit_hi - 1e-12 {
                return Err(Error::NoInteriorOptimum {
                    parameter,
                    limit: bracket.limit_hi,
                });
            }
            hi = (hi + grow).min(limit_hi);
            lo = found.arg - grow.min(found.arg - lo);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn finds_parabola_vertex() {
        let m = golden_section(|x| (x - 0.3) * (x - 0.3), -1.0, 2.0, 1e-10);
        assert!((m.arg - 0.3).abs() < 1e-10);
        assert!(m.value < 1e-20);
    }

    #[test]
    fn expands_to_reach_outside_optimum() {
        let target: f64 = 5e4;
        let m = minimize_positive(|x| (x.ln() - target.ln()).powi(2), PositiveBracket::default(), 1e-10, "x")
            .unwrap();
        assert_relative_eq!(m.arg, target, max_relative = 1e-7);
        let small = 3e-5;
        let m = minimize_positive(|x| (x / small - 1.0).powi(2), PositiveBracket::default(), 1e-10, "x")
            .unwrap();
        assert_relative_eq!(m.arg, small, max_relative = 1e-6);
    }

    #[test]
    fn reports_boundary_optimum() {
        let err = minimize_positive(|x| -x, PositiveBracket::default(), 1e-8, "x").unwrap_err();
        assert!(matches!(err, Error::NoInteriorOptimum { parameter: "x", .. }));
        let err = minimize_positive(|x| x, PositiveBracket::default(), 1e-8, "x").unwrap_err();
        assert!(matches!(err, Error::NoInteriorOptimum { .. }));
    }
}
