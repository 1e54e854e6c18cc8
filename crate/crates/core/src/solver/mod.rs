//! Finite-dimensional Box-LASSO decoder.
//!
//! Minimizes `||A s - r||^2 + gamma_scaled * ||s||_1` over `s` in a box with
//! FISTA, restarting the momentum whenever the objective increases. The
//! proximal step is elementwise saturated shrinkage.

mod oracle;

pub use oracle::{brute_force_oracle, exhaustive_pattern_oracle};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::shrinkage::{saturated_shrinkage, BoxBounds};

#[derive(Debug, Clone, PartialEq)]
pub struct BoxLassoProblem {
    /// `A = sqrt(P_d / n) * H_est`, `m x n`.
    pub design: DMatrix<f64>,
    /// `r`, length `m`.
    pub observation: DVector<f64>,
    /// `gamma * P_d`.
    pub gamma_scaled: f64,
    pub bounds: BoxBounds,
}

impl BoxLassoProblem {
    pub fn new(design: DMatrix<f64>, observation: DVector<f64>, gamma_scaled: f64, bounds: BoxBounds) -> Result<Self> {
        let prob = BoxLassoProblem {
            design,
            observation,
            gamma_scaled,
            bounds,
        };
        prob.validate()?;
        Ok(prob)
    }

    fn validate(&self) -> Result<()> {
        if self.observation.len() != self.design.nrows() {
            return Err(Error::DimensionMismatch {
                expected: self.design.nrows(),
                found: self.observation.len(),
            });
        }
        if self.design.nrows() == 0 || self.design.ncols() == 0 {
            return Err(Error::DimensionMismatch {
                expected: 1,
                found: 0,
            });
        }
        if !(self.gamma_scaled.is_finite() && self.gamma_scaled >= 0.0) {
            return Err(Error::invalid("gamma_scaled", self.gamma_scaled, "must be finite and non-negative"));
        }
        if let Some(&bad) = self.design.iter().chain(self.observation.iter()).find(|x| !x.is_finite()) {
            return Err(Error::invalid("design", bad, "entries must be finite"));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.design.ncols()
    }

    /// `||A s - r||^2 + gamma_scaled ||s||_1`.
    pub fn objective(&self, s: &DVector<f64>) -> f64 {
        (&self.design * s - &self.observation).norm_squared() + self.gamma_scaled * s.lp_norm(1)
    }

    fn gradient(&self, s: &DVector<f64>) -> DVector<f64> {
        self.design.tr_mul(&(&self.design * s - &self.observation)) * 2.0
    }

    fn prox(&self, v: &DVector<f64>, threshold: f64) -> DVector<f64> {
        v.map(|x| saturated_shrinkage(x, threshold, self.bounds))
    }

    /// `||s - prox(s - grad f(s))||_inf` with unit step.
    pub fn kkt_residual(&self, s: &DVector<f64>) -> f64 {
        let step = s - self.gradient(s);
        (s - self.prox(&step, self.gamma_scaled)).amax()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolverReport {
    pub solution: DVector<f64>,
    pub iterations: usize,
    pub final_objective: f64,
    pub kkt_residual: f64,
}

/// `sigma_max(A)^2` by power iteration on `A^T A`.
fn spectral_norm_squared(a: &DMatrix<f64>) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut v = DVector::from_fn(a.ncols(), |_, _| rng.random::<f64>() - 0.5);
    let norm = v.norm();
    if norm == 0.0 {
        return 0.0;
    }
    v /= norm;
    let mut estimate = 0.0;
    for _ in 0..10_000 {
        let w = a.tr_mul(&(a * &v));
        let next = w.norm();
        if next == 0.0 {
            return 0.0;
        }
        v = w / next;
        if (next - estimate).abs() <= 1e-6 * next {
            return next;
        }
        estimate = next;
    }
    estimate
}

/// Power iteration converges from below, so the Lipschitz constant gets a
/// small margin.
const LIPSCHITZ_MARGIN: f64 = 1.01;

/// Solves the Box-LASSO from `s = 0`.
///
/// Stops once the relative objective change drops below `tol` and the unit
/// step KKT residual is at most `10 * tol`. Running out of iterations yields
/// [`Error::MaxIterExceeded`] carrying the best iterate.
pub fn solve_box_lasso(prob: &BoxLassoProblem, tol: f64, max_iter: usize) -> Result<SolverReport> {
    prob.validate()?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::invalid("tol", tol, "must be finite and positive"));
    }
    let n = prob.dim();
    let mut x = DVector::zeros(n);
    let mut fx = prob.objective(&x);
    let lipschitz = 2.0 * spectral_norm_squared(&prob.design) * LIPSCHITZ_MARGIN;
    if lipschitz == 0.0 {
        // f is constant, and zero minimizes the penalty over any box.
        return Ok(SolverReport {
            kkt_residual: prob.kkt_residual(&x),
            solution: x,
            iterations: 0,
            final_objective: fx,
        });
    }
    let step = 1.0 / lipschitz;
    let threshold = prob.gamma_scaled * step;

    let mut y = x.clone();
    let mut t = 1.0_f64;
    let mut kkt = f64::INFINITY;
    for iter in 1..=max_iter {
        let mut next = prob.prox(&(&y - prob.gradient(&y) * step), threshold);
        let mut f_next = prob.objective(&next);
        if f_next > fx {
            // Restart: drop the momentum and take a plain proximal step.
            t = 1.0;
            next = prob.prox(&(&x - prob.gradient(&x) * step), threshold);
            f_next = prob.objective(&next);
            y = next.clone();
        } else {
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            y = &next + (&next - &x) * ((t - 1.0) / t_next);
            t = t_next;
        }
        let change = (fx - f_next).abs() / f_next.abs().max(f64::MIN_POSITIVE);
        // Near the optimum the objective stops resolving progress, so the
        // plain step is accepted even when rounding reports a tiny increase.
        x = next;
        fx = f_next;
        if change < tol {
            kkt = prob.kkt_residual(&x);
            if kkt <= 10.0 * tol {
                return Ok(SolverReport {
                    solution: x,
                    iterations: iter,
                    final_objective: fx,
                    kkt_residual: kkt,
                });
            }
        }
    }
    if kkt.is_infinite() {
        kkt = prob.kkt_residual(&x);
    }
    Err(Error::MaxIterExceeded(Box::new(SolverReport {
        solution: x,
        iterations: max_iter,
        final_objective: fx,
        kkt_residual: kkt,
    })))
}

/// GSSK hard decision: ones at the `k` largest entries of `s_hat`, lowest
/// index first among ties.
pub fn gssk_map(s_hat: &[f64], k: usize) -> Vec<u8> {
    let mut order: Vec<usize> = (0..s_hat.len()).collect();
    order.sort_by(|&i, &j| s_hat[j].total_cmp(&s_hat[i]).then(i.cmp(&j)));
    let mut map = vec![0u8; s_hat.len()];
    for &i in order.iter().take(k) {
        map[i] = 1;
    }
    map
}
