//! Regularizer, power-split and training-length optimization on top of the
//! asymptotic predictions.
//!
//! Every search is a fixed grid followed by golden-section refinement inside
//! the cells adjacent to the best grid point. The power and training sweeps
//! re-tune the regularizer at each point they visit.

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::predictor::{predict_mse, predict_support_probs, solve_scalar};
use crate::prior::Prior;
use crate::search::golden_section;
use crate::shrinkage::BoxBounds;

/// Argument tolerance of every scalar saddle solve made here.
pub const SCALAR_TOL: f64 = 1e-9;

pub const GAMMA_GRID_LO: f64 = 1e-3;
pub const GAMMA_GRID_HI: f64 = 1e2;
pub const GAMMA_GRID_POINTS: usize = 25;
pub const NU_GRID_POINTS: usize = 49;
pub const TRAINING_GRID_POINTS: usize = 25;

/// Golden-section tolerance used in the refinement stage, in the sweep's own
/// coordinate (`ln gamma` for regularizer sweeps).
const REFINE_TOL: f64 = 1e-4;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub argopt: f64,
    pub opt_value: f64,
    /// The best grid point is the first or last one.
    pub at_boundary: bool,
    /// Discrete differences of `values` change sign at most once.
    pub unimodal: bool,
    /// `opt_value` is a maximum rather than a minimum.
    pub maximize: bool,
}

impl SweepResult {
    pub fn best_index(&self) -> usize {
        best_index(&self.values, self.maximize)
    }
}

fn best_index(values: &[f64], maximize: bool) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate() {
        let better = if maximize { v > values[best] } else { v < values[best] };
        if better {
            best = i;
        }
    }
    best
}

fn sign_changes(values: &[f64]) -> usize {
    let signs: Vec<f64> = values
        .windows(2)
        .map(|w| w[1] - w[0])
        .filter(|d| *d != 0.0)
        .map(f64::signum)
        .collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Grid evaluation plus refinement between the neighbours of the best point.
/// With `log_scale` the refinement runs in `ln x`.
fn sweep<F: FnMut(f64) -> Result<f64>>(grid: Vec<f64>, mut f: F, maximize: bool, log_scale: bool) -> Result<SweepResult> {
    if grid.is_empty() {
        return Err(Error::invalid("grid", 0.0, "must contain at least one point"));
    }
    let values = grid.iter().map(|&x| f(x)).collect::<Result<Vec<_>>>()?;
    let best = best_index(&values, maximize);
    let (mut argopt, mut opt_value) = (grid[best], values[best]);
    if grid.len() >= 2 {
        let lo = grid[best.saturating_sub(1)];
        let hi = grid[(best + 1).min(grid.len() - 1)];
        let (to, from): (fn(f64) -> f64, fn(f64) -> f64) = if log_scale { (f64::ln, f64::exp) } else { (|x| x, |x| x) };
        let sign = if maximize { -1.0 } else { 1.0 };
        let mut failure = None;
        let refined = golden_section(
            |t| match f(from(t)) {
                Ok(v) => sign * v,
                Err(e) => {
                    failure.get_or_insert(e);
                    f64::INFINITY
                }
            },
            to(lo),
            to(hi),
            REFINE_TOL,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        let value = sign * refined.value;
        if sign * value < sign * opt_value {
            argopt = from(refined.arg).clamp(lo, hi);
            opt_value = value;
        }
    }
    Ok(SweepResult {
        at_boundary: best == 0 || best + 1 == grid.len(),
        unimodal: sign_changes(&values) <= 1,
        grid,
        values,
        argopt,
        opt_value,
        maximize,
    })
}

/// `points` log-spaced values from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    if points == 1 {
        return vec![lo];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..points)
        .map(|i| (a + (b - a) * i as f64 / (points - 1) as f64).exp())
        .collect()
}

pub fn default_gamma_grid() -> Vec<f64> {
    log_grid(GAMMA_GRID_LO, GAMMA_GRID_HI, GAMMA_GRID_POINTS)
}

/// What a regularizer sweep optimizes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Criterion {
    /// Minimize the asymptotic MSE.
    Mse,
    /// Minimize `2 - psi_on - psi_off` at threshold `zeta`.
    Eer { zeta: f64 },
    /// Maximize `theta psi_on + (1 - theta) psi_off`.
    WeightedSupport { theta: f64, zeta: f64 },
}

impl Criterion {
    pub fn validate(self) -> Result<()> {
        let zeta = match self {
            Criterion::Mse => return Ok(()),
            Criterion::Eer { zeta } => zeta,
            Criterion::WeightedSupport { theta, zeta } => {
                if !(0.0..=1.0).contains(&theta) {
                    return Err(Error::invalid("theta", theta, "must lie in [0, 1]"));
                }
                zeta
            }
        };
        if !(zeta.is_finite() && zeta > 0.0) {
            return Err(Error::invalid("zeta", zeta, "must be finite and positive"));
        }
        Ok(())
    }

    pub fn maximize(self) -> bool {
        matches!(self, Criterion::WeightedSupport { .. })
    }

    /// Criterion value at one regularizer.
    pub fn evaluate(self, cfg: &SystemConfig, gamma: f64, prior: &Prior, bounds: BoxBounds) -> Result<f64> {
        let sol = solve_scalar(cfg, gamma, prior, bounds, SCALAR_TOL)?;
        match self {
            Criterion::Mse => predict_mse(&sol, cfg),
            Criterion::Eer { zeta } => {
                let p = predict_support_probs(&sol, cfg, gamma, prior, bounds, zeta)?;
                Ok(2.0 - p.psi_on - p.psi_off)
            }
            Criterion::WeightedSupport { theta, zeta } => {
                let p = predict_support_probs(&sol, cfg, gamma, prior, bounds, zeta)?;
                Ok(theta * p.psi_on + (1.0 - theta) * p.psi_off)
            }
        }
    }
}

/// Best regularizer on the default 25-point grid over `[1e-3, 1e2]`.
pub fn optimal_gamma(cfg: &SystemConfig, prior: &Prior, bounds: BoxBounds, criterion: Criterion) -> Result<SweepResult> {
    optimal_gamma_on(cfg, prior, bounds, criterion, default_gamma_grid())
}

/// Best regularizer over a caller-supplied increasing positive grid.
pub fn optimal_gamma_on(
    cfg: &SystemConfig,
    prior: &Prior,
    bounds: BoxBounds,
    criterion: Criterion,
    grid: Vec<f64>,
) -> Result<SweepResult> {
    criterion.validate()?;
    if let Some(&bad) = grid.iter().find(|g| !(g.is_finite() && **g > 0.0)) {
        return Err(Error::invalid("gamma", bad, "grid values must be finite and positive"));
    }
    sweep(grid, |gamma| criterion.evaluate(cfg, gamma, prior, bounds), criterion.maximize(), true)
}

/// `nu = i / 50` for `i = 1..=49`.
pub fn default_nu_grid() -> Vec<f64> {
    (1..=NU_GRID_POINTS).map(|i| i as f64 / (NU_GRID_POINTS + 1) as f64).collect()
}

/// Data-energy ratio minimizing `criterion` (MSE or EER) with the
/// regularizer re-tuned at every `nu`.
pub fn optimal_power_allocation(
    template: &SystemConfig,
    prior: &Prior,
    bounds: BoxBounds,
    criterion: Criterion,
) -> Result<SweepResult> {
    optimal_power_allocation_on(template, prior, bounds, criterion, default_nu_grid())
}

/// Power allocation over a caller-supplied increasing grid inside `(0, 1)`.
pub fn optimal_power_allocation_on(
    template: &SystemConfig,
    prior: &Prior,
    bounds: BoxBounds,
    criterion: Criterion,
    grid: Vec<f64>,
) -> Result<SweepResult> {
    if criterion.maximize() {
        return Err(Error::invalid("criterion", 0.0, "power allocation minimizes MSE or EER"));
    }
    criterion.validate()?;
    sweep(
        grid,
        |nu| Ok(optimal_gamma(&template.with_nu(nu)?, prior, bounds, criterion)?.opt_value),
        false,
        false,
    )
}

/// Data-energy ratio maximizing the effective SNR.
pub fn closed_form_nu(cfg: &SystemConfig) -> Result<f64> {
    let tau_d = cfg.tau_d();
    if !(tau_d > 0.0) {
        return Err(Error::invalid("tau_d", tau_d, "must be positive"));
    }
    if tau_d == 1.0 {
        return Ok(0.5);
    }
    let p_tau = cfg.total_power * cfg.tau;
    let theta = (1.0 + p_tau) / (p_tau * (1.0 - 1.0 / tau_d));
    let root = (theta * (theta - 1.0)).sqrt();
    // theta -/+ root rewritten to avoid cancellation as tau_d approaches 1.
    Ok(if tau_d > 1.0 {
        theta / (theta + root)
    } else {
        theta / (theta - root)
    })
}

/// `TRAINING_GRID_POINTS` evenly spaced training lengths in `[1, tau)`.
pub fn default_training_grid(tau: f64) -> Vec<f64> {
    (0..TRAINING_GRID_POINTS)
        .map(|i| 1.0 + (tau - 1.0) * i as f64 / TRAINING_GRID_POINTS as f64)
        .collect()
}

/// Asymptotic goodput with the regularizer tuned for minimum EER.
pub fn tuned_goodput(cfg: &SystemConfig, prior: &Prior, bounds: BoxBounds, zeta: f64) -> Result<f64> {
    let eer = optimal_gamma(cfg, prior, bounds, Criterion::Eer { zeta })?.opt_value;
    Ok(crate::predictor::predict_goodput(cfg, eer))
}

/// Training length maximizing the tuned goodput.
pub fn optimal_training(template: &SystemConfig, prior: &Prior, bounds: BoxBounds, zeta: f64) -> Result<SweepResult> {
    optimal_training_on(template, prior, bounds, zeta, default_training_grid(template.tau))
}

pub fn optimal_training_on(
    template: &SystemConfig,
    prior: &Prior,
    bounds: BoxBounds,
    zeta: f64,
    grid: Vec<f64>,
) -> Result<SweepResult> {
    Criterion::Eer { zeta }.validate()?;
    sweep(
        grid,
        |tau_t| tuned_goodput(&template.with_tau_t(tau_t)?, prior, bounds, zeta),
        true,
        false,
    )
}
