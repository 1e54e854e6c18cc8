//! Finite-size Monte-Carlo counterpart of the predictor.
//!
//! Each trial draws a channel estimate and its error, a sparse signal and
//! receiver noise, decodes with [`solve_box_lasso`] and records empirical
//! metrics. Trial `i` reads only ChaCha8 streams derived from `(seed, i)`, so
//! results do not depend on how trials are scheduled across threads.

use nalgebra::{DMatrix, DVector};
use rand::seq::index::sample as sample_indices;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::gaussian::q_function;
use crate::prior::Prior;
use crate::shrinkage::BoxBounds;
use crate::solver::{solve_box_lasso, BoxLassoProblem};

/// How the receiver's channel estimate is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EstimationMode {
    /// Draw the estimate and its error directly from their LMMSE marginals.
    #[default]
    Statistical,
    /// Send orthogonal pilots through the true channel and apply LMMSE.
    ExplicitPilot,
}

/// Unit-variance entry law of the channel estimate in statistical mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ChannelFamily {
    #[default]
    Gaussian,
    Rademacher,
    Laplacian,
}

impl ChannelFamily {
    pub const ALL: [ChannelFamily; 3] = [ChannelFamily::Gaussian, ChannelFamily::Rademacher, ChannelFamily::Laplacian];

    pub fn name(self) -> &'static str {
        match self {
            ChannelFamily::Gaussian => "gaussian",
            ChannelFamily::Rademacher => "rademacher",
            ChannelFamily::Laplacian => "laplacian",
        }
    }

    /// Maps a standard normal draw to this family by matching quantiles, so
    /// every family sees the same underlying randomness.
    pub fn from_normal(self, g: f64) -> f64 {
        match self {
            ChannelFamily::Gaussian => g,
            ChannelFamily::Rademacher => {
                if g < 0.0 {
                    -1.0
                } else {
                    1.0
                }
            }
            ChannelFamily::Laplacian => {
                // Laplace quantile at Phi(g) with scale 1/sqrt(2), giving
                // variance 2 b^2 = 1; the upper tail mass is Q(|g|).
                let tail = 2.0 * q_function(g.abs());
                -std::f64::consts::FRAC_1_SQRT_2 * g.signum() * tail.ln()
            }
        }
    }

    /// One zero-mean, unit-variance draw.
    pub fn sample<R: Rng + ?Sized>(self, rng: &mut R) -> f64 {
        self.from_normal(rng.sample(StandardNormal))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// `H`, `m x n`.
    pub h_true: DMatrix<f64>,
    /// `H_est = H + Omega`.
    pub h_est: DMatrix<f64>,
    /// Per-entry variance of `Omega`.
    pub est_error_var: f64,
}

/// Statistical-mode or pilot-based channel with Gaussian entries.
pub fn generate_channel(cfg: &SystemConfig, rng_seed: u64, mode: EstimationMode) -> Result<ChannelRealization> {
    let mut design = ChaCha8Rng::seed_from_u64(rng_seed);
    let mut error = ChaCha8Rng::seed_from_u64(rng_seed);
    error.set_stream(1);
    generate_channel_with(cfg, mode, ChannelFamily::Gaussian, &mut design, &mut error)
}

/// Channel draw with explicit generators. In statistical mode `design_rng`
/// supplies the estimate and `error_rng` the estimation error; pilot mode
/// uses `design_rng` for `H` and `error_rng` for pilots and pilot noise.
/// `family` applies to statistical mode only.
pub fn generate_channel_with<R1: Rng + ?Sized, R2: Rng + ?Sized>(
    cfg: &SystemConfig,
    mode: EstimationMode,
    family: ChannelFamily,
    design_rng: &mut R1,
    error_rng: &mut R2,
) -> Result<ChannelRealization> {
    cfg.validate()?;
    let (m, n) = (cfg.m(), cfg.n);
    let est_error_var = cfg.est_error_var();
    match mode {
        EstimationMode::Statistical => {
            let (sd_est, sd_err) = (cfg.est_var().sqrt(), est_error_var.sqrt());
            let h_est = DMatrix::from_fn(m, n, |_, _| sd_est * family.sample(design_rng));
            let omega = DMatrix::from_fn(m, n, |_, _| sd_err * error_rng.sample::<f64, _>(StandardNormal));
            Ok(ChannelRealization {
                h_true: &h_est - omega,
                h_est,
                est_error_var,
            })
        }
        EstimationMode::ExplicitPilot => {
            let pilots = cfg.pilots();
            if pilots < n {
                return Err(Error::PilotRankError { antennas: n, pilots });
            }
            let h_true = DMatrix::from_fn(m, n, |_, _| design_rng.sample::<f64, _>(StandardNormal));
            let pilot_power = cfg.pilot_power();
            let s = orthogonal_pilots(n, pilots, error_rng);
            let noise = DMatrix::from_fn(m, pilots, |_, _| error_rng.sample::<f64, _>(StandardNormal));
            let received = &h_true * &s * (pilot_power / n as f64).sqrt() + noise;
            // S S^T = T_t I, so the LMMSE inverse is a scalar.
            let ridge = n as f64 / pilot_power;
            let h_est = received * s.transpose() * ((n as f64 / pilot_power).sqrt() / (pilots as f64 + ridge));
            Ok(ChannelRealization {
                h_true,
                h_est,
                est_error_var,
            })
        }
    }
}

/// `n x t` pilot matrix with `S S^T = t I`: rows of a random orthogonal
/// matrix scaled by `sqrt(t)`.
fn orthogonal_pilots<R: Rng + ?Sized>(n: usize, t: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(t, t, |_, _| rng.sample::<f64, _>(StandardNormal));
    let q = g.qr().q();
    q.rows(0, n).into_owned() * (t as f64).sqrt()
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransmissionInstance {
    pub s0: DVector<f64>,
    /// Active antenna indices in increasing order.
    pub support: Vec<usize>,
    /// `r = sqrt(P_d / n) H s0 + v`.
    pub received: DVector<f64>,
    pub noise: DVector<f64>,
}

/// Fixed-size random support of `round(kappa n)` entries with values drawn
/// from the nonzero part of `prior`, sent through `channel.h_true`.
pub fn generate_transmission<R: Rng + ?Sized>(
    cfg: &SystemConfig,
    prior: &Prior,
    channel: &ChannelRealization,
    rng: &mut R,
) -> Result<TransmissionInstance> {
    let (m, n, k) = (channel.h_true.nrows(), cfg.n, cfg.k());
    if channel.h_true.ncols() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: channel.h_true.ncols(),
        });
    }
    if k == 0 {
        return Err(Error::invalid("kappa", cfg.kappa, "round(kappa n) must be at least 1"));
    }
    let mut support = sample_indices(rng, n, k).into_vec();
    support.sort_unstable();
    let mut s0 = DVector::zeros(n);
    for &j in &support {
        s0[j] = prior.sample_nonzero(rng);
    }
    let noise = DVector::from_fn(m, |_, _| rng.sample::<f64, _>(StandardNormal));
    let received = &channel.h_true * &s0 * (cfg.data_power() / n as f64).sqrt() + &noise;
    Ok(TransmissionInstance {
        s0,
        support,
        received,
        noise,
    })
}

/// GSSK transmission: every active antenna sends 1.
pub fn generate_gssk(cfg: &SystemConfig, channel: &ChannelRealization, rng_seed: u64) -> Result<TransmissionInstance> {
    let prior = Prior::gssk(cfg.kappa)?;
    generate_transmission(cfg, &prior, channel, &mut ChaCha8Rng::seed_from_u64(rng_seed))
}

/// Empirical metrics of one decoded trial.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    /// `||s_hat - s0||^2 / n`.
    pub mse: f64,
    /// `||A s_hat - r||^2 / n`.
    pub residual: f64,
    /// `(||A s_hat - r||^2 + gamma P_d ||s_hat||_1) / n`.
    pub objective: f64,
    pub support_size: usize,
    /// On-support entries with `|s_hat_j| >= zeta`.
    pub on_hits: usize,
    /// On-support entries with `|s_hat_j| <= zeta`.
    pub on_misses: usize,
    /// Off-support entries with `|s_hat_j| <= zeta`.
    pub off_hits: usize,
    /// Off-support entries with `|s_hat_j| >= zeta`.
    pub false_alarms: usize,
    pub iterations: usize,
}

fn ratio(count: usize, total: usize, empty: f64) -> f64 {
    if total == 0 {
        empty
    } else {
        count as f64 / total as f64
    }
}

impl TrialOutcome {
    pub fn psi_on(&self) -> f64 {
        ratio(self.on_hits, self.support_size, 1.0)
    }

    pub fn psi_off(&self, n: usize) -> f64 {
        ratio(self.off_hits, n - self.support_size, 1.0)
    }

    /// Miss rate on the support plus false-alarm rate off it.
    pub fn eer(&self, n: usize) -> f64 {
        ratio(self.on_misses, self.support_size, 0.0) + ratio(self.false_alarms, n - self.support_size, 0.0)
    }
}

/// Sample mean with its standard error.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub mean: f64,
    pub std_err: f64,
}

impl Estimate {
    /// Summation runs in slice order. The standard error is NaN for fewer
    /// than two samples.
    pub fn from_samples(samples: &[f64]) -> Self {
        let count = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / count;
        let std_err = if samples.len() < 2 {
            f64::NAN
        } else {
            let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (count - 1.0);
            (var / count).sqrt()
        };
        Estimate { mean, std_err }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmpiricalMetrics {
    pub mse: Estimate,
    pub residual: Estimate,
    pub objective: Estimate,
    pub psi_on: Estimate,
    pub psi_off: Estimate,
    pub eer: Estimate,
    pub trials: usize,
    /// Per-trial outcomes in trial order.
    pub outcomes: Vec<TrialOutcome>,
}

impl EmpiricalMetrics {
    fn from_outcomes(outcomes: Vec<TrialOutcome>, n: usize) -> Self {
        let column = |f: &dyn Fn(&TrialOutcome) -> f64| {
            Estimate::from_samples(&outcomes.iter().map(f).collect::<Vec<_>>())
        };
        EmpiricalMetrics {
            mse: column(&|o| o.mse),
            residual: column(&|o| o.residual),
            objective: column(&|o| o.objective),
            psi_on: column(&|o| o.psi_on()),
            psi_off: column(&|o| o.psi_off(n)),
            eer: column(&|o| o.eer(n)),
            trials: outcomes.len(),
            outcomes,
        }
    }
}

const DESIGN_STREAM: u64 = 0;
const ERROR_STREAM: u64 = 1;
const SIGNAL_STREAM: u64 = 2;

/// Trial runner for one system configuration and signal prior.
#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarlo {
    pub cfg: SystemConfig,
    pub prior: Prior,
    pub mode: EstimationMode,
    pub family: ChannelFamily,
    pub solver_tol: f64,
    pub max_iter: usize,
    /// Worker threads; results are identical for every value.
    pub threads: usize,
}

impl MonteCarlo {
    pub fn new(cfg: SystemConfig, prior: Prior) -> Self {
        MonteCarlo {
            cfg,
            prior,
            mode: EstimationMode::Statistical,
            family: ChannelFamily::Gaussian,
            solver_tol: 1e-8,
            max_iter: 200_000,
            threads: 1,
        }
    }

    /// GSSK signalling with `kappa` taken from `cfg`.
    pub fn gssk(cfg: SystemConfig) -> Result<Self> {
        Ok(Self::new(cfg, Prior::gssk(cfg.kappa)?))
    }

    pub fn with_mode(mut self, mode: EstimationMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn with_family(mut self, family: ChannelFamily) -> Self {
        self.family = family;
        self
    }

    pub fn with_threads(mut self, threads: usize) -> Self {
        self.threads = threads.max(1);
        self
    }

    pub fn with_solver_tol(mut self, tol: f64) -> Self {
        self.solver_tol = tol;
        self
    }

    /// Generator for sub-stream `stream` of trial `index`. Streams do not
    /// depend on the channel family, so families are compared on coupled
    /// designs with identical errors, signals and noise.
    fn rng(&self, seed: u64, index: usize, stream: u64) -> ChaCha8Rng {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream((index as u64) << 2 | stream);
        rng
    }

    /// Channel and transmission of trial `index`.
    pub fn draw(&self, seed: u64, index: usize) -> Result<(ChannelRealization, TransmissionInstance)> {
        let channel = generate_channel_with(
            &self.cfg,
            self.mode,
            self.family,
            &mut self.rng(seed, index, DESIGN_STREAM),
            &mut self.rng(seed, index, ERROR_STREAM),
        )?;
        let tx = generate_transmission(&self.cfg, &self.prior, &channel, &mut self.rng(seed, index, SIGNAL_STREAM))?;
        Ok((channel, tx))
    }

    /// Decodes trial `index` with regularizer `gamma` (scaled by `P_d` inside
    /// the problem) and threshold `zeta`.
    pub fn run_trial(&self, gamma: f64, bounds: BoxBounds, zeta: f64, seed: u64, index: usize) -> Result<TrialOutcome> {
        let (channel, tx) = self.draw(seed, index)?;
        let n = self.cfg.n;
        let pd = self.cfg.data_power();
        let design = channel.h_est * (pd / n as f64).sqrt();
        let prob = BoxLassoProblem::new(design, tx.received, gamma * pd, bounds)?;
        let report = solve_box_lasso(&prob, self.solver_tol, self.max_iter)?;
        let s_hat = &report.solution;
        let residual_sq = (&prob.design * s_hat - &prob.observation).norm_squared();

        let mut on_support = vec![false; n];
        for &j in &tx.support {
            on_support[j] = true;
        }
        let mut outcome = TrialOutcome {
            mse: (s_hat - &tx.s0).norm_squared() / n as f64,
            residual: residual_sq / n as f64,
            objective: (residual_sq + prob.gamma_scaled * s_hat.lp_norm(1)) / n as f64,
            support_size: tx.support.len(),
            on_hits: 0,
            on_misses: 0,
            off_hits: 0,
            false_alarms: 0,
            iterations: report.iterations,
        };
        for (j, &x) in s_hat.iter().enumerate() {
            let a = x.abs();
            if on_support[j] {
                outcome.on_hits += (a >= zeta) as usize;
                outcome.on_misses += (a <= zeta) as usize;
            } else {
                outcome.off_hits += (a <= zeta) as usize;
                outcome.false_alarms += (a >= zeta) as usize;
            }
        }
        Ok(outcome)
    }

    pub fn run_trials(&self, gamma: f64, bounds: BoxBounds, zeta: f64, trials: usize, seed: u64) -> Result<EmpiricalMetrics> {
        if trials == 0 {
            return Err(Error::invalid("trials", 0.0, "must be at least 1"));
        }
        if !(zeta.is_finite() && zeta > 0.0) {
            return Err(Error::invalid("zeta", zeta, "must be finite and positive"));
        }
        let run = |index: usize| {
            self.run_trial(gamma, bounds, zeta, seed, index).map_err(|e| Error::Trial {
                index,
                source: Box::new(e),
            })
        };
        let threads = self.threads.clamp(1, trials);
        let outcomes: Vec<Result<TrialOutcome>> = if threads == 1 {
            (0..trials).map(run).collect()
        } else {
            let mut slots: Vec<Option<Result<TrialOutcome>>> = vec![None; trials];
            std::thread::scope(|scope| {
                for (worker, chunk) in slots.chunks_mut(trials.div_ceil(threads)).enumerate() {
                    let run = &run;
                    let start = worker * trials.div_ceil(threads);
                    scope.spawn(move || {
                        for (offset, slot) in chunk.iter_mut().enumerate() {
                            *slot = Some(run(start + offset));
                        }
                    });
                }
            });
            slots.into_iter().map(|s| s.expect("every trial slot is filled")).collect()
        };
        let outcomes = outcomes.into_iter().collect::<Result<Vec<_>>>()?;
        Ok(EmpiricalMetrics::from_outcomes(outcomes, self.cfg.n))
    }
}

/// GSSK trials with Gaussian channels and statistical estimation.
pub fn run_trials(
    cfg: &SystemConfig,
    gamma: f64,
    bounds: BoxBounds,
    zeta: f64,
    trials: usize,
    rng_seed: u64,
) -> Result<EmpiricalMetrics> {
    MonteCarlo::gssk(*cfg)?.run_trials(gamma, bounds, zeta, trials, rng_seed)
}
