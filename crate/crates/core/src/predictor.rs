//! Asymptotic performance of the Box-LASSO.
//!
//! Every prediction comes from the saddle point `(beta*, lambda*)` of a
//! deterministic objective `G(beta, lambda)` that is concave in `beta` and
//! convex in `lambda`. [`solve_scalar`] locates it with nested golden-section
//! searches and then polishes the first-order conditions with a few Newton
//! steps on finite-difference derivatives.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::config::SystemConfig;
use crate::error::{Error, Result};
use crate::expectation::mixture_expectation;
use crate::gaussian::q_function;
use crate::prior::Prior;
use crate::search::{minimize_positive, PositiveBracket};
use crate::shrinkage::BoxBounds;

/// Saddle point of the scalar max-min problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarSolution {
    pub beta_star: f64,
    pub lambda_star: f64,
    /// `G(beta*, lambda*)`.
    pub objective: f64,
    /// Norm of `(beta dG/dbeta, lambda dG/dlambda)` relative to `max(|G|, 1)`.
    pub stationarity_residual: f64,
    pub gamma: f64,
    /// `E[S^2]` of the prior the solution was computed for.
    pub signal_energy: f64,
}

/// `G(beta, lambda)` with all configuration-dependent constants hoisted.
struct SaddleObjective {
    sqrt_eta: f64,
    data_power: f64,
    est_var: f64,
    noise_floor: f64,
    gamma: f64,
    bounds: BoxBounds,
    atoms: Vec<(f64, f64)>,
}

impl SaddleObjective {
    fn new(cfg: &SystemConfig, gamma: f64, prior: &Prior, bounds: BoxBounds) -> Self {
        let data_power = cfg.data_power();
        SaddleObjective {
            sqrt_eta: cfg.eta.sqrt(),
            data_power,
            est_var: cfg.est_var(),
            noise_floor: 1.0 + prior.second_moment() * data_power * cfg.est_error_var(),
            gamma,
            bounds,
            atoms: prior.atoms(),
        }
    }

    /// Standard deviation of the effective scalar noise.
    fn noise_scale(&self, lambda: f64) -> f64 {
        1.0 / (lambda * self.sqrt_eta * (self.data_power * self.est_var).sqrt())
    }

    fn threshold(&self, beta: f64, lambda: f64) -> f64 {
        self.gamma / (beta * lambda * self.sqrt_eta * self.est_var)
    }

    fn value(&self, beta: f64, lambda: f64) -> f64 {
        let se = self.sqrt_eta;
        let ej = mixture_expectation(
            &self.atoms,
            self.noise_scale(lambda),
            self.threshold(beta, lambda),
            self.bounds,
        );
        beta * se / (2.0 * lambda) + 0.5 * beta * lambda * se * self.noise_floor - 0.25 * beta * beta
            - beta / (2.0 * lambda * se)
            + beta * lambda * se * self.data_power * self.est_var * ej
    }

    /// Central differences in `(ln beta, ln lambda)`.
    fn log_gradient(&self, beta: f64, lambda: f64, h: f64) -> [f64; 2] {
        let (up, down) = (h.exp(), (-h).exp());
        [
            (self.value(beta * up, lambda) - self.value(beta * down, lambda)) / (2.0 * h),
            (self.value(beta, lambda * up) - self.value(beta, lambda * down)) / (2.0 * h),
        ]
    }

    fn log_hessian(&self, beta: f64, lambda: f64, h: f64) -> [[f64; 2]; 2] {
        let (up, down) = (h.exp(), (-h).exp());
        let center = self.value(beta, lambda);
        let bb = (self.value(beta * up, lambda) - 2.0 * center + self.value(beta * down, lambda)) / (h * h);
        let ll = (self.value(beta, lambda * up) - 2.0 * center + self.value(beta, lambda * down)) / (h * h);
        let bl = (self.value(beta * up, lambda * up) - self.value(beta * up, lambda * down)
            - self.value(beta * down, lambda * up)
            + self.value(beta * down, lambda * down))
            / (4.0 * h * h);
        [[bb, bl], [bl, ll]]
    }

    fn residual(&self, beta: f64, lambda: f64) -> f64 {
        let [gb, gl] = self.log_gradient(beta, lambda, GRADIENT_STEP);
        gb.hypot(gl) / self.value(beta, lambda).abs().max(1.0)
    }
}

const GRADIENT_STEP: f64 = 1e-5;
const HESSIAN_STEP: f64 = 1e-4;
const NEWTON_STEPS: usize = 8;

fn check_inputs(cfg: &SystemConfig, gamma: f64, bounds: BoxBounds) -> Result<()> {
    cfg.validate()?;
    if !(gamma.is_finite() && gamma >= 0.0) {
        return Err(Error::invalid("gamma", gamma, "must be finite and non-negative"));
    }
    if gamma == 0.0 && bounds.is_unbounded() && cfg.eta < 1.0 {
        return Err(Error::invalid(
            "gamma",
            gamma,
            "unregularized least squares has no unique minimizer when eta < 1",
        ));
    }
    Ok(())
}

/// `G(beta, lambda)`.
pub fn scalar_objective(
    beta: f64,
    lambda: f64,
    cfg: &SystemConfig,
    gamma: f64,
    prior: &Prior,
    bounds: BoxBounds,
) -> Result<f64> {
    if !(beta.is_finite() && beta > 0.0) {
        return Err(Error::invalid("beta", beta, "must be finite and positive"));
    }
    if !(lambda.is_finite() && lambda > 0.0) {
        return Err(Error::invalid("lambda", lambda, "must be finite and positive"));
    }
    check_inputs(cfg, gamma, bounds)?;
    Ok(SaddleObjective::new(cfg, gamma, prior, bounds).value(beta, lambda))
}

/// Initial search windows for the nested saddle search.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SaddleSearch {
    pub beta: PositiveBracket,
    pub lambda: PositiveBracket,
}

/// Saddle point of `max_{beta > 0} min_{lambda > 0} G` with the default
/// `[1e-3, 1e3]` brackets. `tol` is the relative argument tolerance of the
/// golden-section stage; the final stationarity residual must not exceed
/// `10 * tol`.
pub fn solve_scalar(cfg: &SystemConfig, gamma: f64, prior: &Prior, bounds: BoxBounds, tol: f64) -> Result<ScalarSolution> {
    solve_scalar_with(cfg, gamma, prior, bounds, tol, &SaddleSearch::default())
}

pub fn solve_scalar_with(
    cfg: &SystemConfig,
    gamma: f64,
    prior: &Prior,
    bounds: BoxBounds,
    tol: f64,
    search: &SaddleSearch,
) -> Result<ScalarSolution> {
    check_inputs(cfg, gamma, bounds)?;
    if !(tol.is_finite() && tol > 0.0) {
        return Err(Error::invalid("tol", tol, "must be finite and positive"));
    }
    let g = SaddleObjective::new(cfg, gamma, prior, bounds);

    let mut inner_error = None;
    let inner = |beta: f64, inner_error: &mut Option<Error>| {
        match minimize_positive(|lambda| g.value(beta, lambda), search.lambda, tol, "lambda") {
            Ok(m) => m,
            Err(e) => {
                inner_error.get_or_insert(e);
                crate::search::Minimum {
                    arg: f64::NAN,
                    value: f64::NEG_INFINITY,
                    evaluations: 0,
                }
            }
        }
    };
    let outer = minimize_positive(|beta| -inner(beta, &mut inner_error).value, search.beta, tol, "beta");
    if let Some(e) = inner_error {
        return Err(e);
    }
    let mut beta = outer?.arg;
    let mut lambda = inner(beta, &mut None).arg;

    // Newton polish of the first-order conditions in log coordinates.
    let mut residual = g.residual(beta, lambda);
    for _ in 0..NEWTON_STEPS {
        if residual < 1e-13 {
            break;
        }
        let grad = g.log_gradient(beta, lambda, GRADIENT_STEP);
        let [[a, b], [_, d]] = g.log_hessian(beta, lambda, HESSIAN_STEP);
        let det = a * d - b * b;
        if det == 0.0 || !det.is_finite() {
            break;
        }
        let du = -(d * grad[0] - b * grad[1]) / det;
        let dv = -(a * grad[1] - b * grad[0]) / det;
        if !(du.abs() < 0.1 && dv.abs() < 0.1) {
            break;
        }
        let (nb, nl) = (beta * du.exp(), lambda * dv.exp());
        let next = g.residual(nb, nl);
        if next >= residual {
            break;
        }
        beta = nb;
        lambda = nl;
        residual = next;
    }

    let bound = 10.0 * tol;
    if residual > bound {
        return Err(Error::NotStationary { residual, bound });
    }
    Ok(ScalarSolution {
        beta_star: beta,
        lambda_star: lambda,
        objective: g.value(beta, lambda),
        stationarity_residual: residual,
        gamma,
        signal_energy: prior.second_moment(),
    })
}

/// Repeats the saddle search from `starts` random brackets and fails with
/// [`Error::NonUniqueOptimum`] if the solutions spread by more than `1e-6`
/// relative.
pub fn check_uniqueness(
    cfg: &SystemConfig,
    gamma: f64,
    prior: &Prior,
    bounds: BoxBounds,
    tol: f64,
    starts: usize,
    seed: u64,
) -> Result<Vec<ScalarSolution>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let random_bracket = |rng: &mut ChaCha8Rng| {
        let lo = 10f64.powf(-rng.random_range(0.5..4.0));
        let hi = 10f64.powf(rng.random_range(0.5..4.0));
        PositiveBracket::new(lo, hi)
    };
    let mut solutions = Vec::with_capacity(starts);
    for _ in 0..starts {
        let search = SaddleSearch {
            beta: random_bracket(&mut rng),
            lambda: random_bracket(&mut rng),
        };
        solutions.push(solve_scalar_with(cfg, gamma, prior, bounds, tol, &search)?);
    }
    let spread = |f: fn(&ScalarSolution) -> f64| {
        let (lo, hi) = solutions
            .iter()
            .map(f)
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), x| (lo.min(x), hi.max(x)));
        (hi - lo) / hi.abs()
    };
    let worst = spread(|s| s.beta_star).max(spread(|s| s.lambda_star));
    if worst > 1e-6 {
        return Err(Error::NonUniqueOptimum { spread: worst });
    }
    Ok(solutions)
}

/// `sqrt(eta P_d sigma_H^2) * lambda*`, the inverse effective noise scale.
fn inverse_noise_scale(sol: &ScalarSolution, cfg: &SystemConfig) -> f64 {
    sol.lambda_star * (cfg.eta * cfg.data_power() * cfg.est_var()).sqrt()
}

/// `gamma sqrt(P_d) / (beta* sigma_H)`, the threshold measured in noise units.
fn scaled_threshold(sol: &ScalarSolution, cfg: &SystemConfig, gamma: f64) -> f64 {
    gamma * cfg.data_power().sqrt() / (sol.beta_star * cfg.est_var().sqrt())
}

/// Asymptotic MSE `(1/lambda*^2 - 1 - E[S^2] P_d sigma_w^2) / (P_d sigma_H^2)`.
pub fn predict_mse(sol: &ScalarSolution, cfg: &SystemConfig) -> Result<f64> {
    let pd = cfg.data_power();
    let mse = (1.0 / (sol.lambda_star * sol.lambda_star) - 1.0 - sol.signal_energy * pd * cfg.est_error_var())
        / (pd * cfg.est_var());
    // Values within rounding of zero are accepted as zero.
    if mse < -1e-9 {
        return Err(Error::InconsistentSolution { mse });
    }
    Ok(mse.max(0.0))
}

/// Asymptotic residual `beta*^2 / 4`.
pub fn predict_residual(sol: &ScalarSolution) -> f64 {
    0.25 * sol.beta_star * sol.beta_star
}

/// Asymptotic normalized Box-LASSO cost `G(beta*, lambda*)`.
pub fn predict_objective(sol: &ScalarSolution) -> f64 {
    sol.objective
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SupportProbabilities {
    pub psi_on: f64,
    pub psi_off: f64,
}

/// `P[H(s + c Z) >= zeta] + P[H(s + c Z) <= -zeta]` by inverting the
/// monotone shrinkage map into a pair of Gaussian tails.
fn detection_probability(s: f64, c: f64, t: f64, bounds: BoxBounds, zeta: f64) -> f64 {
    let mut p = 0.0;
    if zeta <= bounds.upper() {
        p += q_function((zeta + t - s) / c);
    }
    if -zeta >= bounds.lower() {
        p += q_function((zeta + t + s) / c);
    }
    p
}

/// `P[|H(c Z)| > zeta]` for an off-support entry.
fn false_alarm_probability(c: f64, t: f64, bounds: BoxBounds, zeta: f64) -> f64 {
    let mut p = 0.0;
    if zeta < bounds.upper() {
        p += q_function((zeta + t) / c);
    }
    if -zeta > bounds.lower() {
        p += q_function((zeta + t) / c);
    }
    p
}

/// Asymptotic on-support (`|s_j| >= zeta`) and off-support (`|s_j| <= zeta`)
/// recovery probabilities for any prior and box.
pub fn predict_support_probs(
    sol: &ScalarSolution,
    cfg: &SystemConfig,
    gamma: f64,
    prior: &Prior,
    bounds: BoxBounds,
    zeta: f64,
) -> Result<SupportProbabilities> {
    if !(zeta.is_finite() && zeta > 0.0) {
        return Err(Error::invalid("zeta", zeta, "must be finite and positive"));
    }
    let c = 1.0 / inverse_noise_scale(sol, cfg);
    let t = gamma / (sol.beta_star * sol.lambda_star * cfg.eta.sqrt() * cfg.est_var());
    let psi_on: f64 = prior
        .nonzero_atoms()
        .into_iter()
        .map(|(p, s)| p * detection_probability(s, c, t, bounds, zeta))
        .sum();
    let psi_off = 1.0 - false_alarm_probability(c, t, bounds, zeta);
    Ok(SupportProbabilities {
        psi_on: psi_on.clamp(0.0, 1.0),
        psi_off: psi_off.clamp(0.0, 1.0),
    })
}

/// Closed forms for a sparse-Bernoulli prior with amplitude `amplitude` and
/// box `[0, amplitude]`.
pub fn bernoulli_support_probs(
    sol: &ScalarSolution,
    cfg: &SystemConfig,
    gamma: f64,
    amplitude: f64,
    zeta: f64,
) -> SupportProbabilities {
    let a = inverse_noise_scale(sol, cfg);
    let b = scaled_threshold(sol, cfg, gamma);
    SupportProbabilities {
        psi_on: q_function((zeta - amplitude) * a + b),
        psi_off: 1.0 - q_function(zeta * a + b),
    }
}

/// Asymptotic element error rate of GSSK detection with threshold `zeta`.
pub fn predict_eer(sol: &ScalarSolution, cfg: &SystemConfig, gamma: f64, zeta: f64) -> Result<f64> {
    if !(zeta > 0.0 && zeta < 1.0) {
        return Err(Error::invalid("zeta", zeta, "must lie in (0, 1)"));
    }
    let a = inverse_noise_scale(sol, cfg);
    let b = scaled_threshold(sol, cfg, gamma);
    Ok(q_function((1.0 - zeta) * a - b) + q_function(zeta * a + b))
}

/// Goodput `(1 - tau_t / tau)(1 - eer)`; negative when `eer > 1`.
pub fn predict_goodput(cfg: &SystemConfig, eer: f64) -> f64 {
    (1.0 - cfg.tau_t / cfg.tau) * (1.0 - eer)
}

/// Every asymptotic metric at one regularizer value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TheoryMetrics {
    pub solution: ScalarSolution,
    pub mse: f64,
    pub residual: f64,
    pub objective: f64,
    pub psi_on: f64,
    pub psi_off: f64,
    /// `2 - psi_on - psi_off`.
    pub eer: f64,
}

pub fn predict_all(
    cfg: &SystemConfig,
    gamma: f64,
    prior: &Prior,
    bounds: BoxBounds,
    zeta: f64,
    tol: f64,
) -> Result<TheoryMetrics> {
    let solution = solve_scalar(cfg, gamma, prior, bounds, tol)?;
    let support = predict_support_probs(&solution, cfg, gamma, prior, bounds, zeta)?;
    Ok(TheoryMetrics {
        solution,
        mse: predict_mse(&solution, cfg)?,
        residual: predict_residual(&solution),
        objective: predict_objective(&solution),
        psi_on: support.psi_on,
        psi_off: support.psi_off,
        eer: 2.0 - support.psi_on - support.psi_off,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::db_to_linear;
    use crate::shrinkage::shrinkage_objective;
    use approx::assert_relative_eq;
    use rand_distr::StandardNormal;

    pub(crate) fn base_setup() -> SystemConfig {
        SystemConfig::new(1.5, 0.2, 500.0 / 128.0, 1.0, 0.5, db_to_linear(15.0), 128).unwrap()
    }

    fn gssk() -> Prior {
        Prior::gssk(0.2).unwrap()
    }

    #[test]
    fn objective_vanishes_as_beta_shrinks() {
        let cfg = base_setup();
        let mut previous = f64::INFINITY;
        for beta in [1e-2, 1e-4, 1e-6, 1e-8] {
            let v = scalar_objective(beta, 0.7, &cfg, 0.1, &gssk(), BoxBounds::unit()).unwrap().abs();
            assert!(v < previous);
            previous = v;
        }
        assert!(previous < 1e-6);
    }

    #[test]
    fn objective_is_concave_in_beta_and_convex_in_lambda() {
        let cfg = base_setup();
        let g = |b, l| scalar_objective(b, l, &cfg, 0.1, &gssk(), BoxBounds::unit()).unwrap();
        let h = 1e-3;
        for i in 1..40 {
            let x = 0.05 * i as f64;
            for &y in &[0.2, 0.6, 1.0, 2.0] {
                assert!(g(x + h, y) - 2.0 * g(x, y) + g(x - h, y) <= 1e-12, "beta {x} lambda {y}");
                assert!(g(y, x + h) - 2.0 * g(y, x) + g(y, x - h) >= -1e-12, "beta {y} lambda {x}");
            }
        }
    }

    #[test]
    fn objective_matches_finite_sample_average() {
        // Sample version of G at n = 10^4 before the law of large numbers is applied.
        let cfg = base_setup();
        let prior = gssk();
        let (beta, lambda, gamma) = (1.0, 1.0, 0.1);
        let n = 10_000;
        let se = cfg.eta.sqrt();
        let (pd, sh) = (cfg.data_power(), cfg.est_var());
        let c1 = 1.0 / (lambda * (cfg.eta * pd * sh).sqrt());
        let c2 = gamma / (beta * lambda * se * sh);
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let (mut z2, mut j, mut s2) = (0.0, 0.0, 0.0);
        for _ in 0..n {
            let s0 = prior.sample(&mut rng);
            let z: f64 = rng.sample(StandardNormal);
            z2 += z * z;
            s2 += s0 * s0;
            j += shrinkage_objective(s0 + c1 * z, c2, BoxBounds::unit());
        }
        let nf = n as f64;
        let sample = beta * se / (2.0 * lambda)
            + 0.5 * beta * lambda * se * (1.0 + pd * cfg.est_error_var() * s2 / nf)
            - 0.25 * beta * beta
            - beta * z2 / nf / (2.0 * lambda * se)
            + beta * lambda * se * pd * sh * j / nf;
        let exact = scalar_objective(beta, lambda, &cfg, gamma, &prior, BoxBounds::unit()).unwrap();
        assert_relative_eq!(exact, sample, max_relative = 0.01);
    }

    #[test]
    fn saddle_point_is_stationary_and_a_saddle() {
        let cfg = base_setup();
        let prior = gssk();
        let sol = solve_scalar(&cfg, 0.1, &prior, BoxBounds::unit(), 1e-9).unwrap();
        assert!(sol.stationarity_residual <= 1e-8);
        let g = |b, l| scalar_objective(b, l, &cfg, 0.1, &prior, BoxBounds::unit()).unwrap();
        let center = g(sol.beta_star, sol.lambda_star);
        for f in [0.9, 0.95, 0.99, 1.01, 1.05, 1.1] {
            assert!(g(sol.beta_star, sol.lambda_star * f) >= center - 1e-12);
            assert!(g(sol.beta_star * f, sol.lambda_star) <= center + 1e-12);
        }
    }

    #[test]
    fn min_max_equals_max_min() {
        let cfg = base_setup();
        let prior = gssk();
        let tol = 1e-9;
        let sol = solve_scalar(&cfg, 0.3, &prior, BoxBounds::unit(), tol).unwrap();
        let g = SaddleObjective::new(&cfg, 0.3, &prior, BoxBounds::unit());
        let inner_max = |lambda: f64| {
            -minimize_positive(|beta| -g.value(beta, lambda), PositiveBracket::default(), tol, "beta")
                .unwrap()
                .value
        };
        let min_max = minimize_positive(inner_max, PositiveBracket::default(), tol, "lambda").unwrap();
        assert_relative_eq!(min_max.value, sol.objective, max_relative = 1e-10);
        assert_relative_eq!(min_max.arg, sol.lambda_star, max_relative = 1e-6);
    }

    #[test]
    fn multi_start_searches_agree() {
        let sols = check_uniqueness(&base_setup(), 0.2, &gssk(), BoxBounds::unit(), 1e-9, 10, 3).unwrap();
        assert_eq!(sols.len(), 10);
    }

    #[test]
    fn perfect_csi_mse_reduces() {
        // The estimation error only vanishes relative to the data power when
        // the data phase is long, since P_d sigma_w^2 ~ nu / ((1 - nu) tau_d).
        let cfg = SystemConfig::new(1.5, 0.2, 1e6, 1.0, 0.5, 1e3, 128).unwrap();
        let sol = solve_scalar(&cfg, 0.05, &gssk(), BoxBounds::unit(), 1e-9).unwrap();
        let pd = cfg.data_power();
        let reduced = (1.0 / sol.lambda_star.powi(2) - 1.0) / pd;
        let mse = predict_mse(&sol, &cfg).unwrap();
        assert_relative_eq!(mse, reduced, max_relative = 1e-5);
    }

    #[test]
    fn negative_mse_is_rejected() {
        let cfg = base_setup();
        let bogus = ScalarSolution {
            beta_star: 1.0,
            lambda_star: 2.0,
            objective: 0.0,
            stationarity_residual: 0.0,
            gamma: 0.1,
            signal_energy: 0.2,
        };
        assert!(matches!(predict_mse(&bogus, &cfg), Err(Error::InconsistentSolution { .. })));
    }

    #[test]
    fn residual_of_zero_beta_is_zero() {
        let sol = ScalarSolution {
            beta_star: 0.0,
            lambda_star: 1.0,
            objective: 0.0,
            stationarity_residual: 0.0,
            gamma: 0.0,
            signal_energy: 0.0,
        };
        assert_eq!(predict_residual(&sol), 0.0);
    }

    #[test]
    fn bernoulli_closed_forms_agree_with_general_path() {
        let cfg = base_setup();
        let prior = gssk();
        for &gamma in &[0.01, 0.1, 1.0] {
            let sol = solve_scalar(&cfg, gamma, &prior, BoxBounds::unit(), 1e-9).unwrap();
            for &zeta in &[0.01, 0.1, 0.5, 0.9] {
                let general = predict_support_probs(&sol, &cfg, gamma, &prior, BoxBounds::unit(), zeta).unwrap();
                let closed = bernoulli_support_probs(&sol, &cfg, gamma, 1.0, zeta);
                assert!((general.psi_on - closed.psi_on).abs() < 1e-8);
                assert!((general.psi_off - closed.psi_off).abs() < 1e-8);
                let eer = predict_eer(&sol, &cfg, gamma, zeta).unwrap();
                assert!((eer - (2.0 - general.psi_on - general.psi_off)).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn large_regularizer_empties_the_support() {
        let cfg = base_setup();
        let prior = gssk();
        let sol = solve_scalar(&cfg, 50.0, &prior, BoxBounds::unit(), 1e-9).unwrap();
        let p = predict_support_probs(&sol, &cfg, 50.0, &prior, BoxBounds::unit(), 0.1).unwrap();
        assert!(p.psi_on < 1e-6 && p.psi_off > 1.0 - 1e-9, "{p:?}");
    }

    #[test]
    fn eer_vanishes_without_noise() {
        let cfg = base_setup();
        let sol = ScalarSolution {
            beta_star: 1.0,
            lambda_star: 1e6,
            objective: 0.0,
            stationarity_residual: 0.0,
            gamma: 0.1,
            signal_energy: 0.2,
        };
        assert!(predict_eer(&sol, &cfg, 0.1, 0.3).unwrap() < 1e-12);
    }

    #[test]
    fn goodput_prefactor() {
        let cfg = SystemConfig::new(1.0, 0.1, 4.0, 2.0, 0.5, 1.0, 10).unwrap();
        assert_relative_eq!(predict_goodput(&cfg, 0.0), 0.5);
        assert_relative_eq!(predict_goodput(&cfg, 1.5), -0.25);
    }

    #[test]
    fn zero_regularizer_rules() {
        let cfg = base_setup();
        assert!(solve_scalar(&cfg, 0.0, &gssk(), BoxBounds::unit(), 1e-9).is_ok());
        let overloaded = SystemConfig { eta: 0.8, ..cfg };
        assert!(solve_scalar(&overloaded, 0.0, &gssk(), BoxBounds::UNBOUNDED, 1e-9).is_err());
    }
}
