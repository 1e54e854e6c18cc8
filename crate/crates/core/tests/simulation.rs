//! Monte-Carlo behaviour that needs many trials.

use boxlasso::predictor::predict_all;
use boxlasso::simulator::{EstimationMode, MonteCarlo};
use boxlasso::tuning::SCALAR_TOL;
use boxlasso::{db_to_linear, BoxBounds, Prior, SystemConfig};

#[test]
fn statistical_and_pilot_estimation_agree() {
    let cfg = SystemConfig::from_dimensions(96, 64, 13, 250, 64, 0.5, db_to_linear(15.0)).unwrap();
    let prior = Prior::gssk(cfg.kappa).unwrap();
    let gamma = 0.3;
    let stat = MonteCarlo::new(cfg, prior).run_trials(gamma, BoxBounds::unit(), 0.5, 200, 3).unwrap();
    let pilot = MonteCarlo::new(cfg, prior)
        .with_mode(EstimationMode::ExplicitPilot)
        .run_trials(gamma, BoxBounds::unit(), 0.5, 200, 4)
        .unwrap();
    let z = (stat.mse.mean - pilot.mse.mean).abs() / stat.mse.std_err.hypot(pilot.mse.std_err);
    assert!(z <= 3.0, "two-sample z = {z}: {} vs {}", stat.mse.mean, pilot.mse.mean);
}

#[test]
fn objective_matches_theory() {
    let cfg = SystemConfig::from_dimensions(192, 128, 26, 500, 128, 0.5, db_to_linear(15.0)).unwrap();
    let prior = Prior::gssk(cfg.kappa).unwrap();
    let mc = MonteCarlo::new(cfg, prior);
    for gamma in [0.05, 0.3, 1.5] {
        let theory = predict_all(&cfg, gamma, &prior, BoxBounds::unit(), 0.1, SCALAR_TOL).unwrap();
        let e = mc.run_trials(gamma, BoxBounds::unit(), 0.1, 40, 11).unwrap();
        let rel = (e.objective.mean - theory.objective).abs() / theory.objective;
        assert!(rel <= 0.05, "gamma {gamma}: mc {} theory {}", e.objective.mean, theory.objective);
    }
}
