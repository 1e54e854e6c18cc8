//! Box-LASSO decoding for GSSK-modulated massive MIMO under imperfect CSI.
//!
//! The crate has two halves that are meant to be compared against each other:
//!
//! * an asymptotic predictor ([`predictor`]) that solves a deterministic
//!   two-variable max-min problem and turns its saddle point into MSE,
//!   residual, objective, support-recovery, EER and goodput predictions;
//! * a finite-dimensional Monte-Carlo engine ([`simulator`]) that draws
//!   channels, LMMSE estimates and GSSK signals and decodes them with an
//!   accelerated proximal-gradient Box-LASSO solver ([`solver`]).
//!
//! [`tuning`] builds regularizer, power-allocation and training-length
//! optimizers on top of the predictor.

pub mod config;
pub mod error;
pub mod expectation;
pub mod gaussian;
pub mod predictor;
pub mod prior;
pub mod quadrature;
pub mod search;
pub mod shrinkage;
pub mod simulator;
pub mod solver;
pub mod tuning;

pub use config::SystemConfig;
pub use error::{Error, Result};
pub use expectation::expected_j;
pub use gaussian::{normal_density, q_function, truncated_moments, TruncatedGaussianMoments};
pub use predictor::{
    predict_eer, predict_goodput, predict_mse, predict_objective, predict_residual,
    predict_support_probs, scalar_objective, solve_scalar, ScalarSolution, SupportProbabilities,
};
pub use prior::{sample_prior, Prior, PriorKind};
pub use shrinkage::{saturated_shrinkage, shrinkage_objective, BoxBounds};
pub use solver::{gssk_map, solve_box_lasso, BoxLassoProblem, SolverReport};

/// Converts a power given in decibels to linear scale.
pub fn db_to_linear(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}
