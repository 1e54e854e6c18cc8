//! Distribution of a single entry of the transmitted signal.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::quadrature::GaussHermite;

/// Law of a nonzero signal entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PriorKind {
    /// Nonzero entries equal `amplitude`.
    SparseBernoulli { amplitude: f64 },
    /// Nonzero entries are `N(0, variance)`.
    SparseGaussian { variance: f64 },
    /// Every entry is zero; `sparsity` is ignored.
    PointMassZero,
}

/// Sparse prior `(1 - sparsity) delta_0 + sparsity * kind`.
///
/// Parameters are stored raw: nothing forces `E[S^2] = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Prior {
    kind: PriorKind,
    sparsity: f64,
}

impl Prior {
    pub fn new(kind: PriorKind, sparsity: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&sparsity) {
            return Err(Error::invalid("sparsity", sparsity, "must lie in [0, 1]"));
        }
        match kind {
            PriorKind::SparseBernoulli { amplitude } if !amplitude.is_finite() => {
                return Err(Error::invalid("amplitude", amplitude, "must be finite"));
            }
            PriorKind::SparseGaussian { variance } if !(variance.is_finite() && variance > 0.0) => {
                return Err(Error::invalid("variance", variance, "must be finite and positive"));
            }
            _ => {}
        }
        Ok(Prior { kind, sparsity })
    }

    /// Sparse-Bernoulli with unit amplitude: the GSSK alphabet `{0, 1}`.
    pub fn gssk(sparsity: f64) -> Result<Self> {
        Self::new(PriorKind::SparseBernoulli { amplitude: 1.0 }, sparsity)
    }

    pub fn sparse_gaussian(sparsity: f64, variance: f64) -> Result<Self> {
        Self::new(PriorKind::SparseGaussian { variance }, sparsity)
    }

    pub fn point_mass_zero() -> Self {
        Prior {
            kind: PriorKind::PointMassZero,
            sparsity: 0.0,
        }
    }

    pub fn kind(&self) -> PriorKind {
        self.kind
    }

    pub fn sparsity(&self) -> f64 {
        match self.kind {
            PriorKind::PointMassZero => 0.0,
            _ => self.sparsity,
        }
    }

    /// `E[S^2]` under the full mixture.
    pub fn second_moment(&self) -> f64 {
        self.sparsity() * self.nonzero_second_moment()
    }

    /// `E[S^2]` for an on-support entry.
    pub fn nonzero_second_moment(&self) -> f64 {
        match self.kind {
            PriorKind::SparseBernoulli { amplitude } => amplitude * amplitude,
            PriorKind::SparseGaussian { variance } => variance,
            PriorKind::PointMassZero => 0.0,
        }
    }

    /// `(probability, value)` pairs for an on-support entry. Continuous laws
    /// are discretized with the shared Gauss-Hermite rule.
    pub fn nonzero_atoms(&self) -> Vec<(f64, f64)> {
        match self.kind {
            PriorKind::SparseBernoulli { amplitude } => vec![(1.0, amplitude)],
            PriorKind::SparseGaussian { variance } => {
                GaussHermite::standard().normal_atoms(variance).collect()
            }
            PriorKind::PointMassZero => vec![(1.0, 0.0)],
        }
    }

    /// `(probability, value)` pairs for the full mixture.
    pub fn atoms(&self) -> Vec<(f64, f64)> {
        let kappa = self.sparsity();
        let mut atoms = Vec::new();
        if kappa < 1.0 {
            atoms.push((1.0 - kappa, 0.0));
        }
        if kappa > 0.0 {
            atoms.extend(self.nonzero_atoms().into_iter().map(|(p, s)| (kappa * p, s)));
        }
        atoms
    }

    /// One draw from the law of an on-support entry.
    pub fn sample_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.kind {
            PriorKind::SparseBernoulli { amplitude } => amplitude,
            PriorKind::SparseGaussian { variance } => {
                Normal::new(0.0, variance.sqrt()).expect("validated variance").sample(rng)
            }
            PriorKind::PointMassZero => 0.0,
        }
    }

    /// One draw from the full mixture.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let kappa = self.sparsity();
        if kappa > 0.0 && rng.random::<f64>() < kappa {
            self.sample_nonzero(rng)
        } else {
            0.0
        }
    }
}

/// `count` i.i.d. draws; the support size is random, not fixed at `sparsity * count`.
pub fn sample_prior(prior: &Prior, count: usize, rng_seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    (0..count).map(|_| prior.sample(&mut rng)).collect()
}
