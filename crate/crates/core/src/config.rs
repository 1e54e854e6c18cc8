//! System dimensions, coherence-interval split and power budget.

use crate::error::{Error, Result};

/// Dimensionless description of a training-based massive MIMO link.
///
/// All ratios are normalized by the number of transmit antennas `n`; powers
/// are linear. `n` only matters for finite-size simulation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemConfig {
    /// Receive-to-transmit antenna ratio `m / n`.
    pub eta: f64,
    /// Fraction of active transmit antennas `k / n`.
    pub kappa: f64,
    /// Normalized coherence interval `T / n`.
    pub tau: f64,
    /// Normalized training length `T_t / n`.
    pub tau_t: f64,
    /// Fraction of the interval energy spent on data.
    pub nu: f64,
    /// Average total transmit power `P`.
    pub total_power: f64,
    pub n: usize,
}

impl SystemConfig {
    pub fn new(eta: f64, kappa: f64, tau: f64, tau_t: f64, nu: f64, total_power: f64, n: usize) -> Result<Self> {
        let cfg = SystemConfig {
            eta,
            kappa,
            tau,
            tau_t,
            nu,
            total_power,
            n,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Builds a configuration from integer dimensions: `m` receive and `n`
    /// transmit antennas, `k` active antennas, coherence interval `coherence`
    /// with `pilots` training symbols.
    pub fn from_dimensions(
        m: usize,
        n: usize,
        k: usize,
        coherence: usize,
        pilots: usize,
        nu: f64,
        total_power: f64,
    ) -> Result<Self> {
        if n == 0 {
            return Err(Error::invalid("n", 0.0, "must be at least 1"));
        }
        let nf = n as f64;
        Self::new(
            m as f64 / nf,
            k as f64 / nf,
            coherence as f64 / nf,
            pilots as f64 / nf,
            nu,
            total_power,
            n,
        )
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::invalid(name, v, "must be finite and positive"))
            }
        };
        positive("eta", self.eta)?;
        positive("total_power", self.total_power)?;
        if !(self.kappa > 0.0 && self.kappa < 1.0) {
            return Err(Error::invalid("kappa", self.kappa, "must lie in (0, 1)"));
        }
        if !(self.tau.is_finite() && self.tau > 1.0) {
            return Err(Error::invalid("tau", self.tau, "must exceed 1"));
        }
        if !(self.tau_t >= 1.0 && self.tau_t < self.tau) {
            return Err(Error::invalid("tau_t", self.tau_t, "must lie in [1, tau)"));
        }
        if !(self.nu > 0.0 && self.nu < 1.0) {
            return Err(Error::invalid("nu", self.nu, "must lie in (0, 1)"));
        }
        if self.n == 0 {
            return Err(Error::invalid("n", 0.0, "must be at least 1"));
        }
        Ok(())
    }

    pub fn with_nu(&self, nu: f64) -> Result<Self> {
        let cfg = SystemConfig { nu, ..*self };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_tau_t(&self, tau_t: f64) -> Result<Self> {
        let cfg = SystemConfig { tau_t, ..*self };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_total_power(&self, total_power: f64) -> Result<Self> {
        let cfg = SystemConfig { total_power, ..*self };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Normalized data length `tau - tau_t`.
    pub fn tau_d(&self) -> f64 {
        self.tau - self.tau_t
    }

    /// Data-symbol power `P_d = nu P tau / tau_d`.
    pub fn data_power(&self) -> f64 {
        self.nu * self.total_power * self.tau / self.tau_d()
    }

    /// Pilot-symbol power `P_t = (1 - nu) P tau / tau_t`.
    pub fn pilot_power(&self) -> f64 {
        (1.0 - self.nu) * self.total_power * self.tau / self.tau_t
    }

    /// Per-entry variance of the channel estimation error, `1 / (1 + P_t tau_t)`.
    pub fn est_error_var(&self) -> f64 {
        1.0 / (1.0 + self.pilot_power() * self.tau_t)
    }

    /// Per-entry variance of the channel estimate, `1 - est_error_var`.
    pub fn est_var(&self) -> f64 {
        let p = self.pilot_power() * self.tau_t;
        p / (1.0 + p)
    }

    /// Receive antennas `round(eta n)`.
    pub fn m(&self) -> usize {
        (self.eta * self.n as f64).round().max(1.0) as usize
    }

    /// Active antennas `round(kappa n)`.
    pub fn k(&self) -> usize {
        (self.kappa * self.n as f64).round() as usize
    }

    /// Training symbols `round(tau_t n)`.
    pub fn pilots(&self) -> usize {
        (self.tau_t * self.n as f64).round() as usize
    }

    /// Coherence interval `round(tau n)`.
    pub fn coherence(&self) -> usize {
        (self.tau * self.n as f64).round() as usize
    }
}
