//! Experiment configuration: a flat TOML document plus command-line overrides.

use std::path::{Path, PathBuf};

use boxlasso::simulator::{ChannelFamily, EstimationMode};
use boxlasso::tuning::{default_gamma_grid, default_nu_grid, default_training_grid, log_grid};
use boxlasso::{db_to_linear, BoxBounds, Prior, SystemConfig};
use serde::Deserialize;

use crate::error::CliError;
use crate::tolerance::Tolerance;
use crate::validate::default_tolerances;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    GammaSweep,
    PowerSweep,
    TrainingSweep,
    SupportCurves,
    EerCurve,
    UniversalityCheck,
    ObjectiveCurve,
}

impl Experiment {
    pub fn name(self) -> &'static str {
        match self {
            Experiment::GammaSweep => "gamma-sweep",
            Experiment::PowerSweep => "power-sweep",
            Experiment::TrainingSweep => "training-sweep",
            Experiment::SupportCurves => "support-curves",
            Experiment::EerCurve => "eer-curve",
            Experiment::UniversalityCheck => "universality-check",
            Experiment::ObjectiveCurve => "objective-curve",
        }
    }

    /// Name of the swept quantity, which is also the first CSV column.
    pub fn sweep_variable(self) -> &'static str {
        match self {
            Experiment::PowerSweep => "nu",
            Experiment::TrainingSweep => "tau_t",
            _ => "gamma",
        }
    }

    /// Whether the experiment is meaningless without Monte-Carlo trials.
    fn needs_trials(self) -> bool {
        !matches!(self, Experiment::PowerSweep | Experiment::TrainingSweep)
    }
}

/// Keys accepted in a configuration file. Every key is optional.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawSpec {
    pub m: Option<usize>,
    pub n: Option<usize>,
    pub k: Option<usize>,
    pub coherence: Option<usize>,
    pub pilots: Option<usize>,
    pub nu: Option<f64>,
    pub power_db: Option<f64>,
    pub power: Option<f64>,

    pub prior: Option<String>,
    pub amplitude: Option<f64>,
    pub variance: Option<f64>,
    pub box_lower: Option<f64>,
    pub box_upper: Option<f64>,
    pub zeta: Option<f64>,

    pub estimation: Option<String>,
    pub family: Option<String>,
    pub families: Option<Vec<String>>,

    pub grid: Option<Vec<f64>>,
    pub grid_min: Option<f64>,
    pub grid_max: Option<f64>,
    pub grid_points: Option<usize>,
    pub grid_scale: Option<String>,

    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub threads: Option<usize>,
    pub solver_tol: Option<f64>,
    pub out: Option<PathBuf>,

    pub tol_mse: Option<String>,
    pub tol_residual: Option<String>,
    pub tol_objective: Option<String>,
    pub tol_psi_on: Option<String>,
    pub tol_psi_off: Option<String>,
    pub tol_eer: Option<String>,
    pub tol_goodput: Option<String>,
    pub universality_max_se: Option<f64>,
}

/// Command-line values that replace the corresponding config keys.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub out: Option<PathBuf>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub threads: Option<usize>,
}

/// A fully validated experiment.
#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    pub experiment: Experiment,
    pub system: SystemConfig,
    pub prior: Prior,
    pub bounds: BoxBounds,
    pub zeta: f64,
    pub estimation: EstimationMode,
    pub family: ChannelFamily,
    pub families: Vec<ChannelFamily>,
    pub grid: Vec<f64>,
    pub trials: usize,
    pub seed: u64,
    pub threads: usize,
    pub solver_tol: f64,
    pub out: PathBuf,
    /// Theory-vs-MC checks recorded in the summary, keyed by metric.
    pub tolerances: Vec<(String, Tolerance)>,
    pub universality_max_se: f64,
}

pub fn parse_toml(text: &str) -> Result<RawSpec, CliError> {
    let table: toml::Table = text
        .parse()
        .map_err(|e: toml::de::Error| CliError::config("config", e.message().to_string()))?;
    // Deserialize key by key so a type error names its key.
    for (key, value) in &table {
        let mut single = toml::Table::new();
        single.insert(key.clone(), value.clone());
        if let Err(e) = RawSpec::deserialize(single) {
            let reason = if e.message().starts_with("unknown field") {
                "unknown key".to_string()
            } else {
                e.message().to_string()
            };
            return Err(CliError::config(key.clone(), reason));
        }
    }
    RawSpec::deserialize(table).map_err(|e| CliError::config("config", e.message().to_string()))
}

pub fn load(experiment: Experiment, path: Option<&Path>, overrides: &Overrides) -> Result<ExperimentSpec, CliError> {
    let raw = match path {
        Some(p) => {
            let text = std::fs::read_to_string(p).map_err(|e| CliError::io(format!("reading {}", p.display()), e))?;
            parse_toml(&text)?
        }
        None => RawSpec::default(),
    };
    build(experiment, raw, overrides)
}

fn require(ok: bool, path: &str, reason: &str) -> Result<(), CliError> {
    if ok {
        Ok(())
    } else {
        Err(CliError::config(path, reason))
    }
}

fn positive(path: &str, v: f64) -> Result<f64, CliError> {
    require(v.is_finite() && v > 0.0, path, "must be finite and positive")?;
    Ok(v)
}

fn parse_family(path: &str, name: &str) -> Result<ChannelFamily, CliError> {
    ChannelFamily::ALL
        .into_iter()
        .find(|f| f.name() == name)
        .ok_or_else(|| CliError::config(path, format!("unknown family `{name}` (gaussian, rademacher, laplacian)")))
}

/// Validates every field of `raw` and applies `overrides`. Defaults are
/// the eta = 1.5, n = 128, P = 15 dB GSSK setup with a [0, 1] box.
pub fn build(experiment: Experiment, raw: RawSpec, overrides: &Overrides) -> Result<ExperimentSpec, CliError> {
    let n = raw.n.unwrap_or(128);
    let m = raw.m.unwrap_or(192);
    let k = raw.k.unwrap_or(26);
    let coherence = raw.coherence.unwrap_or(500);
    let pilots = raw.pilots.unwrap_or(n);
    let nu = raw.nu.unwrap_or(0.5);
    require(n >= 1, "n", "must be at least 1")?;
    require(m >= 1, "m", "must be at least 1")?;
    require(k >= 1 && k < n, "k", "must lie in [1, n)")?;
    require(pilots >= 1, "pilots", "must be at least 1")?;
    require(coherence > pilots, "coherence", "must exceed pilots")?;
    require(nu > 0.0 && nu < 1.0, "nu", "must lie in (0, 1)")?;
    let power = match (raw.power_db, raw.power) {
        (Some(_), Some(_)) => return Err(CliError::config("power", "give either power or power_db, not both")),
        (Some(db), None) => {
            require(db.is_finite(), "power_db", "must be finite")?;
            db_to_linear(db)
        }
        (None, Some(p)) => positive("power", p)?,
        (None, None) => db_to_linear(15.0),
    };
    let system = SystemConfig::from_dimensions(m, n, k, coherence, pilots, nu, power)
        .map_err(|e| CliError::config("system", e.to_string()))?;

    let kappa = system.kappa;
    let prior = match raw.prior.as_deref().unwrap_or("gssk") {
        "gssk" | "bernoulli" => {
            require(raw.variance.is_none(), "variance", "only applies to the sparse-gaussian prior")?;
            let amplitude = raw.amplitude.unwrap_or(1.0);
            require(amplitude.is_finite(), "amplitude", "must be finite")?;
            Prior::new(boxlasso::PriorKind::SparseBernoulli { amplitude }, kappa)
        }
        "sparse-gaussian" => {
            require(raw.amplitude.is_none(), "amplitude", "only applies to the gssk prior")?;
            Prior::sparse_gaussian(kappa, positive("variance", raw.variance.unwrap_or(1.0))?)
        }
        other => return Err(CliError::config("prior", format!("unknown prior `{other}` (gssk, sparse-gaussian)"))),
    }
    .map_err(|e| CliError::config("prior", e.to_string()))?;

    let lower = raw.box_lower.unwrap_or(0.0);
    let upper = raw.box_upper.unwrap_or(1.0);
    require(!lower.is_nan() && lower <= 0.0, "box_lower", "must be at most 0")?;
    require(!upper.is_nan() && upper >= 0.0, "box_upper", "must be at least 0")?;
    let bounds = BoxBounds::new(lower, upper).map_err(|e| CliError::config("box_lower", e.to_string()))?;

    let zeta = positive("zeta", raw.zeta.unwrap_or(0.1))?;
    let estimation = match raw.estimation.as_deref().unwrap_or("statistical") {
        "statistical" => EstimationMode::Statistical,
        "pilot" => EstimationMode::ExplicitPilot,
        other => {
            return Err(CliError::config("estimation", format!("unknown mode `{other}` (statistical, pilot)")));
        }
    };
    if estimation == EstimationMode::ExplicitPilot {
        require(pilots >= n, "pilots", "explicit pilot estimation needs at least n pilots")?;
    }
    let family = parse_family("family", raw.family.as_deref().unwrap_or("gaussian"))?;
    let families = match &raw.families {
        Some(names) => {
            require(names.len() >= 2, "families", "must list at least two families")?;
            names
                .iter()
                .enumerate()
                .map(|(i, name)| parse_family(&format!("families[{i}]"), name))
                .collect::<Result<Vec<_>, _>>()?
        }
        None => ChannelFamily::ALL.to_vec(),
    };

    let grid = build_grid(experiment, &raw, &system)?;

    let trials = overrides.trials.or(raw.trials).unwrap_or(100);
    if experiment.needs_trials() {
        require(trials >= 1, "trials", "must be at least 1 for this experiment")?;
    }
    if experiment == Experiment::UniversalityCheck {
        require(trials >= 2, "trials", "standard errors need at least 2 trials")?;
    }
    let threads = overrides.threads.or(raw.threads).unwrap_or(1);
    require(threads >= 1, "threads", "must be at least 1")?;
    let solver_tol = positive("solver_tol", raw.solver_tol.unwrap_or(1e-8))?;

    let mut tolerances = default_tolerances();
    for (metric, given) in [
        ("mse", &raw.tol_mse),
        ("residual", &raw.tol_residual),
        ("objective", &raw.tol_objective),
        ("psi_on", &raw.tol_psi_on),
        ("psi_off", &raw.tol_psi_off),
        ("eer", &raw.tol_eer),
        ("goodput", &raw.tol_goodput),
    ] {
        if let Some(text) = given {
            let tol = text
                .parse::<Tolerance>()
                .map_err(|reason| CliError::config(format!("tol_{metric}"), reason))?;
            let slot = tolerances.iter_mut().find(|(m, _)| m == metric).expect("every metric has a default");
            slot.1 = tol;
        }
    }
    let universality_max_se = positive("universality_max_se", raw.universality_max_se.unwrap_or(2.0))?;

    Ok(ExperimentSpec {
        experiment,
        system,
        prior,
        bounds,
        zeta,
        estimation,
        family,
        families,
        grid,
        trials,
        seed: overrides.seed.or(raw.seed).unwrap_or(1),
        threads,
        solver_tol,
        out: overrides.out.clone().or(raw.out).unwrap_or_else(|| PathBuf::from("results")),
        tolerances,
        universality_max_se,
    })
}

fn build_grid(experiment: Experiment, raw: &RawSpec, system: &SystemConfig) -> Result<Vec<f64>, CliError> {
    let ranged = raw.grid_min.is_some() || raw.grid_max.is_some() || raw.grid_points.is_some() || raw.grid_scale.is_some();
    let grid = match (&raw.grid, ranged) {
        (Some(_), true) => {
            return Err(CliError::config("grid", "give either grid or grid_min/grid_max/grid_points, not both"));
        }
        (Some(list), false) => list.clone(),
        (None, true) => {
            let points = raw.grid_points.ok_or_else(|| CliError::config("grid_points", "is required with grid_min"))?;
            let lo = raw.grid_min.ok_or_else(|| CliError::config("grid_min", "is required with grid_points"))?;
            let hi = raw.grid_max.ok_or_else(|| CliError::config("grid_max", "is required with grid_points"))?;
            require(lo.is_finite() && hi.is_finite() && lo <= hi, "grid_max", "must be finite and at least grid_min")?;
            match raw.grid_scale.as_deref().unwrap_or("log") {
                "log" => {
                    require(lo > 0.0, "grid_min", "must be positive on a log scale")?;
                    log_grid(lo, hi, points)
                }
                "linear" => match points {
                    0 => Vec::new(),
                    1 => vec![lo],
                    _ => (0..points).map(|i| lo + (hi - lo) * i as f64 / (points - 1) as f64).collect(),
                },
                other => return Err(CliError::config("grid_scale", format!("unknown scale `{other}` (log, linear)"))),
            }
        }
        (None, false) => match experiment {
            Experiment::PowerSweep => default_nu_grid(),
            Experiment::TrainingSweep => default_training_grid(system.tau),
            _ => default_gamma_grid(),
        },
    };
    let path = if raw.grid.is_some() { "grid" } else { "grid_points" };
    require(!grid.is_empty(), path, "grid is empty")?;
    for (i, &x) in grid.iter().enumerate() {
        let ok = match experiment {
            Experiment::PowerSweep => x > 0.0 && x < 1.0,
            Experiment::TrainingSweep => x > 0.0 && x < system.tau,
            _ => x.is_finite() && x > 0.0,
        };
        if !ok {
            let reason = match experiment {
                Experiment::PowerSweep => "nu values must lie in (0, 1)",
                Experiment::TrainingSweep => "tau_t values must lie in (0, tau)",
                _ => "gamma values must be finite and positive",
            };
            return Err(CliError::config(format!("grid[{i}]"), reason));
        }
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(CliError::config(path, "grid must be strictly increasing"));
    }
    Ok(grid)
}
