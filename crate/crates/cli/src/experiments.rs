//! Experiment protocols: each produces one table and one summary document.

use std::collections::BTreeSet;

use boxlasso::predictor::{predict_all, TheoryMetrics};
use boxlasso::simulator::{ChannelFamily, EmpiricalMetrics, EstimationMode, MonteCarlo};
use boxlasso::tuning::{
    closed_form_nu, optimal_gamma, optimal_gamma_on, optimal_power_allocation_on, optimal_training_on, Criterion,
    SweepResult, SCALAR_TOL,
};
use boxlasso::{predict_goodput, PriorKind};
use serde_json::{json, Map, Value};

use crate::error::{at, CliError};
use crate::spec::{Experiment, ExperimentSpec};
use crate::table::{Cell, Table};
use crate::validate::check_metric;

const GAMMA_SWEEP: &[&str] = &[
    "gamma",
    "beta_star",
    "lambda_star",
    "mse_theory",
    "mse_mc",
    "mse_mc_se",
    "residual_theory",
    "residual_mc",
    "residual_mc_se",
    "objective_theory",
    "objective_mc",
    "objective_mc_se",
    "psi_on_theory",
    "psi_on_mc",
    "psi_on_mc_se",
    "psi_off_theory",
    "psi_off_mc",
    "psi_off_mc_se",
    "eer_theory",
    "eer_mc",
    "eer_mc_se",
    "trials",
];
const SUPPORT_CURVES: &[&str] = &[
    "gamma",
    "psi_on_theory",
    "psi_on_mc",
    "psi_on_mc_se",
    "psi_off_theory",
    "psi_off_mc",
    "psi_off_mc_se",
    "trials",
];
const EER_CURVE: &[&str] = &["gamma", "eer_theory", "eer_mc", "eer_mc_se", "trials"];
const OBJECTIVE_CURVE: &[&str] = &["gamma", "objective_theory", "objective_mc", "objective_mc_se", "trials"];
const POWER_SWEEP: &[&str] = &[
    "nu",
    "gamma_mse",
    "mse_theory",
    "mse_mc",
    "mse_mc_se",
    "gamma_eer",
    "eer_theory",
    "eer_mc",
    "eer_mc_se",
    "trials",
];
const TRAINING_SWEEP: &[&str] = &[
    "tau_t",
    "gamma_eer",
    "eer_theory",
    "eer_mc",
    "eer_mc_se",
    "goodput_theory",
    "goodput_mc",
    "goodput_mc_se",
    "trials",
];

fn universality_columns(families: &[ChannelFamily]) -> Vec<String> {
    let mut cols = vec!["gamma".to_string(), "mse_theory".to_string()];
    for f in families {
        cols.push(format!("mse_{}", f.name()));
        cols.push(format!("mse_{}_se", f.name()));
    }
    cols.push("trials".to_string());
    cols
}

/// Every column name any experiment can emit.
pub fn known_columns() -> BTreeSet<String> {
    let mut set: BTreeSet<String> = [GAMMA_SWEEP, SUPPORT_CURVES, EER_CURVE, OBJECTIVE_CURVE, POWER_SWEEP, TRAINING_SWEEP]
        .iter()
        .flat_map(|cols| cols.iter().map(|c| c.to_string()))
        .collect();
    set.extend(universality_columns(&ChannelFamily::ALL));
    set
}

pub struct ExperimentOutput {
    pub table: Table,
    pub summary: Value,
}

/// JSON number, or its text for infinities and NaN.
fn num(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        json!(x.to_string())
    }
}

fn sweep_json(r: &SweepResult) -> Value {
    json!({
        "argopt": num(r.argopt),
        "opt_value": num(r.opt_value),
        "grid_argopt": num(r.grid[r.best_index()]),
        "at_boundary": r.at_boundary,
        "unimodal": r.unimodal,
    })
}

fn grid_argmin(grid: &[f64], values: &[f64]) -> Value {
    let mut best: Option<usize> = None;
    for (i, v) in values.iter().enumerate() {
        if v.is_finite() && best.is_none_or(|b| *v < values[b]) {
            best = Some(i);
        }
    }
    best.map_or(Value::Null, |i| num(grid[i]))
}

fn f(x: f64) -> Cell {
    Cell::Float(x)
}

fn estimate(e: &boxlasso::simulator::Estimate) -> [Cell; 2] {
    [f(e.mean), f(e.std_err)]
}

struct Runner<'a> {
    spec: &'a ExperimentSpec,
    mc: MonteCarlo,
}

impl<'a> Runner<'a> {
    fn new(spec: &'a ExperimentSpec) -> Self {
        let mc = MonteCarlo::new(spec.system, spec.prior)
            .with_mode(spec.estimation)
            .with_family(spec.family)
            .with_threads(spec.threads)
            .with_solver_tol(spec.solver_tol);
        Runner { spec, mc }
    }

    fn var(&self) -> &'static str {
        self.spec.experiment.sweep_variable()
    }

    fn theory(&self, gamma: f64) -> Result<TheoryMetrics, CliError> {
        let s = self.spec;
        at(
            || format!("theory at gamma = {gamma}"),
            predict_all(&s.system, gamma, &s.prior, s.bounds, s.zeta, SCALAR_TOL),
        )
    }

    fn simulate_with(&self, mc: &MonteCarlo, gamma: f64, context: impl Fn() -> String) -> Result<EmpiricalMetrics, CliError> {
        let s = self.spec;
        at(context, mc.run_trials(gamma, s.bounds, s.zeta, s.trials, s.seed))
    }

    fn simulate(&self, gamma: f64) -> Result<EmpiricalMetrics, CliError> {
        self.simulate_with(&self.mc, gamma, || format!("simulation at gamma = {gamma}"))
    }

    /// Summary checks for every metric with a configured tolerance whose
    /// columns appear in `table`.
    fn checks(&self, table: &Table) -> Value {
        let sweep = table.column(self.var()).expect("sweep column");
        let mut out = Vec::new();
        for (metric, tol) in &self.spec.tolerances {
            if let (Some(t), Some(m)) = (
                table.column(&format!("{metric}_theory")),
                table.column(&format!("{metric}_mc")),
            ) {
                if m.iter().all(|x| x.is_nan()) {
                    continue;
                }
                out.push(check_metric(metric, *tol, &sweep, &t, &m).to_json());
            }
        }
        Value::Array(out)
    }

    fn gamma_sweep(&self) -> Result<ExperimentOutput, CliError> {
        let mut table = Table::new(GAMMA_SWEEP);
        for &g in &self.spec.grid {
            let t = self.theory(g)?;
            let e = self.simulate(g)?;
            let mut row = vec![f(g), f(t.solution.beta_star), f(t.solution.lambda_star)];
            for (theory, mc) in [
                (t.mse, &e.mse),
                (t.residual, &e.residual),
                (t.objective, &e.objective),
                (t.psi_on, &e.psi_on),
                (t.psi_off, &e.psi_off),
                (t.eer, &e.eer),
            ] {
                row.push(f(theory));
                row.extend(estimate(mc));
            }
            row.push(Cell::Int(e.trials as u64));
            table.push(row);
        }
        let s = self.spec;
        let refined = at(
            || "tuning gamma for MSE".into(),
            optimal_gamma_on(&s.system, &s.prior, s.bounds, Criterion::Mse, s.grid.clone()),
        )?;
        let argopt = json!({
            "mse_theory": sweep_json(&refined),
            "mse_mc_grid_argmin": grid_argmin(&s.grid, &table.column("mse_mc").unwrap()),
        });
        let checks = self.checks(&table);
        Ok(ExperimentOutput {
            summary: self.summary(argopt, checks, Map::new()),
            table,
        })
    }

    fn support_curves(&self) -> Result<ExperimentOutput, CliError> {
        let mut table = Table::new(SUPPORT_CURVES);
        for &g in &self.spec.grid {
            let t = self.theory(g)?;
            let e = self.simulate(g)?;
            let mut row = vec![f(g), f(t.psi_on)];
            row.extend(estimate(&e.psi_on));
            row.push(f(t.psi_off));
            row.extend(estimate(&e.psi_off));
            row.push(Cell::Int(e.trials as u64));
            table.push(row);
        }
        let checks = self.checks(&table);
        Ok(ExperimentOutput {
            summary: self.summary(json!({}), checks, Map::new()),
            table,
        })
    }

    fn eer_curve(&self) -> Result<ExperimentOutput, CliError> {
        let mut table = Table::new(EER_CURVE);
        for &g in &self.spec.grid {
            let t = self.theory(g)?;
            let e = self.simulate(g)?;
            let mut row = vec![f(g), f(t.eer)];
            row.extend(estimate(&e.eer));
            row.push(Cell::Int(e.trials as u64));
            table.push(row);
        }
        let s = self.spec;
        let refined = at(
            || "tuning gamma for EER".into(),
            optimal_gamma_on(&s.system, &s.prior, s.bounds, Criterion::Eer { zeta: s.zeta }, s.grid.clone()),
        )?;
        let argopt = json!({
            "eer_theory": sweep_json(&refined),
            "eer_mc_grid_argmin": grid_argmin(&s.grid, &table.column("eer_mc").unwrap()),
        });
        let checks = self.checks(&table);
        Ok(ExperimentOutput {
            summary: self.summary(argopt, checks, Map::new()),
            table,
        })
    }

    fn objective_curve(&self) -> Result<ExperimentOutput, CliError> {
        let mut table = Table::new(OBJECTIVE_CURVE);
        for &g in &self.spec.grid {
            let t = self.theory(g)?;
            let e = self.simulate(g)?;
            let mut row = vec![f(g), f(t.objective)];
            row.extend(estimate(&e.objective));
            row.push(Cell::Int(e.trials as u64));
            table.push(row);
        }
        let checks = self.checks(&table);
        Ok(ExperimentOutput {
            summary: self.summary(json!({}), checks, Map::new()),
            table,
        })
    }

    /// Monte-Carlo estimate on `cfg`, or NaNs when trials are disabled.
    fn tuned_mc(
        &self,
        cfg: boxlasso::SystemConfig,
        gamma: f64,
        pick: fn(&EmpiricalMetrics) -> &boxlasso::simulator::Estimate,
        context: impl Fn() -> String,
    ) -> Result<[Cell; 2], CliError> {
        if self.spec.trials == 0 {
            return Ok([f(f64::NAN), f(f64::NAN)]);
        }
        let mc = MonteCarlo { cfg, ..self.mc.clone() };
        Ok(estimate(pick(&self.simulate_with(&mc, gamma, context)?)))
    }

    fn power_sweep(&self) -> Result<ExperimentOutput, CliError> {
        let s = self.spec;
        let mse = Criterion::Mse;
        let eer = Criterion::Eer { zeta: s.zeta };
        let mut table = Table::new(POWER_SWEEP);
        for &nu in &s.grid {
            let cfg = at(|| format!("nu = {nu}"), s.system.with_nu(nu))?;
            let by_mse = at(|| format!("tuning gamma for MSE at nu = {nu}"), optimal_gamma(&cfg, &s.prior, s.bounds, mse))?;
            let by_eer = at(|| format!("tuning gamma for EER at nu = {nu}"), optimal_gamma(&cfg, &s.prior, s.bounds, eer))?;
            let mut row = vec![f(nu), f(by_mse.argopt), f(by_mse.opt_value)];
            row.extend(self.tuned_mc(cfg, by_mse.argopt, |e| &e.mse, || format!("simulation at nu = {nu}"))?);
            row.extend([f(by_eer.argopt), f(by_eer.opt_value)]);
            row.extend(self.tuned_mc(cfg, by_eer.argopt, |e| &e.eer, || format!("simulation at nu = {nu}"))?);
            row.push(Cell::Int(s.trials as u64));
            table.push(row);
        }
        let by_mse = at(
            || "power allocation for MSE".into(),
            optimal_power_allocation_on(&s.system, &s.prior, s.bounds, mse, s.grid.clone()),
        )?;
        let by_eer = at(
            || "power allocation for EER".into(),
            optimal_power_allocation_on(&s.system, &s.prior, s.bounds, eer, s.grid.clone()),
        )?;
        let closed = at(|| "closed-form power allocation".into(), closed_form_nu(&s.system))?;
        let argopt = json!({
            "nu_mse": sweep_json(&by_mse),
            "nu_eer": sweep_json(&by_eer),
            "nu_closed_form": num(closed),
        });
        let checks = self.checks(&table);
        Ok(ExperimentOutput {
            summary: self.summary(argopt, checks, Map::new()),
            table,
        })
    }

    fn training_sweep(&self) -> Result<ExperimentOutput, CliError> {
        let s = self.spec;
        let eer = Criterion::Eer { zeta: s.zeta };
        let mut table = Table::new(TRAINING_SWEEP);
        for &tau_t in &s.grid {
            let cfg = at(|| format!("tau_t = {tau_t}"), s.system.with_tau_t(tau_t))?;
            let tuned = at(
                || format!("tuning gamma for EER at tau_t = {tau_t}"),
                optimal_gamma(&cfg, &s.prior, s.bounds, eer),
            )?;
            let mut row = vec![f(tau_t), f(tuned.argopt), f(tuned.opt_value)];
            let [eer_mc, eer_se] = self.tuned_mc(cfg, tuned.argopt, |e| &e.eer, || format!("simulation at tau_t = {tau_t}"))?;
            row.extend([eer_mc, eer_se]);
            let factor = 1.0 - cfg.tau_t / cfg.tau;
            row.push(f(predict_goodput(&cfg, tuned.opt_value)));
            let (Cell::Float(m), Cell::Float(se)) = (eer_mc, eer_se) else {
                unreachable!("estimates are floats")
            };
            row.extend([f(factor * (1.0 - m)), f(factor * se)]);
            row.push(Cell::Int(s.trials as u64));
            table.push(row);
        }
        let best = at(
            || "training-length sweep".into(),
            optimal_training_on(&s.system, &s.prior, s.bounds, s.zeta, s.grid.clone()),
        )?;
        let argopt = json!({
            "tau_t_goodput": sweep_json(&best),
            "best_at_first_point": best.best_index() == 0,
        });
        let checks = self.checks(&table);
        Ok(ExperimentOutput {
            summary: self.summary(argopt, checks, Map::new()),
            table,
        })
    }

    fn universality_check(&self) -> Result<ExperimentOutput, CliError> {
        let s = self.spec;
        let columns = universality_columns(&s.families);
        let mut table = Table {
            columns,
            rows: Vec::new(),
        };
        let mut worst: (f64, f64) = (0.0, f64::NAN);
        for &g in &s.grid {
            let t = self.theory(g)?;
            let mut row = vec![f(g), f(t.mse)];
            let mut estimates = Vec::new();
            for &family in &s.families {
                let mc = self.mc.clone().with_family(family);
                let e = self.simulate_with(&mc, g, || format!("{} simulation at gamma = {g}", family.name()))?;
                row.extend(estimate(&e.mse));
                estimates.push(e.mse);
            }
            for a in 0..estimates.len() {
                for b in a + 1..estimates.len() {
                    let gap = (estimates[a].mean - estimates[b].mean).abs();
                    let combined = estimates[a].std_err.hypot(estimates[b].std_err);
                    let z = if gap == 0.0 { 0.0 } else { gap / combined };
                    if !(z <= worst.0) {
                        worst = (z, g);
                    }
                }
            }
            row.push(Cell::Int(s.trials as u64));
            table.push(row);
        }
        let mut extra = Map::new();
        extra.insert(
            "universality".into(),
            json!({
                "families": s.families.iter().map(|f| f.name()).collect::<Vec<_>>(),
                "max_gap_standard_errors": num(worst.0),
                "worst_gamma": num(worst.1),
                "bound_standard_errors": s.universality_max_se,
                "pass": worst.0 <= s.universality_max_se,
            }),
        );
        Ok(ExperimentOutput {
            summary: self.summary(json!({}), json!([]), extra),
            table,
        })
    }

    fn summary(&self, argopt: Value, checks: Value, extra: Map<String, Value>) -> Value {
        let s = self.spec;
        let c = &s.system;
        let prior = match s.prior.kind() {
            PriorKind::SparseBernoulli { amplitude } => json!({"kind": "gssk", "amplitude": amplitude}),
            PriorKind::SparseGaussian { variance } => json!({"kind": "sparse-gaussian", "variance": variance}),
            PriorKind::PointMassZero => json!({"kind": "zero"}),
        };
        let mut doc = Map::new();
        doc.insert("experiment".into(), json!(s.experiment.name()));
        doc.insert("seed".into(), json!(s.seed));
        doc.insert("trials".into(), json!(s.trials));
        doc.insert(
            "system".into(),
            json!({
                "m": c.m(),
                "n": c.n,
                "k": c.k(),
                "coherence": c.coherence(),
                "pilots": c.pilots(),
                "eta": c.eta,
                "kappa": c.kappa,
                "tau": c.tau,
                "tau_t": c.tau_t,
                "nu": c.nu,
                "total_power": c.total_power,
                "data_power": c.data_power(),
                "pilot_power": c.pilot_power(),
                "est_error_var": c.est_error_var(),
            }),
        );
        doc.insert("prior".into(), prior);
        doc.insert("second_moment".into(), num(s.prior.second_moment()));
        doc.insert("box".into(), json!([num(s.bounds.lower()), num(s.bounds.upper())]));
        doc.insert("zeta".into(), num(s.zeta));
        doc.insert(
            "estimation".into(),
            json!(match s.estimation {
                EstimationMode::Statistical => "statistical",
                EstimationMode::ExplicitPilot => "pilot",
            }),
        );
        doc.insert("family".into(), json!(s.family.name()));
        doc.insert("solver_tol".into(), num(s.solver_tol));
        doc.insert("grid_points".into(), json!(s.grid.len()));
        doc.insert("argopt".into(), argopt);
        let all_pass = checks.as_array().is_some_and(|a| a.iter().all(|c| c["pass"] == json!(true)))
            && extra.get("universality").is_none_or(|u| u["pass"] == json!(true));
        doc.insert("checks".into(), checks);
        doc.extend(extra);
        doc.insert("checks_passed".into(), json!(all_pass));
        Value::Object(doc)
    }
}

pub fn run(spec: &ExperimentSpec) -> Result<ExperimentOutput, CliError> {
    let r = Runner::new(spec);
    match spec.experiment {
        Experiment::GammaSweep => r.gamma_sweep(),
        Experiment::SupportCurves => r.support_curves(),
        Experiment::EerCurve => r.eer_curve(),
        Experiment::ObjectiveCurve => r.objective_curve(),
        Experiment::PowerSweep => r.power_sweep(),
        Experiment::TrainingSweep => r.training_sweep(),
        Experiment::UniversalityCheck => r.universality_check(),
    }
}
