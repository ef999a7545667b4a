//! `constants`, `simulate` and `sweep`.

use std::fmt::Write as _;
use std::path::Path;

use hrnet_core::constants::entry_time;
use hrnet_core::domain::{poincare_constants, EigenSettings};
use hrnet_core::metrics::{envelope_check, fit_sync_rate, Observer, SyncFit};
use hrnet_core::{simulate, HRParameters, Model, PoincareMode, TrajectoryRecord};
use rayon::prelude::*;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{num, trajectory_csv, write_atomic};

fn fmt_value(x: f64) -> String {
    if x.is_finite() {
        num(x)
    } else {
        x.to_string()
    }
}

/// Key-value listing printed by `constants` and mirrored in `constants.csv`.
pub struct ConstantsTable {
    pub entries: Vec<(String, String)>,
}

impl ConstantsTable {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    pub fn block(&self) -> String {
        let width = self.entries.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.entries {
            let _ = writeln!(out, "{k:<width$} = {v}");
        }
        out
    }

    pub fn csv(&self) -> String {
        let keys: Vec<&str> = self.entries.iter().map(|(k, _)| k.as_str()).collect();
        let vals: Vec<&str> = self.entries.iter().map(|(_, v)| v.as_str()).collect();
        format!("{}\n{}\n", keys.join(","), vals.join(","))
    }
}

fn param_entries(p: &HRParameters) -> Vec<(String, String)> {
    let mut out: Vec<(String, String)> = HRParameters::SCALAR_NAMES
        .iter()
        .map(|name| (name.to_string(), num(p.scalar(name).unwrap())))
        .collect();
    out.push(("N".into(), p.n.to_string()));
    out
}

pub fn constants_table(cfg: &RunConfig, domain_only: bool) -> Result<ConstantsTable, CliError> {
    if domain_only {
        let domain = cfg.domain()?;
        let pc = poincare_constants(&domain, cfg.domain.poincare, &EigenSettings::default())
            .map_err(|e| CliError::invalid("domain", e))?;
        return Ok(ConstantsTable {
            entries: vec![
                ("eta1".into(), num(pc.eta1)),
                ("eta2".into(), num(pc.eta2)),
                ("omega_measure".into(), num(domain.omega_measure())),
            ],
        });
    }
    let model = cfg.model()?;
    let mut entries = param_entries(&model.params);
    for (name, value) in hrnet_core::DerivedConstants::NAMES
        .iter()
        .zip(model.constants.values())
    {
        entries.push((name.to_string(), num(value)));
    }
    let analytic = poincare_constants(&model.domain, PoincareMode::Analytic, &EigenSettings::default())
        .map_err(|e| CliError::invalid("domain", e))?;
    entries.push(("eta1_analytic".into(), num(analytic.eta1)));
    entries.push(("eta2_analytic".into(), num(analytic.eta2)));
    entries.push(("omega_measure_analytic".into(), num(model.domain.analytic_measure())));

    let state = cfg
        .initial
        .generate(model.n(), &model.domain)
        .map_err(|e| CliError::invalid("initial", e))?;
    let rho0 = Observer::new(&model).observe(0.0, &state.fields).total_energy;
    entries.push(("rho0".into(), num(rho0)));
    entries.push(("T0".into(), num(entry_time(rho0, &model.constants))));
    Ok(ConstantsTable { entries })
}

/// Prints the constants block and writes `constants.csv`.
pub fn cmd_constants(cfg: &RunConfig, out_dir: &Path, domain_only: bool) -> Result<String, CliError> {
    let table = constants_table(cfg, domain_only)?;
    write_atomic(&out_dir.join("constants.csv"), table.csv().as_bytes())?;
    Ok(table.block())
}

/// Outcome of one simulation with its analysis.
pub struct RunOutcome {
    pub model: Model,
    pub record: TrajectoryRecord,
    pub failure: Option<String>,
}

pub fn run(cfg: &RunConfig, params: HRParameters) -> Result<RunOutcome, CliError> {
    let model = cfg.model_with(params)?;
    let integ = cfg.integrator();
    integ
        .resolve_steps(&model)
        .map_err(|e| CliError::invalid("integrator", e))?;
    cfg.initial
        .generate(model.n(), &model.domain)
        .map_err(|e| CliError::invalid("initial", e))?;
    match simulate(&cfg.initial, &model, &integ) {
        Ok(record) => Ok(RunOutcome {
            model,
            record,
            failure: None,
        }),
        Err(e) => Ok(RunOutcome {
            model,
            record: *e.partial,
            failure: Some(e.source.to_string()),
        }),
    }
}

fn crossed(record: &TrajectoryRecord) -> (bool, bool) {
    let lit = record.rows.iter().any(|r| r.stimulation > r.threshold_literal);
    let pair = record.rows.iter().any(|r| r.stimulation > r.threshold_perpair);
    (lit, pair)
}

fn describe_fit(fit: &SyncFit) -> String {
    match fit {
        SyncFit::Fitted {
            rate,
            r2,
            t_start,
            t_end,
            points,
        } => format!(
            "rate {} (r^2 {}) over t in [{}, {}], {points} records",
            fmt_value(*rate),
            fmt_value(*r2),
            fmt_value(*t_start),
            fmt_value(*t_end)
        ),
        SyncFit::AlreadySynchronized => "already synchronized (difference energy at floor), rate = inf".into(),
        SyncFit::Insufficient => "not enough records above the floor for a fit".into(),
    }
}

/// Plain-text analysis of one run.
pub fn report(cfg: &RunConfig, out: &RunOutcome) -> String {
    let m = &cfg.metrics;
    let rec = &out.record;
    let consts = &out.model.constants;
    let mut s = String::new();
    let _ = writeln!(s, "neurons: {}", out.model.n());
    let _ = writeln!(s, "cells: {}", out.model.domain.n_cells());
    let _ = writeln!(s, "scheme: {:?}", cfg.integrator.scheme);
    let _ = writeln!(s, "dt: {}", fmt_value(rec.dt));
    let _ = writeln!(s, "records: {}", rec.rows.len());
    match &out.failure {
        Some(msg) => {
            let t = rec.rows.last().map_or(0.0, |r| r.t);
            let _ = writeln!(s, "status: FAILED ({msg}); last recorded t = {}", fmt_value(t));
        }
        None => {
            let _ = writeln!(s, "status: completed");
        }
    }
    let _ = writeln!(s, "\n[envelopes]");
    let env = envelope_check(rec, consts, &m.tolerances());
    let _ = write!(s, "{env}");
    let _ = writeln!(s, "\n[synchronization]");
    let _ = writeln!(
        s,
        "tail window: last {}% of the recorded span",
        m.tail_fraction * 100.0
    );
    let _ = writeln!(s, "tail diff_energy_G: {}", fmt_value(rec.tail_diff_energy_g(m.tail_fraction)));
    let fit = fit_sync_rate(rec, m.fit_window, m.floor);
    let _ = writeln!(s, "fit: {}", describe_fit(&fit));
    let _ = writeln!(s, "mu: {}", fmt_value(consts.mu));
    if let SyncFit::Fitted { rate, .. } = fit {
        let _ = writeln!(s, "fitted rate / mu: {}", fmt_value(rate / consts.mu));
    }
    let (lit, pair) = crossed(rec);
    let _ = writeln!(s, "threshold R_literal crossed: {lit}");
    let _ = writeln!(s, "threshold R_perpair crossed: {pair}");
    let _ = writeln!(s, "\n[boundary identity]");
    let ratios: Vec<f64> = rec
        .rows
        .iter()
        .filter(|r| r.boundary_diff_full > 0.0)
        .map(|r| r.k_sum / r.boundary_diff_full)
        .collect();
    if ratios.is_empty() {
        let _ = writeln!(s, "K_sum / boundary_diff_full: undefined (no boundary differences)");
    } else {
        let lo = ratios.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let _ = writeln!(s, "K_sum / boundary_diff_full: min {} max {}", fmt_value(lo), fmt_value(hi));
    }
    let asym = rec.rows.iter().map(|r| r.k_asymmetry).fold(0.0, f64::max);
    let _ = writeln!(s, "max |K_ij - K_ji|: {}", fmt_value(asym));
    s
}

/// Writes `trajectory.csv` and `report.txt`; a failed run still writes the
/// rows recorded before the failure.
pub fn cmd_simulate(cfg: &RunConfig, out_dir: &Path) -> Result<RunOutcome, CliError> {
    let out = run(cfg, cfg.parameters)?;
    write_atomic(&out_dir.join("trajectory.csv"), trajectory_csv(&out.record).as_bytes())?;
    write_atomic(&out_dir.join("report.txt"), report(cfg, &out).as_bytes())?;
    match &out.failure {
        Some(msg) => Err(CliError::Integration(msg.clone())),
        None => Ok(out),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    pub tail_diff_energy_g: f64,
    pub final_diff_energy_g: f64,
    pub rate: f64,
    pub r2: f64,
    pub mu: f64,
    pub crossed_literal: bool,
    pub crossed_perpair: bool,
    pub status: String,
}

pub const SWEEP_COLUMNS: [&str; 9] = [
    "value",
    "tail_diff_energy_G",
    "final_diff_energy_G",
    "fitted_rate",
    "fit_r2",
    "mu",
    "crossed_R_literal",
    "crossed_R_perpair",
    "status",
];

fn sweep_row(cfg: &RunConfig, param: &str, value: f64) -> SweepRow {
    let failed = |status: String| SweepRow {
        value,
        tail_diff_energy_g: f64::NAN,
        final_diff_energy_g: f64::NAN,
        rate: f64::NAN,
        r2: f64::NAN,
        mu: f64::NAN,
        crossed_literal: false,
        crossed_perpair: false,
        status,
    };
    let params = match cfg.parameters.with_scalar(param, value) {
        Ok(p) => p,
        Err(e) => return failed(format!("failed: {e}")),
    };
    let out = match run(cfg, params) {
        Ok(o) => o,
        Err(e) => return failed(format!("failed: {e}")),
    };
    let m = &cfg.metrics;
    let fit = fit_sync_rate(&out.record, m.fit_window, m.floor);
    let (lit, pair) = crossed(&out.record);
    SweepRow {
        value,
        tail_diff_energy_g: out.record.tail_diff_energy_g(m.tail_fraction),
        final_diff_energy_g: out.record.rows.last().map_or(f64::NAN, |r| r.diff_energy_g()),
        rate: fit.rate(),
        r2: fit.r2(),
        mu: out.model.constants.mu,
        crossed_literal: lit,
        crossed_perpair: pair,
        status: match out.failure {
            Some(msg) => format!("failed: {msg}"),
            None => "ok".into(),
        },
    }
}

pub fn sweep_rows(cfg: &RunConfig, param: &str, values: &[f64]) -> Result<Vec<SweepRow>, CliError> {
    if cfg.parameters.scalar(param).is_none() {
        return Err(CliError::invalid(
            "parameters",
            format!(
                "cannot sweep `{param}`; choose one of {}",
                HRParameters::SCALAR_NAMES.join(", ")
            ),
        ));
    }
    Ok(values.par_iter().map(|&v| sweep_row(cfg, param, v)).collect())
}

pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = SWEEP_COLUMNS.join(",");
    out.push('\n');
    for r in rows {
        let status = r.status.replace([',', '\n'], ";");
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{},{}",
            fmt_value(r.value),
            fmt_value(r.tail_diff_energy_g),
            fmt_value(r.final_diff_energy_g),
            fmt_value(r.rate),
            fmt_value(r.r2),
            fmt_value(r.mu),
            r.crossed_literal,
            r.crossed_perpair,
            status
        );
    }
    out
}

pub fn cmd_sweep(
    cfg: &RunConfig,
    out_dir: &Path,
    param: &str,
    values: &[f64],
) -> Result<Vec<SweepRow>, CliError> {
    let rows = sweep_rows(cfg, param, values)?;
    write_atomic(&out_dir.join("sweep.csv"), sweep_csv(&rows).as_bytes())?;
    Ok(rows)
}
