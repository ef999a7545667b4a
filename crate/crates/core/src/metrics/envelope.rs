//! Checks of a trajectory against the a-priori bounds.

use std::fmt;

use super::record::TrajectoryRecord;
use crate::constants::{entry_time, DerivedConstants};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeTolerances {
    /// Relative slack on the Gronwall and energy-inequality bounds.
    pub envelope: f64,
    /// Relative slack on the decay bound inside threshold windows.
    pub decay: f64,
    /// Relative slack on the absorbing entry time.
    pub entry: f64,
}

impl Default for EnvelopeTolerances {
    fn default() -> Self {
        Self {
            envelope: 0.05,
            decay: 0.1,
            entry: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Violation {
    pub t: f64,
    pub value: f64,
    pub bound: f64,
}

/// Maximal run of records over which the stimulation signal exceeds a
/// threshold reading.
#[derive(Debug, Clone, PartialEq)]
pub struct DecayWindow {
    pub t_start: f64,
    pub t_end: f64,
    pub rows: usize,
    pub violations: Vec<Violation>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeReport {
    pub gronwall: Vec<Violation>,
    /// Violations of `dE/dt + r* E ≤ source`, stamped at the later record.
    pub energy: Vec<Violation>,
    pub rho0: f64,
    pub big_q: f64,
    /// First recorded time with `total_energy < Q`.
    pub entry_observed: Option<f64>,
    pub entry_predicted: f64,
    /// Records at or after the slackened entry time that lie outside the ball.
    pub late_entry: Vec<Violation>,
    pub windows_literal: Vec<DecayWindow>,
    pub windows_perpair: Vec<DecayWindow>,
}

impl EnvelopeReport {
    pub fn decay_violations(&self) -> usize {
        self.windows_perpair
            .iter()
            .chain(&self.windows_literal)
            .map(|w| w.violations.len())
            .sum()
    }

    pub fn passed(&self) -> bool {
        self.gronwall.is_empty()
            && self.energy.is_empty()
            && self.late_entry.is_empty()
            && self.decay_violations() == 0
    }
}

/// Runs every bound check over `record`.
pub fn envelope_check(
    record: &TrajectoryRecord,
    consts: &DerivedConstants,
    tol: &EnvelopeTolerances,
) -> EnvelopeReport {
    let rows = &record.rows;
    let rho0 = rows.first().map_or(0.0, |r| r.total_energy);

    let gronwall = rows
        .iter()
        .filter(|r| r.total_energy > r.gronwall_envelope * (1.0 + tol.envelope))
        .map(|r| Violation {
            t: r.t,
            value: r.total_energy,
            bound: r.gronwall_envelope,
        })
        .collect();

    let source = consts.energy_source(record.n);
    let energy = rows
        .windows(2)
        .filter_map(|w| {
            let dt = w[1].t - w[0].t;
            let (e0, e1) = (w[0].weighted_energy, w[1].weighted_energy);
            let lhs = (e1 - e0) / dt + consts.r_star * 0.5 * (e0 + e1);
            (lhs > source * (1.0 + tol.envelope)).then_some(Violation {
                t: w[1].t,
                value: lhs,
                bound: source,
            })
        })
        .collect();

    let big_q = consts.big_q;
    let entry_predicted = entry_time(rho0, consts);
    let entry_observed = rows.iter().find(|r| r.total_energy < big_q).map(|r| r.t);
    let late_entry = rows
        .iter()
        .filter(|r| r.t >= entry_predicted * (1.0 + tol.entry) && r.total_energy >= big_q)
        .map(|r| Violation {
            t: r.t,
            value: r.total_energy,
            bound: big_q,
        })
        .collect();

    EnvelopeReport {
        gronwall,
        energy,
        rho0,
        big_q,
        entry_observed,
        entry_predicted,
        late_entry,
        windows_literal: decay_windows(record, consts.mu, tol.decay, |r| r.threshold_literal),
        windows_perpair: decay_windows(record, consts.mu, tol.decay, |r| r.threshold_perpair),
    }
}

fn decay_windows(
    record: &TrajectoryRecord,
    mu: f64,
    tol: f64,
    threshold: impl Fn(&super::Observation) -> f64,
) -> Vec<DecayWindow> {
    let rows = &record.rows;
    let mut out = Vec::new();
    let mut k = 0;
    while k < rows.len() {
        if rows[k].stimulation <= threshold(&rows[k]) {
            k += 1;
            continue;
        }
        let start = k;
        while k < rows.len() && rows[k].stimulation > threshold(&rows[k]) {
            k += 1;
        }
        let window = &rows[start..k];
        let tau = window[0].t;
        let d_tau = window[0].diff_energy_g();
        let mut violations = Vec::new();
        let mut prev = d_tau;
        for r in window {
            let d = r.diff_energy_g();
            let bound = (-mu * (r.t - tau)).exp() * d_tau;
            if d > bound * (1.0 + tol) || d > prev * (1.0 + tol) {
                violations.push(Violation {
                    t: r.t,
                    value: d,
                    bound: bound.min(prev),
                });
            }
            prev = d;
        }
        out.push(DecayWindow {
            t_start: tau,
            t_end: window[window.len() - 1].t,
            rows: window.len(),
            violations,
        });
    }
    out
}

fn write_violations(f: &mut fmt::Formatter<'_>, label: &str, v: &[Violation]) -> fmt::Result {
    writeln!(f, "{label}: {} violation(s)", v.len())?;
    for x in v.iter().take(20) {
        writeln!(f, "  t={:.6e} value={:.6e} bound={:.6e}", x.t, x.value, x.bound)?;
    }
    if v.len() > 20 {
        writeln!(f, "  ... {} more", v.len() - 20)?;
    }
    Ok(())
}

fn write_windows(f: &mut fmt::Formatter<'_>, label: &str, ws: &[DecayWindow]) -> fmt::Result {
    if ws.is_empty() {
        return writeln!(f, "{label}: threshold never exceeded, decay check vacuous");
    }
    writeln!(f, "{label}: {} window(s)", ws.len())?;
    for w in ws {
        writeln!(
            f,
            "  [{:.6e}, {:.6e}] rows={} violations={}",
            w.t_start,
            w.t_end,
            w.rows,
            w.violations.len()
        )?;
    }
    Ok(())
}

impl fmt::Display for EnvelopeReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_violations(f, "gronwall envelope", &self.gronwall)?;
        write_violations(f, "energy inequality", &self.energy)?;
        writeln!(f, "initial energy rho0: {:.6e}", self.rho0)?;
        writeln!(f, "absorbing radius Q: {:.6e}", self.big_q)?;
        match self.entry_observed {
            Some(t) => writeln!(f, "absorbing entry observed: t={t:.6e}")?,
            None => writeln!(f, "absorbing entry observed: never")?,
        }
        writeln!(f, "absorbing entry predicted: t={:.6e}", self.entry_predicted)?;
        write_violations(f, "outside ball after entry time", &self.late_entry)?;
        write_windows(f, "decay windows (R_perpair)", &self.windows_perpair)?;
        write_windows(f, "decay windows (R_literal)", &self.windows_literal)
    }
}
