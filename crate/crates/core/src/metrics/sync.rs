//! Synchronization rate fits and the asynchronous-degree estimator.

use rayon::prelude::*;

use super::record::TrajectoryRecord;
use crate::dynamics::{simulate, InitialCondition, IntegratorConfig, SimulateError};
use crate::model::Model;

pub const DEFAULT_FLOOR: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SyncFit {
    Fitted {
        rate: f64,
        r2: f64,
        t_start: f64,
        t_end: f64,
        points: usize,
    },
    /// The difference energy is at the floor from the first record on.
    AlreadySynchronized,
    /// Fewer than two usable records.
    Insufficient,
}

impl SyncFit {
    /// Fitted rate; `+∞` when already synchronized, NaN without a fit.
    pub fn rate(&self) -> f64 {
        match *self {
            SyncFit::Fitted { rate, .. } => rate,
            SyncFit::AlreadySynchronized => f64::INFINITY,
            SyncFit::Insufficient => f64::NAN,
        }
    }

    pub fn r2(&self) -> f64 {
        match *self {
            SyncFit::Fitted { r2, .. } => r2,
            _ => f64::NAN,
        }
    }
}

/// Least-squares fit of `log d` against `t` over the final `window_fraction`
/// of the records that precede the first value at or below `floor`.
pub fn fit_sync_rate_series(t: &[f64], d: &[f64], window_fraction: f64, floor: f64) -> SyncFit {
    assert_eq!(t.len(), d.len());
    let end = d.iter().position(|&x| !(x > floor)).unwrap_or(d.len());
    if end == 0 {
        return if d.is_empty() {
            SyncFit::Insufficient
        } else {
            SyncFit::AlreadySynchronized
        };
    }
    let take = ((end as f64) * window_fraction.clamp(0.0, 1.0)).ceil() as usize;
    let start = end - take.clamp(2.min(end), end);
    let (ts, ys): (Vec<f64>, Vec<f64>) = (start..end).map(|k| (t[k], d[k].ln())).unzip();
    let m = ts.len();
    if m < 2 {
        return SyncFit::Insufficient;
    }
    let mf = m as f64;
    let t_mean = ts.iter().sum::<f64>() / mf;
    let y_mean = ys.iter().sum::<f64>() / mf;
    let mut stt = 0.0;
    let mut sty = 0.0;
    let mut syy = 0.0;
    for (x, y) in ts.iter().zip(&ys) {
        stt += (x - t_mean) * (x - t_mean);
        sty += (x - t_mean) * (y - y_mean);
        syy += (y - y_mean) * (y - y_mean);
    }
    if stt == 0.0 {
        return SyncFit::Insufficient;
    }
    let slope = sty / stt;
    let intercept = y_mean - slope * t_mean;
    let ss_res: f64 = ts
        .iter()
        .zip(&ys)
        .map(|(x, y)| (y - intercept - slope * x).powi(2))
        .sum();
    let r2 = if syy == 0.0 || ss_res == 0.0 {
        1.0
    } else {
        1.0 - ss_res / syy
    };
    SyncFit::Fitted {
        rate: -slope,
        r2,
        t_start: ts[0],
        t_end: ts[m - 1],
        points: m,
    }
}

/// Rate fit on `Σ_{i<j} diff_energy_G` of a recorded trajectory.
pub fn fit_sync_rate(record: &TrajectoryRecord, window_fraction: f64, floor: f64) -> SyncFit {
    let t: Vec<f64> = record.times().collect();
    let d: Vec<f64> = record.diff_energy_g().collect();
    fit_sync_rate_series(&t, &d, window_fraction, floor)
}

/// Per-pair tail maximum of `‖g_i − g_j‖` (pairs `i < j`).
pub fn tail_pair_norms(record: &TrajectoryRecord, tail_fraction: f64) -> Vec<f64> {
    let n_pairs = record.n * record.n.saturating_sub(1) / 2;
    let mut out = vec![0.0f64; n_pairs];
    for row in record.tail(tail_fraction) {
        for (o, p) in out.iter_mut().zip(&row.pairs) {
            *o = o.max(p.plain().sqrt());
        }
    }
    out
}

/// Monte-Carlo estimate of the asynchronous degree: each sample uses the
/// initial condition reseeded with `seed + index`, runs to `horizon`, and
/// contributes its tail maximum of `‖g_i − g_j‖`; the per-pair maximum over
/// samples is summed over ordered pairs.
pub fn asynchronous_degree(
    model: &Model,
    ic: &InitialCondition,
    cfg: &IntegratorConfig,
    sample_count: usize,
    horizon: f64,
    seed: u64,
    tail_fraction: f64,
) -> Result<f64, SimulateError> {
    assert!(sample_count >= 1, "sample_count must be at least 1");
    let cfg = IntegratorConfig {
        t_end: horizon,
        ..cfg.clone()
    };
    let per_sample: Vec<Vec<f64>> = (0..sample_count)
        .into_par_iter()
        .map(|k| {
            let ic = ic.with_seed(seed.wrapping_add(k as u64));
            simulate(&ic, model, &cfg).map(|rec| tail_pair_norms(&rec, tail_fraction))
        })
        .collect::<Result<_, _>>()?;
    let n_pairs = per_sample[0].len();
    let total: f64 = (0..n_pairs)
        .map(|p| per_sample.iter().map(|s| s[p]).fold(0.0, f64::max))
        .sum();
    Ok(2.0 * total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_exponential() {
        let t: Vec<f64> = (0..101).map(|k| k as f64 * 0.1).collect();
        let d: Vec<f64> = t.iter().map(|x| (-3.0 * x).exp()).collect();
        let fit = fit_sync_rate_series(&t, &d, 0.5, DEFAULT_FLOOR);
        assert!((fit.rate() - 3.0).abs() < 3e-9);
        assert!((fit.r2() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn constant_gives_zero_rate() {
        let t: Vec<f64> = (0..20).map(|k| k as f64).collect();
        let fit = fit_sync_rate_series(&t, &vec![0.25; 20], 0.5, DEFAULT_FLOOR);
        assert_eq!(fit.rate(), 0.0);
        assert_eq!(fit.r2(), 1.0);
    }

    #[test]
    fn floor_cuts_window() {
        let t: Vec<f64> = (0..200).map(|k| k as f64 * 0.1).collect();
        let d: Vec<f64> = t.iter().map(|x| (-5.0 * x).exp().max(1e-16)).collect();
        match fit_sync_rate_series(&t, &d, 0.5, DEFAULT_FLOOR) {
            SyncFit::Fitted { rate, t_end, .. } => {
                assert!((rate - 5.0).abs() < 1e-9);
                assert!((-5.0 * t_end).exp() > DEFAULT_FLOOR);
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn at_floor_is_synchronized() {
        let fit = fit_sync_rate_series(&[0.0, 1.0], &[0.0, 0.0], 0.5, DEFAULT_FLOOR);
        assert_eq!(fit, SyncFit::AlreadySynchronized);
        assert_eq!(fit.rate(), f64::INFINITY);
    }
}
