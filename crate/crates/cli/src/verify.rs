//! The verification suite behind `hrnet verify`.
//!
//! Each criterion is a self-contained experiment returning a pass flag and a
//! one-line detail. Parameters, seeds and the synchronization scenario come
//! from the config; geometry is fixed per criterion where the check needs it.

use std::f64::consts::PI;
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use hrnet_core::constants::entry_time;
use hrnet_core::dynamics::Stepper;
use hrnet_core::domain::{
    apply_diffusion, integrate_domain, l2_norm_sq, poincare_constants, EigenSettings,
};
use hrnet_core::metrics::{asynchronous_degree, compute_k, envelope_check, fit_sync_rate, SyncFit};
use hrnet_core::{
    simulate, BoundaryMatching, DerivedConstants, Domain, DomainSpec, HRParameters,
    InitialCondition, InitialProfile, IntegratorConfig, Model, NeuronFields, PoincareMode,
    ScalarField, Scheme,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::commands::{self, RunOutcome};
use crate::config::{DtSetting, RunConfig};
use crate::oracle::{rel_err, ExactConstants};

#[derive(Debug, Clone)]
pub struct Outcome {
    pub passed: bool,
    pub detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        passed,
        detail: detail.into(),
    }
}

fn fail(detail: impl Into<String>) -> Outcome {
    outcome(false, detail)
}

pub struct Criterion {
    pub id: &'static str,
    pub name: &'static str,
    run: fn(&Suite) -> Outcome,
}

pub const CRITERIA: [Criterion; 13] = [
    Criterion { id: "1", name: "constants-oracle", run: c1_constants },
    Criterion { id: "2", name: "poincare-constants", run: c2_poincare },
    Criterion { id: "3", name: "diffusion-order", run: c3_diffusion_order },
    Criterion { id: "4", name: "conservation", run: c4_conservation },
    Criterion { id: "5", name: "synchronized-manifold", run: c5_sync_manifold },
    Criterion { id: "6", name: "gronwall-envelope", run: c6_gronwall },
    Criterion { id: "7", name: "energy-monitor", run: c7_energy_monitor },
    Criterion { id: "8", name: "strong-coupling-sync", run: c8_strong_coupling },
    Criterion { id: "9", name: "conditional-decay", run: c9_conditional_decay },
    Criterion { id: "10", name: "boundary-identity", run: c10_boundary_identity },
    Criterion { id: "11", name: "determinism", run: c11_determinism },
    Criterion { id: "12", name: "asynchronous-degree", run: c12_async_degree },
    Criterion { id: "cfl", name: "cfl-guard", run: cfl_guard },
];

/// Coupling strengths swept by the synchronization criterion.
pub const SWEEP_P: [f64; 5] = [0.0, 0.5, 2.0, 8.0, 32.0];

const RANDOM_RUNS: usize = 10;
const RANDOM_HORIZON: f64 = 20.0;

pub struct Suite {
    cfg: RunConfig,
    scratch: PathBuf,
    sync_runs: OnceLock<Result<Vec<RunOutcome>, String>>,
    random_runs: OnceLock<Result<Vec<RunOutcome>, String>>,
}

pub struct Report {
    pub results: Vec<(&'static Criterion, Outcome)>,
}

impl Report {
    pub fn failed(&self) -> usize {
        self.results.iter().filter(|(_, o)| !o.passed).count()
    }

    pub fn lines(&self) -> Vec<String> {
        self.results
            .iter()
            .map(|(c, o)| {
                let tag = if o.passed { "PASS" } else { "FAIL" };
                format!("{tag} [{}] {}: {}", c.id, c.name, o.detail)
            })
            .collect()
    }
}

impl Suite {
    /// `scratch` receives the files written by the determinism check.
    pub fn new(cfg: RunConfig, scratch: &Path) -> Self {
        Self {
            cfg,
            scratch: scratch.to_path_buf(),
            sync_runs: OnceLock::new(),
            random_runs: OnceLock::new(),
        }
    }

    pub fn run_one(&self, c: &Criterion) -> Outcome {
        (c.run)(self)
    }

    /// Runs every criterion in order, calling `on_result` as each finishes.
    pub fn run_all(&self, mut on_result: impl FnMut(&Criterion, &Outcome)) -> Report {
        let results = CRITERIA
            .iter()
            .map(|c| {
                let o = self.run_one(c);
                on_result(c, &o);
                (c, o)
            })
            .collect();
        Report { results }
    }

    fn params(&self) -> HRParameters {
        self.cfg.parameters
    }

    /// The configured scenario at each coupling strength in [`SWEEP_P`].
    fn sync_runs(&self) -> Result<&[RunOutcome], String> {
        self.sync_runs
            .get_or_init(|| {
                SWEEP_P
                    .par_iter()
                    .map(|&p| {
                        let params = HRParameters { p, ..self.params() };
                        commands::run(&self.cfg, params).map_err(|e| format!("p = {p}: {e}"))
                    })
                    .collect()
            })
            .as_deref()
            .map_err(Clone::clone)
    }

    /// Random-initial-state runs of the configured model.
    fn random_runs(&self) -> Result<&[RunOutcome], String> {
        self.random_runs
            .get_or_init(|| {
                let model = self.cfg.model().map_err(|e| e.to_string())?;
                let integ = IntegratorConfig {
                    t_end: self.cfg.integrator.t_end.min(RANDOM_HORIZON),
                    ..self.cfg.integrator()
                };
                (0..RANDOM_RUNS)
                    .into_par_iter()
                    .map(|k| {
                        let ic = InitialCondition {
                            seed: self.cfg.initial.seed.wrapping_add(1000 + k as u64),
                            synchronized: false,
                            profile: InitialProfile::UniformRandom {
                                low: [-2.0, -10.0, 0.0],
                                high: [2.0, 1.0, 4.0],
                            },
                        };
                        match simulate(&ic, &model, &integ) {
                            Ok(record) => Ok(RunOutcome {
                                model: model.clone(),
                                record,
                                failure: None,
                            }),
                            Err(e) => Err(format!("sample {k}: {}", e.source)),
                        }
                    })
                    .collect()
            })
            .as_deref()
            .map_err(Clone::clone)
    }
}

fn interval(length: f64, cells: usize) -> Domain {
    Domain::build(&DomainSpec::interval(length, cells)).expect("valid interval")
}

fn rectangle(lx: f64, ly: f64, nx: usize, ny: usize) -> Domain {
    Domain::build(&DomainSpec::rectangle(lx, ly, nx, ny)).expect("valid rectangle")
}

/// Pairs neighbours `(1,2)(3,4)...` on every boundary face.
fn paired_model(params: HRParameters, domain: Domain) -> Result<Model, String> {
    let n = params.n;
    let perm: Vec<usize> = (0..n).map(|i| if i ^ 1 < n { i ^ 1 } else { i }).collect();
    let matching = BoundaryMatching::uniform(&domain, &perm).map_err(|e| e.to_string())?;
    Model::new(params, domain, matching, PoincareMode::Discrete).map_err(|e| e.to_string())
}

fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}

fn fmt_list(xs: &[f64]) -> String {
    let parts: Vec<String> = xs.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn random_params(rng: &mut ChaCha8Rng) -> HRParameters {
    HRParameters {
        a: rng.random_range(0.5..5.0),
        b: rng.random_range(0.5..3.0),
        alpha: rng.random_range(0.1..3.0),
        beta: rng.random_range(0.5..8.0),
        q: rng.random_range(0.001..2.0),
        r: rng.random_range(0.001..2.0),
        c: rng.random_range(-3.0..0.0),
        j: rng.random_range(0.0..5.0),
        d: rng.random_range(0.01..50.0),
        p: rng.random_range(0.0..20.0),
        n: rng.random_range(2..7),
    }
}

fn c1_constants(s: &Suite) -> Outcome {
    const TOL: f64 = 1e-12;
    let model = match s.cfg.model() {
        Ok(m) => m,
        Err(e) => return fail(e.to_string()),
    };
    let (eta1, eta2, omega) = (
        model.constants.eta1,
        model.constants.eta2,
        model.constants.omega_measure,
    );
    let mut rng = ChaCha8Rng::seed_from_u64(s.cfg.initial.seed ^ 0x5eed);
    let mut sets: Vec<HRParameters> = (0..25).map(|_| random_params(&mut rng)).collect();
    sets.push(HRParameters {
        a: 3.0,
        b: 1.0,
        alpha: 1.0,
        beta: 5.0,
        q: 1.0,
        r: 0.5,
        c: -1.6,
        j: 2.0,
        ..s.params()
    });

    let mut worst = (0.0f64, "");
    for p in &sets {
        let got = match DerivedConstants::compute(p, eta1, eta2, omega) {
            Ok(c) => c,
            Err(e) => return fail(format!("{p:?}: {e}")),
        };
        let exact = ExactConstants::evaluate(p, eta1, eta2, omega);
        let rho = exact.rho_for(rng.random_range(2.0..1e6));
        let pairs = [
            ("c1", got.c1, exact.c1),
            ("c2", got.c2, exact.c2),
            ("M", got.big_m, exact.big_m),
            ("Q", got.big_q, exact.big_q),
            ("T0", entry_time(rho, &got), exact.entry_time(rho)),
            ("G", got.g, exact.g),
            ("R_literal", got.big_r, exact.big_r),
            ("R_perpair", got.big_r_alt, exact.big_r_alt),
            ("mu", got.mu, exact.mu),
        ];
        for (name, x, reference) in pairs {
            let e = rel_err(x, reference);
            if !(e <= worst.0) {
                worst = (e, name);
            }
        }
    }
    outcome(
        worst.0 <= TOL,
        format!(
            "{} parameter sets, worst relative error {:.2e} ({}), tolerance {TOL:.0e}",
            sets.len(),
            worst.0,
            worst.1
        ),
    )
}

fn c2_poincare(_: &Suite) -> Outcome {
    let settings = EigenSettings::default();
    let mut errors = Vec::new();
    for cells in [32, 64, 128] {
        match poincare_constants(&interval(PI, cells), PoincareMode::Discrete, &settings) {
            Ok(pc) => errors.push((pc.eta1 - 1.0).abs()),
            Err(e) => return fail(e.to_string()),
        }
    }
    let orders = observed_orders(&errors);
    let order_ok = orders.iter().all(|o| (o - 2.0).abs() <= 0.2);

    let rect = rectangle(2.0, 1.0, 96, 48);
    let eta_rect = match poincare_constants(&rect, PoincareMode::Discrete, &settings) {
        Ok(pc) => pc.eta1,
        Err(e) => return fail(e.to_string()),
    };
    let target = (PI / 2.0).powi(2);
    let rect_err = rel_err(eta_rect, target);
    outcome(
        order_ok && rect_err <= 0.01,
        format!(
            "interval errors {} orders {}; rectangle eta1 {eta_rect:.6} vs {target:.6} (rel {rect_err:.2e})",
            fmt_list(&errors),
            fmt_list(&orders)
        ),
    )
}

fn manufactured_error(domain: &Domain, d: f64) -> Result<f64, String> {
    let dim = domain.dim();
    let shape = |x: [f64; 2]| {
        let mut v = (PI * x[0]).cos();
        if dim == 2 {
            v *= (PI * x[1]).cos();
        }
        v
    };
    let u = domain.field_from_fn(shape);
    let exact = domain.field_from_fn(|x| -d * dim as f64 * PI * PI * shape(x));
    let matching = BoundaryMatching::uncoupled(domain, 1);
    let lap = apply_diffusion(&[u], domain, &matching, d, 0.0).map_err(|e| e.to_string())?;
    let diff: ScalarField = lap[0].iter().zip(exact.iter()).map(|(a, b)| a - b).collect::<Vec<_>>().into();
    Ok(l2_norm_sq(&diff, domain).sqrt())
}

fn c3_diffusion_order(s: &Suite) -> Outcome {
    let d = s.params().d;
    let mut details = Vec::new();
    let mut ok = true;
    for dim in [1, 2] {
        let mut errors = Vec::new();
        for cells in [16, 32, 64, 128] {
            let domain = if dim == 1 {
                interval(1.0, cells)
            } else {
                rectangle(1.0, 1.0, cells, cells)
            };
            match manufactured_error(&domain, d) {
                Ok(e) => errors.push(e),
                Err(e) => return fail(e),
            }
        }
        let orders = observed_orders(&errors);
        ok &= orders.iter().all(|o| (o - 2.0).abs() <= 0.2);
        details.push(format!("{dim}D orders {}", fmt_list(&orders)));
    }
    outcome(ok, details.join("; "))
}

fn total_mass(fields: &NeuronFields, domain: &Domain) -> f64 {
    fields.u.iter().map(|u| integrate_domain(u, domain)).sum()
}

fn c4_conservation(s: &Suite) -> Outcome {
    const TOL: f64 = 1e-11;
    let params = HRParameters {
        n: 2,
        p: 1.0,
        ..s.params()
    };
    let model = match paired_model(params, interval(1.0, 32)) {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    let cfg = IntegratorConfig {
        scheme: Scheme::ExplicitRk4,
        t_end: 10.0,
        reaction: false,
        ..IntegratorConfig::default()
    };
    let ic = InitialCondition {
        seed: s.cfg.initial.seed,
        synchronized: false,
        profile: InitialProfile::SmoothBump {
            base: [-1.0, -5.0, 3.0],
            amplitude: vec![1.5, -0.5],
            center: vec![0.3],
            width: 0.15,
        },
    };
    let run = || -> Result<f64, String> {
        let (dt, steps) = cfg.resolve_steps(&model).map_err(|e| e.to_string())?;
        let mut state = ic.generate(2, &model.domain).map_err(|e| e.to_string())?;
        let initial = total_mass(&state.fields, &model.domain);
        let mut stepper = Stepper::new(&model, &cfg, dt).map_err(|e| e.to_string())?;
        let mut worst = 0.0f64;
        for k in 1..=steps {
            stepper
                .step(&mut state, k as f64 * dt)
                .map_err(|e| e.to_string())?;
            if k % cfg.record_every == 0 || k == steps {
                let drift = (total_mass(&state.fields, &model.domain) - initial).abs();
                worst = worst.max(drift / initial.abs());
            }
        }
        Ok(worst)
    };
    match run() {
        Ok(worst) => outcome(
            worst <= TOL,
            format!("max relative drift {worst:.2e} over t in [0, 10], tolerance {TOL:.0e}"),
        ),
        Err(e) => fail(e),
    }
}

fn c5_sync_manifold(s: &Suite) -> Outcome {
    const TOL: f64 = 1e-16;
    let params = HRParameters { n: 3, ..s.params() };
    let model = match paired_model(params, interval(1.0, 16)) {
        Ok(m) => m,
        Err(e) => return fail(e),
    };
    let cfg = IntegratorConfig {
        scheme: Scheme::ExplicitRk4,
        t_end: 50.0,
        ..IntegratorConfig::default()
    };
    let ic = InitialCondition {
        synchronized: true,
        ..InitialCondition::desync([-1.0, -5.0, 3.0], [0.0; 3], [0.5, 0.5, 0.1], s.cfg.initial.seed)
    };
    match simulate(&ic, &model, &cfg) {
        Ok(rec) => {
            let worst = rec.rows.iter().map(|r| r.max_pair_energy_g()).fold(0.0, f64::max);
            outcome(
                worst <= TOL,
                format!("{} records, max pair diff_energy_G {worst:.2e}", rec.rows.len()),
            )
        }
        Err(e) => fail(e.source.to_string()),
    }
}

fn c6_gronwall(s: &Suite) -> Outcome {
    let runs = match s.random_runs() {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let tol = s.cfg.metrics.tolerances();
    let mut gronwall = 0;
    let mut late = 0;
    let mut worst_entry = 0.0f64;
    for run in runs {
        let rep = envelope_check(&run.record, &run.model.constants, &tol);
        gronwall += rep.gronwall.len();
        late += rep.late_entry.len();
        match rep.entry_observed {
            Some(t) => worst_entry = worst_entry.max(t - rep.entry_predicted),
            None => late += 1,
        }
    }
    outcome(
        gronwall == 0 && late == 0,
        format!(
            "{} runs: {gronwall} envelope violations, {late} late-entry records, \
             max(observed - predicted entry) {worst_entry:.3e}",
            runs.len()
        ),
    )
}

fn c7_energy_monitor(s: &Suite) -> Outcome {
    let runs = match s.random_runs() {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    let tol = s.cfg.metrics.tolerances();
    let mut violations = 0;
    let mut worst = f64::NEG_INFINITY;
    for run in runs {
        let rep = envelope_check(&run.record, &run.model.constants, &tol);
        violations += rep.energy.len();
        let consts = &run.model.constants;
        let source = consts.energy_source(run.record.n);
        for w in run.record.rows.windows(2) {
            let dt = w[1].t - w[0].t;
            let lhs = (w[1].weighted_energy - w[0].weighted_energy) / dt
                + consts.r_star * 0.5 * (w[0].weighted_energy + w[1].weighted_energy);
            worst = worst.max(lhs / source);
        }
    }
    outcome(
        violations == 0,
        format!(
            "{} runs: {violations} violations, max lhs/rhs {worst:.3e}",
            runs.len()
        ),
    )
}

/// Non-increasing within `slack`, treating values under `floor` as equal.
fn non_increasing(values: &[f64], slack: f64, floor: f64) -> bool {
    values
        .windows(2)
        .all(|w| w[1] <= w[0].max(floor) * (1.0 + slack))
}

fn c8_strong_coupling(s: &Suite) -> Outcome {
    const TARGET: f64 = 1e-8;
    let runs = match s.sync_runs() {
        Ok(r) => r,
        Err(e) => return fail(e),
    };
    if let Some((p, msg)) = SWEEP_P
        .iter()
        .zip(runs)
        .find_map(|(p, r)| r.failure.as_ref().map(|m| (p, m)))
    {
        return fail(format!("run at p = {p} failed: {msg}"));
    }
    let m = &s.cfg.metrics;
    let tails: Vec<f64> = runs
        .iter()
        .map(|r| r.record.tail_diff_energy_g(m.tail_fraction))
        .collect();
    let monotone = non_increasing(&tails, 0.05, m.floor);
    let last = runs.last().expect("sweep is non-empty");
    let t_final = last.record.rows.last().map_or(0.0, |r| r.t);
    let final_tail = tails[tails.len() - 1];
    let fit = fit_sync_rate(&last.record, m.fit_window, m.floor);
    let mu = last.model.constants.mu;
    let rate_ok = match fit {
        SyncFit::Fitted { rate, .. } => rate > 0.0,
        SyncFit::AlreadySynchronized => true,
        SyncFit::Insufficient => false,
    };
    outcome(
        monotone && final_tail < TARGET && rate_ok,
        format!(
            "p {:?} tails {}; at p = {} and t = {t_final}: tail {final_tail:.2e} (target {TARGET:.0e}), \
             fitted rate {:.4e}, mu {mu:.4e}, ratio {:.3}",
            SWEEP_P,
            fmt_list(&tails),
            SWEEP_P[SWEEP_P.len() - 1],
            fit.rate(),
            fit.rate() / mu
        ),
    )
}

fn c9_conditional_decay(s: &Suite) -> Outcome {
    let tol = s.cfg.metrics.tolerances();
    let mut records = Vec::new();
    match s.sync_runs() {
        Ok(r) => records.extend(r.iter()),
        Err(e) => return fail(e),
    }
    match s.random_runs() {
        Ok(r) => records.extend(r.iter()),
        Err(e) => return fail(e),
    }
    let mut windows = 0;
    let mut violations = 0;
    let mut max_ratio = 0.0f64;
    for run in &records {
        let rep = envelope_check(&run.record, &run.model.constants, &tol);
        windows += rep.windows_perpair.len();
        violations += rep
            .windows_perpair
            .iter()
            .map(|w| w.violations.len())
            .sum::<usize>();
        for r in &run.record.rows {
            max_ratio = max_ratio.max(r.stimulation / r.threshold_perpair);
        }
    }
    let detail = if windows == 0 {
        format!(
            "{} runs: threshold never exceeded (max S / threshold {max_ratio:.2e}), decay check vacuous",
            records.len()
        )
    } else {
        format!("{} runs: {windows} windows, {violations} violations", records.len())
    };
    outcome(violations == 0, detail)
}

fn c10_boundary_identity(s: &Suite) -> Outcome {
    const DELTA: f64 = 0.3;
    const TOL: f64 = 1e-10;
    let mut worst = 0.0f64;
    let mut ratio = f64::NAN;
    for domain in [interval(1.0, 32), rectangle(2.0, 1.0, 24, 12)] {
        let gamma = domain.boundary_measure();
        let matching = match BoundaryMatching::uniform(&domain, &[1, 0]) {
            Ok(m) => m,
            Err(e) => return fail(e.to_string()),
        };
        let mut rng = ChaCha8Rng::seed_from_u64(s.cfg.initial.seed);
        let mut fields = NeuronFields::zeros(2, &domain);
        for c in 0..domain.n_cells() {
            let x: f64 = rng.random_range(-2.0..2.0);
            fields.u[0][c] = x;
            fields.u[1][c] = x - DELTA;
        }
        let k = compute_k(&fields, &domain, &matching);
        let expected_sum = 4.0 * DELTA * DELTA * gamma;
        let expected_full = 2.0 * DELTA * DELTA * gamma;
        worst = worst
            .max(rel_err(k.k_sum, expected_sum))
            .max(rel_err(k.boundary_diff_full, expected_full));
        ratio = k.ratio();
    }
    outcome(
        worst <= TOL,
        format!(
            "1D and 2D worst relative error {worst:.2e}; K_sum / boundary_diff_full = {ratio:.6} \
             (the stated identity would give 1)"
        ),
    )
}

fn c11_determinism(s: &Suite) -> Outcome {
    let mut cfg = s.cfg.clone();
    cfg.integrator.t_end = cfg.integrator.t_end.min(2.0);
    let mut outputs = Vec::new();
    for k in 0..2 {
        let dir = s.scratch.join(format!("determinism-{k}"));
        if let Err(e) = commands::cmd_simulate(&cfg, &dir) {
            return fail(format!("simulate: {e}"));
        }
        match std::fs::read(dir.join("trajectory.csv")) {
            Ok(bytes) => outputs.push(bytes),
            Err(e) => return fail(format!("read back: {e}")),
        }
    }
    let csv_same = outputs[0] == outputs[1];
    let p = cfg.parameters.p;
    let rows = match commands::sweep_rows(&cfg, "p", &[p, p]) {
        Ok(r) => r,
        Err(e) => return fail(e.to_string()),
    };
    let sweep_same = commands::sweep_csv(&rows[..1]) == commands::sweep_csv(&rows[1..]);
    outcome(
        csv_same && sweep_same,
        format!(
            "trajectory.csv identical: {csv_same} ({} bytes); duplicate sweep rows identical: {sweep_same}",
            outputs[0].len()
        ),
    )
}

fn c12_async_degree(s: &Suite) -> Outcome {
    const SAMPLES: usize = 4;
    const HORIZON: f64 = 10.0;
    let cfg = &s.cfg;
    let run = |p: f64, synchronized: bool| -> Result<f64, String> {
        let model = cfg
            .model_with(HRParameters { p, ..cfg.parameters })
            .map_err(|e| e.to_string())?;
        let ic = InitialCondition {
            synchronized,
            ..cfg.initial.clone()
        };
        asynchronous_degree(
            &model,
            &ic,
            &cfg.integrator(),
            SAMPLES,
            HORIZON,
            cfg.initial.seed,
            cfg.metrics.tail_fraction,
        )
        .map_err(|e| e.source.to_string())
    };
    match (run(0.0, false), run(cfg.parameters.p, true)) {
        (Ok(hetero), Ok(sync)) => outcome(
            hetero > 0.0 && sync <= 1e-12,
            format!("uncoupled heterogeneous {hetero:.4e}, synchronized {sync:.2e}"),
        ),
        (Err(e), _) | (_, Err(e)) => fail(e),
    }
}

fn cfl_guard(s: &Suite) -> Outcome {
    let model = match s.cfg.model() {
        Ok(m) => m,
        Err(e) => return fail(e.to_string()),
    };
    let integ = s.cfg.integrator();
    let bound = integ.cfl_limit(&model);
    match (s.cfg.integrator.scheme, s.cfg.integrator.dt) {
        (Scheme::ExplicitRk4, DtSetting::Fixed(dt)) if dt > bound => fail(format!(
            "dt {dt:e} exceeds the explicit stability bound {bound:e}"
        )),
        (Scheme::ExplicitRk4, _) => {
            let dt = integ.resolve_steps(&model).map(|(dt, _)| dt).unwrap_or(f64::NAN);
            outcome(true, format!("dt {dt:e} within the explicit stability bound {bound:e}"))
        }
        (Scheme::ImexEuler, _) => outcome(
            true,
            format!("diffusion is implicit; the explicit bound would be {bound:e}"),
        ),
    }
}
