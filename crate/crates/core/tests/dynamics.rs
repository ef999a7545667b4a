use hrnet_core::domain::{integrate_domain, BoundaryMatching};
use hrnet_core::dynamics::{full_rhs, step, Stepper};
use hrnet_core::*;

fn model(n: usize, cells: usize, d: f64, p: f64) -> Model {
    let domain = Domain::build(&DomainSpec::interval(1.0, cells)).unwrap();
    let perm: Vec<usize> = (0..n).map(|i| i ^ 1).map(|j| if j < n { j } else { j ^ 1 }).collect();
    let matching = BoundaryMatching::uniform(&domain, &perm).unwrap();
    let params = HRParameters {
        n,
        d,
        p,
        ..HRParameters::default_profile()
    };
    Model::new(params, domain, matching, PoincareMode::Discrete).unwrap()
}

/// Root of the scalar reduction of the kinetic equilibrium equations:
/// `v = α − βu²`, `w = q(u − c)/r`, then bisection on the `u` equation.
fn equilibrium(p: &HRParameters) -> [f64; 3] {
    let f = |u: f64| p.a * u * u - p.b * u * u * u + (p.alpha - p.beta * u * u) - p.q * (u - p.c) / p.r + p.j;
    let (mut lo, mut hi) = (-50.0, 50.0);
    assert!(f(lo) > 0.0 && f(hi) < 0.0);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let u = 0.5 * (lo + hi);
    [u, p.alpha - p.beta * u * u, p.q * (u - p.c) / p.r]
}

fn constant_state(m: &Model, g: [f64; 3]) -> NetworkState {
    let ic = InitialCondition {
        seed: 0,
        synchronized: false,
        profile: InitialProfile::Constant {
            u: vec![g[0]; m.n()],
            v: vec![g[1]; m.n()],
            w: vec![g[2]; m.n()],
        },
    };
    ic.generate(m.n(), &m.domain).unwrap()
}

fn bump(n: usize) -> InitialCondition {
    InitialCondition {
        seed: 0,
        synchronized: false,
        profile: InitialProfile::SmoothBump {
            base: [-1.0, -4.0, 2.5],
            amplitude: [0.4, -0.3, 0.2][..n].to_vec(),
            center: vec![0.4],
            width: 0.15,
        },
    }
}

fn max_diff(a: &NeuronFields, b: &NeuronFields) -> f64 {
    a.values().zip(b.values()).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn run_to(m: &Model, scheme: Scheme, dt: f64, t_end: f64, ic: &InitialCondition) -> NeuronFields {
    let cfg = IntegratorConfig {
        scheme,
        dt: Some(dt),
        t_end,
        ..Default::default()
    };
    let mut state = ic.generate(m.n(), &m.domain).unwrap();
    let steps = (t_end / dt).round() as usize;
    let mut stepper = Stepper::new(m, &cfg, dt).unwrap();
    for k in 1..=steps {
        stepper.step(&mut state, k as f64 * dt).unwrap();
    }
    state.fields
}

#[test]
fn equilibrium_has_zero_rhs() {
    let m = model(2, 16, 1.0, 3.0);
    let g = equilibrium(&m.params);
    let state = constant_state(&m, g);
    let rhs = full_rhs(&state.fields, &m.params, &m.domain, &m.matching).unwrap();
    for x in rhs.values() {
        assert!(x.abs() < 1e-11, "{x}");
    }
    let cfg = IntegratorConfig::default();
    let dt = cfg.cfl_limit(&m);
    for scheme in [Scheme::ExplicitRk4, Scheme::ImexEuler] {
        let cfg = IntegratorConfig { scheme, ..cfg.clone() };
        let next = step(&state, &m, &cfg, dt).unwrap();
        assert!(max_diff(&next.fields, &state.fields) < 1e-12);
    }
}

#[test]
fn pure_diffusion_conserves_mass() {
    let m = model(2, 32, 1.0, 1.0);
    let ic = InitialCondition::desync([0.5, 0.0, 0.0], [1.0, 0.0, 0.0], [0.3, 0.0, 0.0], 4);
    let cfg = IntegratorConfig {
        reaction: false,
        t_end: 10.0,
        ..Default::default()
    };
    let mass = |f: &NeuronFields| -> f64 { f.u.iter().map(|u| integrate_domain(u, &m.domain)).sum() };
    for scheme in [Scheme::ExplicitRk4, Scheme::ImexEuler] {
        let cfg = IntegratorConfig { scheme, ..cfg.clone() };
        let (dt, steps) = cfg.resolve_steps(&m).unwrap();
        let mut state = ic.generate(2, &m.domain).unwrap();
        let initial = mass(&state.fields);
        let mut stepper = Stepper::new(&m, &cfg, dt).unwrap();
        for k in 1..=steps {
            stepper.step(&mut state, k as f64 * dt).unwrap();
        }
        let drift = (mass(&state.fields) - initial).abs();
        assert!(drift <= 1e-12 * 10.0 * initial.abs(), "{scheme:?}: {drift}");
    }
}

fn observed_order(m: &Model, scheme: Scheme, dts: [f64; 3], t_end: f64) -> f64 {
    let ic = bump(m.n());
    let y: Vec<NeuronFields> = dts.iter().map(|&dt| run_to(m, scheme, dt, t_end, &ic)).collect();
    max_diff(&y[0], &y[1]) / max_diff(&y[1], &y[2])
}

#[test]
fn rk4_self_convergence() {
    let m = model(3, 8, 0.1, 1.0);
    let ratio = observed_order(&m, Scheme::ExplicitRk4, [0.02, 0.01, 0.005], 1.0);
    assert!((ratio - 16.0).abs() <= 0.3 * 16.0, "ratio {ratio}");
}

#[test]
fn imex_self_convergence() {
    let m = model(3, 8, 0.1, 1.0);
    let ratio = observed_order(&m, Scheme::ImexEuler, [0.02, 0.01, 0.005], 1.0);
    assert!((ratio - 2.0).abs() <= 0.3 * 2.0, "ratio {ratio}");
}

#[test]
fn schemes_agree_to_first_order() {
    let m = model(3, 8, 0.1, 1.0);
    let ic = bump(3);
    let reference = run_to(&m, Scheme::ExplicitRk4, 0.005, 1.0, &ic);
    let e1 = max_diff(&run_to(&m, Scheme::ImexEuler, 0.01, 1.0, &ic), &reference);
    let e2 = max_diff(&run_to(&m, Scheme::ImexEuler, 0.005, 1.0, &ic), &reference);
    let ratio = e1 / e2;
    assert!((1.4..2.6).contains(&ratio), "ratio {ratio}");
}

#[test]
fn synchronized_manifold_is_invariant() {
    let m = model(3, 16, 1.0, 8.0);
    let mut ic = InitialCondition::desync([-1.0, -5.0, 3.0], [0.0; 3], [0.5, 0.5, 0.5], 11);
    ic.synchronized = true;
    let cfg = IntegratorConfig {
        t_end: 5.0,
        ..Default::default()
    };
    let rec = simulate(&ic, &m, &cfg).unwrap();
    assert!(rec.rows.len() > 2);
    for row in &rec.rows {
        assert!(row.max_pair_energy_g() <= 1e-18);
    }
}

#[test]
fn zero_horizon_records_initial_row() {
    let m = model(2, 16, 1.0, 1.0);
    let cfg = IntegratorConfig {
        t_end: 0.0,
        ..Default::default()
    };
    let rec = simulate(&bump(2), &m, &cfg).unwrap();
    assert_eq!(rec.rows.len(), 1);
    assert_eq!(rec.rows[0].t, 0.0);
}

#[test]
fn seeded_runs_are_bit_identical() {
    let m = model(2, 16, 1.0, 4.0);
    let ic = InitialCondition::desync([-1.0, -5.0, 3.0], [1.0, 0.0, 0.0], [0.1; 3], 5);
    let cfg = IntegratorConfig {
        t_end: 2.0,
        record_every: 10,
        ..Default::default()
    };
    let a = simulate(&ic, &m, &cfg).unwrap();
    let b = simulate(&ic, &m, &cfg).unwrap();
    assert_eq!(a, b);
    let c = simulate(&ic.with_seed(6), &m, &cfg).unwrap();
    assert_ne!(a, c);
}

#[test]
fn record_times_increase_and_end_on_horizon() {
    let m = model(2, 16, 1.0, 4.0);
    let cfg = IntegratorConfig {
        t_end: 1.0,
        record_every: 7,
        ..Default::default()
    };
    let rec = simulate(&bump(2), &m, &cfg).unwrap();
    assert!(rec.rows.windows(2).all(|w| w[0].t < w[1].t));
    assert_eq!(rec.rows.last().unwrap().t, 1.0);
}

#[test]
fn explicit_step_above_cfl_is_rejected() {
    let m = model(2, 64, 1.0, 4.0);
    let cfg = IntegratorConfig {
        dt: Some(0.01),
        ..Default::default()
    };
    match cfg.resolve_steps(&m) {
        Err(DynamicsError::CflViolation { dt, bound }) => {
            assert_eq!(dt, 0.01);
            assert!(bound < dt);
        }
        other => panic!("{other:?}"),
    }
    let imex = IntegratorConfig {
        scheme: Scheme::ImexEuler,
        ..cfg
    };
    assert!(imex.resolve_steps(&m).is_ok());
}

#[test]
fn blow_up_reports_time_and_partial_record() {
    let mut m = model(2, 8, 0.1, 0.0);
    m.params.b = 1e-3;
    let m = m.with_params(m.params).unwrap();
    let ic = InitialCondition {
        seed: 0,
        synchronized: false,
        profile: InitialProfile::Constant {
            u: vec![1e3, 1e3],
            v: vec![0.0, 0.0],
            w: vec![0.0, 0.0],
        },
    };
    let cfg = IntegratorConfig {
        scheme: Scheme::ImexEuler,
        dt: Some(0.01),
        t_end: 10.0,
        record_every: 1,
        ..Default::default()
    };
    let err = simulate(&ic, &m, &cfg).unwrap_err();
    match err.source {
        DynamicsError::NonFinite { t, .. } => assert!(t > 0.0 && t < 10.0),
        other => panic!("{other:?}"),
    }
    assert!(!err.partial.rows.is_empty());
}
