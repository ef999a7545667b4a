//! Method-of-lines time stepping.

use serde::{Deserialize, Serialize};

use super::rhs::{full_rhs_into, reaction_rhs_into};
use super::{NetworkState, NeuronFields};
use crate::domain::{BandedOperator, ScalarField};
use crate::error::DynamicsError;
use crate::model::Model;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Classical four-stage Runge-Kutta on the full right-hand side.
    #[default]
    ExplicitRk4,
    /// Backward Euler on diffusion and coupling, forward Euler on kinetics.
    ImexEuler,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegratorConfig {
    pub scheme: Scheme,
    /// Fixed step, or `None` for automatic selection.
    pub dt: Option<f64>,
    pub cfl_safety: f64,
    /// Upper cap on the automatic step (kinetics accuracy).
    pub dt_max: f64,
    pub t_end: f64,
    pub record_every: usize,
    /// Relative residual accepted from each implicit solve.
    pub solver_tol: f64,
    /// Integrate the kinetics; `false` leaves pure diffusion and coupling.
    pub reaction: bool,
}

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            scheme: Scheme::ExplicitRk4,
            dt: None,
            cfl_safety: 0.9,
            dt_max: 0.01,
            t_end: 10.0,
            record_every: 100,
            solver_tol: 1e-10,
            reaction: true,
        }
    }
}

impl IntegratorConfig {
    /// Explicit stability limit for `model`, already scaled by `cfl_safety`.
    pub fn cfl_limit(&self, model: &Model) -> f64 {
        self.cfl_safety * model.domain.diffusion_dt_bound(model.params.d, model.params.p)
    }

    fn validate(&self) -> Result<(), DynamicsError> {
        let bad = |name, reason: String| Err(DynamicsError::BadConfig { name, reason });
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return bad("cfl_safety", format!("must lie in (0, 1], got {}", self.cfl_safety));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad("t_end", format!("must be non-negative, got {}", self.t_end));
        }
        if self.record_every == 0 {
            return bad("record_every", "must be at least 1".into());
        }
        if !(self.dt_max > 0.0) {
            return bad("dt_max", format!("must be positive, got {}", self.dt_max));
        }
        if let Some(dt) = self.dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return bad("dt", format!("must be positive, got {dt}"));
            }
        }
        if !(self.solver_tol > 0.0) {
            return bad("solver_tol", format!("must be positive, got {}", self.solver_tol));
        }
        Ok(())
    }

    /// Step size and step count used for a run: the nominal step is shrunk so
    /// that a whole number of steps lands on `t_end`.
    pub fn resolve_steps(&self, model: &Model) -> Result<(f64, usize), DynamicsError> {
        self.validate()?;
        let limit = self.cfl_limit(model);
        let nominal = match (self.dt, self.scheme) {
            (Some(dt), Scheme::ExplicitRk4) => {
                if dt > limit {
                    return Err(DynamicsError::CflViolation { dt, bound: limit });
                }
                dt
            }
            (Some(dt), Scheme::ImexEuler) => dt,
            (None, Scheme::ExplicitRk4) => limit.min(self.dt_max),
            (None, Scheme::ImexEuler) => self.dt_max,
        };
        if self.t_end == 0.0 {
            return Ok((nominal, 0));
        }
        let steps = (self.t_end / nominal - 1e-9).ceil().max(1.0) as usize;
        Ok((self.t_end / steps as f64, steps))
    }
}

/// Advances one network state with a fixed step.
pub struct Stepper<'m> {
    model: &'m Model,
    scheme: Scheme,
    dt: f64,
    reaction: bool,
    solver_tol: f64,
    implicit: Option<BandedOperator>,
    stage: NeuronFields,
    k: [NeuronFields; 4],
    lap: Vec<ScalarField>,
    packed: Vec<f64>,
    scratch: Vec<f64>,
    residual_buf: Vec<f64>,
}

impl<'m> Stepper<'m> {
    pub fn new(model: &'m Model, cfg: &IntegratorConfig, dt: f64) -> Result<Self, DynamicsError> {
        let n = model.n();
        let domain = &model.domain;
        let implicit = match cfg.scheme {
            Scheme::ImexEuler => Some(BandedOperator::implicit_euler(
                domain,
                &model.matching,
                model.params.d,
                model.params.p,
                dt,
            )?),
            Scheme::ExplicitRk4 => None,
        };
        let size = domain.n_cells() * n;
        let zeros = NeuronFields::zeros(n, domain);
        Ok(Self {
            model,
            scheme: cfg.scheme,
            dt,
            reaction: cfg.reaction,
            solver_tol: cfg.solver_tol,
            implicit,
            stage: zeros.clone(),
            k: [zeros.clone(), zeros.clone(), zeros.clone(), zeros.clone()],
            lap: zeros.u.clone(),
            packed: vec![0.0; size],
            scratch: vec![0.0; size],
            residual_buf: vec![0.0; size],
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    fn eval(&mut self, slot: usize, from_stage: bool, state: &NeuronFields) -> Result<(), DynamicsError> {
        let m = self.model;
        let src = if from_stage { &self.stage } else { state };
        full_rhs_into(
            src,
            &m.params,
            &m.domain,
            &m.matching,
            self.reaction,
            &mut self.k[slot],
            &mut self.lap,
        )?;
        Ok(())
    }

    /// Advances `state` by one step. The new time is `t0 + (index + 1) · dt`
    /// with `t0` the time before the first step, so times do not drift.
    pub fn step(&mut self, state: &mut NetworkState, t_next: f64) -> Result<(), DynamicsError> {
        match self.scheme {
            Scheme::ExplicitRk4 => self.step_rk4(&mut state.fields)?,
            Scheme::ImexEuler => self.step_imex(&mut state.fields)?,
        }
        state.t = t_next;
        state.check_finite()
    }

    fn step_rk4(&mut self, y: &mut NeuronFields) -> Result<(), DynamicsError> {
        let dt = self.dt;
        self.eval(0, false, y)?;
        self.stage.set_axpy(y, 0.5 * dt, &self.k[0]);
        self.eval(1, true, y)?;
        self.stage.set_axpy(y, 0.5 * dt, &self.k[1]);
        self.eval(2, true, y)?;
        self.stage.set_axpy(y, dt, &self.k[2]);
        self.eval(3, true, y)?;

        let w = dt / 6.0;
        let [k1, k2, k3, k4] = &self.k;
        for (dst, (a, (b, (c, d)))) in [
            (&mut y.u, (&k1.u, (&k2.u, (&k3.u, &k4.u)))),
            (&mut y.v, (&k1.v, (&k2.v, (&k3.v, &k4.v)))),
            (&mut y.w, (&k1.w, (&k2.w, (&k3.w, &k4.w)))),
        ] {
            for (f, (fa, (fb, (fc, fd)))) in dst
                .iter_mut()
                .zip(a.iter().zip(b.iter().zip(c.iter().zip(d.iter()))))
            {
                for (x, (p1, (p2, (p3, p4)))) in f
                    .iter_mut()
                    .zip(fa.iter().zip(fb.iter().zip(fc.iter().zip(fd.iter()))))
                {
                    *x += w * (p1 + 2.0 * p2 + 2.0 * p3 + p4);
                }
            }
        }
        Ok(())
    }

    fn step_imex(&mut self, y: &mut NeuronFields) -> Result<(), DynamicsError> {
        let dt = self.dt;
        let op = self.implicit.as_ref().expect("implicit operator built for imex");
        if self.reaction {
            reaction_rhs_into(y, &self.model.params, &mut self.k[0]);
            self.stage.set_axpy(y, dt, &self.k[0]);
        } else {
            self.stage.clone_from(y);
        }
        op.pack(&self.stage.u, &mut self.packed);
        let residual = op.solve(&mut self.packed, &mut self.scratch, &mut self.residual_buf);
        // a NaN residual means non-finite data, reported by the caller's finiteness check
        if residual > self.solver_tol {
            return Err(DynamicsError::LinearSolve {
                residual,
                tol: self.solver_tol,
            });
        }
        op.unpack(&self.packed, &mut y.u);
        if self.reaction {
            std::mem::swap(&mut y.v, &mut self.stage.v);
            std::mem::swap(&mut y.w, &mut self.stage.w);
        }
        Ok(())
    }
}

/// Takes a single step of size `dt` from `state`.
pub fn step(
    state: &NetworkState,
    model: &Model,
    cfg: &IntegratorConfig,
    dt: f64,
) -> Result<NetworkState, DynamicsError> {
    if cfg.scheme == Scheme::ExplicitRk4 && dt > cfg.cfl_limit(model) {
        return Err(DynamicsError::CflViolation {
            dt,
            bound: cfg.cfl_limit(model),
        });
    }
    let mut stepper = Stepper::new(model, cfg, dt)?;
    let mut next = state.clone();
    stepper.step(&mut next, state.t + dt)?;
    Ok(next)
}
