use thiserror::Error;

use super::{InitialCondition, IntegratorConfig, Stepper};
use crate::error::DynamicsError;
use crate::metrics::{Observer, TrajectoryRecord};
use crate::model::Model;

/// A failed run together with everything recorded before the failure.
#[derive(Debug, Clone, Error)]
#[error("{source}")]
pub struct SimulateError {
    pub source: DynamicsError,
    pub partial: Box<TrajectoryRecord>,
}

impl SimulateError {
    fn bare(source: DynamicsError) -> Self {
        Self {
            source,
            partial: Box::new(TrajectoryRecord::new(0, f64::NAN)),
        }
    }
}

/// Integrates from the generated initial state to `cfg.t_end`, recording at
/// step 0, every `record_every` steps and at the final step.
pub fn simulate(
    ic: &InitialCondition,
    model: &Model,
    cfg: &IntegratorConfig,
) -> Result<TrajectoryRecord, SimulateError> {
    let (dt, steps) = cfg.resolve_steps(model).map_err(SimulateError::bare)?;
    let mut state = ic.generate(model.n(), &model.domain).map_err(SimulateError::bare)?;
    let mut stepper = Stepper::new(model, cfg, dt).map_err(SimulateError::bare)?;
    let mut observer = Observer::new(model);
    let mut record = TrajectoryRecord::new(model.n(), dt);
    record.rows.push(observer.observe(state.t, &state.fields));

    for k in 1..=steps {
        let t_next = if k == steps { cfg.t_end } else { k as f64 * dt };
        if let Err(source) = stepper.step(&mut state, t_next) {
            return Err(SimulateError {
                source,
                partial: Box::new(record),
            });
        }
        if k % cfg.record_every == 0 || k == steps {
            record.rows.push(observer.observe(state.t, &state.fields));
        }
    }
    Ok(record)
}
