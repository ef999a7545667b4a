//! Method-of-lines integration of the coupled network.

mod initial;
mod integrator;
mod rhs;
mod simulate;
mod state;

pub use initial::{InitialCondition, InitialProfile};
pub use integrator::{step, IntegratorConfig, Scheme, Stepper};
pub use rhs::{full_rhs, reaction_rhs, reaction_rhs_into};
pub use simulate::{simulate, SimulateError};
pub use state::{NetworkState, NeuronFields};
