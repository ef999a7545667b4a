//! Boundary-coupled Hindmarsh-Rose networks: analytic constants, a
//! finite-volume discretization, time integration and synchronization
//! diagnostics.

pub mod constants;
pub mod domain;
pub mod dynamics;
pub mod error;
mod linalg;
pub mod metrics;
mod model;
pub mod params;

pub use constants::DerivedConstants;
pub use domain::{BoundaryMatching, Domain, DomainSpec, PoincareMode, ScalarField};
pub use dynamics::{
    simulate, InitialCondition, InitialProfile, IntegratorConfig, NetworkState, NeuronFields,
    Scheme, SimulateError,
};
pub use error::{DomainError, DynamicsError, MatchingError, ParamError};
pub use linalg::{BandedCholesky, BandedSymmetric};
pub use metrics::TrajectoryRecord;
pub use model::{Model, ModelError};
pub use params::HRParameters;
