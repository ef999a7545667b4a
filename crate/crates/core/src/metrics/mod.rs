//! Analysis-side observables.

mod envelope;
mod observe;
mod record;
mod sync;

pub use envelope::{envelope_check, DecayWindow, EnvelopeReport, EnvelopeTolerances, Violation};
pub use observe::{
    compute_k, pair_differences, pair_indices, stimulation_signal, KReport, Observation,
    Observer, PairDifference,
};
pub use record::TrajectoryRecord;
pub use sync::{
    asynchronous_degree, fit_sync_rate, fit_sync_rate_series, tail_pair_norms, SyncFit,
    DEFAULT_FLOOR,
};
