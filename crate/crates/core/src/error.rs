use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParamError {
    #[error("parameter `{name}` must be positive and finite, got {value}")]
    NotPositive { name: &'static str, value: f64 },
    #[error("parameter `{name}` must be non-negative and finite, got {value}")]
    Negative { name: &'static str, value: f64 },
    #[error("parameter `{name}` must be finite, got {value}")]
    NotFinite { name: &'static str, value: f64 },
    #[error("parameter `N` must be at least 2, got {0}")]
    TooFewNeurons(usize),
    #[error("singular parameter `{name}`: {reason}")]
    Singular {
        name: &'static str,
        reason: &'static str,
    },
    #[error("`{0}` is not a real-valued model parameter")]
    UnknownScalar(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DomainError {
    #[error("spatial dimension {0} is not supported (only 1 and 2)")]
    UnsupportedDimension(usize),
    #[error("expected {expected} entries for `{field}`, got {got}")]
    AxisCount {
        field: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("extent along axis {axis} must be positive and finite, got {value}")]
    DegenerateExtent { axis: usize, value: f64 },
    #[error("axis {axis} needs at least 4 cells, got {cells}")]
    TooFewCells { axis: usize, cells: usize },
    #[error("field has {got} values but the domain has {expected} cells")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("expected {expected} neuron fields, got {got}")]
    NeuronCount { expected: usize, got: usize },
    #[error("Neumann eigenvalue iteration did not converge after {iterations} iterations (residual {residual:e})")]
    EigenNoConvergence { iterations: usize, residual: f64 },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum MatchingError {
    #[error("cannot parse pair list `{text}`: {reason}")]
    Syntax { text: String, reason: String },
    #[error("neuron index {index} out of range 1..={n}")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("pairs are not an involution: neuron {neuron} is paired with both {first} and {second}")]
    NotInvolution {
        neuron: usize,
        first: usize,
        second: usize,
    },
    #[error("side `{side}` does not exist in a {dim}D domain")]
    BadSide { side: String, dim: usize },
    #[error("segment interval [{start}, {end}] on side `{side}` is empty or outside [0, {length}]")]
    BadInterval {
        side: String,
        start: f64,
        end: f64,
        length: f64,
    },
    #[error("segments {first} and {second} overlap on boundary face {face}")]
    Overlap {
        first: usize,
        second: usize,
        face: usize,
    },
    #[error("matching covers {got} faces but the domain has {expected}")]
    FaceCount { expected: usize, got: usize },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DynamicsError {
    #[error(transparent)]
    Domain(#[from] DomainError),
    #[error("time step {dt:e} exceeds the explicit stability bound {bound:e}")]
    CflViolation { dt: f64, bound: f64 },
    #[error("invalid integrator setting `{name}`: {reason}")]
    BadConfig {
        name: &'static str,
        reason: String,
    },
    #[error("non-finite state at t = {t}, max |u| = {max_abs_u:e}")]
    NonFinite { t: f64, max_abs_u: f64 },
    #[error("implicit solve failed: relative residual {residual:e} above tolerance {tol:e}")]
    LinearSolve { residual: f64, tol: f64 },
    #[error("linear operator is not positive definite (pivot {pivot:e} at row {row})")]
    NotPositiveDefinite { row: usize, pivot: f64 },
    #[error("initial condition: {0}")]
    InitialCondition(String),
}
