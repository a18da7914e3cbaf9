use thiserror::Error;

use crate::ode::OdeSolution;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors for state construction, tomography, metric evaluation, and the
/// scheme-map solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not unitary (max deviation {0:.3e})")]
    NotUnitary(f64),

    #[error("not a traceless Hermitian tangent (deviation {0:.3e})")]
    InvalidTangent(f64),

    #[error("Kraus operators are not trace preserving (deviation {0:.3e})")]
    IncompleteKraus(f64),

    #[error("tomograms are not consistent with a physical state (|y| = {0})")]
    InconsistentTomogram(f64),

    #[error("tomographic tensor component must be >= 1 (got {0})")]
    InvalidTensor(f64),

    #[error("scheme is degenerate and cannot be inverted")]
    DegenerateScheme,

    #[error("scheme output is not a state: {0}")]
    InvalidScheme(String),

    #[error("scheme is not strictly monotone on the sampled range")]
    NonInvertibleScheme,

    #[error("argument out of domain: {0}")]
    DomainError(String),

    #[error("singular evaluation: {0}")]
    Singular(String),

    #[error("function must be positive: {0}")]
    InvalidPetzFunction(String),

    #[error("metric is not in canonical polar form: {0}")]
    InvalidMetric(String),

    #[error("removable singularity at w = 0; seed the solver away from the origin")]
    RemovableSingularity,

    #[error("solution left (-1, 1) at w = {at_w}; partial grid retained")]
    RangeEscape {
        at_w: f64,
        partial: Box<OdeSolution>,
    },

    #[error("square-root branch failed (right-hand side <= 0) at w = {at_w}")]
    BranchFailure {
        at_w: f64,
        partial: Option<Box<OdeSolution>>,
    },

    #[error("step size underflow at w = {0}")]
    StepFailure(f64),

    #[error("quadrature did not converge (singular endpoint?)")]
    EndpointSingularity,

    #[error("solution residual {0:.3e} exceeds the advertised bound")]
    ResidualBound(f64),

    #[error("parse error: {0}")]
    Parse(String),
}
