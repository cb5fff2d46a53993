//! Error type shared by all modules. Diagnostic payloads are stored as `f64`
//! regardless of the working scalar.

/// Library-wide error type.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The leading coefficient vanishes, so the equation drops degree.
    #[error("degenerate degree: leading coefficient is zero")]
    DegenerateDegree,

    /// Newton refinement did not reach the residual target.
    #[error("root polishing did not converge after {iterations} iterations (last x = {last:e}, residual = {residual:e})")]
    NonConvergence {
        iterations: usize,
        last: f64,
        residual: f64,
    },

    /// Adaptive quadrature could not meet its error target.
    #[error("quadrature did not converge (estimate = {estimate:e}, error bound = {error:e})")]
    QuadratureNonConvergence { estimate: f64, error: f64 },

    /// The fiber Hessian of F^2/2 failed to be positive definite. This is a
    /// falsification signal, not a numerical nuisance.
    #[error("convexity violation at lat = {lat}, v = ({v1}, {v2}): Hessian eigenvalues ({eig_min:e}, {eig_max:e})")]
    ConvexityViolation {
        lat: f64,
        v1: f64,
        v2: f64,
        eig_min: f64,
        eig_max: f64,
    },

    /// The radical evaluation produced a value that fails validation even
    /// after polishing. Carries the full diagnostic state.
    #[error("radical formula branch failure: {detail}")]
    FormulaBranch { detail: String },

    /// Invalid run configuration.
    #[error("configuration error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
