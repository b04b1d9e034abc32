use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("geometry error: {0}")]
    Geometry(String),

    #[error("gauge error: {0}")]
    Gauge(String),

    /// The gauge vanishes on an open set of directions, so its Wulff shape is
    /// unbounded; intersect with a cone instead.
    #[error("degenerate gauge: {0}")]
    DegenerateGauge(String),

    #[error("mesh error: {message} (min angle {min_angle_deg:.2} deg, max edge {max_edge:.4e}, h {h:.4e})")]
    Mesh {
        message: String,
        min_angle_deg: f64,
        max_edge: f64,
        h: f64,
    },

    #[error("weight error: {0}")]
    Weight(String),

    #[error("linear solver did not converge after {iterations} iterations (relative residual {residual:.3e})")]
    Solver { iterations: usize, residual: f64 },

    #[error("finite-difference scheme is not admissible: {0}; use a smaller h or smaller |a12|")]
    Stability(String),

    #[error("discretization error: {0}")]
    Discretization(String),

    #[error("eigen iteration stagnated after {iterations} iterations (last increment {increment:.3e})")]
    Stagnation { iterations: usize, increment: f64 },

    /// The hypotheses of the selected theorem fail for the given input.
    #[error("hypothesis not satisfied: {0}")]
    Hypothesis(String),

    #[error("invalid exponent: {0}")]
    Exponent(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("radial truncation too coarse: tail bound {tail:.3e} exceeds 1% of {total:.3e}; increase R")]
    Truncation { tail: f64, total: f64 },

    #[error("configuration error: {0}")]
    Config(String),
}
