use thiserror::Error;

/// Errors produced by the numerical layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("grid mismatch: {0}")]
    GridMismatch(&'static str),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("weight evaluation failed at x = {x}: {reason}")]
    WeightEval { x: f64, reason: String },

    #[error("weight domain [{wlo}, {whi}] does not cover grid domain [{glo}, {ghi}]")]
    DomainMismatch { wlo: f64, whi: f64, glo: f64, ghi: f64 },

    #[error("linear solve hit a non-positive pivot at row {row} (pivot {pivot:.3e})")]
    NonPositivePivot { row: usize, pivot: f64 },

    #[error("tridiagonal solve hit a vanishing pivot at row {row}")]
    SingularSystem { row: usize },

    #[error("no positive principal eigenvalue found within {iters} iterations (best estimate {estimate:.3e})")]
    EigenBudget { iters: usize, estimate: f64 },

    #[error("positive part of the weight vanishes on the requested subdomain")]
    NoPositivePart,

    #[error("principal eigenfunction not strictly positive at node {node}")]
    EigenfunctionSign { node: usize },

    #[error("transversality integral is {0:.3e} <= 0; t* is undefined for this weight")]
    Transversality(f64),

    #[error("exponent {q} requires a strictly positive iterate, but node {node} is {value:.3e}")]
    NonPositiveIterate { q: f64, node: usize, value: f64 },

    #[error("newton did not converge in {iters} iterations (residual {residual:.3e})")]
    NewtonBudget { iters: usize, residual: f64 },

    #[error("monotone iteration did not converge in {iters} iterations (residual {residual:.3e})")]
    MonotoneBudget { iters: usize, residual: f64 },

    #[error("sub/supersolution ordering violated at node {node}: sub {sub:.3e} > super {sup:.3e}")]
    OrderingViolated { node: usize, sub: f64, sup: f64 },

    #[error("monotone iteration lost nodewise monotonicity at node {node} even after shift retry")]
    MonotoneStep { node: usize },

    #[error("S(a) is not strictly positive (min {min:.3e}); no global subsolution of this form")]
    NoGlobalSubsolution { min: f64 },

    #[error("constraint set empty: no start with positive weighted mass (best {best:.3e})")]
    EmptyConstraintSet { best: f64 },

    #[error("continuation failed at q = {q}: {source}")]
    Continuation { q: f64, source: Box<Error> },

    #[error("singular continuation requires S(a) in the interior cone, got classification {got}")]
    SingularPrecondition { got: String },

    #[error("curve has no samples in the required range: {0}")]
    MissingSamples(&'static str),

    #[error("unknown builtin weight id `{0}`")]
    UnknownBuiltin(String),

    #[error("invalid parameter for builtin `{id}`: {reason}")]
    InvalidParam { id: String, reason: String },

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
