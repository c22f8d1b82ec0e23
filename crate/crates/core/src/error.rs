use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EvansError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("non-integrable: {0}")]
    NonIntegrable(String),
    #[error("series exceeded term cap of {cap}")]
    TermOverflow { cap: usize },
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("Stokes hierarchy unsolvable at order {order}, mode {mode}: {msg}")]
    Hierarchy { order: usize, mode: i64, msg: String },
    #[error("unsupported regime: {0}")]
    Unsupported(String),
    #[error("non-representable solution: {0}")]
    NonRepresentable(String),
    #[error("solvability condition violated: {0}")]
    Solvability(String),
    #[error("reduction failed at order ({m},{n}), direction {j}, frequency {freq}: {source}")]
    Reduction {
        m: usize,
        n: usize,
        j: usize,
        freq: f64,
        #[source]
        source: Box<EvansError>,
    },
    #[error("truncation error: {0}")]
    Truncation(String),
    #[error("integration failed: {0}")]
    Integration(String),
    #[error("consistency check failed: {0}")]
    Consistency(String),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("degenerate leading order: {0}")]
    Degenerate(String),
    #[error("Newton iteration failed to converge at gamma = {gamma}")]
    Trace { gamma: f64 },
}

pub type Result<T> = std::result::Result<T, EvansError>;
