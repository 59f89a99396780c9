use thiserror::Error;

#[derive(Error, Debug)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("polyhedron fails validation: {0}")]
    Invalid(String),
    #[error("unsupported topology: {0}")]
    UnsupportedTopology(String),
    #[error("operation requires an unweighted polyhedron")]
    Weighted,
    #[error("group action is not free: vertex `{vertex}` is fixed by a nontrivial element")]
    NonFreeAction { vertex: String },
    #[error("size ceiling exceeded: {0}")]
    SizeCeiling(String),
    #[error("ray direction is degenerate (too close to a vertex direction); perturb theta")]
    DegenerateDirection,
    #[error("isoradial embedding failed: worst residual {residual:e} at {element}")]
    EmbeddingFailure { residual: f64, element: String },
    #[error("consistency violation at arrow `{arrow}`: {detail}")]
    ConsistencyViolation { arrow: String, detail: String },
    #[error("infeasible: {0}")]
    Infeasible(String),
}

pub type Result<T> = std::result::Result<T, Error>;
