use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("mesh must be positive, got {0}")]
    ZeroMesh(String),
    #[error("truncation too small: {0}")]
    TruncationTooSmall(String),
    #[error("closed set representation does not fit this operation: {0}")]
    RepresentationMismatch(String),
    #[error("closed set is empty")]
    EmptySet,
    #[error("closed set is the whole space")]
    FullSet,
    #[error("unknown landmark `{0}`")]
    UnknownLandmark(String),
    #[error("map pieces disagree at node {node}: {detail}")]
    BoundaryInconsistent { node: String, detail: String },
    #[error("index {index} outside truncation 1..={max}")]
    IndexOutOfTruncation { index: u32, max: u32 },
    #[error("map `{map}` is not defined on space `{space}`")]
    IncompatibleMap { map: String, space: String },
    #[error("point not covered by any map piece: {0}")]
    PointNotCovered(String),
    #[error("padding {rho} below admissible bound {bound}")]
    PaddingBelowBound { rho: f64, bound: f64 },
    #[error("samples per cell must be at least 2, got {0}")]
    TooFewSamples(usize),
    #[error("map piece `{0}` cannot be inverted exactly")]
    InexactMap(String),
    #[error("preimage layers exceeded the cap of {0} points")]
    CapExceeded(usize),
    #[error("product would have {cells} cells, budget is {budget}")]
    CellBudgetExceeded { cells: usize, budget: usize },
    #[error("product needs between 2 and {max} factors, got {got}")]
    FactorCount { got: usize, max: usize },
    #[error("sum needs at least 2 summands, got {0}")]
    SummandCount(usize),
    #[error("refinement factor must be at least 2, got {0}")]
    RefineFactor(usize),
    #[error("closed set is clopen; use the trivial realization")]
    Clopen,
    #[error("cylinder depth {0} too small to separate the set from its complement")]
    DepthTooSmall(usize),
    #[error("no arc joins the set to its complement")]
    NoJoiningArc,
    #[error("schema error: {0}")]
    Schema(String),
}
