use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),

    #[error("graph must have at least one vertex")]
    NoVertices,

    #[error("graphs with more than {max} vertices are not supported (got {got})")]
    TooManyVertices { got: usize, max: usize },

    #[error("loop at vertex {0}")]
    Loop(usize),

    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(usize, usize),

    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("edge {0}-{1} already present")]
    EdgeExists(usize, usize),

    #[error("edge {0}-{1} not present")]
    EdgeMissing(usize, usize),

    #[error("expected two distinct vertices, got {0} twice")]
    SameVertex(usize),

    #[error("cannot delete the last vertex")]
    LastVertex,

    #[error("vertex subset is empty")]
    EmptySubset,

    #[error("graph is not connected")]
    Disconnected,

    #[error("graph has no edges")]
    NoEdges,

    #[error("graph has a K4 minor (reduction stuck on vertices {})", fmt_list(.vertices))]
    K4Minor { vertices: Vec<usize>, edges: Vec<(usize, usize)> },

    #[error("binomial sides have different degrees ({0} vs {1})")]
    DegreeMismatch(usize, usize),

    #[error("binomial sides are identical")]
    DegenerateBinomial,

    #[error("binomials need degree at least 2, got {0}")]
    DegreeTooSmall(usize),

    #[error("exponent target is inconsistent with degree {0}")]
    InconsistentTarget(usize),

    #[error("fiber members have different phi images")]
    MixedFiber,

    #[error("resource cap exceeded: {needed} monomials of degree {degree} (cap {cap})")]
    ResourceCap { degree: usize, needed: u128, cap: u128 },

    #[error("binomial is not in the kernel of phi: {0}")]
    NotInKernel(String),

    #[error("generating set is not slow-varying at ({0}, {1})")]
    NotSlowVarying(usize, usize),

    #[error("invalid gluing: {0}")]
    InvalidGluing(String),

    #[error("sequence error: {0}")]
    Sequence(String),

    #[error("unknown strategy '{0}'")]
    UnknownStrategy(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

fn fmt_list(v: &[usize]) -> String {
    let items: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("[{}]", items.join(","))
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
