//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("CyclicGraph: edge set contains a directed cycle")]
    CyclicGraph,
    #[error("SelfLoop: node {0} has an edge to itself")]
    SelfLoop(u32),
    #[error("DuplicateEdge: pair {{{0}, {1}}} appears more than once (or in both orientations)")]
    DuplicateEdge(u32, u32),
    #[error("NodeOutOfRange: node {node} outside 1..={p}")]
    NodeOutOfRange { node: u32, p: u32 },
    #[error("NoSuchEdge: {from} -> {to} is not an edge of the graph")]
    NoSuchEdge { from: u32, to: u32 },
    #[error("NotFullyDirected: PDAG still has the undirected edge {0} -- {1}")]
    NotFullyDirected(u32, u32),
    #[error("DimensionMismatch: {0}")]
    DimensionMismatch(String),
    #[error("InconsistentOrientation: rules would orient {0} -> {1} against an existing orientation")]
    InconsistentOrientation(u32, u32),
    #[error("InconsistentKnowledge: {0}")]
    InconsistentKnowledge(String),
    #[error("UnknownAdjacency: background knowledge pair ({0}, {1}) is not an adjacency of the pattern")]
    UnknownAdjacency(u32, u32),
    #[error("CapExceeded: enumeration exceeded cap of {0}")]
    CapExceeded(usize),
    #[error("NotRemovable: orientation {0} -> {1} is implied by the orientation rules")]
    NotRemovable(u32, u32),
    #[error("NotCovered: edge {0} -> {1} is not covered")]
    NotCovered(u32, u32),
    #[error("NotLinear: edge {0} -> {1} is not linear")]
    NotLinear(u32, u32),
    #[error("ZeroCoefficient: edge {0} -> {1} has a vanishing linear coefficient")]
    ZeroCoefficient(u32, u32),
    #[error("DegenerateInput: {0}")]
    DegenerateInput(String),
    #[error("SkeletonMismatch: graphs do not share a skeleton")]
    SkeletonMismatch,
    #[error("InvalidModel: {0}")]
    InvalidModel(String),
    #[error("InvalidAtom: {0}")]
    InvalidAtom(String),
    #[error("Parse: {0}")]
    Parse(String),
    #[error("Io: {0}")]
    Io(#[from] std::io::Error),
    #[error("Json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Stable short name of the variant, used by the CLI for exit reporting.
    pub fn name(&self) -> &'static str {
        match self {
            Error::CyclicGraph => "CyclicGraph",
            Error::SelfLoop(_) => "SelfLoop",
            Error::DuplicateEdge(..) => "DuplicateEdge",
            Error::NodeOutOfRange { .. } => "NodeOutOfRange",
            Error::NoSuchEdge { .. } => "NoSuchEdge",
            Error::NotFullyDirected(..) => "NotFullyDirected",
            Error::DimensionMismatch(_) => "DimensionMismatch",
            Error::InconsistentOrientation(..) => "InconsistentOrientation",
            Error::InconsistentKnowledge(_) => "InconsistentKnowledge",
            Error::UnknownAdjacency(..) => "UnknownAdjacency",
            Error::CapExceeded(_) => "CapExceeded",
            Error::NotRemovable(..) => "NotRemovable",
            Error::NotCovered(..) => "NotCovered",
            Error::NotLinear(..) => "NotLinear",
            Error::ZeroCoefficient(..) => "ZeroCoefficient",
            Error::DegenerateInput(_) => "DegenerateInput",
            Error::SkeletonMismatch => "SkeletonMismatch",
            Error::InvalidModel(_) => "InvalidModel",
            Error::InvalidAtom(_) => "InvalidAtom",
            Error::Parse(_) => "Parse",
            Error::Io(_) => "Io",
            Error::Json(_) => "Json",
        }
    }
}
