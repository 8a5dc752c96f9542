use thiserror::Error;

use crate::graph::Edge;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("edge {0} is both a Mayer and a Boltzmann edge")]
    EdgeOverlap(Edge),

    #[error("vertex {vertex} of V_{n} is not an endpoint of any edge")]
    IsolatedVertex { vertex: usize, n: usize },

    #[error("edge endpoint {vertex} lies outside 1..={n}")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid edge {{{0}, {1}}}: endpoints must be distinct and >= 1")]
    InvalidEdge(usize, usize),

    #[error("graph label is not a base product: its Mayer subgraph is disconnected")]
    NotBaseProduct,

    #[error("{what}: order {n} outside the supported range {min}..={max}")]
    OrderOutOfRange {
        what: &'static str,
        n: usize,
        min: usize,
        max: usize,
    },

    #[error("{0} is not defined on a combination over a bounded box")]
    CriterionDomain(&'static str),

    #[error("the two representations are not comparable: {0}")]
    Incomparable(String),

    #[error("invalid base linear combination: {0}")]
    InvalidCombination(String),

    #[error("invalid base set: {0}")]
    InvalidBaseSet(String),

    #[error("invalid pair potential: {0}")]
    InvalidPotential(String),

    #[error("invalid tree class: {0}")]
    InvalidTreeClass(String),

    #[error("unknown verification suite `{0}`")]
    UnknownSuite(String),

    #[error("{0}")]
    Io(String),
}

impl Error {
    pub(crate) fn range(what: &'static str, n: usize, min: usize, max: usize) -> Self {
        Error::OrderOutOfRange { what, n, min, max }
    }

    pub(crate) fn check_range(what: &'static str, n: usize, min: usize, max: usize) -> Result<()> {
        if n < min || n > max {
            Err(Error::range(what, n, min, max))
        } else {
            Ok(())
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
