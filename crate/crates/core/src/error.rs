use thiserror::Error;

/// Errors produced while building, parsing or transforming maps.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("vertex {vertex} lists neighbor {neighbor}, which is out of range")]
    Range { vertex: usize, neighbor: usize },
    #[error("vertex {vertex} lists itself as a neighbor")]
    Loop { vertex: usize },
    #[error("vertex {vertex} lists neighbor {neighbor} more than once")]
    MultiEdge { vertex: usize, neighbor: usize },
    #[error("vertex {from} lists {to}, but {to} does not list {from}")]
    Asymmetry { from: usize, to: usize },
    #[error("the underlying graph is not connected")]
    Disconnected,
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("map has {0} vertices; the text format allows at most 26")]
    TooManyVertices(usize),
    #[error("map is not a toroidal polyhedral map")]
    NotTpm,
    #[error("no edge joins the given vertices")]
    NotAnEdge,
    #[error("linear system is singular")]
    SingularSystem,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
