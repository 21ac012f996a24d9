use thiserror::Error;

use crate::arena::{Label, VertexId};

/// Arena validation failures. Each variant names the offending vertex.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArenaError {
    #[error("arena has no vertices")]
    Empty,
    #[error("root {0} is not a vertex")]
    BadRoot(VertexId),
    #[error("dead-end at vertex {0}")]
    DeadEnd(VertexId),
    #[error("duplicate edge label {label} at vertex {vertex}")]
    DuplicateLabel { vertex: VertexId, label: Label },
    #[error("edge from vertex {vertex} points to missing vertex {target}")]
    BadTarget { vertex: VertexId, target: VertexId },
    #[error("owner {owner} of vertex {vertex} is not a player (arena has {players})")]
    BadOwner {
        vertex: VertexId,
        owner: usize,
        players: usize,
    },
    #[error("unreachable vertex {0}")]
    Unreachable(VertexId),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Arena(#[from] ArenaError),
    #[error("invalid play: {0}")]
    InvalidPlay(String),
    #[error("invalid condition: {0}")]
    InvalidCondition(String),
    #[error("word {word:?} is not realizable from vertex {vertex}")]
    UnrealizableWord { word: Vec<Label>, vertex: VertexId },
    #[error("invalid game: {0}")]
    InvalidGame(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
    #[error("no move defined at product state ({vertex}, {counter})")]
    MissingMove { vertex: VertexId, counter: usize },
    #[error("product state ({vertex}, {counter}) is not reachable")]
    UnreachableState { vertex: VertexId, counter: usize },
    #[error("condition level {level} exceeds the configured bound {bound}")]
    LevelBound { level: usize, bound: usize },
    #[error("size cap exceeded: {what} = {size} > {cap}")]
    CapExceeded {
        what: &'static str,
        size: u128,
        cap: u128,
    },
    #[error("set of outcomes is not upward closed for player {0}")]
    NotUpwardClosed(usize),
    #[error("game is not a two-player antagonistic game")]
    NotAntagonistic,
    #[error("promise violated: {0}")]
    Promise(String),
    #[error("equilibrium construction failed: {0}")]
    Construction(String),
    #[error("oracle error: {0}")]
    Oracle(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("unsupported input: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}
