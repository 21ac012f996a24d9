//! Solvers for infinite two-player and multi-player games on finite arenas
//! whose winning conditions sit in the finite levels of the difference
//! hierarchy over open sets.

pub mod arena;
pub mod equilibria;
pub mod error;
pub mod format;
pub mod gadgets;
pub mod game;
pub mod oracles;
pub mod pointclass;
pub mod product;
pub mod random;
pub mod verify;
pub mod winlose;

pub use arena::{validate_arena, Arena, Edge, Label, Play, PlayerId, RawArena, Step, VertexId};
pub use error::{ArenaError, Error, Result};
pub use product::{Product, ProductState};
