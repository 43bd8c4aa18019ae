pub mod error;
pub mod fixpoint;
pub mod format;
pub mod game;
pub mod graph;
pub mod oracle;
pub mod path_oracle;
pub mod reduction;
pub mod sample;
pub mod solve;
pub mod synth;
pub mod verify;
pub mod witness;

pub use error::{Error, Result};
pub use game::{GameGraph, Lasso, Objective, ObjectiveKind, ObjectiveSet, Payoff, Player, Vertex, VertexSet};
