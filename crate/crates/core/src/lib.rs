//! Ice quivers, forks and reddening sequences.
//!
//! The exchange matrix engine lives in [`quiver`]; [`structure`] recognises
//! acyclic quivers and forks; [`dynamics`] predicts orderings and colors
//! along source sequences; [`reddening`] builds explicit reddening sequences;
//! [`signs`] checks sign conditions along trajectories; [`explore`] runs
//! bounded breadth-first searches over mutation classes.

pub mod dot;
pub mod dynamics;
pub mod error;
pub mod explore;
pub mod format;
pub mod generate;
pub mod json_int;
pub mod matrix;
pub mod par;
pub mod quiver;
pub mod reddening;
pub mod sequence;
pub mod signs;
pub mod structure;

pub use error::{Error, Result};
pub use matrix::IntMatrix;
pub use par::Execution;
pub use quiver::{coframe, frame, ExtendedQuiver, QuiverMatrix, Sign, VertexColor};
pub use sequence::{MutationSequence, Vertex};
