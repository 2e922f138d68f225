//! Combinatorics of string topology: fat graphs, Sullivan chord diagrams,
//! the collapse/expansion move graph, and a positive-boundary 2d TQFT
//! computed with exact arithmetic.

pub mod chord;
pub mod dot;
pub mod fatgraph;
pub mod format;
pub mod moves;
pub mod par;
pub mod tqft;

pub use chord::{canonical_gamma0, glue, ChordDiagram, ChordError, EdgeLabel, GlueSchedule, RawChord};
pub use fatgraph::{BoundaryCycle, CanonicalCode, FatGraph, FatGraphError, RawFatGraph, TopType};
