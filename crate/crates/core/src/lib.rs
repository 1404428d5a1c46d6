//! Finite-resolution workbench for alpha-limit sets of continuous self-maps.
//!
//! The crate models the classical example spaces of the subject (the interval,
//! the closed topologist's sine curve, its extension by a horizontal arc,
//! chains of sine curves, the compact space `Z = W ∪ X`, a countable planar
//! space with a non-invariant alpha-limit set, and binary cylinder spaces) as
//! cell complexes, together with the self-maps used to realize closed sets as
//! alpha-limit sets. Two engines compute alpha-limit sets:
//!
//! * [`alpha::alpha_exact`] works with truncated preimage layers obtained by
//!   exact inversion of the map pieces;
//! * [`alpha::alpha_enclosure`] works on an outer-approximation transition
//!   graph and its strongly connected components.

pub mod alpha;
pub mod combinators;
pub mod constructors;
pub mod cylinder;
pub mod error;
pub mod gallery;
pub mod geometry;
pub mod graph;
pub mod maps;
pub mod schema;
pub mod space;
pub mod svg;
pub mod topology;

pub use error::{Error, Result};
pub use geometry::{PlanarPoint, Point2, Rat};
pub use space::{CellId, ClosedSet, SetRepr, Space, SpacePoint};
