//! Angular resolution optimization for face-symmetric planar drawings.
//!
//! Pipeline: [`model`] ingests a drawing and derives zones, corners and the
//! boundary walk; [`aux_graph`] turns those into a parametric constraint graph
//! whose edge weights are `b − m·λ`; [`solver`] finds the largest λ without a
//! negative cycle and the matching zone rotations; [`layout`] re-places the
//! vertices from the rotated zone vectors; [`verify`] measures and checks the
//! result.

pub mod aux_graph;
pub mod fixtures;
pub mod geom;
pub mod layout;
pub mod model;
pub mod numfmt;
pub mod pipeline;
pub mod render;
pub mod solver;
pub mod verify;

pub use geom::Point;
pub use model::{Drawing, FaceSymmetricDrawing, IngestConfig, IngestError};
