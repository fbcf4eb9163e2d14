//! Drawing ingest: parsing, planar embedding, zones, corners and the boundary walk.
//!
//! A face-symmetric drawing is a plane straight-line drawing whose interior
//! faces are centrally symmetric convex polygons. Opposite edges of every
//! interior face are translates of each other; closing that relation
//! transitively groups the edges into zones, and every edge of a zone carries
//! the same vector. Ingest derives that structure from raw coordinates and
//! rejects anything that is not such a drawing.

mod corners;
mod document;
mod embedding;
mod zones;

use thiserror::Error;

use crate::geom::Point;

pub use corners::{extract_corners, BoundaryWalk, Corner, CornerKind};
pub use document::{parse_drawing, DrawingDocument, EdgeRecord, VertexRecord};
pub use embedding::{derive_embedding, first_crossing, Embedding, Face};
pub use zones::{derive_zones, Zone, ZonePartition};

/// Default tolerance for parallelism, equal lengths and angle sums.
pub const EPS_GEOM: f64 = 1e-7;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum IngestError {
    #[error("malformed drawing document: {0}")]
    Malformed(String),
    #[error("duplicate vertex id {0}")]
    DuplicateVertex(i64),
    #[error("edge {edge} references unknown vertex {vertex}")]
    UnknownVertex { edge: usize, vertex: i64 },
    #[error("drawing has no edges")]
    NoEdges,
    #[error("duplicate edge between vertices {0} and {1}")]
    DuplicateEdge(i64, i64),
    #[error("self-loop at vertex {0}")]
    SelfLoop(i64),
    #[error("isolated vertex {0}")]
    IsolatedVertex(i64),
    #[error("zero-length edge {0}")]
    ZeroLengthEdge(usize),
    #[error("edges {0} and {1} cross")]
    Crossing(usize, usize),
    #[error("drawing is disconnected")]
    Disconnected,
    #[error("Euler check failed: V - E + F = {0}")]
    Euler(i64),
    #[error("interior face {face} has odd length {len}")]
    OddFace { face: usize, len: usize },
    #[error("opposite edges {a} and {b} of face {face} are not translates of each other")]
    NotFaceSymmetric { face: usize, a: usize, b: usize },
    #[error("edge {edge} is not parallel to or not as long as the rest of zone {zone}")]
    ZoneMismatch { zone: usize, edge: usize },
    #[error("interior corner at vertex {vertex} has angle {angle} outside (0, pi]")]
    NonConvex { vertex: i64, angle: f64 },
    #[error("declared zones do not match the derived partition")]
    DeclaredZones,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Vertex {
    pub id: i64,
    pub pos: Point,
}

/// Raw straight-line drawing: positioned vertices and undirected edges.
///
/// Edges are stored as pairs of vertex indices (not ids); the pair order is the
/// order given in the input and fixes each edge's forward orientation.
#[derive(Clone, Debug, PartialEq)]
pub struct Drawing {
    pub vertices: Vec<Vertex>,
    pub edges: Vec<[usize; 2]>,
    /// Zone partition declared by the document, as lists of edge indices.
    pub declared_zones: Option<Vec<Vec<usize>>>,
}

impl Drawing {
    pub fn pos(&self, v: usize) -> Point {
        self.vertices[v].pos
    }

    pub fn tail(&self, h: HalfEdge) -> usize {
        self.edges[h.edge()][h.is_reversed() as usize]
    }

    pub fn head(&self, h: HalfEdge) -> usize {
        self.edges[h.edge()][1 - h.is_reversed() as usize]
    }

    /// Displacement from tail to head.
    pub fn vector(&self, h: HalfEdge) -> Point {
        self.pos(self.head(h)).sub(self.pos(self.tail(h)))
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        self.vector(HalfEdge::forward(e)).norm()
    }

    /// Copy of this drawing with the given coordinates (same ids and edges).
    pub fn with_positions(&self, positions: &[Point]) -> Drawing {
        let vertices = self
            .vertices
            .iter()
            .zip(positions)
            .map(|(v, &pos)| Vertex { id: v.id, pos })
            .collect();
        Drawing {
            vertices,
            edges: self.edges.clone(),
            declared_zones: self.declared_zones.clone(),
        }
    }
}

/// One directed occurrence of an undirected edge: `2·edge` runs tail→head in
/// input order, `2·edge + 1` runs the other way.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge(pub usize);

impl HalfEdge {
    pub fn forward(edge: usize) -> Self {
        HalfEdge(2 * edge)
    }

    pub fn edge(self) -> usize {
        self.0 / 2
    }

    pub fn is_reversed(self) -> bool {
        self.0 & 1 == 1
    }

    pub fn twin(self) -> Self {
        HalfEdge(self.0 ^ 1)
    }
}

#[derive(Clone, Copy, Debug)]
pub struct IngestConfig {
    pub eps_geom: f64,
}

impl Default for IngestConfig {
    fn default() -> Self {
        IngestConfig { eps_geom: EPS_GEOM }
    }
}

/// A validated face-symmetric drawing with all derived structure.
#[derive(Clone, Debug)]
pub struct FaceSymmetricDrawing {
    pub drawing: Drawing,
    pub embedding: Embedding,
    pub zones: ZonePartition,
    pub corners: Vec<Corner>,
    pub boundary: BoundaryWalk,
}

impl FaceSymmetricDrawing {
    /// Full ingest of an already-parsed drawing.
    pub fn ingest(drawing: Drawing, cfg: &IngestConfig) -> Result<Self, IngestError> {
        let embedding = derive_embedding(&drawing, cfg)?;
        let zones = derive_zones(&drawing, &embedding, cfg)?;
        if let Some(declared) = &drawing.declared_zones {
            if !zones.matches_declared(declared) {
                return Err(IngestError::DeclaredZones);
            }
        }
        let (corners, boundary) = extract_corners(&drawing, &embedding, &zones, cfg)?;
        Ok(FaceSymmetricDrawing {
            drawing,
            embedding,
            zones,
            corners,
            boundary,
        })
    }

    /// Parse a JSON drawing document and ingest it.
    pub fn from_json(text: &str, cfg: &IngestConfig) -> Result<Self, IngestError> {
        Self::ingest(parse_drawing(text)?, cfg)
    }

    pub fn zone_count(&self) -> usize {
        self.zones.zones.len()
    }

    /// Document for this drawing, including its zone partition.
    pub fn to_document(&self) -> DrawingDocument {
        DrawingDocument::from_drawing(&self.drawing, Some(&self.zones))
    }
}
