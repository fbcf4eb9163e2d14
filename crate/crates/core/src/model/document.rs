use std::collections::{HashMap, HashSet};

use serde::{Deserialize, Serialize};

use super::{Drawing, IngestError, Vertex, ZonePartition};
use crate::geom::Point;
use crate::numfmt::{round_sig, SIG_DIGITS};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub id: i64,
    pub x: f64,
    pub y: f64,
}

/// Edge as a pair of vertex ids.
pub type EdgeRecord = [i64; 2];

/// The on-disk drawing format:
/// `{"vertices":[{"id":..,"x":..,"y":..}], "edges":[[a,b]], "zones":[[edge-index,..]]}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DrawingDocument {
    pub vertices: Vec<VertexRecord>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zones: Option<Vec<Vec<usize>>>,
}

impl DrawingDocument {
    /// Serializable form of `drawing`; coordinates rounded to 12 significant digits.
    pub fn from_drawing(drawing: &Drawing, zones: Option<&ZonePartition>) -> Self {
        let vertices = drawing
            .vertices
            .iter()
            .map(|v| VertexRecord {
                id: v.id,
                x: round_sig(v.pos.x, SIG_DIGITS),
                y: round_sig(v.pos.y, SIG_DIGITS),
            })
            .collect();
        let edges = drawing
            .edges
            .iter()
            .map(|&[a, b]| [drawing.vertices[a].id, drawing.vertices[b].id])
            .collect();
        let zones = zones
            .map(|z| z.zones.iter().map(|zone| zone.edges.clone()).collect())
            .or_else(|| drawing.declared_zones.clone());
        DrawingDocument {
            vertices,
            edges,
            zones,
        }
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("drawing document serializes")
    }

    /// Validate ids and edges and build the in-memory drawing.
    pub fn into_drawing(self) -> Result<Drawing, IngestError> {
        if self.edges.is_empty() {
            return Err(IngestError::NoEdges);
        }
        let mut index = HashMap::with_capacity(self.vertices.len());
        let mut vertices = Vec::with_capacity(self.vertices.len());
        for (i, v) in self.vertices.iter().enumerate() {
            if !v.x.is_finite() || !v.y.is_finite() {
                return Err(IngestError::Malformed(format!(
                    "vertex {} has non-finite coordinates",
                    v.id
                )));
            }
            if index.insert(v.id, i).is_some() {
                return Err(IngestError::DuplicateVertex(v.id));
            }
            vertices.push(Vertex {
                id: v.id,
                pos: Point::new(v.x, v.y),
            });
        }
        let mut edges = Vec::with_capacity(self.edges.len());
        let mut seen = HashSet::with_capacity(self.edges.len());
        let mut degree = vec![0usize; vertices.len()];
        for (e, &[a, b]) in self.edges.iter().enumerate() {
            let lookup = |id: i64| {
                index
                    .get(&id)
                    .copied()
                    .ok_or(IngestError::UnknownVertex { edge: e, vertex: id })
            };
            let (ia, ib) = (lookup(a)?, lookup(b)?);
            if ia == ib {
                return Err(IngestError::SelfLoop(a));
            }
            if !seen.insert((ia.min(ib), ia.max(ib))) {
                return Err(IngestError::DuplicateEdge(a, b));
            }
            degree[ia] += 1;
            degree[ib] += 1;
            edges.push([ia, ib]);
        }
        if let Some(i) = degree.iter().position(|&d| d == 0) {
            return Err(IngestError::IsolatedVertex(vertices[i].id));
        }
        if let Some(zones) = &self.zones {
            if let Some(&bad) = zones.iter().flatten().find(|&&e| e >= edges.len()) {
                return Err(IngestError::Malformed(format!(
                    "zone list references edge index {bad}"
                )));
            }
        }
        Ok(Drawing {
            vertices,
            edges,
            declared_zones: self.zones,
        })
    }
}

/// Parse a UTF-8 JSON drawing document.
pub fn parse_drawing(text: &str) -> Result<Drawing, IngestError> {
    let doc: DrawingDocument =
        serde_json::from_str(text).map_err(|e| IngestError::Malformed(e.to_string()))?;
    doc.into_drawing()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQUARE: &str = r#"{"vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":1,"y":0},
        {"id":2,"x":1,"y":1},{"id":3,"x":0,"y":1}],"edges":[[0,1],[1,2],[2,3],[3,0]]}"#;

    #[test]
    fn parses_unit_square() {
        let d = parse_drawing(SQUARE).unwrap();
        assert_eq!(d.vertices.len(), 4);
        assert_eq!(d.edges.len(), 4);
        assert_eq!(d.pos(2), Point::new(1.0, 1.0));
    }

    #[test]
    fn parses_star() {
        let (s, c) = (3f64.sqrt() / 2.0, -0.5);
        let text = format!(
            r#"{{"vertices":[{{"id":0,"x":0,"y":0}},{{"id":1,"x":1,"y":0}},
            {{"id":2,"x":{c},"y":{s}}},{{"id":3,"x":{c},"y":{}}}],"edges":[[0,1],[0,2],[0,3]]}}"#,
            -s
        );
        let d = parse_drawing(&text).unwrap();
        assert_eq!((d.vertices.len(), d.edges.len()), (4, 3));
    }

    #[test]
    fn unknown_vertex() {
        let text = r#"{"vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":1,"y":0}],"edges":[[0,1],[1,99]]}"#;
        let err = parse_drawing(text).unwrap_err();
        assert_eq!(err, IngestError::UnknownVertex { edge: 1, vertex: 99 });
        assert!(err.to_string().contains("unknown vertex"));
    }

    #[test]
    fn rejects_bad_documents() {
        assert!(matches!(parse_drawing("{not json"), Err(IngestError::Malformed(_))));
        let dup = r#"{"vertices":[{"id":0,"x":0,"y":0},{"id":0,"x":1,"y":0}],"edges":[[0,0]]}"#;
        assert_eq!(parse_drawing(dup).unwrap_err(), IngestError::DuplicateVertex(0));
        let none = r#"{"vertices":[{"id":0,"x":0,"y":0}],"edges":[]}"#;
        assert_eq!(parse_drawing(none).unwrap_err(), IngestError::NoEdges);
        let twice = r#"{"vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":1,"y":0}],"edges":[[0,1],[1,0]]}"#;
        assert_eq!(parse_drawing(twice).unwrap_err(), IngestError::DuplicateEdge(1, 0));
        let lonely = r#"{"vertices":[{"id":0,"x":0,"y":0},{"id":1,"x":1,"y":0},{"id":2,"x":5,"y":5}],"edges":[[0,1]]}"#;
        assert_eq!(parse_drawing(lonely).unwrap_err(), IngestError::IsolatedVertex(2));
    }

    #[test]
    fn document_round_trip() {
        let d = parse_drawing(SQUARE).unwrap();
        let doc = DrawingDocument::from_drawing(&d, None);
        let again = parse_drawing(&doc.to_json_pretty()).unwrap();
        assert_eq!(d, again);
    }
}
