//! Re-embedding a drawing from rotated zone vectors.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::geom::Point;
use crate::model::{Drawing, HalfEdge, ZonePartition};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LayoutError {
    #[error("length file has no entry for zone {0}")]
    MissingZone(usize),
    #[error("zone {zone} has non-positive length {length}")]
    NonPositiveLength { zone: usize, length: f64 },
    #[error("expected {expected} zone rotations, got {got}")]
    RotationCount { expected: usize, got: usize },
}

/// How output zone lengths are chosen.
#[derive(Clone, Debug, Default, PartialEq)]
pub enum LengthPolicy {
    /// Every zone vector has length 1.
    #[default]
    Unit,
    /// Keep each zone's input length.
    Preserve,
    /// Explicit length per zone id.
    Explicit(BTreeMap<usize, f64>),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ZoneVector {
    /// Output direction `θ + d`, not reduced.
    pub theta: f64,
    pub length: f64,
}

impl ZoneVector {
    pub fn vector(&self) -> Point {
        Point::polar(self.length, self.theta)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZoneVectorSet {
    pub vectors: Vec<ZoneVector>,
}

/// Rotate every zone direction by its rotation and pick lengths per `policy`.
pub fn apply_rotations(
    zones: &ZonePartition,
    rotations: &[f64],
    policy: &LengthPolicy,
) -> Result<ZoneVectorSet, LayoutError> {
    if rotations.len() != zones.len() {
        return Err(LayoutError::RotationCount {
            expected: zones.len(),
            got: rotations.len(),
        });
    }
    let vectors = zones
        .zones
        .iter()
        .zip(rotations)
        .map(|(z, &d)| {
            let length = match policy {
                LengthPolicy::Unit => 1.0,
                LengthPolicy::Preserve => z.length,
                LengthPolicy::Explicit(map) => *map.get(&z.id).ok_or(LayoutError::MissingZone(z.id))?,
            };
            if !(length > 0.0) || !length.is_finite() {
                return Err(LayoutError::NonPositiveLength { zone: z.id, length });
            }
            Ok(ZoneVector {
                theta: z.theta + d,
                length,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ZoneVectorSet { vectors })
}

#[derive(Clone, Debug)]
pub struct Placement {
    pub drawing: Drawing,
    /// Worst mismatch between an edge's endpoints and its zone vector.
    pub closure_defect: f64,
}

/// Vector carried by half-edge `h` under `zv`.
pub fn half_edge_vector(zones: &ZonePartition, zv: &ZoneVectorSet, h: HalfEdge) -> Point {
    let e = h.edge();
    let v = zv.vectors[zones.zone_of[e]].vector();
    if zones.aligned[e] != h.is_reversed() {
        v
    } else {
        v.neg()
    }
}

/// Index of the vertex with the smallest id.
pub fn lowest_id_vertex(d: &Drawing) -> usize {
    (0..d.vertices.len())
        .min_by_key(|&i| d.vertices[i].id)
        .expect("drawing has vertices")
}

/// Depth-first placement from `base`: each newly reached vertex sits at its
/// parent plus the zone vector of the connecting edge. The result is then
/// translated so its bounding box starts at the origin.
pub fn place_vertices(d: &Drawing, zones: &ZonePartition, zv: &ZoneVectorSet, base: usize) -> Placement {
    let n = d.vertices.len();
    let mut out_edges: Vec<Vec<HalfEdge>> = vec![Vec::new(); n];
    for e in 0..d.edges.len() {
        let h = HalfEdge::forward(e);
        out_edges[d.tail(h)].push(h);
        out_edges[d.tail(h.twin())].push(h.twin());
    }
    let mut pos: Vec<Option<Point>> = vec![None; n];
    pos[base] = Some(Point::ORIGIN);
    let mut stack = vec![base];
    while let Some(u) = stack.pop() {
        let pu = pos[u].expect("placed before push");
        for &h in &out_edges[u] {
            let v = d.head(h);
            if pos[v].is_none() {
                pos[v] = Some(pu.add(half_edge_vector(zones, zv, h)));
                stack.push(v);
            }
        }
    }
    let mut pts: Vec<Point> = pos.into_iter().map(|p| p.unwrap_or(Point::ORIGIN)).collect();
    let min_x = pts.iter().map(|p| p.x).fold(f64::INFINITY, f64::min);
    let min_y = pts.iter().map(|p| p.y).fold(f64::INFINITY, f64::min);
    for p in &mut pts {
        *p = p.sub(Point::new(min_x, min_y));
    }
    let closure_defect = (0..d.edges.len())
        .map(|e| {
            let h = HalfEdge::forward(e);
            pts[d.tail(h)].add(half_edge_vector(zones, zv, h)).dist(pts[d.head(h)])
        })
        .fold(0.0, f64::max);
    Placement {
        drawing: d.with_positions(&pts),
        closure_defect,
    }
}
