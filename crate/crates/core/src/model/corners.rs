use std::f64::consts::{PI, TAU};

use super::{Drawing, Embedding, HalfEdge, IngestConfig, IngestError, ZonePartition};
use crate::geom::norm_2pi_open;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CornerKind {
    Interior,
    Outer,
}

/// Angle between consecutive occurrences of one face walk at a vertex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Corner {
    pub face: usize,
    pub vertex: usize,
    pub incoming: HalfEdge,
    pub outgoing: HalfEdge,
    pub zone_in: usize,
    pub zone_out: usize,
    /// Directed direction of the incoming occurrence (zone direction or zone direction + π).
    pub dir_in: f64,
    pub dir_out: f64,
    /// Angle inside the face, in (0, 2π]. Leaf cusps are exactly 2π.
    pub angle: f64,
    pub kind: CornerKind,
}

/// The outer boundary traversed with the drawing on the left.
///
/// Turning at corner `k` (between occurrence `k` and `k + 1`) is
/// `π − β_k`, where `β_k` is the angle inside the drawing; leaf cusps turn by
/// `+π`. The turnings sum to 2π.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundaryWalk {
    pub occurrences: Vec<HalfEdge>,
    pub zones: Vec<usize>,
    pub turning: Vec<f64>,
    /// `prefix[k]` = sum of `turning[..k]`; `prefix[len]` is the total.
    pub prefix: Vec<f64>,
}

impl BoundaryWalk {
    pub fn len(&self) -> usize {
        self.occurrences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.occurrences.is_empty()
    }

    pub fn total_turning(&self) -> f64 {
        self.prefix[self.len()]
    }

    /// Winding from occurrence `k` forward to occurrence `l`: the turning
    /// summed over the corners passed on the way. `winding(k, k)` is 0.
    pub fn winding(&self, k: usize, l: usize) -> f64 {
        if l >= k {
            self.prefix[l] - self.prefix[k]
        } else {
            self.total_turning() - self.prefix[k] + self.prefix[l]
        }
    }

    /// Build from per-occurrence zones and per-corner turnings.
    pub fn from_turning(occurrences: Vec<HalfEdge>, zones: Vec<usize>, turning: Vec<f64>) -> Self {
        let mut prefix = Vec::with_capacity(turning.len() + 1);
        let mut acc = 0.0;
        prefix.push(acc);
        for t in &turning {
            acc += t;
            prefix.push(acc);
        }
        BoundaryWalk {
            occurrences,
            zones,
            turning,
            prefix,
        }
    }
}

/// Corner angle from the directed directions of two consecutive occurrences.
pub(crate) fn corner_angle(incoming: HalfEdge, outgoing: HalfEdge, dir_in: f64, dir_out: f64) -> f64 {
    if incoming.twin() == outgoing {
        TAU
    } else {
        norm_2pi_open(dir_in + PI - dir_out)
    }
}

/// Enumerate every face corner and build the boundary walk. Directions come
/// from the zone vectors, so angles are exactly consistent with the zone model.
pub fn extract_corners(
    d: &Drawing,
    emb: &Embedding,
    zones: &ZonePartition,
    cfg: &IngestConfig,
) -> Result<(Vec<Corner>, BoundaryWalk), IngestError> {
    let mut corners = Vec::with_capacity(2 * d.edges.len());
    let mut outer_angles = Vec::new();
    for (fi, face) in emb.faces.iter().enumerate() {
        let kind = if fi == emb.outer {
            CornerKind::Outer
        } else {
            CornerKind::Interior
        };
        let n = face.len();
        for k in 0..n {
            let (hin, hout) = (face.walk[k], face.walk[(k + 1) % n]);
            let (dir_in, dir_out) = (zones.direction(hin), zones.direction(hout));
            let angle = corner_angle(hin, hout, dir_in, dir_out);
            let vertex = d.head(hin);
            if kind == CornerKind::Interior && angle > PI + cfg.eps_geom {
                return Err(IngestError::NonConvex {
                    vertex: d.vertices[vertex].id,
                    angle,
                });
            }
            if kind == CornerKind::Outer {
                outer_angles.push(angle);
            }
            corners.push(Corner {
                face: fi,
                vertex,
                incoming: hin,
                outgoing: hout,
                zone_in: zones.zone_of_half(hin),
                zone_out: zones.zone_of_half(hout),
                dir_in,
                dir_out,
                angle,
                kind,
            });
        }
    }

    let walk = &emb.outer_face().walk;
    let b = walk.len();
    // Reversal of the outer walk; the corner after reversed occurrence k is
    // outer corner b - 2 - k.
    let occurrences: Vec<HalfEdge> = (0..b).map(|k| walk[b - 1 - k].twin()).collect();
    let boundary_zones = occurrences.iter().map(|&h| zones.zone_of_half(h)).collect();
    let turning = (0..b)
        .map(|k| outer_angles[(2 * b - 2 - k) % b] - PI)
        .collect();
    Ok((corners, BoundaryWalk::from_turning(occurrences, boundary_zones, turning)))
}
