use std::collections::BTreeSet;
use std::f64::consts::PI;

use super::{Drawing, Embedding, HalfEdge, IngestConfig, IngestError};
use crate::geom::{line_angle_gap, norm_pi};

/// Equivalence class of edges that must share one vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Zone {
    pub id: usize,
    /// Member edge indices, ascending. The first is the canonical member.
    pub edges: Vec<usize>,
    /// Direction of the canonical member reduced to [0, π).
    pub theta: f64,
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZonePartition {
    pub zones: Vec<Zone>,
    /// Zone of each edge.
    pub zone_of: Vec<usize>,
    /// Whether the edge's forward orientation points along `theta` (else `theta + π`).
    pub aligned: Vec<bool>,
}

impl ZonePartition {
    pub fn len(&self) -> usize {
        self.zones.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zones.is_empty()
    }

    pub fn zone_of_half(&self, h: HalfEdge) -> usize {
        self.zone_of[h.edge()]
    }

    /// Direction of a directed occurrence implied by its zone: `theta` or `theta + π`.
    pub fn direction(&self, h: HalfEdge) -> f64 {
        let e = h.edge();
        let theta = self.zones[self.zone_of[e]].theta;
        if self.aligned[e] != h.is_reversed() {
            theta
        } else {
            theta + PI
        }
    }

    /// Exact set-of-sets comparison against a declared partition.
    pub fn matches_declared(&self, declared: &[Vec<usize>]) -> bool {
        let ours: BTreeSet<BTreeSet<usize>> = self
            .zones
            .iter()
            .map(|z| z.edges.iter().copied().collect())
            .collect();
        let theirs: BTreeSet<BTreeSet<usize>> = declared
            .iter()
            .map(|z| z.iter().copied().collect())
            .collect();
        let declared_total: usize = declared.iter().map(Vec::len).sum();
        ours == theirs && declared_total == self.zone_of.len()
    }
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller index stays the root so roots are canonical members.
            let (lo, hi) = (ra.min(rb), ra.max(rb));
            self.parent[hi] = lo;
        }
    }
}

/// Close the "opposite on an interior face" relation and validate every zone.
pub fn derive_zones(d: &Drawing, emb: &Embedding, cfg: &IngestConfig) -> Result<ZonePartition, IngestError> {
    let eps = cfg.eps_geom;
    let m = d.edges.len();
    let mut uf = UnionFind::new(m);
    for (fi, face) in emb.interior_faces() {
        let len = face.len();
        if len % 2 == 1 {
            return Err(IngestError::OddFace { face: fi, len });
        }
        let half = len / 2;
        for i in 0..half {
            let (a, b) = (face.walk[i], face.walk[i + half]);
            let (va, vb) = (d.vector(a), d.vector(b));
            let scale = va.norm().max(1.0);
            if va.add(vb).norm() > eps * scale {
                return Err(IngestError::NotFaceSymmetric {
                    face: fi,
                    a: a.edge(),
                    b: b.edge(),
                });
            }
            uf.union(a.edge(), b.edge());
        }
    }

    let mut zone_of = vec![usize::MAX; m];
    let mut zones: Vec<Zone> = Vec::new();
    for e in 0..m {
        let root = uf.find(e);
        if root == e {
            let v = d.vector(HalfEdge::forward(e));
            zone_of[e] = zones.len();
            zones.push(Zone {
                id: zones.len(),
                edges: vec![e],
                theta: norm_pi(v.angle()),
                length: v.norm(),
            });
        } else {
            let z = zone_of[root];
            zone_of[e] = z;
            zones[z].edges.push(e);
        }
    }

    let mut aligned = vec![true; m];
    for zone in &zones {
        let axis = crate::geom::Point::unit(zone.theta);
        for &e in &zone.edges {
            let v = d.vector(HalfEdge::forward(e));
            let scale = zone.length.max(1.0);
            if line_angle_gap(v.angle(), zone.theta) > eps || (v.norm() - zone.length).abs() > eps * scale {
                return Err(IngestError::ZoneMismatch { zone: zone.id, edge: e });
            }
            aligned[e] = v.dot(axis) > 0.0;
        }
    }
    Ok(ZonePartition {
        zones,
        zone_of,
        aligned,
    })
}
