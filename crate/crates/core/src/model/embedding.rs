use std::cmp::Ordering;

use super::{Drawing, HalfEdge, IngestConfig, IngestError};
use crate::geom::{adjacent_segments_overlap, segments_intersect, Point};

/// A face as a closed walk of half-edges with the face region on the left.
#[derive(Clone, Debug, PartialEq)]
pub struct Face {
    pub walk: Vec<HalfEdge>,
    /// Shoelace area of the walk; negative for the unbounded face.
    pub signed_area: f64,
}

impl Face {
    pub fn len(&self) -> usize {
        self.walk.len()
    }

    pub fn is_empty(&self) -> bool {
        self.walk.is_empty()
    }
}

/// Rotation system and traced faces of a plane straight-line drawing.
#[derive(Clone, Debug, PartialEq)]
pub struct Embedding {
    /// Outgoing half-edges at each vertex, sorted counterclockwise by direction.
    pub rotation: Vec<Vec<HalfEdge>>,
    pub faces: Vec<Face>,
    /// Index of the unbounded face.
    pub outer: usize,
    /// Face containing each half-edge (indexed by `HalfEdge.0`).
    pub face_of: Vec<usize>,
}

impl Embedding {
    pub fn interior_faces(&self) -> impl Iterator<Item = (usize, &Face)> {
        let outer = self.outer;
        self.faces.iter().enumerate().filter(move |(i, _)| *i != outer)
    }

    pub fn outer_face(&self) -> &Face {
        &self.faces[self.outer]
    }

    /// Neighbor vertices of `v` in counterclockwise order.
    pub fn neighbors_ccw<'a>(&'a self, d: &'a Drawing, v: usize) -> impl Iterator<Item = usize> + 'a {
        self.rotation[v].iter().map(move |&h| d.head(h))
    }
}

/// First pair of edges (by index) that cross, touch away from a shared
/// endpoint, or overlap, or `None` for a plane drawing.
///
/// Edges are swept by their leftmost x so only pairs with overlapping x-ranges
/// are compared.
pub fn first_crossing(points: &[Point], edges: &[[usize; 2]], eps: f64) -> Option<(usize, usize)> {
    let mut order: Vec<usize> = (0..edges.len()).collect();
    let lo = |e: usize| points[edges[e][0]].x.min(points[edges[e][1]].x);
    let hi = |e: usize| points[edges[e][0]].x.max(points[edges[e][1]].x);
    order.sort_by(|&a, &b| lo(a).partial_cmp(&lo(b)).unwrap_or(Ordering::Equal).then(a.cmp(&b)));
    let mut found: Option<(usize, usize)> = None;
    for (i, &a) in order.iter().enumerate() {
        let a_hi = hi(a) + eps;
        for &b in &order[i + 1..] {
            if lo(b) > a_hi {
                break;
            }
            if edges_conflict(points, edges, a, b, eps) {
                let pair = (a.min(b), a.max(b));
                if found.is_none_or(|f| pair < f) {
                    found = Some(pair);
                }
            }
        }
    }
    found
}

fn edges_conflict(points: &[Point], edges: &[[usize; 2]], a: usize, b: usize, eps: f64) -> bool {
    let [a0, a1] = edges[a];
    let [b0, b1] = edges[b];
    let shared = [a0, a1].into_iter().find(|v| *v == b0 || *v == b1);
    match shared {
        Some(s) => {
            let other_a = if a0 == s { a1 } else { a0 };
            let other_b = if b0 == s { b1 } else { b0 };
            adjacent_segments_overlap(points[s], points[other_a], points[other_b], eps)
        }
        None => segments_intersect(points[a0], points[a1], points[b0], points[b1], eps),
    }
}

/// Build the rotation system and trace every face.
pub fn derive_embedding(d: &Drawing, cfg: &IngestConfig) -> Result<Embedding, IngestError> {
    let n = d.vertices.len();
    for e in 0..d.edges.len() {
        if d.edge_length(e) <= cfg.eps_geom {
            return Err(IngestError::ZeroLengthEdge(e));
        }
    }
    let points: Vec<Point> = d.vertices.iter().map(|v| v.pos).collect();
    if let Some((a, b)) = first_crossing(&points, &d.edges, cfg.eps_geom) {
        return Err(IngestError::Crossing(a, b));
    }
    check_connected(d)?;

    let mut rotation: Vec<Vec<HalfEdge>> = vec![Vec::new(); n];
    for e in 0..d.edges.len() {
        let h = HalfEdge::forward(e);
        rotation[d.tail(h)].push(h);
        rotation[d.tail(h.twin())].push(h.twin());
    }
    for out in &mut rotation {
        out.sort_by(|&p, &q| {
            d.vector(p)
                .angle()
                .partial_cmp(&d.vector(q).angle())
                .unwrap_or(Ordering::Equal)
        });
    }
    let mut slot = vec![0usize; 2 * d.edges.len()];
    for out in &rotation {
        for (i, h) in out.iter().enumerate() {
            slot[h.0] = i;
        }
    }
    // Leaving v on the clockwise neighbor of the reversed edge keeps the face on the left.
    let next = |h: HalfEdge| -> HalfEdge {
        let v = d.head(h);
        let around = &rotation[v];
        let i = slot[h.twin().0];
        around[(i + around.len() - 1) % around.len()]
    };

    let mut face_of = vec![usize::MAX; 2 * d.edges.len()];
    let mut faces = Vec::new();
    for start in 0..2 * d.edges.len() {
        if face_of[start] != usize::MAX {
            continue;
        }
        let mut walk = Vec::new();
        let mut h = HalfEdge(start);
        loop {
            face_of[h.0] = faces.len();
            walk.push(h);
            h = next(h);
            if h.0 == start {
                break;
            }
        }
        let signed_area = walk
            .iter()
            .map(|&h| d.pos(d.tail(h)).cross(d.pos(d.head(h))))
            .sum::<f64>()
            / 2.0;
        faces.push(Face { walk, signed_area });
    }

    let euler = n as i64 - d.edges.len() as i64 + faces.len() as i64;
    if euler != 2 {
        return Err(IngestError::Euler(euler));
    }
    let outer = faces
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.signed_area.partial_cmp(&b.1.signed_area).unwrap_or(Ordering::Equal))
        .map(|(i, _)| i)
        .expect("at least one face");
    Ok(Embedding {
        rotation,
        faces,
        outer,
        face_of,
    })
}

fn check_connected(d: &Drawing) -> Result<(), IngestError> {
    let n = d.vertices.len();
    let mut adj = vec![Vec::new(); n];
    for &[a, b] in &d.edges {
        adj[a].push(b);
        adj[b].push(a);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0];
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = stack.pop() {
        for &w in &adj[v] {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                stack.push(w);
            }
        }
    }
    if count == n {
        Ok(())
    } else {
        Err(IngestError::Disconnected)
    }
}
