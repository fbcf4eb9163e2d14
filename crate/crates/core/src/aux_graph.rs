//! The parametric constraint graph over zones.
//!
//! Each zone is a vertex; a rotation `d(z)` of every zone direction is
//! feasible for resolution λ exactly when `d(head) ≤ d(tail) + b − m·λ` holds
//! on every edge, i.e. when the graph has no negative cycle at λ.
//!
//! Edges come from three sources:
//! - every corner (any face) with zones `a → b` and angle α gives a resolution
//!   edge `a → b` with `b = α`, `m = 1` (new angle `α + d_a − d_b ≥ λ`);
//! - every interior corner also gives a convexity edge `b → a` with
//!   `b = π − α`, `m = 0` (new angle stays `≤ π`);
//! - in safe mode, every ordered pair of boundary occurrences `k ≠ l` with
//!   winding `W` gives `z_k → z_l` with `3π − W` and `z_l → z_k` with `π + W`,
//!   keeping the new winding in `[−π, 3π]`.
//!
//! A source vertex has a zero edge to every zone.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::fmt::Write as _;

use crate::model::{BoundaryWalk, Corner, CornerKind, FaceSymmetricDrawing};
use crate::numfmt::{fmt_sig, SIG_DIGITS};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Safe,
    Unsafe,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Safe => "safe",
            Mode::Unsafe => "unsafe",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeTag {
    ResolutionCorner,
    InteriorConvexity,
    WindingUpper,
    WindingLower,
    Source,
}

impl EdgeTag {
    pub fn as_str(self) -> &'static str {
        match self {
            EdgeTag::ResolutionCorner => "resolution-corner",
            EdgeTag::InteriorConvexity => "interior-convexity",
            EdgeTag::WindingUpper => "winding-upper",
            EdgeTag::WindingLower => "winding-lower",
            EdgeTag::Source => "source",
        }
    }

    pub fn is_winding(self) -> bool {
        matches!(self, EdgeTag::WindingUpper | EdgeTag::WindingLower)
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AuxEdge {
    pub tail: usize,
    pub head: usize,
    /// Constant part of the weight, radians.
    pub b: f64,
    /// λ multiplier, 0 or 1.
    pub m: u8,
    pub tag: EdgeTag,
}

impl AuxEdge {
    pub fn weight(&self, lambda: f64) -> f64 {
        edge_weight(self, lambda)
    }
}

/// `b − m·λ`.
pub fn edge_weight(e: &AuxEdge, lambda: f64) -> f64 {
    if e.m == 0 {
        e.b
    } else {
        e.b - lambda
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct AuxGraph {
    /// Zones are vertices `0..zone_count`; the source is `zone_count`.
    pub zone_count: usize,
    pub edges: Vec<AuxEdge>,
    pub mode: Mode,
}

impl AuxGraph {
    pub fn source(&self) -> usize {
        self.zone_count
    }

    pub fn vertex_count(&self) -> usize {
        self.zone_count + 1
    }

    /// Constraint graph with parallel edges reduced to the minimum `b` per
    /// `(tail, head, m)`.
    pub fn build(corners: &[Corner], boundary: &BoundaryWalk, zone_count: usize, mode: Mode) -> Self {
        let raw = Self::build_undeduplicated(corners, boundary, zone_count, mode);
        raw.deduplicated()
    }

    pub fn from_drawing(fsd: &FaceSymmetricDrawing, mode: Mode) -> Self {
        Self::build(&fsd.corners, &fsd.boundary, fsd.zone_count(), mode)
    }

    /// Every generated constraint edge, one per corner or boundary pair.
    pub fn build_undeduplicated(corners: &[Corner], boundary: &BoundaryWalk, zone_count: usize, mode: Mode) -> Self {
        let mut edges = Vec::with_capacity(2 * corners.len() + zone_count);
        for c in corners {
            edges.push(AuxEdge {
                tail: c.zone_in,
                head: c.zone_out,
                b: c.angle,
                m: 1,
                tag: EdgeTag::ResolutionCorner,
            });
            if c.kind == CornerKind::Interior {
                edges.push(AuxEdge {
                    tail: c.zone_out,
                    head: c.zone_in,
                    b: PI - c.angle,
                    m: 0,
                    tag: EdgeTag::InteriorConvexity,
                });
            }
        }
        if mode == Mode::Safe {
            let n = boundary.len();
            edges.reserve(2 * n * n.saturating_sub(1));
            for k in 0..n {
                for l in 0..n {
                    if k == l {
                        continue;
                    }
                    let w = boundary.winding(k, l);
                    let (zk, zl) = (boundary.zones[k], boundary.zones[l]);
                    edges.push(AuxEdge {
                        tail: zk,
                        head: zl,
                        b: 3.0 * PI - w,
                        m: 0,
                        tag: EdgeTag::WindingUpper,
                    });
                    edges.push(AuxEdge {
                        tail: zl,
                        head: zk,
                        b: PI + w,
                        m: 0,
                        tag: EdgeTag::WindingLower,
                    });
                }
            }
        }
        edges.extend((0..zone_count).map(|z| AuxEdge {
            tail: zone_count,
            head: z,
            b: 0.0,
            m: 0,
            tag: EdgeTag::Source,
        }));
        AuxGraph {
            zone_count,
            edges,
            mode,
        }
    }

    /// Keep only the smallest `b` among edges sharing `(tail, head, m)`;
    /// result sorted by that key. The first edge reaching the minimum keeps its tag.
    pub fn deduplicated(&self) -> Self {
        let mut best: HashMap<(usize, usize, u8), AuxEdge> = HashMap::with_capacity(self.edges.len());
        for e in &self.edges {
            best.entry((e.tail, e.head, e.m))
                .and_modify(|cur| {
                    if e.b < cur.b {
                        *cur = *e;
                    }
                })
                .or_insert(*e);
        }
        let mut edges: Vec<AuxEdge> = best.into_values().collect();
        edges.sort_by_key(|e| (e.tail, e.head, e.m));
        AuxGraph {
            zone_count: self.zone_count,
            edges,
            mode: self.mode,
        }
    }

    /// Text dump, one `tail head b m tag` line per edge; the source prints as `s`.
    pub fn dump(&self) -> String {
        let label = |v: usize| {
            if v == self.source() {
                "s".to_string()
            } else {
                v.to_string()
            }
        };
        let mut out = String::new();
        for e in &self.edges {
            let _ = writeln!(
                out,
                "{} {} {} {} {}",
                label(e.tail),
                label(e.head),
                fmt_sig(e.b, SIG_DIGITS),
                e.m,
                e.tag.as_str()
            );
        }
        out
    }
}
