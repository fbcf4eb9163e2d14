//! Measurement and validity checks for drawings, plus an independent λ* oracle.
//!
//! Every check here works from vertex coordinates, never from zone angles, so
//! it can judge an output drawing independently of how it was produced.

use std::f64::consts::{PI, TAU};

use serde::Serialize;

use crate::aux_graph::{AuxGraph, Mode};
use crate::geom::{norm_2pi_open, Point};
use crate::model::{first_crossing, Drawing, Embedding, HalfEdge};
use crate::numfmt::{round_sig, SIG_DIGITS};

/// Minimum angle between consecutive edges around any vertex, or `None` when
/// no vertex has degree two or more.
pub fn measure_resolution(d: &Drawing) -> Option<f64> {
    let mut dirs: Vec<Vec<f64>> = vec![Vec::new(); d.vertices.len()];
    for e in 0..d.edges.len() {
        let h = HalfEdge::forward(e);
        dirs[d.tail(h)].push(d.vector(h).angle());
        dirs[d.head(h)].push(d.vector(h.twin()).angle());
    }
    let mut best: Option<f64> = None;
    for mut around in dirs.into_iter().filter(|a| a.len() >= 2) {
        around.sort_by(f64::total_cmp);
        let wrap = around[0] + TAU - around[around.len() - 1];
        let gap = around
            .windows(2)
            .map(|w| w[1] - w[0])
            .fold(wrap, f64::min);
        best = Some(best.map_or(gap, |b| b.min(gap)));
    }
    best
}

/// Face corner angle at the head of `hin` measured from coordinates.
fn geometric_corner(d: &Drawing, hin: HalfEdge, hout: HalfEdge) -> f64 {
    if hin.twin() == hout {
        return TAU;
    }
    norm_2pi_open(d.vector(hin).angle() + PI - d.vector(hout).angle())
}

/// Turning angles of the boundary traversed with the drawing on the left.
pub fn boundary_turning(d: &Drawing, emb: &Embedding) -> Vec<f64> {
    let walk = &emb.outer_face().walk;
    let b = walk.len();
    // reversed occurrence k is twin(walk[b-1-k]); its following corner is outer corner b-2-k
    (0..b)
        .map(|k| {
            let j = (2 * b - 2 - k) % b;
            geometric_corner(d, walk[j], walk[(j + 1) % b]) - PI
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckResult {
    pub status: CheckStatus,
    /// Size of the worst offense (units depend on the check); 0 when clean.
    pub worst: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl CheckResult {
    fn judged(ok: bool, worst: f64, detail: Option<String>) -> Self {
        CheckResult {
            status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
            worst: round_sig(worst, SIG_DIGITS),
            detail,
        }
    }

    fn skipped(reason: &str) -> Self {
        CheckResult {
            status: CheckStatus::Skipped,
            worst: 0.0,
            detail: Some(reason.to_string()),
        }
    }

    pub fn passed(&self) -> bool {
        self.status != CheckStatus::Fail
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerifyReport {
    pub resolution: Option<f64>,
    pub central_symmetry: CheckResult,
    pub interior_convexity: CheckResult,
    pub winding_range: CheckResult,
    pub planarity: CheckResult,
    pub rotation_preserved: CheckResult,
}

impl VerifyReport {
    /// All asserted checks hold. In unsafe mode planarity is informational.
    pub fn passed(&self, mode: Mode) -> bool {
        self.central_symmetry.passed()
            && self.interior_convexity.passed()
            && self.rotation_preserved.passed()
            && (mode == Mode::Unsafe || (self.winding_range.passed() && self.planarity.passed()))
    }

    pub fn checks(&self) -> [(&'static str, &CheckResult); 5] {
        [
            ("central_symmetry", &self.central_symmetry),
            ("interior_convexity", &self.interior_convexity),
            ("winding_range", &self.winding_range),
            ("planarity", &self.planarity),
            ("rotation_preserved", &self.rotation_preserved),
        ]
    }
}

/// Run every check on `d` using the face structure `emb`.
///
/// `reference` is the drawing whose rotation system must be preserved; without
/// it that check is skipped. In unsafe mode the winding check is skipped.
pub fn check_drawing(d: &Drawing, emb: &Embedding, reference: Option<&Drawing>, mode: Mode, eps: f64) -> VerifyReport {
    VerifyReport {
        resolution: measure_resolution(d).map(|r| round_sig(r, SIG_DIGITS)),
        central_symmetry: check_central_symmetry(d, emb, eps),
        interior_convexity: check_convexity(d, emb, eps),
        winding_range: match mode {
            Mode::Safe => check_winding(d, emb, eps),
            Mode::Unsafe => CheckResult::skipped("winding constraints are not enforced in unsafe mode"),
        },
        planarity: check_planarity(d, eps),
        rotation_preserved: match reference {
            Some(r) => check_rotation(d, r),
            None => CheckResult::skipped("no reference drawing"),
        },
    }
}

fn check_central_symmetry(d: &Drawing, emb: &Embedding, eps: f64) -> CheckResult {
    let mut worst = 0.0f64;
    let mut at = None;
    for (fi, face) in emb.interior_faces() {
        if face.len() % 2 == 1 {
            return CheckResult::judged(false, f64::INFINITY, Some(format!("face {fi} has odd length")));
        }
        let half = face.len() / 2;
        for i in 0..half {
            let (a, b) = (face.walk[i], face.walk[i + half]);
            let va = d.vector(a);
            let defect = va.add(d.vector(b)).norm() / va.norm().max(1.0);
            if defect > worst {
                worst = defect;
                at = Some((fi, a.edge(), b.edge()));
            }
        }
    }
    let detail = at.map(|(f, a, b)| format!("face {f}, edges {a} and {b}"));
    CheckResult::judged(worst <= eps, worst, detail)
}

fn check_convexity(d: &Drawing, emb: &Embedding, eps: f64) -> CheckResult {
    let mut worst = f64::NEG_INFINITY;
    let mut at = None;
    for (fi, face) in emb.interior_faces() {
        let n = face.len();
        for k in 0..n {
            let alpha = geometric_corner(d, face.walk[k], face.walk[(k + 1) % n]);
            let offense = (alpha - PI).max(-alpha);
            if offense > worst {
                worst = offense;
                at = Some((fi, d.head(face.walk[k]), alpha));
            }
        }
    }
    let ok = worst <= eps;
    let detail = at
        .filter(|_| !ok)
        .map(|(f, v, a)| format!("face {f}, vertex {}: angle {a}", d.vertices[v].id));
    CheckResult::judged(ok, worst.max(0.0), detail)
}

fn check_winding(d: &Drawing, emb: &Embedding, eps: f64) -> CheckResult {
    let turning = boundary_turning(d, emb);
    let b = turning.len();
    let mut prefix = vec![0.0; b + 1];
    for k in 0..b {
        prefix[k + 1] = prefix[k] + turning[k];
    }
    let total = prefix[b];
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for k in 0..b {
        for l in 0..b {
            if k == l {
                continue;
            }
            let w = if l > k {
                prefix[l] - prefix[k]
            } else {
                total - prefix[k] + prefix[l]
            };
            lo = lo.min(w);
            hi = hi.max(w);
        }
    }
    if b < 2 {
        lo = 0.0;
        hi = 0.0;
    }
    let worst = (hi - 3.0 * PI).max(-PI - lo).max(0.0);
    let ok = worst <= eps && (total - TAU).abs() <= 10.0 * eps;
    CheckResult::judged(ok, worst, Some(format!("windings in [{lo:.9}, {hi:.9}], total turning {total:.9}")))
}

fn check_planarity(d: &Drawing, eps: f64) -> CheckResult {
    let points: Vec<Point> = d.vertices.iter().map(|v| v.pos).collect();
    match first_crossing(&points, &d.edges, eps) {
        None => CheckResult::judged(true, 0.0, None),
        Some((a, b)) => CheckResult::judged(false, 1.0, Some(format!("edges {a} and {b} intersect"))),
    }
}

/// Edge ids around each vertex in counterclockwise order, rotated to start at
/// the smallest.
fn cyclic_orders(d: &Drawing) -> Vec<Vec<usize>> {
    let mut around: Vec<Vec<(f64, usize)>> = vec![Vec::new(); d.vertices.len()];
    for e in 0..d.edges.len() {
        let h = HalfEdge::forward(e);
        around[d.tail(h)].push((d.vector(h).angle(), e));
        around[d.head(h)].push((d.vector(h.twin()).angle(), e));
    }
    around
        .into_iter()
        .map(|mut list| {
            list.sort_by(|a, b| a.0.total_cmp(&b.0));
            let mut ids: Vec<usize> = list.into_iter().map(|(_, e)| e).collect();
            if let Some(start) = ids.iter().enumerate().min_by_key(|(_, &e)| e).map(|(i, _)| i) {
                ids.rotate_left(start);
            }
            ids
        })
        .collect()
}

fn check_rotation(d: &Drawing, reference: &Drawing) -> CheckResult {
    if d.edges != reference.edges || d.vertices.len() != reference.vertices.len() {
        return CheckResult::judged(false, 1.0, Some("drawings differ combinatorially".into()));
    }
    let (ours, theirs) = (cyclic_orders(d), cyclic_orders(reference));
    let bad: Vec<usize> = (0..ours.len()).filter(|&v| ours[v] != theirs[v]).collect();
    let detail = bad
        .first()
        .map(|&v| format!("{} vertices reordered, first id {}", bad.len(), d.vertices[v].id));
    CheckResult::judged(bad.is_empty(), bad.len() as f64, detail)
}

#[derive(Debug, thiserror::Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("constraint graph has a negative cycle at lambda = 0")]
    InfeasibleAtZero,
}

/// λ* by bisection with an all-pairs Floyd–Warshall negative-diagonal test.
///
/// Written independently of the Bellman–Ford solvers; intended for small
/// graphs (a dozen zones).
pub fn oracle_lambda(a: &AuxGraph, tol: f64) -> Result<f64, OracleError> {
    let n = a.zone_count;
    let has_negative_cycle = |lambda: f64| -> bool {
        let mut dist = vec![vec![f64::INFINITY; n]; n];
        for (i, row) in dist.iter_mut().enumerate() {
            row[i] = 0.0;
        }
        for e in &a.edges {
            if e.tail >= n || e.head >= n {
                continue;
            }
            let w = e.b - f64::from(e.m) * lambda;
            if w < dist[e.tail][e.head] {
                dist[e.tail][e.head] = w;
            }
        }
        for k in 0..n {
            for i in 0..n {
                let dik = dist[i][k];
                if dik == f64::INFINITY {
                    continue;
                }
                for j in 0..n {
                    let via = dik + dist[k][j];
                    if via < dist[i][j] {
                        dist[i][j] = via;
                    }
                }
            }
        }
        (0..n).any(|i| dist[i][i] < -1e-12)
    };
    if has_negative_cycle(0.0) {
        return Err(OracleError::InfeasibleAtZero);
    }
    let (mut lo, mut hi) = (0.0, TAU);
    if !has_negative_cycle(hi) {
        return Ok(hi);
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if has_negative_cycle(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(lo)
}
