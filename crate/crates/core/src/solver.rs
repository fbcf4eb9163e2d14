//! Largest λ without a negative cycle, and the shortest-path zone rotations at it.

use std::f64::consts::TAU;

use log::{debug, warn};
use thiserror::Error;

use crate::aux_graph::{edge_weight, AuxEdge, AuxGraph};

/// Slack for asserting `d(v) ≤ d(u) + b − m·λ*`.
pub const EPS_FEAS: f64 = 1e-9;
/// An edge that still improves a distance by more than this after |V| − 1
/// rounds signals a negative cycle. Well above f64 noise on angle sums.
pub const NEG_CYCLE_EPS: f64 = 1e-12;
/// Upper end of the λ search range; leaf cusps allow angles up to 2π.
pub const LAMBDA_MAX: f64 = TAU;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SolveError {
    #[error("input drawing violates its own constraints (negative cycle at lambda = {lambda})")]
    InfeasibleInput { lambda: f64 },
    #[error("exact solver did not converge within {0} iterations")]
    NoConvergence(usize),
    #[error("certificate failed: {0}")]
    Certificate(String),
}

/// A cycle of the constraint graph with its aggregated weight terms.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleWitness {
    /// Vertices in traversal order; the cycle closes back to the first.
    pub vertices: Vec<usize>,
    pub edges: Vec<AuxEdge>,
    pub sum_b: f64,
    pub sum_m: u32,
}

impl CycleWitness {
    fn from_edges(edges: Vec<AuxEdge>) -> Self {
        let vertices = edges.iter().map(|e| e.tail).collect();
        let sum_b = edges.iter().map(|e| e.b).sum();
        let sum_m = edges.iter().map(|e| e.m as u32).sum();
        CycleWitness {
            vertices,
            edges,
            sum_b,
            sum_m,
        }
    }

    pub fn weight_at(&self, lambda: f64) -> f64 {
        self.sum_b - lambda * self.sum_m as f64
    }

    /// `Σb / Σm`, the λ at which this cycle has weight zero.
    pub fn ratio(&self) -> Option<f64> {
        (self.sum_m > 0).then(|| self.sum_b / self.sum_m as f64)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum BellmanFord {
    /// Shortest distances from the source, indexed by aux vertex.
    Distances(Vec<f64>),
    NegativeCycle(CycleWitness),
}

impl BellmanFord {
    pub fn is_feasible(&self) -> bool {
        matches!(self, BellmanFord::Distances(_))
    }
}

/// Single-source Bellman–Ford from the aux source at a fixed λ.
pub fn bellman_ford(a: &AuxGraph, lambda: f64) -> BellmanFord {
    let n = a.vertex_count();
    let s = a.source();
    // Source edges first so every zone starts from a finite distance.
    let mut order: Vec<usize> = (0..a.edges.len()).collect();
    order.sort_by_key(|&i| a.edges[i].tail != s);
    let weights: Vec<f64> = a.edges.iter().map(|e| edge_weight(e, lambda)).collect();

    let mut dist = vec![f64::INFINITY; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    dist[s] = 0.0;

    let relax_round = |dist: &mut [f64], pred: &mut [Option<usize>], threshold: f64| -> Option<usize> {
        let mut last = None;
        for &i in &order {
            let e = &a.edges[i];
            let du = dist[e.tail];
            if du == f64::INFINITY {
                continue;
            }
            let cand = du + weights[i];
            if cand < dist[e.head] - threshold {
                dist[e.head] = cand;
                pred[e.head] = Some(i);
                last = Some(e.head);
            }
        }
        last
    };

    for _ in 1..n {
        if relax_round(&mut dist, &mut pred, 0.0).is_none() {
            return BellmanFord::Distances(dist);
        }
    }
    let Some(mut x) = relax_round(&mut dist, &mut pred, NEG_CYCLE_EPS) else {
        return BellmanFord::Distances(dist);
    };
    // The negative cycle eventually shows up in the predecessor graph; keep
    // relaxing until a walk from a freshly relaxed vertex closes on itself.
    for _ in 0..4 * n {
        if let Some(edges) = predecessor_cycle(a, &pred, x) {
            let w = CycleWitness::from_edges(edges);
            if w.weight_at(lambda) < 0.0 {
                return BellmanFord::NegativeCycle(w);
            }
        }
        if let Some(v) = relax_round(&mut dist, &mut pred, 0.0) {
            x = v;
        } else {
            break;
        }
    }
    warn!("negative-cycle signal at lambda = {lambda} without a predecessor cycle; treating as feasible");
    BellmanFord::Distances(dist)
}

/// Walk predecessors from `start`; return the cycle's edges in forward order if
/// the walk revisits a vertex.
fn predecessor_cycle(a: &AuxGraph, pred: &[Option<usize>], start: usize) -> Option<Vec<AuxEdge>> {
    let n = pred.len();
    let mut stamp = vec![usize::MAX; n];
    let mut v = start;
    let mut step = 0;
    while stamp[v] == usize::MAX {
        stamp[v] = step;
        step += 1;
        v = a.edges[pred[v]?].tail;
    }
    let entry = v;
    let mut cycle = Vec::new();
    loop {
        let i = pred[v]?;
        cycle.push(a.edges[i]);
        v = a.edges[i].tail;
        if v == entry {
            break;
        }
    }
    cycle.reverse();
    Some(cycle)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverKind {
    #[default]
    Bisect,
    Exact,
}

impl SolverKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SolverKind::Bisect => "bisect",
            SolverKind::Exact => "exact",
        }
    }
}

impl std::str::FromStr for SolverKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "bisect" => Ok(SolverKind::Bisect),
            "exact" => Ok(SolverKind::Exact),
            other => Err(format!("unknown solver {other:?} (expected bisect or exact)")),
        }
    }
}

#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            tol: 1e-9,
            max_iter: 64,
        }
    }
}

impl SolverConfig {
    /// Offset above λ* at which maximality is probed.
    pub fn probe_offset(&self) -> f64 {
        (10.0 * self.tol).max(1e-6)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Solution {
    pub lambda_star: f64,
    /// Shortest distance per aux vertex; zones first, the source (always 0) last.
    pub distances: Vec<f64>,
    pub solver: SolverKind,
    pub iterations: usize,
    pub feasible_at: f64,
    pub infeasible_at: f64,
}

impl Solution {
    /// Rotation of each zone, `d(v_z)`.
    pub fn rotations(&self) -> &[f64] {
        &self.distances[..self.distances.len() - 1]
    }
}

/// Smallest corner angle encoded in the graph: feasible with all rotations zero.
pub fn input_lower_bound(a: &AuxGraph) -> f64 {
    a.edges
        .iter()
        .filter(|e| e.m == 1)
        .map(|e| e.b)
        .fold(f64::INFINITY, f64::min)
        .min(LAMBDA_MAX)
}

fn solution(lambda_star: f64, distances: Vec<f64>, solver: SolverKind, iterations: usize, cfg: &SolverConfig) -> Solution {
    Solution {
        lambda_star,
        distances,
        solver,
        iterations,
        feasible_at: lambda_star,
        infeasible_at: lambda_star + cfg.probe_offset(),
    }
}

/// Bisection on `[lambda_lo, 2π]` with Bellman–Ford as the feasibility test.
///
/// `lambda_lo` defaults to [`input_lower_bound`].
pub fn solve_bisect(a: &AuxGraph, lambda_lo: Option<f64>, cfg: &SolverConfig) -> Result<Solution, SolveError> {
    let mut lo = lambda_lo.unwrap_or_else(|| input_lower_bound(a));
    let mut best = match bellman_ford(a, lo) {
        BellmanFord::Distances(d) => d,
        BellmanFord::NegativeCycle(_) => return Err(SolveError::InfeasibleInput { lambda: lo }),
    };
    let mut hi = LAMBDA_MAX;
    let mut iterations = 0;
    if let BellmanFord::Distances(d) = bellman_ford(a, hi) {
        return Ok(solution(hi, d, SolverKind::Bisect, 1, cfg));
    }
    while hi - lo > cfg.tol && iterations < cfg.max_iter {
        let mid = 0.5 * (lo + hi);
        iterations += 1;
        match bellman_ford(a, mid) {
            BellmanFord::Distances(d) => {
                lo = mid;
                best = d;
            }
            BellmanFord::NegativeCycle(_) => hi = mid,
        }
    }
    debug!("bisect: lambda* = {lo} after {iterations} iterations (bracket {})", hi - lo);
    Ok(solution(lo, best, SolverKind::Bisect, iterations, cfg))
}

/// Minimum-ratio iteration: from λ = 2π, repeatedly drop λ to the ratio `Σb/Σm`
/// of the negative cycle found, until Bellman–Ford is feasible.
pub fn solve_exact(a: &AuxGraph, cfg: &SolverConfig) -> Result<Solution, SolveError> {
    const CAP: usize = 10_000;
    let mut lambda = LAMBDA_MAX;
    for iterations in 1..=CAP {
        match bellman_ford(a, lambda) {
            BellmanFord::Distances(d) => {
                debug!("exact: lambda* = {lambda} after {iterations} iterations");
                return Ok(solution(lambda, d, SolverKind::Exact, iterations, cfg));
            }
            BellmanFord::NegativeCycle(w) => {
                let Some(ratio) = w.ratio() else {
                    return Err(SolveError::InfeasibleInput { lambda });
                };
                // Ratios strictly decrease in exact arithmetic; force progress under rounding.
                lambda = ratio.min(lambda - NEG_CYCLE_EPS);
                if lambda <= 0.0 {
                    return Err(SolveError::InfeasibleInput { lambda });
                }
            }
        }
    }
    Err(SolveError::NoConvergence(CAP))
}

pub fn solve(a: &AuxGraph, kind: SolverKind, lambda_lo: Option<f64>, cfg: &SolverConfig) -> Result<Solution, SolveError> {
    match kind {
        SolverKind::Bisect => solve_bisect(a, lambda_lo, cfg),
        SolverKind::Exact => solve_exact(a, cfg),
    }
}

/// Outcome of checking a solution against its graph.
#[derive(Clone, Debug, PartialEq)]
pub struct Certificate {
    /// Largest `d(v) − d(u) − (b − m·λ*)` over all edges.
    pub worst_violation: f64,
    pub worst_edge: Option<AuxEdge>,
    pub constraints_hold: bool,
    pub probe_lambda: f64,
    /// Negative cycle found just above λ*, proving maximality.
    pub witness: Option<CycleWitness>,
}

impl Certificate {
    pub fn is_valid(&self) -> bool {
        self.constraints_hold && self.witness.is_some()
    }

    pub fn into_result(self) -> Result<Self, SolveError> {
        if !self.constraints_hold {
            return Err(SolveError::Certificate(format!(
                "shortest-path inequality violated by {:e} on {:?}",
                self.worst_violation, self.worst_edge
            )));
        }
        if self.witness.is_none() {
            return Err(SolveError::Certificate(format!(
                "no negative cycle at lambda = {}; lambda* is not maximal",
                self.probe_lambda
            )));
        }
        Ok(self)
    }
}

/// Check every `d(v) ≤ d(u) + b − m·λ* + ε` and look for a negative cycle at
/// `λ* + max(10·tol, 1e−6)`.
pub fn certify(a: &AuxGraph, sol: &Solution, cfg: &SolverConfig) -> Certificate {
    let mut worst_violation = f64::NEG_INFINITY;
    let mut worst_edge = None;
    for e in &a.edges {
        let slack = sol.distances[e.head] - sol.distances[e.tail] - edge_weight(e, sol.lambda_star);
        if slack > worst_violation {
            worst_violation = slack;
            worst_edge = Some(*e);
        }
    }
    let probe_lambda = sol.lambda_star + cfg.probe_offset();
    let witness = match bellman_ford(a, probe_lambda) {
        BellmanFord::NegativeCycle(w) => Some(w),
        BellmanFord::Distances(_) => None,
    };
    Certificate {
        worst_violation,
        worst_edge,
        constraints_hold: worst_violation <= EPS_FEAS,
        probe_lambda,
        witness,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::aux_graph::{EdgeTag, Mode};
    use std::f64::consts::{FRAC_PI_2, PI};

    fn edge(tail: usize, head: usize, b: f64, m: u8) -> AuxEdge {
        AuxEdge {
            tail,
            head,
            b,
            m,
            tag: if m == 1 {
                EdgeTag::ResolutionCorner
            } else {
                EdgeTag::InteriorConvexity
            },
        }
    }

    fn graph(zone_count: usize, mut edges: Vec<AuxEdge>) -> AuxGraph {
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
            mode: Mode::Unsafe,
        }
    }

    /// Dedup'd constraint graph of the unit square without winding edges.
    fn square() -> AuxGraph {
        graph(
            2,
            vec![
                edge(0, 1, FRAC_PI_2, 1),
                edge(1, 0, FRAC_PI_2, 1),
                edge(0, 1, FRAC_PI_2, 0),
                edge(1, 0, FRAC_PI_2, 0),
            ],
        )
    }

    #[test]
    fn square_feasible_at_half_pi() {
        match bellman_ford(&square(), FRAC_PI_2) {
            BellmanFord::Distances(d) => assert_eq!(d, vec![0.0, 0.0, 0.0]),
            other => panic!("{other:?}"),
        }
        assert!(bellman_ford(&square(), 0.0).is_feasible());
    }

    #[test]
    fn square_witness_above_half_pi() {
        let BellmanFord::NegativeCycle(w) = bellman_ford(&square(), FRAC_PI_2 + 0.1) else {
            panic!("expected a cycle");
        };
        let mut vs = w.vertices.clone();
        vs.sort();
        assert_eq!(vs, vec![0, 1]);
        assert!((w.sum_b - PI).abs() < 1e-12);
        assert_eq!(w.sum_m, 2);
        assert!((w.weight_at(FRAC_PI_2 + 0.1) + 0.2).abs() < 1e-12);
    }

    #[test]
    fn solvers_on_square() {
        let cfg = SolverConfig::default();
        let b = solve_bisect(&square(), None, &cfg).unwrap();
        assert!((b.lambda_star - FRAC_PI_2).abs() <= cfg.tol);
        assert!(b.rotations().iter().all(|d| d.abs() < 1e-9));
        let e = solve_exact(&square(), &cfg).unwrap();
        assert_eq!(e.lambda_star, FRAC_PI_2);
        for sol in [&b, &e] {
            let cert = certify(&square(), sol, &cfg);
            assert!(cert.is_valid(), "{cert:?}");
        }
    }

    #[test]
    fn rhombus_rotation_difference() {
        // zones 0 and π/6: corner classes π/6 (0 -> 1) and 5π/6 (1 -> 0)
        let a = graph(
            2,
            vec![
                edge(0, 1, PI / 6.0, 1),
                edge(1, 0, 5.0 * PI / 6.0, 1),
                edge(1, 0, 5.0 * PI / 6.0, 0),
                edge(0, 1, PI / 6.0, 0),
            ],
        );
        let cfg = SolverConfig::default();
        for sol in [solve_bisect(&a, None, &cfg).unwrap(), solve_exact(&a, &cfg).unwrap()] {
            assert!((sol.lambda_star - FRAC_PI_2).abs() <= 2.0 * cfg.tol);
            let d = sol.rotations();
            // π/6 + d0 − d1 ≥ π/2 forces d1 − d0 = −π/3 here
            assert!((d[1] - d[0] + PI / 3.0).abs() <= 2.0 * cfg.tol, "{d:?}");
        }
    }

    #[test]
    fn star_ratio_cycle() {
        let third = 2.0 * PI / 3.0;
        let a = graph(
            3,
            vec![
                edge(0, 1, third, 1),
                edge(1, 2, third, 1),
                edge(2, 0, third, 1),
                edge(0, 0, TAU, 1),
                edge(1, 1, TAU, 1),
                edge(2, 2, TAU, 1),
            ],
        );
        let sol = solve_exact(&a, &SolverConfig::default()).unwrap();
        assert!((sol.lambda_star - third).abs() < 1e-12);
    }

    #[test]
    fn infeasible_inputs() {
        let cfg = SolverConfig::default();
        let bad = graph(2, vec![edge(0, 1, -1.0, 0), edge(1, 0, 0.5, 0), edge(0, 1, 1.0, 1), edge(1, 0, 1.0, 1)]);
        assert!(matches!(solve_exact(&bad, &cfg), Err(SolveError::InfeasibleInput { .. })));
        assert!(matches!(solve_bisect(&bad, None, &cfg), Err(SolveError::InfeasibleInput { .. })));
    }

    #[test]
    fn certificate_detects_tampering() {
        let cfg = SolverConfig::default();
        let a = square();
        let sol = solve_exact(&a, &cfg).unwrap();
        let lowered = Solution {
            lambda_star: sol.lambda_star - 0.1,
            ..sol.clone()
        };
        let cert = certify(&a, &lowered, &cfg);
        assert!(cert.constraints_hold && cert.witness.is_none());
        assert!(cert.into_result().is_err());

        let mut corrupted = sol.clone();
        corrupted.distances[1] = -1.0;
        let cert = certify(&a, &corrupted, &cfg);
        assert!(!cert.constraints_hold);
        assert!(matches!(cert.into_result(), Err(SolveError::Certificate(_))));
    }
}
