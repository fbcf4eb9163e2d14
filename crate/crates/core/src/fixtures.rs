//! Deterministic generators for face-symmetric test drawings.

use std::collections::{BTreeMap, HashMap};
use std::f64::consts::{FRAC_PI_2, PI};
use std::hash::Hash;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::geom::Point;
use crate::layout::{apply_rotations, place_vertices, LengthPolicy};
use crate::model::{Drawing, FaceSymmetricDrawing, IngestConfig, IngestError, Vertex};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FixtureError {
    #[error("{what} must be at least {min}, got {got}")]
    TooSmall { what: &'static str, min: usize, got: usize },
    #[error("pseudoline end {0} appears {1} times (expected exactly 2)")]
    Multiplicity(String, usize),
    #[error("skew angle {0} must lie strictly between -pi/2 and pi/2")]
    Skew(f64),
    #[error(transparent)]
    Ingest(#[from] IngestError),
}

fn at_least(what: &'static str, min: usize, got: usize) -> Result<(), FixtureError> {
    if got < min {
        Err(FixtureError::TooSmall { what, min, got })
    } else {
        Ok(())
    }
}

fn drawing_from(points: Vec<Point>, edges: Vec<[usize; 2]>) -> Drawing {
    Drawing {
        vertices: points
            .into_iter()
            .enumerate()
            .map(|(i, pos)| Vertex { id: i as i64, pos })
            .collect(),
        edges,
        declared_zones: None,
    }
}

/// Centrally symmetric polygon whose sides are `vectors` followed by their
/// negations. Vectors must be sorted by angle within a half-turn.
pub fn polygon_from_zone_vectors(vectors: &[Point]) -> Drawing {
    let k = vectors.len();
    let mut points = Vec::with_capacity(2 * k);
    let mut p = Point::ORIGIN;
    for step in vectors.iter().copied().chain(vectors.iter().map(|v| v.neg())) {
        points.push(p);
        p = p.add(step);
    }
    let edges = (0..2 * k).map(|i| [i, (i + 1) % (2 * k)]).collect();
    drawing_from(points, edges)
}

/// Regular 2k-gon with unit sides; zone `i` points along `iπ/k`.
pub fn gen_polygon(k: usize) -> Result<Drawing, FixtureError> {
    at_least("polygon zone count", 2, k)?;
    let vectors: Vec<Point> = (0..k).map(|i| Point::unit(i as f64 * PI / k as f64)).collect();
    Ok(polygon_from_zone_vectors(&vectors))
}

/// `(m+1) × (n+1)` unit lattice: `m` cells wide, `n` tall, `m + n` zones.
pub fn gen_grid(m: usize, n: usize) -> Result<Drawing, FixtureError> {
    at_least("grid width", 1, m)?;
    at_least("grid height", 1, n)?;
    let id = |i: usize, j: usize| j * (m + 1) + i;
    let mut points = Vec::with_capacity((m + 1) * (n + 1));
    for j in 0..=n {
        for i in 0..=m {
            points.push(Point::new(i as f64, j as f64));
        }
    }
    let mut edges = Vec::new();
    for j in 0..=n {
        for i in 0..m {
            edges.push([id(i, j), id(i + 1, j)]);
        }
    }
    for i in 0..=m {
        for j in 0..n {
            edges.push([id(i, j), id(i, j + 1)]);
        }
    }
    Ok(drawing_from(points, edges))
}

/// `k` unit rhombi sharing a center vertex: `k + 1` rays spread evenly over
/// an angle of `(k − 1)π/k`, with a rhombus between each consecutive pair.
/// The center has degree `k + 1` and each ray is its own zone.
pub fn gen_fan(k: usize) -> Result<Drawing, FixtureError> {
    at_least("fan rhombus count", 2, k)?;
    let width = (k as f64 - 1.0) * PI / k as f64;
    let rays: Vec<Point> = (0..=k).map(|i| Point::unit(i as f64 * width / k as f64)).collect();
    let mut points = vec![Point::ORIGIN];
    points.extend(rays.iter().copied());
    points.extend(rays.windows(2).map(|w| w[0].add(w[1])));
    let tip = |i: usize| 1 + i;
    let outer = |i: usize| k + 2 + i;
    let mut edges: Vec<[usize; 2]> = (0..=k).map(|i| [0, tip(i)]).collect();
    for i in 0..k {
        edges.push([tip(i), outer(i)]);
        edges.push([outer(i), tip(i + 1)]);
    }
    Ok(drawing_from(points, edges))
}

/// Tree with `k` unit edges from a center at angles `2πi/k`.
pub fn gen_star(k: usize) -> Result<Drawing, FixtureError> {
    at_least("star ray count", 1, k)?;
    let mut points = vec![Point::ORIGIN];
    points.extend((0..k).map(|i| Point::unit(2.0 * PI * i as f64 / k as f64)));
    let edges = (0..k).map(|i| [0, i + 1]).collect();
    Ok(drawing_from(points, edges))
}

/// Shear `x ← x + tan(angle)·y`. Affine, so face symmetry, convexity and
/// planarity survive while corner angles change.
pub fn skew(d: &Drawing, angle: f64) -> Result<Drawing, FixtureError> {
    if !(angle.abs() < FRAC_PI_2) {
        return Err(FixtureError::Skew(angle));
    }
    let t = angle.tan();
    let pts: Vec<Point> = d.vertices.iter().map(|v| Point::new(v.pos.x + t * v.pos.y, v.pos.y)).collect();
    Ok(d.with_positions(&pts))
}

/// Rescale every zone by a seeded random factor in [0.5, 1.5]. Directions are
/// untouched, so the drawing stays face-symmetric with the same angles.
pub fn jitter_lengths(d: &Drawing, seed: u64) -> Result<Drawing, FixtureError> {
    let fsd = FaceSymmetricDrawing::ingest(d.clone(), &IngestConfig::default())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let lengths: BTreeMap<usize, f64> = fsd
        .zones
        .zones
        .iter()
        .map(|z| (z.id, z.length * rng.gen_range(0.5..1.5)))
        .collect();
    let zero = vec![0.0; fsd.zone_count()];
    let zv = apply_rotations(&fsd.zones, &zero, &LengthPolicy::Explicit(lengths)).expect("every zone has a length");
    let base = crate::layout::lowest_id_vertex(&fsd.drawing);
    Ok(place_vertices(&fsd.drawing, &fsd.zones, &zv, base).drawing)
}

/// Zone vectors from the cyclic order of pseudoline ends at infinity.
///
/// End `j` of `2t` sits on the unit circle at angle `2πj/(2t)`; each label's
/// vector is the normalized difference (second end minus first) of its two
/// end points. Returned in order of first appearance.
pub fn arrangement_init<L>(ends: &[L]) -> Result<Vec<(L, Point)>, FixtureError>
where
    L: Eq + Hash + Clone + std::fmt::Debug,
{
    let mut positions: HashMap<&L, Vec<usize>> = HashMap::new();
    let mut order: Vec<&L> = Vec::new();
    for (j, label) in ends.iter().enumerate() {
        let slot = positions.entry(label).or_default();
        if slot.is_empty() {
            order.push(label);
        }
        slot.push(j);
    }
    let total = ends.len() as f64;
    order
        .into_iter()
        .map(|label| {
            let at = &positions[label];
            if at.len() != 2 {
                return Err(FixtureError::Multiplicity(format!("{label:?}"), at.len()));
            }
            let end = |j: usize| Point::unit(2.0 * PI * j as f64 / total);
            let diff = end(at[1]).sub(end(at[0]));
            Ok((label.clone(), diff.scale(1.0 / diff.norm())))
        })
        .collect()
}
