#![allow(dead_code)]

use std::f64::consts::PI;

use fsdraw_core::fixtures::{gen_fan, gen_grid, gen_polygon, gen_star, jitter_lengths, polygon_from_zone_vectors, skew};
use fsdraw_core::{Drawing, FaceSymmetricDrawing, IngestConfig, Point};

pub struct Fixture {
    pub name: String,
    pub drawing: Drawing,
}

fn fx(name: impl Into<String>, drawing: Drawing) -> Fixture {
    Fixture {
        name: name.into(),
        drawing,
    }
}

pub fn ingest(d: &Drawing) -> FaceSymmetricDrawing {
    FaceSymmetricDrawing::ingest(d.clone(), &IngestConfig::default()).expect("fixture ingests")
}

/// Unit rhombus with zones at 0 and `delta`.
pub fn rhombus(delta: f64) -> Drawing {
    polygon_from_zone_vectors(&[Point::unit(0.0), Point::unit(delta)])
}

/// Every small fixture: at most 12 zones each.
pub fn small_fixtures() -> Vec<Fixture> {
    let mut out = Vec::new();
    for k in 2..=8 {
        out.push(fx(format!("polygon({k})"), gen_polygon(k).unwrap()));
    }
    for (m, n) in [(1, 1), (2, 1), (2, 2), (3, 2), (3, 3), (4, 4), (5, 5), (6, 6)] {
        out.push(fx(format!("grid({m},{n})"), gen_grid(m, n).unwrap()));
    }
    for k in 2..=11 {
        out.push(fx(format!("fan({k})"), gen_fan(k).unwrap()));
    }
    for k in 3..=7 {
        out.push(fx(format!("star({k})"), gen_star(k).unwrap()));
    }
    for (m, n) in [(1, 1), (2, 3), (4, 4), (5, 5)] {
        out.push(fx(format!("grid({m},{n}) skew pi/6"), skew(&gen_grid(m, n).unwrap(), PI / 6.0).unwrap()));
    }
    for k in [3, 5, 8, 11] {
        out.push(fx(format!("fan({k}) skew 0.3"), skew(&gen_fan(k).unwrap(), 0.3).unwrap()));
    }
    for k in [3, 4] {
        out.push(fx(format!("polygon({k}) skew 0.2"), skew(&gen_polygon(k).unwrap(), 0.2).unwrap()));
    }
    out.push(fx(
        "fan(6) jitter 11 skew -0.4",
        skew(&jitter_lengths(&gen_fan(6).unwrap(), 11).unwrap(), -0.4).unwrap(),
    ));
    out.push(fx("star(5) skew 0.5", skew(&gen_star(5).unwrap(), 0.5).unwrap()));
    for delta in [PI / 12.0, PI / 6.0, PI / 4.0, PI / 3.0] {
        out.push(fx(format!("rhombus({delta:.4})"), rhombus(delta)));
    }
    out
}
