//! Small planar geometry kit: points, angle normalization and segment tests.

use std::f64::consts::{PI, TAU};

use serde::{Deserialize, Serialize};

/// Point or free vector in the plane.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    /// Unit vector at `angle` radians ccw from the x-axis. Components within
    /// 1e-15 of zero are snapped so axis-aligned directions stay exact.
    pub fn unit(angle: f64) -> Self {
        let (s, c) = angle.sin_cos();
        let snap = |v: f64| if v.abs() < 1e-15 { 0.0 } else { v };
        Point::new(snap(c), snap(s))
    }

    pub fn polar(length: f64, angle: f64) -> Self {
        Point::unit(angle).scale(length)
    }

    pub fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }

    pub fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }

    pub fn scale(self, k: f64) -> Point {
        Point::new(self.x * k, self.y * k)
    }

    pub fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Direction in (-π, π].
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn dist(self, o: Point) -> f64 {
        self.sub(o).norm()
    }
}

/// Normalize to [0, 2π).
pub fn norm_2pi(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Normalize to (0, 2π]; an exact zero maps to 2π.
pub fn norm_2pi_open(a: f64) -> f64 {
    let r = norm_2pi(a);
    if r == 0.0 {
        TAU
    } else {
        r
    }
}

/// Normalize to [0, π).
pub fn norm_pi(a: f64) -> f64 {
    let r = a.rem_euclid(PI);
    if r >= PI {
        0.0
    } else {
        r
    }
}

/// Distance between two undirected line directions, in [0, π/2].
pub fn line_angle_gap(a: f64, b: f64) -> f64 {
    let d = norm_pi(a - b);
    d.min(PI - d)
}

/// Distance between two directions on the circle, in [0, π].
pub fn direction_gap(a: f64, b: f64) -> f64 {
    let d = norm_2pi(a - b);
    d.min(TAU - d)
}

/// Orientation of `c` relative to the directed line `a → b`, with values
/// whose magnitude is at most `eps` (scaled by segment length) reported as 0.
fn orient(a: Point, b: Point, c: Point, eps: f64) -> i8 {
    let v = b.sub(a).cross(c.sub(a));
    let scale = b.sub(a).norm().max(c.sub(a).norm()).max(1.0);
    if v > eps * scale {
        1
    } else if v < -eps * scale {
        -1
    } else {
        0
    }
}

fn on_segment(a: Point, b: Point, p: Point, eps: f64) -> bool {
    p.x >= a.x.min(b.x) - eps
        && p.x <= a.x.max(b.x) + eps
        && p.y >= a.y.min(b.y) - eps
        && p.y <= a.y.max(b.y) + eps
}

/// True when closed segments `p1p2` and `q1q2` share at least one point.
pub fn segments_intersect(p1: Point, p2: Point, q1: Point, q2: Point, eps: f64) -> bool {
    let d1 = orient(q1, q2, p1, eps);
    let d2 = orient(q1, q2, p2, eps);
    let d3 = orient(p1, p2, q1, eps);
    let d4 = orient(p1, p2, q2, eps);
    if d1 * d2 < 0 && d3 * d4 < 0 {
        return true;
    }
    (d1 == 0 && on_segment(q1, q2, p1, eps))
        || (d2 == 0 && on_segment(q1, q2, p2, eps))
        || (d3 == 0 && on_segment(p1, p2, q1, eps))
        || (d4 == 0 && on_segment(p1, p2, q2, eps))
}

/// Whether two segments sharing exactly the endpoint `shared` overlap beyond it
/// (i.e. leave the shared point in the same direction).
pub fn adjacent_segments_overlap(shared: Point, a: Point, b: Point, eps: f64) -> bool {
    let u = a.sub(shared);
    let v = b.sub(shared);
    let (lu, lv) = (u.norm(), v.norm());
    if lu <= eps || lv <= eps {
        return true;
    }
    direction_gap(u.angle(), v.angle()) <= eps
}
