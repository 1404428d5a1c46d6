use num_rational::Rational64;
use serde::{Deserialize, Serialize};

pub type Rat = Rational64;

/// Exact point of the plane with rational coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PlanarPoint {
    pub x: Rat,
    pub y: Rat,
}

impl PlanarPoint {
    pub fn new(x: Rat, y: Rat) -> Self {
        Self { x, y }
    }

    pub fn ints(x: i64, y: i64) -> Self {
        Self::new(Rat::from_integer(x), Rat::from_integer(y))
    }

    pub fn to_f64(self) -> Point2 {
        Point2::new(rat_to_f64(self.x), rat_to_f64(self.y))
    }
}

pub fn rat_abs(r: Rat) -> Rat {
    if r < Rat::from_integer(0) {
        -r
    } else {
        r
    }
}

pub fn rat_to_f64(r: Rat) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Floating point planar coordinate used for geometry queries.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point2) -> f64 {
        (self.x - other.x).hypot(self.y - other.y)
    }

    pub fn lerp(self, other: Point2, s: f64) -> Point2 {
        Point2::new(self.x + (other.x - self.x) * s, self.y + (other.y - self.y) * s)
    }
}

/// Euclidean distance from `p` to the segment `[a, b]`.
pub fn point_segment_dist(p: Point2, a: Point2, b: Point2) -> f64 {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let len2 = dx * dx + dy * dy;
    if len2 == 0.0 {
        return p.dist(a);
    }
    let s = (((p.x - a.x) * dx + (p.y - a.y) * dy) / len2).clamp(0.0, 1.0);
    p.dist(a.lerp(b, s))
}

/// Distance from a point to a polyline (a single vertex counts as a point).
pub fn point_polyline_dist(p: Point2, line: &[Point2]) -> f64 {
    match line {
        [] => f64::INFINITY,
        [q] => p.dist(*q),
        _ => line
            .windows(2)
            .map(|w| point_segment_dist(p, w[0], w[1]))
            .fold(f64::INFINITY, f64::min),
    }
}

/// Distance between two polylines, taken as the minimum over vertex-to-polyline
/// distances in both directions. Exact for crossing-free segment pairs.
pub fn polyline_dist(a: &[Point2], b: &[Point2]) -> f64 {
    let ab = a.iter().map(|&p| point_polyline_dist(p, b)).fold(f64::INFINITY, f64::min);
    let ba = b.iter().map(|&p| point_polyline_dist(p, a)).fold(f64::INFINITY, f64::min);
    ab.min(ba)
}

/// Parse `"p/q"`, `"p"` or a decimal literal into a rational.
pub fn parse_rational(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: i64 = p.trim().parse().ok()?;
        let q: i64 = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Rat::new(p, q));
    }
    if let Ok(i) = s.parse::<i64>() {
        return Some(Rat::from_integer(i));
    }
    let f: f64 = s.parse().ok()?;
    Rat::approximate_float(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn segment_distance_projects_inside() {
        let d = point_segment_dist(Point2::new(0.5, 1.0), Point2::new(0.0, 0.0), Point2::new(1.0, 0.0));
        assert_eq!(d, 1.0);
        let d = point_segment_dist(Point2::new(2.0, 0.0), Point2::new(0.0, 0.0), Point2::new(1.0, 0.0));
        assert_eq!(d, 1.0);
    }

    #[test]
    fn rational_parsing() {
        assert_eq!(parse_rational("1/128"), Some(Rat::new(1, 128)));
        assert_eq!(parse_rational(" 3 "), Some(Rat::from_integer(3)));
        assert_eq!(parse_rational("0.25"), Some(Rat::new(1, 4)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
    }
}
