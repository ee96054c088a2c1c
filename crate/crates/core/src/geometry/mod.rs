//! Real-coordinate geometry: points, oriented halfspaces, convex polytopes
//! stored as facet lists, reflections and regular polygons.
//!
//! Every predicate takes an explicit absolute tolerance. Constructions are
//! built on unit circumradius, so [`DEFAULT_TOL`] is sized for O(1)
//! coordinates.

use crate::error::{Error, Result};

mod point;
mod polytope;

pub use point::Point;
pub use polytope::{ConvexPolytope, Halfspace, Membership};

/// Default absolute tolerance for geometric predicates.
pub const DEFAULT_TOL: f64 = 1e-9;

/// Mirror image of `p` across the boundary hyperplane of `h`.
pub fn reflect(p: &Point, h: &Halfspace) -> Result<Point> {
    check_dim(p.dim(), h.dim())?;
    let excess = h.normal().dot(p) - h.offset();
    Ok(p.add_scaled(h.normal(), -2.0 * excess))
}

/// `contains` returns whether `x` lies strictly inside, on the boundary band,
/// or outside `poly`.
pub fn contains(poly: &ConvexPolytope, x: &Point, tol: f64) -> Result<Membership> {
    if !(tol > 0.0) {
        return Err(Error::InvalidInput(format!("tolerance must be positive, got {tol}")));
    }
    check_dim(x.dim(), poly.dim())?;
    let mut all_strict = true;
    for h in poly.facets() {
        let s = h.slack(x);
        if s < -tol {
            return Ok(Membership::Outside);
        }
        if s <= tol {
            all_strict = false;
        }
    }
    Ok(if all_strict { Membership::Inside } else { Membership::Boundary })
}

/// `n` points equally spaced on the circle of radius `radius` about the
/// origin, counterclockwise, the first one at angle `phase`.
pub fn regular_polygon_vertices(n: usize, radius: f64, phase: f64) -> Result<Vec<Point>> {
    if n < 3 {
        return Err(Error::InvalidInput(format!("a polygon needs at least 3 vertices, got {n}")));
    }
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(Error::InvalidInput(format!("radius must be positive, got {radius}")));
    }
    if !phase.is_finite() {
        return Err(Error::InvalidInput("phase must be finite".into()));
    }
    let step = std::f64::consts::TAU / n as f64;
    Ok((0..n)
        .map(|k| {
            let a = phase + step * k as f64;
            Point::xy(radius * a.cos(), radius * a.sin())
        })
        .collect())
}

pub(crate) fn check_dim(a: usize, b: usize) -> Result<()> {
    if a != b {
        return Err(Error::InvalidInput(format!("dimension mismatch: {a} vs {b}")));
    }
    Ok(())
}

/// Plain 2-D helpers used by the planar constructions.
pub(crate) mod plane {
    use super::Point;

    pub fn cross(a: &Point, b: &Point) -> f64 {
        a[0] * b[1] - a[1] * b[0]
    }

    pub fn unit(angle: f64) -> Point {
        Point::xy(angle.cos(), angle.sin())
    }

    pub fn rotate(p: &Point, angle: f64) -> Point {
        let (s, c) = angle.sin_cos();
        Point::xy(c * p[0] - s * p[1], s * p[0] + c * p[1])
    }

    /// Unit normal of the chord `a`-`b` pointing away from the origin side.
    /// Falls back to the direction of the chord midpoint.
    pub fn chord_normal(a: &Point, b: &Point) -> Point {
        let d = b.sub(a);
        let mut n = Point::xy(-d[1], d[0]).normalized();
        let mid = a.add(b);
        if n.dot(&mid) < 0.0 {
            n = n.scaled(-1.0);
        }
        n
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn square() -> ConvexPolytope {
        ConvexPolytope::axis_box(&[-1.0, -1.0], &[1.0, 1.0]).unwrap()
    }

    #[test]
    fn reflect_in_vertical_line() {
        let h = Halfspace::new(Point::xy(1.0, 0.0), 1.0).unwrap();
        let r = reflect(&Point::xy(0.0, 0.0), &h).unwrap();
        assert!(r.distance(&Point::xy(2.0, 0.0)) < 1e-15);
    }

    #[test]
    fn reflect_fixes_boundary_points() {
        let h = Halfspace::new(Point::xy(0.6, 0.8), 1.0).unwrap();
        let p = Point::xy(0.6, 0.8);
        assert!(reflect(&p, &h).unwrap().distance(&p) < 1e-15);
    }

    #[test]
    fn reflect_matches_foot_of_perpendicular() {
        // independent route: foot f = p - t n with t solving n.(p - t n) = b,
        // then the mirror image is 2f - p
        let (px, py) = (0.3, -0.7);
        let (nx, ny, b) = (0.6, 0.8, 1.0);
        let t = (nx * px + ny * py - b) / (nx * nx + ny * ny);
        let (fx, fy) = (px - t * nx, py - t * ny);
        let expected = Point::xy(2.0 * fx - px, 2.0 * fy - py);
        let h = Halfspace::new(Point::xy(nx, ny), b).unwrap();
        let got = reflect(&Point::xy(px, py), &h).unwrap();
        assert!(got.distance(&expected) < 1e-14, "{got:?} vs {expected:?}");
        // (0.3,-0.7): n.p - b = -1.38, p + 2.76 n = (1.956, 1.508)
        assert!(got.distance(&Point::xy(1.956, 1.508)) < 1e-12);
    }

    #[test]
    fn reflect_rejects_dimension_mismatch() {
        let h = Halfspace::new(Point::new(vec![1.0, 0.0, 0.0]).unwrap(), 0.0).unwrap();
        assert!(matches!(reflect(&Point::xy(1.0, 1.0), &h), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn square_membership() {
        let sq = square();
        let tol = DEFAULT_TOL;
        assert_eq!(contains(&sq, &Point::xy(0.0, 0.0), tol).unwrap(), Membership::Inside);
        assert_eq!(contains(&sq, &Point::xy(1.0, 0.0), tol).unwrap(), Membership::Boundary);
        assert_eq!(contains(&sq, &Point::xy(2.0, 0.0), tol).unwrap(), Membership::Outside);
        assert!(contains(&sq, &Point::xy(0.0, 0.0), 0.0).is_err());
    }

    #[test]
    fn square_vertices_of_regular_4gon() {
        let v = regular_polygon_vertices(4, 1.0, 0.0).unwrap();
        let want = [(1.0, 0.0), (0.0, 1.0), (-1.0, 0.0), (0.0, -1.0)];
        for (p, (x, y)) in v.iter().zip(want) {
            assert!(p.distance(&Point::xy(x, y)) < 1e-15);
        }
    }

    #[test]
    fn heptagon_edges_and_longest_diagonal() {
        let v = regular_polygon_vertices(7, 1.0, 0.3).unwrap();
        let edge = 2.0 * (std::f64::consts::PI / 7.0).sin();
        for k in 0..7 {
            assert!((v[k].distance(&v[(k + 1) % 7]) - edge).abs() < 1e-12);
        }
        // midpoint of the chord 0-3 is the closest point to the origin
        let mid = v[0].add(&v[3]).scaled(0.5);
        let expected = (3.0 * std::f64::consts::PI / 7.0).cos();
        assert!((mid.norm() - expected).abs() < 1e-12);
        assert!((expected - 0.2225).abs() < 1e-4);
        // explicit point-to-segment distance by dense sampling of the segment
        let best = (0..=10_000)
            .map(|i| {
                let t = i as f64 / 10_000.0;
                v[0].scaled(1.0 - t).add(&v[3].scaled(t)).norm()
            })
            .fold(f64::INFINITY, f64::min);
        assert!((best - expected).abs() < 1e-8);
    }

    #[test]
    fn degenerate_polygons_rejected() {
        assert!(regular_polygon_vertices(2, 1.0, 0.0).is_err());
        assert!(regular_polygon_vertices(5, 0.0, 0.0).is_err());
    }
}
