//! Explicit shattering witnesses.
//!
//! * [`polytope_to_prototypes`]: a convex polytope with N facets as the
//!   Voronoi cell of an interior prototype among itself and its N mirror
//!   images.
//! * [`takacs_arrangement`] / [`takacs_shatter`]: 2N + 1 points on a circle
//!   plus its centre, shattered by N-facet polygons, hence by N + 1
//!   prototypes.
//! * [`odd_polygon_arrangement`] / [`odd_polygon_shatter`]: a regular (2m - 1)-gon plus two
//!   inner points, shattered by m prototypes.

use serde::{Deserialize, Serialize};

use crate::geometry::Point;

mod odd_polygon;
mod polytope;
pub mod separation;
mod takacs;

pub use odd_polygon::{
    diagonal_partners, inner_point_offset, odd_polygon_arrangement, odd_polygon_shatter, odd_polygon_shatter_detailed,
    strip_for_triple, OddPolygonCase, OddPolygonGeometry, OddPolygonWitness,
};
pub use polytope::polytope_to_prototypes;
pub use takacs::{polygon_cuts, takacs_arrangement, takacs_shatter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ArrangementKind {
    /// `2N + 1` circle points then the centre.
    Takacs { facets: usize },
    /// `2m - 1` polygon vertices (vertex 0 at angle pi/2) then the inner
    /// points `(-delta, 0)` and `(delta, 0)`.
    OddPolygon { m: usize },
    /// Membership samples around a polytope.
    Polytope,
    /// Points drawn by the randomized search.
    Random,
}

/// An indexed point set together with how it was built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Arrangement {
    #[serde(flatten)]
    pub kind: ArrangementKind,
    pub radius: f64,
    pub points: Vec<Point>,
}

impl Arrangement {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points.first().map_or(0, Point::dim)
    }

    /// Index of the centre point of a circle-plus-centre arrangement.
    pub fn center_index(&self) -> Option<usize> {
        match self.kind {
            ArrangementKind::Takacs { facets } => Some(2 * facets + 1),
            _ => None,
        }
    }

    /// Indices of the two inner points of a polygon arrangement.
    pub fn inner_indices(&self) -> Option<[usize; 2]> {
        match self.kind {
            ArrangementKind::OddPolygon { m } => Some([2 * m - 1, 2 * m]),
            _ => None,
        }
    }

    /// Index of the vertex the inner points straddle perpendicularly.
    pub fn apex_index(&self) -> Option<usize> {
        match self.kind {
            ArrangementKind::OddPolygon { .. } => Some(0),
            _ => None,
        }
    }
}
