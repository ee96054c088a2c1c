use serde::{Deserialize, Serialize};

use super::{check_dim, Point};
use crate::error::{Error, Result};

/// The closed halfspace `{x : normal . x <= offset}`, stored with a unit
/// normal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Halfspace {
    normal: Point,
    offset: f64,
}

impl Halfspace {
    /// Builds the halfspace and rescales it so that `|normal| = 1`.
    pub fn new(normal: Point, offset: f64) -> Result<Self> {
        let n = normal.norm();
        if !(n > 0.0) {
            return Err(Error::InvalidInput("halfspace normal must be nonzero".into()));
        }
        if !offset.is_finite() {
            return Err(Error::InvalidInput("halfspace offset must be finite".into()));
        }
        Ok(Halfspace { normal: normal.scaled(1.0 / n), offset: offset / n })
    }

    pub fn normal(&self) -> &Point {
        &self.normal
    }

    pub fn offset(&self) -> f64 {
        self.offset
    }

    pub fn dim(&self) -> usize {
        self.normal.dim()
    }

    /// Signed distance from `x` to the boundary, positive on the inside.
    pub fn slack(&self, x: &Point) -> f64 {
        self.offset - self.normal.dot(x)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Membership {
    Inside,
    Boundary,
    Outside,
}

/// Intersection of finitely many halfspaces. May be unbounded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvexPolytope {
    facets: Vec<Halfspace>,
}

impl ConvexPolytope {
    pub fn new(facets: Vec<Halfspace>) -> Result<Self> {
        let first = facets.first().ok_or_else(|| Error::InvalidInput("a polytope needs at least one facet".into()))?;
        let d = first.dim();
        for h in &facets {
            check_dim(h.dim(), d)?;
        }
        Ok(ConvexPolytope { facets })
    }

    /// Axis-aligned box `lo <= x <= hi`.
    pub fn axis_box(lo: &[f64], hi: &[f64]) -> Result<Self> {
        if lo.len() != hi.len() {
            return Err(Error::InvalidInput("box corners differ in dimension".into()));
        }
        let d = lo.len();
        let mut facets = Vec::with_capacity(2 * d);
        for i in 0..d {
            let mut e = vec![0.0; d];
            e[i] = 1.0;
            facets.push(Halfspace::new(Point::new(e.clone())?, hi[i])?);
            e[i] = -1.0;
            facets.push(Halfspace::new(Point::new(e)?, -lo[i])?);
        }
        ConvexPolytope::new(facets)
    }

    pub fn facets(&self) -> &[Halfspace] {
        &self.facets
    }

    pub fn dim(&self) -> usize {
        self.facets[0].dim()
    }

    /// Smallest facet slack of `x`; positive iff `x` is strictly inside.
    pub fn min_slack(&self, x: &Point) -> f64 {
        self.facets.iter().map(|h| h.slack(x)).fold(f64::INFINITY, f64::min)
    }
}
