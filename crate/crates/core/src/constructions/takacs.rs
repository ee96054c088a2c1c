use std::f64::consts::{FRAC_PI_2, PI};

use super::separation::{cap_halfspace, cyclic_runs};
use super::{polytope_to_prototypes, Arrangement, ArrangementKind};
use crate::classifier::{LabeledPrototypeSet, Labeling};
use crate::error::{Error, Result};
use crate::geometry::{regular_polygon_vertices, ConvexPolytope, Halfspace, Point};

/// `2N + 1` equally spaced points on the circle of radius `radius`, the
/// first at angle pi/2, followed by the centre.
pub fn takacs_arrangement(facets: usize, radius: f64) -> Result<Arrangement> {
    if facets < 2 {
        return Err(Error::Unsupported(format!("need at least 2 facets, got {facets}")));
    }
    let mut points = regular_polygon_vertices(2 * facets + 1, radius, FRAC_PI_2)?;
    points.push(Point::origin(2));
    Ok(Arrangement { kind: ArrangementKind::Takacs { facets }, radius, points })
}

/// Halfspaces that keep `keep` (and every unflagged vertex) inside while
/// cutting each flagged vertex off: one chord-parallel cut per cyclic run of
/// flagged vertices, two for a run spanning half the circle or more.
pub fn polygon_cuts(vertices: &[Point], flagged: &[bool], keep: &[&Point]) -> Result<Vec<Halfspace>> {
    let n = vertices.len();
    let mut keep_all: Vec<&Point> = keep.to_vec();
    keep_all.extend(vertices.iter().zip(flagged).filter(|(_, &f)| !f).map(|(p, _)| p));
    let mut cuts = Vec::new();
    for run in cyclic_runs(flagged) {
        let span = 2.0 * PI * (run.len() - 1) as f64 / n as f64;
        let pieces: Vec<&[usize]> = if span >= PI {
            let (a, b) = run.split_at(run.len().div_ceil(2));
            vec![a, b]
        } else {
            vec![&run[..]]
        };
        for piece in pieces {
            let group: Vec<&Point> = piece.iter().map(|&i| &vertices[i]).collect();
            let (h, _) = cap_halfspace(&group, &keep_all)
                .ok_or_else(|| Error::InvalidWitness(format!("vertices {piece:?} cannot be cut off by one line")))?;
            cuts.push(h);
        }
    }
    Ok(cuts)
}

/// At most N + 1 prototypes realizing `labeling` on a circle-plus-centre
/// arrangement: the polygon containing the centre and every circle point
/// sharing its label, turned into prototypes by reflection.
pub fn takacs_shatter(arr: &Arrangement, labeling: Labeling) -> Result<LabeledPrototypeSet> {
    let ArrangementKind::Takacs { facets } = arr.kind else {
        return Err(Error::InvalidInput("not a circle-plus-centre arrangement".into()));
    };
    if labeling.len() != arr.len() {
        return Err(Error::InvalidInput(format!(
            "labeling of {} points for an arrangement of {}",
            labeling.len(),
            arr.len()
        )));
    }
    let center = 2 * facets + 1;
    let c = labeling.get(center);
    let vertices = &arr.points[..center];
    let flagged: Vec<bool> = (0..center).map(|i| labeling.get(i) != c).collect();
    if !flagged.iter().any(|&f| f) {
        return Ok(LabeledPrototypeSet::constant(arr.points[center].clone(), c));
    }
    let fail = |reason: String| Error::Construction { labeling: labeling.bits(), reason };
    let cuts = polygon_cuts(vertices, &flagged, &[&arr.points[center]]).map_err(|e| fail(e.to_string()))?;
    if cuts.len() > facets {
        return Err(fail(format!("{} cuts needed but only {facets} facets allowed", cuts.len())));
    }
    let poly = ConvexPolytope::new(cuts)?;
    polytope_to_prototypes(&poly, &arr.points[center], c).map_err(|e| fail(e.to_string()))
}
