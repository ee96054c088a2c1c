use std::f64::consts::{FRAC_PI_2, PI};

use super::separation::{cap_halfspace, cyclic_runs, strip_along, strip_with_perturbation, Strip};
use super::takacs::polygon_cuts;
use super::{polytope_to_prototypes, Arrangement, ArrangementKind};
use crate::classifier::{signed_min_margin, Label, LabeledPrototypeSet, Labeling};
use crate::error::{Error, Result};
use crate::geometry::plane::{chord_normal, cross, unit};
use crate::geometry::{reflect, regular_polygon_vertices, ConvexPolytope, Halfspace, Point};

/// Surplus prototypes are parked this many circumradii away.
const PARKING_DISTANCE: f64 = 100.0;

/// Mirrored cut-off prototypes are pushed at least this relative distance
/// beyond the circumcircle when the gap allows it.
const OUTSIDE_SLACK: f64 = 1e-3;

/// Distance of each inner point from the centre: half the distance from the
/// centre to a longest diagonal, so no diagonal separates either inner point
/// from the centre.
pub fn inner_point_offset(m: usize, radius: f64) -> f64 {
    let n = 2 * m - 1;
    0.5 * radius * ((n / 2) as f64 * PI / n as f64).cos()
}

/// Regular (2m - 1)-gon of circumradius `radius` with vertex 0 at angle
/// pi/2, followed by the inner points `(-delta, 0)` and `(delta, 0)` on the
/// line through the centre perpendicular to vertex 0.
pub fn odd_polygon_arrangement(m: usize, radius: f64) -> Result<Arrangement> {
    if m < 4 {
        return Err(Error::Unsupported(format!("need at least 4 prototypes, got {m}")));
    }
    let mut points = regular_polygon_vertices(2 * m - 1, radius, FRAC_PI_2)?;
    let delta = inner_point_offset(m, radius);
    points.push(Point::xy(-delta, 0.0));
    points.push(Point::xy(delta, 0.0));
    Ok(Arrangement { kind: ArrangementKind::OddPolygon { m }, radius, points })
}

/// Index bookkeeping over a polygon-plus-inner-points arrangement.
#[derive(Debug, Clone)]
pub struct OddPolygonGeometry<'a> {
    pub m: usize,
    /// Number of polygon vertices, `2m - 1`.
    pub n: usize,
    pub radius: f64,
    pub points: &'a [Point],
}

impl<'a> OddPolygonGeometry<'a> {
    pub fn new(arr: &'a Arrangement) -> Result<Self> {
        let ArrangementKind::OddPolygon { m } = arr.kind else {
            return Err(Error::InvalidInput("not a polygon-plus-inner-points arrangement".into()));
        };
        if arr.len() != 2 * m + 1 {
            return Err(Error::InvalidInput(format!("expected {} points, got {}", 2 * m + 1, arr.len())));
        }
        Ok(OddPolygonGeometry { m, n: 2 * m - 1, radius: arr.radius, points: &arr.points })
    }

    pub fn vertex(&self, k: usize) -> &Point {
        &self.points[k % self.n]
    }

    /// Point index of inner point 0 (left) or 1 (right).
    pub fn inner(&self, which: usize) -> usize {
        self.n + which
    }

    pub fn nearest_vertex(&self, p: &Point) -> usize {
        (0..self.n).min_by(|&a, &b| self.points[a].distance(p).total_cmp(&self.points[b].distance(p))).unwrap()
    }

    fn offset(&self, k: usize, by: isize) -> usize {
        (k as isize + by).rem_euclid(self.n as isize) as usize
    }

    pub fn adjacent(&self, a: usize, b: usize) -> bool {
        self.offset(a, 1) == b || self.offset(b, 1) == a
    }
}

/// `(D1, D2)` for vertex `d` and black inner point index `b`: D1 is the far
/// end of the longest diagonal from `d` passing on the same side of the
/// diameter through `d` as `b`; D2 is the neighbour of D1 on that side.
pub fn diagonal_partners(geo: &OddPolygonGeometry, d: usize, b: usize) -> (usize, usize) {
    let vd = geo.vertex(d);
    let side_b = cross(vd, &geo.points[b]).signum();
    let step = geo.m as isize - 1;
    let plus = geo.offset(d, step);
    if cross(vd, geo.vertex(plus)).signum() == side_b {
        (plus, geo.offset(d, step - 1))
    } else {
        (geo.offset(d, -step), geo.offset(d, -(step - 1)))
    }
}

/// Parallel-line strip separating `{D, partner, B}` from the other 2m - 2
/// points, with lines parallel to the chord D-partner (tilted when the inner
/// points tie along the chord normal).
pub fn strip_for_triple(geo: &OddPolygonGeometry, d: usize, partner: usize, b: usize) -> Option<Strip> {
    let inner_idx = [d, partner, b];
    let inner: Vec<&Point> = inner_idx.iter().map(|&i| &geo.points[i]).collect();
    let others: Vec<&Point> =
        (0..geo.points.len()).filter(|i| !inner_idx.contains(i)).map(|i| &geo.points[i]).collect();
    let u = chord_normal(geo.vertex(d), geo.vertex(partner));
    strip_with_perturbation(&u, &inner, &others, geo.radius).map(|(s, _)| s)
}

/// Which branch of the construction produced a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OddPolygonCase {
    /// Every point has the same label.
    Constant,
    /// The inner points share a label: one polygon around both.
    SharedInner { cuts: usize },
    /// m black points; `{apex, partner, B}` in one strip. `via_alternate`
    /// marks the alternating labeling, where the first black vertex had no
    /// black partner and another apex was used.
    StripTriple { apex: usize, partner: usize, via_alternate: bool },
    /// `{B, vertex}` (or B alone) in one strip; remaining black vertices cut
    /// off singly or in adjacent pairs.
    StripPair { vertex: Option<usize>, groups: usize },
}

#[derive(Debug, Clone)]
pub struct OddPolygonWitness {
    pub set: LabeledPrototypeSet,
    pub case: OddPolygonCase,
    /// The black strip prototype and its two white mirror images, when the
    /// case uses a strip.
    pub strip_prototypes: Option<[Point; 3]>,
}

pub fn odd_polygon_shatter(arr: &Arrangement, labeling: Labeling) -> Result<LabeledPrototypeSet> {
    odd_polygon_shatter_detailed(arr, labeling).map(|w| w.set)
}

/// At most m prototypes realizing `labeling`, with the case taken.
pub fn odd_polygon_shatter_detailed(arr: &Arrangement, labeling: Labeling) -> Result<OddPolygonWitness> {
    let geo = OddPolygonGeometry::new(arr)?;
    if labeling.len() != arr.len() {
        return Err(Error::InvalidInput(format!(
            "labeling of {} points for an arrangement of {}",
            labeling.len(),
            arr.len()
        )));
    }
    let fail = |reason: String| Error::Construction { labeling: labeling.bits(), reason };
    let (left, right) = (geo.inner(0), geo.inner(1));

    let ones = labeling.count(Label::Pos);
    if ones == 0 || ones == labeling.len() {
        let set = LabeledPrototypeSet::constant(Point::origin(2), labeling.get(0));
        return Ok(OddPolygonWitness { set, case: OddPolygonCase::Constant, strip_prototypes: None });
    }

    if labeling.get(left) == labeling.get(right) {
        let c = labeling.get(left);
        let vertices = &geo.points[..geo.n];
        let flagged: Vec<bool> = (0..geo.n).map(|i| labeling.get(i) != c).collect();
        let keep = [&geo.points[left], &geo.points[right]];
        let cuts = polygon_cuts(vertices, &flagged, &keep).map_err(|e| fail(e.to_string()))?;
        if cuts.len() > geo.m - 1 {
            return Err(fail(format!("{} cuts needed, at most {} allowed", cuts.len(), geo.m - 1)));
        }
        let n_cuts = cuts.len();
        let poly = ConvexPolytope::new(cuts)?;
        let set = polytope_to_prototypes(&poly, &Point::origin(2), c).map_err(|e| fail(e.to_string()))?;
        return Ok(OddPolygonWitness {
            set,
            case: OddPolygonCase::SharedInner { cuts: n_cuts },
            strip_prototypes: None,
        });
    }

    // inner points differ; black is the minority class (2m + 1 is odd)
    let black = if ones <= geo.m { Label::Pos } else { Label::Neg };
    let b = if labeling.get(left) == black { left } else { right };
    let w = if b == left { right } else { left };
    let c = geo.nearest_vertex(&geo.points[w]);
    let blacks: Vec<usize> = (0..geo.n).filter(|&i| labeling.get(i) == black).collect();
    let ctx = Ctx { geo: &geo, labeling, black, b };

    if blacks.len() == geo.m - 1 {
        let p = *blacks.iter().find(|&&v| v != c).expect("at least three black vertices");
        if let Some(wit) = ctx.triple_with_apex(p, &blacks, false) {
            return wit.map_err(fail);
        }
        let no_adjacent = !blacks.iter().any(|&v| blacks.contains(&geo.offset(v, 1)));
        if no_adjacent {
            for &q in blacks.iter().filter(|&&q| q != p && q != c) {
                if let Some(wit) = ctx.triple_with_apex(q, &blacks, true) {
                    return wit.map_err(fail);
                }
            }
            return Err(fail("alternating labeling without a usable apex".into()));
        }
    }
    ctx.strip_pair(&blacks).map_err(fail)
}

struct Ctx<'g, 'a> {
    geo: &'g OddPolygonGeometry<'a>,
    labeling: Labeling,
    black: Label,
    b: usize,
}

impl Ctx<'_, '_> {
    fn margin(&self, set: &LabeledPrototypeSet) -> f64 {
        signed_min_margin(set, self.geo.points, self.labeling)
    }

    /// `None` when neither diagonal partner of `apex` is black.
    fn triple_with_apex(
        &self,
        apex: usize,
        blacks: &[usize],
        via_alternate: bool,
    ) -> Option<std::result::Result<OddPolygonWitness, String>> {
        let (d1, d2) = diagonal_partners(self.geo, apex, self.b);
        let partners: Vec<usize> = [d1, d2].into_iter().filter(|x| blacks.contains(x)).collect();
        if partners.is_empty() {
            return None;
        }
        let mut best: Option<(OddPolygonWitness, f64)> = None;
        let mut last_err = String::new();
        for partner in partners {
            let Some(strip) = strip_for_triple(self.geo, apex, partner, self.b) else {
                last_err = format!("no strip around {{{apex}, {partner}, B}}");
                continue;
            };
            let rest: Vec<Vec<usize>> =
                blacks.iter().filter(|&&v| v != apex && v != partner).map(|&v| vec![v]).collect();
            let case = OddPolygonCase::StripTriple { apex, partner, via_alternate };
            match self.assemble(&strip, &rest, case) {
                Ok(wit) => {
                    let mg = self.margin(&wit.set);
                    if best.as_ref().is_none_or(|(_, b)| mg > *b) {
                        best = Some((wit, mg));
                    }
                }
                Err(e) => last_err = e,
            }
        }
        Some(best.map(|(w, _)| w).ok_or(last_err))
    }

    /// Strip around B and one black vertex (or B alone); the other black
    /// vertices are cut off in singles and adjacent pairs.
    fn strip_pair(&self, blacks: &[usize]) -> std::result::Result<OddPolygonWitness, String> {
        let budget = self.geo.m - 3;
        if blacks.is_empty() {
            let strip = self.lone_strip().ok_or("no strip isolates the black inner point")?;
            return self.assemble(&strip, &[], OddPolygonCase::StripPair { vertex: None, groups: 0 });
        }
        let mut candidates: Vec<(usize, Vec<Vec<usize>>)> = blacks
            .iter()
            .map(|&v| {
                let rest: Vec<usize> = blacks.iter().copied().filter(|&x| x != v).collect();
                (v, self.groups(&rest))
            })
            .filter(|(_, g)| g.len() <= budget)
            .collect();
        let fewest = candidates
            .iter()
            .map(|(_, g)| g.len())
            .min()
            .ok_or_else(|| format!("{} black vertices cannot be cut off with {budget} prototypes", blacks.len()))?;
        candidates.retain(|(_, g)| g.len() == fewest);

        let mut best: Option<(OddPolygonWitness, f64)> = None;
        let mut last_err = String::new();
        for (v, groups) in candidates {
            let pair = [&self.geo.points[self.b], self.geo.vertex(v)];
            let others: Vec<&Point> =
                (0..self.geo.points.len()).filter(|&i| i != self.b && i != v).map(|i| &self.geo.points[i]).collect();
            let along = pair[1].sub(pair[0]);
            let u = Point::xy(-along[1], along[0]);
            let Some(strip) = strip_along(&u, &pair, &others, self.geo.radius) else {
                last_err = format!("no strip around {{B, {v}}}");
                continue;
            };
            let case = OddPolygonCase::StripPair { vertex: Some(v), groups: groups.len() };
            match self.assemble(&strip, &groups, case) {
                Ok(wit) => {
                    let mg = self.margin(&wit.set);
                    if best.as_ref().is_none_or(|(_, b)| mg > *b) {
                        best = Some((wit, mg));
                    }
                }
                Err(e) => last_err = e,
            }
        }
        best.map(|(w, _)| w).ok_or(last_err)
    }

    /// Cyclic runs of `vertices` split into consecutive pairs and a final
    /// single for odd runs.
    fn groups(&self, vertices: &[usize]) -> Vec<Vec<usize>> {
        let flags: Vec<bool> = (0..self.geo.n).map(|i| vertices.contains(&i)).collect();
        cyclic_runs(&flags)
            .into_iter()
            .flat_map(|run| run.chunks(2).map(<[usize]>::to_vec).collect::<Vec<_>>())
            .collect()
    }

    /// Strip through B alone, along the direction keeping every other point
    /// furthest from the line.
    fn lone_strip(&self) -> Option<Strip> {
        let inner = [&self.geo.points[self.b]];
        let others: Vec<&Point> =
            (0..self.geo.points.len()).filter(|&i| i != self.b).map(|i| &self.geo.points[i]).collect();
        const DIRECTIONS: usize = 360;
        (0..DIRECTIONS)
            .filter_map(|k| strip_along(&unit(PI * k as f64 / DIRECTIONS as f64), &inner, &others, self.geo.radius))
            .map(|s| {
                let c = s.clearance(&inner, &others);
                (s, c)
            })
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .map(|(s, _)| s)
    }

    /// Strip prototypes, one cut-off prototype per group, parked surplus.
    fn assemble(
        &self,
        strip: &Strip,
        groups: &[Vec<usize>],
        case: OddPolygonCase,
    ) -> std::result::Result<OddPolygonWitness, String> {
        let (p, whites) = strip.prototypes();
        let white = self.black.flip();
        let mut prototypes = vec![p.clone(), whites[0].clone(), whites[1].clone()];
        let mut labels = vec![self.black, white, white];
        let base = LabeledPrototypeSet::new(prototypes.clone(), labels.clone()).map_err(|e| e.to_string())?;

        for group in groups {
            let proto = self.cut_off(group, &whites, &base)?;
            prototypes.push(proto);
            labels.push(self.black);
        }
        let budget = self.geo.m - 3;
        if groups.len() > budget {
            return Err(format!("{} groups exceed the {budget} spare prototypes", groups.len()));
        }
        for j in 0..budget - groups.len() {
            let dir = unit(-FRAC_PI_2 + 0.01 * j as f64);
            prototypes.push(dir.scaled(PARKING_DISTANCE * self.geo.radius));
            labels.push(self.black);
        }
        let set = LabeledPrototypeSet::new(prototypes, labels).map_err(|e| e.to_string())?;
        Ok(OddPolygonWitness { set, case, strip_prototypes: Some([p, whites[0].clone(), whites[1].clone()]) })
    }

    /// Moves a cut line from the middle of its gap towards the group just far
    /// enough that the mirror image of `w` lands outside the circumcircle,
    /// never closer to the group than a quarter of the gap.
    fn push_outside(&self, h: Halfspace, gap: f64, w: &Point) -> Option<Halfspace> {
        let r = self.geo.radius;
        let mirrored = reflect(w, &h).ok()?;
        if mirrored.norm() >= r * (1.0 + OUTSIDE_SLACK) {
            return Some(h);
        }
        let u = h.normal();
        let along = u.dot(w);
        let across_sq = (w.dot(w) - along * along).max(0.0);
        let target = r * (1.0 + OUTSIDE_SLACK);
        let needed = 0.5 * (along + (target * target - across_sq).max(0.0).sqrt());
        let offset = needed.min(h.offset() + 0.25 * gap).max(h.offset());
        Halfspace::new(u.clone(), offset).ok()
    }

    /// Black prototype that wins exactly the vertices of `group`: the mirror
    /// image of a white strip prototype in a line cutting the group off from
    /// every other point and from that white prototype. Of the two whites,
    /// the one leaving the larger margin on the group is used.
    fn cut_off(
        &self,
        group: &[usize],
        whites: &[Point; 2],
        base: &LabeledPrototypeSet,
    ) -> std::result::Result<Point, String> {
        let group_pts: Vec<&Point> = group.iter().map(|&i| &self.geo.points[i]).collect();
        let keep: Vec<&Point> =
            (0..self.geo.points.len()).filter(|i| !group.contains(i)).map(|i| &self.geo.points[i]).collect();
        let mut best: Option<(Point, f64)> = None;
        for w in whites {
            let mut keep_w = keep.clone();
            keep_w.push(w);
            let Some((h, gap)) = cap_halfspace(&group_pts, &keep_w) else { continue };
            let Some(h) = self.push_outside(h, gap, w) else { continue };
            let Ok(proto) = reflect(w, &h) else { continue };
            let mut protos = base.prototypes().to_vec();
            protos.push(proto.clone());
            let mut labels = base.labels().to_vec();
            labels.push(self.black);
            let Ok(trial) = LabeledPrototypeSet::new(protos, labels) else { continue };
            let mg = group
                .iter()
                .map(|&i| {
                    let c = crate::classifier::classify_unchecked(&trial, &self.geo.points[i]);
                    if c.label == self.black {
                        c.margin
                    } else {
                        -c.margin
                    }
                })
                .fold(f64::INFINITY, f64::min);
            if best.as_ref().is_none_or(|(_, b)| mg > *b) {
                best = Some((proto, mg));
            }
        }
        match best {
            Some((p, mg)) if mg > 0.0 => Ok(p),
            _ => Err(format!("vertices {group:?} cannot be cut off by a mirrored white prototype")),
        }
    }
}
