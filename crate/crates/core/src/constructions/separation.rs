//! Planar separation primitives shared by the circle constructions: cyclic
//! runs of flagged vertices, cap halfspaces cutting a group of vertices off
//! the rest, and parallel-line strips.

use crate::geometry::plane::rotate;
use crate::geometry::{Halfspace, Point, DEFAULT_TOL};

/// Maximal cyclic runs of `true` in `flags`, each listed in increasing
/// cyclic order. All-true input yields one run starting at 0.
pub fn cyclic_runs(flags: &[bool]) -> Vec<Vec<usize>> {
    let n = flags.len();
    if n == 0 || !flags.iter().any(|&f| f) {
        return Vec::new();
    }
    if flags.iter().all(|&f| f) {
        return vec![(0..n).collect()];
    }
    // start right after some false entry so no run wraps around the start
    let start = (0..n).find(|&i| !flags[i]).unwrap() + 1;
    let mut runs = Vec::new();
    let mut current = Vec::new();
    for step in 0..n {
        let i = (start + step) % n;
        if flags[i] {
            current.push(i);
        } else if !current.is_empty() {
            runs.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        runs.push(current);
    }
    runs
}

fn projections(u: &Point, pts: &[&Point]) -> (f64, f64) {
    pts.iter().map(|p| u.dot(p)).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

/// Halfspace `{u . x <= b}` with every point of `keep` inside and every
/// point of `group` outside, `u` the normalized sum of the group (its angular
/// bisector on a circle about the origin) and `b` the middle of the gap.
/// Returns the halfspace and the gap width, or `None` when the gap is empty.
pub fn cap_halfspace(group: &[&Point], keep: &[&Point]) -> Option<(Halfspace, f64)> {
    let sum = group.iter().skip(1).fold(group[0].clone(), |acc, p| acc.add(p));
    let u = sum.normalized();
    if u.norm() == 0.0 {
        return None;
    }
    let (group_min, _) = projections(&u, group);
    let (_, keep_max) = projections(&u, keep);
    let gap = group_min - keep_max;
    if !(gap > DEFAULT_TOL) {
        return None;
    }
    let h = Halfspace::new(u, 0.5 * (group_min + keep_max)).ok()?;
    Some((h, gap))
}

/// The open slab `lo < normal . x < hi`.
#[derive(Debug, Clone, PartialEq)]
pub struct Strip {
    pub normal: Point,
    pub lo: f64,
    pub hi: f64,
}

impl Strip {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, x: &Point) -> bool {
        let v = self.normal.dot(x);
        self.lo < v && v < self.hi
    }

    /// Smallest distance from any point to the nearer strip line, signed
    /// positive when the point is on its intended side.
    pub fn clearance(&self, inside: &[&Point], outside: &[&Point]) -> f64 {
        let a = inside.iter().map(|p| {
            let v = self.normal.dot(p);
            (v - self.lo).min(self.hi - v)
        });
        let b = outside.iter().map(|p| {
            let v = self.normal.dot(p);
            (self.lo - v).max(v - self.hi)
        });
        a.chain(b).fold(f64::INFINITY, f64::min)
    }

    /// Black prototype on the line through the origin along `normal`, midway
    /// between the strip lines, and its two mirror images in those lines.
    /// The black cell of this three-prototype set is exactly the strip.
    pub fn prototypes(&self) -> (Point, [Point; 2]) {
        let mid = 0.5 * (self.lo + self.hi);
        let w = self.width();
        (self.normal.scaled(mid), [self.normal.scaled(mid - w), self.normal.scaled(mid + w)])
    }

    /// Largest norm among the three strip prototypes.
    pub fn prototype_reach(&self) -> f64 {
        let mid = 0.5 * (self.lo + self.hi);
        (mid - self.width()).abs().max((mid + self.width()).abs())
    }
}

/// Gaps between the `inner` projections and the nearest `others` below and
/// above, along `u`. Negative when some other point falls inside.
fn strip_gaps(u: &Point, inner: &[&Point], others: &[&Point]) -> (f64, f64, f64, f64, f64, f64) {
    let (a, b) = projections(u, inner);
    let mut below = f64::NEG_INFINITY;
    let mut above = f64::INFINITY;
    let mut bad = false;
    for p in others {
        let v = u.dot(p);
        if v < a {
            below = below.max(v);
        } else if v > b {
            above = above.min(v);
        } else {
            bad = true;
        }
    }
    let gap_lo = if bad { -1.0 } else { a - below };
    let gap_hi = if bad { -1.0 } else { above - b };
    (a, b, below, above, gap_lo, gap_hi)
}

/// Strip with normal `u` containing `inner` and excluding `others`.
///
/// Each line sits in the middle of its gap, except that gaps are shrunk
/// when needed so the strip prototypes stay within `reach`: the reach used is
/// halfway between the reach of the tightest strip and `reach`.
pub fn strip_along(u: &Point, inner: &[&Point], others: &[&Point], reach: f64) -> Option<Strip> {
    let u = u.normalized();
    let (a, b, _, _, gap_lo, gap_hi) = strip_gaps(&u, inner, others);
    if !(gap_lo > DEFAULT_TOL && gap_hi > DEFAULT_TOL) {
        return None;
    }
    let make = |s: f64| {
        let g_lo = if gap_lo.is_finite() { gap_lo } else { 1.0 };
        let g_hi = if gap_hi.is_finite() { gap_hi } else { 1.0 };
        Strip { normal: u.clone(), lo: a - 0.5 * s * g_lo, hi: b + 0.5 * s * g_hi }
    };
    let full = make(1.0);
    let tight = make(0.0).prototype_reach();
    if full.prototype_reach() <= reach || tight >= reach {
        return Some(full);
    }
    let limit = 0.5 * (tight + reach);
    let (mut lo_s, mut hi_s) = (0.0, 1.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo_s + hi_s);
        if make(mid).prototype_reach() <= limit {
            lo_s = mid;
        } else {
            hi_s = mid;
        }
    }
    Some(make(lo_s))
}

/// Minimum of the two strip gaps along `u`.
pub fn strip_feasibility(u: &Point, inner: &[&Point], others: &[&Point]) -> f64 {
    let (.., gap_lo, gap_hi) = strip_gaps(&u.normalized(), inner, others);
    gap_lo.min(gap_hi)
}

/// Like [`strip_along`], but when `u` itself admits no strip, rotates it by
/// half the angle at which the rotated strip would first touch another
/// point, trying both senses of rotation. That angle is halved further while
/// the strip prototypes would not fit within `reach`. Returns the strip and
/// the angle.
pub fn strip_with_perturbation(u: &Point, inner: &[&Point], others: &[&Point], reach: f64) -> Option<(Strip, f64)> {
    if strip_feasibility(u, inner, others) > DEFAULT_TOL {
        return strip_along(u, inner, others, reach).map(|s| (s, 0.0));
    }
    const SCAN_STEP: f64 = 1e-3;
    const MAX_HALVINGS: usize = 20;
    let mut best: Option<(Strip, f64, f64)> = None;
    for sense in [1.0, -1.0] {
        let feasible = |phi: f64| strip_feasibility(&rotate(u, sense * phi), inner, others) > DEFAULT_TOL;
        if !feasible(SCAN_STEP * 1e-3) {
            continue;
        }
        // scan for the first infeasible angle, then bisect the boundary
        let mut lo = SCAN_STEP * 1e-3;
        let mut hi = None;
        let mut phi = SCAN_STEP;
        while phi < std::f64::consts::FRAC_PI_2 {
            if !feasible(phi) {
                hi = Some(phi);
                break;
            }
            lo = phi;
            phi += SCAN_STEP;
        }
        let touch = match hi {
            Some(mut hi) => {
                for _ in 0..60 {
                    let mid = 0.5 * (lo + hi);
                    if feasible(mid) {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                }
                lo
            }
            None => std::f64::consts::FRAC_PI_2,
        };
        // half the touching angle, halved again while the strip prototypes
        // would leave the disc of radius `reach`
        let mut angle = sense * 0.5 * touch;
        let mut found = None;
        for _ in 0..MAX_HALVINGS {
            match strip_along(&rotate(u, angle), inner, others, reach) {
                Some(strip) if strip.prototype_reach() < reach => {
                    found = Some(strip);
                    break;
                }
                Some(strip) => {
                    found.get_or_insert(strip);
                }
                None => {}
            }
            angle *= 0.5;
        }
        if found.as_ref().is_some_and(|s| s.prototype_reach() >= reach) {
            angle = sense * 0.5 * touch;
        }
        if let Some(strip) = found {
            let clear = strip.clearance(inner, others);
            if best.as_ref().is_none_or(|(_, _, c)| clear > *c) {
                best = Some((strip, angle, clear));
            }
        }
    }
    best.map(|(s, a, _)| (s, a))
}
