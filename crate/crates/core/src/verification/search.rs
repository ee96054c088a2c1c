//! Randomized witness search: random restarts plus coordinate-wise
//! perturbation hill-climbing on the per-point margins.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{verify_shattering, ShatterCertificate, MAX_ENUMERABLE_POINTS};
use crate::classifier::{realizes, Label, LabeledPrototypeSet, Labeling, DEFAULT_MU};
use crate::constructions::{Arrangement, ArrangementKind};
use crate::error::{Error, Result};
use crate::geometry::Point;

#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    pub d: usize,
    pub m: usize,
    pub n: usize,
    /// Random point sets tried before giving up.
    pub trials: usize,
    pub rng_seed: u64,
    /// Fresh prototype initializations per labeling.
    pub restarts: usize,
    /// Hill-climbing sweeps per restart.
    pub steps: usize,
    /// First perturbation size, relative to the point cloud's extent.
    pub initial_step: f64,
    /// Sweeps stop once the step shrinks below this (relative).
    pub min_step: f64,
    pub mu: f64,
}

impl SearchConfig {
    pub fn new(d: usize, m: usize, n: usize) -> Self {
        SearchConfig {
            d,
            m,
            n,
            trials: 20,
            rng_seed: 0,
            restarts: 12,
            steps: 200,
            initial_step: 0.25,
            min_step: 1e-4,
            mu: DEFAULT_MU,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.d == 0 || self.m == 0 {
            return Err(Error::InvalidInput("dimension and prototype count must be positive".into()));
        }
        if self.n == 0 || self.n > MAX_ENUMERABLE_POINTS {
            return Err(Error::InvalidInput(format!("point count {} not in 1..={MAX_ENUMERABLE_POINTS}", self.n)));
        }
        if self.trials == 0 || self.restarts == 0 {
            return Err(Error::InvalidInput("trials and restarts must be positive".into()));
        }
        let steps_ok = self.initial_step > 0.0 && self.min_step > 0.0 && self.min_step <= self.initial_step;
        if !steps_ok || !(self.mu > 0.0) {
            return Err(Error::InvalidInput("step sizes and mu must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchOutcome {
    /// `n` when some trial was shattered, otherwise 0.
    pub best_n_shattered: usize,
    pub certificate: Option<ShatterCertificate>,
    pub trials_run: usize,
    /// Most labelings any trial realized before its first miss.
    pub best_labelings_realized: u64,
}

/// Draws up to `cfg.trials` random point sets of `cfg.n` points in
/// `[-1, 1]^d` and tries to find a witness for every labeling of each.
/// Deterministic in `cfg`. Not finding a certificate is evidence only.
pub fn search_lower_bound(cfg: &SearchConfig) -> Result<SearchOutcome> {
    cfg.validate()?;
    let mut best = 0u64;
    for trial in 0..cfg.trials {
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed);
        rng.set_stream(trial as u64);
        let points: Vec<Point> = (0..cfg.n)
            .map(|_| Point::new((0..cfg.d).map(|_| rng.gen_range(-1.0..=1.0)).collect()))
            .collect::<Result<_>>()?;
        let mut found = BTreeMap::new();
        for labeling in Labeling::all(cfg.n) {
            match search_realization(&points, labeling, cfg, trial as u64)? {
                Some(set) => {
                    found.insert(labeling.bits(), set);
                }
                None => break,
            }
        }
        best = best.max(found.len() as u64);
        if found.len() as u64 == 1u64 << cfg.n {
            let arr = Arrangement { kind: ArrangementKind::Random, radius: 1.0, points };
            let cert = verify_shattering(
                &arr,
                |l| found.remove(&l.bits()).ok_or_else(|| Error::InvalidWitness("missing".into())),
                cfg.mu,
            )?;
            if cert.verified {
                return Ok(SearchOutcome {
                    best_n_shattered: cfg.n,
                    certificate: Some(cert),
                    trials_run: trial + 1,
                    best_labelings_realized: best,
                });
            }
        }
    }
    Ok(SearchOutcome { best_n_shattered: 0, certificate: None, trials_run: cfg.trials, best_labelings_realized: best })
}

/// Number of labelings of `pts` the search realizes with at most `m`
/// prototypes: a lower estimate of the shatter coefficient at `pts`.
pub fn shatter_coefficient_exhaustive(pts: &[Point], m: usize, cfg: &SearchConfig) -> Result<u64> {
    if pts.is_empty() || pts.len() > MAX_ENUMERABLE_POINTS {
        return Err(Error::InvalidInput(format!("{} points", pts.len())));
    }
    let cfg = SearchConfig { m, n: pts.len(), d: pts[0].dim(), ..cfg.clone() };
    cfg.validate()?;
    let mut count = 0;
    for labeling in Labeling::all(pts.len()) {
        if search_realization(pts, labeling, &cfg, 0)?.is_some() {
            count += 1;
        }
    }
    Ok(count)
}

/// Searches for at most `cfg.m` prototypes realizing `target` on `pts` with
/// margin `cfg.mu`. `salt` separates otherwise identical searches.
pub fn search_realization(
    pts: &[Point],
    target: Labeling,
    cfg: &SearchConfig,
    salt: u64,
) -> Result<Option<LabeledPrototypeSet>> {
    if pts.is_empty() || pts.len() != target.len() {
        return Err(Error::InvalidInput(format!("{} points but a labeling of {}", pts.len(), target.len())));
    }
    let d = pts[0].dim();
    if pts.iter().any(|p| p.dim() != d) {
        return Err(Error::InvalidInput("points of mixed dimension".into()));
    }
    let n = pts.len();
    let n_pos = target.count(Label::Pos);
    if n_pos == 0 || n_pos == n {
        let centroid = pts.iter().fold(Point::origin(d), |acc, p| acc.add(p)).scaled(1.0 / n as f64);
        return Ok(Some(LabeledPrototypeSet::constant(centroid, target.get(0))));
    }
    if cfg.m < 2 {
        return Ok(None);
    }

    let flat: Vec<f64> = pts.iter().flat_map(|p| p.coords().iter().copied()).collect();
    let is_pos: Vec<bool> = (0..n).map(|i| target.get(i) == Label::Pos).collect();
    let mut lo = vec![f64::INFINITY; d];
    let mut hi = vec![f64::NEG_INFINITY; d];
    for p in flat.chunks(d) {
        for c in 0..d {
            lo[c] = lo[c].min(p[c]);
            hi[c] = hi[c].max(p[c]);
        }
    }
    let scale = (0..d).map(|c| hi[c] - lo[c]).fold(0.0, f64::max).max(1e-3);
    // Bounding box inflated by a factor of two about its centre.
    let (box_lo, box_hi): (Vec<f64>, Vec<f64>) = (0..d)
        .map(|c| {
            let mid = 0.5 * (lo[c] + hi[c]);
            let half = (hi[c] - lo[c]).max(scale * 1e-3);
            (mid - half, mid + half)
        })
        .unzip();
    let pos_idx: Vec<usize> = (0..n).filter(|&i| is_pos[i]).collect();
    let neg_idx: Vec<usize> = (0..n).filter(|&i| !is_pos[i]).collect();

    let m = cfg.m;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.rng_seed ^ target.bits().wrapping_mul(0x9e37_79b9_7f4a_7c15));
    rng.set_stream(salt);
    let hinge = 1e-2 * scale;
    let problem = Problem { d, flat: &flat, is_pos: &is_pos, hinge };

    for restart in 0..cfg.restarts {
        // Class split of the prototypes: proportional first, then random.
        let k_pos = if restart == 0 {
            ((m as f64 * n_pos as f64 / n as f64).round() as usize).clamp(1, m - 1)
        } else {
            rng.gen_range(1..m)
        };
        let labels: Vec<bool> = (0..m).map(|j| j < k_pos).collect();
        let mut protos = vec![0.0; m * d];
        for (j, proto) in protos.chunks_mut(d).enumerate() {
            if restart % 2 == 0 {
                let pool = if labels[j] { &pos_idx } else { &neg_idx };
                let src = pool[rng.gen_range(0..pool.len())];
                for c in 0..d {
                    proto[c] = flat[src * d + c] + rng.gen_range(-0.05..=0.05) * scale;
                }
            } else {
                for c in 0..d {
                    proto[c] = rng.gen_range(box_lo[c]..=box_hi[c]);
                }
            }
        }
        if let Some(set) = climb(&problem, &mut protos, &labels, cfg, scale, pts, target)? {
            return Ok(Some(set));
        }
    }
    Ok(None)
}

struct Problem<'a> {
    d: usize,
    flat: &'a [f64],
    is_pos: &'a [bool],
    hinge: f64,
}

impl Problem<'_> {
    /// (total hinge violation, minimum signed margin)
    fn score(&self, protos: &[f64], labels: &[bool]) -> (f64, f64) {
        let d = self.d;
        let mut violation = 0.0;
        let mut min_margin = f64::INFINITY;
        for (x, &want_pos) in self.flat.chunks(d).zip(self.is_pos) {
            let mut pos = f64::INFINITY;
            let mut neg = f64::INFINITY;
            for (p, &lp) in protos.chunks(d).zip(labels) {
                let dist: f64 = x.iter().zip(p).map(|(a, b)| (a - b) * (a - b)).sum();
                if lp {
                    pos = pos.min(dist);
                } else {
                    neg = neg.min(dist);
                }
            }
            let margin = if want_pos { neg.sqrt() - pos.sqrt() } else { pos.sqrt() - neg.sqrt() };
            violation += (margin - self.hinge).min(0.0);
            min_margin = min_margin.min(margin);
        }
        (violation, min_margin)
    }
}

fn better(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 > b.0 || (a.0 == b.0 && a.1 > b.1)
}

fn climb(
    problem: &Problem<'_>,
    protos: &mut [f64],
    labels: &[bool],
    cfg: &SearchConfig,
    scale: f64,
    pts: &[Point],
    target: Labeling,
) -> Result<Option<LabeledPrototypeSet>> {
    let mut current = problem.score(protos, labels);
    let mut step = cfg.initial_step * scale;
    let min_step = cfg.min_step * scale;
    for _ in 0..cfg.steps {
        if current.1 >= cfg.mu {
            break;
        }
        let mut improved = false;
        for k in 0..protos.len() {
            for delta in [step, -step] {
                let old = protos[k];
                protos[k] = old + delta;
                let candidate = problem.score(protos, labels);
                if better(candidate, current) {
                    current = candidate;
                    improved = true;
                    break;
                }
                protos[k] = old;
            }
        }
        if !improved {
            step *= 0.5;
            if step < min_step {
                break;
            }
        }
    }
    if !(current.1 >= cfg.mu) {
        return Ok(None);
    }
    let d = problem.d;
    let points = protos.chunks(d).map(|c| Point::new(c.to_vec())).collect::<Result<Vec<_>>>()?;
    let labels = labels.iter().map(|&b| Label::from_bit(b)).collect();
    // Coincident prototypes are rejected by the constructor; treat as a miss.
    let Ok(set) = LabeledPrototypeSet::new(points, labels) else {
        return Ok(None);
    };
    Ok(realizes(&set, pts, target, cfg.mu)?.then_some(set))
}
