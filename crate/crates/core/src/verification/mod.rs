//! Shattering certificates: exhaustive labeling sweeps over an arrangement,
//! independent re-verification from the stored witnesses alone, and a
//! randomized search for witnesses on random point sets.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::classifier::{signed_min_margin, LabeledPrototypeSet, Labeling};
use crate::constructions::Arrangement;
use crate::error::{Error, Result};

mod search;

pub use search::{search_lower_bound, search_realization, shatter_coefficient_exhaustive, SearchConfig, SearchOutcome};

/// Largest point count for which all labelings are enumerated.
pub const MAX_ENUMERABLE_POINTS: usize = 24;

/// What a certificate claims about its witnesses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Claim {
    /// Every labeling of the arrangement has a witness.
    Shatter,
    /// Only the listed labelings are claimed.
    Realize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Failure {
    pub labeling: u64,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ShatterCertificate {
    pub arrangement: Arrangement,
    pub claim: Claim,
    pub mu: f64,
    /// Bitmask -> prototype set realizing that labeling.
    pub witnesses: BTreeMap<u64, LabeledPrototypeSet>,
    /// Smallest signed margin over all witnesses and points.
    pub min_margin: f64,
    pub verified: bool,
    pub first_failure: Option<Failure>,
}

/// Outcome of checking stored witnesses without any generator.
#[derive(Debug, Clone, PartialEq)]
pub struct Reverification {
    pub verified: bool,
    pub min_margin: f64,
    pub first_failure: Option<Failure>,
}

fn check_enumerable(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ENUMERABLE_POINTS {
        return Err(Error::InvalidInput(format!(
            "cannot enumerate labelings of {n} points (limit {MAX_ENUMERABLE_POINTS})"
        )));
    }
    Ok(())
}

fn check_mu(mu: f64) -> Result<()> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(Error::InvalidInput(format!("margin threshold must be positive, got {mu}")));
    }
    Ok(())
}

/// Runs `generate` on every labeling of `arr` and checks each result
/// realizes its labeling with margin at least `mu`. Generator errors and
/// failed realizations are recorded, not raised; the sweep always covers
/// every labeling.
pub fn verify_shattering<G>(arr: &Arrangement, mut generate: G, mu: f64) -> Result<ShatterCertificate>
where
    G: FnMut(Labeling) -> Result<LabeledPrototypeSet>,
{
    check_enumerable(arr.len())?;
    check_mu(mu)?;
    let mut witnesses = BTreeMap::new();
    let mut min_margin = f64::INFINITY;
    let mut first_failure = None;
    for labeling in Labeling::all(arr.len()) {
        match generate(labeling) {
            Ok(set) => {
                let margin = witness_margin(&set, arr, labeling);
                min_margin = min_margin.min(margin);
                if !(margin >= mu) && first_failure.is_none() {
                    first_failure =
                        Some(Failure { labeling: labeling.bits(), reason: format!("margin {margin:e} below {mu:e}") });
                }
                witnesses.insert(labeling.bits(), set);
            }
            Err(e) => {
                min_margin = f64::NEG_INFINITY;
                if first_failure.is_none() {
                    first_failure = Some(Failure { labeling: labeling.bits(), reason: e.to_string() });
                }
            }
        }
    }
    Ok(ShatterCertificate {
        arrangement: arr.clone(),
        claim: Claim::Shatter,
        mu,
        witnesses,
        min_margin,
        verified: first_failure.is_none(),
        first_failure,
    })
}

fn witness_margin(set: &LabeledPrototypeSet, arr: &Arrangement, labeling: Labeling) -> f64 {
    if set.dim() != arr.dim() {
        return f64::NEG_INFINITY;
    }
    signed_min_margin(set, &arr.points, labeling)
}

impl ShatterCertificate {
    /// Certificate for individually listed labelings.
    pub fn for_labelings(
        arrangement: Arrangement,
        witnesses: BTreeMap<u64, LabeledPrototypeSet>,
        mu: f64,
    ) -> Result<Self> {
        check_mu(mu)?;
        let mut cert = ShatterCertificate {
            arrangement,
            claim: Claim::Realize,
            mu,
            witnesses,
            min_margin: f64::INFINITY,
            verified: false,
            first_failure: None,
        };
        let r = cert.reverify()?;
        cert.min_margin = r.min_margin;
        cert.verified = r.verified;
        cert.first_failure = r.first_failure;
        Ok(cert)
    }

    /// Re-checks the stored witnesses against the stored points at the
    /// stored `mu`. A shatter claim also needs a witness for every labeling.
    pub fn reverify(&self) -> Result<Reverification> {
        self.reverify_at(self.mu)
    }

    pub fn reverify_at(&self, mu: f64) -> Result<Reverification> {
        check_mu(mu)?;
        let n = self.arrangement.len();
        if n == 0 || n > Labeling::MAX_LEN {
            return Err(Error::InvalidInput(format!("arrangement of {n} points")));
        }
        let mut min_margin = f64::INFINITY;
        let mut first_failure = None;
        let mut note = |bits: u64, reason: String| {
            if first_failure.is_none() {
                first_failure = Some(Failure { labeling: bits, reason });
            }
        };
        if self.claim == Claim::Shatter {
            check_enumerable(n)?;
            if let Some(bits) = (0..1u64 << n).find(|b| !self.witnesses.contains_key(b)) {
                note(bits, "no witness".into());
                min_margin = f64::NEG_INFINITY;
            }
        }
        for (&bits, set) in &self.witnesses {
            let Ok(labeling) = Labeling::new(bits, n) else {
                note(bits, format!("bitmask does not fit {n} points"));
                min_margin = f64::NEG_INFINITY;
                continue;
            };
            let margin = witness_margin(set, &self.arrangement, labeling);
            min_margin = min_margin.min(margin);
            if !(margin >= mu) {
                note(bits, format!("margin {margin:e} below {mu:e}"));
            }
        }
        if self.witnesses.is_empty() {
            note(0, "certificate holds no witnesses".into());
        }
        Ok(Reverification { verified: first_failure.is_none(), min_margin, first_failure })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::{odd_polygon_arrangement, odd_polygon_shatter, takacs_arrangement, takacs_shatter};

    #[test]
    fn takacs_six_points_certified() {
        let a = takacs_arrangement(2, 1.0).unwrap();
        let cert = verify_shattering(&a, |l| takacs_shatter(&a, l), 1e-6).unwrap();
        assert!(cert.verified);
        assert_eq!(cert.witnesses.len(), 64);
        assert!(cert.min_margin >= 1e-6);
        assert!(cert.reverify().unwrap().verified);
    }

    #[test]
    fn corrupted_generator_is_caught() {
        let a = odd_polygon_arrangement(4, 1.0).unwrap();
        let target = 0x0a5;
        let cert = verify_shattering(
            &a,
            |l| {
                let l = if l.bits() == target { l.with_flipped(3) } else { l };
                odd_polygon_shatter(&a, l)
            },
            1e-6,
        )
        .unwrap();
        assert!(!cert.verified);
        assert_eq!(cert.first_failure.as_ref().unwrap().labeling, target);
        let r = cert.reverify().unwrap();
        assert!(!r.verified);
        assert_eq!(r.first_failure.unwrap().labeling, target);
    }

    #[test]
    fn missing_witness_fails_reverification() {
        let a = takacs_arrangement(2, 1.0).unwrap();
        let mut cert = verify_shattering(&a, |l| takacs_shatter(&a, l), 1e-6).unwrap();
        cert.witnesses.remove(&17);
        let r = cert.reverify().unwrap();
        assert!(!r.verified);
        assert_eq!(r.first_failure.unwrap().labeling, 17);
    }

    #[test]
    fn raised_mu_fails() {
        let a = takacs_arrangement(2, 1.0).unwrap();
        let cert = verify_shattering(&a, |l| takacs_shatter(&a, l), 1e-6).unwrap();
        assert!(!cert.reverify_at(cert.min_margin * 1.5).unwrap().verified);
    }

    #[test]
    fn too_many_points_rejected() {
        let a = Arrangement {
            kind: crate::constructions::ArrangementKind::Random,
            radius: 1.0,
            points: vec![crate::geometry::Point::xy(0.0, 0.0); 30],
        };
        assert!(verify_shattering(&a, |_| unreachable!(), 1e-6).is_err());
    }
}
