//! On-disk certificate format.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::classifier::LabeledPrototypeSet;
use crate::constructions::Arrangement;
use crate::error::{Error, Result};
use crate::verification::{Claim, Failure, Reverification, ShatterCertificate};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Meta {
    pub tool: String,
    pub created_unix: u64,
}

/// JSON form of a [`ShatterCertificate`]. Witness keys are labeling
/// bitmasks as zero-padded lowercase hex, one digit per four points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateFile {
    pub schema_version: u32,
    pub generator: String,
    pub claim: Claim,
    pub arrangement: Arrangement,
    pub mu: f64,
    /// `None` when no finite margin was recorded.
    pub min_margin: Option<f64>,
    pub verified: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub first_failure: Option<Failure>,
    pub witnesses: BTreeMap<String, LabeledPrototypeSet>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<Meta>,
}

pub fn labeling_key(bits: u64, n: usize) -> String {
    format!("{bits:0width$x}", width = n.div_ceil(4).max(1))
}

impl CertificateFile {
    pub fn from_certificate(cert: &ShatterCertificate, generator: &str, meta: Option<Meta>) -> Self {
        let n = cert.arrangement.len();
        CertificateFile {
            schema_version: SCHEMA_VERSION,
            generator: generator.to_string(),
            claim: cert.claim,
            arrangement: cert.arrangement.clone(),
            mu: cert.mu,
            min_margin: cert.min_margin.is_finite().then_some(cert.min_margin),
            verified: cert.verified,
            first_failure: cert.first_failure.clone(),
            witnesses: cert.witnesses.iter().map(|(&b, s)| (labeling_key(b, n), s.clone())).collect(),
            meta,
        }
    }

    pub fn to_certificate(&self) -> Result<ShatterCertificate> {
        if self.schema_version != SCHEMA_VERSION {
            return Err(Error::Serialization(format!(
                "schema version {} is not supported (expected {SCHEMA_VERSION})",
                self.schema_version
            )));
        }
        let mut witnesses = BTreeMap::new();
        for (key, set) in &self.witnesses {
            let bits = u64::from_str_radix(key, 16)
                .map_err(|_| Error::Serialization(format!("witness key {key:?} is not a hex bitmask")))?;
            if witnesses.insert(bits, set.clone()).is_some() {
                return Err(Error::Serialization(format!("duplicate witness for bitmask {key}")));
            }
        }
        Ok(ShatterCertificate {
            arrangement: self.arrangement.clone(),
            claim: self.claim,
            mu: self.mu,
            witnesses,
            min_margin: self.min_margin.unwrap_or(f64::NEG_INFINITY),
            verified: self.verified,
            first_failure: self.first_failure.clone(),
        })
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self).map_err(|e| Error::Serialization(e.to_string()))?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Serialization(e.to_string()))
    }

    /// Re-checks the witnesses without any generator.
    pub fn reverify(&self, mu: Option<f64>) -> Result<Reverification> {
        let cert = self.to_certificate()?;
        cert.reverify_at(mu.unwrap_or(self.mu))
    }
}
