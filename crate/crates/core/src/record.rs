//! Flat result records for JSONL and CSV output.
//!
//! Integers are decimal strings so that consumers without big-integer
//! support never see a truncated value.

use std::fmt::Write as _;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::anomaly::{self, DigitalAnomaly, ParamTriple};
use crate::bounds;
use crate::error::{Error, Result};
use crate::search::{Hit, Status};

pub const CSV_HEADER: &str = "x,y,base,k,t,m,n,gcd_xy,abc_quality,status";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRecord {
    pub x: String,
    pub y: String,
    pub base: String,
    pub k: String,
    pub t: String,
    pub m: String,
    pub n: String,
    pub gcd_xy: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub abc_quality: Option<f64>,
    pub status: Status,
}

impl ResultRecord {
    pub fn new(a: &DigitalAnomaly, p: &ParamTriple, status: Status) -> Result<Self> {
        let quality = bounds::anomaly_abc_score(a)?.quality;
        Ok(Self {
            x: a.x().to_string(),
            y: a.y().to_string(),
            base: a.base().to_string(),
            k: a.k().to_string(),
            t: p.t().to_string(),
            m: p.m().to_string(),
            n: p.n().to_string(),
            gcd_xy: a.gcd_xy().to_string(),
            abc_quality: Some(quality),
            status,
        })
    }

    /// Builds the record of a verified anomaly, recovering its parameters.
    pub fn verified(a: &DigitalAnomaly) -> Result<Self> {
        let p = anomaly::to_params(a)?;
        Self::new(a, &p, Status::Verified)
    }

    pub fn from_hit(hit: &Hit) -> Result<Self> {
        Self::new(&hit.anomaly, &hit.params, hit.status)
    }

    /// Re-parses the quadruple and re-verifies it.
    pub fn to_anomaly(&self) -> Result<DigitalAnomaly> {
        let (x, y, base, k) = self.quadruple()?;
        DigitalAnomaly::new(x, y, base, k)
    }

    /// The raw `(x, y, B, k)` fields, parsed but not verified.
    pub fn quadruple(&self) -> Result<(BigUint, BigUint, BigUint, u32)> {
        let k = self
            .k
            .parse::<u32>()
            .map_err(|e| Error::invalid(format!("bad k {:?}: {e}", self.k)))?;
        Ok((
            parse_int("x", &self.x)?,
            parse_int("y", &self.y)?,
            parse_int("base", &self.base)?,
            k,
        ))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("record serializes")
    }

    pub fn from_json(line: &str) -> Result<Self> {
        serde_json::from_str(line).map_err(|e| Error::invalid(format!("bad record: {e}")))
    }

    /// One CSV row matching [`CSV_HEADER`].
    pub fn to_csv(&self) -> String {
        let mut row = String::new();
        for field in [
            &self.x,
            &self.y,
            &self.base,
            &self.k,
            &self.t,
            &self.m,
            &self.n,
            &self.gcd_xy,
        ] {
            row.push_str(field);
            row.push(',');
        }
        if let Some(q) = self.abc_quality {
            let _ = write!(row, "{q}");
        }
        row.push(',');
        row.push_str(self.status.as_str());
        row
    }
}

/// Parses a non-negative decimal integer.
pub fn parse_int(name: &str, s: &str) -> Result<BigUint> {
    let s = s.trim();
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return Err(Error::invalid(format!(
            "{name} must be a decimal integer, got {s:?}"
        )));
    }
    s.parse::<BigUint>()
        .map_err(|e| Error::invalid(format!("{name}: {e}")))
}
