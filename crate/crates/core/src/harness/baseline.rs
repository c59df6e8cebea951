//! Committed regression values for empirical constants.

use serde::{Deserialize, Serialize};

use super::report::{SweepReport, TheoremId};
use crate::error::{Error, Result};

/// Allowed relative distance from a committed value, in either direction.
pub const BASELINE_TOLERANCE: f64 = 0.05;

pub const BASELINE_SCHEMA: u32 = 1;

const COMMITTED: &str = include_str!("../../baselines/baselines.json");

/// One recorded sweep maximum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineRecord {
    pub theorem: TheoremId,
    pub label: String,
    pub family: String,
    pub seed: u64,
    pub cases: u64,
    pub value: f64,
}

impl BaselineRecord {
    pub fn of(s: &SweepReport) -> Self {
        Self {
            theorem: s.theorem,
            label: s.label.clone(),
            family: s.family.clone(),
            seed: s.seed,
            cases: s.cases,
            value: s.estimate.value,
        }
    }

    fn same_key(&self, o: &BaselineRecord) -> bool {
        self.theorem == o.theorem
            && self.label == o.label
            && self.family == o.family
            && self.seed == o.seed
            && self.cases == o.cases
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaselineFile {
    pub schema: u32,
    pub records: Vec<BaselineRecord>,
}

/// How a sweep compares with its committed value.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum BaselineStatus {
    Match { baseline: f64, relerr: f64 },
    Regression { baseline: f64, relerr: f64 },
    Unbaselined,
}

impl BaselineStatus {
    pub fn is_regression(&self) -> bool {
        matches!(self, BaselineStatus::Regression { .. })
    }
}

impl Default for BaselineFile {
    fn default() -> Self {
        Self {
            schema: BASELINE_SCHEMA,
            records: Vec::new(),
        }
    }
}

impl BaselineFile {
    /// The values shipped with the crate.
    pub fn committed() -> Self {
        Self::parse(COMMITTED).expect("committed baselines parse")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let f: BaselineFile = serde_json::from_str(text)
            .map_err(|e| Error::Precondition(format!("baselines: {e}")))?;
        if f.schema != BASELINE_SCHEMA {
            return Err(Error::Precondition(format!(
                "baselines: schema {} is not {BASELINE_SCHEMA}",
                f.schema
            )));
        }
        Ok(f)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("baselines serialize");
        s.push('\n');
        s
    }

    pub fn lookup(&self, s: &SweepReport) -> Option<f64> {
        let key = BaselineRecord::of(s);
        self.records
            .iter()
            .find(|r| r.same_key(&key))
            .map(|r| r.value)
    }

    pub fn check(&self, s: &SweepReport) -> BaselineStatus {
        let Some(baseline) = self.lookup(s) else {
            return BaselineStatus::Unbaselined;
        };
        let v = s.estimate.value;
        let relerr = if v == baseline {
            0.0
        } else {
            (v - baseline).abs() / baseline.abs()
        };
        if relerr <= BASELINE_TOLERANCE {
            BaselineStatus::Match { baseline, relerr }
        } else {
            BaselineStatus::Regression { baseline, relerr }
        }
    }

    /// Insert or replace the record for `s`.
    pub fn record(&mut self, s: &SweepReport) {
        let rec = BaselineRecord::of(s);
        match self.records.iter_mut().find(|r| r.same_key(&rec)) {
            Some(r) => *r = rec,
            None => self.records.push(rec),
        }
    }
}
