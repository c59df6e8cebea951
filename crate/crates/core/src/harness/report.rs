use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{FiniteSequence, IntegerInterval, SymmetricInterval, WeightSpec};
use crate::weights::ConstantEstimate;
use crate::STRICT_SLACK;

/// The inequalities the harness can check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TheoremId {
    /// Weak type `ℓ¹_ω → ℓ^{q,∞}_{ω^q}` of `M_α`, `1/q = 1 - α`.
    T3_2,
    /// Weak type `ℓ¹_ω → ℓ^{q,∞}_{ω^q}` of `I_α`.
    T3_5,
    /// Weighted mean oscillation of `I_α x` at `p = 1/α`.
    T3_7,
    /// `BMO` norm of `I_α x` for bounded weights.
    C3_8,
    /// Strong type `ℓ^p_{ω^p} → ℓ^q_{ω^q}` of `M_α`.
    T1_3,
    /// Strong type of `I_α`, and the extremal-sequence bracket bound.
    T1_4,
    /// Strong type of `M_α` along the interpolation segment from `(1, q₀)`.
    T4_1,
    /// `L log⁺ L` bound for `M_α` and `I_α` on a symmetric interval.
    T4_3,
    /// Exponential integrability of `I_α x` at `p = 1/α`.
    T4_5,
    /// `M_α <= M̄_α <= 2^{1-α} M_α`.
    L3_3,
    /// `M_α <= 2 I_α(|x|)` for monotone supports.
    L3_6,
    /// `|I_α x| <= C_α sqrt(M_{α+ε} x · M_{α-ε} x)` with explicit `C_α`.
    E4_8,
    /// `|I_α x| <~ M_{α1}^{θ1} M_{α2}^{θ2}`.
    R4_4,
}

impl TheoremId {
    pub const ALL: [TheoremId; 13] = [
        TheoremId::T3_2,
        TheoremId::T3_5,
        TheoremId::T3_7,
        TheoremId::C3_8,
        TheoremId::T1_3,
        TheoremId::T1_4,
        TheoremId::T4_1,
        TheoremId::T4_3,
        TheoremId::T4_5,
        TheoremId::L3_3,
        TheoremId::L3_6,
        TheoremId::E4_8,
        TheoremId::R4_4,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            TheoremId::T3_2 => "T3_2",
            TheoremId::T3_5 => "T3_5",
            TheoremId::T3_7 => "T3_7",
            TheoremId::C3_8 => "C3_8",
            TheoremId::T1_3 => "T1_3",
            TheoremId::T1_4 => "T1_4",
            TheoremId::T4_1 => "T4_1",
            TheoremId::T4_3 => "T4_3",
            TheoremId::T4_5 => "T4_5",
            TheoremId::L3_3 => "L3_3",
            TheoremId::L3_6 => "L3_6",
            TheoremId::E4_8 => "E4_8",
            TheoremId::R4_4 => "R4_4",
        }
    }

    /// Whether the check has an explicit constant and a strict verdict.
    pub fn is_strict(self) -> bool {
        matches!(self, TheoremId::L3_3 | TheoremId::L3_6 | TheoremId::E4_8)
    }
}

impl fmt::Display for TheoremId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for TheoremId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        TheoremId::ALL
            .into_iter()
            .find(|t| t.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Precondition(format!("unknown theorem id `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    /// Holds with the explicit constant.
    PassStrict,
    /// Ratio recorded; judged only against a regression baseline.
    BoundedEmpirical,
    /// An explicit-constant check failed.
    Violation,
}

impl Verdict {
    /// Strict verdict for `lhs <= rhs` with the shared relative slack.
    pub fn strict(lhs: f64, rhs: f64) -> Verdict {
        if lhs <= rhs * (1.0 + STRICT_SLACK) {
            Verdict::PassStrict
        } else {
            Verdict::Violation
        }
    }
}

/// Enough of the input to recompute both sides.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sequence: Option<FiniteSequence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub weight: Option<WeightSpec>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub point: Option<i64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub interval: Option<SymmetricInterval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub window: Option<IntegerInterval>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub case: Option<u64>,
}

/// Both sides of one inequality and the verdict.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub theorem: TheoremId,
    pub lhs: f64,
    pub rhs: f64,
    pub ratio: f64,
    pub params: BTreeMap<String, f64>,
    pub witness: Witness,
    pub verdict: Verdict,
}

impl InequalityReport {
    /// `ratio = lhs / rhs`, or 0 when `lhs = 0`.
    pub fn new(theorem: TheoremId, lhs: f64, rhs: f64, witness: Witness, verdict: Verdict) -> Self {
        let ratio = if lhs == 0.0 { 0.0 } else { lhs / rhs };
        Self {
            theorem,
            lhs,
            rhs,
            ratio,
            params: BTreeMap::new(),
            witness,
            verdict,
        }
    }

    pub fn param(mut self, name: &str, value: f64) -> Self {
        self.params.insert(name.to_string(), value);
        self
    }

    pub fn is_violation(&self) -> bool {
        self.verdict == Verdict::Violation
    }
}

/// Outcome of a check over many generated inputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub theorem: TheoremId,
    /// Describes the fixed parameters (weight, exponents, window).
    pub label: String,
    pub family: String,
    pub seed: u64,
    pub cases: u64,
    /// Running maximum of the ratio over the case index.
    pub estimate: ConstantEstimate,
    pub worst: InequalityReport,
    pub violations: u64,
}
