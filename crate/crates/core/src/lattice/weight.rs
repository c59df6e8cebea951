//! Positive weights on ℤ.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::sum::{CompensatedSum, PrefixSums};
use super::IntegerInterval;
use crate::error::{Error, Result};

/// A strictly positive weight `ω : ℤ → (0, ∞)`.
///
/// Build through the checked constructors or `FromStr`/serde, which all
/// validate positivity and finiteness.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Repr", into = "Repr")]
pub enum WeightSpec {
    /// `ω(k) = c`.
    Constant { c: f64 },
    /// `ω(k) = (1 + |k|)^β`.
    Power { beta: f64 },
    /// `ω(k) = (1 + |k - k0|)^β`.
    ShiftedPower { beta: f64, k0: i64 },
    /// Table on a window, extended by the boundary values.
    Tabulated(TabulatedWeight),
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
enum Repr {
    Constant { c: f64 },
    Power { beta: f64 },
    ShiftedPower { beta: f64, k0: i64 },
    Tabulated { offset: i64, values: Vec<f64> },
}

impl TryFrom<Repr> for WeightSpec {
    type Error = Error;
    fn try_from(r: Repr) -> Result<Self> {
        match r {
            Repr::Constant { c } => WeightSpec::constant(c),
            Repr::Power { beta } => WeightSpec::power(beta),
            Repr::ShiftedPower { beta, k0 } => WeightSpec::shifted_power(beta, k0),
            Repr::Tabulated { offset, values } => WeightSpec::tabulated(offset, values),
        }
    }
}

impl From<WeightSpec> for Repr {
    fn from(w: WeightSpec) -> Self {
        match w {
            WeightSpec::Constant { c } => Repr::Constant { c },
            WeightSpec::Power { beta } => Repr::Power { beta },
            WeightSpec::ShiftedPower { beta, k0 } => Repr::ShiftedPower { beta, k0 },
            WeightSpec::Tabulated(t) => Repr::Tabulated {
                offset: t.offset,
                values: t.values,
            },
        }
    }
}

/// Tabulated weight values starting at `offset`.
#[derive(Clone, Debug, PartialEq)]
pub struct TabulatedWeight {
    offset: i64,
    values: Vec<f64>,
}

impl TabulatedWeight {
    pub fn window(&self) -> IntegerInterval {
        IntegerInterval::new(self.offset, self.offset + self.values.len() as i64 - 1)
            .expect("non-empty table")
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    fn get(&self, k: i64) -> f64 {
        let j = (k - self.offset).clamp(0, self.values.len() as i64 - 1);
        self.values[j as usize]
    }
}

/// Closed form `ω(k) = scale · (1 + k - k0)^β` valid for every `k >= from`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FarField {
    pub from: i64,
    pub scale: f64,
    pub beta: f64,
    pub k0: i64,
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::Weight(format!(
            "{name} = {v} must be finite and > 0"
        )))
    }
}

impl WeightSpec {
    pub fn constant(c: f64) -> Result<Self> {
        positive("c", c)?;
        Ok(WeightSpec::Constant { c })
    }

    pub fn power(beta: f64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::Weight(format!("beta = {beta} must be finite")));
        }
        Ok(WeightSpec::Power { beta })
    }

    pub fn shifted_power(beta: f64, k0: i64) -> Result<Self> {
        if !beta.is_finite() {
            return Err(Error::Weight(format!("beta = {beta} must be finite")));
        }
        Ok(WeightSpec::ShiftedPower { beta, k0 })
    }

    pub fn tabulated(offset: i64, values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Weight("empty table".into()));
        }
        for (j, &v) in values.iter().enumerate() {
            positive(&format!("table[{}]", offset + j as i64), v)?;
        }
        if offset.checked_add(values.len() as i64).is_none() {
            return Err(Error::Weight("table window overflows i64".into()));
        }
        Ok(WeightSpec::Tabulated(TabulatedWeight { offset, values }))
    }

    /// `ω(k)`.
    #[inline]
    pub fn eval(&self, k: i64) -> f64 {
        match self {
            WeightSpec::Constant { c } => *c,
            WeightSpec::Power { beta } => (1.0 + k.unsigned_abs() as f64).powf(*beta),
            WeightSpec::ShiftedPower { beta, k0 } => (1.0 + k.abs_diff(*k0) as f64).powf(*beta),
            WeightSpec::Tabulated(t) => t.get(k),
        }
    }

    /// `ω(k)^e`, evaluated with a single rounding for the power families.
    #[inline]
    pub fn eval_pow(&self, k: i64, e: f64) -> f64 {
        match self {
            WeightSpec::Constant { c } => c.powf(e),
            WeightSpec::Power { beta } => (1.0 + k.unsigned_abs() as f64).powf(beta * e),
            WeightSpec::ShiftedPower { beta, k0 } => (1.0 + k.abs_diff(*k0) as f64).powf(beta * e),
            WeightSpec::Tabulated(t) => t.get(k).powf(e),
        }
    }

    /// The weight `ω^e`.
    pub fn pow(&self, e: f64) -> Result<Self> {
        match self {
            WeightSpec::Constant { c } => WeightSpec::constant(c.powf(e)),
            WeightSpec::Power { beta } => WeightSpec::power(beta * e),
            WeightSpec::ShiftedPower { beta, k0 } => WeightSpec::shifted_power(beta * e, *k0),
            WeightSpec::Tabulated(t) => {
                WeightSpec::tabulated(t.offset, t.values.iter().map(|v| v.powf(e)).collect())
            }
        }
    }

    /// `k ↦ ω(-k)`.
    pub fn reflect(&self) -> Self {
        match self {
            WeightSpec::Constant { .. } | WeightSpec::Power { .. } => self.clone(),
            WeightSpec::ShiftedPower { beta, k0 } => WeightSpec::ShiftedPower {
                beta: *beta,
                k0: -k0,
            },
            WeightSpec::Tabulated(t) => WeightSpec::Tabulated(TabulatedWeight {
                offset: -(t.offset + t.values.len() as i64 - 1),
                values: t.values.iter().rev().copied().collect(),
            }),
        }
    }

    /// Exact `(min, max)` of `ω` over `j`.
    pub fn extremes(&self, j: IntegerInterval) -> (f64, f64) {
        let closed = |beta: f64, k0: i64| {
            let near = j.distance(k0);
            let far = j.lo().abs_diff(k0).max(j.hi().abs_diff(k0));
            let a = (1.0 + near as f64).powf(beta);
            let b = (1.0 + far as f64).powf(beta);
            (a.min(b), a.max(b))
        };
        match self {
            WeightSpec::Constant { c } => (*c, *c),
            WeightSpec::Power { beta } => closed(*beta, 0),
            WeightSpec::ShiftedPower { beta, k0 } => closed(*beta, *k0),
            WeightSpec::Tabulated(t) => {
                let win = t.window();
                let a = j.lo().clamp(win.lo(), win.hi());
                let b = j.hi().clamp(win.lo(), win.hi());
                (a..=b).fold((f64::INFINITY, 0.0f64), |(lo, hi), k| {
                    let v = t.get(k);
                    (lo.min(v), hi.max(v))
                })
            }
        }
    }

    /// `sup_k ω(k)` when finite.
    pub fn sup_norm(&self) -> Option<f64> {
        match self {
            WeightSpec::Constant { c } => Some(*c),
            WeightSpec::Power { beta } | WeightSpec::ShiftedPower { beta, .. } => {
                (*beta <= 0.0).then_some(1.0)
            }
            WeightSpec::Tabulated(t) => Some(t.values.iter().fold(0.0, |m, &v| m.max(v))),
        }
    }

    /// Closed form of `ω` on a right half-line.
    pub fn right_far_field(&self) -> FarField {
        match self {
            WeightSpec::Constant { c } => FarField {
                from: i64::MIN,
                scale: *c,
                beta: 0.0,
                k0: 0,
            },
            WeightSpec::Power { beta } => FarField {
                from: 0,
                scale: 1.0,
                beta: *beta,
                k0: 0,
            },
            WeightSpec::ShiftedPower { beta, k0 } => FarField {
                from: *k0,
                scale: 1.0,
                beta: *beta,
                k0: *k0,
            },
            WeightSpec::Tabulated(t) => FarField {
                from: t.window().hi() + 1,
                scale: *t.values.last().expect("non-empty table"),
                beta: 0.0,
                k0: 0,
            },
        }
    }
}

/// `ω(k)`.
pub fn weight_eval(w: &WeightSpec, k: i64) -> f64 {
    w.eval(k)
}

/// Compensated `Σ_{k∈J} ω(k)^e`.
pub fn weight_sum(w: &WeightSpec, j: IntegerInterval, e: f64) -> Result<f64> {
    let v = match w {
        WeightSpec::Constant { c } => c.powf(e) * j.len() as f64,
        _ => j
            .iter()
            .map(|k| w.eval_pow(k, e))
            .collect::<CompensatedSum>()
            .value(),
    };
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range {
            lo: j.lo(),
            hi: j.hi(),
        })
    }
}

/// Prefix-summed `ω^e` for O(1) interval sums.
///
/// The table covers `range` (and the whole window of a tabulated weight);
/// constant and tabulated weights also answer queries beyond it using their
/// boundary values.
#[derive(Clone, Debug)]
pub struct PowerSums {
    weight: WeightSpec,
    exponent: f64,
    prefix: PrefixSums,
    covered: IntegerInterval,
}

impl PowerSums {
    pub fn new(w: &WeightSpec, e: f64, range: IntegerInterval) -> Self {
        let covered = match w {
            WeightSpec::Tabulated(t) => range.hull(&t.window()),
            _ => range,
        };
        let prefix = PrefixSums::new(covered.lo(), covered.iter().map(|k| w.eval_pow(k, e)));
        Self {
            weight: w.clone(),
            exponent: e,
            prefix,
            covered,
        }
    }

    pub fn covered(&self) -> IntegerInterval {
        self.covered
    }

    pub fn sum(&self, j: IntegerInterval) -> Result<f64> {
        let mut total = CompensatedSum::new();
        if j.lo() < self.covered.lo() || j.hi() > self.covered.hi() {
            let (left, right) = match &self.weight {
                WeightSpec::Constant { c } => (*c, *c),
                WeightSpec::Tabulated(t) => (t.values[0], *t.values.last().unwrap()),
                _ => {
                    return Err(Error::Window {
                        lo: self.covered.lo(),
                        hi: self.covered.hi(),
                        reason: format!("power sums queried on [{}, {}]", j.lo(), j.hi()),
                    })
                }
            };
            if j.lo() < self.covered.lo() {
                let n = (j.hi().min(self.covered.lo() - 1) - j.lo() + 1) as f64;
                total.add(n * left.powf(self.exponent));
            }
            if j.hi() > self.covered.hi() {
                let n = (j.hi() - j.lo().max(self.covered.hi() + 1) + 1) as f64;
                total.add(n * right.powf(self.exponent));
            }
        }
        total.add(self.prefix.range_sum(j.lo(), j.hi()));
        let v = total.value();
        if v.is_finite() {
            Ok(v)
        } else {
            Err(Error::Range {
                lo: j.lo(),
                hi: j.hi(),
            })
        }
    }
}

impl fmt::Display for WeightSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightSpec::Constant { c } => write!(f, "constant:{c}"),
            WeightSpec::Power { beta } => write!(f, "power:{beta}"),
            WeightSpec::ShiftedPower { beta, k0 } => write!(f, "shifted:{beta}:{k0}"),
            WeightSpec::Tabulated(t) => {
                write!(f, "table:{}:", t.offset)?;
                for (j, v) in t.values.iter().enumerate() {
                    if j > 0 {
                        f.write_str(",")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

/// Parses `constant:C`, `power:B`, `shifted:B:K0` and `table:OFFSET:v1,v2,...`.
impl FromStr for WeightSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |what: &str| Error::Weight(format!("cannot parse {what} in `{s}`"));
        let num = |t: &str| t.trim().parse::<f64>().map_err(|_| bad("number"));
        let int = |t: &str| t.trim().parse::<i64>().map_err(|_| bad("integer"));
        let mut parts = s.splitn(3, ':');
        match parts.next().map(str::trim) {
            Some("constant") => WeightSpec::constant(num(parts.next().ok_or(bad("c"))?)?),
            Some("power") => WeightSpec::power(num(parts.next().ok_or(bad("beta"))?)?),
            Some("shifted") => {
                let beta = num(parts.next().ok_or(bad("beta"))?)?;
                let k0 = int(parts.next().ok_or(bad("k0"))?)?;
                WeightSpec::shifted_power(beta, k0)
            }
            Some("table") => {
                let offset = int(parts.next().ok_or(bad("offset"))?)?;
                let values = parts
                    .next()
                    .ok_or(bad("values"))?
                    .split(',')
                    .map(num)
                    .collect::<Result<Vec<_>>>()?;
                WeightSpec::tabulated(offset, values)
            }
            _ => Err(bad("weight family")),
        }
    }
}
