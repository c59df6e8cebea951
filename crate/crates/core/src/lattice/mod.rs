//! Index sets, finitely supported sequences, weights and exponent triples.

mod sum;
mod weight;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use sum::{compensated_sum, CompensatedSum, PrefixSums};
pub use weight::{weight_eval, weight_sum, FarField, PowerSums, TabulatedWeight, WeightSpec};

/// A closed integer interval `[lo, hi]` with `lo <= hi`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "(i64, i64)", into = "(i64, i64)")]
pub struct IntegerInterval {
    lo: i64,
    hi: i64,
}

impl TryFrom<(i64, i64)> for IntegerInterval {
    type Error = Error;
    fn try_from((lo, hi): (i64, i64)) -> Result<Self> {
        Self::new(lo, hi)
    }
}

impl From<IntegerInterval> for (i64, i64) {
    fn from(j: IntegerInterval) -> Self {
        (j.lo, j.hi)
    }
}

impl IntegerInterval {
    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::Interval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    /// Number of lattice points.
    pub fn len(&self) -> u64 {
        (self.hi - self.lo) as u64 + 1
    }

    /// Always false; present for clippy's `len_without_is_empty`.
    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, k: i64) -> bool {
        self.lo <= k && k <= self.hi
    }

    pub fn contains_interval(&self, other: &IntegerInterval) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    /// Smallest interval containing both.
    pub fn hull(&self, other: &IntegerInterval) -> IntegerInterval {
        Self {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }

    /// Hull with a single point.
    pub fn hull_point(&self, k: i64) -> IntegerInterval {
        Self {
            lo: self.lo.min(k),
            hi: self.hi.max(k),
        }
    }

    pub fn intersect(&self, other: &IntegerInterval) -> Option<IntegerInterval> {
        let lo = self.lo.max(other.lo);
        let hi = self.hi.min(other.hi);
        (lo <= hi).then_some(Self { lo, hi })
    }

    /// Distance from `k` to the interval (0 inside).
    pub fn distance(&self, k: i64) -> u64 {
        if k < self.lo {
            (self.lo - k) as u64
        } else if k > self.hi {
            (k - self.hi) as u64
        } else {
            0
        }
    }

    /// Grow by `by` points on each side.
    pub fn expand(&self, by: u64) -> IntegerInterval {
        Self {
            lo: self.lo - by as i64,
            hi: self.hi + by as i64,
        }
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }
}

/// The symmetric interval `S_{m,N} = {k : |k - m| <= N}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SymmetricInterval {
    pub center: i64,
    pub radius: u64,
}

impl SymmetricInterval {
    pub fn new(center: i64, radius: u64) -> Self {
        Self { center, radius }
    }

    /// `2N + 1`.
    pub fn cardinality(&self) -> u64 {
        2 * self.radius + 1
    }

    pub fn contains(&self, k: i64) -> bool {
        k.abs_diff(self.center) <= self.radius
    }

    pub fn to_interval(&self) -> IntegerInterval {
        IntegerInterval {
            lo: self.center - self.radius as i64,
            hi: self.center + self.radius as i64,
        }
    }

    pub fn lo(&self) -> i64 {
        self.center - self.radius as i64
    }

    pub fn hi(&self) -> i64 {
        self.center + self.radius as i64
    }

    /// `λS_{m,N} = S_{m,λN}`.
    pub fn dilate(&self, lambda: u64) -> Result<SymmetricInterval> {
        dilate(*self, lambda)
    }
}

/// Integer dilation about the center; `lambda` must be at least 1.
pub fn dilate(s: SymmetricInterval, lambda: u64) -> Result<SymmetricInterval> {
    if lambda < 1 {
        return Err(Error::Parameter {
            name: "lambda",
            value: lambda as f64,
            range: "integers >= 1",
        });
    }
    let radius = s.radius.checked_mul(lambda).ok_or(Error::Parameter {
        name: "lambda",
        value: lambda as f64,
        range: "dilations representable in u64",
    })?;
    Ok(SymmetricInterval::new(s.center, radius))
}

/// Read access to a contiguous block of samples indexed from `first()`.
pub trait Samples {
    fn first(&self) -> i64;
    fn samples(&self) -> &[f64];

    fn at(&self, k: i64) -> f64 {
        let j = k - self.first();
        if j < 0 {
            return 0.0;
        }
        self.samples().get(j as usize).copied().unwrap_or(0.0)
    }

    fn indexed(&self) -> Box<dyn Iterator<Item = (i64, f64)> + '_> {
        let first = self.first();
        Box::new(
            self.samples()
                .iter()
                .enumerate()
                .map(move |(j, &v)| (first + j as i64, v)),
        )
    }
}

/// A sequence on ℤ that vanishes outside a stored block of finite values.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawSequence", into = "RawSequence")]
pub struct FiniteSequence {
    offset: i64,
    values: Vec<f64>,
}

#[derive(Serialize, Deserialize)]
struct RawSequence {
    offset: i64,
    values: Vec<f64>,
}

impl TryFrom<RawSequence> for FiniteSequence {
    type Error = Error;
    fn try_from(r: RawSequence) -> Result<Self> {
        FiniteSequence::new(r.offset, r.values)
    }
}

impl From<FiniteSequence> for RawSequence {
    fn from(x: FiniteSequence) -> Self {
        RawSequence {
            offset: x.offset,
            values: x.values,
        }
    }
}

impl FiniteSequence {
    /// `values[j]` is `x(offset + j)`. Every value must be finite.
    pub fn new(offset: i64, values: Vec<f64>) -> Result<Self> {
        if let Some(j) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::Sequence(format!(
                "non-finite value {} at index {}",
                values[j],
                offset + j as i64
            )));
        }
        if values.len() > 1 && offset.checked_add(values.len() as i64 - 1).is_none() {
            return Err(Error::Sequence("stored block overflows i64".into()));
        }
        Ok(Self { offset, values })
    }

    pub fn zero() -> Self {
        Self {
            offset: 0,
            values: Vec::new(),
        }
    }

    /// `δ_k`.
    pub fn delta(k: i64) -> Self {
        Self {
            offset: k,
            values: vec![1.0],
        }
    }

    /// Indicator of `[lo, hi]`.
    pub fn indicator(j: IntegerInterval) -> Self {
        Self {
            offset: j.lo,
            values: vec![1.0; j.len() as usize],
        }
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn get(&self, k: i64) -> f64 {
        self.at(k)
    }

    /// The stored block, if non-empty.
    pub fn stored(&self) -> Option<IntegerInterval> {
        (!self.values.is_empty()).then(|| IntegerInterval {
            lo: self.offset,
            hi: self.offset + self.values.len() as i64 - 1,
        })
    }

    /// Smallest interval containing every nonzero entry.
    pub fn support_hull(&self) -> Option<IntegerInterval> {
        let first = self.values.iter().position(|&v| v != 0.0)?;
        let last = self.values.iter().rposition(|&v| v != 0.0)?;
        Some(IntegerInterval {
            lo: self.offset + first as i64,
            hi: self.offset + last as i64,
        })
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(|&v| v == 0.0)
    }

    /// Nonzero entries `(k, x(k))` in increasing `k`.
    pub fn nonzero(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        let offset = self.offset;
        self.values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(move |(j, &v)| (offset + j as i64, v))
    }

    /// Same sequence with the stored block shrunk to the support hull.
    pub fn trimmed(&self) -> Self {
        match self.support_hull() {
            None => Self::zero(),
            Some(h) => {
                let a = (h.lo - self.offset) as usize;
                let b = (h.hi - self.offset) as usize;
                Self {
                    offset: h.lo,
                    values: self.values[a..=b].to_vec(),
                }
            }
        }
    }

    pub fn abs(&self) -> Self {
        Self {
            offset: self.offset,
            values: self.values.iter().map(|v| v.abs()).collect(),
        }
    }

    pub fn scale(&self, c: f64) -> Result<Self> {
        Self::new(self.offset, self.values.iter().map(|v| v * c).collect())
    }

    /// `y(k) = x(k - s)`.
    pub fn shift(&self, s: i64) -> Result<Self> {
        let offset = self
            .offset
            .checked_add(s)
            .ok_or_else(|| Error::Sequence("shift overflows i64".into()))?;
        Self::new(offset, self.values.clone())
    }

    /// `y(k) = x(-k)`.
    pub fn reflect(&self) -> Self {
        match self.stored() {
            None => Self::zero(),
            Some(j) => Self {
                offset: -j.hi,
                values: self.values.iter().rev().copied().collect(),
            },
        }
    }

    /// `a·self + b·other`.
    pub fn combine(&self, a: f64, other: &FiniteSequence, b: f64) -> Result<Self> {
        let hull = match (self.stored(), other.stored()) {
            (None, None) => return Ok(Self::zero()),
            (Some(j), None) | (None, Some(j)) => j,
            (Some(j), Some(k)) => j.hull(&k),
        };
        let values = hull
            .iter()
            .map(|k| a * self.get(k) + b * other.get(k))
            .collect();
        Self::new(hull.lo, values)
    }

    /// Compensated `Σ|x(k)|`.
    pub fn l1_norm(&self) -> f64 {
        compensated_sum(self.values.iter().map(|v| v.abs()))
    }

    /// Largest `|x(k)|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().fold(0.0, |m, v| m.max(v.abs()))
    }

    /// Samples of `x` on `window`, zero outside the stored block.
    pub fn on_window(&self, window: IntegerInterval) -> Profile {
        Profile::new(window, window.iter().map(|k| self.get(k)).collect())
            .expect("window length matches")
    }
}

impl Samples for FiniteSequence {
    fn first(&self) -> i64 {
        self.offset
    }
    fn samples(&self) -> &[f64] {
        &self.values
    }
}

/// Values of a function on a window together with a bound on `|y|`
/// everywhere outside it.
///
/// `outside_bound` is `0` when the function is known to vanish off the
/// window and `+∞` when nothing is known.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Profile {
    window: IntegerInterval,
    values: Vec<f64>,
    outside_bound: f64,
}

impl Profile {
    /// A profile that vanishes outside `window`.
    pub fn new(window: IntegerInterval, values: Vec<f64>) -> Result<Self> {
        if values.len() as u64 != window.len() {
            return Err(Error::Window {
                lo: window.lo,
                hi: window.hi,
                reason: format!("{} values for {} points", values.len(), window.len()),
            });
        }
        Ok(Self {
            window,
            values,
            outside_bound: 0.0,
        })
    }

    pub fn with_outside_bound(mut self, bound: f64) -> Self {
        self.outside_bound = bound;
        self
    }

    pub fn window(&self) -> IntegerInterval {
        self.window
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn outside_bound(&self) -> f64 {
        self.outside_bound
    }

    /// Value at `k`, or `None` off the window.
    pub fn get(&self, k: i64) -> Option<f64> {
        self.window
            .contains(k)
            .then(|| self.values[(k - self.window.lo) as usize])
    }

    /// Largest `|y(k)|` over `ℤ \ keep` that this profile can certify.
    pub fn bound_outside(&self, keep: &IntegerInterval) -> f64 {
        let inner = self
            .window
            .iter()
            .zip(&self.values)
            .filter(|(k, _)| !keep.contains(*k))
            .fold(0.0f64, |m, (_, v)| m.max(v.abs()));
        inner.max(self.outside_bound)
    }

    pub fn iter(&self) -> impl Iterator<Item = (i64, f64)> + '_ {
        self.window.iter().zip(self.values.iter().copied())
    }
}

impl Samples for Profile {
    fn first(&self) -> i64 {
        self.window.lo
    }
    fn samples(&self) -> &[f64] {
        &self.values
    }
}

/// A Lebesgue exponent in `[1, ∞]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Exponent {
    Finite(f64),
    Infinite,
}

impl Exponent {
    pub fn finite(p: f64) -> Result<Self> {
        if p.is_finite() && p >= 1.0 {
            Ok(Exponent::Finite(p))
        } else if p == f64::INFINITY {
            Ok(Exponent::Infinite)
        } else {
            Err(Error::Parameter {
                name: "p",
                value: p,
                range: "[1, ∞]",
            })
        }
    }

    /// Hölder conjugate, with `1' = ∞` and `∞' = 1`.
    pub fn conjugate(self) -> Exponent {
        match self {
            Exponent::Infinite => Exponent::Finite(1.0),
            Exponent::Finite(1.0) => Exponent::Infinite,
            Exponent::Finite(p) => Exponent::Finite(p / (p - 1.0)),
        }
    }

    /// `1/p`, zero at infinity.
    pub fn reciprocal(self) -> f64 {
        match self {
            Exponent::Infinite => 0.0,
            Exponent::Finite(p) => 1.0 / p,
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Exponent::Infinite => f64::INFINITY,
            Exponent::Finite(p) => p,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, Exponent::Infinite)
    }
}

/// An `(α, p, q)` triple with `p'` cached.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub alpha: f64,
    pub p: Exponent,
    pub q: Exponent,
    pub p_prime: Exponent,
}

impl Exponents {
    /// Requires `0 < α < 1`, `1 <= p`, `1 < q`.
    pub fn new(alpha: f64, p: Exponent, q: Exponent) -> Result<Self> {
        crate::error::check_open_unit("alpha", alpha)?;
        if let Exponent::Finite(pv) = p {
            if !(pv >= 1.0) {
                return Err(Error::Parameter {
                    name: "p",
                    value: pv,
                    range: "[1, ∞]",
                });
            }
        }
        if let Exponent::Finite(qv) = q {
            if !(qv > 1.0) {
                return Err(Error::Parameter {
                    name: "q",
                    value: qv,
                    range: "(1, ∞]",
                });
            }
        }
        Ok(Self {
            alpha,
            p,
            q,
            p_prime: p.conjugate(),
        })
    }

    /// The pair tied by `1/q = 1/p - α`, for `1 <= p < 1/α`.
    pub fn sobolev(alpha: f64, p: f64) -> Result<Self> {
        crate::error::check_open_unit("alpha", alpha)?;
        if !(p >= 1.0 && p * alpha < 1.0) {
            return Err(Error::Parameter {
                name: "p",
                value: p,
                range: "[1, 1/alpha)",
            });
        }
        let q = 1.0 / (1.0 / p - alpha);
        Self::new(alpha, Exponent::Finite(p), Exponent::Finite(q))
    }

    /// Whether `1/q = 1/p - α` holds to `tol`.
    pub fn is_sobolev(&self, tol: f64) -> bool {
        (self.q.reciprocal() - (self.p.reciprocal() - self.alpha)).abs() <= tol
    }

    /// Finite `p` or an error naming the exponent.
    pub fn p_finite(&self) -> Result<f64> {
        match self.p {
            Exponent::Finite(p) => Ok(p),
            Exponent::Infinite => Err(Error::Parameter {
                name: "p",
                value: f64::INFINITY,
                range: "finite exponents",
            }),
        }
    }

    pub fn q_finite(&self) -> Result<f64> {
        match self.q {
            Exponent::Finite(q) => Ok(q),
            Exponent::Infinite => Err(Error::Parameter {
                name: "q",
                value: f64::INFINITY,
                range: "finite exponents",
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn interval_basics() {
        assert!(IntegerInterval::new(3, 2).is_err());
        let j = IntegerInterval::new(-2, 4).unwrap();
        assert_eq!(j.len(), 7);
        assert_eq!(j.distance(-5), 3);
        assert_eq!(j.distance(0), 0);
        assert_eq!(j.distance(9), 5);
        assert_eq!(j.intersect(&IntegerInterval::new(5, 9).unwrap()), None);
    }

    #[test]
    fn symmetric_interval_and_dilation() {
        let s = SymmetricInterval::new(3, 2);
        assert_eq!(s.cardinality(), 5);
        assert!(s.contains(1) && s.contains(5) && !s.contains(6));
        assert_eq!(dilate(s, 3).unwrap(), SymmetricInterval::new(3, 6));
        assert!(dilate(s, 0).is_err());
    }

    #[test]
    fn sequence_rejects_non_finite() {
        assert!(FiniteSequence::new(0, vec![1.0, f64::NAN]).is_err());
        assert!(FiniteSequence::new(0, vec![f64::INFINITY]).is_err());
        assert!(FiniteSequence::new(2, vec![0.0, 0.0]).unwrap().is_zero());
    }

    #[test]
    fn support_hull_ignores_stored_zeros() {
        let x = FiniteSequence::new(-3, vec![0.0, 2.0, 0.0, -1.0, 0.0]).unwrap();
        assert_eq!(x.support_hull(), IntegerInterval::new(-2, 0).ok());
        assert_eq!(x.trimmed().values(), &[2.0, 0.0, -1.0]);
        assert_eq!(x.get(-2), 2.0);
        assert_eq!(x.get(100), 0.0);
    }

    #[test]
    fn reflect_and_shift() {
        let x = FiniteSequence::new(2, vec![1.0, 2.0, 3.0]).unwrap();
        let r = x.reflect();
        for k in -6..6 {
            assert_eq!(r.get(k), x.get(-k));
        }
        let s = x.shift(-5).unwrap();
        assert_eq!(s.get(-3), 1.0);
    }

    #[test]
    fn serde_validates() {
        let bad = r#"{"offset":0,"values":[]} "#;
        assert!(serde_json::from_str::<FiniteSequence>(bad).is_ok());
        assert!(serde_json::from_str::<IntegerInterval>("[3,1]").is_err());
    }

    #[test]
    fn conjugates() {
        assert_eq!(Exponent::Finite(1.0).conjugate(), Exponent::Infinite);
        assert_eq!(Exponent::Infinite.conjugate(), Exponent::Finite(1.0));
        assert_eq!(Exponent::Finite(2.0).conjugate(), Exponent::Finite(2.0));
        let e = Exponents::sobolev(0.5, 1.0).unwrap();
        assert_eq!(e.q, Exponent::Finite(2.0));
        assert!(e.is_sobolev(1e-15));
        assert!(Exponents::sobolev(0.5, 2.0).is_err());
        assert!(Exponents::new(1.0, Exponent::Finite(1.0), Exponent::Finite(2.0)).is_err());
    }

    #[test]
    fn profile_outside_bounds() {
        let w = IntegerInterval::new(0, 4).unwrap();
        let p = Profile::new(w, vec![1.0, 5.0, 2.0, 0.5, 3.0])
            .unwrap()
            .with_outside_bound(0.25);
        let keep = IntegerInterval::new(0, 2).unwrap();
        assert_eq!(p.bound_outside(&keep), 3.0);
        assert_eq!(p.bound_outside(&w), 0.25);
        assert!(Profile::new(w, vec![1.0]).is_err());
    }
}
