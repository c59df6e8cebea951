//! Compensated accumulation.

use std::ops::AddAssign;

/// Neumaier's compensated running sum.
///
/// Once the running value leaves the finite range the compensation term is
/// dropped and the (infinite or NaN) raw sum is reported.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if !t.is_finite() {
            self.sum = t;
            return;
        }
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        if self.sum.is_finite() {
            self.sum + self.comp
        } else {
            self.sum
        }
    }
}

impl AddAssign<f64> for CompensatedSum {
    fn add_assign(&mut self, x: f64) {
        self.add(x);
    }
}

impl Extend<f64> for CompensatedSum {
    fn extend<I: IntoIterator<Item = f64>>(&mut self, iter: I) {
        for x in iter {
            self.add(x);
        }
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = Self::new();
        s.extend(iter);
        s
    }
}

/// Compensated sum of an iterator of `f64`.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(iter: I) -> f64 {
    iter.into_iter().collect::<CompensatedSum>().value()
}

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

#[inline]
fn fast_two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    (s, b - (s - a))
}

/// Prefix sums stored as unevaluated double-double pairs, so that the
/// difference of two prefixes keeps full precision even for long windows.
#[derive(Clone, Debug)]
pub struct PrefixSums {
    start: i64,
    hi: Vec<f64>,
    lo: Vec<f64>,
}

impl PrefixSums {
    /// `values[j]` is the term at index `start + j`.
    pub fn new<I: IntoIterator<Item = f64>>(start: i64, values: I) -> Self {
        let iter = values.into_iter();
        let cap = iter.size_hint().0 + 1;
        let mut hi = Vec::with_capacity(cap);
        let mut lo = Vec::with_capacity(cap);
        let (mut h, mut l) = (0.0f64, 0.0f64);
        hi.push(h);
        lo.push(l);
        for x in iter {
            let (s, e) = two_sum(h, x);
            let (s, e) = fast_two_sum(s, l + e);
            h = s;
            l = e;
            hi.push(h);
            lo.push(l);
        }
        Self { start, hi, lo }
    }

    pub fn start(&self) -> i64 {
        self.start
    }

    /// Number of terms covered.
    pub fn len(&self) -> usize {
        self.hi.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Last covered index; `start - 1` when empty.
    pub fn end(&self) -> i64 {
        self.start + self.len() as i64 - 1
    }

    /// Sum of the terms with indices in `[a, b]`, clipped to the covered range.
    pub fn range_sum(&self, a: i64, b: i64) -> f64 {
        let a = a.max(self.start);
        let b = b.min(self.end());
        if a > b {
            return 0.0;
        }
        let i0 = (a - self.start) as usize;
        let i1 = (b - self.start) as usize + 1;
        let (d, e) = two_sum(self.hi[i1], -self.hi[i0]);
        d + (e + (self.lo[i1] - self.lo[i0]))
    }

    /// Total of all covered terms.
    pub fn total(&self) -> f64 {
        self.hi[self.len()] + self.lo[self.len()]
    }
}
