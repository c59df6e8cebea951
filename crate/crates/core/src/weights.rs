//! Muckenhoupt, off-diagonal Muckenhoupt and reverse-Hölder constants.
//!
//! Each bracket is a supremum over symmetric intervals. Single-interval
//! evaluations are exact; constants are estimated by scanning every interval
//! `S_{m,N}` with `m` in a center range and `N <= N_max`, and reporting the
//! running maximum at `N_max, N_max/2, N_max/4, …` so that saturation can be
//! judged.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_open_unit, Error, Result};
use crate::lattice::{
    weight_sum, CompensatedSum, Exponent, IntegerInterval, SymmetricInterval, WeightSpec,
};

/// Relative growth between the last two trend entries below which an
/// estimate counts as saturated.
pub const SATURATION_TOLERANCE: f64 = 0.01;

/// The family of intervals visited by a scan.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRange {
    pub centers: IntegerInterval,
    pub n_max: u64,
}

impl ScanRange {
    pub fn new(center_lo: i64, center_hi: i64, n_max: u64) -> Result<Self> {
        Ok(Self {
            centers: IntegerInterval::new(center_lo, center_hi)?,
            n_max,
        })
    }

    /// Centers `[-64, 64]`, radii up to `2^16`: the class-membership screen.
    pub fn screen() -> Self {
        Self::new(-64, 64, 1 << 16).unwrap()
    }

    /// Every index touched by the scan.
    pub fn reach(&self) -> IntegerInterval {
        self.centers.expand(self.n_max)
    }

    /// `…, N_max/4, N_max/2, N_max`, ascending and without duplicates.
    pub fn checkpoints(&self) -> Vec<u64> {
        let mut c = vec![self.n_max];
        let mut n = self.n_max;
        while n > 1 {
            n /= 2;
            c.push(n);
        }
        c.reverse();
        c.dedup();
        c
    }

    pub fn intervals(&self) -> u64 {
        self.centers.len() * (self.n_max + 1)
    }
}

/// One entry of a trend: the running maximum over radii `<= extent`
/// (or over the first `extent` cases).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrendPoint {
    pub extent: u64,
    pub value: f64,
}

/// Where a scanned maximum was attained.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EstimateWitness {
    Interval { center: i64, radius: u64 },
    Case { index: u64 },
    None,
}

/// Scanned lower estimate of a supremum.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantEstimate {
    pub value: f64,
    pub witness: EstimateWitness,
    pub extent: u64,
    pub trend: Vec<TrendPoint>,
}

impl ConstantEstimate {
    /// Relative increase of the last trend entry over the previous one.
    pub fn growth(&self) -> f64 {
        match self.trend.as_slice() {
            [.., a, b] if a.value > 0.0 => (b.value - a.value) / a.value,
            [.., a, b] if a.value == b.value => 0.0,
            _ => f64::INFINITY,
        }
    }

    pub fn saturated(&self, tol: f64) -> bool {
        self.value.is_finite() && self.growth() <= tol
    }

    /// Build from per-extent running maxima.
    pub fn from_trend(trend: Vec<TrendPoint>, witness: EstimateWitness) -> Self {
        let last = trend.last().copied().unwrap_or(TrendPoint {
            extent: 0,
            value: 0.0,
        });
        Self {
            value: last.value,
            witness,
            extent: last.extent,
            trend,
        }
    }
}

/// A weight characteristic evaluated on one interval.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "bracket", rename_all = "snake_case")]
pub enum Bracket {
    /// `A_p`, `p >= 1`.
    Ap { p: f64 },
    /// `A(p, q)`, `p >= 1`, `q > 1`, not both endpoints.
    Apq { p: f64, q: Exponent },
    /// `RH_r`, `r >= 1`.
    ReverseHolder { r: f64 },
}

/// The sums and extrema a bracket is built from.
#[derive(Clone, Copy, Debug)]
struct Plan {
    e1: Option<f64>,
    e2: Option<f64>,
    min: bool,
    max: bool,
}

#[derive(Clone, Copy, Debug, Default)]
struct Parts {
    s1: f64,
    s2: f64,
    min: f64,
    max: f64,
    n: f64,
}

impl Bracket {
    pub fn validate(&self) -> Result<()> {
        let bad = |name, value, range| Err(Error::Parameter { name, value, range });
        match *self {
            Bracket::Ap { p } if !(p >= 1.0 && p.is_finite()) => bad("p", p, "[1, ∞)"),
            Bracket::Apq { p, .. } if !(p >= 1.0 && p.is_finite()) => bad("p", p, "[1, ∞)"),
            Bracket::Apq {
                q: Exponent::Finite(q),
                ..
            } if !(q > 1.0) => bad("q", q, "(1, ∞]"),
            Bracket::Apq {
                p,
                q: Exponent::Infinite,
            } if p == 1.0 => bad("p", p, "(1, ∞) when q = ∞"),
            Bracket::ReverseHolder { r } if !(r >= 1.0 && r.is_finite()) => bad("r", r, "[1, ∞)"),
            _ => Ok(()),
        }
    }

    fn plan(&self) -> Plan {
        let none = Plan {
            e1: None,
            e2: None,
            min: false,
            max: false,
        };
        match *self {
            Bracket::Ap { p: 1.0 } => Plan {
                e1: Some(1.0),
                min: true,
                ..none
            },
            Bracket::Ap { p } => Plan {
                e1: Some(1.0),
                e2: Some(-1.0 / (p - 1.0)),
                ..none
            },
            Bracket::Apq {
                p: 1.0,
                q: Exponent::Finite(q),
            } => Plan {
                e1: Some(q),
                min: true,
                ..none
            },
            Bracket::Apq {
                p,
                q: Exponent::Finite(q),
            } => Plan {
                e1: Some(q),
                e2: Some(-p / (p - 1.0)),
                ..none
            },
            Bracket::Apq {
                p,
                q: Exponent::Infinite,
            } => Plan {
                e2: Some(-p / (p - 1.0)),
                max: true,
                ..none
            },
            Bracket::ReverseHolder { r } => Plan {
                e1: Some(r),
                e2: Some(1.0),
                ..none
            },
        }
    }

    fn combine(&self, t: &Parts) -> f64 {
        let a1 = t.s1 / t.n;
        let a2 = t.s2 / t.n;
        match *self {
            Bracket::Ap { p: 1.0 } => a1 / t.min,
            Bracket::Ap { p } => a1 * a2.powf(p - 1.0),
            Bracket::Apq {
                p: 1.0,
                q: Exponent::Finite(q),
            } => a1.powf(1.0 / q) / t.min,
            Bracket::Apq {
                p,
                q: Exponent::Finite(q),
            } => a1.powf(1.0 / q) * a2.powf((p - 1.0) / p),
            Bracket::Apq {
                p,
                q: Exponent::Infinite,
            } => t.max * a2.powf((p - 1.0) / p),
            Bracket::ReverseHolder { r } => a1.powf(1.0 / r) / a2,
        }
    }

    /// Exact value on one interval.
    pub fn eval(&self, w: &WeightSpec, s: SymmetricInterval) -> Result<f64> {
        self.validate()?;
        let plan = self.plan();
        let j = s.to_interval();
        let (min, max) = if plan.min || plan.max {
            w.extremes(j)
        } else {
            (0.0, 0.0)
        };
        let parts = Parts {
            s1: plan
                .e1
                .map(|e| weight_sum(w, j, e))
                .transpose()?
                .unwrap_or(0.0),
            s2: plan
                .e2
                .map(|e| weight_sum(w, j, e))
                .transpose()?
                .unwrap_or(0.0),
            min,
            max,
            n: s.cardinality() as f64,
        };
        finite(self.combine(&parts), j)
    }
}

fn finite(v: f64, j: IntegerInterval) -> Result<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range {
            lo: j.lo(),
            hi: j.hi(),
        })
    }
}

/// `A_p` bracket on `S`: `avg ω / min ω` for `p = 1`,
/// `avg ω · (avg ω^{-1/(p-1)})^{p-1}` for `p > 1`.
pub fn ap_bracket(w: &WeightSpec, p: f64, s: SymmetricInterval) -> Result<f64> {
    Bracket::Ap { p }.eval(w, s)
}

/// `A(p,q)` bracket on `S`: `(avg ω^q)^{1/q} (avg ω^{-p'})^{1/p'}` with the
/// endpoint forms `(avg ω^q)^{1/q} · sup 1/ω` at `p = 1` and
/// `sup ω · (avg ω^{-p'})^{1/p'}` at `q = ∞`.
pub fn apq_bracket(w: &WeightSpec, p: f64, q: Exponent, s: SymmetricInterval) -> Result<f64> {
    Bracket::Apq { p, q }.eval(w, s)
}

/// `RH_r` bracket on `S`: `(avg ω^r)^{1/r} / avg ω`.
pub fn rh_bracket(w: &WeightSpec, r: f64, s: SymmetricInterval) -> Result<f64> {
    Bracket::ReverseHolder { r }.eval(w, s)
}

struct Tables {
    start: i64,
    t1: Vec<f64>,
    t2: Vec<f64>,
    w: Vec<f64>,
}

impl Tables {
    fn new(w: &WeightSpec, plan: &Plan, reach: IntegerInterval) -> Result<Self> {
        let len = usize::try_from(reach.len()).map_err(|_| Error::Window {
            lo: reach.lo(),
            hi: reach.hi(),
            reason: "scan reach too long".into(),
        })?;
        let fill = |e: Option<f64>| -> Vec<f64> {
            match e {
                None => Vec::new(),
                Some(e) => (0..len)
                    .into_par_iter()
                    .map(|j| w.eval_pow(reach.lo() + j as i64, e))
                    .collect(),
            }
        };
        let t = Self {
            start: reach.lo(),
            t1: fill(plan.e1),
            t2: fill(plan.e2),
            w: if plan.min || plan.max {
                fill(Some(1.0))
            } else {
                Vec::new()
            },
        };
        for v in [&t.t1, &t.t2, &t.w] {
            if v.iter().any(|x| !x.is_finite()) {
                return Err(Error::Range {
                    lo: reach.lo(),
                    hi: reach.hi(),
                });
            }
        }
        Ok(t)
    }
}

/// Per-center running maxima at each checkpoint: `(value, radius)`.
fn scan_center(
    b: &Bracket,
    plan: &Plan,
    tab: &Tables,
    m: i64,
    checkpoints: &[u64],
) -> Vec<(f64, u64)> {
    let mut s1 = CompensatedSum::new();
    let mut s2 = CompensatedSum::new();
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    let mut best = (f64::NEG_INFINITY, 0u64);
    let mut out = Vec::with_capacity(checkpoints.len());
    let mut next = 0;
    let c = (m - tab.start) as usize;
    let n_max = *checkpoints.last().unwrap();
    for n in 0..=n_max {
        let idx: &[usize] = if n == 0 {
            &[c]
        } else {
            &[c - n as usize, c + n as usize]
        };
        for &i in idx {
            if plan.e1.is_some() {
                s1.add(tab.t1[i]);
            }
            if plan.e2.is_some() {
                s2.add(tab.t2[i]);
            }
            if plan.min || plan.max {
                lo = lo.min(tab.w[i]);
                hi = hi.max(tab.w[i]);
            }
        }
        let v = b.combine(&Parts {
            s1: s1.value(),
            s2: s2.value(),
            min: lo,
            max: hi,
            n: (2 * n + 1) as f64,
        });
        if v > best.0 || best.0.is_nan() {
            best = (v, n);
        }
        while next < checkpoints.len() && checkpoints[next] == n {
            out.push(best);
            next += 1;
        }
    }
    out
}

/// Scan `bracket` over every `S_{m,N}` in `scan`.
///
/// Ties keep the smallest center, then the smallest radius, so the result
/// does not depend on the number of worker threads.
pub fn scan_constant(b: Bracket, w: &WeightSpec, scan: ScanRange) -> Result<ConstantEstimate> {
    b.validate()?;
    let plan = b.plan();
    let tab = Tables::new(w, &plan, scan.reach())?;
    let checkpoints = scan.checkpoints();
    let centers = scan.centers;
    let per_center: Vec<Vec<(f64, u64)>> = (0..centers.len())
        .into_par_iter()
        .map(|j| scan_center(&b, &plan, &tab, centers.lo() + j as i64, &checkpoints))
        .collect();
    let mut trend = Vec::with_capacity(checkpoints.len());
    let mut witness = EstimateWitness::None;
    for (ci, &extent) in checkpoints.iter().enumerate() {
        let mut best = (f64::NEG_INFINITY, 0i64, 0u64);
        for (j, rows) in per_center.iter().enumerate() {
            let (v, n) = rows[ci];
            if v > best.0 {
                best = (v, centers.lo() + j as i64, n);
            }
        }
        if !best.0.is_finite() {
            return Err(Error::Range {
                lo: scan.reach().lo(),
                hi: scan.reach().hi(),
            });
        }
        trend.push(TrendPoint {
            extent,
            value: best.0,
        });
        witness = EstimateWitness::Interval {
            center: best.1,
            radius: best.2,
        };
    }
    Ok(ConstantEstimate::from_trend(trend, witness))
}

/// Scanned `A_p` constant.
pub fn ap_constant(w: &WeightSpec, p: f64, scan: ScanRange) -> Result<ConstantEstimate> {
    scan_constant(Bracket::Ap { p }, w, scan)
}

/// Scanned `A(p,q)` constant.
pub fn apq_constant(
    w: &WeightSpec,
    p: f64,
    q: Exponent,
    scan: ScanRange,
) -> Result<ConstantEstimate> {
    scan_constant(Bracket::Apq { p, q }, w, scan)
}

/// Scanned `RH_r` constant.
pub fn rh_constant(w: &WeightSpec, r: f64, scan: ScanRange) -> Result<ConstantEstimate> {
    scan_constant(Bracket::ReverseHolder { r }, w, scan)
}

/// Whether a scanned estimate looks bounded.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Screen {
    pub bracket: Bracket,
    pub estimate: ConstantEstimate,
    pub growth: f64,
    pub passed: bool,
}

/// Scan and judge saturation with [`SATURATION_TOLERANCE`].
pub fn screen(b: Bracket, w: &WeightSpec, scan: ScanRange) -> Result<Screen> {
    let estimate = scan_constant(b, w, scan)?;
    Ok(Screen {
        bracket: b,
        growth: estimate.growth(),
        passed: estimate.saturated(SATURATION_TOLERANCE),
        estimate,
    })
}

/// One side of a duality identity.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct IdentityCheck {
    pub lhs: f64,
    pub rhs: f64,
    pub relerr: f64,
}

impl IdentityCheck {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            lhs,
            rhs,
            relerr: (lhs - rhs).abs() / rhs.abs(),
        }
    }
}

/// `[A(p,q)]^q = A_{1+q/p'}(ω^q)` and `[A(p,q)]^{p'} = A_{1+p'/q}(ω^{-p'})`
/// on one interval; at `p = 1` or `q = ∞` only the identity that survives is
/// checked (`1 + q/p'` becomes 1, resp. `1 + p'/q` becomes 1).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DualityReport {
    pub primal: Option<IdentityCheck>,
    pub dual: Option<IdentityCheck>,
    pub relerr: f64,
}

pub fn duality_identity_check(
    w: &WeightSpec,
    p: f64,
    q: Exponent,
    s: SymmetricInterval,
) -> Result<DualityReport> {
    let apq = apq_bracket(w, p, q, s)?;
    let pp = Exponent::Finite(p).conjugate();
    let primal = match (q, pp) {
        (Exponent::Finite(q), Exponent::Infinite) => Some(IdentityCheck::new(
            apq.powf(q),
            ap_bracket(&w.pow(q)?, 1.0, s)?,
        )),
        (Exponent::Finite(q), Exponent::Finite(pp)) => Some(IdentityCheck::new(
            apq.powf(q),
            ap_bracket(&w.pow(q)?, 1.0 + q / pp, s)?,
        )),
        (Exponent::Infinite, _) => None,
    };
    let dual = match (q, pp) {
        (_, Exponent::Infinite) => None,
        (q, Exponent::Finite(pp)) => Some(IdentityCheck::new(
            apq.powf(pp),
            ap_bracket(&w.pow(-pp)?, 1.0 + pp * q.reciprocal(), s)?,
        )),
    };
    let relerr = primal
        .iter()
        .chain(dual.iter())
        .map(|c| c.relerr)
        .fold(0.0, f64::max);
    Ok(DualityReport {
        primal,
        dual,
        relerr,
    })
}

/// Largest `r` in `(1, 4]` for which the scanned `RH_r` constant of `u`
/// saturates, located by bisection.
pub fn reverse_holder_exponent(u: &WeightSpec, scan: ScanRange) -> Result<f64> {
    const R_MAX: f64 = 4.0;
    let sat =
        |r: f64| -> Result<bool> { Ok(rh_constant(u, r, scan)?.saturated(SATURATION_TOLERANCE)) };
    if sat(R_MAX)? {
        return Ok(R_MAX);
    }
    let (mut lo, mut hi) = (1.0f64, R_MAX);
    for _ in 0..24 {
        let mid = 0.5 * (lo + hi);
        if sat(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if lo == 1.0 {
        return Err(Error::Precondition(
            "no reverse-Hölder exponent above 1 saturates".into(),
        ));
    }
    Ok(lo)
}

/// Which of the two interpolation segments of admissible `(1/p, 1/q)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SegmentMode {
    /// From `(1, 1/(1-α))` towards `(p₁, q₁)` obtained from a reverse-Hölder
    /// gain of `ω^{1/(1-α)}`.
    FromWeakEndpoint,
    /// From `(1/α, ∞)` towards `(p₂, q₂)` obtained from a reverse-Hölder gain
    /// of `ω^{-1/(1-α)}`.
    FromBmoEndpoint,
}

/// One interpolated exponent pair and its scanned `A(p,q)` constant.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentPoint {
    pub t: f64,
    pub p: f64,
    pub q: Exponent,
    pub estimate: ConstantEstimate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Segment {
    pub mode: SegmentMode,
    pub alpha: f64,
    /// Reverse-Hölder exponent found by bisection.
    pub r_found: f64,
    /// Exponent actually used after backing off towards 1.
    pub r_used: f64,
    /// The far endpoint `(p₁, q₁)` or `(p₂, q₂)`.
    pub far_p: f64,
    pub far_q: f64,
    pub points: Vec<SegmentPoint>,
}

fn segment_pair(mode: SegmentMode, alpha: f64, r: f64, t: f64) -> (f64, Exponent) {
    match mode {
        SegmentMode::FromWeakEndpoint => {
            let q0 = 1.0 / (1.0 - alpha);
            let q1 = r * q0;
            let p1 = 1.0 / (1.0 / q1 + alpha);
            let ip = t + (1.0 - t) / p1;
            let iq = t / q0 + (1.0 - t) / q1;
            (1.0 / ip, Exponent::Finite(1.0 / iq))
        }
        SegmentMode::FromBmoEndpoint => {
            let p0 = 1.0 / alpha;
            let p0p = 1.0 / (1.0 - alpha);
            let p2p = r * p0p;
            let p2 = p2p / (p2p - 1.0);
            let q2 = 1.0 / (1.0 / p2 - alpha);
            let ip = t / p0 + (1.0 - t) / p2;
            let iq = (1.0 - t) / q2;
            let q = if t == 1.0 {
                Exponent::Infinite
            } else {
                Exponent::Finite(1.0 / iq)
            };
            (1.0 / ip, q)
        }
    }
}

/// Interpolated exponents along a segment with scanned constants.
///
/// The reverse-Hölder exponent `r` is found by bisection over `rh_scan`;
/// candidates `r`, `1 + (r-1)/2`, `1 + (r-1)/4` are then tried in order
/// and the first whose far endpoint passes the `A(p,q)` screen on `scan`
/// is used.
pub fn exponent_segment(
    w: &WeightSpec,
    mode: SegmentMode,
    alpha: f64,
    t_grid: &[f64],
    rh_scan: ScanRange,
    scan: ScanRange,
) -> Result<Segment> {
    check_open_unit("alpha", alpha)?;
    if let Some(&t) = t_grid.iter().find(|t| !(0.0..=1.0).contains(*t)) {
        return Err(Error::Parameter {
            name: "t",
            value: t,
            range: "[0, 1]",
        });
    }
    let e = 1.0 / (1.0 - alpha);
    let u = match mode {
        SegmentMode::FromWeakEndpoint => w.pow(e)?,
        SegmentMode::FromBmoEndpoint => w.pow(-e)?,
    };
    let r_found = reverse_holder_exponent(&u, rh_scan)?;
    let mut r_used = None;
    for r in [
        r_found,
        1.0 + (r_found - 1.0) / 2.0,
        1.0 + (r_found - 1.0) / 4.0,
    ] {
        let (p, q) = segment_pair(mode, alpha, r, 0.0);
        if screen(Bracket::Apq { p, q }, w, scan)?.passed {
            r_used = Some(r);
            break;
        }
    }
    let r_used = r_used.ok_or_else(|| {
        Error::Precondition("no candidate far endpoint passes the A(p,q) screen".into())
    })?;
    let (far_p, far_q) = segment_pair(mode, alpha, r_used, 0.0);
    let points = t_grid
        .iter()
        .map(|&t| {
            let (p, q) = segment_pair(mode, alpha, r_used, t);
            let estimate = apq_constant(w, p, q, scan)?;
            Ok(SegmentPoint { t, p, q, estimate })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(Segment {
        mode,
        alpha,
        r_found,
        r_used,
        far_p,
        far_q: far_q.value(),
        points,
    })
}

/// The `(p, q)` pair at parameter `t` on a segment with exponent `r`.
pub fn segment_exponents(mode: SegmentMode, alpha: f64, r: f64, t: f64) -> (f64, Exponent) {
    segment_pair(mode, alpha, r, t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: i64, b: i64) -> IntegerInterval {
        IntegerInterval::new(a, b).unwrap()
    }

    #[test]
    fn constant_weight_brackets_are_one() {
        let w = WeightSpec::constant(3.7).unwrap();
        let s = SymmetricInterval::new(5, 9);
        for b in [
            Bracket::Ap { p: 1.0 },
            Bracket::Ap { p: 2.5 },
            Bracket::Apq {
                p: 1.0,
                q: Exponent::Finite(2.0),
            },
            Bracket::Apq {
                p: 1.5,
                q: Exponent::Finite(3.0),
            },
            Bracket::Apq {
                p: 1.5,
                q: Exponent::Infinite,
            },
            Bracket::ReverseHolder { r: 2.0 },
        ] {
            assert!((b.eval(&w, s).unwrap() - 1.0).abs() < 1e-14, "{b:?}");
        }
    }

    #[test]
    fn a1_bracket_by_hand() {
        let w = WeightSpec::power(0.5).unwrap();
        let s = SymmetricInterval::new(0, 1);
        let want = (1.0 + 2.0 * 2f64.sqrt()) / 3.0;
        assert!((ap_bracket(&w, 1.0, s).unwrap() - want).abs() < 1e-15);
    }

    #[test]
    fn rejects_both_endpoints() {
        let w = WeightSpec::constant(1.0).unwrap();
        let s = SymmetricInterval::new(0, 1);
        assert!(apq_bracket(&w, 1.0, Exponent::Infinite, s).is_err());
        assert!(ap_bracket(&w, 0.5, s).is_err());
        assert!(rh_bracket(&w, 0.5, s).is_err());
    }

    #[test]
    fn scan_witness_reproduces_value() {
        let w = WeightSpec::power(-0.3).unwrap();
        let scan = ScanRange::new(-5, 5, 200).unwrap();
        let b = Bracket::Apq {
            p: 1.2,
            q: Exponent::Finite(2.0),
        };
        let est = scan_constant(b, &w, scan).unwrap();
        let EstimateWitness::Interval { center, radius } = est.witness else {
            panic!()
        };
        let again = b.eval(&w, SymmetricInterval::new(center, radius)).unwrap();
        assert!((again - est.value).abs() <= 1e-12 * est.value);
        let mut brute = 0.0f64;
        for m in -5..=5 {
            for n in 0..=200 {
                brute = brute.max(b.eval(&w, SymmetricInterval::new(m, n)).unwrap());
            }
        }
        assert!((brute - est.value).abs() <= 1e-12 * brute);
        assert_eq!(est.trend.last().unwrap().extent, 200);
        assert!(est.trend.windows(2).all(|p| p[0].value <= p[1].value));
    }

    #[test]
    fn checkpoints_halve() {
        let s = ScanRange::new(0, 0, 20).unwrap();
        assert_eq!(s.checkpoints(), vec![1, 2, 5, 10, 20]);
        assert_eq!(ScanRange::new(0, 0, 0).unwrap().checkpoints(), vec![0]);
        assert_eq!(s.reach(), iv(-20, 20));
    }

    #[test]
    fn duality_identities_hold() {
        let w = WeightSpec::shifted_power(0.3, 2).unwrap();
        for s in [SymmetricInterval::new(0, 4), SymmetricInterval::new(-7, 30)] {
            for (p, q) in [
                (1.5, Exponent::Finite(4.0)),
                (1.0, Exponent::Finite(2.0)),
                (2.0, Exponent::Infinite),
            ] {
                let r = duality_identity_check(&w, p, q, s).unwrap();
                assert!(r.relerr <= 1e-12, "{p} {q:?} {r:?}");
            }
        }
    }
}
