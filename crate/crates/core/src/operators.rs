//! Fractional maximal operators and the discrete Riesz potential.
//!
//! For finitely supported `x` every operator is a finite computation:
//! the centered supremum stops once the window covers the support, the
//! noncentral supremum only needs intervals whose endpoints lie on support
//! points or on the evaluation point, and the potential is a finite sum.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{check_half_open_unit, check_open_unit, Error, Result};
use crate::lattice::{CompensatedSum, FiniteSequence, IntegerInterval, PrefixSums, Profile};
use crate::STRICT_SLACK;

/// Which operator to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    /// `M_α`, centered symmetric windows.
    Centered,
    /// `M̄_α`, all intervals containing the point.
    Noncentral,
    /// `I_α`.
    Riesz,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Centered => "centered",
            Kind::Noncentral => "noncentral",
            Kind::Riesz => "riesz",
        }
    }

    fn check_alpha(self, alpha: f64) -> Result<()> {
        match self {
            Kind::Riesz => check_open_unit("alpha", alpha),
            _ => check_half_open_unit("alpha", alpha),
        }
    }
}

impl std::str::FromStr for Kind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "centered" | "maximal" => Ok(Kind::Centered),
            "noncentral" => Ok(Kind::Noncentral),
            "riesz" => Ok(Kind::Riesz),
            _ => Err(Error::Precondition(format!("unknown operator `{s}`"))),
        }
    }
}

/// An operator evaluated on a window.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OperatorResult {
    pub profile: Profile,
    pub alpha: f64,
    pub kind: Kind,
}

/// `|x|` restricted to its support hull, with prefix sums.
struct Prepared {
    hull: IntegerInterval,
    prefix: PrefixSums,
    nonzero: Vec<(i64, f64)>,
}

impl Prepared {
    fn new(x: &FiniteSequence) -> Option<Self> {
        let hull = x.support_hull()?;
        let prefix = PrefixSums::new(hull.lo(), hull.iter().map(|k| x.get(k).abs()));
        Some(Self {
            hull,
            prefix,
            nonzero: x.nonzero().collect(),
        })
    }

    fn centered(&self, alpha: f64, m: i64) -> (f64, u64) {
        let d = self.hull.distance(m);
        let cover = m.abs_diff(self.hull.lo()).max(m.abs_diff(self.hull.hi()));
        let e = alpha - 1.0;
        let mut best = (f64::NEG_INFINITY, d);
        for n in d..=cover {
            let s = self.prefix.range_sum(m - n as i64, m + n as i64);
            let v = ((2 * n + 1) as f64).powf(e) * s;
            if v > best.0 {
                best = (v, n);
            }
        }
        best
    }

    fn noncentral(&self, alpha: f64, m: i64) -> (f64, IntegerInterval) {
        let e = alpha - 1.0;
        let left: Vec<i64> = std::iter::once(m)
            .chain(self.nonzero.iter().map(|p| p.0).filter(|&k| k < m))
            .collect();
        let right: Vec<i64> = std::iter::once(m)
            .chain(self.nonzero.iter().map(|p| p.0).filter(|&k| k > m))
            .collect();
        let mut best = (f64::NEG_INFINITY, IntegerInterval::new(m, m).unwrap());
        for &a in &left {
            for &b in &right {
                let s = self.prefix.range_sum(a, b);
                let v = ((b - a + 1) as f64).powf(e) * s;
                if v > best.0 {
                    best = (v, IntegerInterval::new(a, b).unwrap());
                }
            }
        }
        best
    }

    fn riesz(&self, alpha: f64, k: i64) -> f64 {
        let e = alpha - 1.0;
        self.nonzero
            .iter()
            .filter(|(i, _)| *i != k)
            .map(|&(i, v)| v * (i.abs_diff(k) as f64).powf(e))
            .collect::<CompensatedSum>()
            .value()
    }

    fn l1(&self) -> f64 {
        self.prefix.total()
    }
}

/// `M_α x(m)` and the smallest radius attaining it.
///
/// For the zero sequence the value is 0 with radius 0.
pub fn maximal_centered_witness(x: &FiniteSequence, alpha: f64, m: i64) -> Result<(f64, u64)> {
    check_half_open_unit("alpha", alpha)?;
    Ok(match Prepared::new(x) {
        None => (0.0, 0),
        Some(p) => p.centered(alpha, m),
    })
}

/// `M_α x(m) = sup_N (2N+1)^{α-1} Σ_{|k-m|<=N} |x(k)|`, for `0 <= α < 1`.
pub fn maximal_centered(x: &FiniteSequence, alpha: f64, m: i64) -> Result<f64> {
    maximal_centered_witness(x, alpha, m).map(|(v, _)| v)
}

/// `M̄_α x(m)` and an interval attaining it.
pub fn maximal_noncentral_witness(
    x: &FiniteSequence,
    alpha: f64,
    m: i64,
) -> Result<(f64, IntegerInterval)> {
    check_half_open_unit("alpha", alpha)?;
    Ok(match Prepared::new(x) {
        None => (0.0, IntegerInterval::new(m, m).unwrap()),
        Some(p) => p.noncentral(alpha, m),
    })
}

/// `M̄_α x(m) = sup_{J∋m} |J|^{α-1} Σ_J |x|` over integer intervals `J`.
pub fn maximal_noncentral(x: &FiniteSequence, alpha: f64, m: i64) -> Result<f64> {
    maximal_noncentral_witness(x, alpha, m).map(|(v, _)| v)
}

/// `I_α x(k) = Σ_{i≠k} x(i) |k-i|^{α-1}`, for `0 < α < 1`.
pub fn riesz(x: &FiniteSequence, alpha: f64, k: i64) -> Result<f64> {
    check_open_unit("alpha", alpha)?;
    Ok(match Prepared::new(x) {
        None => 0.0,
        Some(p) => p.riesz(alpha, k),
    })
}

/// Evaluate `kind` on every point of `window`.
///
/// The returned profile carries a rigorous bound on `|T x|` outside the
/// window, derived from the distance between the window and the support.
pub fn operator_profile(
    x: &FiniteSequence,
    alpha: f64,
    window: IntegerInterval,
    kind: Kind,
) -> Result<OperatorResult> {
    kind.check_alpha(alpha)?;
    let len = usize::try_from(window.len()).map_err(|_| Error::Window {
        lo: window.lo(),
        hi: window.hi(),
        reason: "window too long to materialise".into(),
    })?;
    let Some(p) = Prepared::new(x) else {
        let profile = Profile::new(window, vec![0.0; len])?;
        return Ok(OperatorResult {
            profile,
            alpha,
            kind,
        });
    };
    let values: Vec<f64> = (0..len)
        .into_par_iter()
        .map(|j| {
            let k = window.lo() + j as i64;
            match kind {
                Kind::Centered => p.centered(alpha, k).0,
                Kind::Noncentral => p.noncentral(alpha, k).0,
                Kind::Riesz => p.riesz(alpha, k),
            }
        })
        .collect();
    let bound = outside_bound(&p, alpha, window, kind);
    Ok(OperatorResult {
        profile: Profile::new(window, values)?.with_outside_bound(bound),
        alpha,
        kind,
    })
}

/// Upper bound for `|T x(k)|` over `k ∉ window`.
fn outside_bound(p: &Prepared, alpha: f64, window: IntegerInterval, kind: Kind) -> f64 {
    let d = window
        .lo()
        .checked_sub(1)
        .map(|k| p.hull.distance(k))
        .unwrap_or(u64::MAX)
        .min(
            window
                .hi()
                .checked_add(1)
                .map(|k| p.hull.distance(k))
                .unwrap_or(u64::MAX),
        );
    let e = alpha - 1.0;
    let factor = match kind {
        Kind::Centered => (2.0 * d as f64 + 1.0).powf(e),
        Kind::Noncentral => (d as f64 + 1.0).powf(e),
        Kind::Riesz => (d.max(1) as f64).powf(e),
    };
    factor * p.l1()
}

/// Naive reference implementations, deliberately free of any shortcut.
pub mod oracle {
    use super::*;

    /// `max_{N<=n_max} (2N+1)^{α-1} Σ_{|k-m|<=N} |x(k)|`, recomputing each
    /// window from scratch. Errors unless `n_max` reaches the covering radius.
    pub fn maximal_oracle(x: &FiniteSequence, alpha: f64, m: i64, n_max: u64) -> Result<f64> {
        check_half_open_unit("alpha", alpha)?;
        let Some(hull) = x.support_hull() else {
            return Ok(0.0);
        };
        let cover = m.abs_diff(hull.lo()).max(m.abs_diff(hull.hi()));
        if n_max < cover {
            return Err(Error::Parameter {
                name: "n_max",
                value: n_max as f64,
                range: "radii covering the support",
            });
        }
        let mut best = 0.0f64;
        for n in 0..=n_max {
            let mut s = 0.0;
            for k in (m - n as i64)..=(m + n as i64) {
                s += x.get(k).abs();
            }
            best = best.max(((2 * n + 1) as f64).powf(alpha - 1.0) * s);
        }
        Ok(best)
    }

    /// Maximum over every interval `J ∋ m` inside the hull of the support and `m`.
    pub fn noncentral_oracle(x: &FiniteSequence, alpha: f64, m: i64) -> Result<f64> {
        check_half_open_unit("alpha", alpha)?;
        let Some(hull) = x.support_hull() else {
            return Ok(0.0);
        };
        let h = hull.hull_point(m);
        let mut best = 0.0f64;
        for a in h.lo()..=m {
            for b in m..=h.hi() {
                let s: f64 = (a..=b).map(|k| x.get(k).abs()).sum();
                best = best.max(((b - a + 1) as f64).powf(alpha - 1.0) * s);
            }
        }
        Ok(best)
    }

    /// Direct sum over the stored block.
    pub fn riesz_oracle(x: &FiniteSequence, alpha: f64, k: i64) -> Result<f64> {
        check_open_unit("alpha", alpha)?;
        let mut s = 0.0;
        for i in x.stored().iter().flat_map(|j| j.iter()) {
            if i != k {
                s += x.get(i) * ((i - k).abs() as f64).powf(alpha - 1.0);
            }
        }
        Ok(s)
    }
}

pub use oracle::maximal_oracle;

/// `max{12^{1-α+ε}/(2^ε-1), 12^{1-α-ε}/(1-2^{-ε})}`, for `0 < ε < min(α, 1-α)`.
pub fn calpha_constant(alpha: f64, eps: f64) -> Result<f64> {
    check_open_unit("alpha", alpha)?;
    if !(eps > 0.0 && eps < alpha.min(1.0 - alpha)) {
        return Err(Error::Parameter {
            name: "eps",
            value: eps,
            range: "(0, min(alpha, 1 - alpha))",
        });
    }
    let a = 12f64.powf(1.0 - alpha + eps) / (2f64.powf(eps) - 1.0);
    let b = 12f64.powf(1.0 - alpha - eps) / (1.0 - 2f64.powf(-eps));
    Ok(a.max(b))
}

/// One evaluation of `|I_α x(k)| <= C_α sqrt(M_{α+ε} x(k) · M_{α-ε} x(k))`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PointwiseBound {
    pub lhs: f64,
    pub rhs: f64,
    pub holds: bool,
}

pub fn pointwise_bound_check(
    x: &FiniteSequence,
    alpha: f64,
    eps: f64,
    k: i64,
) -> Result<PointwiseBound> {
    let c = calpha_constant(alpha, eps)?;
    let lhs = riesz(x, alpha, k)?.abs();
    let hi = maximal_centered(x, alpha + eps, k)?;
    let lo = maximal_centered(x, alpha - eps, k)?;
    let rhs = c * (hi * lo).sqrt();
    Ok(PointwiseBound {
        lhs,
        rhs,
        holds: lhs <= rhs * (1.0 + STRICT_SLACK),
    })
}

/// `|I_α x(k)|` against `M_{α1}^{θ1} M_{α2}^{θ2}` with the interpolation weights
/// `θ1 = (α2-α)/(α2-α1)`, `θ2 = (α-α1)/(α2-α1)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct GeneralBound {
    pub lhs: f64,
    pub bracket: f64,
}

pub fn pointwise_bound_general(
    x: &FiniteSequence,
    alpha: f64,
    alpha1: f64,
    alpha2: f64,
    k: i64,
) -> Result<GeneralBound> {
    check_open_unit("alpha", alpha)?;
    if !(0.0 < alpha1 && alpha1 < alpha && alpha < alpha2 && alpha2 < 1.0) {
        return Err(Error::Parameter {
            name: "alpha1",
            value: alpha1,
            range: "0 < alpha1 < alpha < alpha2 < 1",
        });
    }
    let t1 = (alpha2 - alpha) / (alpha2 - alpha1);
    let t2 = (alpha - alpha1) / (alpha2 - alpha1);
    let lhs = riesz(x, alpha, k)?.abs();
    let m1 = maximal_centered(x, alpha1, k)?;
    let m2 = maximal_centered(x, alpha2, k)?;
    Ok(GeneralBound {
        lhs,
        bracket: m1.powf(t1) * m2.powf(t2),
    })
}

#[cfg(test)]
mod tests {
    use super::oracle::*;
    use super::*;

    fn seq(offset: i64, v: &[f64]) -> FiniteSequence {
        FiniteSequence::new(offset, v.to_vec()).unwrap()
    }

    #[test]
    fn delta_profiles() {
        let d = FiniteSequence::delta(0);
        for m in -5i64..=5 {
            let want = (2.0 * m.abs() as f64 + 1.0).powf(-0.5);
            assert!((maximal_centered(&d, 0.5, m).unwrap() - want).abs() < 1e-15);
        }
        assert!((maximal_centered(&d, 0.5, 1).unwrap() - 0.5773502691896258).abs() < 1e-12);
        assert!((riesz(&d, 0.5, 4).unwrap() - 0.5).abs() < 1e-15);
        assert_eq!(riesz(&d, 0.5, 0).unwrap(), 0.0);
    }

    #[test]
    fn indicator_maximal_alpha_zero() {
        let x = FiniteSequence::indicator(IntegerInterval::new(0, 3).unwrap());
        assert_eq!(maximal_centered(&x, 0.0, 0).unwrap(), 1.0);
        assert!((maximal_centered(&x, 0.0, 5).unwrap() - 4.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn alpha_domain() {
        let d = FiniteSequence::delta(0);
        assert!(maximal_centered(&d, 1.0, 0).is_err());
        assert!(maximal_centered(&d, -0.1, 0).is_err());
        assert!(riesz(&d, 0.0, 1).is_err());
        assert!(
            operator_profile(&d, 0.0, IntegerInterval::new(0, 1).unwrap(), Kind::Riesz).is_err()
        );
    }

    #[test]
    fn zero_sequence() {
        let z = FiniteSequence::zero();
        assert_eq!(maximal_centered(&z, 0.3, 7).unwrap(), 0.0);
        assert_eq!(maximal_noncentral(&z, 0.3, 7).unwrap(), 0.0);
        assert_eq!(riesz(&z, 0.3, 7).unwrap(), 0.0);
    }

    #[test]
    fn smallest_radius_wins_ties() {
        let (_, n) = maximal_centered_witness(&FiniteSequence::delta(0), 0.0, 0).unwrap();
        assert_eq!(n, 0);
        let x = seq(-1, &[1.0, 0.0, 1.0]);
        let (v, n) = maximal_centered_witness(&x, 0.0, 0).unwrap();
        assert_eq!((v, n), (2.0 / 3.0, 1));
    }

    #[test]
    fn matches_oracles() {
        let x = seq(-3, &[0.5, 0.0, 2.0, -1.5, 0.0, 0.0, 3.0]);
        for m in -12i64..12 {
            for alpha in [0.0, 0.2, 0.5, 0.9] {
                let cover = m.abs_diff(-3).max(m.abs_diff(3));
                let a = maximal_centered(&x, alpha, m).unwrap();
                let b = maximal_oracle(&x, alpha, m, 2 * cover).unwrap();
                assert!((a - b).abs() <= 1e-13 * b, "{m} {alpha}");
                let a = maximal_noncentral(&x, alpha, m).unwrap();
                let b = noncentral_oracle(&x, alpha, m).unwrap();
                assert!((a - b).abs() <= 1e-13 * b);
            }
            let a = riesz(&x, 0.4, m).unwrap();
            let b = riesz_oracle(&x, 0.4, m).unwrap();
            assert!((a - b).abs() <= 1e-13 * b.abs().max(1.0));
        }
        assert!(maximal_oracle(&x, 0.5, 0, 2).is_err());
    }

    #[test]
    fn profile_bound_dominates_outside() {
        let x = seq(2, &[1.0, -2.0, 0.5]);
        let w = IntegerInterval::new(-3, 9).unwrap();
        for kind in [Kind::Centered, Kind::Noncentral, Kind::Riesz] {
            let r = operator_profile(&x, 0.4, w, kind).unwrap();
            let b = r.profile.outside_bound();
            for k in (-40..-3).chain(10..40) {
                let v = match kind {
                    Kind::Centered => maximal_centered(&x, 0.4, k),
                    Kind::Noncentral => maximal_noncentral(&x, 0.4, k),
                    Kind::Riesz => riesz(&x, 0.4, k),
                }
                .unwrap();
                assert!(v.abs() <= b * (1.0 + 1e-12), "{kind:?} {k}");
            }
            for (k, v) in r.profile.iter() {
                let again = match kind {
                    Kind::Centered => maximal_centered(&x, 0.4, k),
                    Kind::Noncentral => maximal_noncentral(&x, 0.4, k),
                    Kind::Riesz => riesz(&x, 0.4, k),
                }
                .unwrap();
                assert_eq!(v, again);
            }
        }
    }

    #[test]
    fn calpha_reference_value() {
        let c = calpha_constant(0.5, 0.25).unwrap();
        assert!((c - 34.076).abs() < 1e-3, "{c}");
        assert!(calpha_constant(0.5, 0.5).is_err());
        assert!(calpha_constant(0.3, 0.0).is_err());
    }

    #[test]
    fn pointwise_bound_on_indicator() {
        let x = FiniteSequence::indicator(IntegerInterval::new(-4, 4).unwrap());
        for k in -20..20 {
            let b = pointwise_bound_check(&x, 0.5, 0.25, k).unwrap();
            assert!(b.holds, "{k}: {b:?}");
        }
        let g = pointwise_bound_general(&x, 0.5, 0.25, 0.75, 0).unwrap();
        assert!(g.lhs > 0.0 && g.bracket > 0.0);
        assert!(pointwise_bound_general(&x, 0.5, 0.6, 0.75, 0).is_err());
    }
}
