//! Weighted norms, weak quasinorms, mean oscillation and Orlicz-type
//! functionals.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lattice::{
    CompensatedSum, FiniteSequence, IntegerInterval, PrefixSums, Profile, Samples,
    SymmetricInterval, WeightSpec,
};
use crate::weights::{ConstantEstimate, EstimateWitness, ScanRange, TrendPoint};

/// The measure `v(k) = ω(k)^e` on ℤ.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasureSpec {
    pub base: WeightSpec,
    pub exponent: f64,
}

impl MeasureSpec {
    pub fn new(base: WeightSpec, exponent: f64) -> Self {
        Self { base, exponent }
    }

    /// Counting measure.
    pub fn counting() -> Self {
        Self::new(WeightSpec::Constant { c: 1.0 }, 1.0)
    }

    #[inline]
    pub fn eval(&self, k: i64) -> f64 {
        self.base.eval_pow(k, self.exponent)
    }
}

fn check_p(p: f64) -> Result<()> {
    if p >= 1.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::Parameter {
            name: "p",
            value: p,
            range: "[1, ∞)",
        })
    }
}

/// `(Σ_k |x(k)|^p v(k))^{1/p}` over the stored samples.
pub fn lp_norm<S: Samples + ?Sized>(x: &S, v: &MeasureSpec, p: f64) -> Result<f64> {
    check_p(p)?;
    let s: CompensatedSum = x
        .indexed()
        .filter(|(_, y)| *y != 0.0)
        .map(|(k, y)| y.abs().powf(p) * v.eval(k))
        .collect();
    let n = s.value().powf(1.0 / p);
    if n.is_finite() {
        Ok(n)
    } else {
        Err(Error::Range {
            lo: x.first(),
            hi: x.first() + x.samples().len() as i64 - 1,
        })
    }
}

/// `v({|y| > λ})`, certified complete: every index outside `window` must be
/// known to satisfy `|y| <= λ`.
pub fn superlevel_measure(
    y: &Profile,
    v: &MeasureSpec,
    lambda: f64,
    window: IntegerInterval,
) -> Result<f64> {
    if !y.window().contains_interval(&window) {
        return Err(Error::Window {
            lo: window.lo(),
            hi: window.hi(),
            reason: "window exceeds the sampled profile".into(),
        });
    }
    let outside = y.bound_outside(&window);
    if outside > lambda {
        return Err(Error::Window {
            lo: window.lo(),
            hi: window.hi(),
            reason: format!("values up to {outside} may exceed λ = {lambda} outside"),
        });
    }
    Ok(window
        .iter()
        .filter(|&k| y.get(k).unwrap().abs() > lambda)
        .map(|k| v.eval(k))
        .collect::<CompensatedSum>()
        .value())
}

/// Supremum of `λ v({|y| > λ})^{1/p}` over `λ > floor` and where it is
/// approached.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct WeakNorm {
    pub value: f64,
    /// The jump `λ*` whose left limit attains the supremum.
    pub lambda: f64,
    /// `v({|y| >= λ*})`.
    pub measure: f64,
}

/// `sup_{λ > floor} λ v({|y| > λ})^{1/p}`.
///
/// The superlevel measure is a right-continuous step function of `λ`, so the
/// supremum is the left limit `λ_i v({|y| >= λ_i})^{1/p}` at one of the
/// distinct values `λ_i > floor`. Completeness requires `|y| <= floor`
/// everywhere outside `window`.
pub fn weak_norm_above(
    y: &Profile,
    v: &MeasureSpec,
    p: f64,
    window: IntegerInterval,
    floor: f64,
) -> Result<WeakNorm> {
    check_p(p)?;
    if !y.window().contains_interval(&window) {
        return Err(Error::Window {
            lo: window.lo(),
            hi: window.hi(),
            reason: "window exceeds the sampled profile".into(),
        });
    }
    let outside = y.bound_outside(&window);
    if outside > floor {
        return Err(Error::Window {
            lo: window.lo(),
            hi: window.hi(),
            reason: format!("values up to {outside} outside exceed the floor {floor}"),
        });
    }
    let mut pts: Vec<(f64, f64)> = window
        .iter()
        .map(|k| (y.get(k).unwrap().abs(), k))
        .filter(|(a, _)| *a > floor)
        .map(|(a, k)| (a, v.eval(k)))
        .collect();
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut best = WeakNorm {
        value: 0.0,
        lambda: 0.0,
        measure: 0.0,
    };
    let mut cum = CompensatedSum::new();
    for (i, &(a, m)) in pts.iter().enumerate() {
        cum.add(m);
        if pts.get(i + 1).is_some_and(|n| n.0 == a) {
            continue;
        }
        let mass = cum.value();
        let val = a * mass.powf(1.0 / p);
        if val > best.value {
            best = WeakNorm {
                value: val,
                lambda: a,
                measure: mass,
            };
        }
    }
    Ok(best)
}

/// `‖y‖_{ℓ^{p,∞}(v)} = sup_{λ>0} λ v({|y| > λ})^{1/p}`; requires `y = 0`
/// outside `window`.
pub fn weak_norm(y: &Profile, v: &MeasureSpec, p: f64, window: IntegerInterval) -> Result<f64> {
    weak_norm_above(y, v, p, window, 0.0).map(|w| w.value)
}

fn check_inside(y: &Profile, s: SymmetricInterval) -> Result<IntegerInterval> {
    let j = s.to_interval();
    if !y.window().contains_interval(&j) {
        return Err(Error::Window {
            lo: y.window().lo(),
            hi: y.window().hi(),
            reason: format!("interval [{}, {}] not sampled", j.lo(), j.hi()),
        });
    }
    Ok(j)
}

/// `(1/|S|) Σ_S y`.
pub fn interval_mean(y: &Profile, s: SymmetricInterval) -> Result<f64> {
    let j = check_inside(y, s)?;
    let sum: CompensatedSum = j.iter().map(|k| y.get(k).unwrap()).collect();
    Ok(sum.value() / s.cardinality() as f64)
}

/// `(1/|S|) Σ_S |y - y_S|`.
pub fn oscillation(y: &Profile, s: SymmetricInterval) -> Result<f64> {
    let j = check_inside(y, s)?;
    let mean = interval_mean(y, s)?;
    let dev: CompensatedSum = j.iter().map(|k| (y.get(k).unwrap() - mean).abs()).collect();
    Ok(dev.value() / s.cardinality() as f64)
}

/// Running maxima over radii at the scan checkpoints of
/// `f(center, radius)` for every center, reduced deterministically.
pub(crate) fn scan_intervals<F>(scan: ScanRange, f: F) -> Result<ConstantEstimate>
where
    F: Fn(SymmetricInterval) -> Result<f64> + Sync,
{
    let checkpoints = scan.checkpoints();
    let centers = scan.centers;
    let rows: Vec<Vec<(f64, u64)>> = (0..centers.len())
        .into_par_iter()
        .map(|j| {
            let m = centers.lo() + j as i64;
            let mut best = (f64::NEG_INFINITY, 0u64);
            let mut out = Vec::with_capacity(checkpoints.len());
            let mut next = 0;
            for n in 0..=scan.n_max {
                let v = f(SymmetricInterval::new(m, n))?;
                if v > best.0 {
                    best = (v, n);
                }
                while next < checkpoints.len() && checkpoints[next] == n {
                    out.push(best);
                    next += 1;
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut trend = Vec::new();
    let mut witness = EstimateWitness::None;
    for (ci, &extent) in checkpoints.iter().enumerate() {
        let mut best = (f64::NEG_INFINITY, 0i64, 0u64);
        for (j, r) in rows.iter().enumerate() {
            if r[ci].0 > best.0 {
                best = (r[ci].0, centers.lo() + j as i64, r[ci].1);
            }
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

/// Scanned `sup_S (1/|S|) Σ_S |y - y_S|`.
///
/// Uses prefix sums of `y` and, per interval, a pass over `S` for the
/// absolute deviations.
pub fn bmo_norm(y: &Profile, scan: ScanRange) -> Result<ConstantEstimate> {
    bmo_scan(y, scan, |_| 1.0)
}

/// Scanned `sup_S factor(S) · (1/|S|) Σ_S |y - y_S|`.
pub(crate) fn bmo_scan<F>(y: &Profile, scan: ScanRange, factor: F) -> Result<ConstantEstimate>
where
    F: Fn(SymmetricInterval) -> f64 + Sync,
{
    let reach = scan.reach();
    if !y.window().contains_interval(&reach) {
        return Err(Error::Window {
            lo: y.window().lo(),
            hi: y.window().hi(),
            reason: format!("scan reaches [{}, {}]", reach.lo(), reach.hi()),
        });
    }
    let prefix = PrefixSums::new(y.window().lo(), y.values().iter().copied());
    let w0 = y.window().lo();
    let vals = y.values();
    scan_intervals(scan, |s| {
        let n = s.cardinality() as f64;
        let mean = prefix.range_sum(s.lo(), s.hi()) / n;
        let a = (s.lo() - w0) as usize;
        let b = (s.hi() - w0) as usize;
        let dev: CompensatedSum = vals[a..=b].iter().map(|v| (v - mean).abs()).collect();
        Ok(factor(s) * dev.value() / n)
    })
}

/// `log⁺ t = max(0, ln t)` for `t >= 0`.
pub fn log_plus(t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Parameter {
            name: "t",
            value: t,
            range: "[0, ∞]",
        });
    }
    Ok(if t > 1.0 { t.ln() } else { 0.0 })
}

/// `v(S) + Σ_{k∈S} |x(k)| ω(k) log⁺(|x(k)| ω(k)^{1-q})` with `v = ω^q`.
pub fn llogl_functional(
    x: &FiniteSequence,
    w: &WeightSpec,
    q: f64,
    s: SymmetricInterval,
) -> Result<f64> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(Error::Parameter {
            name: "q",
            value: q,
            range: "(1, ∞)",
        });
    }
    let mut total = CompensatedSum::new();
    for k in s.to_interval().iter() {
        let om = w.eval(k);
        total.add(om.powf(q));
        let a = x.get(k).abs();
        if a != 0.0 {
            total.add(a * om * log_plus(a * om.powf(1.0 - q))?);
        }
    }
    let v = total.value();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Range {
            lo: s.lo(),
            hi: s.hi(),
        })
    }
}

/// `Σ_{k∈S} exp(½ ||y(k)| - δ|^{p'}) ω(k)^q`.
///
/// An overflowing term is reported with the index where it occurred.
pub fn exp_functional(
    y: &Profile,
    w: &WeightSpec,
    q: f64,
    p_prime: f64,
    delta: f64,
    s: SymmetricInterval,
) -> Result<f64> {
    let j = check_inside(y, s)?;
    let mut total = CompensatedSum::new();
    for k in j.iter() {
        let d = (y.get(k).unwrap().abs() - delta).abs();
        let e = (0.5 * d.powf(p_prime)).exp();
        let t = e * w.eval_pow(k, q);
        if !t.is_finite() {
            return Err(Error::Overflow { k });
        }
        total.add(t);
    }
    let v = total.value();
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Overflow { k: s.hi() })
    }
}

/// `x̃ = (min_S ω) · x / ‖x‖_{ℓ^p_{ω^p}}`, so that `‖x̃‖_{ℓ^p_{ω^p}} = min_S ω`.
///
/// `x` must be supported in `S`.
pub fn normalize_for_exp(
    x: &FiniteSequence,
    w: &WeightSpec,
    p: f64,
    s: SymmetricInterval,
) -> Result<FiniteSequence> {
    let j = s.to_interval();
    let Some(h) = x.support_hull() else {
        return Err(Error::ZeroInput("cannot normalise the zero sequence"));
    };
    if !j.contains_interval(&h) {
        return Err(Error::SupportLeak {
            lo: h.lo(),
            hi: h.hi(),
            within_lo: j.lo(),
            within_hi: j.hi(),
        });
    }
    let norm = lp_norm(x, &MeasureSpec::new(w.clone(), p), p)?;
    let (min, _) = w.extremes(j);
    x.scale(min / norm)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: i64, b: i64) -> IntegerInterval {
        IntegerInterval::new(a, b).unwrap()
    }

    #[test]
    fn norms_and_measures() {
        let x = FiniteSequence::new(0, vec![3.0, -4.0]).unwrap();
        assert!((lp_norm(&x, &MeasureSpec::counting(), 2.0).unwrap() - 5.0).abs() < 1e-15);
        assert!(lp_norm(&x, &MeasureSpec::counting(), 0.5).is_err());
        let y = x.on_window(iv(-2, 3));
        let c = MeasureSpec::counting();
        assert_eq!(superlevel_measure(&y, &c, 3.5, iv(-2, 3)).unwrap(), 1.0);
        assert_eq!(superlevel_measure(&y, &c, 2.0, iv(0, 1)).unwrap(), 2.0);
        assert!(superlevel_measure(&y, &c, 2.0, iv(1, 3)).is_err());
    }

    #[test]
    fn weak_norm_takes_left_limits() {
        let y = Profile::new(iv(0, 2), vec![3.0, 1.0, 1.0]).unwrap();
        let c = MeasureSpec::counting();
        let w = weak_norm_above(&y, &c, 1.0, iv(0, 2), 0.0).unwrap();
        assert_eq!((w.value, w.lambda, w.measure), (3.0, 3.0, 1.0));
        let w = weak_norm_above(&y, &c, 2.0, iv(0, 2), 0.0).unwrap();
        assert!((w.value - 3.0).abs() < 1e-15);
        let y = Profile::new(iv(0, 3), vec![1.0, 1.0, 1.0, 1.5]).unwrap();
        assert_eq!(weak_norm(&y, &c, 1.0, iv(0, 3)).unwrap(), 4.0);
    }

    #[test]
    fn oscillation_of_indicator() {
        let x = FiniteSequence::indicator(iv(0, 1));
        let y = x.on_window(iv(-5, 5));
        let s = SymmetricInterval::new(0, 1);
        assert!((interval_mean(&y, s).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        assert!((oscillation(&y, s).unwrap() - 4.0 / 9.0).abs() < 1e-15);
        assert!(oscillation(&y, SymmetricInterval::new(0, 9)).is_err());
        let b = bmo_norm(&y, ScanRange::new(-2, 2, 3).unwrap()).unwrap();
        assert!(b.value >= 4.0 / 9.0 - 1e-15);
        assert!(b.value <= 0.5 + 1e-15);
    }

    #[test]
    fn log_plus_values() {
        assert_eq!(log_plus(0.0).unwrap(), 0.0);
        assert_eq!(log_plus(1.0).unwrap(), 0.0);
        assert!((log_plus(std::f64::consts::E).unwrap() - 1.0).abs() < 1e-15);
        assert!(log_plus(-1.0).is_err());
    }

    #[test]
    fn llogl_of_delta_with_constant_weight() {
        let w = WeightSpec::constant(1.0).unwrap();
        let s = SymmetricInterval::new(0, 2);
        let d = FiniteSequence::delta(0).scale(std::f64::consts::E).unwrap();
        let v = llogl_functional(&d, &w, 2.0, s).unwrap();
        assert!((v - (5.0 + std::f64::consts::E)).abs() < 1e-14);
    }

    #[test]
    fn exp_overflow_names_the_index() {
        let y = Profile::new(iv(0, 2), vec![0.0, 40.0, 0.0]).unwrap();
        let w = WeightSpec::constant(1.0).unwrap();
        let s = SymmetricInterval::new(1, 1);
        assert_eq!(
            exp_functional(&y, &w, 2.0, 2.0, 0.0, s),
            Err(Error::Overflow { k: 1 })
        );
        let y = Profile::new(iv(0, 2), vec![2.0, -3.0, 1.0]).unwrap();
        let v = exp_functional(&y, &w, 2.0, 2.0, 1.0, s).unwrap();
        assert!((v - (0.5f64.exp() + 2f64.exp() + 1.0)).abs() < 1e-14);
    }

    #[test]
    fn normalisation_hits_min_weight() {
        let w = WeightSpec::power(0.5).unwrap();
        let s = SymmetricInterval::new(3, 2);
        let x = FiniteSequence::new(2, vec![1.0, -2.0, 0.5]).unwrap();
        let xt = normalize_for_exp(&x, &w, 1.5, s).unwrap();
        let n = lp_norm(&xt, &MeasureSpec::new(w.clone(), 1.5), 1.5).unwrap();
        assert!((n - 2f64.sqrt()).abs() < 1e-14);
        let leak = FiniteSequence::delta(9);
        assert!(matches!(
            normalize_for_exp(&leak, &w, 1.5, s),
            Err(Error::SupportLeak { .. })
        ));
    }
}
