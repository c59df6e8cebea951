//! Single-input checks: both sides of one inequality, evaluated exactly.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::report::{InequalityReport, TheoremId, Verdict, Witness};
use super::tail::certified_power_sum;
use crate::error::{check_open_unit, Error, Result};
use crate::functionals::{
    bmo_scan, exp_functional, llogl_functional, lp_norm, normalize_for_exp, superlevel_measure,
    weak_norm_above, MeasureSpec,
};
use crate::lattice::{
    compensated_sum, Exponents, FiniteSequence, IntegerInterval, Profile, SymmetricInterval,
    WeightSpec,
};
use crate::operators::{
    maximal_centered, maximal_noncentral, operator_profile, pointwise_bound_check,
    pointwise_bound_general, riesz, Kind,
};
use crate::weights::{apq_bracket, EstimateWitness, ScanRange};

/// Certified tails must be below this fraction of the explicit head.
pub const TAIL_TOLERANCE: f64 = 1e-8;

/// Which `λ` values a weak-type check evaluates.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LambdaGrid {
    /// Every jump of the distribution function that the window certifies,
    /// taken as a left limit. This is the exact supremum over `λ` above the
    /// certification floor.
    Jumps,
    /// The given values, each evaluated with the strict superlevel set.
    Explicit(Vec<f64>),
}

fn zero_report(theorem: TheoremId, rhs: f64, x: &FiniteSequence) -> InequalityReport {
    InequalityReport::new(
        theorem,
        0.0,
        rhs,
        Witness {
            sequence: Some(x.clone()),
            ..Witness::default()
        },
        Verdict::PassStrict,
    )
}

fn weak_theorem(kind: Kind) -> Result<TheoremId> {
    match kind {
        Kind::Centered => Ok(TheoremId::T3_2),
        Kind::Riesz => Ok(TheoremId::T3_5),
        Kind::Noncentral => Err(Error::Precondition(
            "weak-type checks take the centered maximal operator or the Riesz potential".into(),
        )),
    }
}

/// `sup_λ λ (Σ_{|T x| > λ} ω^q)^{1/q} / Σ |x| ω` with `1/q = 1 - α`.
///
/// The profile is evaluated on `window`; the operator is bounded outside it
/// by a floor derived from the support distance, and only `λ` above that
/// floor are certifiable.
pub fn verify_weak_type(
    kind: Kind,
    x: &FiniteSequence,
    w: &WeightSpec,
    alpha: f64,
    grid: &LambdaGrid,
    window: IntegerInterval,
) -> Result<InequalityReport> {
    let theorem = weak_theorem(kind)?;
    check_open_unit("alpha", alpha)?;
    let q = 1.0 / (1.0 - alpha);
    let rhs = lp_norm(x, &MeasureSpec::new(w.clone(), 1.0), 1.0)?;
    if x.is_zero() {
        return Ok(zero_report(theorem, rhs, x)
            .param("alpha", alpha)
            .param("q", q));
    }
    let prof = operator_profile(x, alpha, window, kind)?.profile;
    let floor = prof.outside_bound();
    let v = MeasureSpec::new(w.clone(), q);
    let (lhs, lambda, measure) = match grid {
        LambdaGrid::Jumps => {
            let wn = weak_norm_above(&prof, &v, q, window, floor)?;
            (wn.value, wn.lambda, wn.measure)
        }
        LambdaGrid::Explicit(ls) => {
            let mut best = (0.0, 0.0, 0.0);
            for &l in ls {
                if !(l > 0.0) {
                    return Err(Error::Parameter {
                        name: "lambda",
                        value: l,
                        range: "(0, ∞)",
                    });
                }
                let m = superlevel_measure(&prof, &v, l, window)?;
                let val = l * m.powf(1.0 / q);
                if val > best.0 {
                    best = (val, l, m);
                }
            }
            best
        }
    };
    let mut report = InequalityReport::new(
        theorem,
        lhs,
        rhs,
        Witness {
            sequence: Some(x.clone()),
            weight: Some(w.clone()),
            window: Some(window),
            lambda: Some(lambda),
            ..Witness::default()
        },
        Verdict::BoundedEmpirical,
    )
    .param("alpha", alpha)
    .param("q", q)
    .param("floor", floor)
    .param("superlevel_measure", measure);
    if matches!(grid, LambdaGrid::Jumps) {
        report = report.param("midpoint_max", midpoint_max(&prof, &v, q, window, floor)?);
    }
    Ok(report)
}

/// Redundancy check: `λ v({|y| > λ})^{1/q}` at up to 16 midpoints between
/// consecutive certified jumps, each evaluated from scratch.
fn midpoint_max(
    prof: &Profile,
    v: &MeasureSpec,
    q: f64,
    window: IntegerInterval,
    floor: f64,
) -> Result<f64> {
    let mut jumps: Vec<f64> = prof
        .values()
        .iter()
        .map(|y| y.abs())
        .filter(|&a| a > floor)
        .collect();
    jumps.sort_by(f64::total_cmp);
    jumps.dedup();
    if jumps.len() < 2 {
        return Ok(0.0);
    }
    let gaps = jumps.len() - 1;
    let step = gaps.div_ceil(16);
    let mut best = 0.0f64;
    for i in (0..gaps).step_by(step) {
        let mid = 0.5 * (jumps[i] + jumps[i + 1]);
        let m = superlevel_measure(prof, v, mid, window)?;
        best = best.max(mid * m.powf(1.0 / q));
    }
    Ok(best)
}

/// `(λ, λ v({|T x| >= λ})^{1/q} / Σ |x| ω)` at every certified jump, in
/// decreasing `λ`; the left limits whose maximum [`verify_weak_type`]
/// reports.
pub fn weak_type_series(
    kind: Kind,
    x: &FiniteSequence,
    w: &WeightSpec,
    alpha: f64,
    window: IntegerInterval,
) -> Result<Vec<(f64, f64)>> {
    weak_theorem(kind)?;
    check_open_unit("alpha", alpha)?;
    let q = 1.0 / (1.0 - alpha);
    let rhs = lp_norm(x, &MeasureSpec::new(w.clone(), 1.0), 1.0)?;
    if x.is_zero() {
        return Ok(Vec::new());
    }
    let prof = operator_profile(x, alpha, window, kind)?.profile;
    let floor = prof.outside_bound();
    let mut pts: Vec<(f64, f64)> = prof
        .iter()
        .map(|(k, y)| (y.abs(), w.eval_pow(k, q)))
        .filter(|&(a, _)| a > floor)
        .collect();
    pts.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut out: Vec<(f64, f64)> = Vec::new();
    let mut acc = crate::lattice::CompensatedSum::new();
    for (i, &(a, v)) in pts.iter().enumerate() {
        acc.add(v);
        if pts.get(i + 1).is_none_or(|n| n.0 < a) {
            out.push((a, a * acc.value().powf(1.0 / q) / rhs));
        }
    }
    Ok(out)
}

pub fn verify_weak_type_maximal(
    x: &FiniteSequence,
    w: &WeightSpec,
    alpha: f64,
    grid: &LambdaGrid,
    window: IntegerInterval,
) -> Result<InequalityReport> {
    verify_weak_type(Kind::Centered, x, w, alpha, grid, window)
}

pub fn verify_weak_type_riesz(
    x: &FiniteSequence,
    w: &WeightSpec,
    alpha: f64,
    grid: &LambdaGrid,
    window: IntegerInterval,
) -> Result<InequalityReport> {
    verify_weak_type(Kind::Riesz, x, w, alpha, grid, window)
}

/// The extremal sequence `x = ω^{-p'} χ_S` with `2λ = |S|^{α-1} Σ_S x`.
///
/// Every point of `S` has `M̄_α x >= 2λ > λ`, so a strong or weak bound for
/// the operator at `λ` forces `λ (Σ_S ω^q)^{1/q} <= C ‖x‖_{ℓ^p_{ω^p}}`; the
/// ratio of those two sides is half the `A(p,q)` bracket of `S`.
pub fn verify_sufficiency_construction(
    w: &WeightSpec,
    p: f64,
    alpha: f64,
    s: SymmetricInterval,
) -> Result<InequalityReport> {
    let ex = Exponents::sobolev(alpha, p)?;
    if p <= 1.0 {
        return Err(Error::Parameter {
            name: "p",
            value: p,
            range: "(1, 1/alpha)",
        });
    }
    let q = ex.q_finite()?;
    let pp = ex.p_prime.value();
    let j = s.to_interval();
    let x = FiniteSequence::new(j.lo(), j.iter().map(|k| w.eval_pow(k, -pp)).collect())?;
    let n = s.cardinality() as f64;
    let mass = x.l1_norm();
    let lambda = 0.5 * n.powf(alpha - 1.0) * mass;
    let vs = compensated_sum(j.iter().map(|k| w.eval_pow(k, q)));
    let lhs = lambda * vs.powf(1.0 / q);
    let rhs = lp_norm(&x, &MeasureSpec::new(w.clone(), p), p)?;
    let bracket = 2.0 * lhs / rhs;
    let direct = apq_bracket(w, p, ex.q, s)?;
    let min_noncentral = j
        .iter()
        .map(|k| maximal_noncentral(&x, alpha, k))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(f64::INFINITY, f64::min);
    Ok(InequalityReport::new(
        TheoremId::T1_4,
        lhs,
        rhs,
        Witness {
            sequence: Some(x),
            weight: Some(w.clone()),
            interval: Some(s),
            lambda: Some(lambda),
            ..Witness::default()
        },
        Verdict::BoundedEmpirical,
    )
    .param("alpha", alpha)
    .param("p", p)
    .param("q", q)
    .param("bracket", bracket)
    .param("bracket_direct", direct)
    .param("bracket_relerr", (bracket - direct).abs() / direct)
    .param("lambda_identity_relerr", {
        let lhs = 2.0 * lambda * n.powf(1.0 - alpha);
        (lhs - mass).abs() / mass
    })
    .param(
        "min_noncentral_over_2lambda",
        min_noncentral / (2.0 * lambda),
    ))
}

/// `‖T x‖_{ℓ^q_{ω^q}} / ‖x‖_{ℓ^p_{ω^p}}` with `1/q = 1/p - α`, the left norm
/// summed over all of ℤ with certified far fields.
pub fn verify_strong_type(
    kind: Kind,
    x: &FiniteSequence,
    w: &WeightSpec,
    p: f64,
    alpha: f64,
) -> Result<InequalityReport> {
    let theorem = match kind {
        Kind::Centered => TheoremId::T1_3,
        Kind::Riesz => TheoremId::T1_4,
        Kind::Noncentral => {
            return Err(Error::Precondition(
                "strong-type checks take the centered maximal operator or the Riesz potential"
                    .into(),
            ))
        }
    };
    let ex = Exponents::sobolev(alpha, p)?;
    if p <= 1.0 {
        return Err(Error::Parameter {
            name: "p",
            value: p,
            range: "(1, 1/alpha)",
        });
    }
    let q = ex.q_finite()?;
    let rhs = lp_norm(x, &MeasureSpec::new(w.clone(), p), p)?;
    if x.is_zero() {
        return Ok(zero_report(theorem, rhs, x).param("p", p).param("q", q));
    }
    let cert = certified_power_sum(x, alpha, kind, w, q)?;
    if !(cert.relative_error() < TAIL_TOLERANCE) {
        return Err(Error::TailNotCertified(format!(
            "tail error {} of the head exceeds {TAIL_TOLERANCE}",
            cert.relative_error()
        )));
    }
    let lhs = cert.norm(q);
    Ok(InequalityReport::new(
        theorem,
        lhs,
        rhs,
        Witness {
            sequence: Some(x.clone()),
            weight: Some(w.clone()),
            window: Some(cert.window),
            ..Witness::default()
        },
        Verdict::BoundedEmpirical,
    )
    .param("alpha", alpha)
    .param("p", p)
    .param("q", q)
    .param("head", cert.head)
    .param("tail", cert.left + cert.right)
    .param("tail_error_relative", cert.relative_error()))
}

fn bmo_common(
    theorem: TheoremId,
    x: &FiniteSequence,
    w: &WeightSpec,
    alpha: f64,
    scan: ScanRange,
) -> Result<InequalityReport> {
    check_open_unit("alpha", alpha)?;
    let p = 1.0 / alpha;
    let rhs = lp_norm(x, &MeasureSpec::new(w.clone(), p), p)?;
    if x.is_zero() {
        return Ok(zero_report(theorem, rhs, x)
            .param("alpha", alpha)
            .param("p", p));
    }
    let prof = operator_profile(x, alpha, scan.reach(), Kind::Riesz)?.profile;
    let (est, sup) = match theorem {
        TheoremId::C3_8 => {
            let sup = w.sup_norm().ok_or_else(|| {
                Error::Precondition("the BMO-norm check needs a bounded weight".into())
            })?;
            (bmo_scan(&prof, scan, |_| 1.0)?, sup)
        }
        _ => (
            bmo_scan(&prof, scan, |s| w.extremes(s.to_interval()).1)?,
            1.0,
        ),
    };
    let interval = match est.witness {
        EstimateWitness::Interval { center, radius } => {
            Some(SymmetricInterval::new(center, radius))
        }
        _ => None,
    };
    let mut report = InequalityReport::new(
        theorem,
        est.value * sup,
        rhs,
        Witness {
            sequence: Some(x.clone()),
            weight: Some(w.clone()),
            interval,
            ..Witness::default()
        },
        Verdict::BoundedEmpirical,
    )
    .param("alpha", alpha)
    .param("p", p)
    .param("scan_growth", est.growth());
    if theorem == TheoremId::C3_8 {
        report = report.param("weight_sup", sup);
    }
    Ok(report)
}

/// `sup_S (sup_S ω) · osc_S(I_α x) / ‖x‖_{ℓ^p_{ω^p}}` over the scanned
/// intervals, `p = 1/α`.
pub fn verify_bmo(
    x: &FiniteSequence,
    w: &WeightSpec,
    alpha: f64,
    scan: ScanRange,
) -> Result<InequalityReport> {
    bmo_common(TheoremId::T3_7, x, w, alpha, scan)
}

/// `‖ω‖_∞ · sup_S osc_S(I_α x) / ‖x‖_{ℓ^p_{ω^p}}` for bounded `ω`.
pub fn verify_bmo_norm(
    x: &FiniteSequence,
    w: &WeightSpec,
    alpha: f64,
    scan: ScanRange,
) -> Result<InequalityReport> {
    bmo_common(TheoremId::C3_8, x, w, alpha, scan)
}

fn require_support_in(x: &FiniteSequence, s: SymmetricInterval) -> Result<()> {
    if let Some(h) = x.support_hull() {
        let j = s.to_interval();
        if !j.contains_interval(&h) {
            return Err(Error::SupportLeak {
                lo: h.lo(),
                hi: h.hi(),
                within_lo: j.lo(),
                within_hi: j.hi(),
            });
        }
    }
    Ok(())
}

/// `(Σ_{k∈S} |T x(k) ω(k)|^q)^{1/q}` against
/// `v(S) + Σ_S |x| ω log⁺(|x| ω^{1-q})`, `1/q = 1 - α`, with the sides
/// exactly as stated (the left side carries the outer power, the right
/// side does not).
pub fn verify_llogl(
    kind: Kind,
    x: &FiniteSequence,
    w: &WeightSpec,
    alpha: f64,
    s: SymmetricInterval,
) -> Result<InequalityReport> {
    weak_theorem(kind)?;
    check_open_unit("alpha", alpha)?;
    require_support_in(x, s)?;
    let q = 1.0 / (1.0 - alpha);
    let rhs = llogl_functional(x, w, q, s)?;
    if x.is_zero() {
        return Ok(zero_report(TheoremId::T4_3, rhs, x).param("q", q));
    }
    let prof = operator_profile(x, alpha, s.to_interval(), kind)?.profile;
    let sum = compensated_sum(prof.iter().map(|(k, y)| (y.abs() * w.eval(k)).powf(q)));
    Ok(InequalityReport::new(
        TheoremId::T4_3,
        sum.powf(1.0 / q),
        rhs,
        Witness {
            sequence: Some(x.clone()),
            weight: Some(w.clone()),
            interval: Some(s),
            ..Witness::default()
        },
        Verdict::BoundedEmpirical,
    )
    .param("alpha", alpha)
    .param("q", q)
    .param(
        "operator",
        match kind {
            Kind::Riesz => 1.0,
            _ => 0.0,
        },
    ))
}

/// `Σ_S exp(½ ||I_α x̃| - δ|^{p'}) ω^q / (N ‖x̃‖^q)` with `p = 1/α` and
/// `x̃` normalised so that `‖x̃‖_{ℓ^p_{ω^p}} = min_S ω`.
pub fn verify_exp_bound(
    x: &FiniteSequence,
    w: &WeightSpec,
    alpha: f64,
    delta: f64,
    q: f64,
    s: SymmetricInterval,
) -> Result<InequalityReport> {
    check_open_unit("alpha", alpha)?;
    let p = 1.0 / alpha;
    let pp = 1.0 / (1.0 - alpha);
    if !(q > p.max(pp) && q.is_finite()) {
        return Err(Error::Parameter {
            name: "q",
            value: q,
            range: "(max(p, p'), ∞)",
        });
    }
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::Parameter {
            name: "delta",
            value: delta,
            range: "(0, ∞)",
        });
    }
    if s.radius == 0 {
        return Err(Error::Parameter {
            name: "N",
            value: 0.0,
            range: "integers >= 1",
        });
    }
    let xt = normalize_for_exp(x, w, p, s)?;
    let prof = operator_profile(&xt, alpha, s.to_interval(), Kind::Riesz)?.profile;
    let lhs = exp_functional(&prof, w, q, pp, delta, s)?;
    let norm = lp_norm(&xt, &MeasureSpec::new(w.clone(), p), p)?;
    let rhs = s.radius as f64 * norm.powf(q);
    Ok(InequalityReport::new(
        TheoremId::T4_5,
        lhs,
        rhs,
        Witness {
            sequence: Some(xt),
            weight: Some(w.clone()),
            interval: Some(s),
            ..Witness::default()
        },
        Verdict::BoundedEmpirical,
    )
    .param("alpha", alpha)
    .param("delta", delta)
    .param("q", q)
    .param("normalized_norm", norm)
    .param("min_weight", w.extremes(s.to_interval()).0))
}

/// Worst of `M_α / M̄_α` and `M̄_α / (2^{1-α} M_α)` over `window`; both must
/// stay at most 1.
pub fn verify_lemma_3_3(
    x: &FiniteSequence,
    alpha: f64,
    window: IntegerInterval,
) -> Result<InequalityReport> {
    crate::error::check_half_open_unit("alpha", alpha)?;
    if x.is_zero() {
        return Ok(zero_report(TheoremId::L3_3, 0.0, x).param("alpha", alpha));
    }
    let c = 2f64.powf(1.0 - alpha);
    let rows: Vec<(i64, f64, f64)> = window
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|k| {
            let m = maximal_centered(x, alpha, k)?;
            let mb = maximal_noncentral(x, alpha, k)?;
            Ok((k, m, mb))
        })
        .collect::<Result<_>>()?;
    // (ratio, lhs, rhs, k, which side)
    let mut worst = (f64::NEG_INFINITY, 0.0, 0.0, window.lo(), 0.0);
    for (k, m, mb) in rows {
        for (lhs, rhs, side) in [(m, mb, 0.0), (mb, c * m, 1.0)] {
            let r = lhs / rhs;
            if r > worst.0 {
                worst = (r, lhs, rhs, k, side);
            }
        }
    }
    Ok(InequalityReport::new(
        TheoremId::L3_3,
        worst.1,
        worst.2,
        Witness {
            sequence: Some(x.clone()),
            point: Some(worst.3),
            window: Some(window),
            ..Witness::default()
        },
        Verdict::strict(worst.1, worst.2),
    )
    .param("alpha", alpha)
    .param("upper_side", worst.4))
}

/// The point excluded from the `M_α <= 2 I_α(|x|)` check: the support
/// endpoint where a non-constant monotone `|x|` peaks, or the single point
/// of a one-point support. There the left side is at least `|x(k)|` while
/// the potential only sees the smaller values.
pub fn lemma_3_6_excluded_point(x: &FiniteSequence) -> Result<Option<i64>> {
    let Some(h) = x.support_hull() else {
        return Ok(None);
    };
    let a: Vec<f64> = h.iter().map(|k| x.get(k).abs()).collect();
    if a.contains(&0.0) {
        return Err(Error::Precondition(
            "the support of x must be a block without gaps".into(),
        ));
    }
    let up = a.windows(2).all(|w| w[0] <= w[1]);
    let down = a.windows(2).all(|w| w[0] >= w[1]);
    if !(up || down) {
        return Err(Error::Precondition(
            "|x| must be monotone on its support".into(),
        ));
    }
    Ok(if a.len() == 1 {
        Some(h.lo())
    } else if up && down {
        None
    } else if up {
        Some(h.hi())
    } else {
        Some(h.lo())
    })
}

/// Worst `M_α x(k) / (2 I_α(|x|)(k))` over `window` minus the excluded
/// point (see [`lemma_3_6_excluded_point`]).
pub fn verify_lemma_3_6(
    x: &FiniteSequence,
    alpha: f64,
    window: IntegerInterval,
) -> Result<InequalityReport> {
    check_open_unit("alpha", alpha)?;
    let excluded = lemma_3_6_excluded_point(x)?;
    if x.is_zero() {
        return Ok(zero_report(TheoremId::L3_6, 0.0, x).param("alpha", alpha));
    }
    let ax = x.abs();
    let rows: Vec<(i64, f64, f64)> = window
        .iter()
        .filter(|k| Some(*k) != excluded)
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|k| {
            Ok((
                k,
                maximal_centered(x, alpha, k)?,
                2.0 * riesz(&ax, alpha, k)?,
            ))
        })
        .collect::<Result<_>>()?;
    let mut worst = (f64::NEG_INFINITY, 0.0, 0.0, window.lo());
    for (k, lhs, rhs) in rows {
        let r = lhs / rhs;
        if r > worst.0 {
            worst = (r, lhs, rhs, k);
        }
    }
    let mut report = InequalityReport::new(
        TheoremId::L3_6,
        worst.1,
        worst.2,
        Witness {
            sequence: Some(x.clone()),
            point: Some(worst.3),
            window: Some(window),
            ..Witness::default()
        },
        Verdict::strict(worst.1, worst.2),
    )
    .param("alpha", alpha);
    if let Some(e) = excluded {
        report = report.param("excluded_point", e as f64);
    }
    Ok(report)
}

/// The explicit-constant pointwise bound at one point.
pub fn verify_pointwise_bound(
    x: &FiniteSequence,
    alpha: f64,
    eps: f64,
    k: i64,
) -> Result<InequalityReport> {
    let b = pointwise_bound_check(x, alpha, eps, k)?;
    let verdict = if b.holds {
        Verdict::PassStrict
    } else {
        Verdict::Violation
    };
    Ok(InequalityReport::new(
        TheoremId::E4_8,
        b.lhs,
        b.rhs,
        Witness {
            sequence: Some(x.clone()),
            point: Some(k),
            ..Witness::default()
        },
        verdict,
    )
    .param("alpha", alpha)
    .param("eps", eps))
}

/// `|I_α x(k)|` over the interpolated maximal bracket at one point.
pub fn verify_general_bound(
    x: &FiniteSequence,
    alpha: f64,
    alpha1: f64,
    alpha2: f64,
    k: i64,
) -> Result<InequalityReport> {
    let g = pointwise_bound_general(x, alpha, alpha1, alpha2, k)?;
    let verdict = if g.lhs == 0.0 {
        Verdict::PassStrict
    } else {
        Verdict::BoundedEmpirical
    };
    Ok(InequalityReport::new(
        TheoremId::R4_4,
        g.lhs,
        g.bracket,
        Witness {
            sequence: Some(x.clone()),
            point: Some(k),
            ..Witness::default()
        },
        verdict,
    )
    .param("alpha", alpha)
    .param("alpha1", alpha1)
    .param("alpha2", alpha2))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn iv(a: i64, b: i64) -> IntegerInterval {
        IntegerInterval::new(a, b).unwrap()
    }

    fn one() -> WeightSpec {
        WeightSpec::constant(1.0).unwrap()
    }

    #[test]
    fn weak_type_delta_spot_values() {
        let d = FiniteSequence::delta(0);
        let g = LambdaGrid::Explicit(vec![0.5]);
        let r = verify_weak_type_maximal(&d, &one(), 0.5, &g, iv(-10, 10)).unwrap();
        assert!((r.ratio - 0.5 * 3f64.sqrt()).abs() < 1e-12);
        assert!((r.params["superlevel_measure"] - 3.0).abs() < 1e-15);
        let r = verify_weak_type_riesz(&d, &one(), 0.5, &g, iv(-10, 10)).unwrap();
        assert!((r.ratio - 0.5 * 6f64.sqrt()).abs() < 1e-12);
        let z = FiniteSequence::zero();
        let r = verify_weak_type_maximal(&z, &one(), 0.5, &g, iv(-10, 10)).unwrap();
        assert_eq!((r.lhs, r.ratio, r.verdict), (0.0, 0.0, Verdict::PassStrict));
    }

    #[test]
    fn weak_type_window_must_certify_lambda() {
        let d = FiniteSequence::delta(0);
        let g = LambdaGrid::Explicit(vec![0.2]);
        assert!(matches!(
            verify_weak_type_maximal(&d, &one(), 0.5, &g, iv(-3, 3)),
            Err(Error::Window { .. })
        ));
    }

    #[test]
    fn jump_grid_dominates_midpoints() {
        let x = FiniteSequence::new(-2, vec![1.0, 3.0, 0.5]).unwrap();
        let w = WeightSpec::power(-0.2).unwrap();
        let r = verify_weak_type_maximal(&x, &w, 0.5, &LambdaGrid::Jumps, iv(-60, 60)).unwrap();
        assert!(r.params["midpoint_max"] <= r.lhs);
        let l = r.witness.lambda.unwrap();
        let dense: Vec<f64> = (1..400).map(|i| l * (1.0 + i as f64 * 1e-4)).collect();
        let e = verify_weak_type_maximal(&x, &w, 0.5, &LambdaGrid::Explicit(dense), iv(-60, 60))
            .unwrap();
        assert!(e.lhs <= r.lhs);
    }

    #[test]
    fn sufficiency_construction_reproduces_bracket() {
        let r = verify_sufficiency_construction(&one(), 2.0, 0.25, SymmetricInterval::new(0, 4))
            .unwrap();
        assert!((r.params["bracket"] - 1.0).abs() < 1e-14);
        let w = WeightSpec::power(-0.1).unwrap();
        let r =
            verify_sufficiency_construction(&w, 2.0, 0.25, SymmetricInterval::new(0, 10)).unwrap();
        assert!(r.params["bracket_relerr"] < 1e-10);
        assert!(r.params["lambda_identity_relerr"] < 1e-15);
        assert!(r.params["min_noncentral_over_2lambda"] >= 1.0 - 1e-12);
    }

    #[test]
    fn strong_type_delta() {
        let d = FiniteSequence::delta(0);
        let r = verify_strong_type(Kind::Centered, &d, &one(), 2.0, 0.25).unwrap();
        assert_eq!(r.rhs, 1.0);
        // Σ_k (2|k|+1)^{-3} = 1 + 2 (1 - 1/8) ζ(3) - 2
        let want = (2.0 * 0.875 * 1.2020569031595942 - 1.0f64).powf(0.25);
        assert!((r.lhs - want).abs() < 1e-12, "{} {want}", r.lhs);
        assert!(r.params["tail_error_relative"] < TAIL_TOLERANCE);
        let z =
            verify_strong_type(Kind::Riesz, &FiniteSequence::zero(), &one(), 2.0, 0.25).unwrap();
        assert_eq!(z.ratio, 0.0);
        assert!(verify_strong_type(Kind::Riesz, &d, &one(), 1.0, 0.25).is_err());
    }

    #[test]
    fn bmo_spot_value() {
        let d = FiniteSequence::delta(0);
        let scan = ScanRange::new(0, 0, 1).unwrap();
        let r = verify_bmo(&d, &one(), 0.5, scan).unwrap();
        assert!((r.ratio - 4.0 / 9.0).abs() < 1e-12);
        let r = verify_bmo_norm(&d, &one(), 0.5, scan).unwrap();
        assert!((r.ratio - 4.0 / 9.0).abs() < 1e-12);
        assert!(verify_bmo_norm(&d, &WeightSpec::power(0.2).unwrap(), 0.5, scan).is_err());
    }

    #[test]
    fn llogl_delta_spot_value() {
        let d = FiniteSequence::delta(0);
        let s = SymmetricInterval::new(0, 2);
        let r = verify_llogl(Kind::Centered, &d, &one(), 0.5, s).unwrap();
        let lhs = (1.0f64 + 2.0 / 3.0 + 2.0 / 5.0).sqrt();
        assert!((r.lhs - lhs).abs() < 1e-14);
        assert_eq!(r.rhs, 5.0);
        assert!(matches!(
            verify_llogl(Kind::Centered, &FiniteSequence::delta(7), &one(), 0.5, s),
            Err(Error::SupportLeak { .. })
        ));
    }

    #[test]
    fn exp_bound_delta() {
        let d = FiniteSequence::delta(0);
        let s = SymmetricInterval::new(0, 4);
        let r = verify_exp_bound(&d, &one(), 0.5, 1.0, 3.0, s).unwrap();
        let mut want = 0.5f64.exp();
        for k in [1.0f64, 2.0, 3.0, 4.0] {
            want += 2.0 * (0.5 * (k.powf(-0.5) - 1.0).powi(2)).exp();
        }
        assert!((r.lhs - want).abs() < 1e-13);
        assert_eq!(r.rhs, 4.0);
        assert!(verify_exp_bound(&d, &one(), 0.5, 1.0, 2.0, s).is_err());
        assert!(verify_exp_bound(&FiniteSequence::zero(), &one(), 0.5, 1.0, 3.0, s).is_err());
    }

    #[test]
    fn noncentral_comparison_on_delta() {
        let d = FiniteSequence::delta(0);
        let r = verify_lemma_3_3(&d, 0.5, iv(-20, 20)).unwrap();
        assert_eq!(r.verdict, Verdict::PassStrict);
        assert!(r.ratio <= 1.0);
        let z = verify_lemma_3_3(&FiniteSequence::zero(), 0.5, iv(-2, 2)).unwrap();
        assert_eq!(z.verdict, Verdict::PassStrict);
    }

    #[test]
    fn monotone_bound_excludes_the_peak() {
        let ramp = FiniteSequence::new(0, vec![1.0, 2.0, 3.0]).unwrap();
        assert_eq!(lemma_3_6_excluded_point(&ramp).unwrap(), Some(2));
        let r = verify_lemma_3_6(&ramp, 0.5, iv(-10, 12)).unwrap();
        assert_eq!(r.verdict, Verdict::PassStrict);
        let ind = FiniteSequence::indicator(iv(0, 3));
        assert_eq!(lemma_3_6_excluded_point(&ind).unwrap(), None);
        assert_eq!(
            verify_lemma_3_6(&ind, 0.5, iv(-8, 8)).unwrap().verdict,
            Verdict::PassStrict
        );
        assert_eq!(
            lemma_3_6_excluded_point(&FiniteSequence::delta(4)).unwrap(),
            Some(4)
        );
        let bumpy = FiniteSequence::new(0, vec![1.0, 3.0, 2.0]).unwrap();
        assert!(verify_lemma_3_6(&bumpy, 0.5, iv(0, 2)).is_err());
        let gap = FiniteSequence::new(0, vec![1.0, 0.0, 1.0]).unwrap();
        assert!(verify_lemma_3_6(&gap, 0.5, iv(0, 2)).is_err());
    }

    #[test]
    fn excluded_peak_really_fails() {
        let ramp = FiniteSequence::new(0, vec![0.1, 1.0]).unwrap();
        let m = maximal_centered(&ramp, 0.5, 1).unwrap();
        let i = riesz(&ramp, 0.5, 1).unwrap();
        assert!(m > 2.0 * i, "{m} {i}");
    }
}
