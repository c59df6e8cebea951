//! Family sweeps: one check per generated case, reduced in case order.

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::checks::{
    verify_bmo, verify_bmo_norm, verify_exp_bound, verify_general_bound, verify_lemma_3_3,
    verify_lemma_3_6, verify_llogl, verify_pointwise_bound, verify_strong_type, verify_weak_type,
    LambdaGrid,
};
use super::family::{Generator, InputFamily};
use super::report::{InequalityReport, SweepReport, TheoremId};
use crate::error::{Error, Result};
use crate::lattice::{FiniteSequence, IntegerInterval, SymmetricInterval, WeightSpec};
use crate::operators::Kind;
use crate::weights::{
    exponent_segment, ConstantEstimate, EstimateWitness, ScanRange, Segment, SegmentMode,
    TrendPoint,
};

fn case_checkpoints(cases: u64) -> Vec<u64> {
    let mut c = vec![cases];
    let mut n = cases;
    while n > 1 {
        n /= 2;
        c.push(n);
    }
    c.reverse();
    c.dedup();
    c
}

/// Run `check` on cases `0..cases` of `family` in parallel.
///
/// The reduction is in case order: the first error by index is returned,
/// and the worst report is the first case attaining the maximal ratio.
pub fn sweep<F>(
    theorem: TheoremId,
    label: impl Into<String>,
    family: &InputFamily,
    cases: u64,
    check: F,
) -> Result<SweepReport>
where
    F: Fn(u64, &FiniteSequence) -> Result<InequalityReport> + Sync,
{
    if cases == 0 {
        return Err(Error::Empty("cases"));
    }
    let reports: Vec<Result<InequalityReport>> = (0..cases)
        .into_par_iter()
        .map(|i| check(i, &family.case(i)))
        .collect();
    let marks = case_checkpoints(cases);
    let mut trend = Vec::with_capacity(marks.len());
    let mut next = 0;
    let mut worst: Option<(u64, InequalityReport)> = None;
    let mut violations = 0;
    for (i, r) in reports.into_iter().enumerate() {
        let r = r?;
        let i = i as u64;
        if r.is_violation() {
            violations += 1;
        }
        if worst.as_ref().is_none_or(|(_, w)| r.ratio > w.ratio) {
            worst = Some((i, r));
        }
        if i + 1 == marks[next] {
            trend.push(TrendPoint {
                extent: i + 1,
                value: worst.as_ref().map_or(0.0, |(_, w)| w.ratio),
            });
            next += 1;
        }
    }
    let (index, mut worst) = worst.expect("at least one case");
    worst.witness.case = Some(index);
    Ok(SweepReport {
        theorem,
        label: label.into(),
        family: family.name().to_string(),
        seed: family.seed,
        cases,
        estimate: ConstantEstimate::from_trend(trend, EstimateWitness::Case { index }),
        worst,
        violations,
    })
}

/// Relative change of a check's ratio under `x → c x`.
pub fn scaling_relerr<F>(x: &FiniteSequence, c: f64, check: F) -> Result<f64>
where
    F: Fn(&FiniteSequence) -> Result<InequalityReport>,
{
    let a = check(x)?.ratio;
    let b = check(&x.scale(c)?)?.ratio;
    Ok(if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    })
}

fn window_around(x: &FiniteSequence, radius: u64) -> IntegerInterval {
    let h = x
        .support_hull()
        .unwrap_or_else(|| IntegerInterval::new(0, 0).unwrap());
    h.expand(radius)
}

/// Smallest symmetric interval containing the support plus `margin`.
pub fn enclosing_interval(x: &FiniteSequence, margin: u64) -> SymmetricInterval {
    let h = x
        .support_hull()
        .unwrap_or_else(|| IntegerInterval::new(0, 0).unwrap());
    let center = h.lo() + (h.hi() - h.lo()) / 2;
    let radius = (h.hi() - center) as u64 + margin;
    SymmetricInterval::new(center, radius)
}

/// Weak-type sweep on the window `hull(supp x) ± radius`, jump grid.
pub fn weak_type_sweep(
    kind: Kind,
    w: &WeightSpec,
    alpha: f64,
    family: &InputFamily,
    cases: u64,
    radius: u64,
) -> Result<SweepReport> {
    let theorem = match kind {
        Kind::Riesz => TheoremId::T3_5,
        _ => TheoremId::T3_2,
    };
    sweep(
        theorem,
        format!("{w};alpha={alpha};R={radius}"),
        family,
        cases,
        |_, x| {
            verify_weak_type(
                kind,
                x,
                w,
                alpha,
                &LambdaGrid::Jumps,
                window_around(x, radius),
            )
        },
    )
}

pub fn strong_type_sweep(
    kind: Kind,
    w: &WeightSpec,
    p: f64,
    alpha: f64,
    family: &InputFamily,
    cases: u64,
) -> Result<SweepReport> {
    let theorem = match kind {
        Kind::Riesz => TheoremId::T1_4,
        _ => TheoremId::T1_3,
    };
    sweep(
        theorem,
        format!("{w};alpha={alpha};p={p}"),
        family,
        cases,
        |_, x| verify_strong_type(kind, x, w, p, alpha),
    )
}

/// A scanned segment and one strong-type sweep per `(t, family)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentSweep {
    pub segment: Segment,
    pub sweeps: Vec<SweepReport>,
}

/// Strong type of the centered maximal operator along the segment from
/// the weak endpoint, for each `t` in `t_grid` (which must avoid 1).
pub fn verify_theorem_4_1_segment(
    w: &WeightSpec,
    alpha: f64,
    t_grid: &[f64],
    families: &[InputFamily],
    cases: u64,
    rh_scan: ScanRange,
    scan: ScanRange,
) -> Result<SegmentSweep> {
    if let Some(&t) = t_grid.iter().find(|&&t| !(0.0..1.0).contains(&t)) {
        return Err(Error::Parameter {
            name: "t",
            value: t,
            range: "[0, 1)",
        });
    }
    let segment = exponent_segment(
        w,
        SegmentMode::FromWeakEndpoint,
        alpha,
        t_grid,
        rh_scan,
        scan,
    )?;
    let mut sweeps = Vec::new();
    for pt in &segment.points {
        for f in families {
            let label = format!("{w};alpha={alpha};t={}", pt.t);
            sweeps.push(sweep(TheoremId::T4_1, label, f, cases, |_, x| {
                let mut r = verify_strong_type(Kind::Centered, x, w, pt.p, alpha)?;
                r.theorem = TheoremId::T4_1;
                Ok(r.param("t", pt.t))
            })?);
        }
    }
    Ok(SegmentSweep { segment, sweeps })
}

pub fn bmo_sweep(
    w: &WeightSpec,
    alpha: f64,
    family: &InputFamily,
    cases: u64,
    scan: ScanRange,
) -> Result<SweepReport> {
    let label = format!(
        "{w};alpha={alpha};scan={}..{}:{}",
        scan.centers.lo(),
        scan.centers.hi(),
        scan.n_max
    );
    sweep(TheoremId::T3_7, label, family, cases, |_, x| {
        verify_bmo(x, w, alpha, scan)
    })
}

pub fn bmo_norm_sweep(
    w: &WeightSpec,
    alpha: f64,
    family: &InputFamily,
    cases: u64,
    scan: ScanRange,
) -> Result<SweepReport> {
    let label = format!(
        "{w};alpha={alpha};scan={}..{}:{}",
        scan.centers.lo(),
        scan.centers.hi(),
        scan.n_max
    );
    sweep(TheoremId::C3_8, label, family, cases, |_, x| {
        verify_bmo_norm(x, w, alpha, scan)
    })
}

/// `S` is the support's enclosing interval widened by `margin`.
pub fn llogl_sweep(
    kind: Kind,
    w: &WeightSpec,
    alpha: f64,
    family: &InputFamily,
    cases: u64,
    margin: u64,
) -> Result<SweepReport> {
    let label = format!("{w};alpha={alpha};kind={};margin={margin}", kind.name());
    sweep(TheoremId::T4_3, label, family, cases, |_, x| {
        verify_llogl(kind, x, w, alpha, enclosing_interval(x, margin))
    })
}

/// `S` is the support's enclosing interval widened by `margin >= 1`.
pub fn exp_sweep(
    w: &WeightSpec,
    alpha: f64,
    delta: f64,
    q: f64,
    family: &InputFamily,
    cases: u64,
    margin: u64,
) -> Result<SweepReport> {
    let label = format!("{w};alpha={alpha};delta={delta};q={q};margin={margin}");
    sweep(TheoremId::T4_5, label, family, cases, |_, x| {
        verify_exp_bound(x, w, alpha, delta, q, enclosing_interval(x, margin.max(1)))
    })
}

/// Random `α ∈ [0, 0.95]` per case; window `hull ± margin`.
pub fn lemma_3_3_sweep(family: &InputFamily, cases: u64, margin: u64) -> Result<SweepReport> {
    sweep(
        TheoremId::L3_3,
        format!("margin={margin}"),
        family,
        cases,
        |i, x| {
            let alpha = family.aux_rng(i).random_range(0.0..=0.95);
            verify_lemma_3_3(x, alpha, window_around(x, margin))
        },
    )
}

/// Random `α ∈ [0.05, 0.95]` per case; window `hull ± margin`.
pub fn lemma_3_6_sweep(family: &InputFamily, cases: u64, margin: u64) -> Result<SweepReport> {
    sweep(
        TheoremId::L3_6,
        format!("margin={margin}"),
        family,
        cases,
        |i, x| {
            let alpha = family.aux_rng(i).random_range(0.05..=0.95);
            verify_lemma_3_6(x, alpha, window_around(x, margin))
        },
    )
}

/// Random `α ∈ [0.05, 0.95]`, `ε` strictly inside `(0, min(α, 1-α))` and a
/// point within twice the family spread.
pub fn pointwise_bound_sweep(family: &InputFamily, cases: u64) -> Result<SweepReport> {
    sweep(
        TheoremId::E4_8,
        "random alpha, eps, k",
        family,
        cases,
        |i, x| {
            let mut rng = family.aux_rng(i);
            let alpha = rng.random_range(0.05..=0.95);
            let eps = rng.random_range(0.02..=0.98) * f64::min(alpha, 1.0 - alpha);
            let reach = 2 * family.spread + family.max_len as i64;
            let k = rng.random_range(-reach..=reach);
            verify_pointwise_bound(x, alpha, eps, k)
        },
    )
}

pub fn general_bound_sweep(
    family: &InputFamily,
    cases: u64,
    alpha: f64,
    alpha1: f64,
    alpha2: f64,
) -> Result<SweepReport> {
    let label = format!("alpha={alpha};alpha1={alpha1};alpha2={alpha2}");
    sweep(TheoremId::R4_4, label, family, cases, |i, x| {
        let reach = 2 * family.spread + family.max_len as i64;
        let k = family.aux_rng(i).random_range(-reach..=reach);
        verify_general_bound(x, alpha, alpha1, alpha2, k)
    })
}

/// The sweep that [`estimate_best_constant`] runs for `theorem`, with the
/// default context: `Constant(1)` weight, `α = ½` (`¼` with `p = 2` for
/// strong type), weak-type windows of radius 256, BMO scans over centers
/// `[-80, 80]` up to radius 64, margins of 4, and `Power(-0.3)` at `t = ½`
/// for the segment.
pub fn default_sweep(theorem: TheoremId, family: &InputFamily, cases: u64) -> Result<SweepReport> {
    let one = WeightSpec::constant(1.0)?;
    let bmo_scan = ScanRange::new(-80, 80, 64)?;
    match theorem {
        TheoremId::T3_2 => weak_type_sweep(Kind::Centered, &one, 0.5, family, cases, 256),
        TheoremId::T3_5 => weak_type_sweep(Kind::Riesz, &one, 0.5, family, cases, 256),
        TheoremId::T1_3 => strong_type_sweep(Kind::Centered, &one, 2.0, 0.25, family, cases),
        TheoremId::T1_4 => strong_type_sweep(Kind::Riesz, &one, 2.0, 0.25, family, cases),
        TheoremId::T4_1 => {
            let w = WeightSpec::power(-0.3)?;
            let seg = verify_theorem_4_1_segment(
                &w,
                0.5,
                &[0.5],
                std::slice::from_ref(family),
                cases,
                ScanRange::new(-16, 16, 1 << 12)?,
                ScanRange::screen(),
            )?;
            Ok(seg.sweeps.into_iter().next().expect("one sweep"))
        }
        TheoremId::T3_7 => bmo_sweep(&one, 0.5, family, cases, bmo_scan),
        TheoremId::C3_8 => bmo_norm_sweep(&one, 0.5, family, cases, bmo_scan),
        TheoremId::T4_3 => llogl_sweep(Kind::Centered, &one, 0.5, family, cases, 4),
        TheoremId::T4_5 => exp_sweep(&one, 0.5, 1.0, 3.0, family, cases, 4),
        TheoremId::L3_3 => lemma_3_3_sweep(family, cases, 8),
        TheoremId::L3_6 => {
            if !matches!(family.generator, Generator::Ramp | Generator::Monotone) {
                return Err(Error::Precondition(
                    "the monotone-support check needs the ramp or monotone family".into(),
                ));
            }
            lemma_3_6_sweep(family, cases, 8)
        }
        TheoremId::E4_8 => pointwise_bound_sweep(family, cases),
        TheoremId::R4_4 => general_bound_sweep(family, cases, 0.5, 0.25, 0.75),
    }
}

/// Empirical supremum of the theorem's ratio over the first `budget`
/// cases of `family`, in the default context of [`default_sweep`].
pub fn estimate_best_constant(
    theorem: TheoremId,
    family: &InputFamily,
    budget: u64,
) -> Result<ConstantEstimate> {
    Ok(default_sweep(theorem, family, budget)?.estimate)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::harness::report::Verdict;

    #[test]
    fn checkpoints_halve() {
        assert_eq!(case_checkpoints(10), vec![1, 2, 5, 10]);
        assert_eq!(case_checkpoints(1), vec![1]);
    }

    #[test]
    fn sweep_reduces_in_order() {
        let fam = InputFamily::new(Generator::Random, 3);
        let a = pointwise_bound_sweep(&fam, 64).unwrap();
        let b = pointwise_bound_sweep(&fam, 64).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.violations, 0);
        assert!(a.estimate.value <= 1.0);
        let idx = a.worst.witness.case.unwrap();
        assert_eq!(a.estimate.witness, EstimateWitness::Case { index: idx });
        assert_eq!(a.worst.witness.sequence.as_ref().unwrap(), &fam.case(idx));
        assert_eq!(a.estimate.trend.last().unwrap().extent, 64);
    }

    #[test]
    fn strict_defaults_stay_below_one() {
        for t in [TheoremId::L3_3, TheoremId::E4_8] {
            let fam = InputFamily::new(Generator::Random, 11);
            let e = estimate_best_constant(t, &fam, 40).unwrap();
            assert!(e.value <= 1.0, "{t}");
        }
        let fam = InputFamily::new(Generator::Monotone, 11);
        let s = default_sweep(TheoremId::L3_6, &fam, 40).unwrap();
        assert_eq!(s.violations, 0);
        assert_eq!(s.worst.verdict, Verdict::PassStrict);
        assert!(
            default_sweep(TheoremId::L3_6, &InputFamily::new(Generator::Random, 1), 4).is_err()
        );
    }

    #[test]
    fn enclosing_interval_contains_support() {
        let x = FiniteSequence::new(3, vec![1.0, 0.0, 2.0, 1.0]).unwrap();
        let s = enclosing_interval(&x, 0);
        assert!(s
            .to_interval()
            .contains_interval(&x.support_hull().unwrap()));
        assert_eq!(enclosing_interval(&x, 2).radius, s.radius + 2);
    }

    #[test]
    fn weak_sweep_homogeneous() {
        let w = WeightSpec::power(-0.2).unwrap();
        let fam = InputFamily::new(Generator::Random, 5);
        let x = fam.case(2);
        let e = scaling_relerr(&x, 3.7, |x| {
            verify_weak_type(
                Kind::Riesz,
                x,
                &w,
                0.5,
                &LambdaGrid::Jumps,
                window_around(x, 64),
            )
        })
        .unwrap();
        assert!(e < 1e-10, "{e}");
    }

    #[test]
    fn segment_rejects_t_one() {
        let w = WeightSpec::power(-0.3).unwrap();
        let scan = ScanRange::new(-2, 2, 4).unwrap();
        let fam = [InputFamily::new(Generator::Delta, 1)];
        assert!(verify_theorem_4_1_segment(&w, 0.5, &[1.0], &fam, 2, scan, scan).is_err());
    }
}
