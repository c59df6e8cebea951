use proptest::prelude::*;
use zharm::operators::{
    calpha_constant, maximal_centered, maximal_centered_witness, maximal_noncentral,
    maximal_noncentral_witness, operator_profile, pointwise_bound_check, pointwise_bound_general,
    riesz, Kind,
};
use zharm::{FiniteSequence, IntegerInterval};

fn iv(a: i64, b: i64) -> IntegerInterval {
    IntegerInterval::new(a, b).unwrap()
}

// Test-local brute force, independent of the crate's own oracles.

fn brute_centered(x: &FiniteSequence, alpha: f64, m: i64) -> f64 {
    let Some(h) = x.support_hull() else {
        return 0.0;
    };
    let reach = (m - h.lo()).abs().max((h.hi() - m).abs());
    (0..=2 * reach)
        .map(|n| {
            let s: f64 = (m - n..=m + n).map(|k| x.get(k).abs()).sum();
            s / ((2 * n + 1) as f64).powf(1.0 - alpha)
        })
        .fold(0.0, f64::max)
}

fn brute_noncentral(x: &FiniteSequence, alpha: f64, m: i64) -> f64 {
    let Some(h) = x.support_hull() else {
        return 0.0;
    };
    let (lo, hi) = (h.lo().min(m), h.hi().max(m));
    let mut best = 0.0f64;
    for a in lo..=m {
        for b in m..=hi {
            let s: f64 = (a..=b).map(|k| x.get(k).abs()).sum();
            best = best.max(s / ((b - a + 1) as f64).powf(1.0 - alpha));
        }
    }
    best
}

fn brute_riesz(x: &FiniteSequence, alpha: f64, k: i64) -> f64 {
    (x.offset()..x.offset() + x.len() as i64)
        .filter(|&i| i != k)
        .map(|i| x.get(i) / ((i - k).abs() as f64).powf(1.0 - alpha))
        .sum()
}

fn rel(a: f64, b: f64) -> f64 {
    if a == b {
        0.0
    } else {
        (a - b).abs() / a.abs().max(b.abs())
    }
}

#[test]
fn centered_examples() {
    let d = FiniteSequence::delta(0);
    assert_eq!(maximal_centered_witness(&d, 0.5, 0).unwrap(), (1.0, 0));
    let (v, n) = maximal_centered_witness(&d, 0.5, 1).unwrap();
    assert!((v - 3f64.powf(-0.5)).abs() < 1e-15);
    assert_eq!(n, 1);
    assert_eq!(
        maximal_centered(&FiniteSequence::zero(), 0.3, 5).unwrap(),
        0.0
    );
    assert!(maximal_centered(&d, 1.0, 0).is_err());
}

#[test]
fn noncentral_examples() {
    let d = FiniteSequence::delta(0);
    let (v, j) = maximal_noncentral_witness(&d, 0.5, 1).unwrap();
    assert!((v - 0.5f64.sqrt()).abs() < 1e-15);
    assert_eq!((j.lo(), j.hi()), (0, 1));
    assert_eq!(maximal_noncentral(&d, 0.0, 0).unwrap(), 1.0);
    assert_eq!(
        maximal_noncentral(&FiniteSequence::zero(), 0.5, 3).unwrap(),
        0.0
    );
}

#[test]
fn riesz_examples() {
    let d = FiniteSequence::delta(0);
    assert_eq!(riesz(&d, 0.5, 4).unwrap(), 0.5);
    assert_eq!(riesz(&d, 0.5, 0).unwrap(), 0.0);
    let x = FiniteSequence::indicator(iv(1, 2));
    assert!((riesz(&x, 0.5, 0).unwrap() - (1.0 + 0.5f64.sqrt())).abs() < 1e-15);
    assert!(riesz(&d, 0.0, 1).is_err());
}

#[test]
fn profile_examples() {
    let d = FiniteSequence::delta(0);
    let r = operator_profile(&d, 0.5, iv(-1, 1), Kind::Riesz).unwrap();
    assert_eq!(r.profile.values(), &[1.0, 0.0, 1.0]);
    let m = operator_profile(&d, 0.5, iv(0, 1), Kind::Centered).unwrap();
    assert_eq!(m.profile.values()[0], 1.0);
    assert!((m.profile.values()[1] - 3f64.powf(-0.5)).abs() < 1e-15);
    let z = operator_profile(&FiniteSequence::zero(), 0.5, iv(0, 3), Kind::Noncentral).unwrap();
    assert_eq!(z.profile.values(), &[0.0; 4]);
}

#[test]
fn closed_forms_for_delta() {
    let d = FiniteSequence::delta(0);
    for a in 1..=9 {
        let alpha = a as f64 / 10.0;
        for m in -100i64..=100 {
            let want = ((2 * m.abs() + 1) as f64).powf(alpha - 1.0);
            assert!(rel(maximal_centered(&d, alpha, m).unwrap(), want) <= 1e-12);
            let want = if m == 0 {
                0.0
            } else {
                (m.abs() as f64).powf(alpha - 1.0)
            };
            assert!(rel(riesz(&d, alpha, m).unwrap(), want) <= 1e-12);
        }
    }
}

#[test]
fn explicit_constant_examples() {
    let c = calpha_constant(0.5, 0.25).unwrap();
    let a = 12f64.powf(0.75) / (2f64.powf(0.25) - 1.0);
    let b = 12f64.powf(0.25) / (1.0 - 2f64.powf(-0.25));
    assert!((a - 34.076).abs() < 1e-3 && (b - 11.698).abs() < 1e-3);
    assert!((c - a.max(b)).abs() < 1e-12);
    assert!(calpha_constant(0.5, 0.6).is_err());
    let d = FiniteSequence::delta(0);
    let pb = pointwise_bound_check(&d, 0.5, 0.25, 4).unwrap();
    assert_eq!(pb.lhs, 0.5);
    assert!((pb.rhs - c / 3.0).abs() < 1e-12 && pb.holds);
    let z = pointwise_bound_check(&FiniteSequence::zero(), 0.5, 0.25, 2).unwrap();
    assert!(z.holds && z.lhs == 0.0 && z.rhs == 0.0);
    let g = pointwise_bound_general(&d, 0.5, 0.25, 0.75, 4).unwrap();
    assert!((g.bracket - 1.0 / 3.0).abs() < 1e-14);
    assert_eq!(
        pointwise_bound_general(&d, 0.5, 0.25, 0.75, 0).unwrap().lhs,
        0.0
    );
}

fn sequence(signed: bool) -> impl Strategy<Value = FiniteSequence> {
    let lo = if signed { -8.0 } else { 0.0 };
    ((-40i64..40), prop::collection::vec(lo..8.0f64, 1..48))
        .prop_map(|(o, v)| FiniteSequence::new(o, v).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn operators_match_brute_force(x in sequence(true), a in 0.0f64..0.99, m in -150i64..150) {
        prop_assert!(rel(maximal_centered(&x, a, m).unwrap(), brute_centered(&x, a, m)) <= 1e-10);
        prop_assert!(rel(maximal_noncentral(&x, a, m).unwrap(), brute_noncentral(&x, a, m)) <= 1e-10);
        let ar = a.max(0.01);
        let scale = brute_riesz(&x.abs(), ar, m);
        let e = (riesz(&x, ar, m).unwrap() - brute_riesz(&x, ar, m)).abs();
        prop_assert!(e <= 1e-10 * scale.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn comparability(x in sequence(true), a in 0.0f64..0.99, m in -150i64..150) {
        let c = maximal_centered(&x, a, m).unwrap();
        let nc = maximal_noncentral(&x, a, m).unwrap();
        let slack = 1.0 + 1e-12;
        prop_assert!(c <= nc * slack);
        prop_assert!(nc <= 2f64.powf(1.0 - a) * c * slack);
    }

    #[test]
    fn nonnegative_and_zero_only_for_zero(x in sequence(false), a in 0.0f64..0.99, m in -150i64..150) {
        let c = maximal_centered(&x, a, m).unwrap();
        prop_assert!(c >= 0.0);
        prop_assert_eq!(c == 0.0, x.is_zero());
    }

    #[test]
    fn riesz_is_linear(x in sequence(true), y in sequence(true), a in -3.0f64..3.0, b in -3.0f64..3.0, al in 0.05f64..0.95, k in -100i64..100) {
        let lhs = riesz(&x.combine(a, &y, b).unwrap(), al, k).unwrap();
        let rhs = a * riesz(&x, al, k).unwrap() + b * riesz(&y, al, k).unwrap();
        let scale = a.abs() * riesz(&x.abs(), al, k).unwrap() + b.abs() * riesz(&y.abs(), al, k).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-10 * scale.max(f64::MIN_POSITIVE));
    }

    #[test]
    fn translation_and_reflection(x in sequence(true), s in -200i64..200, al in 0.05f64..0.95) {
        let w = iv(-60, 60);
        let ws = iv(-60 + s, 60 + s);
        let wr = iv(-60, 60);
        for kind in [Kind::Centered, Kind::Noncentral, Kind::Riesz] {
            let p = operator_profile(&x, al, w, kind).unwrap().profile;
            let ps = operator_profile(&x.shift(s).unwrap(), al, ws, kind).unwrap().profile;
            let pr = operator_profile(&x.reflect(), al, wr, kind).unwrap().profile;
            for k in -60i64..=60 {
                prop_assert_eq!(p.get(k), ps.get(k + s));
                prop_assert_eq!(p.get(k), pr.get(-k));
            }
        }
    }

    #[test]
    fn pointwise_bound_holds(x in sequence(true), al in 0.05f64..0.95, u in 0.02f64..0.98, k in -150i64..150) {
        let eps = u * al.min(1.0 - al);
        prop_assert!(pointwise_bound_check(&x, al, eps, k).unwrap().holds);
    }
}
