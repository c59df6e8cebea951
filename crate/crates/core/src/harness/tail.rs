//! Certified `Σ_{k∈ℤ} |T x(k)|^q ω(k)^q` for finitely supported `x`.
//!
//! Near `p = 1` the summand decays like `|k|^{-(1+small)}`, so truncating at
//! any affordable window leaves a tail comparable to the head. Instead the
//! sum is split into an explicit head and two far fields. On each far field
//! the summand has the form `A z^{-σ} G(1/z)` with `z = k - c` and `G`
//! analytic near 0:
//!
//! - centered maximal: `M x(k) = ‖x‖₁ (2(k - lo) + 1)^{α-1}` exactly once
//!   `k - hi >= d₁`, where `d₁` is computed from suffix sums;
//! - Riesz potential: the multipole series
//!   `Σ_n ((1-α)_n / n!) (Σ_i x_i (i-c)^n) z^{-n}`.
//!
//! `G` is expanded to a fixed order, each term is summed with a Hurwitz
//! zeta value, and the truncated series is bounded by Cauchy estimates on a
//! disc where `G` is controlled.

use crate::error::{Error, Result};
use crate::lattice::{CompensatedSum, FiniteSequence, IntegerInterval, WeightSpec};
use crate::operators::{operator_profile, Kind};

/// Largest explicit head the engine will evaluate.
pub const MAX_HEAD_LEN: u64 = 1 << 22;

const SERIES_ORDER: usize = 30;

/// Head plus certified far fields of a weighted power sum.
#[derive(Clone, Copy, Debug, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct CertifiedSum {
    pub head: f64,
    pub left: f64,
    pub right: f64,
    /// Absolute bound on the error of `head + left + right`.
    pub error: f64,
    /// Indices summed explicitly.
    pub window: IntegerInterval,
}

impl CertifiedSum {
    pub fn total(&self) -> f64 {
        self.head + self.left + self.right
    }

    /// `total^{1/q}`.
    pub fn norm(&self, q: f64) -> f64 {
        self.total().powf(1.0 / q)
    }

    /// `error / head`.
    pub fn relative_error(&self) -> f64 {
        self.error / self.head
    }
}

const BERNOULLI: [f64; 12] = [
    1.0 / 6.0,
    -1.0 / 30.0,
    1.0 / 42.0,
    -1.0 / 30.0,
    5.0 / 66.0,
    -691.0 / 2730.0,
    7.0 / 6.0,
    -3617.0 / 510.0,
    43867.0 / 798.0,
    -174611.0 / 330.0,
    854513.0 / 138.0,
    -236364091.0 / 2730.0,
];

/// `ζ(s, a) = Σ_{k>=0} (a + k)^{-s}` and an absolute error bound, for
/// `s > 1`, `a > 0`.
///
/// Direct terms until `a + M >= s + 16`, then Euler–Maclaurin; since
/// `x^{-s}` is completely monotone the remainder is bounded by the first
/// omitted correction.
pub fn hurwitz_zeta(s: f64, a: f64) -> Result<(f64, f64)> {
    if !(s > 1.0 && s.is_finite()) {
        return Err(Error::Parameter {
            name: "s",
            value: s,
            range: "(1, ∞)",
        });
    }
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Parameter {
            name: "a",
            value: a,
            range: "(0, ∞)",
        });
    }
    let target = s + 16.0;
    let m = if a >= target {
        0
    } else {
        (target - a).ceil() as usize
    };
    let mut sum = CompensatedSum::new();
    for k in 0..m {
        sum.add((a + k as f64).powf(-s));
    }
    let big = a + m as f64;
    let lead = big.powf(-s);
    sum.add(big.powf(1.0 - s) / (s - 1.0));
    sum.add(0.5 * lead);
    // term_j = B_{2j}/(2j)! · s(s+1)…(s+2j-2) · A^{-s-2j+1}
    let mut rising = s;
    let mut fact = 2.0;
    let mut pow = lead / big;
    let mut last = 0.0;
    for (j, b) in BERNOULLI.iter().enumerate() {
        if j > 0 {
            let n = 2 * j as u32;
            rising *= (s + n as f64 - 1.0) * (s + n as f64);
            fact *= (n as f64 + 1.0) * (n as f64 + 2.0);
            pow /= big * big;
        }
        let term = b / fact * rising * pow;
        if j + 1 == BERNOULLI.len() {
            last = term.abs();
        } else {
            sum.add(term);
        }
    }
    let v = sum.value();
    Ok((v, last + 4.0 * f64::EPSILON * v * (m as f64 + 8.0)))
}

/// Coefficients of `b(w)^q` from those of `b` (`b₀ > 0`), by the power
/// recurrence `n b₀ c_n = Σ_{k=1}^n (qk - n + k) b_k c_{n-k}`.
fn series_pow(b: &[f64], q: f64, order: usize) -> Vec<f64> {
    let mut c = vec![0.0; order + 1];
    c[0] = b[0].powf(q);
    for n in 1..=order {
        let mut acc = CompensatedSum::new();
        for k in 1..=n.min(b.len() - 1) {
            acc.add(((q + 1.0) * k as f64 - n as f64) * b[k] * c[n - k]);
        }
        c[n] = acc.value() / (n as f64 * b[0]);
    }
    c
}

/// Coefficients of `(1 + e w)^γ`.
fn binomial_series(e: f64, gamma: f64, order: usize) -> Vec<f64> {
    let mut d = vec![0.0; order + 1];
    d[0] = 1.0;
    for n in 1..=order {
        d[n] = d[n - 1] * (gamma - n as f64 + 1.0) / n as f64 * e;
    }
    d
}

fn series_mul(a: &[f64], b: &[f64], order: usize) -> Vec<f64> {
    (0..=order)
        .map(|n| {
            (0..=n)
                .filter(|&k| k < a.len() && n - k < b.len())
                .map(|k| a[k] * b[n - k])
                .collect::<CompensatedSum>()
                .value()
        })
        .collect()
}

/// A right far field `Σ_{k >= start} A z^{-σ} G(1/z)`, `z = k - c`.
struct FarSum {
    start: i64,
    sum: f64,
    error: f64,
}

/// Smallest `d >= 1` with `M x(hi + d)` attained by the window covering the
/// whole support, for every larger `d` as well.
fn full_cover_distance(x: &FiniteSequence, alpha: f64) -> Result<u64> {
    let h = x.support_hull().expect("non-zero input");
    let len = (h.hi() - h.lo()) as usize;
    let s = 1.0 - alpha;
    let mut suffix = Vec::with_capacity(len + 1);
    let mut acc = CompensatedSum::new();
    for t in 0..=len {
        acc.add(x.get(h.hi() - t as i64).abs());
        suffix.push(acc.value());
    }
    let total = suffix[len];
    let mut d = 1.0f64;
    for (t, &st) in suffix.iter().enumerate().take(len) {
        let rho = (total / st).powf(1.0 / s);
        if !(rho > 1.0) {
            return Err(Error::TailNotCertified(
                "support edge mass below resolution".into(),
            ));
        }
        let cross = ((2 * len + 1) as f64 - rho * (2 * t + 1) as f64) / (2.0 * (rho - 1.0));
        d = d.max(cross);
    }
    if !(d < MAX_HEAD_LEN as f64) {
        return Err(Error::TailNotCertified(format!(
            "far field starts beyond {MAX_HEAD_LEN} points"
        )));
    }
    Ok(d.ceil() as u64 + 1)
}

fn right_far_sum(
    x: &FiniteSequence,
    alpha: f64,
    kind: Kind,
    w: &WeightSpec,
    q: f64,
    min_start: i64,
) -> Result<FarSum> {
    let h = x.support_hull().expect("non-zero input");
    let s = 1.0 - alpha;
    let l1 = x.l1_norm();
    let ff = w.right_far_field();
    let gamma = q * ff.beta;

    // z = k - c; base series B(1/z) with |T x(k)| = |B| z^{-s}.
    let (c, base, h_rad, start_kind) = match kind {
        Kind::Centered => {
            let d1 = full_cover_distance(x, alpha)?;
            (
                h.lo() as f64 - 0.5,
                vec![l1 * 2f64.powf(-s)],
                0.0,
                h.hi() + d1 as i64,
            )
        }
        Kind::Riesz => {
            let c = 0.5 * (h.lo() as f64 + h.hi() as f64);
            let mut mu = vec![0.0; SERIES_ORDER + 1];
            let mut coef = 1.0;
            for (n, m) in mu.iter_mut().enumerate() {
                if n > 0 {
                    coef *= (s + n as f64 - 1.0) / n as f64;
                }
                *m = coef
                    * x.nonzero()
                        .map(|(i, v)| v * (i as f64 - c).powi(n as i32))
                        .collect::<CompensatedSum>()
                        .value();
            }
            (c, mu, 0.5 * (h.hi() - h.lo()) as f64, h.hi() + 1)
        }
        Kind::Noncentral => {
            return Err(Error::TailNotCertified(
                "no closed far field for the noncentral operator".into(),
            ))
        }
    };
    let b0 = base[0];
    if b0 == 0.0 || !b0.is_finite() {
        return Err(Error::TailNotCertified(
            "far field has vanishing leading term".into(),
        ));
    }
    let sign = b0.signum();
    let norm_base: Vec<f64> = base.iter().map(|v| sign * v / b0.abs()).collect();
    let e = c + 1.0 - ff.k0 as f64;

    // Radius on which |B/b₀ - 1| <= ū <= 1/2 and |e w| <= 1/2.
    let mut r = 1.0f64;
    let mut u_bar = 0.0;
    if h_rad > 0.0 {
        let tau = b0.abs() / (2.0 * l1);
        r = r.min((1.0 - (1.0 + tau).powf(-1.0 / s)) / h_rad);
        u_bar = l1 * ((1.0 - h_rad * r).powf(-s) - 1.0) / b0.abs();
    }
    if gamma != 0.0 && e != 0.0 {
        r = r.min(0.5 / e.abs());
    }
    let start = [
        start_kind,
        ff.from,
        min_start,
        (c + 4.0 / r).ceil() as i64,
        h.hi() + 1,
    ]
    .into_iter()
    .max()
    .unwrap();
    let z0 = start as f64 - c;
    let sigma = s * q - gamma;
    if !(sigma > 1.0) {
        return Err(Error::TailNotCertified(format!(
            "weighted far field decays like |k|^-{sigma}"
        )));
    }

    let g = series_mul(
        &series_pow(&norm_base, q, SERIES_ORDER),
        &binomial_series(e, gamma, SERIES_ORDER),
        SERIES_ORDER,
    );
    let amp = ff.scale.powf(q) * b0.abs().powf(q);
    let mut total = CompensatedSum::new();
    let mut err = 0.0;
    let mut mag = 0.0;
    for (n, gn) in g.iter().enumerate() {
        if *gn == 0.0 {
            continue;
        }
        let (z, ze) = hurwitz_zeta(sigma + n as f64, z0)?;
        total.add(gn * z);
        err += gn.abs() * ze;
        mag += (gn * z).abs();
    }
    let bmax = (1.0 + u_bar).powf(q)
        * (1.0 + e.abs() * r)
            .powf(gamma)
            .max((1.0 - e.abs() * r).powf(gamma));
    let w0 = 1.0 / z0;
    let (zr, zre) = hurwitz_zeta(sigma + SERIES_ORDER as f64 + 1.0, z0)?;
    let remainder = bmax * r.powi(-(SERIES_ORDER as i32) - 1) / (1.0 - w0 / r) * (zr + zre);
    err += remainder + 8.0 * f64::EPSILON * mag * SERIES_ORDER as f64;
    Ok(FarSum {
        start,
        sum: amp * total.value(),
        error: amp * err,
    })
}

/// `Σ_{k∈ℤ} |T x(k)|^q ω(k)^q` for the centered maximal operator or the
/// Riesz potential.
pub fn certified_power_sum(
    x: &FiniteSequence,
    alpha: f64,
    kind: Kind,
    w: &WeightSpec,
    q: f64,
) -> Result<CertifiedSum> {
    certified_power_sum_with_reach(x, alpha, kind, w, q, 0)
}

/// As [`certified_power_sum`], with the explicit head extending at least
/// `reach` points beyond the support on each side.
pub fn certified_power_sum_with_reach(
    x: &FiniteSequence,
    alpha: f64,
    kind: Kind,
    w: &WeightSpec,
    q: f64,
    reach: u64,
) -> Result<CertifiedSum> {
    if !(q > 1.0 && q.is_finite()) {
        return Err(Error::Parameter {
            name: "q",
            value: q,
            range: "(1, ∞)",
        });
    }
    // Validates alpha for the operator.
    operator_profile(
        &FiniteSequence::zero(),
        alpha,
        IntegerInterval::new(0, 0)?,
        kind,
    )?;
    let x = x.trimmed();
    let Some(h) = x.support_hull() else {
        return Err(Error::ZeroInput("certified sums need a nonzero input"));
    };
    let right = right_far_sum(&x, alpha, kind, w, q, h.hi() + reach as i64 + 1)?;
    let xr = x.reflect();
    let left = right_far_sum(
        &xr,
        alpha,
        kind,
        &w.reflect(),
        q,
        -h.lo() + reach as i64 + 1,
    )?;
    let window = IntegerInterval::new(-left.start + 1, right.start - 1)?;
    if window.len() > MAX_HEAD_LEN {
        return Err(Error::TailNotCertified(format!(
            "head of {} points exceeds {MAX_HEAD_LEN}",
            window.len()
        )));
    }
    let prof = operator_profile(&x, alpha, window, kind)?;
    let head: CompensatedSum = prof
        .profile
        .iter()
        .map(|(k, v)| v.abs().powf(q) * w.eval_pow(k, q))
        .collect();
    let head = head.value();
    let error = left.error + right.error + 4.0 * f64::EPSILON * head * (window.len() as f64).sqrt();
    let out = CertifiedSum {
        head,
        left: left.sum,
        right: right.sum,
        error,
        window,
    };
    if !out.total().is_finite() {
        return Err(Error::Range {
            lo: window.lo(),
            hi: window.hi(),
        });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::operators::{maximal_centered, maximal_centered_witness, riesz};

    #[test]
    fn zeta_reference_values() {
        let (z2, e2) = hurwitz_zeta(2.0, 1.0).unwrap();
        assert!((z2 - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-14);
        assert!(e2 < 1e-13);
        let (z3, _) = hurwitz_zeta(3.0, 1.0).unwrap();
        assert!((z3 - 1.2020569031595942).abs() < 1e-14);
        let (a, _) = hurwitz_zeta(1.5, 10.0).unwrap();
        let (b, _) = hurwitz_zeta(1.5, 11.0).unwrap();
        assert!((a - b - 10f64.powf(-1.5)).abs() < 1e-14);
        let (h, _) = hurwitz_zeta(1.01, 1e5).unwrap();
        let direct: f64 = (0..1000).map(|k| (1e5 + k as f64).powf(-1.01)).sum();
        let (rest, _) = hurwitz_zeta(1.01, 1e5 + 1000.0).unwrap();
        assert!((h - direct - rest).abs() < 1e-12 * h);
    }

    #[test]
    fn power_series_recurrence() {
        // (1 + w)^{1/2}
        let c = series_pow(&[1.0, 1.0], 0.5, 4);
        let want = [1.0, 0.5, -0.125, 0.0625, -0.0390625];
        for (a, b) in c.iter().zip(want) {
            assert!((a - b).abs() < 1e-15);
        }
        let d = binomial_series(2.0, 0.5, 4);
        let want = [1.0, 1.0, -0.5, 0.5, -0.625];
        for (a, b) in d.iter().zip(want) {
            assert!((a - b).abs() < 1e-14);
        }
    }

    #[test]
    fn full_cover_distance_is_exact() {
        let x = FiniteSequence::new(-2, vec![0.3, 0.0, 1.0, 2.0, 0.1, 5.0]).unwrap();
        for alpha in [0.1, 0.5, 0.8] {
            let d1 = full_cover_distance(&x, alpha).unwrap();
            for d in d1..d1 + 50 {
                let k = 3 + d as i64;
                let (_, n) = maximal_centered_witness(&x, alpha, k).unwrap();
                assert_eq!(n, (k + 2) as u64, "alpha {alpha} d {d}");
            }
        }
    }

    #[test]
    fn far_fields_agree_with_explicit_heads() {
        let x = FiniteSequence::new(3, vec![1.0, 0.5, 0.0, 2.0]).unwrap();
        for (kind, w) in [
            (Kind::Centered, WeightSpec::power(0.2).unwrap()),
            (Kind::Riesz, WeightSpec::shifted_power(-0.1, 7).unwrap()),
            (
                Kind::Riesz,
                WeightSpec::tabulated(0, vec![1.0, 2.0, 0.5]).unwrap(),
            ),
        ] {
            let a = certified_power_sum(&x, 0.5, kind, &w, 4.0).unwrap();
            let b = certified_power_sum_with_reach(&x, 0.5, kind, &w, 4.0, 20_000).unwrap();
            assert!(a.relative_error() < 1e-10, "{kind:?} {a:?}");
            assert!(b.window.len() > a.window.len());
            let diff = (a.total() - b.total()).abs();
            assert!(
                diff <= a.error + b.error + 1e-13 * a.total(),
                "{kind:?} {diff}"
            );
        }
    }

    #[test]
    fn brute_force_partial_sums_approach_total() {
        let x = FiniteSequence::new(-1, vec![1.0, 2.0]).unwrap();
        let w = WeightSpec::constant(1.0).unwrap();
        let q = 4.0;
        let cert = certified_power_sum(&x, 0.5, Kind::Riesz, &w, q).unwrap();
        let lim = 200_000i64;
        let brute: f64 = (-lim..=lim)
            .map(|k| riesz(&x, 0.5, k).unwrap().abs().powf(q))
            .collect::<CompensatedSum>()
            .value();
        // |I x(k)|^4 ≈ 81 k^-2 far out, so each side leaves about 81/lim
        let gap = cert.total() - brute;
        let want = 162.0 / lim as f64;
        assert!((gap - want).abs() < 1e-2 * want, "{gap}");
        let certm = certified_power_sum(&x, 0.5, Kind::Centered, &w, q).unwrap();
        let brute: f64 = (-lim..=lim)
            .map(|k| maximal_centered(&x, 0.5, k).unwrap().powf(q))
            .collect::<CompensatedSum>()
            .value();
        // M x(k)^4 ≈ (81/4) k^-2
        let gap = certm.total() - brute;
        let want = 40.5 / lim as f64;
        assert!((gap - want).abs() < 1e-2 * want, "{gap}");
    }

    #[test]
    fn rejects_divergent_tails() {
        let x = FiniteSequence::delta(0);
        let w = WeightSpec::power(0.5).unwrap();
        assert!(matches!(
            certified_power_sum(&x, 0.5, Kind::Riesz, &w, 2.0),
            Err(Error::TailNotCertified(_))
        ));
        assert!(certified_power_sum(&FiniteSequence::zero(), 0.5, Kind::Riesz, &w, 2.0).is_err());
    }
}
