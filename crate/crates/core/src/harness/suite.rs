//! The acceptance battery: ten criteria, each with a deterministic report.
//!
//! Reports contain no timings, so identical configurations produce
//! identical files regardless of thread count. Wall-clock limits are kept
//! next to each outcome and judged separately.

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::baseline::{BaselineFile, BaselineStatus};
use super::checks::{
    verify_bmo, verify_llogl, verify_strong_type, verify_sufficiency_construction,
    verify_weak_type, weak_type_series, LambdaGrid,
};
use super::family::{case_rng, Generator, InputFamily};
use super::report::{SweepReport, Verdict};
use super::sweeps::{
    bmo_norm_sweep, bmo_sweep, enclosing_interval, exp_sweep, lemma_3_3_sweep, lemma_3_6_sweep,
    llogl_sweep, pointwise_bound_sweep, scaling_relerr, strong_type_sweep,
    verify_theorem_4_1_segment, weak_type_sweep,
};
use crate::covering::{overlap_profile, select_cover};
use crate::error::{Error, Result};
use crate::functionals::{llogl_functional, oscillation};
use crate::lattice::{Exponent, FiniteSequence, SymmetricInterval, WeightSpec};
use crate::operators::oracle::{maximal_oracle, noncentral_oracle, riesz_oracle};
use crate::operators::{maximal_centered, maximal_noncentral, operator_profile, riesz, Kind};
use crate::weights::{duality_identity_check, screen, Bracket, ScanRange, Screen};

/// Report files carry this version.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OperatorSuite {
    pub cases: u64,
    pub max_len: usize,
    pub points: u32,
    pub tolerance: f64,
    pub time_limit_secs: f64,
}

impl Default for OperatorSuite {
    fn default() -> Self {
        Self {
            cases: 1000,
            max_len: 64,
            points: 8,
            tolerance: 1e-10,
            time_limit_secs: 10.0,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClosedFormSuite {
    pub radius: i64,
    pub tolerance: f64,
}

impl Default for ClosedFormSuite {
    fn default() -> Self {
        Self {
            radius: 100,
            tolerance: 1e-12,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StrictSuite {
    pub pointwise_cases: u64,
    pub lemma_3_3_cases: u64,
    pub lemma_3_3_margin: u64,
    pub lemma_3_6_cases: u64,
    pub lemma_3_6_margin: u64,
}

impl Default for StrictSuite {
    fn default() -> Self {
        Self {
            pointwise_cases: 10_000,
            lemma_3_3_cases: 10_000,
            lemma_3_3_margin: 4,
            lemma_3_6_cases: 1000,
            lemma_3_6_margin: 8,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DualitySuite {
    pub cases: u64,
    pub tolerance: f64,
}

impl Default for DualitySuite {
    fn default() -> Self {
        Self {
            cases: 1000,
            tolerance: 1e-9,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoveringSuite {
    pub families: u64,
    pub max_intervals: usize,
    pub max_radius: u64,
    pub spread: i64,
}

impl Default for CoveringSuite {
    fn default() -> Self {
        Self {
            families: 1000,
            max_intervals: 1000,
            max_radius: 1000,
            spread: 1000,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeakSuite {
    pub betas: Vec<f64>,
    pub counter_beta: f64,
    pub cases: u64,
    pub radius: u64,
    pub counter_radii: Vec<u64>,
    pub counter_min_growth: f64,
}

impl Default for WeakSuite {
    fn default() -> Self {
        Self {
            betas: vec![0.0, -0.2, -0.4],
            counter_beta: 0.5,
            cases: 200,
            radius: 1000,
            counter_radii: vec![10, 100, 1000],
            counter_min_growth: 2.0,
        }
    }
}

/// One strong-type configuration: `α`, `p` and power exponents `β`
/// (`β = 0` is the constant weight).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StrongCase {
    pub alpha: f64,
    pub p: f64,
    pub betas: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StrongSuite {
    pub configs: Vec<StrongCase>,
    pub cases: u64,
    pub scaling_cases: u64,
    pub scaling_factor: f64,
    pub scaling_tolerance: f64,
    pub segment_beta: f64,
    pub segment_alpha: f64,
    pub segment_t: Vec<f64>,
    pub segment_cases: u64,
    pub rh_n_max: u64,
    pub rh_centers: i64,
}

impl Default for StrongSuite {
    fn default() -> Self {
        Self {
            configs: vec![
                StrongCase {
                    alpha: 0.25,
                    p: 2.0,
                    betas: vec![0.0, -0.1, 0.2],
                },
                StrongCase {
                    alpha: 0.5,
                    p: 1.2,
                    betas: vec![0.0, -0.2],
                },
            ],
            cases: 40,
            scaling_cases: 5,
            scaling_factor: 3.7,
            scaling_tolerance: 1e-10,
            segment_beta: -0.3,
            segment_alpha: 0.5,
            segment_t: vec![0.0, 0.25, 0.5, 0.75],
            segment_cases: 20,
            rh_n_max: 1 << 12,
            rh_centers: 16,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OscillationSuite {
    pub bmo_betas: Vec<f64>,
    pub bmo_cases: u64,
    pub bmo_centers: i64,
    pub bmo_n_max: u64,
    pub llogl_betas: Vec<f64>,
    pub llogl_cases: u64,
    pub llogl_margin: u64,
    pub llogl_scalings: u32,
    pub exp_betas: Vec<f64>,
    pub exp_cases: u64,
    pub exp_margin: u64,
    pub exp_delta: f64,
    pub exp_q: f64,
}

impl Default for OscillationSuite {
    fn default() -> Self {
        Self {
            bmo_betas: vec![0.0, 0.2, 0.4],
            bmo_cases: 30,
            bmo_centers: 80,
            bmo_n_max: 64,
            llogl_betas: vec![0.0, -0.2, -0.4],
            llogl_cases: 100,
            llogl_margin: 4,
            llogl_scalings: 10,
            exp_betas: vec![0.0, 0.2],
            exp_cases: 100,
            exp_margin: 4,
            exp_delta: 1.0,
            exp_q: 3.0,
        }
    }
}

/// Everything the battery needs; the default is the full acceptance scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SuiteConfig {
    pub seed: u64,
    /// Centers are `[-screen_centers, screen_centers]`.
    pub screen_centers: i64,
    pub screen_n_max: u64,
    pub operators: OperatorSuite,
    pub closed_forms: ClosedFormSuite,
    pub strict: StrictSuite,
    pub duality: DualitySuite,
    pub covering: CoveringSuite,
    pub weak: WeakSuite,
    pub strong: StrongSuite,
    pub oscillation: OscillationSuite,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        let s = ScanRange::screen();
        Self {
            seed: 2024,
            screen_centers: s.centers.hi(),
            screen_n_max: s.n_max,
            operators: OperatorSuite::default(),
            closed_forms: ClosedFormSuite::default(),
            strict: StrictSuite::default(),
            duality: DualitySuite::default(),
            covering: CoveringSuite::default(),
            weak: WeakSuite::default(),
            strong: StrongSuite::default(),
            oscillation: OscillationSuite::default(),
        }
    }
}

impl SuiteConfig {
    /// Fewer cases for smoke tests. The weight screens keep their full scan,
    /// since a shorter one misclassifies the slowly saturating weights.
    pub fn small() -> Self {
        let mut c = Self::default();
        c.operators.cases = 50;
        c.closed_forms.radius = 20;
        c.strict.pointwise_cases = 200;
        c.strict.lemma_3_3_cases = 200;
        c.strict.lemma_3_6_cases = 100;
        c.duality.cases = 100;
        c.covering.families = 50;
        c.covering.max_intervals = 100;
        c.weak.cases = 10;
        c.weak.radius = 200;
        c.strong.cases = 5;
        c.strong.scaling_cases = 2;
        c.strong.segment_t = vec![0.0, 0.5];
        c.strong.segment_cases = 4;
        c.strong.rh_n_max = 1 << 9;
        c.strong.rh_centers = 4;
        c.oscillation.bmo_cases = 5;
        c.oscillation.bmo_centers = 20;
        c.oscillation.bmo_n_max = 16;
        c.oscillation.llogl_cases = 10;
        c.oscillation.llogl_scalings = 4;
        c.oscillation.exp_cases = 10;
        c
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Precondition(format!("config: {e}")))
    }

    fn screen_scan(&self) -> Result<ScanRange> {
        ScanRange::new(-self.screen_centers, self.screen_centers, self.screen_n_max)
    }
}

/// The verdict of one criterion.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CriterionOutcome {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub detail: String,
    #[serde(skip)]
    pub elapsed: Duration,
    #[serde(skip)]
    pub time_limit: Option<Duration>,
}

impl CriterionOutcome {
    pub fn within_time(&self) -> bool {
        self.time_limit.is_none_or(|l| self.elapsed <= l)
    }

    /// Passed and, where a wall-clock limit applies, within it.
    pub fn accepted(&self) -> bool {
        self.passed && self.within_time()
    }
}

/// Outcomes, report files (name to contents) and the baselined sweeps.
#[derive(Clone, Debug, Default)]
pub struct SuiteOutcome {
    pub criteria: Vec<CriterionOutcome>,
    pub files: BTreeMap<String, String>,
    pub plots: BTreeMap<String, String>,
    pub sweeps: Vec<SweepReport>,
    pub unbaselined: u64,
    pub regressions: u64,
}

impl SuiteOutcome {
    pub fn all_accepted(&self) -> bool {
        self.criteria.iter().all(CriterionOutcome::accepted)
    }
}

struct Ctx<'a> {
    cfg: &'a SuiteConfig,
    baselines: &'a BaselineFile,
    sweeps: Vec<SweepReport>,
    unbaselined: u64,
    regressions: u64,
    plots: BTreeMap<String, String>,
}

/// Counts of one group of baselined sweeps.
#[derive(Default)]
struct Tally {
    sweeps: u64,
    worst: f64,
    regressions: u64,
    unbaselined: u64,
    nonfinite: u64,
}

impl Tally {
    fn ok(&self) -> bool {
        self.regressions == 0 && self.nonfinite == 0
    }

    fn describe(&self) -> String {
        format!(
            "{} sweeps, worst ratio {}, {} non-finite, {} regressions, {} unbaselined",
            self.sweeps, self.worst, self.nonfinite, self.regressions, self.unbaselined
        )
    }
}

impl Ctx<'_> {
    fn judge(&mut self, s: SweepReport, tally: &mut Tally) -> Value {
        let status = self.baselines.check(&s);
        tally.sweeps += 1;
        let v = s.estimate.value;
        if v.is_finite() {
            tally.worst = tally.worst.max(v);
        } else {
            tally.nonfinite += 1;
        }
        match status {
            BaselineStatus::Unbaselined => {
                tally.unbaselined += 1;
                self.unbaselined += 1;
            }
            BaselineStatus::Regression { .. } => {
                tally.regressions += 1;
                self.regressions += 1;
            }
            BaselineStatus::Match { .. } => {}
        }
        let out = json!({ "sweep": &s, "baseline": status });
        self.sweeps.push(s);
        out
    }
}

fn weight_of(beta: f64) -> Result<WeightSpec> {
    if beta == 0.0 {
        WeightSpec::constant(1.0)
    } else {
        WeightSpec::power(beta)
    }
}

fn ap1q(alpha: f64) -> Bracket {
    Bracket::Apq {
        p: 1.0,
        q: Exponent::Finite(1.0 / (1.0 - alpha)),
    }
}

fn ap_inf(alpha: f64) -> Bracket {
    Bracket::Apq {
        p: 1.0 / alpha,
        q: Exponent::Infinite,
    }
}

/// Screen plus the duality identities on the screen's witness and a few
/// fixed intervals.
fn screened(w: &WeightSpec, b: Bracket, scan: ScanRange) -> Result<(Screen, f64)> {
    let s = screen(b, w, scan)?;
    let (p, q) = match b {
        Bracket::Apq { p, q } => (p, q),
        Bracket::Ap { p } => (p, Exponent::Finite(p)),
        Bracket::ReverseHolder { .. } => return Ok((s, 0.0)),
    };
    let mut intervals = vec![
        SymmetricInterval::new(0, 0),
        SymmetricInterval::new(0, 10),
        SymmetricInterval::new(5, 100),
    ];
    if let crate::weights::EstimateWitness::Interval { center, radius } = s.estimate.witness {
        intervals.push(SymmetricInterval::new(center, radius));
    }
    let mut worst = 0.0f64;
    for i in intervals {
        worst = worst.max(duality_identity_check(w, p, q, i)?.relerr);
    }
    Ok((s, worst))
}

fn screen_json(w: &WeightSpec, s: &Screen, duality: f64) -> Value {
    json!({
        "weight": w,
        "screen": s,
        "duality_relerr": duality,
    })
}

const DUALITY_IN_SCREENS: f64 = 1e-9;

fn families(seed: u64, gens: &[Generator]) -> Vec<InputFamily> {
    gens.iter().map(|&g| InputFamily::new(g, seed)).collect()
}

type Body = Result<(bool, String, Value)>;

fn c1_operators(ctx: &mut Ctx) -> Body {
    let c = &ctx.cfg.operators;
    let fam = InputFamily::new(Generator::Random, ctx.cfg.seed).with_sizes(c.max_len, 64, 8.0);
    let rows: Vec<[(f64, u64); 3]> = (0..c.cases)
        .into_par_iter()
        .map(|i| -> Result<[(f64, u64); 3]> {
            let mut rng = fam.aux_rng(i);
            let mut x = fam.case(i);
            if rng.random_bool(0.5) {
                let v = x
                    .values()
                    .iter()
                    .map(|&v| if rng.random_bool(0.5) { -v } else { v })
                    .collect();
                x = FiniteSequence::new(x.offset(), v)?;
            }
            let mut worst = [(0.0f64, i); 3];
            let Some(h) = x.support_hull() else {
                return Ok(worst);
            };
            let am = rng.random_range(0.0..1.0);
            let ar = rng.random_range(0.01..0.99);
            let ax = x.abs();
            let span = h.len() as i64;
            let rel = |a: f64, b: f64, scale: f64| {
                if a == b {
                    0.0
                } else {
                    (a - b).abs() / scale
                }
            };
            for _ in 0..c.points {
                let m = rng.random_range(h.lo() - span..=h.hi() + span);
                let cover = m.abs_diff(h.lo()).max(m.abs_diff(h.hi()));
                let o = maximal_oracle(&x, am, m, 2 * cover)?;
                let e0 = rel(maximal_centered(&x, am, m)?, o, o);
                let o = noncentral_oracle(&x, am, m)?;
                let e1 = rel(maximal_noncentral(&x, am, m)?, o, o);
                let o = riesz_oracle(&x, ar, m)?;
                let scale = riesz_oracle(&ax, ar, m)?;
                let e2 = rel(riesz(&x, ar, m)?, o, scale);
                for (slot, e) in worst.iter_mut().zip([e0, e1, e2]) {
                    if e > slot.0 {
                        slot.0 = e;
                    }
                }
            }
            Ok(worst)
        })
        .collect::<Result<_>>()?;
    let mut worst = [(0.0f64, 0u64); 3];
    for r in rows {
        for (w, e) in worst.iter_mut().zip(r) {
            if e.0 > w.0 {
                *w = e;
            }
        }
    }
    let names = ["maximal_centered", "maximal_noncentral", "riesz"];
    let passed = worst.iter().all(|w| w.0 <= c.tolerance);
    let detail = format!(
        "{} sequences x {} points; worst relative errors {:.3e} / {:.3e} / {:.3e} (tolerance {:e})",
        c.cases, c.points, worst[0].0, worst[1].0, worst[2].0, c.tolerance
    );
    let data: BTreeMap<&str, Value> = names
        .iter()
        .zip(worst)
        .map(|(n, (e, i))| (*n, json!({ "relerr": e, "case": i })))
        .collect();
    Ok((passed, detail, json!(data)))
}

fn c2_closed_forms(ctx: &mut Ctx) -> Body {
    let c = &ctx.cfg.closed_forms;
    let d = FiniteSequence::delta(0);
    let mut worst = (0.0f64, 0.0f64);
    for a in 1..=9 {
        let alpha = a as f64 / 10.0;
        for m in -c.radius..=c.radius {
            let want = ((2 * m.abs() + 1) as f64).powf(alpha - 1.0);
            let got = maximal_centered(&d, alpha, m)?;
            worst.0 = worst.0.max((got - want).abs() / want);
            let want = if m == 0 {
                0.0
            } else {
                (m.abs() as f64).powf(alpha - 1.0)
            };
            let got = riesz(&d, alpha, m)?;
            let e = if want == 0.0 {
                got.abs()
            } else {
                (got - want).abs() / want
            };
            worst.1 = worst.1.max(e);
        }
    }
    let passed = worst.0 <= c.tolerance && worst.1 <= c.tolerance;
    let detail = format!(
        "alpha in 0.1..0.9, |m| <= {}; worst errors {:.3e} (maximal) / {:.3e} (riesz)",
        c.radius, worst.0, worst.1
    );
    Ok((
        passed,
        detail,
        json!({ "maximal": worst.0, "riesz": worst.1 }),
    ))
}

fn strict_body(s: SweepReport) -> Body {
    let passed = s.violations == 0 && s.estimate.value <= 1.0 + crate::STRICT_SLACK;
    let detail = format!(
        "{} cases of family {}; {} violations, worst ratio {}",
        s.cases, s.family, s.violations, s.estimate.value
    );
    Ok((passed, detail, json!({ "sweeps": [s] })))
}

fn c3_pointwise(ctx: &mut Ctx) -> Body {
    let fam = InputFamily::new(Generator::Random, ctx.cfg.seed);
    strict_body(pointwise_bound_sweep(&fam, ctx.cfg.strict.pointwise_cases)?)
}

fn c4_lemma_3_3(ctx: &mut Ctx) -> Body {
    let c = &ctx.cfg.strict;
    let fam = InputFamily::new(Generator::Random, ctx.cfg.seed);
    strict_body(lemma_3_3_sweep(
        &fam,
        c.lemma_3_3_cases,
        c.lemma_3_3_margin,
    )?)
}

fn c5_lemma_3_6(ctx: &mut Ctx) -> Body {
    let c = &ctx.cfg.strict;
    let half = c.lemma_3_6_cases / 2;
    let mut sweeps = Vec::new();
    for (g, n) in [
        (Generator::Monotone, c.lemma_3_6_cases - half),
        (Generator::Ramp, half),
    ] {
        if n > 0 {
            sweeps.push(lemma_3_6_sweep(
                &InputFamily::new(g, ctx.cfg.seed),
                n,
                c.lemma_3_6_margin,
            )?);
        }
    }
    let violations: u64 = sweeps.iter().map(|s| s.violations).sum();
    let worst = sweeps.iter().map(|s| s.estimate.value).fold(0.0, f64::max);
    let passed = violations == 0 && worst <= 1.0 + crate::STRICT_SLACK;
    let detail = format!(
        "{} monotone-support cases (monotone and ramp families), peak endpoint excluded; {} violations, worst ratio {}",
        c.lemma_3_6_cases, violations, worst
    );
    Ok((passed, detail, json!({ "sweeps": sweeps })))
}

fn random_weight(rng: &mut impl Rng) -> Result<WeightSpec> {
    match rng.random_range(0..3) {
        0 => WeightSpec::power(rng.random_range(-0.9..=0.9)),
        1 => WeightSpec::shifted_power(rng.random_range(-0.9..=0.9), rng.random_range(-50..=50)),
        _ => {
            let n = rng.random_range(1..=64);
            let v = (0..n).map(|_| rng.random_range(0.1..=10.0)).collect();
            WeightSpec::tabulated(rng.random_range(-100..=100), v)
        }
    }
}

fn c6_duality(ctx: &mut Ctx) -> Body {
    let c = &ctx.cfg.duality;
    let seed = ctx.cfg.seed;
    let rows: Vec<(f64, u64)> = (0..c.cases)
        .into_par_iter()
        .map(|i| -> Result<(f64, u64)> {
            let mut rng = case_rng(seed, 0x600, i);
            let w = random_weight(&mut rng)?;
            let p = if rng.random_bool(0.2) {
                1.0
            } else {
                rng.random_range(1.1..=4.0)
            };
            let q = if p > 1.0 && rng.random_bool(0.2) {
                Exponent::Infinite
            } else {
                Exponent::Finite(rng.random_range(1.0..=8.0))
            };
            let s = SymmetricInterval::new(rng.random_range(-100..=100), rng.random_range(0..=200));
            Ok((duality_identity_check(&w, p, q, s)?.relerr, i))
        })
        .collect::<Result<_>>()?;
    let worst = rows
        .into_iter()
        .fold((0.0f64, 0u64), |a, b| if b.0 > a.0 { b } else { a });
    let passed = worst.0 <= c.tolerance;
    let detail = format!(
        "{} random (weight, p, q, S); worst relative error {:.3e} (tolerance {:e})",
        c.cases, worst.0, c.tolerance
    );
    Ok((
        passed,
        detail,
        json!({ "relerr": worst.0, "case": worst.1 }),
    ))
}

fn c7_covering(ctx: &mut Ctx) -> Body {
    let c = &ctx.cfg.covering;
    let seed = ctx.cfg.seed;
    let rows: Vec<(bool, u32, bool, u64)> = (0..c.families)
        .into_par_iter()
        .map(|i| -> Result<(bool, u32, bool, u64)> {
            let mut rng = case_rng(seed, 0x700, i);
            let n = rng.random_range(1..=c.max_intervals);
            let fam: Vec<SymmetricInterval> = (0..n)
                .map(|_| {
                    SymmetricInterval::new(
                        rng.random_range(-c.spread..=c.spread),
                        rng.random_range(0..=c.max_radius),
                    )
                })
                .collect();
            let sel = select_cover(&fam);
            let covers = fam.iter().all(|s| {
                sel.intervals
                    .iter()
                    .any(|t| t.lo() <= s.center && s.center <= t.hi())
            });
            // The overlap maximum is attained at some left endpoint.
            let brute = sel
                .intervals
                .iter()
                .map(|a| {
                    sel.intervals
                        .iter()
                        .filter(|b| b.lo() <= a.lo() && a.lo() <= b.hi())
                        .count() as u32
                })
                .max()
                .unwrap_or(0);
            let h = sel.hull().expect("nonempty family");
            let prof = overlap_profile(&sel, h)?;
            let pmax = prof.values().iter().copied().fold(0.0, f64::max) as u32;
            Ok((covers, brute, pmax == brute, i))
        })
        .collect::<Result<_>>()?;
    let uncovered = rows.iter().filter(|r| !r.0).count();
    let mismatched = rows.iter().filter(|r| !r.2).count();
    let worst = rows.iter().map(|r| r.1).max().unwrap_or(0);
    let passed = uncovered == 0 && mismatched == 0 && worst <= 2;
    let detail = format!(
        "{} families; {} with an uncovered center, max overlap {}, {} profile mismatches",
        c.families, uncovered, worst, mismatched
    );
    Ok((
        passed,
        detail,
        json!({ "uncovered": uncovered, "max_overlap": worst, "profile_mismatches": mismatched }),
    ))
}

fn c8_weak(ctx: &mut Ctx) -> Body {
    let cfg = ctx.cfg;
    let c = &cfg.weak;
    let alpha = 0.5;
    let scan = cfg.screen_scan()?;
    let fams = families(
        cfg.seed,
        &[Generator::Delta, Generator::Indicator, Generator::Random],
    );
    let kinds = [Kind::Centered, Kind::Riesz];
    let mut tally = Tally::default();
    let mut screens = Vec::new();
    let mut sweeps = Vec::new();
    let mut problems = Vec::new();
    let mut worst_scaling = 0.0f64;
    let mut midpoint_excess: u64 = 0;
    for &beta in &c.betas {
        let w = weight_of(beta)?;
        let (s, dual) = screened(&w, ap1q(alpha), scan)?;
        if !s.passed {
            problems.push(format!("{w} fails the A(1,2) screen"));
        }
        if !(dual <= DUALITY_IN_SCREENS) {
            problems.push(format!("{w} duality error {dual}"));
        }
        screens.push(screen_json(&w, &s, dual));
        for f in &fams {
            for &k in &kinds {
                let sw = weak_type_sweep(k, &w, alpha, f, c.cases, c.radius)?;
                let x = sw
                    .worst
                    .witness
                    .sequence
                    .clone()
                    .unwrap_or_else(FiniteSequence::zero);
                let window = sw.worst.witness.window;
                if let Some(window) = window {
                    worst_scaling = worst_scaling.max(scaling_relerr(&x, 3.7, |x| {
                        verify_weak_type(k, x, &w, alpha, &LambdaGrid::Jumps, window)
                    })?);
                }
                if sw
                    .worst
                    .params
                    .get("midpoint_max")
                    .is_some_and(|&m| m > sw.worst.lhs)
                {
                    midpoint_excess += 1;
                }
                if beta == -0.2 && f.generator == Generator::Random && k == Kind::Centered {
                    if let Some(window) = window {
                        let mut csv = String::from("lambda,ratio\n");
                        for (l, r) in weak_type_series(k, &x, &w, alpha, window)? {
                            csv.push_str(&format!("{l},{r}\n"));
                        }
                        ctx.plots.insert("weak_lambda.csv".into(), csv);
                    }
                }
                sweeps.push(ctx.judge(sw, &mut tally));
            }
        }
    }
    let cw = WeightSpec::power(c.counter_beta)?;
    let (cs, cdual) = screened(&cw, ap1q(alpha), scan)?;
    if cs.passed {
        problems.push(format!("{cw} unexpectedly passes the A(1,2) screen"));
    }
    screens.push(screen_json(&cw, &cs, cdual));
    let delta = InputFamily::new(Generator::Delta, cfg.seed);
    let mut counter = Vec::new();
    let mut csv = String::from("kind,radius,ratio\n");
    for &k in &kinds {
        let mut trend = Vec::new();
        for &r in &c.counter_radii {
            let v = weak_type_sweep(k, &cw, alpha, &delta, c.cases, r)?
                .estimate
                .value;
            csv.push_str(&format!("{},{r},{v}\n", k.name()));
            trend.push(json!({ "radius": r, "value": v }));
            counter.push((k, r, v));
        }
    }
    ctx.plots.insert("weak_counterexample.csv".into(), csv);
    let mut growths = Vec::new();
    for &k in &kinds {
        let vs: Vec<f64> = counter.iter().filter(|c| c.0 == k).map(|c| c.2).collect();
        let g = match (vs.first(), vs.last()) {
            (Some(a), Some(b)) if *a > 0.0 => b / a,
            _ => 0.0,
        };
        if !(g >= c.counter_min_growth) {
            problems.push(format!("{} counterexample grows only {g}x", k.name()));
        }
        growths.push(g);
    }
    if !(worst_scaling <= 1e-10) {
        problems.push(format!("scaling error {worst_scaling}"));
    }
    if midpoint_excess > 0 {
        problems.push(format!(
            "{midpoint_excess} sweeps where a midpoint beats the jumps"
        ));
    }
    let passed = tally.ok() && problems.is_empty();
    let mut detail = format!(
        "{}; counterexample growth {:.3}x (centered) / {:.3}x (riesz); scaling error {:.3e}",
        tally.describe(),
        growths[0],
        growths[1],
        worst_scaling
    );
    for p in &problems {
        detail.push_str("; ");
        detail.push_str(p);
    }
    let counter: Vec<Value> = counter
        .iter()
        .map(|(k, r, v)| json!({ "kind": k, "radius": r, "value": v }))
        .collect();
    Ok((
        passed,
        detail,
        json!({ "screens": screens, "sweeps": sweeps, "counterexample": counter, "scaling_relerr": worst_scaling }),
    ))
}

fn c9_strong(ctx: &mut Ctx) -> Body {
    let cfg = ctx.cfg;
    let c = &cfg.strong;
    let scan = cfg.screen_scan()?;
    let fams = families(
        cfg.seed,
        &[Generator::Delta, Generator::Indicator, Generator::Random],
    );
    let mut tally = Tally::default();
    let mut problems = Vec::new();
    let mut screens = Vec::new();
    let mut sweeps = Vec::new();
    let mut worst_scaling = 0.0f64;
    let mut worst_tail = 0.0f64;
    let mut constructions = Vec::new();
    for sc in &c.configs {
        let q = 1.0 / (1.0 / sc.p - sc.alpha);
        for &beta in &sc.betas {
            let w = weight_of(beta)?;
            let b = Bracket::Apq {
                p: sc.p,
                q: Exponent::Finite(q),
            };
            let (s, dual) = screened(&w, b, scan)?;
            if !s.passed {
                problems.push(format!("{w} fails the A({},{q}) screen", sc.p));
            }
            if !(dual <= DUALITY_IN_SCREENS) {
                problems.push(format!("{w} duality error {dual}"));
            }
            screens.push(screen_json(&w, &s, dual));
            for iv in [
                SymmetricInterval::new(0, 10),
                SymmetricInterval::new(7, 100),
            ] {
                let r = verify_sufficiency_construction(&w, sc.p, sc.alpha, iv)?;
                let e = r.params["bracket_relerr"];
                let m = r.params["min_noncentral_over_2lambda"];
                if !(e <= 1e-10 && m >= 1.0 - 1e-12) {
                    problems.push(format!("construction on {w}: bracket error {e}, level {m}"));
                }
                constructions.push(r);
            }
            for f in &fams {
                for k in [Kind::Centered, Kind::Riesz] {
                    let sw = strong_type_sweep(k, &w, sc.p, sc.alpha, f, c.cases)?;
                    worst_tail = worst_tail.max(
                        sw.worst
                            .params
                            .get("tail_error_relative")
                            .copied()
                            .unwrap_or(0.0),
                    );
                    for i in 0..c.scaling_cases.min(c.cases) {
                        worst_scaling =
                            worst_scaling.max(scaling_relerr(&f.case(i), c.scaling_factor, |x| {
                                verify_strong_type(k, x, &w, sc.p, sc.alpha)
                            })?);
                    }
                    sweeps.push(ctx.judge(sw, &mut tally));
                }
            }
        }
    }
    let sw = weight_of(c.segment_beta)?;
    let (s, dual) = screened(&sw, ap1q(c.segment_alpha), scan)?;
    if !s.passed {
        problems.push(format!("{sw} fails the A(1,q0) screen"));
    }
    screens.push(screen_json(&sw, &s, dual));
    let rh = ScanRange::new(-c.rh_centers, c.rh_centers, c.rh_n_max)?;
    let seg_fams = families(cfg.seed, &[Generator::Delta, Generator::Random]);
    let seg = verify_theorem_4_1_segment(
        &sw,
        c.segment_alpha,
        &c.segment_t,
        &seg_fams,
        c.segment_cases,
        rh,
        scan,
    )?;
    let mut csv = String::from("t,p,q,apq_constant");
    for f in &seg_fams {
        csv.push_str(&format!(",{}_ratio", f.name()));
    }
    csv.push('\n');
    for (i, pt) in seg.segment.points.iter().enumerate() {
        csv.push_str(&format!(
            "{},{},{},{}",
            pt.t,
            pt.p,
            pt.q.value(),
            pt.estimate.value
        ));
        for j in 0..seg_fams.len() {
            csv.push_str(&format!(
                ",{}",
                seg.sweeps[i * seg_fams.len() + j].estimate.value
            ));
        }
        csv.push('\n');
    }
    ctx.plots.insert("segment.csv".into(), csv);
    let mut seg_sweeps = Vec::new();
    for s in seg.sweeps.clone() {
        seg_sweeps.push(ctx.judge(s, &mut tally));
    }
    if !(worst_scaling <= c.scaling_tolerance) {
        problems.push(format!("scaling error {worst_scaling}"));
    }
    let passed = tally.ok() && problems.is_empty();
    let mut detail = format!(
        "{}; worst tail error {:.3e} of the head; scaling error {:.3e}; segment r = {} (used {})",
        tally.describe(),
        worst_tail,
        worst_scaling,
        seg.segment.r_found,
        seg.segment.r_used
    );
    for p in &problems {
        detail.push_str("; ");
        detail.push_str(p);
    }
    Ok((
        passed,
        detail,
        json!({
            "screens": screens,
            "constructions": constructions,
            "sweeps": sweeps,
            "segment": seg.segment,
            "segment_sweeps": seg_sweeps,
            "scaling_relerr": worst_scaling,
            "tail_error_relative": worst_tail,
        }),
    ))
}

fn c10_oscillation(ctx: &mut Ctx) -> Body {
    let cfg = ctx.cfg;
    let c = &cfg.oscillation;
    let alpha = 0.5;
    let scan = cfg.screen_scan()?;
    let one = WeightSpec::constant(1.0)?;
    let mut problems = Vec::new();

    let d = FiniteSequence::delta(0);
    let s01 = SymmetricInterval::new(0, 1);
    let prof = operator_profile(&d, alpha, s01.to_interval(), Kind::Riesz)?.profile;
    let osc = oscillation(&prof, s01)?;
    let osc_err = (osc - 4.0 / 9.0).abs();
    let ll = llogl_functional(&d.scale(2.0)?, &one, 2.0, s01)?;
    let ll_err = (ll - (3.0 + 2.0 * 2f64.ln())).abs();
    let bmo_spot = verify_bmo(&d, &one, alpha, ScanRange::new(0, 0, 1)?)?.ratio;
    let bmo_err = (bmo_spot - 4.0 / 9.0).abs();
    if !(osc_err <= 1e-12 && ll_err <= 1e-12 && bmo_err <= 1e-12) {
        problems.push(format!("spot values off by {osc_err}, {ll_err}, {bmo_err}"));
    }

    let mut tally = Tally::default();
    let mut screens = Vec::new();
    let mut sweeps = Vec::new();
    let bmo_scan = ScanRange::new(-c.bmo_centers, c.bmo_centers, c.bmo_n_max)?;
    let two = families(cfg.seed, &[Generator::Delta, Generator::Random]);
    let three = families(
        cfg.seed,
        &[Generator::Delta, Generator::Indicator, Generator::Random],
    );
    for &beta in &c.bmo_betas {
        let w = weight_of(beta)?;
        let (s, dual) = screened(&w, ap_inf(alpha), scan)?;
        if !s.passed {
            problems.push(format!("{w} fails the A(2,inf) screen"));
        }
        screens.push(screen_json(&w, &s, dual));
        for f in &two {
            let sw = bmo_sweep(&w, alpha, f, c.bmo_cases, bmo_scan)?;
            sweeps.push(ctx.judge(sw, &mut tally));
        }
    }
    let mut rng = case_rng(cfg.seed, 0x800, 0);
    let table: Vec<f64> = (0..129).map(|_| rng.random_range(1.0..=2.0)).collect();
    for w in [one.clone(), WeightSpec::tabulated(-64, table)?] {
        let (s, dual) = screened(&w, ap_inf(alpha), scan)?;
        if !s.passed {
            problems.push(format!("{w} fails the A(2,inf) screen"));
        }
        screens.push(screen_json(&w, &s, dual));
        for f in &two {
            let sw = bmo_norm_sweep(&w, alpha, f, c.bmo_cases, bmo_scan)?;
            sweeps.push(ctx.judge(sw, &mut tally));
        }
    }
    let mut scaling = Vec::new();
    for &beta in &c.llogl_betas {
        let w = weight_of(beta)?;
        let (s, dual) = screened(&w, ap1q(alpha), scan)?;
        if !s.passed {
            problems.push(format!("{w} fails the A(1,2) screen"));
        }
        screens.push(screen_json(&w, &s, dual));
        for f in &three {
            for k in [Kind::Centered, Kind::Riesz] {
                let sw = llogl_sweep(k, &w, alpha, f, c.llogl_cases, c.llogl_margin)?;
                let x = sw
                    .worst
                    .witness
                    .sequence
                    .clone()
                    .unwrap_or_else(FiniteSequence::zero);
                let iv = enclosing_interval(&x, c.llogl_margin);
                let mut ratios = Vec::new();
                for e in 0..=c.llogl_scalings {
                    let r = verify_llogl(k, &x.scale(2f64.powi(e as i32))?, &w, alpha, iv)?;
                    if !(r.ratio.is_finite() && r.verdict == Verdict::BoundedEmpirical) {
                        problems.push(format!("llogl scaling 2^{e} on {w}: ratio {}", r.ratio));
                    }
                    ratios.push(r.ratio);
                }
                scaling.push(json!({ "label": &sw.label, "family": &sw.family, "ratios": ratios }));
                sweeps.push(ctx.judge(sw, &mut tally));
            }
        }
    }
    let mut overflow = 0u64;
    for &beta in &c.exp_betas {
        let w = weight_of(beta)?;
        let (s, dual) = screened(&w, ap_inf(alpha), scan)?;
        if !s.passed {
            problems.push(format!("{w} fails the A(2,inf) screen"));
        }
        screens.push(screen_json(&w, &s, dual));
        for f in &three {
            match exp_sweep(
                &w,
                alpha,
                c.exp_delta,
                c.exp_q,
                f,
                c.exp_cases,
                c.exp_margin,
            ) {
                Ok(sw) => sweeps.push(ctx.judge(sw, &mut tally)),
                Err(e @ Error::Overflow { .. }) => {
                    overflow += 1;
                    problems.push(format!("{w}, {}: {e}", f.name()));
                }
                Err(e) => return Err(e),
            }
        }
    }
    let passed = tally.ok() && problems.is_empty();
    let mut detail = format!(
        "spot values: oscillation {osc}, llogl {ll}; {}; {overflow} overflow witnesses",
        tally.describe()
    );
    for p in &problems {
        detail.push_str("; ");
        detail.push_str(p);
    }
    Ok((
        passed,
        detail,
        json!({
            "spot": { "oscillation": osc, "llogl": ll, "bmo_ratio": bmo_spot },
            "screens": screens,
            "sweeps": sweeps,
            "llogl_scaling": scaling,
        }),
    ))
}

type Criterion = fn(&mut Ctx) -> Body;

const CRITERIA: [(u32, &str, &str, Criterion); 10] = [
    (1, "operator exactness", "c01_operators.json", c1_operators),
    (2, "closed forms", "c02_closed_forms.json", c2_closed_forms),
    (
        3,
        "pointwise bound, strict",
        "c03_pointwise.json",
        c3_pointwise,
    ),
    (
        4,
        "M <= M-bar <= 2^(1-a) M, strict",
        "c04_noncentral.json",
        c4_lemma_3_3,
    ),
    (
        5,
        "M <= 2 I(|x|) on monotone supports, strict",
        "c05_monotone.json",
        c5_lemma_3_6,
    ),
    (
        6,
        "A(p,q) duality identities",
        "c06_duality.json",
        c6_duality,
    ),
    (7, "covering selection", "c07_covering.json", c7_covering),
    (8, "weak type stability", "c08_weak_type.json", c8_weak),
    (
        9,
        "strong type and segment",
        "c09_strong_type.json",
        c9_strong,
    ),
    (
        10,
        "oscillation, L log L, exponential",
        "c10_oscillation.json",
        c10_oscillation,
    ),
];

/// Ids and names of the criteria, in order.
pub fn criteria_names() -> Vec<(u32, &'static str)> {
    CRITERIA.iter().map(|c| (c.0, c.1)).collect()
}

fn to_file(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

/// Run the criteria whose ids are in `only` (all when empty).
pub fn run_suite(cfg: &SuiteConfig, baselines: &BaselineFile, only: &[u32]) -> SuiteOutcome {
    let mut ctx = Ctx {
        cfg,
        baselines,
        sweeps: Vec::new(),
        unbaselined: 0,
        regressions: 0,
        plots: BTreeMap::new(),
    };
    let mut out = SuiteOutcome::default();
    for (id, name, file, f) in CRITERIA {
        if !only.is_empty() && !only.contains(&id) {
            continue;
        }
        let t0 = Instant::now();
        let (passed, detail, data) = match f(&mut ctx) {
            Ok(r) => r,
            Err(e) => (
                false,
                format!("error: {e}"),
                json!({ "error": e.to_string() }),
            ),
        };
        let c = CriterionOutcome {
            id,
            name: name.to_string(),
            passed,
            detail,
            elapsed: t0.elapsed(),
            time_limit: (id == 1).then(|| Duration::from_secs_f64(cfg.operators.time_limit_secs)),
        };
        out.files.insert(
            file.to_string(),
            to_file(&json!({
                "schema": REPORT_SCHEMA,
                "seed": cfg.seed,
                "criterion": &c,
                "data": data,
            })),
        );
        out.criteria.push(c);
    }
    out.files.insert(
        "criteria.json".into(),
        to_file(&json!({
            "schema": REPORT_SCHEMA,
            "seed": cfg.seed,
            "config": cfg,
            "criteria": &out.criteria,
            "unbaselined": ctx.unbaselined,
            "regressions": ctx.regressions,
        })),
    );
    out.plots = ctx.plots;
    out.sweeps = ctx.sweeps;
    out.unbaselined = ctx.unbaselined;
    out.regressions = ctx.regressions;
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_round_trips_through_toml() {
        let c = SuiteConfig::small();
        let text = toml::to_string(&c).unwrap();
        assert_eq!(SuiteConfig::from_toml(&text).unwrap(), c);
        let partial = SuiteConfig::from_toml("seed = 9\n[weak]\ncases = 3\n").unwrap();
        assert_eq!(partial.seed, 9);
        assert_eq!(partial.weak.cases, 3);
        assert_eq!(partial.weak.radius, WeakSuite::default().radius);
        assert!(SuiteConfig::from_toml("sed = 9").is_err());
    }

    #[test]
    fn quick_criteria_pass() {
        let out = run_suite(
            &SuiteConfig::small(),
            &BaselineFile::default(),
            &[1, 2, 6, 7],
        );
        for c in &out.criteria {
            assert!(c.passed, "{}: {}", c.name, c.detail);
        }
        assert_eq!(out.files.len(), 5);
    }
}
