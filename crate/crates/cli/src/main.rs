use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde_json::{json, Value};
use zharm::covering::{overlap_profile, select_cover};
use zharm::harness::{
    criteria_names, default_sweep, run_suite, BaselineFile, BaselineStatus, InputFamily,
    SuiteConfig, TheoremId, REPORT_SCHEMA,
};
use zharm::operators::operator_profile;
use zharm::weights::{scan_constant, Bracket};
use zharm::{Error, Exponent, Kind, ScanRange, SymmetricInterval, WeightSpec};

mod literal;

use literal::{parse_generator, parse_interval, parse_sequence};

/// Discrete fractional maximal operators, Riesz potentials and weights.
#[derive(Parser)]
#[command(name = "zharm", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate an operator on a window; CSV `index,value`.
    Op {
        /// centered, noncentral or riesz.
        #[arg(long)]
        kind: Kind,
        #[arg(long)]
        alpha: f64,
        /// delta:K, indicator:A..B, seq:OFF:v,v,.. or random:SEED or random:SEED:INDEX.
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        /// Defaults to the support hull widened by 8.
        #[arg(long, allow_hyphen_values = true)]
        window: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Scan a weight characteristic; JSON estimate with trend.
    Weight {
        /// constant:C, power:B, shifted:B:K0 or table:OFF:v,v,..
        #[arg(long, allow_hyphen_values = true)]
        family: String,
        /// `A_p`, or `A(p,q)` when `--q` is given.
        #[arg(long)]
        p: Option<f64>,
        /// A number or `inf`.
        #[arg(long)]
        q: Option<String>,
        /// Reverse-Hölder exponent instead of `--p`.
        #[arg(long)]
        r: Option<f64>,
        #[arg(long, allow_hyphen_values = true, default_value = "-64..64")]
        centers: String,
        #[arg(long, default_value_t = 1024)]
        nmax: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Select a bounded-overlap cover; JSON selection and overlap profile.
    Cover {
        /// Comma-separated `CENTER:RADIUS` pairs.
        #[arg(long, allow_hyphen_values = true)]
        intervals: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run one theorem's sweep in its default context; JSON report.
    Verify {
        theorem: TheoremId,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        cases: u64,
        /// delta, indicator, ramp, random or monotone.
        #[arg(long, default_value = "random")]
        family: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the acceptance battery and write one report per criterion.
    Suite {
        /// TOML file overriding the default battery.
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long, default_value = "zharm-report")]
        out: PathBuf,
        /// Comma-separated criterion ids; all when absent.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
        /// Merge the sweep maxima of this run into a baseline file.
        #[arg(long)]
        record_baselines: Option<PathBuf>,
        /// Also write CSV series for plotting.
        #[arg(long)]
        emit_plot_data: bool,
    },
}

/// Exit statuses.
const OK: u8 = 0;
const FAILED: u8 = 1;
const CONFIG: u8 = 2;

enum Failure {
    Config(String),
    Run(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::TailNotCertified(_) | Error::Overflow { .. } | Error::Range { .. } => {
                Failure::Run(e.to_string())
            }
            _ => Failure::Config(e.to_string()),
        }
    }
}

type Outcome = std::result::Result<u8, Failure>;

fn error_record(kind: &str, message: &str) -> String {
    json!({ "schema": REPORT_SCHEMA, "error": { "kind": kind, "message": message } }).to_string()
}

fn write_out(out: Option<&Path>, text: &str) -> std::result::Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| Failure::Run(format!("{}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Run(e.to_string())),
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}

fn parse_exponent(s: &str) -> std::result::Result<Exponent, Failure> {
    if s == "inf" || s == "∞" {
        return Ok(Exponent::Infinite);
    }
    s.parse::<f64>()
        .map_err(|_| Failure::Config(format!("`{s}` is not an exponent")))
        .and_then(|v| Exponent::finite(v).map_err(Failure::from))
}

fn op(kind: Kind, alpha: f64, x: &str, window: Option<&str>, out: Option<&Path>) -> Outcome {
    let x = parse_sequence(x)?;
    let window = match window {
        Some(w) => parse_interval(w)?,
        None => x
            .support_hull()
            .unwrap_or(parse_interval("0..0")?)
            .expand(8),
    };
    let r = operator_profile(&x, alpha, window, kind)?;
    let mut csv = String::from("index,value\n");
    for (k, v) in r.profile.iter() {
        csv.push_str(&format!("{k},{v}\n"));
    }
    write_out(out, &csv)?;
    Ok(OK)
}

#[allow(clippy::too_many_arguments)]
fn weight(
    family: &str,
    p: Option<f64>,
    q: Option<&str>,
    r: Option<f64>,
    centers: &str,
    nmax: u64,
    out: Option<&Path>,
) -> Outcome {
    let w: WeightSpec = family.parse()?;
    let bracket = match (p, q, r) {
        (None, None, Some(r)) => Bracket::ReverseHolder { r },
        (Some(p), None, None) => Bracket::Ap { p },
        (Some(p), Some(q), None) => Bracket::Apq {
            p,
            q: parse_exponent(q)?,
        },
        _ => {
            return Err(Failure::Config(
                "give --p, --p with --q, or --r alone".into(),
            ))
        }
    };
    let c = parse_interval(centers)?;
    let scan = ScanRange::new(c.lo(), c.hi(), nmax)?;
    let est = scan_constant(bracket, &w, scan)?;
    let v = json!({
        "schema": REPORT_SCHEMA,
        "weight": w,
        "bracket": bracket,
        "scan": scan,
        "value": est.value,
        "witness": est.witness,
        "trend": est.trend,
        "growth": est.growth(),
    });
    write_out(out, &json_text(&v))?;
    Ok(OK)
}

fn cover(intervals: &str, out: Option<&Path>) -> Outcome {
    let fam = intervals
        .split(',')
        .map(|t| {
            let bad = || Failure::Config(format!("`{t}` is not CENTER:RADIUS"));
            let (c, r) = t.trim().split_once(':').ok_or_else(bad)?;
            Ok(SymmetricInterval::new(
                c.parse().map_err(|_| bad())?,
                r.parse().map_err(|_| bad())?,
            ))
        })
        .collect::<std::result::Result<Vec<_>, Failure>>()?;
    let sel = select_cover(&fam);
    let hull = sel.hull().ok_or(Failure::Config("empty family".into()))?;
    let prof = overlap_profile(&sel, hull)?;
    let v = json!({
        "schema": REPORT_SCHEMA,
        "selection": sel,
        "max_overlap": sel.max_overlap(),
        "overlap": { "window": prof.window(), "values": prof.values() },
    });
    write_out(out, &json_text(&v))?;
    Ok(OK)
}

fn verify(theorem: TheoremId, seed: u64, cases: u64, family: &str, out: Option<&Path>) -> Outcome {
    let fam = InputFamily::new(parse_generator(family)?, seed);
    let s = default_sweep(theorem, &fam, cases)?;
    let status = BaselineFile::committed().check(&s);
    let failed = s.violations > 0 || status.is_regression();
    let v = json!({
        "schema": REPORT_SCHEMA,
        "sweep": s,
        "baseline": status,
    });
    write_out(out, &json_text(&v))?;
    eprintln!(
        "{theorem}: {} cases, worst ratio {}, {} violations, baseline {}",
        s.cases,
        s.estimate.value,
        s.violations,
        match status {
            BaselineStatus::Match { .. } => "match",
            BaselineStatus::Regression { .. } => "REGRESSION",
            BaselineStatus::Unbaselined => "none",
        }
    );
    Ok(if failed { FAILED } else { OK })
}

fn suite(
    config: Option<&Path>,
    out: &Path,
    only: &[u32],
    record: Option<&Path>,
    plots: bool,
) -> Outcome {
    let cfg = match config {
        Some(p) => {
            let text = fs::read_to_string(p)
                .map_err(|e| Failure::Config(format!("{}: {e}", p.display())))?;
            SuiteConfig::from_toml(&text)?
        }
        None => SuiteConfig::default(),
    };
    let known: Vec<u32> = criteria_names().iter().map(|c| c.0).collect();
    if let Some(id) = only.iter().find(|id| !known.contains(id)) {
        return Err(Failure::Config(format!("no criterion {id}")));
    }
    let res = run_suite(&cfg, &BaselineFile::committed(), only);
    let io = |p: &Path, e: std::io::Error| Failure::Run(format!("{}: {e}", p.display()));
    fs::create_dir_all(out).map_err(|e| io(out, e))?;
    for (name, text) in &res.files {
        let p = out.join(name);
        fs::write(&p, text).map_err(|e| io(&p, e))?;
    }
    if plots {
        for (name, text) in &res.plots {
            let p = out.join(name);
            fs::write(&p, text).map_err(|e| io(&p, e))?;
        }
    }
    if let Some(path) = record {
        let mut file = match fs::read_to_string(path) {
            Ok(t) => BaselineFile::parse(&t)?,
            Err(_) => BaselineFile::default(),
        };
        for s in &res.sweeps {
            file.record(s);
        }
        fs::write(path, file.to_json()).map_err(|e| io(path, e))?;
    }
    for c in &res.criteria {
        let mark = if c.accepted() { "PASS" } else { "FAIL" };
        let time = match c.time_limit {
            Some(l) if !c.within_time() => format!(" (over the {:.0} s limit)", l.as_secs_f64()),
            _ => String::new(),
        };
        println!(
            "criterion {:>2} {mark} {} [{:.2} s{time}]: {}",
            c.id,
            c.name,
            c.elapsed.as_secs_f64(),
            c.detail
        );
    }
    if res.unbaselined > 0 {
        println!("{} sweeps have no committed baseline", res.unbaselined);
    }
    Ok(if res.all_accepted() { OK } else { FAILED })
}

fn init_threads() -> std::result::Result<(), Failure> {
    let Ok(v) = std::env::var("ZHARM_THREADS") else {
        return Ok(());
    };
    let n: usize = v
        .trim()
        .parse()
        .map_err(|_| Failure::Config(format!("ZHARM_THREADS=`{v}` is not a count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Run(e.to_string()))
}

fn dispatch(cli: Cli) -> Outcome {
    init_threads()?;
    match cli.command {
        Command::Op {
            kind,
            alpha,
            x,
            window,
            out,
        } => op(kind, alpha, &x, window.as_deref(), out.as_deref()),
        Command::Weight {
            family,
            p,
            q,
            r,
            centers,
            nmax,
            out,
        } => weight(&family, p, q.as_deref(), r, &centers, nmax, out.as_deref()),
        Command::Cover { intervals, out } => cover(&intervals, out.as_deref()),
        Command::Verify {
            theorem,
            seed,
            cases,
            family,
            out,
        } => verify(theorem, seed, cases, &family, out.as_deref()),
        Command::Suite {
            config,
            out,
            only,
            record_baselines,
            emit_plot_data,
        } => suite(
            config.as_deref(),
            &out,
            &only,
            record_baselines.as_deref(),
            emit_plot_data,
        ),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            eprintln!("{}", error_record("config", e.render().to_string().trim()));
            return ExitCode::from(CONFIG);
        }
    };
    match dispatch(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Failure::Config(m)) => {
            eprintln!("{}", error_record("config", &m));
            ExitCode::from(CONFIG)
        }
        Err(Failure::Run(m)) => {
            eprintln!("{}", error_record("run", &m));
            ExitCode::from(FAILED)
        }
    }
}
