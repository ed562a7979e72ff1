//! The `qhc` command line: `ch`, `berry`, `theta` and `check`.
//!
//! Exit codes: 0 success, 1 mismatch or failed check, 2 usage error,
//! 3 inconclusive numerics.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::time::{SystemTime, UNIX_EPOCH};

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::acceptance::{criteria, faulty_binom, run_criteria, BinomFn, McBudget};
use crate::berry::{
    conjugation_check, default_frozen, slice_chern_number, Budget, SliceChernResult, SliceSpec, Surface,
};
use crate::chern::{
    ch_general, ch_multilayer, ch_with_picard, grr_oracle, multilayer_grr_oracle, picard_oracle, ChernClass,
    Coupling, MultilayerConfig, OracleLimits, SingleLayerConfig,
};
use crate::error::BerryError;
use crate::laughlin::{SphereData, TorusData};
use crate::ring::rational::binom;
use crate::theta::{theta_char, Characteristic, Modulus, Truncation};

pub const EXIT_MISMATCH: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INCONCLUSIVE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "qhc", version, about = "Chern characters of Laughlin quasihole bundles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Chern character from the closed form, optionally checked by the oracle.
    Ch(ChArgs),
    /// Slice Chern number from Monte-Carlo Gram matrices.
    Berry(BerryArgs),
    /// Evaluate a theta function with characteristic.
    Theta(ThetaArgs),
    /// Run the acceptance criteria.
    Check(CheckArgs),
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Args)]
struct ChArgs {
    #[arg(long)]
    b: Option<i64>,
    #[arg(long)]
    c: Option<i64>,
    #[arg(long)]
    d: Option<i64>,
    #[arg(long)]
    g: Option<u32>,
    #[arg(long)]
    n: Option<i64>,
    #[arg(long)]
    m: Option<i64>,
    /// Truncation order of the ξ expansion.
    #[arg(long)]
    truncation: Option<u32>,
    /// Multilayer JSON file with K, C, n, m, d, g.
    #[arg(long, conflicts_with_all = ["b", "c", "d", "g", "n", "m"])]
    config: Option<PathBuf>,
    /// Include the Picard generators (charge transport).
    #[arg(long)]
    picard: bool,
    /// Also run the Berezin pushforward oracle and compare exactly.
    #[arg(long)]
    oracle: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Debug, Args, Serialize, Deserialize, Clone)]
struct BerryArgs {
    #[arg(long, value_parser = clap::value_parser!(u32).range(0..=1))]
    genus: u32,
    #[arg(long)]
    b: u32,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long, default_value_t = 200_000)]
    samples: usize,
    #[arg(long, default_value_t = 24)]
    grid: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Modulus of the torus as "re,im".
    #[arg(long, default_value = "0,1")]
    tau: String,
    /// Stencil arm on the sphere.
    #[arg(long, default_value_t = 0.05)]
    step: f64,
    /// Random quasihole positions for the conjugation check (torus only).
    #[arg(long, default_value_t = 10)]
    conjugation_points: usize,
    /// Persisted run.
    #[arg(long, default_value = "berry-run.json")]
    output: PathBuf,
    /// Curvature densities for plotting.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ThetaArgs {
    /// Argument as "re,im" or "re".
    #[arg(long, allow_hyphen_values = true)]
    z: String,
    /// Modulus as "re,im".
    #[arg(long, allow_hyphen_values = true)]
    tau: String,
    /// Characteristic as "a,b".
    #[arg(long = "char", allow_hyphen_values = true)]
    characteristic: Option<String>,
    /// Requested absolute tail bound.
    #[arg(long, default_value_t = 1e-17)]
    eps: f64,
}

#[derive(Debug, Clone, Copy, ValueEnum, PartialEq, Eq)]
enum Fault {
    /// Binomial that returns 1 for negative lower index.
    Binomial,
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Include the Monte-Carlo criteria.
    #[arg(long)]
    full: bool,
    #[arg(long, default_value_t = 200_000)]
    samples: usize,
    #[arg(long, default_value_t = 24)]
    grid: usize,
    #[arg(long, default_value_t = 100_000)]
    conjugation_samples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    /// Corrupt part of the pipeline to exercise the failure path.
    #[arg(long, value_enum)]
    inject_fault: Option<Fault>,
    /// Only run criteria whose name contains one of these (comma separated).
    #[arg(long, value_delimiter = ',')]
    criteria: Vec<String>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl ToString) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.to_string(),
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `"re,im"` or `"re"`.
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    let num = |s: &str| s.parse::<f64>().map_err(|e| format!("bad number `{s}` in `{text}`: {e}"));
    match parts.as_slice() {
        [re] => Ok(Complex64::new(num(re)?, 0.0)),
        [re, im] => Ok(Complex64::new(num(re)?, num(im)?)),
        _ => Err(format!("expected \"re,im\", got `{text}`")),
    }
}

/// Honours `QHC_THREADS` by sizing the global pool; ignored if the pool
/// already exists.
pub fn configure_threads() {
    if let Some(n) = std::env::var("QHC_THREADS").ok().and_then(|v| v.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n.max(1)).build_global();
    }
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = if e.use_stderr() {
                write!(err, "{}", e.render())
            } else {
                write!(out, "{}", e.render())
            };
            return code;
        }
    };
    configure_threads();
    let outcome = match cli.command {
        Command::Ch(a) => cmd_ch(a, out),
        Command::Berry(a) => cmd_berry(a, out),
        Command::Theta(a) => cmd_theta(a, out),
        Command::Check(a) => cmd_check(a, out),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn print_class(out: &mut dyn Write, class: &ChernClass, format: Format) -> std::io::Result<()> {
    match format {
        Format::Text => {
            writeln!(out, "rank: {}", class.rank())?;
            writeln!(out, "ch: {class}")?;
            for w in &class.warnings {
                writeln!(out, "warning: {w}")?;
            }
            Ok(())
        }
        Format::Json => writeln!(out, "{}", serde_json::to_string_pretty(&class.to_json()).unwrap()),
    }
}

fn io(e: std::io::Error) -> Failure {
    Failure {
        code: EXIT_MISMATCH,
        message: e.to_string(),
    }
}

fn cmd_ch(a: ChArgs, out: &mut dyn Write) -> Outcome {
    let (formula, oracle): (ChernClass, Option<Box<dyn FnOnce() -> Result<ChernClass, _>>>) = match &a.config {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            let mut cfg: MultilayerConfig =
                serde_json::from_str(&text).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
            if a.truncation.is_some() {
                cfg.truncation = a.truncation;
            }
            let class = ch_multilayer(&cfg).map_err(Failure::usage)?;
            let oracle = a
                .oracle
                .then(|| Box::new(move || multilayer_grr_oracle(&cfg, OracleLimits::default())) as Box<dyn FnOnce() -> _>);
            (class, oracle)
        }
        None => {
            let need = |name: &str, v: Option<i64>| v.ok_or_else(|| Failure::usage(format!("--{name} is required")));
            let g = a.g.ok_or_else(|| Failure::usage("--g is required"))?;
            let mut cfg = SingleLayerConfig::new(
                need("b", a.b)?,
                need("c", a.c)?,
                need("d", a.d)?,
                g,
                need("n", a.n)?,
                need("m", a.m)?,
            )
            .map_err(Failure::usage)?;
            cfg.truncation = a.truncation;
            let picard = a.picard;
            let class = if picard { ch_with_picard(&cfg) } else { ch_general(&cfg) }.map_err(Failure::usage)?;
            let oracle = a.oracle.then(|| {
                Box::new(move || {
                    if picard {
                        picard_oracle(&cfg, Coupling::Multilayer)
                    } else {
                        grr_oracle(&cfg)
                    }
                }) as Box<dyn FnOnce() -> _>
            });
            (class, oracle)
        }
    };
    print_class(out, &formula, a.format).map_err(io)?;
    if let Some(run) = oracle {
        let reference = run().map_err(Failure::usage)?;
        if reference == formula {
            writeln!(out, "oracle: MATCH").map_err(io)?;
        } else {
            writeln!(out, "oracle: MISMATCH").map_err(io)?;
            writeln!(out, "oracle expansion: {}", reference.expansion).map_err(io)?;
            return Ok(EXIT_MISMATCH);
        }
    }
    Ok(0)
}

fn berry_failure(e: BerryError) -> Failure {
    match e {
        BerryError::Undersampled { .. } => Failure {
            code: EXIT_INCONCLUSIVE,
            message: e.to_string(),
        },
        other => Failure::usage(other),
    }
}

fn cmd_berry(a: BerryArgs, out: &mut dyn Write) -> Outcome {
    let tau = Modulus::new(parse_complex(&a.tau).map_err(Failure::usage)?).map_err(Failure::usage)?;
    let frozen = default_frozen(a.m.max(1));
    let surface = if a.genus == 0 {
        Surface::Sphere(SphereData::new(a.b, a.n, a.m).map_err(Failure::usage)?)
    } else {
        Surface::Torus(TorusData::new(tau, a.b, a.n, a.m).map_err(Failure::usage)?)
    };
    let spec = SliceSpec {
        grid: a.grid,
        step: a.step,
        budget: Budget::new(a.samples, a.seed),
    };
    let result = slice_chern_number(&surface, &frozen, &spec).map_err(berry_failure)?;
    let conjugation = match &surface {
        Surface::Torus(data) if a.conjugation_points > 0 => {
            let mut rng = ChaCha8Rng::seed_from_u64(a.seed ^ 0xc0);
            let ws: Vec<Complex64> = (0..a.conjugation_points)
                .map(|_| tau.tau() * rng.gen::<f64>() + rng.gen::<f64>())
                .collect();
            Some(conjugation_check(data, &frozen, &ws, spec.budget).map_err(berry_failure)?)
        }
        _ => None,
    };
    let timestamp = SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0);
    let run = json!({
        "config": &a,
        "seed": a.seed,
        "grid": a.grid,
        "measured": result.measured,
        "predicted": &result.predicted,
        "errors": {
            "stat": result.stat_error,
            "discretization": result.discretization_error_estimate,
            "combined": result.combined_error,
        },
        "result": &result,
        "conjugation": &conjugation,
        "timestamp": timestamp,
    });
    fs::write(&a.output, serde_json::to_string_pretty(&run).unwrap() + "\n")
        .map_err(|e| Failure::usage(format!("{}: {e}", a.output.display())))?;
    if let Some(path) = &a.csv {
        fs::write(path, density_csv(&result)).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
    }
    report_berry(out, &result, conjugation.as_ref().map(|c| c.violations.as_slice())).map_err(io)?;
    writeln!(out, "run written to {}", a.output.display()).map_err(io)?;
    let conj_ok = conjugation.as_ref().map_or(true, |c| c.passed());
    if result.inconclusive {
        writeln!(
            out,
            "inconclusive: error bars exceed half the distance to the nearest integer; raise --samples or --grid"
        )
        .map_err(io)?;
        return Ok(EXIT_INCONCLUSIVE);
    }
    Ok(if result.passed && conj_ok { 0 } else { EXIT_MISMATCH })
}

fn report_berry(out: &mut dyn Write, r: &SliceChernResult, violations: Option<&[String]>) -> std::io::Result<()> {
    writeln!(out, "predicted: {}", r.predicted)?;
    writeln!(
        out,
        "measured:  {:.6} ± {:.2e} (stat {:.2e}, discretization {:.2e})",
        r.measured, r.combined_error, r.stat_error, r.discretization_error_estimate
    )?;
    if let Some(f) = r.periodic_flux {
        writeln!(out, "periodic part flux: {:.3e} ± {:.2e}", f.value, f.combined())?;
    }
    if let Some(c) = r.charts {
        writeln!(
            out,
            "chart integrals: plane {:.6}, inverted {:.6} (± {:.2e})",
            c.plane, c.inverted, c.difference_error
        )?;
    }
    if let Some(v) = violations {
        if v.is_empty() {
            writeln!(out, "conjugation laws: OK")?;
        } else {
            for line in v {
                writeln!(out, "conjugation violation: {line}")?;
            }
        }
    }
    writeln!(out, "{}", if r.passed { "PASS" } else { "FAIL" })
}

fn density_csv(r: &SliceChernResult) -> String {
    let mut s = String::from("chart,re,im,logdet,density,area\n");
    for p in &r.density {
        s.push_str(&format!("{},{},{},{},{},{}\n", p.chart, p.w[0], p.w[1], p.logdet, p.density, p.area));
    }
    s
}

fn cmd_theta(a: ThetaArgs, out: &mut dyn Write) -> Outcome {
    let z = parse_complex(&a.z).map_err(Failure::usage)?;
    let tau = Modulus::new(parse_complex(&a.tau).map_err(Failure::usage)?).map_err(Failure::usage)?;
    let ch = match &a.characteristic {
        Some(text) => {
            let c = parse_complex(text).map_err(Failure::usage)?;
            Characteristic::new(c.re, c.im)
        }
        None => Characteristic::ZERO,
    };
    if !(a.eps > 0.0) {
        return Err(Failure::usage("--eps must be positive"));
    }
    let v = theta_char(ch, z, &tau, Truncation::eps(a.eps));
    let value = v.value();
    writeln!(out, "value: {:.15e},{:.15e}", value.re, value.im).map_err(io)?;
    writeln!(out, "tail_bound: {:.3e}", v.tail_bound).map_err(io)?;
    writeln!(out, "terms: {}", v.terms).map_err(io)?;
    Ok(0)
}

fn cmd_check(a: CheckArgs, out: &mut dyn Write) -> Outcome {
    let binom_fn: BinomFn = match a.inject_fault {
        Some(Fault::Binomial) => faulty_binom,
        None => binom,
    };
    let budget = a.full.then_some(McBudget {
        samples: a.samples,
        grid: a.grid,
        conjugation_samples: a.conjugation_samples,
        seed: a.seed,
    });
    let results = run_criteria(criteria(binom_fn, budget), &a.criteria, |r| {
        let _ = writeln!(out, "{r}");
    });
    if results.is_empty() {
        return Err(Failure::usage("no criterion matches the filter"));
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    writeln!(out, "{} of {} criteria passed", results.len() - failed, results.len()).map_err(io)?;
    Ok(if failed == 0 { 0 } else { EXIT_MISMATCH })
}
