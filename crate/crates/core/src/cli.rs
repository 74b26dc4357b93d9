//! The `divkit` command line.
//!
//! Exit codes: 0 success, 1 property violation, 2 usage error, 3 input error.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::checks::{self, Case, Counterexample, SUITES};
use crate::copulas::{
    checkerboard, fgm_divergence_quadrature, fgm_pearson_closed_form, grid_divergence, FgmCopula, GridCopula,
    InterpolatingSampler, RandomizationScheme,
};
use crate::csiszar::{csiszar_index, mutual_information};
use crate::divergence::{f_divergence, renyi, symmetric_decomposition};
use crate::error::Error;
use crate::generators::{builtin, BuiltinKind, Generator};
use crate::measures::{align, DiscreteDistribution, DistributionJson, JointDistribution, JointJson};
use crate::numeric::ExtReal;

pub const DEFAULT_SEED: u64 = 1729;
pub const SEED_ENV: &str = "DIVKIT_SEED";

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INPUT: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "divkit", version, about = "Exact f-divergences, Csiszar indices and checkerboard copulas")]
struct Cli {
    #[command(subcommand)]
    command: Sub,
    /// Pretty-print JSON reports.
    #[arg(long, global = true)]
    pretty: bool,
    /// RNG seed (falls back to $DIVKIT_SEED, then a fixed default).
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Json)]
    format: OutputFormat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OutputFormat {
    Json,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Sub {
    /// D_f(P || Q) between two distribution files.
    Div {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long = "f", value_parser = parse_kind)]
        f: BuiltinKind,
        /// Add the per-atom contributions.
        #[arg(long)]
        report_parts: bool,
    },
    /// S_f(X, Y) = D_f(P_X x P_Y || P_XY): product first, joint second.
    Csiszar {
        #[arg(long)]
        joint: PathBuf,
        #[arg(long = "f", value_parser = parse_kind, required = true)]
        f: Vec<BuiltinKind>,
    },
    /// Checkerboard copula of a joint and D_f(Pi || C).
    Copula(CopulaArgs),
    /// D_f(Pi || C_theta) for the FGM copula by tensor Gauss-Legendre quadrature.
    Fgm {
        #[arg(long, allow_negative_numbers = true)]
        theta: f64,
        #[arg(long = "f", value_parser = parse_kind)]
        f: BuiltinKind,
        #[arg(long, default_value_t = 128)]
        order: usize,
    },
    /// Renyi divergence of one or more orders.
    Renyi {
        #[arg(long)]
        p: PathBuf,
        #[arg(long)]
        q: PathBuf,
        #[arg(long, required = true)]
        alpha: Vec<f64>,
    },
    /// Randomized property suites; exit 1 with a replayable counterexample on failure.
    Check {
        /// Suite name, or `all`.
        #[arg(long, required_unless_present = "replay")]
        suite: Option<String>,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        /// Override the suite tolerance.
        #[arg(long)]
        tol: Option<f64>,
        /// Re-run a saved report, counterexample or case.
        #[arg(long, conflicts_with = "suite")]
        replay: Option<PathBuf>,
    },
    /// Write the Bernoulli example joint (p = q = 1/2, r = 5/16).
    Examples {
        #[arg(long, default_value = "bernoulli.json")]
        out: PathBuf,
    },
}

#[derive(Debug, Args)]
struct CopulaArgs {
    #[arg(long)]
    joint: PathBuf,
    #[arg(long = "f", value_parser = parse_kind)]
    f: BuiltinKind,
    /// Write grid cells as CSV (i,j,u_lo,u_hi,v_lo,v_hi,mass,density).
    #[arg(long)]
    grid_csv: Option<PathBuf>,
    /// Number of interpolating-copula samples.
    #[arg(long)]
    sample: Option<usize>,
    #[arg(long, default_value = "shared", value_parser = parse_scheme)]
    scheme: RandomizationScheme,
    /// Where to write samples as `u,v` CSV; stdout after the report if absent.
    #[arg(long, requires = "sample")]
    sample_csv: Option<PathBuf>,
}

fn parse_kind(s: &str) -> Result<BuiltinKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_scheme(s: &str) -> Result<RandomizationScheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// A parsed and loaded invocation.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub command: Command,
    pub seed: u64,
    pub pretty: bool,
    pub format: OutputFormat,
}

#[derive(Debug, Clone)]
pub enum Command {
    Div {
        p: DiscreteDistribution,
        q: DiscreteDistribution,
        generator: Generator,
        report_parts: bool,
    },
    Csiszar {
        joint: JointDistribution,
        generators: Vec<Generator>,
    },
    Copula {
        joint: JointDistribution,
        generator: Generator,
        grid_csv: Option<PathBuf>,
        sample: Option<usize>,
        scheme: RandomizationScheme,
        sample_csv: Option<PathBuf>,
    },
    Fgm {
        copula: FgmCopula,
        generator: Generator,
        order: usize,
    },
    Renyi {
        p: DiscreteDistribution,
        q: DiscreteDistribution,
        alphas: Vec<f64>,
    },
    Check {
        suites: Vec<String>,
        trials: u64,
        tolerance: Option<f64>,
    },
    Replay {
        case: Case,
        tolerance: f64,
    },
    Examples {
        out: PathBuf,
    },
}

/// A message plus the exit code it maps to. Code 0 carries help or version text.
#[derive(Debug, Clone, PartialEq)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }

    fn input(message: impl Into<String>) -> Self {
        CliError { code: EXIT_INPUT, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::input(e.to_string())
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn load_distribution(path: &Path) -> Result<DiscreteDistribution, CliError> {
    let d: DistributionJson = read_json(path)?;
    d.try_into().map_err(|e: Error| CliError::input(format!("{}: {e}", path.display())))
}

fn load_joint(path: &Path) -> Result<JointDistribution, CliError> {
    let j: JointJson = read_json(path)?;
    j.try_into().map_err(|e: Error| CliError::input(format!("{}: {e}", path.display())))
}

fn load_replay(path: &Path, tol: Option<f64>) -> Result<(Case, f64), CliError> {
    let v: Value = read_json(path)?;
    let bad = |e: serde_json::Error| CliError::input(format!("{}: {e}", path.display()));
    let v = match v.get("counterexample") {
        Some(c) if !c.is_null() => c.clone(),
        Some(_) => return Err(CliError::input(format!("{}: report has no counterexample", path.display()))),
        None => v,
    };
    if v.get("case").is_some() {
        let c: Counterexample = serde_json::from_value(v).map_err(bad)?;
        Ok((c.case, tol.unwrap_or(c.tolerance)))
    } else {
        let case: Case = serde_json::from_value(v).map_err(bad)?;
        let t = tol.unwrap_or_else(|| checks::default_tolerance(case.suite()));
        Ok((case, t))
    }
}

fn resolve_seed(flag: Option<u64>) -> Result<u64, CliError> {
    if let Some(s) = flag {
        return Ok(s);
    }
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| CliError::usage(format!("{SEED_ENV}={v} is not a 64-bit unsigned integer"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

/// Parses `argv` (program name first) and loads every referenced file.
pub fn parse_args<I, T>(argv: I) -> Result<RunConfig, CliError>
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = Cli::try_parse_from(argv).map_err(|e| {
        let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        CliError { code, message: e.render().to_string() }
    })?;
    let seed = resolve_seed(cli.seed)?;
    let command = match cli.command {
        Sub::Div { p, q, f, report_parts } => Command::Div {
            p: load_distribution(&p)?,
            q: load_distribution(&q)?,
            generator: builtin(f),
            report_parts,
        },
        Sub::Csiszar { joint, f } => Command::Csiszar {
            joint: load_joint(&joint)?,
            generators: f.into_iter().map(builtin).collect(),
        },
        Sub::Copula(a) => Command::Copula {
            joint: load_joint(&a.joint)?,
            generator: builtin(a.f),
            grid_csv: a.grid_csv,
            sample: a.sample,
            scheme: a.scheme,
            sample_csv: a.sample_csv,
        },
        Sub::Fgm { theta, f, order } => Command::Fgm {
            copula: FgmCopula::new(theta).map_err(|e| CliError::usage(e.to_string()))?,
            generator: builtin(f),
            order,
        },
        Sub::Renyi { p, q, alpha } => Command::Renyi {
            p: load_distribution(&p)?,
            q: load_distribution(&q)?,
            alphas: alpha,
        },
        Sub::Check { suite, trials, tol, replay } => match replay {
            Some(path) => {
                let (case, tolerance) = load_replay(&path, tol)?;
                Command::Replay { case, tolerance }
            }
            None => {
                let suite = suite.expect("clap requires --suite without --replay");
                let suites = if suite == "all" {
                    SUITES.iter().map(|s| s.to_string()).collect()
                } else if SUITES.contains(&suite.as_str()) {
                    vec![suite]
                } else {
                    return Err(CliError::usage(format!(
                        "unknown suite '{suite}'; expected one of: all, {}",
                        SUITES.join(", ")
                    )));
                };
                Command::Check { suites, trials, tolerance: tol }
            }
        },
        Sub::Examples { out } => Command::Examples { out },
    };
    if cli.format == OutputFormat::Csv
        && matches!(command, Command::Copula { .. } | Command::Check { .. } | Command::Replay { .. } | Command::Examples { .. })
    {
        return Err(CliError::usage("--format csv applies to div, csiszar, fgm and renyi"));
    }
    Ok(RunConfig { command, seed, pretty: cli.pretty, format: cli.format })
}

fn ext(x: ExtReal) -> Value {
    serde_json::to_value(x).expect("ExtReal serializes")
}

fn ext_csv(x: ExtReal) -> String {
    match x {
        ExtReal::Finite(v) => format!("{v}"),
        ExtReal::PosInf => "inf".into(),
    }
}

fn emit_json<W: Write>(out: &mut W, v: &impl Serialize, pretty: bool) -> std::io::Result<()> {
    let text = if pretty {
        serde_json::to_string_pretty(v)
    } else {
        serde_json::to_string(v)
    }
    .expect("report serializes");
    writeln!(out, "{text}")
}

fn atom_contribution(p: f64, q: f64, g: &Generator) -> ExtReal {
    match (p > 0.0, q > 0.0) {
        (_, true) => g.value_at(p / q).checked_scale(q).expect("q > 0"),
        (true, false) => g.conj_at_zero().checked_scale(p).expect("p > 0"),
        (false, false) => ExtReal::ZERO,
    }
}

fn write_grid_csv(path: &Path, c: &GridCopula) -> std::io::Result<()> {
    let mut f = std::io::BufWriter::new(fs::File::create(path)?);
    writeln!(f, "i,j,u_lo,u_hi,v_lo,v_hi,mass,density")?;
    let (m, n) = c.shape();
    for i in 0..m {
        for j in 0..n {
            writeln!(
                f,
                "{i},{j},{},{},{},{},{},{}",
                c.u_breaks()[i],
                c.u_breaks()[i + 1],
                c.v_breaks()[j],
                c.v_breaks()[j + 1],
                c.mass(i, j),
                c.density(i, j)
            )?;
        }
    }
    f.flush()
}

fn write_samples<W: Write>(out: &mut W, s: &[(f64, f64)]) -> std::io::Result<()> {
    writeln!(out, "u,v")?;
    for (u, v) in s {
        writeln!(out, "{u},{v}")?;
    }
    Ok(())
}

/// Executes `cfg`, writing the report to `out`; returns the exit code.
pub fn run<W: Write>(cfg: &RunConfig, out: &mut W) -> Result<i32, CliError> {
    let io = |e: std::io::Error| CliError::input(e.to_string());
    let csv = cfg.format == OutputFormat::Csv;
    match &cfg.command {
        Command::Div { p, q, generator: g, report_parts } => {
            let d = f_divergence(p, q, g);
            let (lower, upper) = symmetric_decomposition(p, q, g);
            if csv {
                writeln!(out, "generator,value,singular_mass,absolutely_continuous_part,lower,upper").map_err(io)?;
                writeln!(
                    out,
                    "{},{},{},{},{},{}",
                    g.name(),
                    ext_csv(d.value),
                    d.singular_mass,
                    ext_csv(d.absolutely_continuous_part),
                    ext_csv(lower),
                    ext_csv(upper)
                )
                .map_err(io)?;
                return Ok(EXIT_OK);
            }
            let mut report = json!({
                "generator": g.name(),
                "value": ext(d.value),
                "singular_mass": d.singular_mass,
                "absolutely_continuous_part": ext(d.absolutely_continuous_part),
                "decomposition": {"lower": ext(lower), "upper": ext(upper)},
            });
            if *report_parts {
                let pair = align(p, q);
                let parts: Vec<Value> = pair
                    .labels
                    .iter()
                    .zip(pair.p.iter().zip(&pair.q))
                    .map(|(l, (&pi, &qi))| json!({"label": l, "p": pi, "q": qi, "contribution": ext(atom_contribution(pi, qi, g))}))
                    .collect();
                report["parts"] = Value::Array(parts);
            }
            emit_json(out, &report, cfg.pretty).map_err(io)?;
        }
        Command::Csiszar { joint, generators } => {
            let mi = mutual_information(joint);
            let rows: Vec<(String, ExtReal, ExtReal)> = generators
                .iter()
                .map(|g| {
                    let r = csiszar_index(joint, g);
                    (g.name().to_string(), r.value, r.via_conditionals)
                })
                .collect();
            if csv {
                writeln!(out, "generator,value,via_conditionals").map_err(io)?;
                for (name, v, c) in &rows {
                    writeln!(out, "{name},{},{}", ext_csv(*v), ext_csv(*c)).map_err(io)?;
                }
                return Ok(EXIT_OK);
            }
            let entry = |(name, v, c): &(String, ExtReal, ExtReal)| {
                json!({"generator": name, "value": ext(*v), "via_conditionals": ext(*c)})
            };
            let report = if rows.len() == 1 {
                let mut e = entry(&rows[0]);
                e["mutual_information"] = json!(mi);
                e
            } else {
                json!({"results": rows.iter().map(entry).collect::<Vec<_>>(), "mutual_information": mi})
            };
            emit_json(out, &report, cfg.pretty).map_err(io)?;
        }
        Command::Copula { joint, generator: g, grid_csv, sample, scheme, sample_csv } => {
            let cb = checkerboard(joint);
            let (m, n) = cb.shape();
            let density: Vec<Vec<f64>> = (0..m).map(|i| (0..n).map(|j| cb.density(i, j)).collect()).collect();
            let mut report = json!({
                "generator": g.name(),
                "value": ext(grid_divergence(&cb, g)),
                "csiszar_index": ext(csiszar_index(joint, g).value),
                "u_breaks": cb.u_breaks(),
                "v_breaks": cb.v_breaks(),
                "density": density,
            });
            if let Some(path) = grid_csv {
                write_grid_csv(path, &cb).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
                report["grid_csv"] = json!(path.display().to_string());
            }
            let samples = sample.map(|k| InterpolatingSampler::new(joint, *scheme, cfg.seed).sample_range(0, k));
            if let Some(s) = &samples {
                report["samples"] = json!({
                    "n": s.len(),
                    "scheme": scheme.cli_name(),
                    "seed": cfg.seed,
                    "csv": sample_csv.as_ref().map(|p| p.display().to_string()),
                });
            }
            emit_json(out, &report, cfg.pretty).map_err(io)?;
            if let Some(s) = &samples {
                match sample_csv {
                    Some(path) => {
                        let mut f = std::io::BufWriter::new(
                            fs::File::create(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?,
                        );
                        write_samples(&mut f, s).and_then(|_| f.flush()).map_err(io)?;
                    }
                    None => write_samples(out, s).map_err(io)?,
                }
            }
        }
        Command::Fgm { copula, generator: g, order } => {
            let value = fgm_divergence_quadrature(copula, g, *order)?;
            let closed = (g.name() == "pearson").then(|| fgm_pearson_closed_form(copula.theta()));
            if csv {
                writeln!(out, "theta,generator,order,value,closed_form").map_err(io)?;
                let c = closed.map(|c| c.to_string()).unwrap_or_default();
                writeln!(out, "{},{},{order},{value},{c}", copula.theta(), g.name()).map_err(io)?;
                return Ok(EXIT_OK);
            }
            let mut report = json!({"theta": copula.theta(), "generator": g.name(), "order": order, "value": value});
            if let Some(c) = closed {
                report["closed_form"] = json!(c);
            }
            emit_json(out, &report, cfg.pretty).map_err(io)?;
        }
        Command::Renyi { p, q, alphas } => {
            let rows = alphas
                .iter()
                .map(|&a| renyi(p, q, a).map(|v| (a, v)))
                .collect::<Result<Vec<_>, Error>>()?;
            if csv {
                writeln!(out, "alpha,value").map_err(io)?;
                for (a, v) in &rows {
                    writeln!(out, "{a},{}", ext_csv(*v)).map_err(io)?;
                }
                return Ok(EXIT_OK);
            }
            let entry = |(a, v): &(f64, ExtReal)| json!({"alpha": a, "value": ext(*v)});
            let report = if rows.len() == 1 {
                entry(&rows[0])
            } else {
                json!({"results": rows.iter().map(entry).collect::<Vec<_>>()})
            };
            emit_json(out, &report, cfg.pretty).map_err(io)?;
        }
        Command::Check { suites, trials, tolerance } => {
            let reports = suites
                .iter()
                .map(|s| checks::run_suite(s, *trials, cfg.seed, *tolerance))
                .collect::<Result<Vec<_>, Error>>()?;
            let ok = reports.iter().all(|r| r.ok());
            if reports.len() == 1 {
                emit_json(out, &reports[0], cfg.pretty).map_err(io)?;
            } else {
                emit_json(out, &json!({"passed": ok, "reports": reports}), cfg.pretty).map_err(io)?;
            }
            return Ok(if ok { EXIT_OK } else { EXIT_VIOLATION });
        }
        Command::Replay { case, tolerance } => {
            let o = case.evaluate(*tolerance)?;
            let report = json!({
                "suite": case.suite(),
                "tolerance": tolerance,
                "holds": o.holds,
                "detail": o.detail,
            });
            emit_json(out, &report, cfg.pretty).map_err(io)?;
            return Ok(if o.holds { EXIT_OK } else { EXIT_VIOLATION });
        }
        Command::Examples { out: path } => {
            let j = JointDistribution::bernoulli_pair(0.5, 0.5, 5.0 / 16.0)?;
            let text = serde_json::to_string_pretty(&JointJson::from(&j)).expect("joint serializes");
            fs::write(path, text + "\n").map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            emit_json(out, &json!({"wrote": path.display().to_string(), "joint": JointJson::from(&j)}), cfg.pretty)
                .map_err(io)?;
        }
    }
    Ok(EXIT_OK)
}

/// Parses, runs, and reports errors on stderr; returns the process exit code.
pub fn main_with<I, T, W, E>(argv: I, out: &mut W, err: &mut E) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
    W: Write,
    E: Write,
{
    let result = parse_args(argv).and_then(|cfg| run(&cfg, out));
    match result {
        Ok(code) => code,
        Err(e) if e.code == EXIT_OK => {
            let _ = write!(out, "{}", e.message);
            EXIT_OK
        }
        Err(e) => {
            let _ = writeln!(err, "divkit: {}", e.message.trim_end());
            e.code
        }
    }
}
