//! Command implementations behind the `alsat` binary.
//!
//! Every command returns its report text and an exit code instead of
//! printing, so tests can drive them without spawning a process.

use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use alsat_core::cnf::{parse_dimacs, CnfFormula};
use alsat_core::counter::{self, LatticeConfig, Overrides, DEFAULT_MAX_POINTS};
use alsat_core::oracle::{count_by_enumeration, count_from_constant, symbolic_constants};
use alsat_core::report::{emit_report, sig12, Format, Report};
use alsat_core::spectrum::{
    axis_profile, spectrum_table, Axes, Bias, FrequencyScheme, SignVector,
    DEFAULT_ENUMERATION_LIMIT,
};

pub const EXIT_SAT: i32 = 0;
pub const EXIT_UNSAT: i32 = 20;
pub const EXIT_ERROR: i32 = 1;

#[derive(Debug, Parser)]
#[command(
    name = "alsat",
    version,
    about = "Algebraic model counter for 2-SAT and 3-SAT"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Worker threads (default: available parallelism; 1 for deterministic debugging).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// json or csv (default: json for counts, csv for spectra and profiles).
    #[arg(long, global = true)]
    pub format: Option<Format>,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Count models with the lattice sum.
    Count(CountArgs),
    /// Count models by enumeration.
    Oracle(InputArgs),
    /// Compare the lattice count with both exact oracles.
    Verify(CountArgs),
    /// Minimal maximum frequencies for a range of n.
    Spectrum(SpectrumArgs),
    /// Sample g(t) = sum_j e_j sin((u + j) t).
    Profile(ProfileArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// DIMACS CNF file.
    pub input: PathBuf,
}

#[derive(Debug, Clone, Args)]
pub struct SchemeArgs {
    /// onevar, twovar, exp1 or exp2.
    #[arg(long, default_value = "exp1")]
    pub preset: String,
    /// Override the number of axes (1, 2 or 4).
    #[arg(long)]
    pub axes: Option<usize>,
    /// Bias: n2, n3 or a number.
    #[arg(long)]
    pub u: Option<String>,
    /// Base frequency offset.
    #[arg(long)]
    pub p: Option<f64>,
    /// Vertical offset (default 3 pi / (u + 1)).
    #[arg(long)]
    pub v: Option<f64>,
    /// Horizontal offset (default pi / (2 (u + 1))).
    #[arg(long)]
    pub h: Option<f64>,
}

impl SchemeArgs {
    pub fn scheme(&self) -> Result<FrequencyScheme> {
        let mut s = FrequencyScheme::preset(&self.preset)?;
        if let Some(d) = self.axes {
            s.axes = Axes::from_count(d)?;
        }
        if let Some(u) = &self.u {
            s.bias =
                match u.as_str() {
                    "n2" => Bias::N2,
                    "n3" => Bias::N3,
                    other => Bias::Explicit(other.parse().with_context(|| {
                        format!("--u expects n2, n3 or a number, got '{other}'")
                    })?),
                };
        }
        if let Some(p) = self.p {
            s.p = p;
        }
        s.v = self.v.or(s.v);
        s.h = self.h.or(s.h);
        s.validate()?;
        Ok(s)
    }
}

/// `auto` or an explicit integer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AutoOr(pub Option<u64>);

fn parse_auto(s: &str) -> Result<AutoOr, String> {
    if s == "auto" {
        return Ok(AutoOr(None));
    }
    s.parse::<u64>()
        .map(|v| AutoOr(Some(v)))
        .map_err(|_| format!("expected 'auto' or a positive integer, got '{s}'"))
}

#[derive(Debug, Args)]
pub struct CountArgs {
    /// DIMACS CNF file.
    pub input: PathBuf,
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// auto or an integer.
    #[arg(long, default_value = "auto", value_parser = parse_auto)]
    pub multiplier: AutoOr,
    /// auto or an integer.
    #[arg(long, default_value = "auto", value_parser = parse_auto)]
    pub modulus: AutoOr,
    /// Largest lattice accepted without --force.
    #[arg(long, env = "ALSAT_MAX_POINTS", default_value_t = DEFAULT_MAX_POINTS)]
    pub max_points: u64,
    /// Run even if the lattice exceeds --max-points.
    #[arg(long)]
    pub force: bool,
    /// Largest n for the sign-vector scans.
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    pub enum_limit: usize,
    /// Add wall time to the report (makes output non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

impl CountArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            multiplier: self.multiplier.0,
            modulus: self.modulus.0,
            enumeration_limit: self.enum_limit,
        }
    }

    fn lattice_config(&self) -> LatticeConfig {
        LatticeConfig {
            max_points: self.max_points,
            force: self.force,
            ..LatticeConfig::default()
        }
    }
}

#[derive(Debug, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    #[arg(long, default_value_t = 2)]
    pub from: usize,
    #[arg(long, default_value_t = 10)]
    pub to: usize,
    #[arg(long, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
    pub enum_limit: usize,
}

#[derive(Debug, Args)]
pub struct ProfileArgs {
    #[command(flatten)]
    pub scheme: SchemeArgs,
    /// Sign vector such as -1;1;-1;-1;1;-1 (its length is n).
    #[arg(long, allow_hyphen_values = true)]
    pub signs: String,
    /// Optional check that the sign vector has this length.
    #[arg(long)]
    pub n: Option<usize>,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub t_start: f64,
    #[arg(long, default_value_t = 2.0, allow_hyphen_values = true)]
    pub t_end: f64,
    #[arg(long, default_value_t = 1001)]
    pub samples: usize,
}

/// Report text plus exit code.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub report: String,
}

#[derive(Serialize)]
struct Timed<'a, R: Serialize> {
    #[serde(flatten)]
    result: &'a R,
    #[serde(serialize_with = "sig12::serialize")]
    wall_time_seconds: f64,
}

fn emit<R: Report>(result: &R, format: Format, started: Option<Instant>) -> String {
    match (started, format) {
        (Some(t0), Format::Json) => {
            let timed = Timed {
                result,
                wall_time_seconds: t0.elapsed().as_secs_f64(),
            };
            let mut s = serde_json::to_string_pretty(&timed).expect("reports serialize");
            s.push('\n');
            s
        }
        (Some(t0), Format::Csv) => {
            eprintln!("wall time: {:.3}s", t0.elapsed().as_secs_f64());
            emit_report(result, format)
        }
        (None, _) => emit_report(result, format),
    }
}

pub fn read_cnf(path: &Path) -> Result<CnfFormula> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_dimacs(&text).with_context(|| format!("parse: {}", path.display()))
}

fn sat_code(count: u64) -> i32 {
    if count > 0 {
        EXIT_SAT
    } else {
        EXIT_UNSAT
    }
}

pub fn run_count(args: &CountArgs, format: Format) -> Result<Outcome> {
    let started = args.timing.then(Instant::now);
    let cnf = read_cnf(&args.input)?;
    let scheme = args.scheme.scheme()?;
    let result = counter::count(&cnf, &scheme, &args.overrides(), &args.lattice_config())?;
    Ok(Outcome {
        code: sat_code(result.count),
        report: emit(&result, format, started),
    })
}

pub fn run_oracle(args: &InputArgs, format: Format) -> Result<Outcome> {
    let cnf = read_cnf(&args.input)?;
    let result = count_by_enumeration(&cnf)?;
    Ok(Outcome {
        code: sat_code(result.count),
        report: emit_report(&result, format),
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub lattice: u64,
    pub enumeration: u64,
    /// From the idempotent-reduction constant; `None` if it is not a valid count.
    pub expansion: Option<u64>,
    /// From the inverse-relaxation constant.
    pub inverse_expansion: Option<u64>,
    pub agree: bool,
}

impl Report for VerifyReport {
    fn csv_header() -> &'static str {
        "lattice,enumeration,expansion,inverse_expansion,agree"
    }

    fn csv_rows(&self) -> Vec<String> {
        let opt = |x: Option<u64>| x.map_or_else(String::new, |v| v.to_string());
        vec![format!(
            "{},{},{},{},{}",
            self.lattice,
            self.enumeration,
            opt(self.expansion),
            opt(self.inverse_expansion),
            self.agree
        )]
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error(
    "mismatch detected: lattice {lattice}, enumeration {enumeration}, expansion {expansion:?}, \
     inverse expansion {inverse_expansion:?}"
)]
pub struct MismatchDetected {
    pub lattice: u64,
    pub enumeration: u64,
    pub expansion: Option<u64>,
    pub inverse_expansion: Option<u64>,
}

pub fn compare_counts(
    lattice: u64,
    enumeration: u64,
    expansion: Option<u64>,
    inverse_expansion: Option<u64>,
) -> Result<VerifyReport, MismatchDetected> {
    let agree =
        expansion == Some(lattice) && inverse_expansion == Some(lattice) && enumeration == lattice;
    if agree {
        Ok(VerifyReport {
            lattice,
            enumeration,
            expansion,
            inverse_expansion,
            agree,
        })
    } else {
        Err(MismatchDetected {
            lattice,
            enumeration,
            expansion,
            inverse_expansion,
        })
    }
}

pub fn run_verify(args: &CountArgs, format: Format) -> Result<Outcome> {
    let started = args.timing.then(Instant::now);
    let cnf = read_cnf(&args.input)?;
    let scheme = args.scheme.scheme()?;
    let lattice = counter::count(&cnf, &scheme, &args.overrides(), &args.lattice_config())?;
    let enumeration = count_by_enumeration(&cnf)?;
    let (plain, inverse) = symbolic_constants(&cnf)?;
    let n = cnf.num_occurrences();
    let occurring = cnf.occurring_variables().len();
    let absent = cnf.num_variables() - occurring;
    let to_count = |c| count_from_constant(c, n, 1 << occurring).map(|k| k << absent);
    let report = compare_counts(
        lattice.count,
        enumeration.count,
        to_count(&plain),
        to_count(&inverse),
    )?;
    Ok(Outcome {
        code: EXIT_SAT,
        report: emit(&report, format, started),
    })
}

pub fn run_spectrum(args: &SpectrumArgs, format: Format) -> Result<Outcome> {
    if args.from == 0 || args.from > args.to {
        bail!("need 1 <= --from <= --to, got {}..{}", args.from, args.to);
    }
    let scheme = args.scheme.scheme()?;
    let rows = spectrum_table(&scheme, args.from..=args.to, args.enum_limit)?;
    Ok(Outcome {
        code: 0,
        report: emit_report(&rows, format),
    })
}

pub fn run_profile(args: &ProfileArgs, format: Format) -> Result<Outcome> {
    let signs: SignVector = args.signs.parse()?;
    if let Some(n) = args.n {
        if n != signs.len() {
            bail!("--n is {n} but the sign vector has {} entries", signs.len());
        }
    }
    let scheme = args.scheme.scheme()?;
    let samples = axis_profile(&scheme, &signs, (args.t_start, args.t_end), args.samples)?;
    Ok(Outcome {
        code: 0,
        report: emit_report(&samples, format),
    })
}

/// Dispatches a parsed command line.
pub fn run(cli: &Cli) -> Result<Outcome> {
    let work = || match &cli.command {
        Command::Count(a) => run_count(a, cli.format.unwrap_or(Format::Json)),
        Command::Oracle(a) => run_oracle(a, cli.format.unwrap_or(Format::Json)),
        Command::Verify(a) => run_verify(a, cli.format.unwrap_or(Format::Json)),
        Command::Spectrum(a) => run_spectrum(a, cli.format.unwrap_or(Format::Csv)),
        Command::Profile(a) => run_profile(a, cli.format.unwrap_or(Format::Csv)),
    };
    match cli.threads {
        Some(t) => rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build()
            .context("building thread pool")?
            .install(work),
        None => work(),
    }
}
