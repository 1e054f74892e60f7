//! `relcalc`: command-line front end for exact linear relations and matrix pencils.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use relcalc_core::chains::{has_singular_chain, SpectralPoint};
use relcalc_core::harness::io::{parse_point, to_value, PencilFile, RankOneFile, RelationFile};
use relcalc_core::harness::{run_campaign, CampaignConfig, Scenario};
use relcalc_core::pencil::pencil_bound_report;
use relcalc_core::perturb::check_bounds;
use relcalc_core::{Error, FieldTag, Subspace};

const EXIT_USAGE: u8 = 1;
const EXIT_PRECONDITION: u8 = 2;
const EXIT_VIOLATION: u8 = 3;

#[derive(Parser)]
#[command(name = "relcalc", version, about = "Exact linear relations, matrix pencils and perturbation bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Output {
    /// Write the JSON result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Command {
    /// Parts, Jordan degrees and singular-chain flag of a relation.
    Analyze {
        #[arg(long)]
        relation: PathBuf,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Profile, Jordan dimensions and Wong sequence of a pencil.
    Pencil {
        #[arg(long)]
        file: PathBuf,
        /// Spectral point, a scalar or `inf`; repeatable. Defaults to the pencil's candidates.
        #[arg(long = "lambda", allow_hyphen_values = true)]
        lambdas: Vec<String>,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Singular-chain defects and perturbation bounds for a pair of relations.
    Sn {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        nmax: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Rank-one pencil perturbation bound report.
    Perturb {
        #[arg(long)]
        pencil: PathBuf,
        #[arg(long)]
        rank1: PathBuf,
        #[arg(long = "lambda", allow_hyphen_values = true)]
        lambdas: Vec<String>,
        #[arg(long, default_value_t = 4)]
        nmax: usize,
        #[command(flatten)]
        output: Output,
    },
    /// Run a seeded verification campaign.
    Verify {
        #[arg(long, value_parser = parse_scenario)]
        scenario: Scenario,
        #[arg(long, default_value_t = 100)]
        trials: u64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// `Q`, `Qi` or `GF(p)`.
        #[arg(long, default_value = "Q", value_parser = parse_field)]
        field: FieldTag,
        /// A dimension `d` or a range `lo..hi` (inclusive).
        #[arg(long, default_value = "3", value_parser = parse_dims)]
        dim: (usize, usize),
        #[arg(long, default_value_t = 1)]
        p: usize,
        #[arg(long)]
        nmax: Option<usize>,
        #[command(flatten)]
        output: Output,
    },
    /// Replay the fixture regressions.
    Fixtures {
        #[command(flatten)]
        output: Output,
    },
}

fn parse_scenario(s: &str) -> Result<Scenario, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_field(s: &str) -> Result<FieldTag, String> {
    let t = s.trim();
    match t {
        "Q" | "q" => return Ok(FieldTag::Q),
        "Qi" | "qi" | "Q(i)" => return Ok(FieldTag::Qi),
        _ => {}
    }
    let digits = t
        .strip_prefix("GF")
        .or_else(|| t.strip_prefix("gf"))
        .map(|r| r.trim_start_matches('(').trim_end_matches(')'))
        .ok_or_else(|| format!("unknown field {s}; use Q, Qi or GF(p)"))?;
    let p: u32 = digits.parse().map_err(|_| format!("bad modulus in {s}"))?;
    FieldTag::gf(p).map_err(|e| e.to_string())
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let num = |x: &str| x.trim().parse::<usize>().map_err(|_| format!("bad dimension {s}"));
    match s.split_once("..") {
        Some((lo, hi)) => Ok((num(lo)?, num(hi.trim_start_matches('='))?)),
        None => num(s).map(|d| (d, d)),
    }
}

enum Failure {
    Usage(String),
    Precondition(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Precondition(_) | Error::Infeasible(_) => Failure::Precondition(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))
}

fn emit(value: &Value, output: &Output) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("json values serialize") + "\n";
    match &output.out {
        Some(path) => std::fs::write(path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn dims(spaces: &[Subspace]) -> Vec<usize> {
    spaces.iter().map(Subspace::dim).collect()
}

fn points(field: FieldTag, raw: &[String]) -> Result<Vec<SpectralPoint>, Failure> {
    raw.iter().map(|s| parse_point(field, s).map_err(Failure::from)).collect()
}

/// Returns whether every checked bound held.
fn run(command: Command) -> Result<bool, Failure> {
    match command {
        Command::Analyze { relation, nmax, output } => {
            let a = RelationFile::parse(&read(&relation)?)?;
            let parts = a.parts();
            let space = |s: &Subspace| json!({"dim": s.dim(), "basis": s.to_strings()});
            let value = json!({
                "d": a.d(),
                "dim": a.dim(),
                "dom": space(&parts.dom),
                "ran": space(&parts.ran),
                "ker": space(&parts.ker),
                "mul": space(&parts.mul),
                "jordan_degrees": a.jordan_degrees(nmax),
                "singular_chain": has_singular_chain(&a),
            });
            emit(&value, &output)?;
            Ok(true)
        }
        Command::Pencil { file, lambdas, nmax, output } => {
            let p = PencilFile::parse(&read(&file)?)?;
            let profile = p.profile()?;
            let mut at = points(p.field(), &lambdas)?;
            if at.is_empty() {
                at = p.eigen_candidates()?;
            }
            let per_point: Vec<Value> = at
                .iter()
                .map(|x| json!({"at": x.to_string(), "jordan_dims": p.jordan_dims_at(x, nmax)}))
                .collect();
            let value = json!({
                "det_poly": profile.det_poly.to_strings(),
                "regular": profile.regular,
                "rank": profile.rank,
                "untested_spectrum": profile.untested_spectrum(),
                "points": per_point,
                "wong": dims(&p.wong(nmax)),
            });
            emit(&value, &output)?;
            Ok(true)
        }
        Command::Sn { a, b, nmax, output } => {
            let a = RelationFile::parse(&read(&a)?)?;
            let b = RelationFile::parse(&read(&b)?)?;
            let report = check_bounds(&a, &b, nmax)?;
            emit(&to_value(&report), &output)?;
            let clean = report.violations().next().is_none();
            Ok(clean)
        }
        Command::Perturb { pencil, rank1, lambdas, nmax, output } => {
            let p = PencilFile::parse(&read(&pencil)?)?;
            let q = RankOneFile::parse(&read(&rank1)?)?;
            if q.w().len() != p.d() {
                return Err(Error::DimensionMismatch { expected: p.d(), found: q.w().len() }.into());
            }
            let report = pencil_bound_report(&p, &q, &points(p.field(), &lambdas)?, nmax)?;
            emit(&to_value(&report), &output)?;
            let clean = report.violations().next().is_none();
            Ok(clean)
        }
        Command::Verify { scenario, trials, seed, field, dim, p, nmax, output } => {
            let mut cfg = CampaignConfig::new(scenario, field, dim.0, trials, seed).with_dims(dim.0, dim.1).with_p(p);
            cfg.nmax = nmax;
            let report = run_campaign(&cfg)?;
            emit(&to_value(&report), &output)?;
            Ok(report.passed())
        }
        Command::Fixtures { output } => {
            let report = run_campaign(&CampaignConfig::new(Scenario::Fixtures, FieldTag::Q, 2, 1, 0))?;
            emit(&to_value(&report), &output)?;
            Ok(report.passed())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("bound violation");
            ExitCode::from(EXIT_VIOLATION)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_USAGE)
        }
        Err(Failure::Precondition(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(EXIT_PRECONDITION)
        }
    }
}
