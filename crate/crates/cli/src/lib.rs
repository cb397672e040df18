//! Command-line front end for `chiral-core`.
//!
//! [`run`] executes a parsed [`Cli`] and returns the rendered output along
//! with an [`Outcome`]; `main` only maps that onto the process exit code.

use std::path::{Path, PathBuf};

use chiral_core::adjoint::adjoint_monomial_with_slack;
use chiral_core::character::{character_direct, character_product};
use chiral_core::coeff::format_q;
use chiral_core::json::{element_terms, operator_to_json, vector_from_terms, vector_terms};
use chiral_core::lifting::{
    constant_lifting_with_slack, lifting_vector, closed_form_operator, solve_with_slack,
    verify_invariance_with_slack, InvarianceReport, InvariantVector, LiftingOperator,
};
use chiral_core::partitions::{Partition, PartitionPair};
use chiral_core::quasimod::{DimensionTable, Dimensions, FunctionSymbol};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

mod selftest;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] chiral_core::Error),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    /// 3 for internal failures, 1 for everything the user can fix.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(e) if e.is_internal() => 3,
            _ => 1,
        }
    }
}

/// Whether every check performed by a command held.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Ok,
    VerificationFailed,
}

impl Outcome {
    pub fn exit_code(self) -> u8 {
        match self {
            Outcome::Ok => 0,
            Outcome::VerificationFailed => 2,
        }
    }

    fn from_check(ok: bool) -> Self {
        if ok {
            Outcome::Ok
        } else {
            Outcome::VerificationFailed
        }
    }
}

#[derive(Debug, Parser)]
#[command(
    name = "chiral",
    version,
    about = "Exact computations with chiral differential operators on the upper half plane"
)]
pub struct Cli {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,

    /// Raise every truncation cap by this much (results must not change).
    #[arg(long, global = true, default_value_t = 0)]
    pub cap_slack: u32,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Graded dimensions of the invariant vectors.
    Character(CharacterArgs),
    /// Build an invariant vector with a given leading word and verify it.
    Lift(LiftArgs),
    /// Expand the group action on a single word.
    Adjoint(PairArgs),
    /// Check invariance of a vector read from a JSON file.
    Verify {
        #[arg(long)]
        input: PathBuf,
    },
    /// Print dimensions of spaces of modular forms.
    Dims {
        #[arg(long, value_enum, default_value_t = Group::Full)]
        gamma: Group,
        /// Largest weight to list.
        #[arg(long)]
        max: u32,
    },
    /// Run a quick suite of internal consistency checks.
    Selftest,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Group {
    /// The full modular group.
    Full,
}

#[derive(Debug, Args)]
pub struct PairArgs {
    /// Parts of λ, comma separated; empty for the empty partition.
    #[arg(long, default_value = "", value_parser = parse_partition)]
    pub lambda: Partition,
    /// Parts of μ, comma separated; empty for the empty partition.
    #[arg(long, default_value = "", value_parser = parse_partition)]
    pub mu: Partition,
}

impl PairArgs {
    fn pair(&self) -> PartitionPair {
        PartitionPair::new(self.lambda.clone(), self.mu.clone())
    }
}

fn parse_partition(s: &str) -> Result<Partition, chiral_core::Error> {
    s.parse()
}

#[derive(Debug, Args)]
pub struct CharacterArgs {
    #[arg(long, value_enum, default_value_t = Group::Full)]
    pub gamma: Group,
    #[arg(long)]
    pub max_order: u32,
    /// Dimension table to use instead of the built-in one.
    #[arg(long)]
    pub table: Option<PathBuf>,
    /// Compute the series both ways and compare.
    #[arg(long)]
    pub check: bool,
}

#[derive(Debug, Args)]
pub struct LiftArgs {
    #[command(flatten)]
    pub pair: PairArgs,
    /// Level-zero construction with the quasi-modular correction.
    #[arg(long, conflicts_with_all = ["closed_form", "weight"])]
    pub constant: bool,
    /// Closed-form construction for a pure `b` word.
    #[arg(long)]
    pub closed_form: bool,
    /// Weight of the modular form; defaults to minus twice the level.
    #[arg(long, allow_hyphen_values = true)]
    pub weight: Option<i64>,
}

/// Rendered output of a successful command.
#[derive(Clone, Debug)]
pub struct Report {
    pub outcome: Outcome,
    pub output: String,
}

impl Report {
    fn new(outcome: Outcome, output: String) -> Self {
        Report { outcome, output }
    }
}

pub fn run(cli: &Cli) -> Result<Report, CliError> {
    let slack = cli.cap_slack;
    match &cli.command {
        Command::Character(args) => character(args, cli.json),
        Command::Lift(args) => lift(args, slack, cli.json),
        Command::Adjoint(args) => adjoint(args, slack, cli.json),
        Command::Verify { input } => verify(input, slack, cli.json),
        Command::Dims { gamma: Group::Full, max } => {
            let t = DimensionTable::full_modular(*max as i64);
            let out = if cli.json {
                t.to_json()
            } else {
                t.entries().iter().map(|(k, d)| format!("{k} {d}")).collect::<Vec<_>>().join("\n")
            };
            Ok(Report::new(Outcome::Ok, out))
        }
        Command::Selftest => {
            let (ok, out) = selftest::run(cli.json);
            Ok(Report::new(Outcome::from_check(ok), out))
        }
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn to_value(s: &str) -> Value {
    serde_json::from_str(s).expect("library JSON is well formed")
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize")
}

fn character(args: &CharacterArgs, as_json: bool) -> Result<Report, CliError> {
    let (group, dims) = match &args.table {
        Some(path) => {
            let t = DimensionTable::from_json(&read(path)?)?;
            (t.group.clone(), Dimensions::Table(t))
        }
        None => ("full".to_string(), Dimensions::FullModular),
    };
    let series = character_direct(args.max_order, &dims)?;
    let mut mismatch = None;
    if args.check {
        let other = character_product(args.max_order, &dims)?;
        mismatch = (0..=args.max_order as usize).find(|&n| series.coeff(n) != other.coeff(n));
    }
    let coeffs: Vec<String> = series.coeffs().iter().map(format_q).collect();
    let out = if as_json {
        pretty(&json!({
            "group": group,
            "max_order": args.max_order,
            "coefficients": coeffs,
            "checked": args.check,
            "first_mismatch": mismatch,
        }))
    } else {
        let mut s = format!("coefficients: {}", coeffs.join(", "));
        if args.check {
            match mismatch {
                None => s.push_str("\ncheck: product and direct series agree"),
                Some(n) => s.push_str(&format!("\ncheck: series differ at q^{n}")),
            }
        }
        s
    };
    Ok(Report::new(Outcome::from_check(mismatch.is_none()), out))
}

fn build_lifting(args: &LiftArgs, slack: u32) -> Result<(LiftingOperator, FunctionSymbol), CliError> {
    let p = args.pair.pair();
    let weight = args.weight.unwrap_or(-2 * p.level());
    if args.constant {
        let op = constant_lifting_with_slack(&p, slack)?;
        return Ok((op, FunctionSymbol::eisenstein()));
    }
    let op = if args.closed_form {
        if !p.lambda.is_empty() {
            return Err(CliError::Usage(format!(
                "--closed-form needs an empty --lambda, got {:?}",
                p.lambda.to_string()
            )));
        }
        closed_form_operator(&p.mu, weight)?
    } else if p.level() == 0 {
        return Err(CliError::Usage(format!(
            "{p:?} has level 0; pass --constant for its lifting"
        )));
    } else {
        solve_with_slack(&p, slack)?.0
    };
    if weight <= 0 || weight % 2 != 0 {
        return Err(chiral_core::Error::Precondition(format!(
            "the form must have even positive weight, got {weight}"
        ))
        .into());
    }
    Ok((op, FunctionSymbol::modular("f", weight)))
}

fn lift(args: &LiftArgs, slack: u32, as_json: bool) -> Result<Report, CliError> {
    let (op, symbol) = build_lifting(args, slack)?;
    let v = lifting_vector(&op, &symbol)?;
    let report = verify_invariance_with_slack(&v, slack)?;
    let out = if as_json {
        pretty(&json!({
            "operator": to_value(&operator_to_json(&op)),
            "vector": vector_terms(&v),
            "invariant": report.invariant,
            "residual": vector_terms(&report.residual),
        }))
    } else {
        let mut s = format!("operator ({}): {}\nvector: {v}\n", op.kind, op.element);
        s.push_str(&invariance_text(&report));
        s
    };
    Ok(Report::new(Outcome::from_check(report.invariant), out))
}

fn invariance_text(r: &InvarianceReport) -> String {
    if r.invariant {
        "invariant: yes".to_string()
    } else {
        format!("invariant: no\nresidual: {}", r.residual)
    }
}

fn adjoint(args: &PairArgs, slack: u32, as_json: bool) -> Result<Report, CliError> {
    let p = args.pair();
    let exp = adjoint_monomial_with_slack(&p, slack)?;
    let out = if as_json {
        pretty(&json!({
            "lambda": p.lambda.to_string(),
            "mu": p.mu.to_string(),
            "weight_cap": exp.weight_cap,
            "terms": element_terms(&exp.element),
        }))
    } else {
        exp.element.to_string()
    };
    Ok(Report::new(Outcome::Ok, out))
}

/// Accepts a bare array of terms or the object printed by `lift --json`.
fn read_vector(text: &str) -> Result<InvariantVector, CliError> {
    let bad = |reason: String| chiral_core::Error::parse("vector file", text, reason);
    let value: Value = serde_json::from_str(text).map_err(|e| bad(e.to_string()))?;
    let terms = match value {
        Value::Object(mut map) => map
            .remove("vector")
            .ok_or_else(|| bad("object has no \"vector\" field".to_string()))?,
        v => v,
    };
    let terms = serde_json::from_value::<Vec<_>>(terms).map_err(|e| bad(e.to_string()))?;
    Ok(vector_from_terms(&terms)?)
}

fn verify(input: &Path, slack: u32, as_json: bool) -> Result<Report, CliError> {
    let v = read_vector(&read(input)?)?;
    let report = verify_invariance_with_slack(&v, slack)?;
    let out = if as_json {
        pretty(&json!({
            "invariant": report.invariant,
            "residual": vector_terms(&report.residual),
        }))
    } else {
        invariance_text(&report)
    };
    Ok(Report::new(Outcome::from_check(report.invariant), out))
}
