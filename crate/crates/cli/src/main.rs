//! `concord`: command-line access to the concord-core library.
//!
//! Every subcommand writes one JSON document (or CSV for `signature
//! --emit-csv`) to standard output or `--output`. Exit codes: 0 success,
//! 2 invalid input, 3 budget or precision limit, 64 usage error.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use concord::family::{gap_lower_bound, parse_rational, plan_family, verify_plan, EpsilonVector, FamilyPlan};
use concord::fox::{fox, fox_classical, DerivedSeriesOracle};
use concord::knot::SeifertMatrix;
use concord::rho::{signature_profile, Angle, RhoValue};
use concord::tuples::{find_special_tuple, parse_hom, Pedigree, SpecialCertificate, TupleFamily};
use concord::words::Word;
use concord::Error;
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use serde::de::DeserializeOwned;
use serde::Serialize;

const EXIT_INVALID: u8 = 2;
const EXIT_BUDGET: u8 = 3;
const EXIT_USAGE: u8 = 64;

/// Enumerating more tuples than this requires an explicit `--limit`.
const DEFAULT_TUPLE_CAP: u64 = 100_000;

#[derive(Parser)]
#[command(name = "concord", version, about = "Exact knot-concordance computations")]
struct Cli {
    /// Write the result here instead of standard output (`-` for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    output: Option<PathBuf>,
    /// Emit compact JSON instead of pretty-printed JSON.
    #[arg(long, global = true)]
    compact: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MatrixArg {
    /// Seifert matrix file: {"genus": g, "matrix": [[...]]}.
    #[arg(long, value_name = "FILE")]
    matrix: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Normalized Alexander polynomial of a Seifert matrix.
    Alexander(MatrixArg),
    /// Arf invariant of a Seifert matrix.
    Arf(MatrixArg),
    /// Levine-Tristram signature function as a table of arcs.
    Signature {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Emit CSV `angle_start,angle_end,signature` (angles in units of pi).
        #[arg(long)]
        emit_csv: bool,
    },
    /// The abelian rho-invariant, exact when possible.
    Rho {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Width bound for the enclosure when the value is not exact.
        #[arg(long, default_value = "1e-9")]
        tolerance: String,
    },
    /// Fox derivative of a word.
    Fox {
        /// Word such as `x1 x2^-1 x1^-1`.
        #[arg(long)]
        word: String,
        /// Generator index, starting at 1.
        #[arg(long)]
        index: usize,
        /// Rank of the free group; defaults to the largest generator used.
        #[arg(long)]
        rank: Option<usize>,
        /// Use the classical left derivative instead of the conjugated one.
        #[arg(long)]
        classical: bool,
    },
    /// Enumerate the commutator tuple family at a level.
    Tuples {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        level: usize,
        /// First index to emit.
        #[arg(long, default_value = "0")]
        start: String,
        /// Maximum number of tuples to emit.
        #[arg(long)]
        limit: Option<u64>,
    },
    /// Find a tuple mapping to an independent family under a homomorphism.
    Special {
        #[arg(long)]
        genus: usize,
        #[arg(long)]
        level: usize,
        /// `ab`, `id`, `trivial`, `ab:1,0;0,1;...` or `free:R:w1;w2;...`.
        #[arg(long)]
        hom: String,
        /// Step budget for the derived-series oracle.
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Plan an infection schedule for a family of knots.
    Plan {
        #[command(flatten)]
        matrix: MatrixArg,
        /// Solvability level n.
        #[arg(long)]
        level: usize,
        /// Number of infection axes m.
        #[arg(long)]
        axes: usize,
        /// Bound c_M, as an integer, p/q or decimal.
        #[arg(long)]
        cm: String,
        /// Number of knots in the family.
        #[arg(long)]
        count: usize,
    },
    /// Recompute and check every certificate in a plan.
    Verify {
        #[arg(long, value_name = "FILE")]
        plan: PathBuf,
    },
    /// Lower bound on the rho gap between two members of a plan.
    Gap {
        #[arg(long, value_name = "FILE")]
        plan: PathBuf,
        #[arg(long)]
        i: usize,
        #[arg(long)]
        j: usize,
        /// Weights for knot i, e.g. `101`.
        #[arg(long)]
        eps_i: EpsilonVector,
        /// Weights for knot j.
        #[arg(long)]
        eps_j: EpsilonVector,
    },
}

#[derive(Debug)]
enum Failure {
    Invalid { message: String, path: Option<String> },
    Budget(String),
}

impl Failure {
    fn invalid(message: impl Into<String>) -> Self {
        Failure::Invalid { message: message.into(), path: None }
    }

    fn code(&self) -> u8 {
        match self {
            Failure::Invalid { .. } => EXIT_INVALID,
            Failure::Budget(_) => EXIT_BUDGET,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::BudgetExceeded { .. } | Error::Precision(_) => Failure::Budget(e.to_string()),
            other => Failure::invalid(other.to_string()),
        }
    }
}

enum Output {
    Json(serde_json::Value),
    Text(String),
}

fn json<T: Serialize>(value: &T) -> Result<Output, Failure> {
    serde_json::to_value(value)
        .map(Output::Json)
        .map_err(|e| Failure::invalid(e.to_string()))
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, Failure> {
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let pointer = e.path().to_string();
        Failure::Invalid {
            message: format!("{}: {}", path.display(), e.inner()),
            path: Some(pointer),
        }
    })
}

fn rational_arg(name: &str, text: &str) -> Result<BigRational, Failure> {
    let t = text.trim();
    let parsed = match t.split_once(['e', 'E']) {
        Some((mantissa, exponent)) => {
            let m = parse_rational(mantissa);
            let e: Result<i32, _> = exponent.parse();
            match (m, e) {
                (Ok(m), Ok(e)) => {
                    let ten = BigRational::from_integer(BigInt::from(10));
                    Ok(m * num_traits::pow::Pow::pow(&ten, e))
                }
                _ => Err(()),
            }
        }
        None => parse_rational(t).map_err(|_| ()),
    };
    parsed.map_err(|()| Failure::invalid(format!("--{name}: cannot parse {text:?} as a rational")))
}

fn number(x: &BigInt) -> serde_json::Value {
    match x.to_i64() {
        Some(v) => v.into(),
        None => x.to_string().into(),
    }
}

#[derive(Serialize)]
struct RhoOut {
    exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lo: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    hi: Option<String>,
}

#[derive(Serialize)]
struct ArcOut {
    start: String,
    end: String,
    signature: String,
}

#[derive(Serialize)]
struct JumpOut {
    angle: String,
    exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    root_of_unity_order: Option<u64>,
}

#[derive(Serialize)]
struct TupleOut {
    index: String,
    words: Vec<String>,
    pedigree: Pedigree,
}

#[derive(Serialize)]
struct TuplesOut {
    genus: usize,
    level: usize,
    count: String,
    start: String,
    tuples: Vec<TupleOut>,
}

#[derive(Serialize)]
struct SpecialOut {
    genus: usize,
    level: usize,
    words: Vec<String>,
    reordered_words: Vec<String>,
    pedigree: Pedigree,
    good: bool,
    certificate: SpecialCertificate,
}

fn words(ws: &[Word]) -> Vec<String> {
    ws.iter().map(Word::to_string).collect()
}

fn angle(a: &Angle) -> String {
    a.to_string()
}

fn run(command: Command) -> Result<Output, Failure> {
    match command {
        Command::Alexander(m) => {
            let v: SeifertMatrix = read_json(&m.matrix)?;
            let a = v.alexander();
            let coefficients: Vec<serde_json::Value> = a.coefficients().iter().map(number).collect();
            Ok(Output::Json(serde_json::json!({
                "coefficients": coefficients,
                "degree": a.degree(),
                "polynomial": a.to_string(),
            })))
        }
        Command::Arf(m) => {
            let v: SeifertMatrix = read_json(&m.matrix)?;
            Ok(Output::Json(serde_json::json!({ "arf": v.arf() })))
        }
        Command::Signature { matrix, emit_csv } => {
            let v: SeifertMatrix = read_json(&matrix.matrix)?;
            let profile = signature_profile(&v)?;
            let arcs: Vec<ArcOut> = profile
                .arcs()
                .iter()
                .map(|a| ArcOut {
                    start: angle(&a.start),
                    end: angle(&a.end),
                    signature: a.value.to_string(),
                })
                .collect();
            if emit_csv {
                let mut out = String::from("angle_start,angle_end,signature\n");
                for a in &arcs {
                    out.push_str(&format!("{},{},{}\n", a.start, a.end, a.signature));
                }
                return Ok(Output::Text(out));
            }
            let jumps: Vec<JumpOut> = profile
                .jumps()
                .iter()
                .map(|j| JumpOut {
                    angle: angle(j.angle()),
                    exact: j.angle().is_exact(),
                    root_of_unity_order: j.root_of_unity_order(),
                })
                .collect();
            Ok(Output::Json(serde_json::json!({
                "arcs": serde_json::to_value(arcs).map_err(|e| Failure::invalid(e.to_string()))?,
                "jumps": serde_json::to_value(jumps).map_err(|e| Failure::invalid(e.to_string()))?,
            })))
        }
        Command::Rho { matrix, tolerance } => {
            let tol = rational_arg("tolerance", &tolerance)?;
            let v: SeifertMatrix = read_json(&matrix.matrix)?;
            let out = match concord::rho::rho_z(&v, &tol)? {
                RhoValue::Exact(r) => RhoOut { exact: true, value: Some(r.to_string()), lo: None, hi: None },
                RhoValue::Interval { lo, hi } => RhoOut {
                    exact: false,
                    value: None,
                    lo: Some(lo.to_string()),
                    hi: Some(hi.to_string()),
                },
            };
            json(&out)
        }
        Command::Fox { word, index, rank, classical } => {
            let w = match rank {
                Some(r) => Word::parse(&word, r)?,
                None => Word::parse_with_min_rank(&word)?,
            };
            let d = if classical { fox_classical(&w, index)? } else { fox(&w, index)? };
            Ok(Output::Json(serde_json::json!({
                "word": w.to_string(),
                "rank": w.rank(),
                "index": index,
                "convention": if classical { "classical" } else { "conjugated" },
                "derivative": d.to_string(),
            })))
        }
        Command::Tuples { genus, level, start, limit } => {
            let family = TupleFamily::new(genus, level)?;
            let count = family.count();
            let start: BigUint = start
                .parse()
                .map_err(|_| Failure::invalid(format!("--start: {start:?} is not a nonnegative integer")))?;
            let available = if start < count { &count - &start } else { BigUint::zero() };
            let take = match limit {
                Some(l) => available.clone().min(BigUint::from(l)),
                None if available > BigUint::from(DEFAULT_TUPLE_CAP) => {
                    return Err(Failure::Budget(format!(
                        "{available} tuples requested; pass --limit to enumerate more than {DEFAULT_TUPLE_CAP}"
                    )))
                }
                None => available,
            };
            let end = &start + &take;
            let tuples = family
                .range(start.clone(), end)
                .map(|t| TupleOut {
                    index: t.index.to_string(),
                    words: words(&t.words),
                    pedigree: t.pedigree,
                })
                .collect();
            json(&TuplesOut { genus, level, count: count.to_string(), start: start.to_string(), tuples })
        }
        Command::Special { genus, level, hom, budget } => {
            if genus == 0 {
                return Err(Failure::invalid("genus must be at least 1"));
            }
            let r = parse_hom(&hom, 2 * genus)?;
            let mut oracle = match budget {
                Some(b) => DerivedSeriesOracle::with_budget(b),
                None => DerivedSeriesOracle::default(),
            };
            let s = find_special_tuple(&r, level, &mut oracle)?;
            if s.genus != genus {
                return Err(Failure::invalid(format!("homomorphism has genus {}, expected {genus}", s.genus)));
            }
            json(&SpecialOut {
                genus: s.genus,
                level: s.level,
                words: words(&s.words),
                reordered_words: words(&s.reordered_words()?),
                pedigree: s.pedigree.clone(),
                good: s.certificate.verdict.is_good(),
                certificate: s.certificate,
            })
        }
        Command::Plan { matrix, level, axes, cm, count } => {
            let c_m = rational_arg("cm", &cm)?;
            let base: SeifertMatrix = read_json(&matrix.matrix)?;
            json(&plan_family(&base, level, axes, &c_m, count)?)
        }
        Command::Verify { plan } => {
            let plan: FamilyPlan = read_json(&plan)?;
            json(&verify_plan(&plan))
        }
        Command::Gap { plan, i, j, eps_i, eps_j } => {
            let plan: FamilyPlan = read_json(&plan)?;
            json(&gap_lower_bound(&plan, i, j, &eps_i, &eps_j)?)
        }
    }
}

fn render(output: Output, compact: bool) -> String {
    match output {
        Output::Text(t) => t,
        Output::Json(v) => {
            let mut s = if compact {
                serde_json::to_string(&v)
            } else {
                serde_json::to_string_pretty(&v)
            }
            .expect("JSON values always serialize");
            s.push('\n');
            s
        }
    }
}

fn report(f: &Failure) {
    let (kind, message, path) = match f {
        Failure::Invalid { message, path } => ("invalid_input", message.as_str(), path.as_deref()),
        Failure::Budget(message) => ("budget", message.as_str(), None),
    };
    let mut doc = serde_json::json!({ "error": kind, "message": message });
    if let Some(p) = path {
        doc["path"] = p.into();
    }
    eprintln!("{doc}");
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(EXIT_USAGE) } else { ExitCode::SUCCESS };
        }
    };
    let text = match run(cli.command) {
        Ok(out) => render(out, cli.compact),
        Err(f) => {
            report(&f);
            return ExitCode::from(f.code());
        }
    };
    let written = match cli.output.as_deref() {
        Some(p) if p != Path::new("-") => fs::write(p, text),
        _ => io::stdout().lock().write_all(text.as_bytes()),
    };
    match written {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            report(&Failure::invalid(format!("cannot write output: {e}")));
            ExitCode::from(EXIT_INVALID)
        }
    }
}
