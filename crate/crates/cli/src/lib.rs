//! Command-line front end. [`run`] takes the argument list and output sinks so
//! that the whole surface can be driven from tests.
//!
//! Exit codes: 0 success, 1 a well-formed input that fails a check, 2 a usage
//! or format error.

use std::fs;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use hamming_equitable::construct::{
    alphabet_lift_two, construct_a, construct_b, eight_cycle_partition, parse_blocks, AlphabetBlocks, LiftBlocks,
};
use hamming_equitable::eigen::{classify_lambda1, classify_u0u1, ClassifiedForm, SymbolSet, TernaryFunction};
use hamming_equitable::io::{
    classification_certificate, enumeration_lines, parse_function, parse_partition, serialize_partition,
    theorem5_certificate, verify_report, PartitionDocument, FORMAT_VERSION,
};
use hamming_equitable::parallel::with_threads;
use hamming_equitable::partition::reduce;
use hamming_equitable::search::{
    classify_theorem5, enumerate, enumerate_ternary_lambda1, enumerate_ternary_u0u1, EnumConstraints, Method,
    Theorem5Tag,
};
use hamming_equitable::{Error, GraphParams, QuotientMatrix, TwoPartition};

#[derive(Parser, Debug)]
#[command(name = "hamming-eq", version, about = "Equitable 2-partitions of Hamming graphs")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Equitability, spectral and orthogonal-array certificates for a partition
    Verify(InputArg),
    /// Permutation switching of a base partition of H(2,q)
    ConstructA {
        #[arg(long)]
        q: usize,
        /// Alphabet blocks, e.g. "0,1|2,3"
        #[arg(long)]
        blocks: String,
        /// Partition document of the base on H(2,q)
        #[arg(long)]
        base: PathBuf,
    },
    /// Alphabet lifting of a pair of induced 8-cycles in H(4,2)
    ConstructB {
        #[arg(long)]
        q: usize,
        /// Symbols of the first lift block, e.g. "0,1"
        #[arg(long)]
        split: String,
        /// Partition document of H(4,2); defaults to the standard 8-cycle pair
        #[arg(long)]
        cycle_pair: Option<PathBuf>,
    },
    /// Alphabet lifting of an equitable partition
    Lift {
        /// Lift blocks of equal size, e.g. "0,1|2,3"
        #[arg(long)]
        blocks: String,
        #[arg(long)]
        input: PathBuf,
    },
    /// The partition of H(4,2) into two induced 8-cycles
    EightCycle,
    /// Classifies a ternary function document
    ClassifyFn(InputArg),
    /// Deletes nonessential coordinates
    Reduce(InputArg),
    /// Enumerates equitable 2-partitions as JSON lines
    Enumerate(EnumerateArgs),
    /// Structural classification of a second-eigenvalue partition
    ClassifyT5(InputArg),
    /// Sweeps all ternary functions and reports class counts
    SweepTernary {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        q: usize,
        /// Classify against the λ1 eigenspace instead of U0 ⊕ U1
        #[arg(long)]
        lambda1: bool,
        #[arg(long, default_value_t = 0)]
        threads: usize,
    },
}

#[derive(Args, Debug)]
struct InputArg {
    /// Path to a JSON document, or "-" for standard input
    input: PathBuf,
}

#[derive(Args, Debug)]
struct EnumerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    q: usize,
    /// Second quotient eigenvalue must be λ_i(n,q)
    #[arg(long, conflicts_with = "quotient")]
    eig_index: Option<usize>,
    /// Exact quotient matrix, e.g. "0,3;1,2"
    #[arg(long)]
    quotient: Option<String>,
    #[arg(long)]
    reduced: bool,
    #[arg(long)]
    up_to_iso: bool,
    #[arg(long, conflicts_with = "backtrack")]
    brute_force: bool,
    #[arg(long)]
    backtrack: bool,
    /// Worker threads (0 = all cores); never changes the output
    #[arg(long, default_value_t = 0)]
    threads: usize,
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Precondition(_) | Error::Reverification(_) | Error::ClassifierContradiction(_) => 1,
            _ => 2,
        };
        Failure { code, message: e.to_string() }
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| usage(format!("reading standard input: {e}")))?;
        return Ok(s);
    }
    fs::read_to_string(path).map_err(|e| usage(format!("reading {}: {e}", path.display())))
}

fn read_partition(path: &Path) -> Result<TwoPartition, Failure> {
    Ok(parse_partition(&read_input(path)?)?)
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("serializable")
}

/// Output lines and exit code of one command.
struct Outcome {
    lines: Vec<String>,
    code: i32,
}

impl Outcome {
    fn ok(line: String) -> Self {
        Outcome { lines: vec![line], code: 0 }
    }
}

fn execute(command: Command) -> Result<Outcome, Failure> {
    match command {
        Command::Verify(arg) => {
            let p = read_partition(&arg.input)?;
            let (report, ok) = verify_report(&p)?;
            Ok(Outcome { lines: vec![pretty(&report)], code: if ok { 0 } else { 1 } })
        }
        Command::ConstructA { q, blocks, base } => {
            let blocks = AlphabetBlocks::parse(q, &blocks)?;
            let base = read_partition(&base)?;
            Ok(Outcome::ok(serialize_partition(&construct_a(&blocks, &base)?)))
        }
        Command::ConstructB { q, split, cycle_pair } => {
            let split = parse_symbol_set(&split)?;
            let pair = match cycle_pair {
                Some(path) => read_partition(&path)?,
                None => eight_cycle_partition(),
            };
            Ok(Outcome::ok(serialize_partition(&construct_b(q, &split, &pair)?)))
        }
        Command::Lift { blocks, input } => {
            let lift = LiftBlocks::parse(&blocks)?;
            let p = read_partition(&input)?;
            Ok(Outcome::ok(serialize_partition(&alphabet_lift_two(&p, &lift)?)))
        }
        Command::EightCycle => Ok(Outcome::ok(serialize_partition(&eight_cycle_partition()))),
        Command::ClassifyFn(arg) => {
            let f = parse_function(&read_input(&arg.input)?)?;
            let t = TernaryFunction::new(f.clone())?;
            let form = classify_u0u1(&t)?;
            let lambda1 = classify_lambda1(&t)?;
            let cert = classification_certificate(&f, &form, &lambda1);
            let code = if form == ClassifiedForm::NotMember { 1 } else { 0 };
            Ok(Outcome { lines: vec![pretty(&cert)], code })
        }
        Command::Reduce(arg) => {
            let p = read_partition(&arg.input)?;
            let (reduced, removed) = reduce(&p)?;
            let doc = json!({
                "format_version": FORMAT_VERSION,
                "partition": PartitionDocument::from_partition(&reduced),
                "removed_coordinates": removed,
            });
            Ok(Outcome::ok(doc.to_string()))
        }
        Command::Enumerate(args) => run_enumerate(args),
        Command::ClassifyT5(arg) => {
            let p = read_partition(&arg.input)?;
            let tag = classify_theorem5(&p)?;
            let code = if tag == Theorem5Tag::Unclassified { 1 } else { 0 };
            Ok(Outcome { lines: vec![pretty(&theorem5_certificate(&p, &tag))], code })
        }
        Command::SweepTernary { n, q, lambda1, threads } => {
            let params = GraphParams::new(n, q)?;
            let (census, disagreements) = with_threads(threads, || -> Result<(Value, u64), Error> {
                Ok(if lambda1 {
                    let c = enumerate_ternary_lambda1(&params)?;
                    let d = c.disagreements;
                    (json!({ "kind": "lambda1", "census": c }), d)
                } else {
                    let c = enumerate_ternary_u0u1(&params)?;
                    let d = c.disagreements;
                    (json!({ "kind": "u0u1", "census": c }), d)
                })
            })?;
            let mut out = json!({ "format_version": FORMAT_VERSION, "n": n, "q": q });
            if let (Value::Object(o), Value::Object(c)) = (&mut out, census) {
                o.extend(c);
            }
            Ok(Outcome { lines: vec![out.to_string()], code: if disagreements == 0 { 0 } else { 1 } })
        }
    }
}

fn parse_symbol_set(s: &str) -> Result<SymbolSet, Failure> {
    match parse_blocks(s)?.as_slice() {
        [one] => Ok(one.clone()),
        _ => Err(usage(format!("expected a single symbol set, got {s:?}"))),
    }
}

fn run_enumerate(args: EnumerateArgs) -> Result<Outcome, Failure> {
    let params = GraphParams::new(args.n, args.q)?;
    let quotient = args.quotient.as_deref().map(QuotientMatrix::parse).transpose()?;
    let constrained = quotient.is_some() || args.eig_index.is_some();
    let constraints = EnumConstraints {
        quotient,
        eigenvalue_index: args.eig_index,
        reduced_only: args.reduced,
        up_to_iso: args.up_to_iso,
    };
    let method = if args.brute_force || (!args.backtrack && !constrained) {
        Method::BruteForce
    } else {
        Method::Backtrack
    };
    let result = with_threads(args.threads, || enumerate(&params, &constraints, method))?;
    Ok(Outcome { lines: enumeration_lines(&result), code: 0 })
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, S>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let sink: &mut dyn Write = if e.use_stderr() { stderr } else { stdout };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    match execute(cli.command) {
        Ok(outcome) => {
            for line in outcome.lines {
                if writeln!(stdout, "{line}").is_err() {
                    return 2;
                }
            }
            outcome.code
        }
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}
