//! The `subrec` command line: evaluate representations, run conversions and
//! write call-count profiles.

use std::ffi::OsString;
use std::io::Write;
use std::rc::Rc;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use subrec_core::convert::graph::{self, Plan, DEFAULT_BASES};
use subrec_core::convert::Source;
use subrec_core::numeric::DigitString;
use subrec_core::reference::{ground_truth, Surd};
use subrec_core::reps::{InstrumentedOracle, Oracle, OracleStats, QueryShape, RepKind, Value};
use subrec_core::{Error, Rational};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_BLOCKED: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "subrec", version, about = "Representations of irrational numbers and the conversions between them")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Named numbers usable with --number.
    ListNumbers,
    /// Representation tokens usable with --rep, --from and --to.
    ListReps,
    /// Print the first values of a representation of a number.
    Eval {
        #[arg(long)]
        number: String,
        #[arg(long)]
        rep: String,
        #[arg(long, default_value_t = 8)]
        n: u64,
        #[arg(short, long, default_value_t = 10)]
        base: u64,
    },
    /// Convert one representation into another and print the converted values.
    Convert {
        #[arg(long, default_value = "sqrt2m1")]
        number: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 8)]
        n: u64,
        #[arg(short, long, default_value_t = 10)]
        base: u64,
        #[arg(long, value_enum, default_value_t = StatsFormat::Text)]
        stats: StatsFormat,
    },
    /// Oracle calls of a conversion for n = 1..=nmax, as CSV.
    Profile {
        #[arg(long, default_value = "sqrt2m1")]
        number: String,
        #[arg(long)]
        from: String,
        #[arg(long)]
        to: String,
        #[arg(long, default_value_t = 16)]
        nmax: u64,
        #[arg(short, long, default_value_t = 10)]
        base: u64,
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Which representations convert into which.
    Matrix {
        #[arg(long, value_delimiter = ',', default_values_t = DEFAULT_BASES.to_vec())]
        bases: Vec<u64>,
        /// One line per pair with the adapter chain or the reason it is blocked.
        #[arg(long)]
        pairs: bool,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum StatsFormat {
    Text,
    Json,
    None,
}

#[derive(Serialize, Debug, Clone, PartialEq, Eq)]
pub struct ProfileRow {
    pub n: u64,
    pub calls: u64,
    pub distinct_calls: u64,
    pub max_query_bits: u64,
    pub max_answer_bits: u64,
    pub wall_ns: u128,
}

/// Exit status for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Blocked { .. } | Error::MissingTransitionFactor { .. } => EXIT_BLOCKED,
        Error::Parse(_) => EXIT_USAGE,
        _ => EXIT_FAILURE,
    }
}

/// Run the command line with the given arguments; returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(cli.command, out) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn io(e: std::io::Error) -> Error {
    Error::InvalidQuery(format!("output failed: {e}"))
}

fn number(s: &str) -> Result<Surd, Error> {
    s.parse()
}

fn rep(token: &str, base: u64) -> Result<RepKind, Error> {
    RepKind::parse(token, Some(base))
}

fn execute(cmd: Command, out: &mut dyn Write) -> Result<(), Error> {
    match cmd {
        Command::ListNumbers => {
            for (name, a) in Surd::panel() {
                writeln!(out, "{name} {a}").map_err(io)?;
            }
        }
        Command::ListReps => {
            for k in RepKind::catalogue(DEFAULT_BASES) {
                writeln!(out, "{} {}", k.token(), shape_name(k.query_shape())).map_err(io)?;
            }
        }
        Command::Eval { number: num, rep: r, n, base } => {
            let a = number(&num)?;
            let kind = rep(&r, base)?;
            let o = ground_truth(&a, kind)?;
            let answers = queries(kind, n, base)?.iter().map(|q| o.query(q)).collect::<Result<Vec<_>, _>>()?;
            writeln!(out, "{}", render(kind, &answers)?).map_err(io)?;
        }
        Command::Convert { number: num, from, to, n, base, stats } => {
            let a = number(&num)?;
            let (from, to) = (rep(&from, base)?, rep(&to, base)?);
            let plan = graph::plan(from, to, DEFAULT_BASES)?;
            let (target, source) = build(&a, &plan)?;
            let mut last = OracleStats::default();
            let mut answers = Vec::new();
            for q in queries(to, n, base)? {
                source.reset();
                answers.push(target.query(&q)?);
                last = source.stats();
            }
            writeln!(out, "{}", render(to, &answers)?).map_err(io)?;
            match stats {
                StatsFormat::Text => writeln!(
                    out,
                    "calls={} distinct_calls={} max_query_bits={} max_answer_bits={}",
                    last.calls, last.distinct_calls, last.max_query_bits, last.max_answer_bits
                )
                .map_err(io)?,
                StatsFormat::Json => {
                    writeln!(out, "{}", serde_json::to_string(&last).expect("stats serialize")).map_err(io)?
                }
                StatsFormat::None => {}
            }
        }
        Command::Profile { number: num, from, to, nmax, base, out: path } => {
            let a = number(&num)?;
            let (from, to) = (rep(&from, base)?, rep(&to, base)?);
            let rows = profile(&a, from, to, nmax, base)?;
            match path {
                Some(p) => {
                    let f = std::fs::File::create(&p).map_err(io)?;
                    write_csv(&rows, f)?;
                }
                None => write_csv(&rows, &mut *out)?,
            }
        }
        Command::Matrix { bases, pairs } => {
            if bases.iter().any(|&b| b < 2) {
                return Err(Error::Parse("bases must be at least 2".into()));
            }
            print_matrix(&bases, pairs, out)?;
        }
    }
    Ok(())
}

fn shape_name(s: QueryShape) -> String {
    match s {
        QueryShape::Index(i) => format!("index>={i}"),
        QueryShape::Rational => "rational".into(),
        QueryShape::Fraction => "fraction".into(),
        QueryShape::BaseIndex => "base,index".into(),
    }
}

/// The queries `eval` and `convert` print answers to.
pub fn queries(kind: RepKind, n: u64, base: u64) -> Result<Vec<Value>, Error> {
    if n == 0 {
        return Err(Error::Parse("--n must be at least 1".into()));
    }
    if kind == RepKind::Hurwitz {
        return Ok(vec![Value::int(n)]);
    }
    Ok(match kind.query_shape() {
        QueryShape::Index(s) => (s..s + n).map(Value::int).collect(),
        QueryShape::Rational => (0..=n).map(|k| Value::Rat(Rational::new(k, n).expect("n >= 1"))).collect(),
        QueryShape::Fraction => (0..=n).map(|k| Value::pair(k, n)).collect(),
        QueryShape::BaseIndex => (1..=n).map(|i| Value::pair(base, i)).collect(),
    })
}

/// The query a profile row measures.
pub fn profile_query(kind: RepKind, n: u64, base: u64) -> Value {
    match kind.query_shape() {
        QueryShape::Index(_) => Value::int(n),
        QueryShape::Rational => Value::Rat(Rational::new(n, 2 * n + 1).expect("positive")),
        QueryShape::Fraction => Value::pair(n, 2 * n + 1),
        QueryShape::BaseIndex => Value::pair(base, n),
    }
}

/// Answers on one line: digit kinds as a digit string, the rest space separated.
pub fn render(kind: RepKind, answers: &[Value]) -> Result<String, Error> {
    let digit_base = match kind {
        RepKind::BaseExpansion(b) => Some(b),
        RepKind::GrayCode => Some(2),
        _ => None,
    };
    if let Some(b) = digit_base {
        let digits = answers
            .iter()
            .map(|v| match v {
                Value::Int(d) => u64::try_from(d).map_err(|_| Error::InvalidQuery(format!("{d} is not a digit"))),
                v => Err(Error::InvalidQuery(format!("{v} is not a digit"))),
            })
            .collect::<Result<Vec<_>, _>>()?;
        return Ok(DigitString::new(b, digits)?.to_string());
    }
    let words: Vec<String> = answers
        .iter()
        .map(|v| match v {
            Value::Bits(p) => p.to_string(),
            v => v.to_string(),
        })
        .collect();
    Ok(words.join(" "))
}

/// Instrumented ground truth for the plan's source, and the plan built on it.
fn build(a: &Surd, plan: &Plan) -> Result<(Source, Rc<InstrumentedOracle>), Error> {
    let from = leaf(plan);
    let source = Rc::new(InstrumentedOracle::new(Box::new(ground_truth(a, from)?), false));
    let s = Rc::clone(&source);
    let target = plan.build(&move || Box::new(Rc::clone(&s)) as Source)?;
    Ok((target, source))
}

fn leaf(plan: &Plan) -> RepKind {
    match plan {
        Plan::Source(k) => *k,
        Plan::Step(p, _) | Plan::Both(p, _, _) => leaf(p),
    }
}

pub fn profile(a: &Surd, from: RepKind, to: RepKind, nmax: u64, base: u64) -> Result<Vec<ProfileRow>, Error> {
    let plan = graph::plan(from, to, DEFAULT_BASES)?;
    let (target, source) = build(a, &plan)?;
    let mut rows = Vec::new();
    for n in 1..=nmax {
        let q = profile_query(to, n, base);
        source.reset();
        let t = Instant::now();
        target.query(&q)?;
        let wall_ns = t.elapsed().as_nanos();
        let s = source.stats();
        rows.push(ProfileRow {
            n,
            calls: s.calls,
            distinct_calls: s.distinct_calls,
            max_query_bits: s.max_query_bits,
            max_answer_bits: s.max_answer_bits,
            wall_ns,
        });
    }
    Ok(rows)
}

fn write_csv(rows: &[ProfileRow], w: impl Write) -> Result<(), Error> {
    let mut w = csv::Writer::from_writer(w);
    for r in rows {
        w.serialize(r).map_err(|e| Error::InvalidQuery(format!("csv: {e}")))?;
    }
    w.flush().map_err(io)
}

/// Cell markers of the matrix.
pub const SAME: &str = "=";
pub const CONVERTIBLE: &str = ".";
pub const BLOCKED: &str = "B";

fn print_matrix(bases: &[u64], pairs: bool, out: &mut dyn Write) -> Result<(), Error> {
    let cells = graph::matrix(bases);
    if pairs {
        for (from, to, cell) in cells {
            match cell {
                Ok(p) => writeln!(out, "{} {} {}", from.token(), to.token(), p),
                Err(e) => writeln!(out, "{} {} BLOCKED {}", from.token(), to.token(), e),
            }
            .map_err(io)?;
        }
        return Ok(());
    }
    let kinds = RepKind::catalogue(bases);
    let head: Vec<String> = kinds.iter().map(|k| k.token()).collect();
    writeln!(out, "from\\to {}", head.join(" ")).map_err(io)?;
    for (row, from) in cells.chunks(kinds.len()).zip(&kinds) {
        let marks: Vec<&str> = row
            .iter()
            .map(|(f, t, c)| match c {
                _ if f == t => SAME,
                Ok(_) => CONVERTIBLE,
                Err(_) => BLOCKED,
            })
            .collect();
        writeln!(out, "{} {}", from.token(), marks.join(" ")).map_err(io)?;
    }
    Ok(())
}

/// Parse the grid printed by `matrix` back into `(from, to, blocked)` triples.
pub fn parse_matrix(text: &str) -> Result<Vec<(String, String, bool)>, Error> {
    let mut lines = text.lines();
    let head: Vec<&str> = lines
        .next()
        .and_then(|l| l.strip_prefix("from\\to "))
        .ok_or_else(|| Error::Parse("missing matrix header".into()))?
        .split_whitespace()
        .collect();
    let mut out = Vec::new();
    for line in lines {
        let mut words = line.split_whitespace();
        let from = words.next().ok_or_else(|| Error::Parse("empty matrix row".into()))?;
        let marks: Vec<&str> = words.collect();
        if marks.len() != head.len() {
            return Err(Error::Parse(format!("row {from} has {} cells, expected {}", marks.len(), head.len())));
        }
        for (to, m) in head.iter().zip(marks) {
            out.push((from.to_string(), to.to_string(), m == BLOCKED));
        }
    }
    Ok(out)
}
