//! `aifv`: batch front end for code-tuple analysis.
//!
//! Exit codes: 0 on success, 1 on a domain error (bad input file, a property
//! that does not hold, a failed check), 2 on a usage error.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use aifv_core::bits::format_set;
use aifv_core::classes;
use aifv_core::codec;
use aifv_core::goldens;
use aifv_core::markov;
use aifv_core::prefix_sets::{self, PrefixSets};
use aifv_core::reproduction;
use aifv_core::search::{self, Filter, SearchSpace};
use aifv_core::transforms::{self, Target};
use aifv_core::{analysis, BitSeq, CodeTuple, SourceDist, SourceSeq};
use clap::error::ErrorKind;
use clap::{Args, CommandFactory, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "aifv", version, about = "Code-tuples with bounded decoding delay")]
struct Cli {
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Subcommand)]
enum Verb {
    /// Extendability, k-bit delay decodability and regularity.
    Check {
        #[command(flatten)]
        tuple: TupleArg,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Membership in every class, with the reason for each failure.
    Classify {
        #[command(flatten)]
        tuple: TupleArg,
        /// Also require a unique stationary distribution under this source.
        #[arg(long)]
        dist: Option<PathBuf>,
    },
    /// Prefix sets P^k of every table, or of one prefix in one table.
    Psets {
        #[command(flatten)]
        tuple: TupleArg,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Bit string `b`; prints P^k(b) and the strict variant for `--table`.
        #[arg(long, requires = "table")]
        prefix: Option<String>,
        #[arg(long)]
        table: Option<usize>,
    },
    /// Encodes source sequences, one per line of the input.
    Encode {
        #[command(flatten)]
        tuple: TupleArg,
        #[arg(long, default_value_t = 0)]
        start: usize,
        /// Source sequence; read from standard input when absent.
        #[arg(long)]
        input: Option<String>,
    },
    /// Decodes bit strings, one per line of the input.
    Decode {
        #[command(flatten)]
        tuple: TupleArg,
        #[arg(long, default_value_t = 0)]
        start: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
        /// Bit string of '0' and '1'; read from standard input when absent.
        #[arg(long, conflicts_with = "roundtrip")]
        bits: Option<String>,
        /// Round-trip random sequences instead of decoding input.
        #[arg(long, requires = "seed")]
        roundtrip: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 40)]
        max_len: usize,
    },
    /// Applies rotation, dot, double-dot, or a chain of them.
    Transform {
        #[command(flatten)]
        tuple: TupleArg,
        #[arg(long, value_enum)]
        op: Op,
        /// Class to reach with `--op chain`.
        #[arg(long)]
        target: Option<Target>,
        /// Source distribution for `--op chain`.
        #[arg(long)]
        dist: Option<PathBuf>,
    },
    /// Transition matrix and stationary distribution.
    Stationary {
        #[command(flatten)]
        tuple: TupleArg,
        #[arg(long)]
        dist: PathBuf,
    },
    /// Per-table and average codeword length.
    Avglen {
        #[command(flatten)]
        tuple: TupleArg,
        #[arg(long)]
        dist: PathBuf,
    },
    /// Exhaustive minimum of the average length over a bounded space.
    Search {
        #[arg(long)]
        sigma: usize,
        #[arg(long, default_value_t = search::DEFAULT_MAX_TABLES)]
        tables: usize,
        #[arg(long, default_value_t = search::DEFAULT_MAX_LEN)]
        max_len: usize,
        #[arg(long, default_value = "f0")]
        filter: Filter,
        #[arg(long)]
        dist: PathBuf,
        /// Run spaces above the default size limit.
        #[arg(long)]
        allow_large: bool,
    },
    /// Huffman lengths, optionally against the best AIFV code-tuple.
    Huffman {
        #[arg(long)]
        dist: PathBuf,
        /// Also search AIFV code-tuples with up to this many codeword bits.
        #[arg(long)]
        compare_max_len: Option<usize>,
    },
    /// Reproduces the worked examples and prints PASS or FAIL per item.
    Goldens {
        /// Write the built-in code-tuples to this directory instead.
        #[arg(long)]
        export: Option<PathBuf>,
    },
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct TupleArg {
    /// Code-tuple file.
    #[arg(long)]
    tuple: Option<PathBuf>,
    /// Built-in code-tuple: alpha, beta, ..., kappa.
    #[arg(long)]
    builtin: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Op {
    Rotate,
    Dot,
    Ddot,
    Chain,
}

/// A failed run. A report that shows a failed check goes to standard output;
/// anything else goes to the error stream.
struct Failure {
    code: u8,
    message: String,
    report: bool,
}

type Outcome = Result<String, Failure>;

fn domain(e: impl std::fmt::Display) -> Failure {
    Failure { code: 1, message: e.to_string(), report: false }
}

fn usage(kind: ErrorKind, message: &str) -> Failure {
    let rendered = Cli::command().error(kind, message).render().to_string();
    Failure { code: 2, message: rendered.trim_end().to_string(), report: false }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        return read_stdin();
    }
    fs::read_to_string(path).map_err(|e| domain(format!("{}: {e}", path.display())))
}

fn read_stdin() -> Result<String, Failure> {
    let mut text = String::new();
    io::stdin().read_to_string(&mut text).map_err(domain)?;
    Ok(text)
}

fn load_tuple(arg: &TupleArg) -> Result<CodeTuple, Failure> {
    if let Some(name) = &arg.builtin {
        return goldens::lookup(name)
            .ok_or_else(|| domain(format!("no built-in code-tuple named {name:?}; try one of {}", goldens::NAMES.join(", "))));
    }
    let path = arg.tuple.as_ref().expect("clap requires one of the group");
    CodeTuple::parse(&read_text(path)?).map_err(|e| domain(format!("{}: {e}", path.display())))
}

fn load_dist(path: &Path) -> Result<SourceDist, Failure> {
    SourceDist::parse(&read_text(path)?).map_err(|e| domain(format!("{}: {e}", path.display())))
}

/// Input lines without comments or blanks.
fn lines(inline: Option<&str>) -> Result<Vec<String>, Failure> {
    let text = match inline {
        Some(s) => s.to_string(),
        None => read_stdin()?,
    };
    Ok(text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim().to_string())
        .filter(|l| !l.is_empty())
        .collect())
}

fn check(f: &CodeTuple, k: usize) -> Outcome {
    let ps = PrefixSets::with_cap(f, k.max(prefix_sets::DEFAULT_K_CAP));
    let report = analysis::decodability(&ps, k);
    let reach = analysis::reachability(f);
    let mut out = String::new();
    writeln!(out, "tables = {}", f.num_tables()).unwrap();
    writeln!(out, "sigma = {}", f.sigma()).unwrap();
    match analysis::unextendable_table(&ps) {
        None => writeln!(out, "extendable = true").unwrap(),
        Some(t) => writeln!(out, "extendable = false (table {t} has an empty P1)").unwrap(),
    }
    writeln!(out, "decodable_k{k} = {}", report.decodable()).unwrap();
    for v in &report.violations {
        writeln!(out, "violation = {}", v.describe(f)).unwrap();
    }
    let members: Vec<String> = reach.members.iter().map(usize::to_string).collect();
    writeln!(out, "reachable = {{{}}}", members.join(",")).unwrap();
    writeln!(out, "regular = {}", !reach.members.is_empty()).unwrap();
    let m: Vec<String> = analysis::m_set(&ps).iter().map(usize::to_string).collect();
    write!(out, "two_element_p2 = {{{}}}", m.join(",")).unwrap();
    Ok(out)
}

fn psets(f: &CodeTuple, k: usize, prefix: Option<&str>, table: Option<usize>) -> Outcome {
    let ps = PrefixSets::with_cap(f, k.max(prefix_sets::DEFAULT_K_CAP));
    match (prefix, table) {
        (Some(p), Some(i)) => {
            f.check_table(i).map_err(domain)?;
            let b: BitSeq = p.parse().map_err(domain)?;
            Ok(format!(
                "P{k}[{i}]({b})={}\nPbar{k}[{i}]({b})={}",
                format_set(&ps.p_set(i, &b, k)),
                format_set(&ps.p_bar_set(i, &b, k))
            ))
        }
        _ => Ok(f
            .tables()
            .map(|i| format!("P{k}[{i}]={}", format_set(&ps.base(i, k))))
            .collect::<Vec<_>>()
            .join("\n")),
    }
}

fn encode(f: &CodeTuple, start: usize, input: Option<&str>) -> Outcome {
    let mut out = Vec::new();
    for line in lines(input)? {
        let x = f.alphabet().parse_seq(&line).map_err(domain)?;
        out.push(codec::encode(f, start, &x).map_err(domain)?.to_string());
    }
    Ok(out.join("\n"))
}

fn format_symbols(f: &CodeTuple, x: &SourceSeq) -> String {
    x.iter().map(|&s| f.alphabet().name(s)).collect::<Vec<_>>().join(" ")
}

fn decode(f: &CodeTuple, start: usize, k: usize, bits: Option<&str>) -> Outcome {
    let mut blocks = Vec::new();
    for line in lines(bits)? {
        let b: BitSeq = if line == "-" { BitSeq::empty() } else { line.parse().map_err(domain)? };
        let d = codec::decode(f, start, &b, k).map_err(domain)?;
        let mut out = String::new();
        writeln!(out, "symbols = {}", format_symbols(f, &d.symbols)).unwrap();
        writeln!(out, "max_delay = {}", d.max_delay()).unwrap();
        writeln!(out, "conflicts = {}", d.conflicts).unwrap();
        writeln!(out, "TAIL").unwrap();
        writeln!(out, "table = {}", d.tail.table).unwrap();
        writeln!(out, "window = {}", d.tail.window).unwrap();
        writeln!(out, "resolved = {}", d.tail.is_resolved()).unwrap();
        writeln!(out, "truncated = {}", d.tail.truncated).unwrap();
        for x in &d.tail.completions {
            writeln!(out, "completion = {}", format_symbols(f, x)).unwrap();
        }
        blocks.push(out.trim_end().to_string());
    }
    Ok(blocks.join("\n\n"))
}

fn roundtrip(f: &CodeTuple, k: usize, trials: usize, max_len: usize, seed: u64) -> Outcome {
    let report = codec::roundtrip_check(f, k, trials, max_len, seed);
    let mut out = report.to_string();
    for fail in report.failures.iter().take(5) {
        write!(
            out,
            "\nfailure = start {}, input {}: {}",
            fail.start,
            f.alphabet().format_seq(&fail.input),
            fail.reason
        )
        .unwrap();
    }
    if report.passed() {
        Ok(out)
    } else {
        Err(Failure { code: 1, message: out, report: true })
    }
}

fn transform(f: &CodeTuple, op: Op, target: Option<Target>, dist: Option<&Path>) -> Outcome {
    let result = match op {
        Op::Rotate => transforms::rotate(f),
        Op::Dot => transforms::dot(f),
        Op::Ddot => transforms::ddot(f),
        Op::Chain => {
            let (Some(target), Some(dist)) = (target, dist) else {
                return Err(usage(ErrorKind::MissingRequiredArgument, "--op chain needs --target and --dist"));
            };
            let mu = load_dist(dist)?;
            let trace = transforms::chain_to_class(f, &mu, target).map_err(domain)?;
            return Ok(trace.to_string().trim_end().to_string());
        }
    };
    result.map(|t| t.serialize().trim_end().to_string()).map_err(domain)
}

fn stationary(f: &CodeTuple, mu: &SourceDist) -> Outcome {
    let q = markov::transition_matrix(f, mu).map_err(domain)?;
    let pi = markov::stationary(f, mu).map_err(domain)?;
    let mut out = String::new();
    for (i, row) in q.entries.iter().enumerate() {
        let row: Vec<String> = row.iter().map(|v| v.to_string()).collect();
        writeln!(out, "Q[{i}] = {}", row.join(" ")).unwrap();
    }
    for (i, p) in pi.iter().enumerate() {
        writeln!(out, "pi[{i}] = {p} ≈ {}", markov::round_half_even(p, 4)).unwrap();
    }
    Ok(out.trim_end().to_string())
}

fn avglen(f: &CodeTuple, mu: &SourceDist) -> Outcome {
    let l = markov::average_length(f, mu).map_err(domain)?;
    let mut out = format!("L = {l} ≈ {}", markov::round_half_even(&l, 4));
    for i in f.tables() {
        let li = markov::table_length(f, i, mu).map_err(domain)?;
        write!(out, "\nL[{i}] = {li}").unwrap();
    }
    Ok(out)
}

fn search_verb(space: SearchSpace, mu: &SourceDist) -> Outcome {
    if let Some(warning) = space.cost_warning() {
        eprintln!("warning: {warning}");
    }
    let result = search::enumerate_min(&space, mu).map_err(domain)?;
    Ok(result.to_string())
}

fn huffman(mu: &SourceDist, compare_max_len: Option<usize>) -> Outcome {
    match compare_max_len {
        None => {
            let (lengths, l) = search::huffman_length(mu);
            let mut out = String::new();
            for (i, len) in lengths.iter().enumerate() {
                let name = mu.names().map_or_else(|| i.to_string(), |a| a.names()[i].clone());
                writeln!(out, "length[{name}] = {len}").unwrap();
            }
            write!(out, "L = {l} ≈ {}", markov::round_half_even(&l, 4)).unwrap();
            Ok(out)
        }
        Some(max_len) => {
            let space = SearchSpace::new(mu.len(), search::DEFAULT_MAX_TABLES, max_len, Filter::Aifv);
            let cmp = search::compare_aifv_huffman(mu, &space).map_err(domain)?;
            Ok(cmp.to_string().trim_end().to_string())
        }
    }
}

fn goldens_verb(export: Option<&Path>) -> Outcome {
    if let Some(dir) = export {
        fs::create_dir_all(dir).map_err(domain)?;
        let mut written = Vec::new();
        for (name, f) in goldens::all() {
            let path = dir.join(format!("{name}.ct"));
            fs::write(&path, f.serialize()).map_err(domain)?;
            written.push(format!("wrote {}", path.display()));
        }
        return Ok(written.join("\n"));
    }
    let checks = reproduction::run();
    let failed = checks.iter().filter(|c| !c.passed).count();
    let mut out: Vec<String> = checks.iter().map(|c| c.to_string()).collect();
    out.push(format!("items = {}", checks.len()));
    out.push(format!("failed = {failed}"));
    let text = out.join("\n");
    if failed == 0 {
        Ok(text)
    } else {
        Err(Failure { code: 1, message: text, report: true })
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.verb {
        Verb::Check { tuple, k } => check(&load_tuple(&tuple)?, k),
        Verb::Classify { tuple, dist } => {
            let f = load_tuple(&tuple)?;
            let report = match dist {
                Some(d) => classes::classify(&f, &load_dist(&d)?).map_err(domain)?,
                None => classes::classify_tuple(&f),
            };
            Ok(report.to_string())
        }
        Verb::Psets { tuple, k, prefix, table } => psets(&load_tuple(&tuple)?, k, prefix.as_deref(), table),
        Verb::Encode { tuple, start, input } => encode(&load_tuple(&tuple)?, start, input.as_deref()),
        Verb::Decode { tuple, k, roundtrip: true, seed, trials, max_len, .. } => {
            let seed = seed.expect("clap requires --seed");
            roundtrip(&load_tuple(&tuple)?, k, trials, max_len, seed)
        }
        Verb::Decode { tuple, start, k, bits, .. } => decode(&load_tuple(&tuple)?, start, k, bits.as_deref()),
        Verb::Transform { tuple, op, target, dist } => transform(&load_tuple(&tuple)?, op, target, dist.as_deref()),
        Verb::Stationary { tuple, dist } => stationary(&load_tuple(&tuple)?, &load_dist(&dist)?),
        Verb::Avglen { tuple, dist } => avglen(&load_tuple(&tuple)?, &load_dist(&dist)?),
        Verb::Search { sigma, tables, max_len, filter, dist, allow_large } => {
            let mut space = SearchSpace::new(sigma, tables, max_len, filter);
            if allow_large {
                space = space.allowing_large();
            }
            search_verb(space, &load_dist(&dist)?)
        }
        Verb::Huffman { dist, compare_max_len } => huffman(&load_dist(&dist)?, compare_max_len),
        Verb::Goldens { export } => goldens_verb(export.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(text) => {
            println!("{text}");
            ExitCode::SUCCESS
        }
        Err(Failure { code, message, report }) => {
            if report {
                println!("{message}");
            } else if code == 2 {
                eprintln!("{message}");
            } else {
                eprintln!("error: {message}");
            }
            ExitCode::from(code)
        }
    }
}
