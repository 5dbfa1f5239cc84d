use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use fixfree::{
    construct_with_max_len, decode_backward, decode_forward, design_code, encode,
    exists_fixfree, verify_fixfree_words, BitStream, CodeTable, ConstructError, Distribution,
    LengthVector, SearchBudget, SearchOutcome, DEFAULT_MAX_LEN,
};

/// Environment variable overriding the default codeword-length cap.
const MAX_LEN_ENV: &str = "FIXFREE_MAX_LEN";

#[derive(Parser)]
#[command(
    name = "fixfree",
    version,
    about = "Construct, design, verify, and use binary fix-free codes"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build a fix-free code from a length-vector file
    Construct {
        /// File with whitespace-separated counts k1 .. kn
        #[arg(long)]
        lengths: PathBuf,
        /// Write the code table here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Dump one line per construction step to stderr
        #[arg(long)]
        trace: bool,
        /// Codeword-length cap (default 24, or FIXFREE_MAX_LEN)
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=32))]
        max_len: Option<u8>,
    },
    /// Design a near-optimal fix-free code for a source distribution
    Design {
        /// File with symbol<TAB>probability lines
        #[arg(long)]
        dist: PathBuf,
        /// Write the code table here instead of stdout
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also print the report as key=value lines
        #[arg(long)]
        kv: bool,
        /// Codeword-length cap (default 24, or FIXFREE_MAX_LEN)
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=32))]
        max_len: Option<u8>,
    },
    /// Check that a code table is fix-free
    Verify {
        /// File with symbol<TAB>bitstring lines
        #[arg(long)]
        code: PathBuf,
    },
    /// Exhaustively decide whether any fix-free code fits a length vector
    Oracle {
        /// File with whitespace-separated counts k1 .. kn
        #[arg(long)]
        lengths: PathBuf,
        /// Search-node budget before giving up
        #[arg(long, default_value_t = 1_000_000)]
        max_nodes: u64,
        /// Longest codeword length the search considers
        #[arg(long, default_value_t = 10, value_parser = clap::value_parser!(u8).range(1..=32))]
        max_len: u8,
    },
    /// Encode a message file into a bitstream file
    Encode {
        #[arg(long)]
        code: PathBuf,
        /// Message file: whitespace-separated symbols
        #[arg(long = "in")]
        input: PathBuf,
        /// Bitstream output file
        #[arg(long)]
        out: PathBuf,
    },
    /// Decode a bitstream file back into a message
    Decode {
        #[arg(long)]
        code: PathBuf,
        /// Bitstream input file
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, value_enum)]
        direction: Direction,
    },
    /// Report entropy, average length, and redundancy of a code against a
    /// distribution
    Analyze {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long)]
        code: PathBuf,
        /// Also print the figures as key=value lines
        #[arg(long)]
        kv: bool,
    },
}

#[derive(ValueEnum, Clone, Copy)]
enum Direction {
    Forward,
    Backward,
}

/// Exit 1 is a domain outcome (condition not met, not fix-free, decode
/// failure, no code exists); exit 2 is a usage, IO, or parse problem.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn domain(message: impl ToString) -> Self {
        Failure { code: 1, message: message.to_string() }
    }

    fn usage(message: impl ToString) -> Self {
        Failure { code: 2, message: message.to_string() }
    }
}

fn main() -> ExitCode {
    // die quietly when the read end of a pipe closes, like other
    // line-oriented tools
    #[cfg(unix)]
    unsafe {
        libc::signal(libc::SIGPIPE, libc::SIG_DFL);
    }
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

fn run(cmd: Cmd) -> Result<(), Failure> {
    match cmd {
        Cmd::Construct { lengths, out, trace, max_len } => {
            cmd_construct(&lengths, out.as_deref(), trace, max_len)
        }
        Cmd::Design { dist, out, kv, max_len } => cmd_design(&dist, out.as_deref(), kv, max_len),
        Cmd::Verify { code } => cmd_verify(&code),
        Cmd::Oracle { lengths, max_nodes, max_len } => cmd_oracle(&lengths, max_nodes, max_len),
        Cmd::Encode { code, input, out } => cmd_encode(&code, &input, &out),
        Cmd::Decode { code, input, direction } => cmd_decode(&code, &input, direction),
        Cmd::Analyze { dist, code, kv } => cmd_analyze(&dist, &code, kv),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {}", path.display(), e)))
}

fn write_output(out: Option<&Path>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::usage(format!("cannot write {}: {}", path.display(), e))),
        None => {
            print!("{}", content);
            Ok(())
        }
    }
}

fn resolve_max_len(flag: Option<u8>) -> Result<u8, Failure> {
    if let Some(v) = flag {
        return Ok(v);
    }
    match std::env::var(MAX_LEN_ENV) {
        Ok(text) => match text.parse::<u8>() {
            Ok(v) if (1..=32).contains(&v) => Ok(v),
            _ => Err(Failure::usage(format!(
                "{} must be an integer between 1 and 32, got {:?}",
                MAX_LEN_ENV, text
            ))),
        },
        Err(_) => Ok(DEFAULT_MAX_LEN),
    }
}

fn parse_lengths(path: &Path) -> Result<LengthVector, Failure> {
    read_text(path)?
        .parse::<LengthVector>()
        .map_err(|e| Failure::usage(format!("{}: {}", path.display(), e)))
}

fn load_table(path: &Path) -> Result<CodeTable, Failure> {
    CodeTable::parse(&read_text(path)?)
        .map_err(|e| Failure::usage(format!("{}: {}", path.display(), e)))
}

/// Auto-named table lines (w1, w2, ..) for a constructed code, sorted by
/// (length, value).
fn render_code_table(code: &fixfree::Code) -> String {
    let mut out = String::new();
    for (i, word) in code.iter().enumerate() {
        out.push_str(&format!("w{}\t{}\n", i + 1, word));
    }
    out
}

fn cmd_construct(
    lengths: &Path,
    out: Option<&Path>,
    trace: bool,
    max_len: Option<u8>,
) -> Result<(), Failure> {
    let v = parse_lengths(lengths)?;
    let cap = resolve_max_len(max_len)?;
    let built = construct_with_max_len(&v, cap).map_err(|e| match e {
        ConstructError::ConditionNotMet { .. } => Failure::domain(format!(
            "{}; the condition is sufficient, not necessary — try `fixfree oracle` for small \
             instances",
            e
        )),
        other => Failure::domain(other),
    })?;
    if trace {
        eprint!("{}", built.trace.render());
    }
    write_output(out, &render_code_table(&built.code))
}

fn cmd_design(
    dist: &Path,
    out: Option<&Path>,
    kv: bool,
    max_len: Option<u8>,
) -> Result<(), Failure> {
    let d = Distribution::parse(&read_text(dist)?)
        .map_err(|e| Failure::usage(format!("{}: {}", dist.display(), e)))?;
    let cap = resolve_max_len(max_len)?;
    let (table, report) = design_code(&d, cap).map_err(Failure::domain)?;
    eprint!("{}", report.aligned_text());
    if kv {
        eprint!("{}", report.kv_text());
    }
    write_output(out, &table.to_text())
}

fn cmd_verify(code: &Path) -> Result<(), Failure> {
    let entries = fixfree::codec::parse_table_entries(&read_text(code)?)
        .map_err(|e| Failure::usage(format!("{}: {}", code.display(), e)))?;
    let words: Vec<_> = entries.iter().map(|(_, w)| *w).collect();
    match verify_fixfree_words(&words) {
        Ok(()) => {
            println!("fix-free: yes");
            Ok(())
        }
        Err(violation) => {
            println!("fix-free: no");
            Err(Failure::domain(format!("not fix-free: {}", violation)))
        }
    }
}

fn cmd_oracle(lengths: &Path, max_nodes: u64, max_len: u8) -> Result<(), Failure> {
    let v = parse_lengths(lengths)?;
    let budget = SearchBudget { max_nodes, max_len };
    match exists_fixfree(&v, budget).map_err(Failure::domain)? {
        SearchOutcome::Exists(code) => {
            println!("fix-free code exists:");
            print!("{}", render_code_table(&code));
            Ok(())
        }
        SearchOutcome::NotExists => {
            Err(Failure::domain("no fix-free code exists for this length vector"))
        }
        SearchOutcome::Inconclusive { nodes_expanded } => Err(Failure::domain(format!(
            "search inconclusive after {} nodes; raise --max-nodes",
            nodes_expanded
        ))),
    }
}

fn cmd_encode(code: &Path, input: &Path, out: &Path) -> Result<(), Failure> {
    let table = load_table(code)?;
    let text = read_text(input)?;
    let message = fixfree::codec::parse_message(&text);
    let stream = encode(&table, message).map_err(Failure::domain)?;
    fs::write(out, stream.to_bytes())
        .map_err(|e| Failure::usage(format!("cannot write {}: {}", out.display(), e)))
}

fn cmd_decode(code: &Path, input: &Path, direction: Direction) -> Result<(), Failure> {
    let table = load_table(code)?;
    let bytes = fs::read(input)
        .map_err(|e| Failure::usage(format!("cannot read {}: {}", input.display(), e)))?;
    let stream = BitStream::from_bytes(&bytes)
        .map_err(|e| Failure::usage(format!("{}: {}", input.display(), e)))?;
    let message = match direction {
        Direction::Forward => decode_forward(&table, &stream),
        Direction::Backward => decode_backward(&table, &stream),
    }
    .map_err(Failure::domain)?;
    print!("{}", fixfree::codec::render_message(&message));
    Ok(())
}

fn cmd_analyze(dist: &Path, code: &Path, kv: bool) -> Result<(), Failure> {
    let d = Distribution::parse(&read_text(dist)?)
        .map_err(|e| Failure::usage(format!("{}: {}", dist.display(), e)))?;
    let table = load_table(code)?;
    let mut lengths = Vec::with_capacity(d.len());
    for symbol in d.symbols() {
        match table.word_for(symbol) {
            Some(word) => lengths.push(word.len()),
            None => {
                return Err(Failure::domain(format!(
                    "symbol {:?} has no codeword in the table",
                    symbol
                )))
            }
        }
    }
    let entropy = fixfree::entropy(&d);
    let avg_length = fixfree::avg_length(&lengths, &d);
    let redundancy = avg_length - entropy;
    println!("entropy     {:.6}", entropy);
    println!("avg_length  {:.6}", avg_length);
    println!("redundancy  {:.6}", redundancy);
    if kv {
        println!("entropy={}", entropy);
        println!("avg_length={}", avg_length);
        println!("redundancy={}", redundancy);
    }
    Ok(())
}
