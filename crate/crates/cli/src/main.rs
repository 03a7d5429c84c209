use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use semifact::bench::{self, Algorithm, Outcome, RunConfig};
use semifact::stream::{DEFAULT_BUFFER_CAPACITY, DEFAULT_REBALANCE_EVERY};
use semifact::{AperyTable, GeneratorTuple};

/// Factorization sets in numerical semigroups, listed in descending
/// lexicographic order.
#[derive(Debug, Parser)]
#[command(name = "semifact", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Lists or counts the factorizations of one element.
    Factor(FactorArgs),
    /// Runs a bench spec and prints one CSV row per spec row.
    Bench {
        /// CSV with header `gens,element,algo,memo_dim,workers`.
        spec: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Prints the Apery table with respect to the smallest generator.
    Apery {
        #[arg(long)]
        gens: GeneratorTuple,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct FactorArgs {
    /// Comma-separated generators, e.g. `13,37,38`.
    #[arg(long)]
    gens: GeneratorTuple,
    #[arg(long)]
    n: u64,
    /// One of dp, dp-parallel-fac, dp-parallel-elem, lex, lex-memo, brute.
    #[arg(long, default_value = "lex")]
    algo: Algorithm,
    /// Trailing generators covered by the memo (lex-memo only).
    #[arg(long)]
    memo_dim: Option<usize>,
    /// Exclusive memo bound (lex-memo only); defaults to `n + 1`.
    #[arg(long)]
    top_of_memo: Option<u64>,
    #[arg(long, default_value_t = 1)]
    workers: usize,
    /// Factorizations each stream holds between flushes.
    #[arg(long, default_value_t = DEFAULT_BUFFER_CAPACITY)]
    buffer: usize,
    #[arg(long, default_value_t = DEFAULT_REBALANCE_EVERY)]
    rebalance_every: u64,
    /// Elementwise batch size (dp-parallel-elem only).
    #[arg(long)]
    batch: Option<u64>,
    /// Print only the number of factorizations.
    #[arg(long)]
    count: bool,
    /// Print the run as a bench CSV row instead of the results.
    #[arg(long, conflicts_with = "count")]
    report: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl FactorArgs {
    fn run_config(&self) -> RunConfig {
        RunConfig {
            memo_dim: self.memo_dim,
            top_of_memo: self.top_of_memo,
            workers: self.workers,
            buffer_capacity: self.buffer,
            rebalance_every: self.rebalance_every,
            batch_size: self.batch,
            ..RunConfig::new(self.gens.clone(), self.n, self.algo)
        }
    }
}

fn open_output(path: Option<&PathBuf>) -> Result<Box<dyn Write>, String> {
    match path {
        Some(p) => File::create(p)
            .map(|f| Box::new(BufWriter::new(f)) as Box<dyn Write>)
            .map_err(|e| format!("cannot create {}: {e}", p.display())),
        None => Ok(Box::new(BufWriter::new(io::stdout().lock()))),
    }
}

fn factor(args: &FactorArgs) -> Result<(), String> {
    let config = args.run_config();
    let (outcome, record) =
        bench::run(&config, args.count || args.report).map_err(|e| e.to_string())?;
    let mut out = open_output(args.out.as_ref())?;
    let written = if args.report {
        let mut rows = Vec::new();
        bench::write_bench_records(&[record], &mut rows).map_err(|e| e.to_string())?;
        out.write_all(&rows)
    } else {
        match outcome {
            Outcome::Count(c) => writeln!(out, "{c}"),
            Outcome::List(list) => list.write_lines(&mut out),
        }
    };
    written.and_then(|()| out.flush()).map_err(|e| e.to_string())
}

fn bench_cmd(spec: &PathBuf, out: Option<&PathBuf>) -> Result<(), String> {
    let file = File::open(spec).map_err(|e| format!("cannot open {}: {e}", spec.display()))?;
    let rows = bench::read_bench_spec(file).map_err(|e| e.to_string())?;
    let mut out = open_output(out)?;
    bench::run_bench(&rows, &mut out).map_err(|e| e.to_string())?;
    out.flush().map_err(|e| e.to_string())
}

fn apery(gens: &GeneratorTuple, out: Option<&PathBuf>) -> Result<(), String> {
    let table = AperyTable::build(gens);
    let mut out = open_output(out)?;
    let mut text = String::new();
    for (r, min) in table.residue_minima().iter().enumerate() {
        match min {
            Some(v) => text.push_str(&format!("{r}:{v}\n")),
            None => text.push_str(&format!("{r}:unreachable\n")),
        }
    }
    match table.frobenius_number() {
        Ok(f) => text.push_str(&format!("frobenius:{f}\n")),
        Err(_) => text.push_str("frobenius:none\n"),
    }
    out.write_all(text.as_bytes())
        .and_then(|()| out.flush())
        .map_err(|e| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Factor(args) => factor(args),
        Command::Bench { spec, out } => bench_cmd(spec, out.as_ref()),
        Command::Apery { gens, out } => apery(gens, out.as_ref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(msg) => {
            eprintln!("semifact: {msg}");
            ExitCode::FAILURE
        }
    }
}
