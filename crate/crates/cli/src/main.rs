//! `aircode`: build AIR-matrix index codes, inspect decoding plans, encode,
//! decode, self-verify and run noisy-channel BER sweeps.
//!
//! Exit status is 0 on success, 1 when a verification or decode fails and 2
//! on bad arguments.

use std::collections::BTreeMap;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use aircode::channel::{parse_snr_grid, ChannelModel};
use aircode::decoder::{render_plan_table, PlanRecord};
use aircode::ff_matrix::PrimeField;
use aircode::verify::{run_suites, Suite, VerifyOptions};
use aircode::{all_plans, build_plan, decode, encode_matrix, render_code, run_sweep};
use aircode::{AirMatrix, Codeword, MessageVector, ParamChain};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser)]
#[command(name = "aircode", version, about = "AIR-matrix index codes for one-sided side-information broadcast")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Params {
    /// Number of messages and receivers.
    k: usize,
    /// Side-information size per receiver.
    d: usize,
}

#[derive(Clone, Copy, ValueEnum)]
enum PlanFormat {
    Table,
    Jsonl,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Adjacency,
    Encoder,
    Distances,
    RoundTrip,
}

impl From<SuiteArg> for Suite {
    fn from(s: SuiteArg) -> Self {
        match s {
            SuiteArg::Adjacency => Suite::AdjacencyRank,
            SuiteArg::Encoder => Suite::EncoderEquivalence,
            SuiteArg::Distances => Suite::DistanceScan,
            SuiteArg::RoundTrip => Suite::RoundTrip,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Print the λ/β chain, depth and capacity.
    Chain(Params),
    /// Print the AIR matrix as "K D" and one 0/1 line per row.
    Matrix(Params),
    /// Print each broadcast symbol as a sum of messages.
    Code(Params),
    /// Print decoding plans for every receiver, or one.
    Plan {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        receiver: Option<usize>,
        #[arg(long, value_enum, default_value = "table")]
        format: PlanFormat,
    },
    /// Encode a message bitstring (character i is x_i).
    Encode {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        messages: String,
    },
    /// Decode one receiver's message from the codeword and side-information.
    Decode {
        #[command(flatten)]
        params: Params,
        #[arg(long)]
        receiver: usize,
        #[arg(long)]
        codeword: String,
        /// Side-information as `index=bit,...`.
        #[arg(long, default_value = "")]
        side: String,
    },
    /// Run the self-check suites over every (K, D) with K up to --max-k.
    Verify {
        #[arg(long, default_value_t = 24)]
        max_k: usize,
        /// Prime fields for the adjacency-rank suite.
        #[arg(long, value_delimiter = ',', default_values_t = [2u8, 3, 5])]
        fields: Vec<u8>,
        /// Suites to run (default: all).
        #[arg(long = "suite", value_enum)]
        suites: Vec<SuiteArg>,
        /// Random vectors per (K, D) for the encoder suite.
        #[arg(long, default_value_t = 100)]
        encoder_vectors: usize,
        /// Round trip is exhaustive up to this K, random above it.
        #[arg(long, default_value_t = 12)]
        exhaustive_limit: usize,
        #[arg(long, default_value_t = 200)]
        round_trip_vectors: usize,
        #[arg(long, env = "AIRCODE_SEED", default_value_t = 0)]
        seed: u64,
    },
    /// Monte Carlo BER sweep; writes CSV.
    Simulate {
        #[command(flatten)]
        params: Params,
        /// awgn, rayleigh or bsc:<p>.
        #[arg(long, default_value = "awgn")]
        channel: String,
        /// SNR grid in dB as a:b:step, or a single value.
        #[arg(long, default_value = "0:10:1")]
        snr: String,
        /// Message vectors per SNR point.
        #[arg(long, default_value_t = 100_000)]
        trials: u64,
        #[arg(long, env = "AIRCODE_SEED", default_value_t = 0)]
        seed: u64,
        /// Output file; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// A failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: 2, message: message.to_string() }
}

fn failed(message: impl ToString) -> Failure {
    Failure { code: 1, message: message.to_string() }
}

fn matrix(p: Params) -> Result<AirMatrix, Failure> {
    AirMatrix::from_params(p.k, p.d).map_err(usage)
}

fn parse_side(s: &str) -> Result<BTreeMap<usize, bool>, Failure> {
    let mut side = BTreeMap::new();
    for item in s.split(',').map(str::trim).filter(|t| !t.is_empty()) {
        let (i, b) =
            item.split_once('=').ok_or_else(|| usage(format!("side-information entry {item:?} is not index=bit")))?;
        let i: usize = i.trim().parse().map_err(|_| usage(format!("bad index in {item:?}")))?;
        let b = match b.trim() {
            "0" => false,
            "1" => true,
            _ => return Err(usage(format!("bad bit in {item:?}"))),
        };
        side.insert(i, b);
    }
    Ok(side)
}

fn run(cli: Cli, out: &mut impl Write) -> Result<(), Failure> {
    let io = |e: io::Error| failed(e);
    match cli.command {
        Command::Chain(p) => {
            let chain = ParamChain::new(p.k, p.d).map_err(usage)?;
            writeln!(out, "{chain}").map_err(io)?;
        }
        Command::Matrix(p) => write!(out, "{}", matrix(p)?.to_text()).map_err(io)?,
        Command::Code(p) => write!(out, "{}", render_code(matrix(p)?.chain())).map_err(io)?,
        Command::Plan { params, receiver, format } => {
            let m = matrix(params)?;
            let plans = match receiver {
                Some(k) => vec![build_plan(&m, k).map_err(usage)?],
                None => all_plans(&m),
            };
            match format {
                PlanFormat::Table => write!(out, "{}", render_plan_table(&plans)).map_err(io)?,
                PlanFormat::Jsonl => {
                    for plan in &plans {
                        let line = serde_json::to_string(&PlanRecord::from(plan)).map_err(failed)?;
                        writeln!(out, "{line}").map_err(io)?;
                    }
                }
            }
        }
        Command::Encode { params, messages } => {
            let m = matrix(params)?;
            let x = MessageVector::parse(&messages).map_err(usage)?;
            let c = encode_matrix(&m, &x).map_err(usage)?;
            writeln!(out, "{c}").map_err(io)?;
        }
        Command::Decode { params, receiver, codeword, side } => {
            let m = matrix(params)?;
            let plan = build_plan(&m, receiver).map_err(usage)?;
            let c = Codeword::parse(&codeword).map_err(usage)?;
            if c.len() != m.width() {
                return Err(usage(format!("codeword has {} bits, expected {}", c.len(), m.width())));
            }
            let side = parse_side(&side)?;
            let bit = decode(&plan, &c, &side).map_err(failed)?;
            writeln!(out, "{}", u8::from(bit)).map_err(io)?;
        }
        Command::Verify { max_k, fields, suites, encoder_vectors, exhaustive_limit, round_trip_vectors, seed } => {
            if max_k < 2 {
                return Err(usage("--max-k must be at least 2"));
            }
            let fields =
                fields.into_iter().map(PrimeField::from_modulus).collect::<Result<Vec<_>, _>>().map_err(usage)?;
            let suites: Vec<Suite> =
                if suites.is_empty() { Suite::ALL.to_vec() } else { suites.into_iter().map(Suite::from).collect() };
            let opts =
                VerifyOptions { max_k, fields, suites, encoder_vectors, exhaustive_limit, round_trip_vectors, seed };
            let reports = run_suites(&opts);
            let mut ok = true;
            for r in &reports {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                writeln!(out, "{status} {}: {} checks, {} failures", r.suite, r.checks, r.failures.len())
                    .map_err(io)?;
                for f in &r.failures {
                    writeln!(out, "  {f}").map_err(io)?;
                }
                ok &= r.passed();
            }
            if !ok {
                return Err(failed("verification failed"));
            }
        }
        Command::Simulate { params, channel, snr, trials, seed, out: path } => {
            let m = matrix(params)?;
            let model: ChannelModel = channel.parse().map_err(usage)?;
            let grid = parse_snr_grid(&snr).map_err(usage)?;
            let report = run_sweep(&m, &all_plans(&m), model, &grid, trials, seed).map_err(usage)?;
            eprintln!("# {}", model.describe());
            for g in &report.grouping {
                let names: Vec<String> = g.receivers.iter().map(|k| format!("R{k}")).collect();
                eprintln!("# {} broadcast symbol(s): {}", g.broadcasts, names.join(" "));
            }
            let csv = report.to_csv();
            match path {
                Some(path) => fs::write(&path, csv).map_err(io)?,
                None => out.write_all(csv.as_bytes()).map_err(io)?,
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let stdout = io::stdout();
    let mut out = io::BufWriter::new(stdout.lock());
    let result = run(cli, &mut out);
    let _ = out.flush();
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
