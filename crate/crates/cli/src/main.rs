//! `hbb`: border bases of Hankel kernels and their applications, from the
//! command line.
//!
//! Exit codes: 0 on success, 1 on domain errors (a JSON error object is
//! written to stdout), 2 on usage and input-format errors.

use std::fs;
use std::io::{self, Read};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hankel_border::apps::{decode, prony_grid, sparse_interpolate, tensor_decompose, vanishing_ideal};
use hankel_border::bench::{run_bench, run_bench_parallel, to_csv, BenchConfig, DegreeRule};
use hankel_border::decomp::{decompose_with, DecomposeOptions};
use hankel_border::io::{
    error_json, from_json, parse_word, to_json_string, CodeJson, DecodeJson, DecompositionJson, ResultJson,
    SequenceJson, SparseJson, TablesJson, TensorJson, VanishingInputJson, VanishingJson,
};
use hankel_border::{border_basis, mult_matrices, BorderOptions, Error, FieldSpec, MonomialOrder, OrderKind};
use serde_json::json;

#[derive(Parser, Debug)]
#[command(name = "hbb", version, about = "Border bases of Hankel operator kernels")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Input JSON file; `-` reads stdin.
    #[arg(long, global = true)]
    input: Option<PathBuf>,
    /// Output file; stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Order::Deglex)]
    order: Order,
    /// Field override: `rational` or `prime:<p>`.
    #[arg(long, global = true, value_parser = parse_field)]
    field: Option<FieldSpec>,
    /// Seed for the random linear combination and for sampling.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Degree override (vanishing) or fixed simplex degree (bench).
    #[arg(long, global = true)]
    degree: Option<u32>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Order {
    Deglex,
    Degrevlex,
}

impl From<Order> for OrderKind {
    fn from(o: Order) -> Self {
        match o {
            Order::Deglex => OrderKind::Deglex,
            Order::Degrevlex => OrderKind::Degrevlex,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Border basis of a moment sequence.
    Borderbasis {
        /// Exit with status 1 when the result is not certified.
        #[arg(long)]
        require_certified: bool,
        /// Also emit the multiplication matrices in the orthogonal basis.
        #[arg(long)]
        tables: bool,
    },
    /// Weights and points of a moment sequence.
    Decompose {
        /// Find eigenvalues over a prime field by exhaustive search.
        #[arg(long)]
        exhaustive_fp: bool,
    },
    /// Exponential-sum decomposition of samples on a grid (rational field).
    Prony,
    /// Sparse interpolation from samples at powers of `zeta`.
    Interpolate {
        /// Comma-separated integer bases, one per variable, each at least 2.
        #[arg(long, value_delimiter = ',', required = true)]
        zeta: Vec<u64>,
    },
    /// Waring decomposition of a symmetric tensor (rational field).
    Tensor,
    /// Error correction of a received word.
    Decode {
        /// Comma-separated received word.
        #[arg(long, allow_hyphen_values = true)]
        word: String,
    },
    /// Generators and interpolation polynomials of the ideal of points.
    Vanishing,
    /// Scaling benchmark on random points; writes CSV with `--csv`.
    Bench {
        /// Comma-separated variable counts.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        nvars: Vec<usize>,
        /// Comma-separated point counts.
        #[arg(long, value_delimiter = ',', default_value = "50,100,200")]
        ranks: Vec<usize>,
        #[arg(long, default_value_t = 3)]
        repetitions: usize,
        #[arg(long)]
        csv: bool,
        /// Run cells concurrently; timings are then not meaningful.
        #[arg(long)]
        parallel_trials: bool,
    },
}

fn parse_field(s: &str) -> Result<FieldSpec, String> {
    s.parse::<FieldSpec>().map_err(|e| e.to_string())
}

enum Failure {
    Usage(String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Domain(e)
    }
}

/// Input problems are usage errors; everything after a successful parse is
/// a domain error.
fn usage<T>(r: hankel_border::Result<T>) -> Result<T, Failure> {
    r.map_err(|e| Failure::Usage(e.to_string()))
}

fn read_input(cli: &Cli) -> Result<String, Failure> {
    let path = cli.input.as_ref().ok_or_else(|| Failure::Usage("--input is required".into()))?;
    let text = if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).map_err(|e| Failure::Usage(format!("reading stdin: {e}")))?;
        s
    } else {
        fs::read_to_string(path).map_err(|e| Failure::Usage(format!("reading {}: {e}", path.display())))?
    };
    if text.trim().is_empty() {
        return Err(Failure::Usage(format!("input {} is empty", path.display())));
    }
    Ok(text)
}

fn sequence(cli: &Cli) -> Result<hankel_border::MomentSequence, Failure> {
    let mut j: SequenceJson = usage(from_json(&read_input(cli)?))?;
    if let Some(f) = cli.field {
        j.field = f;
    }
    usage(j.build())
}

fn order(cli: &Cli, nvars: usize) -> MonomialOrder {
    MonomialOrder::new(cli.order.into(), nvars)
}

fn execute(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Borderbasis { require_certified, tables } => {
            let s = sequence(cli)?;
            let res = border_basis(&s, &order(cli, s.nvars()), BorderOptions::default())?;
            if *require_certified {
                res.require_certified()?;
            }
            if *tables {
                let t = mult_matrices(&s, &res)?;
                let out = json!({ "result": ResultJson::of(&res), "tables": TablesJson::of(&t, s.field()) });
                return Ok(to_json_string(&out));
            }
            Ok(to_json_string(&ResultJson::of(&res)))
        }
        Command::Decompose { exhaustive_fp } => {
            let s = sequence(cli)?;
            let res = border_basis(&s, &order(cli, s.nvars()), BorderOptions::default())?;
            res.require_certified()?;
            let t = mult_matrices(&s, &res)?;
            let opts =
                DecomposeOptions { seed: cli.seed, exhaustive_fp: *exhaustive_fp, ..DecomposeOptions::default() };
            let dec = decompose_with(&s, &res, &t, &opts)?.decomposition;
            Ok(to_json_string(&DecompositionJson::of(&dec, s.field())))
        }
        Command::Prony => {
            let s = sequence(cli)?;
            let dec = prony_grid(&s, &order(cli, s.nvars()), cli.seed)?;
            Ok(to_json_string(&DecompositionJson::of(&dec, s.field())))
        }
        Command::Interpolate { zeta } => {
            let s = sequence(cli)?;
            let terms = sparse_interpolate(&s, zeta, cli.seed)?;
            Ok(to_json_string(&SparseJson::of(&terms)))
        }
        Command::Tensor => {
            let mut j: TensorJson = usage(from_json(&read_input(cli)?))?;
            if let Some(f) = cli.field {
                j.field = f;
            }
            let t = usage(j.build())?;
            let dec = tensor_decompose(&t, cli.seed)?;
            Ok(to_json_string(&DecompositionJson::of(&dec, t.field)))
        }
        Command::Decode { word } => {
            let mut j: CodeJson = usage(from_json(&read_input(cli)?))?;
            if let Some(f) = cli.field {
                j.field = f;
            }
            let code = usage(j.build())?;
            let received = usage(parse_word(code.field, word))?;
            if received.len() != code.len() {
                return Err(Failure::Usage(format!(
                    "word has {} entries, code length is {}",
                    received.len(),
                    code.len()
                )));
            }
            Ok(to_json_string(&DecodeJson::of(&decode(&code, &received)?)))
        }
        Command::Vanishing => {
            let mut j: VanishingInputJson = usage(from_json(&read_input(cli)?))?;
            if let Some(f) = cli.field {
                j.field = f;
            }
            if let Some(d) = cli.degree {
                j.degree = d;
            }
            let (field, points, weights) = usage(j.build())?;
            let v = vanishing_ideal(field, &points, j.degree, weights.as_deref())?;
            Ok(to_json_string(&VanishingJson::of(&v)))
        }
        Command::Bench { nvars, ranks, repetitions, csv, parallel_trials } => {
            let cfg = BenchConfig {
                field: cli.field.unwrap_or(FieldSpec::Prime { p: hankel_border::fields::DEFAULT_PRIME }),
                nvars: nvars.clone(),
                ranks: ranks.clone(),
                degree: cli.degree.map_or(DegreeRule::Minimal, DegreeRule::Fixed),
                seed: cli.seed,
                repetitions: *repetitions,
            };
            usage(cfg.validate())?;
            let rows = if *parallel_trials { run_bench_parallel(&cfg)? } else { run_bench(&cfg)? };
            if *csv {
                return Ok(to_csv(&rows));
            }
            let rows: Vec<_> = rows
                .iter()
                .map(|r| {
                    json!({"n": r.nvars, "r": r.rank, "D": r.degree, "s": r.moments,
                           "wall_time_s": r.seconds, "certified": r.certified})
                })
                .collect();
            Ok(to_json_string(&rows))
        }
    }
}

fn emit(cli: &Cli, text: &str) -> Result<(), Failure> {
    let mut text = text.to_string();
    if !text.ends_with('\n') {
        text.push('\n');
    }
    match &cli.output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::Usage(format!("writing {}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli).and_then(|out| emit(&cli, &out)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Domain(e)) => {
            println!("{}", serde_json::to_string_pretty(&error_json(e.kind(), &e.to_string())).expect("JSON value"));
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
