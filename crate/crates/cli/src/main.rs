use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dea_cli::bench::{distribution, parse_algorithms};
use dea_cli::{
    bounds, evaluate, parse_input, render, render_csv, run_bench, solve_report, Algorithm,
    BenchConfig, CliError, Formula, FormulaParams, InputFormat, ParseOptions, RunConfig, Setting,
};
use dea_core::{generate, GenSpec, DEFAULT_CELL_BUDGET};

#[derive(Parser)]
#[command(
    name = "dea",
    version,
    about = "Longest common subsequence heuristics for many sequences"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random dataset.
    Gen(GenArgs),
    /// Run one algorithm on a dataset and print a JSON report.
    Solve(SolveArgs),
    /// Run a benchmark matrix and print CSV.
    Bench(BenchArgs),
    /// Print the subset upper bound and performance ratios.
    Bounds(BoundsArgs),
    /// Evaluate a search-range formula.
    Analyze(AnalyzeArgs),
}

#[derive(Args)]
struct InputArgs {
    /// Input files. With `--format raw` each file is one sequence.
    #[arg(required = true)]
    files: Vec<PathBuf>,
    /// fasta, lines or raw.
    #[arg(long, default_value = "fasta")]
    format: InputFormat,
    /// Declared alphabet, e.g. ACGT. Inferred from first appearance otherwise.
    #[arg(long)]
    alphabet: Option<String>,
    /// Drop characters outside the declared alphabet instead of failing.
    #[arg(long)]
    drop_unknown: bool,
    /// Keep only the first N symbols of each sequence.
    #[arg(long, value_name = "N")]
    truncate: Option<usize>,
}

impl InputArgs {
    fn options(&self) -> ParseOptions {
        ParseOptions {
            alphabet: self.alphabet.clone(),
            drop_unknown: self.drop_unknown,
            truncate: self.truncate,
        }
    }
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    k: usize,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 4)]
    sigma: usize,
    /// uniform, random-contents or beta-skew.
    #[arg(long, default_value = "uniform")]
    dist: String,
    /// Skew for beta-skew, in (0, 1).
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// lines or fasta.
    #[arg(long, default_value = "lines")]
    format: InputFormat,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value = "dea")]
    algo: Algorithm,
    /// Single search range instead of the default sweep.
    #[arg(long)]
    search_range: Option<usize>,
    /// Echoed in the report.
    #[arg(long)]
    seed: Option<u64>,
    /// DP table size limit for the exact solver.
    #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
    cell_budget: u128,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// TOML matrix; the flags below override its top-level values.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Input files forming one setting (instead of a generator).
    files: Vec<PathBuf>,
    #[arg(long, default_value = "fasta")]
    format: InputFormat,
    #[arg(long)]
    alphabet: Option<String>,
    #[arg(long)]
    drop_unknown: bool,
    #[arg(long, value_name = "N")]
    truncate: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    sigma: Option<usize>,
    #[arg(long)]
    dist: Option<String>,
    #[arg(long)]
    beta: Option<f64>,
    /// Comma-separated or repeated.
    #[arg(long)]
    algo: Vec<String>,
    /// Datasets per generated setting.
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    search_range: Option<usize>,
    #[arg(long)]
    cell_budget: Option<u128>,
    /// Record elapsed time instead of `n/a` (output is then not byte-stable).
    #[arg(long)]
    timing: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BoundsArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Algorithms to compare, comma-separated or repeated.
    #[arg(long, default_value = "dea")]
    algo: Vec<String>,
    #[arg(long)]
    search_range: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_CELL_BUDGET)]
    cell_budget: u128,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// range-lower-bound (eq5), existence (eq6), range (eq7),
    /// existence-uniform (eq8), range-uniform (eq9), expected-lcs (eq10), elcs.
    formula: Formula,
    /// Target existence probability.
    #[arg(long = "P")]
    p: Option<f64>,
    #[arg(long)]
    k: Option<u64>,
    #[arg(long)]
    sigma: Option<u64>,
    /// Symbol content.
    #[arg(long)]
    r: Option<f64>,
    /// Search range.
    #[arg(long = "L")]
    l: Option<u64>,
    #[arg(long)]
    n: Option<u64>,
    /// Expected LCS length.
    #[arg(long)]
    elcs: Option<f64>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Io {
            path: path.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn json<T: serde::Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports serialize");
    s.push('\n');
    s
}

fn cmd_gen(a: GenArgs) -> Result<(), CliError> {
    if a.format == InputFormat::Raw {
        return Err(CliError::Usage("gen writes lines or fasta".into()));
    }
    let spec = GenSpec {
        k: a.k,
        n: a.n,
        sigma: a.sigma,
        distribution: distribution(&a.dist, a.beta)?,
        seed: a.seed,
    };
    let d = generate(&spec)?;
    emit(a.out.as_deref(), &render(&d, a.format))
}

fn cmd_solve(a: SolveArgs) -> Result<(), CliError> {
    let d = parse_input(&a.input.files, a.input.format, &a.input.options())?;
    let cfg = RunConfig {
        search_range: a.search_range,
        cell_budget: a.cell_budget,
    };
    let report = solve_report(a.algo, &d, &cfg, a.seed)?;
    emit(a.out.as_deref(), &json(&report))
}

fn bench_config(a: &BenchArgs) -> Result<BenchConfig, CliError> {
    let inline_gen =
        a.k.is_some() || a.n.is_some() || a.sigma.is_some() || a.dist.is_some() || a.beta.is_some();
    let mut cfg = match &a.config {
        Some(path) => {
            if inline_gen || !a.files.is_empty() {
                return Err(CliError::Usage(
                    "--config cannot be combined with inline settings".into(),
                ));
            }
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: path.clone(),
                source,
            })?;
            BenchConfig::from_toml(&text, path.parent().unwrap_or(Path::new(".")))?
        }
        None => {
            let setting = if !a.files.is_empty() {
                if inline_gen {
                    return Err(CliError::Usage(
                        "give either input files or generator flags".into(),
                    ));
                }
                Setting::Files {
                    paths: a.files.clone(),
                    format: a.format,
                    opts: ParseOptions {
                        alphabet: a.alphabet.clone(),
                        drop_unknown: a.drop_unknown,
                        truncate: a.truncate,
                    },
                }
            } else {
                let (Some(k), Some(n)) = (a.k, a.n) else {
                    return Err(CliError::Usage(
                        "bench needs --config, input files, or --k and --n".into(),
                    ));
                };
                let setting = Setting::Generated {
                    k,
                    n,
                    sigma: a.sigma.unwrap_or(4),
                    distribution: distribution(a.dist.as_deref().unwrap_or("uniform"), a.beta)?,
                };
                setting_check(&setting)?;
                setting
            };
            BenchConfig {
                seed: 0,
                reps: 10,
                algorithms: parse_algorithms(&["longrun", "dea-mc"])?,
                settings: vec![setting],
                search_range: None,
                cell_budget: DEFAULT_CELL_BUDGET,
                timing: false,
            }
        }
    };
    if !a.algo.is_empty() {
        cfg.algorithms = parse_algorithms(&a.algo)?;
    }
    if let Some(seed) = a.seed {
        cfg.seed = seed;
    }
    if let Some(reps) = a.reps {
        cfg.reps = reps;
    }
    if a.search_range.is_some() {
        cfg.search_range = a.search_range;
    }
    if let Some(b) = a.cell_budget {
        cfg.cell_budget = b;
    }
    cfg.timing |= a.timing;
    Ok(cfg)
}

fn setting_check(s: &Setting) -> Result<(), CliError> {
    if let Setting::Generated {
        k,
        n,
        sigma,
        distribution,
    } = s
    {
        GenSpec {
            k: *k,
            n: *n,
            sigma: *sigma,
            distribution: *distribution,
            seed: 0,
        }
        .validate()?;
    }
    Ok(())
}

fn cmd_bench(a: BenchArgs) -> Result<(), CliError> {
    let cfg = bench_config(&a)?;
    let out = run_bench(&cfg)?;
    emit(a.out.as_deref(), &render_csv(&out, cfg.timing))
}

fn cmd_bounds(a: BoundsArgs) -> Result<(), CliError> {
    let d = parse_input(&a.input.files, a.input.format, &a.input.options())?;
    let cfg = RunConfig {
        search_range: a.search_range,
        cell_budget: a.cell_budget,
    };
    let report = bounds(&d, &parse_algorithms(&a.algo)?, &cfg)?;
    emit(a.out.as_deref(), &json(&report))
}

fn cmd_analyze(a: AnalyzeArgs) -> Result<(), CliError> {
    let params = FormulaParams {
        p: a.p,
        k: a.k,
        sigma: a.sigma,
        r: a.r,
        l: a.l,
        n: a.n,
        elcs: a.elcs,
        trials: a.trials,
        seed: a.seed,
    };
    let e = evaluate(a.formula, &params)?;
    emit(None, &e.to_string())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let result = match cli.command {
        Command::Gen(a) => cmd_gen(a),
        Command::Solve(a) => cmd_solve(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Bounds(a) => cmd_bounds(a),
        Command::Analyze(a) => cmd_analyze(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("dea: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
