//! Library side of the `dea` command-line tool: input parsing, algorithm
//! dispatch, benchmark matrices and reports.

pub mod algo;
pub mod bench;
pub mod error;
pub mod input;
pub mod report;

pub use algo::{run, solve_report, Algorithm, RunConfig, SolveReport};
pub use bench::{render_csv, run_bench, BenchConfig, BenchOutput, BenchRow, Setting, Summary};
pub use error::{CliError, ParseError};
pub use input::{parse_input, parse_sources, render, InputFormat, ParseOptions};
pub use report::{bounds, evaluate, BoundsOutput, Formula, FormulaParams};
