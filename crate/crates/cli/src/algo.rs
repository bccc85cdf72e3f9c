//! Algorithm selection and the single-object solve report.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use dea_core::{
    dea_solve, greedy, is_common_subsequence, lcs_k, long_run, tournament, Dataset,
    DepositionMethod, Sequence, SolveOptions, TemplateOrigin,
};
use serde::Serialize;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Dea,
    DeaMf,
    DeaMc,
    /// Min-change deposition with the search range set to the longest sequence.
    DeaFullRange,
    LongRun,
    Greedy,
    Tournament,
    Exact,
}

impl Algorithm {
    pub const ALL: [Algorithm; 8] = [
        Algorithm::Dea,
        Algorithm::DeaMf,
        Algorithm::DeaMc,
        Algorithm::DeaFullRange,
        Algorithm::LongRun,
        Algorithm::Greedy,
        Algorithm::Tournament,
        Algorithm::Exact,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Dea => "dea",
            Algorithm::DeaMf => "dea-mf",
            Algorithm::DeaMc => "dea-mc",
            Algorithm::DeaFullRange => "dea-full-range",
            Algorithm::LongRun => "longrun",
            Algorithm::Greedy => "greedy",
            Algorithm::Tournament => "tournament",
            Algorithm::Exact => "exact",
        }
    }

    fn methods(self) -> Option<&'static [DepositionMethod]> {
        const MF: &[DepositionMethod] = &[DepositionMethod::MostFront];
        const MC: &[DepositionMethod] = &[DepositionMethod::MinChange];
        match self {
            Algorithm::Dea => Some(&DepositionMethod::ALL),
            Algorithm::DeaMf => Some(MF),
            Algorithm::DeaMc | Algorithm::DeaFullRange => Some(MC),
            _ => None,
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Algorithm::ALL.iter().map(|a| a.name()).collect();
                format!(
                    "unknown algorithm {s:?} (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, Copy)]
pub struct RunConfig {
    /// Overrides the search range sweep of the DEA variants.
    pub search_range: Option<usize>,
    pub cell_budget: u128,
}

#[derive(Debug, Clone)]
pub struct Outcome {
    pub cs: Sequence,
    /// Search range of the winning deposition template.
    pub l_used: Option<usize>,
    pub search_ranges: Vec<usize>,
    pub origin: Option<TemplateOrigin>,
    pub elapsed_ms: f64,
}

pub fn run(algo: Algorithm, d: &Dataset, cfg: &RunConfig) -> Result<Outcome, CliError> {
    if cfg.search_range == Some(0) {
        return Err(CliError::Usage("--search-range must be at least 1".into()));
    }
    let start = Instant::now();
    let mut out = Outcome {
        cs: Sequence::empty(),
        l_used: None,
        search_ranges: Vec::new(),
        origin: None,
        elapsed_ms: 0.0,
    };
    if let Some(methods) = algo.methods() {
        let mut opts = SolveOptions::with_methods(methods);
        opts.search_range = match algo {
            Algorithm::DeaFullRange => Some(d.max_len().max(1)),
            _ => cfg.search_range,
        };
        let r = dea_solve(d, &opts);
        out.cs = r.cs;
        out.l_used = r.search_range_used;
        out.search_ranges = r.search_ranges;
        out.origin = Some(r.origin);
    } else {
        out.cs = match algo {
            Algorithm::LongRun => long_run(d).cs,
            Algorithm::Greedy => greedy(d),
            Algorithm::Tournament => tournament(d),
            Algorithm::Exact => lcs_k(d, cfg.cell_budget)?,
            _ => unreachable!("DEA variants handled above"),
        };
    }
    out.elapsed_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportConfig {
    pub method: String,
    pub search_ranges: Vec<usize>,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub algorithm: String,
    pub cs: String,
    pub length: usize,
    pub valid: bool,
    pub elapsed_ms: f64,
    pub config: ReportConfig,
}

fn method_label(algo: Algorithm) -> String {
    match algo.methods() {
        Some(ms) => ms
            .iter()
            .map(|m| m.short_name())
            .collect::<Vec<_>>()
            .join("+"),
        None => algo.name().to_string(),
    }
}

/// Runs `algo` and checks the result against the dataset.
pub fn solve_report(
    algo: Algorithm,
    d: &Dataset,
    cfg: &RunConfig,
    seed: Option<u64>,
) -> Result<SolveReport, CliError> {
    let out = run(algo, d, cfg)?;
    Ok(SolveReport {
        algorithm: algo.name().to_string(),
        cs: d.decode(&out.cs),
        length: out.cs.len(),
        valid: is_common_subsequence(&out.cs, d),
        elapsed_ms: out.elapsed_ms,
        config: ReportConfig {
            method: method_label(algo),
            search_ranges: out.search_ranges,
            seed,
        },
    })
}
