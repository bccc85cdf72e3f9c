//! Bounds reports and the formula calculator.

use std::fmt;
use std::str::FromStr;

use dea_core::analysis::{
    estimate_pairwise_elcs, existence_probability, existence_probability_uniform,
    expected_lcs_estimate, range_for_probability, range_for_probability_uniform, range_lower_bound,
};
use dea_core::{is_common_subsequence, performance_ratio, upper_bound, Dataset};
use serde::Serialize;

use crate::algo::{run, Algorithm, RunConfig};
use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlgoRatio {
    pub algorithm: String,
    pub length: usize,
    pub valid: bool,
    /// `upper_bound / length`; `None` when the result is empty.
    pub ratio_to_upper_bound: Option<f64>,
    pub ratio_to_exact: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsOutput {
    pub upper_bound: usize,
    pub chosen_sequence_indices: Vec<usize>,
    /// Exact LCS length when the whole instance fits in the cell budget.
    pub exact: Option<usize>,
    pub ratios: Vec<AlgoRatio>,
}

fn ratio(reference: Option<usize>, len: usize) -> Option<f64> {
    reference
        .and_then(|r| performance_ratio(r as f64, len as f64).ok())
        .map(|r| r.ratio)
}

pub fn bounds(d: &Dataset, algos: &[Algorithm], cfg: &RunConfig) -> Result<BoundsOutput, CliError> {
    let b = upper_bound(d, cfg.cell_budget);
    let ratios = algos
        .iter()
        .map(|&a| {
            let out = run(a, d, cfg)?;
            let len = out.cs.len();
            Ok(AlgoRatio {
                algorithm: a.name().to_string(),
                length: len,
                valid: is_common_subsequence(&out.cs, d),
                ratio_to_upper_bound: ratio(Some(b.upper_bound), len),
                ratio_to_exact: ratio(b.exact, len),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    Ok(BoundsOutput {
        upper_bound: b.upper_bound,
        chosen_sequence_indices: b.chosen_sequence_indices,
        exact: b.exact,
        ratios,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Formula {
    /// `ceil(n / E|LCS|)`.
    RangeLowerBound,
    /// Existence probability for symbol content `r`.
    Existence,
    /// Search range for a target probability and content `r`.
    Range,
    ExistenceUniform,
    RangeUniform,
    /// `2n/L - 1`.
    ExpectedLcs,
    /// Monte Carlo pairwise expected LCS.
    Elcs,
}

impl Formula {
    pub const ALL: [Formula; 7] = [
        Formula::RangeLowerBound,
        Formula::Existence,
        Formula::Range,
        Formula::ExistenceUniform,
        Formula::RangeUniform,
        Formula::ExpectedLcs,
        Formula::Elcs,
    ];

    /// Primary name and short alias.
    pub fn names(self) -> (&'static str, &'static str) {
        match self {
            Formula::RangeLowerBound => ("range-lower-bound", "eq5"),
            Formula::Existence => ("existence", "eq6"),
            Formula::Range => ("range", "eq7"),
            Formula::ExistenceUniform => ("existence-uniform", "eq8"),
            Formula::RangeUniform => ("range-uniform", "eq9"),
            Formula::ExpectedLcs => ("expected-lcs", "eq10"),
            Formula::Elcs => ("elcs", "elcs"),
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.names().0)
    }
}

impl FromStr for Formula {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Formula::ALL
            .into_iter()
            .find(|f| {
                let (a, b) = f.names();
                a == s || b == s
            })
            .ok_or_else(|| {
                let names: Vec<String> = Formula::ALL
                    .iter()
                    .map(|f| match f.names() {
                        (a, b) if a == b => a.to_string(),
                        (a, b) => format!("{a}|{b}"),
                    })
                    .collect();
                format!(
                    "unknown formula {s:?} (expected one of {})",
                    names.join(", ")
                )
            })
    }
}

#[derive(Debug, Clone, Default)]
pub struct FormulaParams {
    pub p: Option<f64>,
    pub k: Option<u64>,
    pub sigma: Option<u64>,
    pub r: Option<f64>,
    pub l: Option<u64>,
    pub n: Option<u64>,
    pub elcs: Option<f64>,
    pub trials: Option<usize>,
    pub seed: Option<u64>,
}

/// Input echo plus result rows of one evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub formula: Formula,
    pub inputs: Vec<(&'static str, String)>,
    pub outputs: Vec<(&'static str, String)>,
    /// Main numeric result.
    pub value: f64,
}

fn need<T: Copy>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Usage(format!("missing --{flag}")))
}

pub fn evaluate(formula: Formula, p: &FormulaParams) -> Result<Evaluation, CliError> {
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let value = match formula {
        Formula::RangeLowerBound => {
            let n = need(p.n, "n")?;
            let e = need(p.elcs, "elcs")?;
            inputs.extend([("n", n.to_string()), ("elcs", e.to_string())]);
            let l = range_lower_bound(n, e)?;
            outputs.push(("L", l.to_string()));
            l as f64
        }
        Formula::Existence | Formula::ExistenceUniform => {
            let l = need(p.l, "L")?;
            let k = need(p.k, "k")?;
            let v = if formula == Formula::Existence {
                let r = need(p.r, "r")?;
                inputs.push(("r", r.to_string()));
                existence_probability(r, l, k)?
            } else {
                let sigma = need(p.sigma, "sigma")?;
                inputs.push(("sigma", sigma.to_string()));
                existence_probability_uniform(sigma, l, k)?
            };
            inputs.extend([("L", l.to_string()), ("k", k.to_string())]);
            outputs.push(("P", format!("{v:.6}")));
            v
        }
        Formula::Range | Formula::RangeUniform => {
            let prob = need(p.p, "P")?;
            let k = need(p.k, "k")?;
            inputs.extend([("P", prob.to_string()), ("k", k.to_string())]);
            let v = if formula == Formula::Range {
                let r = need(p.r, "r")?;
                inputs.push(("r", r.to_string()));
                range_for_probability(prob, k, r)?
            } else {
                let sigma = need(p.sigma, "sigma")?;
                inputs.push(("sigma", sigma.to_string()));
                range_for_probability_uniform(prob, k, sigma)?
            };
            outputs.push(("L", format!("{v:.4}")));
            outputs.push(("L (ceil)", (v.ceil() as u64).to_string()));
            v
        }
        Formula::ExpectedLcs => {
            let n = need(p.n, "n")?;
            let l = need(p.l, "L")?;
            inputs.extend([("n", n.to_string()), ("L", l.to_string())]);
            let v = expected_lcs_estimate(n, l)?;
            outputs.push(("E|LCS|", v.to_string()));
            v
        }
        Formula::Elcs => {
            let n = need(p.n, "n")?;
            let sigma = need(p.sigma, "sigma")?;
            let trials = p.trials.unwrap_or(300);
            let seed = p.seed.unwrap_or(0);
            inputs.extend([
                ("n", n.to_string()),
                ("sigma", sigma.to_string()),
                ("trials", trials.to_string()),
                ("seed", seed.to_string()),
            ]);
            let sigma =
                u32::try_from(sigma).map_err(|_| CliError::Usage("--sigma is too large".into()))?;
            let est = estimate_pairwise_elcs(n as usize, sigma, trials, seed)?;
            outputs.push(("mean", format!("{:.4}", est.mean)));
            outputs.push(("stddev", format!("{:.4}", est.stddev)));
            est.mean
        }
    };
    Ok(Evaluation {
        formula,
        inputs,
        outputs,
        value,
    })
}

impl fmt::Display for Evaluation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<(&str, &str)> = std::iter::once(("formula", self.formula.names().0))
            .chain(self.inputs.iter().map(|(k, v)| (*k, v.as_str())))
            .chain(self.outputs.iter().map(|(k, v)| (*k, v.as_str())))
            .collect();
        let width = rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        for (k, v) in rows {
            writeln!(f, "{k:<width$}  {v}")?;
        }
        Ok(())
    }
}
