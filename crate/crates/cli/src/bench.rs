//! Benchmark matrix: generated or file-backed datasets crossed with algorithms,
//! written as CSV with `#`-prefixed summary lines.
//!
//! Setting `i` uses seed `child_seed(seed, i)`; repetition `r` of a generated
//! setting uses `child_seed(setting_seed, r)`. Jobs run in parallel and rows
//! are emitted in config order.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use dea_core::datagen::child_seed;
use dea_core::{
    generate, is_common_subsequence, Dataset, Distribution, GenSpec, DEFAULT_CELL_BUDGET,
};
use rayon::prelude::*;
use serde::Deserialize;

use crate::algo::{run, Algorithm, RunConfig};
use crate::error::CliError;
use crate::input::{parse_input, InputFormat, ParseOptions};

pub const CSV_HEADER: &str = "dataset_id,k,n,sigma,algo,cs_len,valid,elapsed_ms,seed,L_used";

#[derive(Debug, Clone, PartialEq)]
pub enum Setting {
    Generated {
        k: usize,
        n: usize,
        sigma: usize,
        distribution: Distribution,
    },
    Files {
        paths: Vec<PathBuf>,
        format: InputFormat,
        opts: ParseOptions,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchConfig {
    pub seed: u64,
    /// Datasets per generated setting.
    pub reps: usize,
    pub algorithms: Vec<Algorithm>,
    pub settings: Vec<Setting>,
    pub search_range: Option<usize>,
    pub cell_budget: u128,
    /// Write measured times instead of `n/a`.
    pub timing: bool,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigFile {
    seed: Option<u64>,
    reps: Option<usize>,
    algorithms: Vec<String>,
    search_range: Option<usize>,
    cell_budget: Option<u64>,
    timing: Option<bool>,
    #[serde(default)]
    settings: Vec<SettingFile>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct SettingFile {
    k: Option<usize>,
    n: Option<usize>,
    sigma: Option<usize>,
    dist: Option<String>,
    beta: Option<f64>,
    files: Option<Vec<PathBuf>>,
    format: Option<String>,
    alphabet: Option<String>,
    drop_unknown: Option<bool>,
    truncate: Option<usize>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

/// Builds a distribution from a name and optional skew parameter.
pub fn distribution(name: &str, beta: Option<f64>) -> Result<Distribution, CliError> {
    match (name, beta) {
        ("uniform", None) => Ok(Distribution::Uniform),
        ("random-contents", None) => Ok(Distribution::RandomContents),
        ("beta-skew", Some(beta)) => Ok(Distribution::BetaSkew { beta }),
        ("beta-skew", None) => Err(usage("beta-skew needs beta")),
        (_, Some(_)) => Err(usage(format!(
            "beta only applies to beta-skew, not {name:?}"
        ))),
        _ => Err(usage(format!(
            "unknown distribution {name:?} (expected uniform, random-contents or beta-skew)"
        ))),
    }
}

pub fn parse_algorithms<S: AsRef<str>>(names: &[S]) -> Result<Vec<Algorithm>, CliError> {
    let algos = names
        .iter()
        .flat_map(|s| s.as_ref().split(','))
        .map(|s| s.trim().parse::<Algorithm>().map_err(usage))
        .collect::<Result<Vec<_>, _>>()?;
    if algos.is_empty() {
        return Err(usage("at least one algorithm is required"));
    }
    Ok(algos)
}

impl SettingFile {
    fn into_setting(self, base: &Path, index: usize) -> Result<Setting, CliError> {
        let ctx = |msg: String| usage(format!("settings[{index}]: {msg}"));
        if let Some(files) = self.files {
            if self.k.is_some()
                || self.n.is_some()
                || self.sigma.is_some()
                || self.dist.is_some()
                || self.beta.is_some()
            {
                return Err(ctx("files cannot be combined with generator fields".into()));
            }
            let format = match self.format {
                Some(f) => f.parse().map_err(ctx)?,
                None => InputFormat::default(),
            };
            return Ok(Setting::Files {
                paths: files.into_iter().map(|p| base.join(p)).collect(),
                format,
                opts: ParseOptions {
                    alphabet: self.alphabet,
                    drop_unknown: self.drop_unknown.unwrap_or(false),
                    truncate: self.truncate,
                },
            });
        }
        if self.format.is_some()
            || self.alphabet.is_some()
            || self.drop_unknown.is_some()
            || self.truncate.is_some()
        {
            return Err(ctx("input options need files".into()));
        }
        let (Some(k), Some(n), Some(sigma)) = (self.k, self.n, self.sigma) else {
            return Err(ctx("generated settings need k, n and sigma".into()));
        };
        let distribution = distribution(self.dist.as_deref().unwrap_or("uniform"), self.beta)
            .map_err(|e| ctx(e.to_string()))?;
        let setting = Setting::Generated {
            k,
            n,
            sigma,
            distribution,
        };
        setting.spec(0).validate().map_err(|e| ctx(e.to_string()))?;
        Ok(setting)
    }
}

impl Setting {
    fn spec(&self, seed: u64) -> GenSpec {
        match self {
            Setting::Generated {
                k,
                n,
                sigma,
                distribution,
            } => GenSpec {
                k: *k,
                n: *n,
                sigma: *sigma,
                distribution: *distribution,
                seed,
            },
            Setting::Files { .. } => unreachable!("file settings have no generator"),
        }
    }
}

impl BenchConfig {
    /// Reads a TOML matrix. Relative file paths resolve against the config's
    /// directory.
    pub fn from_toml(text: &str, base: &Path) -> Result<BenchConfig, CliError> {
        let raw: ConfigFile = toml::from_str(text).map_err(|e| usage(format!("config: {e}")))?;
        if raw.settings.is_empty() {
            return Err(usage("config: at least one [[settings]] entry is required"));
        }
        let settings = raw
            .settings
            .into_iter()
            .enumerate()
            .map(|(i, s)| s.into_setting(base, i))
            .collect::<Result<Vec<_>, _>>()?;
        let cfg = BenchConfig {
            seed: raw.seed.unwrap_or(0),
            reps: raw.reps.unwrap_or(10),
            algorithms: parse_algorithms(&raw.algorithms)?,
            settings,
            search_range: raw.search_range,
            cell_budget: raw.cell_budget.map_or(DEFAULT_CELL_BUDGET, u128::from),
            timing: raw.timing.unwrap_or(false),
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.reps == 0 {
            return Err(usage("reps must be at least 1"));
        }
        if self.algorithms.is_empty() {
            return Err(usage("at least one algorithm is required"));
        }
        if self.settings.is_empty() {
            return Err(usage("at least one setting is required"));
        }
        if self.search_range == Some(0) {
            return Err(usage("search_range must be at least 1"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub dataset_id: String,
    pub setting: usize,
    pub k: usize,
    pub n: usize,
    pub sigma: usize,
    pub algo: Algorithm,
    pub cs_len: usize,
    pub valid: bool,
    pub elapsed_ms: f64,
    /// Generator seed; `None` for file datasets.
    pub seed: Option<u64>,
    pub l_used: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub setting: usize,
    pub algo: Algorithm,
    pub datasets: usize,
    pub mean: f64,
    /// Sample standard deviation; `None` with a single dataset.
    pub stddev: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchOutput {
    pub rows: Vec<BenchRow>,
    pub summaries: Vec<Summary>,
}

struct Instance {
    id: String,
    setting: usize,
    seed: Option<u64>,
    dataset: Dataset,
}

fn instances(cfg: &BenchConfig) -> Result<Vec<Instance>, CliError> {
    let mut jobs: Vec<(usize, usize, Option<u64>)> = Vec::new();
    for (i, s) in cfg.settings.iter().enumerate() {
        match s {
            Setting::Generated { .. } => {
                let setting_seed = child_seed(cfg.seed, i as u64);
                for r in 0..cfg.reps {
                    jobs.push((i, r, Some(child_seed(setting_seed, r as u64))));
                }
            }
            Setting::Files { .. } => jobs.push((i, 0, None)),
        }
    }
    jobs.into_par_iter()
        .map(|(i, r, seed)| {
            let dataset = match &cfg.settings[i] {
                Setting::Files {
                    paths,
                    format,
                    opts,
                } => parse_input(paths, *format, opts)?,
                s => generate(&s.spec(seed.expect("generated datasets are seeded")))?,
            };
            Ok(Instance {
                id: format!("s{i}-r{r}"),
                setting: i,
                seed,
                dataset,
            })
        })
        .collect()
}

pub fn run_bench(cfg: &BenchConfig) -> Result<BenchOutput, CliError> {
    cfg.validate()?;
    let data = instances(cfg)?;
    let run_cfg = RunConfig {
        search_range: cfg.search_range,
        cell_budget: cfg.cell_budget,
    };
    let jobs: Vec<(&Instance, Algorithm)> = data
        .iter()
        .flat_map(|inst| cfg.algorithms.iter().map(move |&a| (inst, a)))
        .collect();
    let rows = jobs
        .into_par_iter()
        .map(|(inst, algo)| {
            let d = &inst.dataset;
            let out = run(algo, d, &run_cfg)?;
            let valid = is_common_subsequence(&out.cs, d);
            if !valid {
                return Err(CliError::InvalidResult(format!(
                    "{algo} returned a non-common subsequence on {}",
                    inst.id
                )));
            }
            Ok(BenchRow {
                dataset_id: inst.id.clone(),
                setting: inst.setting,
                k: d.k(),
                n: d.max_len(),
                sigma: d.sigma(),
                algo,
                cs_len: out.cs.len(),
                valid,
                elapsed_ms: out.elapsed_ms,
                seed: inst.seed,
                l_used: out.l_used,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let summaries = summarize(&rows, cfg);
    Ok(BenchOutput { rows, summaries })
}

fn summarize(rows: &[BenchRow], cfg: &BenchConfig) -> Vec<Summary> {
    let mut out = Vec::new();
    for setting in 0..cfg.settings.len() {
        for &algo in &cfg.algorithms {
            let lens: Vec<f64> = rows
                .iter()
                .filter(|r| r.setting == setting && r.algo == algo)
                .map(|r| r.cs_len as f64)
                .collect();
            let count = lens.len();
            let mean = lens.iter().sum::<f64>() / count as f64;
            let stddev = (count > 1).then(|| {
                let ss: f64 = lens.iter().map(|x| (x - mean).powi(2)).sum();
                (ss / (count - 1) as f64).sqrt()
            });
            out.push(Summary {
                setting,
                algo,
                datasets: count,
                mean,
                stddev,
            });
        }
    }
    out
}

fn or_na<T: ToString>(v: Option<T>) -> String {
    v.map_or_else(|| "n/a".to_string(), |v| v.to_string())
}

impl Summary {
    /// `mean (sd)` with two decimals.
    pub fn cell(&self) -> String {
        match self.stddev {
            Some(sd) => format!("{:.2} ({:.2})", self.mean, sd),
            None => format!("{:.2} (n/a)", self.mean),
        }
    }
}

pub fn render_csv(out: &BenchOutput, timing: bool) -> String {
    let mut s = String::new();
    s.push_str(CSV_HEADER);
    s.push('\n');
    for r in &out.rows {
        let elapsed = if timing {
            format!("{:.3}", r.elapsed_ms)
        } else {
            "n/a".to_string()
        };
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{},{}",
            r.dataset_id,
            r.k,
            r.n,
            r.sigma,
            r.algo,
            r.cs_len,
            r.valid,
            elapsed,
            or_na(r.seed),
            or_na(r.l_used)
        );
    }
    for m in &out.summaries {
        let _ = writeln!(
            s,
            "# setting=s{} algo={} datasets={} mean={:.3} sd={} cell=\"{}\"",
            m.setting,
            m.algo,
            m.datasets,
            m.mean,
            or_na(m.stddev.map(|v| format!("{v:.3}"))),
            m.cell()
        );
    }
    s
}
