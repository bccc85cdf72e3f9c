//! Seeded generation of simulated datasets.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`, which is
//! specified independently of platform and word size, so a [`GenSpec`] always
//! yields the same dataset. Symbols are drawn i.i.d. per position.

use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution as _, WeightedIndex};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sequence::{Alphabet, Dataset, Sequence, SymbolId};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "dist", rename_all = "kebab-case")]
pub enum Distribution {
    /// Every symbol with probability `1/sigma`.
    Uniform,
    /// One probability vector per dataset: `sigma` uniform(0,1) draws,
    /// normalized.
    RandomContents,
    /// Four symbols with probabilities `[β/2, β/2, (1-β)/2, (1-β)/2]`.
    BetaSkew { beta: f64 },
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Distribution::Uniform => f.write_str("uniform"),
            Distribution::RandomContents => f.write_str("random-contents"),
            Distribution::BetaSkew { beta } => write!(f, "beta-skew({beta})"),
        }
    }
}

impl FromStr for Distribution {
    type Err = Error;

    /// Accepts `uniform`, `random-contents`, `beta-skew:<β>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "uniform" => Ok(Distribution::Uniform),
            "random-contents" => Ok(Distribution::RandomContents),
            _ => match s.strip_prefix("beta-skew:") {
                Some(b) => b
                    .parse()
                    .map(|beta| Distribution::BetaSkew { beta })
                    .map_err(|_| Error::invalid("beta", format!("not a number: {b:?}"))),
                None => Err(Error::invalid(
                    "distribution",
                    format!("unknown distribution {s:?}"),
                )),
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenSpec {
    pub k: usize,
    pub n: usize,
    pub sigma: usize,
    #[serde(flatten)]
    pub distribution: Distribution,
    pub seed: u64,
}

impl GenSpec {
    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::invalid("k", "must be at least 1"));
        }
        if self.n == 0 {
            return Err(Error::invalid("n", "must be at least 1"));
        }
        if self.sigma == 0 {
            return Err(Error::invalid("sigma", "must be at least 1"));
        }
        if self.sigma > MAX_SIGMA {
            return Err(Error::invalid(
                "sigma",
                format!("must be at most {MAX_SIGMA}"),
            ));
        }
        if let Distribution::BetaSkew { beta } = self.distribution {
            if self.sigma != 4 {
                return Err(Error::invalid("sigma", "beta-skew requires sigma = 4"));
            }
            if !(beta > 0.0 && beta < 1.0) {
                return Err(Error::invalid("beta", format!("{beta} is not in (0, 1)")));
            }
        }
        Ok(())
    }

    /// Same spec with the seed of dataset `index` in a family.
    pub fn child(&self, index: u64) -> GenSpec {
        GenSpec {
            seed: child_seed(self.seed, index),
            ..*self
        }
    }
}

const MAX_SIGMA: usize = 4096;

/// Deterministic per-index seed derived from a parent seed.
pub fn child_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index.wrapping_add(1));
    rng.next_u64()
}

/// Label of generated symbol `i`: `A..Z`, `a..z`, `0..9`, then code points
/// from U+0100 upwards.
pub fn symbol_label(i: usize) -> char {
    match i {
        0..=25 => (b'A' + i as u8) as char,
        26..=51 => (b'a' + (i - 26) as u8) as char,
        52..=61 => (b'0' + (i - 52) as u8) as char,
        _ => char::from_u32(0x100 + (i - 62) as u32).expect("valid code point"),
    }
}

pub fn generated_alphabet(sigma: usize) -> Alphabet {
    Alphabet::new((0..sigma).map(symbol_label)).expect("distinct labels")
}

/// Symbol probabilities used by `spec` (consumes draws for random contents).
fn weights(spec: &GenSpec, rng: &mut ChaCha8Rng) -> Option<Vec<f64>> {
    match spec.distribution {
        Distribution::Uniform => None,
        Distribution::RandomContents => {
            let raw: Vec<f64> = (0..spec.sigma).map(|_| rng.gen::<f64>()).collect();
            let total: f64 = raw.iter().sum();
            Some(raw.into_iter().map(|x| x / total).collect())
        }
        Distribution::BetaSkew { beta } => Some(vec![
            beta / 2.0,
            beta / 2.0,
            (1.0 - beta) / 2.0,
            (1.0 - beta) / 2.0,
        ]),
    }
}

/// The symbol probabilities a generated dataset is drawn from.
pub fn probabilities(spec: &GenSpec) -> Result<Vec<f64>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    Ok(weights(spec, &mut rng).unwrap_or_else(|| vec![1.0 / spec.sigma as f64; spec.sigma]))
}

pub fn generate(spec: &GenSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let sigma = spec.sigma as SymbolId;
    let sequences: Vec<Sequence> = match weights(spec, &mut rng) {
        None => (0..spec.k)
            .map(|_| (0..spec.n).map(|_| rng.gen_range(0..sigma)).collect())
            .collect(),
        Some(w) => {
            // Normalized draws are positive, so the weights are valid.
            let dist = WeightedIndex::new(&w)
                .map_err(|e| Error::invalid("distribution", e.to_string()))?;
            (0..spec.k)
                .map(|_| {
                    (0..spec.n)
                        .map(|_| dist.sample(&mut rng) as SymbolId)
                        .collect()
                })
                .collect()
        }
    };
    Dataset::new(generated_alphabet(spec.sigma), sequences)
}
