//! Template generation by deposition.
//!
//! Every sequence carries a front: the number of its characters already
//! processed. Each step picks one symbol and either appends it to the
//! template (when it occurs within the next `L` characters past every front,
//! moving each front just past that occurrence) or merely consumes it at the
//! fronts where it sits. The loop stops as soon as any sequence is fully
//! consumed.
//!
//! Two selection rules are provided:
//!
//! * [`DepositionMethod::MostFront`] picks the symbol that sits at the most
//!   fronts.
//! * [`DepositionMethod::MinChange`] picks, among symbols present in every
//!   window, the one whose acceptance moves the fronts the least in total.
//!
//! All ties go to the lower symbol id, so results are deterministic.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::index::OccurrenceIndex;
use crate::sequence::{Dataset, Sequence, SymbolId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum DepositionMethod {
    /// "Most Front".
    #[serde(rename = "MF")]
    MostFront,
    /// "Min Change".
    #[serde(rename = "MC")]
    MinChange,
}

impl DepositionMethod {
    pub const ALL: [DepositionMethod; 2] =
        [DepositionMethod::MostFront, DepositionMethod::MinChange];

    pub fn short_name(self) -> &'static str {
        match self {
            DepositionMethod::MostFront => "MF",
            DepositionMethod::MinChange => "MC",
        }
    }
}

impl fmt::Display for DepositionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

impl FromStr for DepositionMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "mf" | "most-front" => Ok(DepositionMethod::MostFront),
            "mc" | "min-change" => Ok(DepositionMethod::MinChange),
            _ => Err(Error::invalid(
                "method",
                format!("unknown deposition method {s:?}"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DepositionConfig {
    pub method: DepositionMethod,
    /// Search range: number of characters past each front inspected.
    pub search_range: usize,
}

impl DepositionConfig {
    pub fn new(method: DepositionMethod, search_range: usize) -> Result<Self> {
        if search_range == 0 {
            return Err(Error::invalid("search_range", "must be at least 1"));
        }
        Ok(DepositionConfig {
            method,
            search_range,
        })
    }
}

/// Per-sequence deposited-prefix offsets after `step` deposition steps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrontState {
    pub fronts: Vec<usize>,
    pub step: usize,
}

/// Runs deposition and returns the template, a common subsequence of `d`.
pub fn deposit(d: &Dataset, cfg: DepositionConfig) -> Sequence {
    run(d, cfg, |_| {})
}

/// Like [`deposit`], additionally recording the front state before every
/// step and after the last one.
pub fn deposit_traced(d: &Dataset, cfg: DepositionConfig) -> (Sequence, Vec<FrontState>) {
    let mut trace = Vec::new();
    let t = run(d, cfg, |s| trace.push(s.clone()));
    (t, trace)
}

fn run(d: &Dataset, cfg: DepositionConfig, mut observe: impl FnMut(&FrontState)) -> Sequence {
    let index = OccurrenceIndex::new(d);
    let seqs = d.sequences();
    let sigma = d.sigma();
    let range = cfg.search_range.max(1);

    let mut state = FrontState {
        fronts: vec![0; d.k()],
        step: 0,
    };
    let mut template = Vec::new();
    let mut front_counts = vec![0usize; sigma];
    let mut matches = vec![0usize; d.k()];

    while state.fronts.iter().zip(seqs).all(|(&f, s)| f < s.len()) {
        observe(&state);

        front_counts.iter_mut().for_each(|c| *c = 0);
        for (&f, s) in state.fronts.iter().zip(seqs) {
            front_counts[s[f] as usize] += 1;
        }

        let accepted = match cfg.method {
            DepositionMethod::MostFront => {
                let sym = most_frequent(&front_counts);
                window_matches(&index, &state.fronts, sym, range, &mut matches).then_some(sym)
            }
            DepositionMethod::MinChange => {
                min_change(&index, &state.fronts, sigma, range, &mut matches)
            }
        };

        match accepted {
            Some(sym) => {
                // `matches` holds the in-window occurrence for the accepted symbol.
                template.push(sym);
                for (f, &p) in state.fronts.iter_mut().zip(&matches) {
                    *f = p + 1;
                }
            }
            None => {
                let sym = match cfg.method {
                    DepositionMethod::MostFront => most_frequent(&front_counts),
                    DepositionMethod::MinChange => least_frequent_present(&front_counts),
                };
                for (f, s) in state.fronts.iter_mut().zip(seqs) {
                    if s[*f] == sym {
                        *f += 1;
                    }
                }
            }
        }
        state.step += 1;
    }
    observe(&state);
    Sequence(template)
}

fn most_frequent(counts: &[usize]) -> SymbolId {
    // max_by_key keeps the last maximum; scan manually for the first.
    let mut best = 0;
    for (i, &c) in counts.iter().enumerate() {
        if c > counts[best] {
            best = i;
        }
    }
    best as SymbolId
}

fn least_frequent_present(counts: &[usize]) -> SymbolId {
    counts
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .min_by_key(|&(i, &c)| (c, i))
        .map(|(i, _)| i as SymbolId)
        .expect("at least one front exists")
}

/// Fills `out` with each sequence's first occurrence of `sym` at or after its
/// front and reports whether all of them fall inside the window.
fn window_matches(
    index: &OccurrenceIndex,
    fronts: &[usize],
    sym: SymbolId,
    range: usize,
    out: &mut [usize],
) -> bool {
    for (i, &f) in fronts.iter().enumerate() {
        match index.next_at_or_after(i, sym, f) {
            Some(p) if p - f < range => out[i] = p,
            _ => return false,
        }
    }
    true
}

fn min_change(
    index: &OccurrenceIndex,
    fronts: &[usize],
    sigma: usize,
    range: usize,
    matches: &mut [usize],
) -> Option<SymbolId> {
    let mut scratch = vec![0usize; fronts.len()];
    let mut best: Option<(usize, SymbolId)> = None;
    for sym in 0..sigma as SymbolId {
        if !window_matches(index, fronts, sym, range, &mut scratch) {
            continue;
        }
        let change: usize = scratch.iter().zip(fronts).map(|(&p, &f)| p + 1 - f).sum();
        if best.is_none_or(|(c, _)| change < c) {
            best = Some((change, sym));
            matches.copy_from_slice(&scratch);
        }
    }
    best.map(|(_, s)| s)
}
