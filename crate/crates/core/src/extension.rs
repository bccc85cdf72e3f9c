//! Template extension, the template pool and the top-level solver.
//!
//! A template is grown by two moves, both of which keep it a common
//! subsequence:
//!
//! * end extension: insert one symbol at the right or left end;
//! * run expansion: lengthen a maximal run `a^q` to `a^(q+1)`.
//!
//! Candidate insertions are tested in `O(k log n)` against the leftmost and
//! rightmost embeddings of the current template: a symbol fits into gap `g`
//! of sequence `i` iff it occurs strictly between the leftmost match of the
//! prefix `t[..g]` and the rightmost match of the suffix `t[g..]`.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::long_run;
use crate::deposition::{deposit, DepositionConfig, DepositionMethod};
use crate::error::{Error, Result};
use crate::index::OccurrenceIndex;
use crate::sequence::{Dataset, Sequence, SymbolId};

/// Cap on the search range sweep.
pub const MAX_SEARCH_RANGE: usize = 50;
/// The sweep examines `n / i` for `i` in `1..=SWEEP_DIVISORS`.
pub const SWEEP_DIVISORS: usize = 10;

/// Where a template came from. The derived order is the tie-break order of
/// [`dea_solve`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TemplateOrigin {
    Deposition {
        method: DepositionMethod,
        search_range: usize,
    },
    Basic {
        symbol: SymbolId,
    },
    Empty,
}

impl TemplateOrigin {
    pub fn search_range(&self) -> Option<usize> {
        match self {
            TemplateOrigin::Deposition { search_range, .. } => Some(*search_range),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Template {
    pub body: Sequence,
    pub origin: TemplateOrigin,
}

/// Distinct (by body) templates, in origin order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TemplatePool {
    templates: Vec<Template>,
}

impl TemplatePool {
    /// Adds `t` unless a template with the same body is already present.
    pub fn insert(&mut self, t: Template) -> bool {
        if self.templates.iter().any(|x| x.body == t.body) {
            return false;
        }
        self.templates.push(t);
        true
    }

    pub fn templates(&self) -> &[Template] {
        &self.templates
    }

    pub fn len(&self) -> usize {
        self.templates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.templates.is_empty()
    }

    pub fn contains_body(&self, body: &[SymbolId]) -> bool {
        self.templates.iter().any(|t| &t.body[..] == body)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveOptions {
    /// Single search range replacing the default sweep.
    pub search_range: Option<usize>,
    pub methods: Vec<DepositionMethod>,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            search_range: None,
            methods: DepositionMethod::ALL.to_vec(),
        }
    }
}

impl SolveOptions {
    pub fn with_methods(methods: &[DepositionMethod]) -> Self {
        SolveOptions {
            search_range: None,
            methods: methods.to_vec(),
        }
    }

    pub fn search_range(mut self, l: usize) -> Self {
        self.search_range = Some(l);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SolveResult {
    pub cs: Sequence,
    pub length: usize,
    pub origin: TemplateOrigin,
    pub search_range_used: Option<usize>,
    /// Search ranges that were swept.
    pub search_ranges: Vec<usize>,
    pub elapsed: Duration,
}

/// Leftmost and rightmost embeddings of a template in every sequence.
struct Embedding {
    left: Vec<Vec<usize>>,
    right: Vec<Vec<usize>>,
}

impl Embedding {
    fn new(t: &[SymbolId], index: &OccurrenceIndex) -> Self {
        let mut e = Embedding {
            left: vec![Vec::new(); index.k()],
            right: vec![Vec::new(); index.k()],
        };
        e.refresh(t, index);
        e
    }

    fn refresh(&mut self, t: &[SymbolId], index: &OccurrenceIndex) {
        for i in 0..index.k() {
            let left = &mut self.left[i];
            left.clear();
            let mut pos = 0;
            for &c in t {
                let p = index
                    .next_at_or_after(i, c, pos)
                    .expect("template is a common subsequence");
                left.push(p);
                pos = p + 1;
            }

            let right = &mut self.right[i];
            right.clear();
            right.resize(t.len(), 0);
            let mut pos = index.len(i);
            for (j, &c) in t.iter().enumerate().rev() {
                let p = index
                    .prev_before(i, c, pos)
                    .expect("template is a common subsequence");
                right[j] = p;
                pos = p;
            }
        }
    }

    /// Whether inserting `c` before position `gap` keeps the template common.
    fn fits(&self, index: &OccurrenceIndex, t_len: usize, gap: usize, c: SymbolId) -> bool {
        (0..index.k()).all(|i| {
            let lo = if gap == 0 {
                0
            } else {
                self.left[i][gap - 1] + 1
            };
            let hi = if gap == t_len {
                index.len(i)
            } else {
                self.right[i][gap]
            };
            matches!(index.next_at_or_after(i, c, lo), Some(p) if p < hi)
        })
    }
}

fn extend_ends_with(t: &[SymbolId], sigma: usize, index: &OccurrenceIndex) -> Sequence {
    let mut t = t.to_vec();
    let mut emb = Embedding::new(&t, index);
    loop {
        let n = t.len();
        if let Some(c) = (0..sigma as SymbolId).find(|&c| emb.fits(index, n, n, c)) {
            t.push(c);
        } else if let Some(c) = (0..sigma as SymbolId).find(|&c| emb.fits(index, n, 0, c)) {
            t.insert(0, c);
        } else {
            return Sequence(t);
        }
        emb.refresh(&t, index);
    }
}

fn expand_runs_with(t: &[SymbolId], index: &OccurrenceIndex) -> Sequence {
    let mut t = t.to_vec();
    let mut emb = Embedding::new(&t, index);
    loop {
        let mut changed = false;
        let mut start = 0;
        while start < t.len() {
            let a = t[start];
            let mut end = start;
            while end < t.len() && t[end] == a {
                end += 1;
            }
            while emb.fits(index, t.len(), end, a) {
                t.insert(end, a);
                emb.refresh(&t, index);
                end += 1;
                changed = true;
            }
            start = end;
        }
        if !changed {
            return Sequence(t);
        }
    }
}

fn extend_with(t: &[SymbolId], sigma: usize, index: &OccurrenceIndex) -> Sequence {
    let mut cur = Sequence(t.to_vec());
    loop {
        let ends = extend_ends_with(&cur, sigma, index);
        let runs = expand_runs_with(&ends, index);
        if runs == cur {
            return cur;
        }
        cur = runs;
    }
}

fn check_common(t: &[SymbolId], d: &Dataset) {
    debug_assert!(
        crate::sequence::is_common_subsequence(t, d),
        "template must be a common subsequence"
    );
}

/// Inserts symbols at the ends, one at a time, until none fits. The right end
/// is tried before the left, symbols in alphabet order, and the scan restarts
/// after every accepted insertion.
pub fn extend_ends(t: &[SymbolId], d: &Dataset) -> Sequence {
    check_common(t, d);
    extend_ends_with(t, d.sigma(), &OccurrenceIndex::new(d))
}

/// Grows every maximal run, left to right, while the template stays common.
pub fn expand_runs(t: &[SymbolId], d: &Dataset) -> Sequence {
    check_common(t, d);
    expand_runs_with(t, &OccurrenceIndex::new(d))
}

/// Alternates [`extend_ends`] and [`expand_runs`] to a fixpoint.
pub fn extend(t: &[SymbolId], d: &Dataset) -> Sequence {
    check_common(t, d);
    extend_with(t, d.sigma(), &OccurrenceIndex::new(d))
}

/// The default search ranges: `max(1, min(50, ceil(n / i)))` for
/// `i = 1..=10`, deduplicated, in that order.
pub fn search_range_sweep(max_len: usize) -> Vec<usize> {
    let mut out: Vec<usize> = Vec::new();
    for i in 1..=SWEEP_DIVISORS {
        let l = max_len.div_ceil(i).clamp(1, MAX_SEARCH_RANGE);
        if !out.contains(&l) {
            out.push(l);
        }
    }
    out
}

fn pool_with(d: &Dataset, ranges: &[usize], methods: &[DepositionMethod]) -> Result<TemplatePool> {
    if ranges.is_empty() {
        return Err(Error::invalid(
            "search_ranges",
            "at least one value required",
        ));
    }
    let configs = methods
        .iter()
        .flat_map(|&m| ranges.iter().map(move |&l| DepositionConfig::new(m, l)))
        .collect::<Result<Vec<_>>>()?;
    let deposited: Vec<Template> = configs
        .par_iter()
        .map(|cfg| Template {
            body: deposit(d, *cfg),
            origin: TemplateOrigin::Deposition {
                method: cfg.method,
                search_range: cfg.search_range,
            },
        })
        .collect();

    let mut pool = TemplatePool::default();
    for t in deposited {
        pool.insert(t);
    }
    let counts = d.symbol_counts();
    for sym in d.alphabet().ids() {
        if counts.iter().all(|c| c[sym as usize] > 0) {
            pool.insert(Template {
                body: Sequence(vec![sym]),
                origin: TemplateOrigin::Basic { symbol: sym },
            });
        }
    }
    pool.insert(Template {
        body: Sequence::empty(),
        origin: TemplateOrigin::Empty,
    });
    Ok(pool)
}

/// Empty template, every common single-symbol template, and the MF and MC
/// deposition templates for each search range.
pub fn build_pool(d: &Dataset, search_ranges: &[usize]) -> Result<TemplatePool> {
    pool_with(d, search_ranges, &DepositionMethod::ALL)
}

/// Deposition-and-extension solver.
///
/// Builds the template pool over the search range sweep (or the single
/// override), extends every template and returns the longest result. Ties go
/// to the smaller body, then to the earlier origin.
///
/// Single-symbol templates are run-expanded to `σ^m` before extension, so
/// the result is never shorter than Long Run's.
pub fn dea_solve(d: &Dataset, opts: &SolveOptions) -> SolveResult {
    let start = Instant::now();
    let ranges = match opts.search_range {
        Some(l) => vec![l.max(1)],
        None => search_range_sweep(d.max_len()),
    };
    let pool = pool_with(d, &ranges, &opts.methods).expect("ranges are non-empty and positive");
    let index = OccurrenceIndex::new(d);
    let sigma = d.sigma();

    let extended: Vec<(Sequence, TemplateOrigin)> = pool
        .templates()
        .par_iter()
        .map(|t| {
            let seed = match t.origin {
                TemplateOrigin::Basic { .. } => expand_runs_with(&t.body, &index),
                _ => t.body.clone(),
            };
            (extend_with(&seed, sigma, &index), t.origin)
        })
        .collect();

    let (cs, origin) = extended
        .into_iter()
        .min_by(|(a, oa), (b, ob)| {
            b.len()
                .cmp(&a.len())
                .then_with(|| a.cmp(b))
                .then_with(|| oa.cmp(ob))
        })
        .expect("pool always holds the empty template");

    debug_assert!(cs.len() >= long_run(d).m);
    SolveResult {
        length: cs.len(),
        search_range_used: origin.search_range(),
        origin,
        cs,
        search_ranges: ranges,
        elapsed: start.elapsed(),
    }
}
