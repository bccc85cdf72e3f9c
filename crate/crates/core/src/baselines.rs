//! Comparison heuristics and exact oracles.

use itertools::Itertools;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::sequence::{alphabet_content, is_common_subsequence, Dataset, Sequence, SymbolId};

/// Default DP table size limit for the exact solver and the upper bound.
pub const DEFAULT_CELL_BUDGET: u128 = 50_000_000;

/// Default length guard of [`brute_force_lcs`].
pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LongRunResult {
    pub symbol: SymbolId,
    pub m: usize,
    pub cs: Sequence,
}

/// Longest single-symbol repetition common to all sequences.
pub fn long_run(d: &Dataset) -> LongRunResult {
    let counts = d.symbol_counts();
    let mut symbol = 0;
    let mut m = 0;
    for sym in d.alphabet().ids() {
        let c = counts.iter().map(|c| c[sym as usize]).min().unwrap_or(0);
        if c > m {
            m = c;
            symbol = sym;
        }
    }
    LongRunResult {
        symbol,
        m,
        cs: Sequence::repeat(symbol, m),
    }
}

/// Suffix LCS table: `table[i * (m + 1) + j]` is the LCS length of `s[i..]`
/// and `t[j..]`.
fn suffix_table(s: &[SymbolId], t: &[SymbolId]) -> Vec<u32> {
    let w = t.len() + 1;
    let mut table = vec![0u32; (s.len() + 1) * w];
    for i in (0..s.len()).rev() {
        for j in (0..t.len()).rev() {
            table[i * w + j] = if s[i] == t[j] {
                table[(i + 1) * w + j + 1] + 1
            } else {
                table[(i + 1) * w + j].max(table[i * w + j + 1])
            };
        }
    }
    table
}

/// Pairwise LCS with a deterministic forward traceback: take a match when the
/// front symbols agree, otherwise drop a symbol of `s` unless dropping one of
/// `t` is strictly better.
pub fn lcs2(s: &[SymbolId], t: &[SymbolId]) -> Sequence {
    let table = suffix_table(s, t);
    let w = t.len() + 1;
    let (mut i, mut j) = (0, 0);
    let mut out = Vec::with_capacity(table[0] as usize);
    while i < s.len() && j < t.len() {
        if s[i] == t[j] {
            out.push(s[i]);
            i += 1;
            j += 1;
        } else if table[(i + 1) * w + j] >= table[i * w + j + 1] {
            i += 1;
        } else {
            j += 1;
        }
    }
    Sequence(out)
}

/// Pairwise LCS length in linear space.
pub fn lcs2_len(s: &[SymbolId], t: &[SymbolId]) -> usize {
    let (s, t) = if s.len() < t.len() { (t, s) } else { (s, t) };
    let mut prev = vec![0u32; t.len() + 1];
    let mut cur = vec![0u32; t.len() + 1];
    for &a in s {
        for (j, &b) in t.iter().enumerate() {
            cur[j + 1] = if a == b {
                prev[j] + 1
            } else {
                prev[j + 1].max(cur[j])
            };
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[t.len()] as usize
}

fn cell_count(lens: impl IntoIterator<Item = usize>) -> u128 {
    lens.into_iter()
        .try_fold(1u128, |acc, l| acc.checked_mul(l as u128 + 1))
        .unwrap_or(u128::MAX)
}

/// Exact LCS of all sequences by k-dimensional dynamic programming.
///
/// Fails with [`Error::BudgetExceeded`] when the table would hold more than
/// `cell_budget` cells. Ties in the traceback advance the lowest-indexed
/// sequence, which makes the `k = 2` case agree with [`lcs2`].
pub fn lcs_k(d: &Dataset, cell_budget: u128) -> Result<Sequence> {
    let seqs = d.sequences();
    let cells = cell_count(seqs.iter().map(|s| s.len()));
    if cells > cell_budget {
        return Err(Error::BudgetExceeded {
            cells,
            budget: cell_budget,
        });
    }
    if seqs.len() == 1 {
        return Ok(seqs[0].clone());
    }
    if seqs.len() == 2 {
        return Ok(lcs2(&seqs[0], &seqs[1]));
    }

    let k = seqs.len();
    let lens: Vec<usize> = seqs.iter().map(|s| s.len()).collect();
    let mut strides = vec![1usize; k];
    for i in 1..k {
        strides[i] = strides[i - 1] * (lens[i - 1] + 1);
    }
    let diag: usize = strides.iter().sum();
    let cells = cells as usize;
    // Entries are bounded by the shortest length.
    if d.min_len() >= u16::MAX as usize {
        return Err(Error::invalid("sequence", "too long for the k-way table"));
    }
    let mut table = vec![0u16; cells];
    let mut pos = vec![0usize; k];

    for idx in (0..cells).rev() {
        let mut rem = idx;
        for i in (0..k).rev() {
            pos[i] = rem / strides[i];
            rem %= strides[i];
        }
        if pos.iter().zip(&lens).any(|(p, l)| p == l) {
            continue;
        }
        let c = seqs[0][pos[0]];
        table[idx] = if (1..k).all(|i| seqs[i][pos[i]] == c) {
            table[idx + diag] + 1
        } else {
            strides.iter().map(|&st| table[idx + st]).max().unwrap_or(0)
        };
    }

    let mut out = Vec::with_capacity(table[0] as usize);
    let mut idx = 0;
    pos.iter_mut().for_each(|p| *p = 0);
    while table[idx] > 0 {
        let c = seqs[0][pos[0]];
        if (1..k).all(|i| seqs[i][pos[i]] == c) {
            out.push(c);
            idx += diag;
            pos.iter_mut().for_each(|p| *p += 1);
        } else {
            let i = (0..k)
                .find(|&i| table[idx + strides[i]] == table[idx])
                .expect("some move preserves the optimum");
            idx += strides[i];
            pos[i] += 1;
        }
    }
    Ok(Sequence(out))
}

/// Exhaustive oracle: tries subsequences of the shortest sequence, longest
/// first (index sets in lexicographic order), and returns the first common one.
pub fn brute_force_lcs(d: &Dataset, max_len: usize) -> Result<Sequence> {
    let shortest = d
        .sequences()
        .iter()
        .min_by_key(|s| s.len())
        .expect("dataset has at least one sequence");
    if shortest.len() > max_len {
        return Err(Error::invalid(
            "max_len",
            format!(
                "shortest sequence has {} symbols, brute force is limited to {max_len}",
                shortest.len()
            ),
        ));
    }
    for size in (0..=shortest.len()).rev() {
        for picks in (0..shortest.len()).combinations(size) {
            let cand: Vec<SymbolId> = picks.iter().map(|&i| shortest[i]).collect();
            if is_common_subsequence(&cand, d) {
                return Ok(Sequence(cand));
            }
        }
    }
    unreachable!("the empty sequence is always common")
}

/// Repeatedly merges the pair with the longest pairwise LCS (ties: smallest
/// `(i, j)`) into that LCS until one sequence remains.
pub fn greedy(d: &Dataset) -> Sequence {
    let mut pool: Vec<Sequence> = d.sequences().to_vec();
    // Pairwise scores for i < j, kept in sync with `pool`.
    let mut scores: Vec<Vec<usize>> = (0..pool.len())
        .into_par_iter()
        .map(|i| {
            (0..pool.len())
                .map(|j| {
                    if j > i {
                        lcs2_len(&pool[i], &pool[j])
                    } else {
                        0
                    }
                })
                .collect()
        })
        .collect();

    while pool.len() > 1 {
        let mut best = (0, 1);
        for i in 0..pool.len() {
            for j in i + 1..pool.len() {
                if scores[i][j] > scores[best.0][best.1] {
                    best = (i, j);
                }
            }
        }
        let (i, j) = best;
        let merged = lcs2(&pool[i], &pool[j]);
        pool.remove(j);
        scores.remove(j);
        for row in scores.iter_mut() {
            row.remove(j);
        }
        pool[i] = merged;
        let fresh: Vec<usize> = (0..pool.len())
            .into_par_iter()
            .map(|o| {
                if o == i {
                    0
                } else {
                    lcs2_len(&pool[i], &pool[o])
                }
            })
            .collect();
        for (o, v) in fresh.into_iter().enumerate() {
            if o < i {
                scores[o][i] = v;
            } else if o > i {
                scores[i][o] = v;
            }
        }
    }
    pool.pop().expect("k >= 1")
}

/// Rounds of adjacent pairing `(1,2), (3,4), ...`; an odd leftover passes
/// through unchanged.
pub fn tournament(d: &Dataset) -> Sequence {
    let mut round: Vec<Sequence> = d.sequences().to_vec();
    while round.len() > 1 {
        round = round
            .par_chunks(2)
            .map(|pair| match pair {
                [a, b] => lcs2(a, b),
                [a] => a.clone(),
                _ => unreachable!(),
            })
            .collect();
    }
    round.pop().expect("k >= 1")
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BoundsReport {
    pub upper_bound: usize,
    pub chosen_sequence_indices: Vec<usize>,
    /// LCS length of the whole set, when it fits the cell budget.
    pub exact: Option<usize>,
}

/// Upper bound on the LCS length: the exact LCS of a subset of sequences.
///
/// Symbols are visited by descending global content; each picks the
/// remaining sequence richest in it. At most `min(|Σ|, k)` sequences are
/// chosen (at least two when `k >= 2`), and the last-chosen are dropped until
/// the DP table fits in `cell_budget`.
pub fn upper_bound(d: &Dataset, cell_budget: u128) -> BoundsReport {
    let k = d.k();
    let seqs = d.sequences();
    let Ok(content) = alphabet_content(d) else {
        return BoundsReport {
            upper_bound: 0,
            chosen_sequence_indices: (0..k.min(2)).collect(),
            exact: Some(0),
        };
    };
    let counts = d.symbol_counts();

    let mut order: Vec<SymbolId> = d
        .alphabet()
        .ids()
        .filter(|&s| content.get(s) > 0.0)
        .collect();
    order.sort_by(|&a, &b| content.get(b).total_cmp(&content.get(a)).then(a.cmp(&b)));

    let target = d.sigma().min(k).max(k.min(2));
    let mut chosen: Vec<usize> = Vec::with_capacity(target);
    for sym in order {
        if chosen.len() == target {
            break;
        }
        let best = (0..k).filter(|i| !chosen.contains(i)).max_by(|&a, &b| {
            counts[a][sym as usize]
                .cmp(&counts[b][sym as usize])
                .then(b.cmp(&a))
        });
        if let Some(i) = best {
            chosen.push(i);
        }
    }
    for i in 0..k {
        if chosen.len() >= target {
            break;
        }
        if !chosen.contains(&i) {
            chosen.push(i);
        }
    }

    while chosen.len() > 2 && cell_count(chosen.iter().map(|&i| seqs[i].len())) > cell_budget {
        chosen.pop();
    }

    let upper_bound = match chosen.as_slice() {
        [i] => seqs[*i].len(),
        [i, j] => lcs2_len(&seqs[*i], &seqs[*j]),
        _ => {
            let sub = d.subset(&chosen).expect("non-empty subset");
            lcs_k(&sub, cell_budget)
                .expect("subset fits the budget")
                .len()
        }
    };
    let exact = if chosen.len() == k {
        Some(upper_bound)
    } else {
        lcs_k(d, cell_budget).ok().map(|s| s.len())
    };
    BoundsReport {
        upper_bound,
        chosen_sequence_indices: chosen,
        exact,
    }
}
