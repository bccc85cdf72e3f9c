//! Problem instances: alphabets, sequences, datasets and the subsequence
//! predicates everything else is checked against.

use std::collections::HashMap;
use std::fmt;
use std::ops::Deref;

use serde::Serialize;

use crate::error::{Error, Result};

/// Dense index of a symbol within its [`Alphabet`]. Lower ids sort first in
/// every tie-break.
pub type SymbolId = u32;

/// An ordered set of distinct symbols. The order is the declaration order
/// and stays fixed for the lifetime of a dataset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alphabet {
    symbols: Vec<char>,
    lookup: HashMap<char, SymbolId>,
}

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self> {
        let mut out = Alphabet {
            symbols: Vec::new(),
            lookup: HashMap::new(),
        };
        for c in symbols {
            if out.lookup.contains_key(&c) {
                return Err(Error::DuplicateSymbol(c));
            }
            out.push(c);
        }
        if out.symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        Ok(out)
    }

    /// Builds an alphabet in first-appearance order over `texts`.
    pub fn infer<'a>(texts: impl IntoIterator<Item = &'a str>) -> Result<Self> {
        let mut out = Alphabet {
            symbols: Vec::new(),
            lookup: HashMap::new(),
        };
        for t in texts {
            for c in t.chars() {
                if !out.lookup.contains_key(&c) {
                    out.push(c);
                }
            }
        }
        if out.symbols.is_empty() {
            return Err(Error::EmptyAlphabet);
        }
        Ok(out)
    }

    fn push(&mut self, c: char) {
        self.lookup.insert(c, self.symbols.len() as SymbolId);
        self.symbols.push(c);
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn symbols(&self) -> &[char] {
        &self.symbols
    }

    pub fn id(&self, c: char) -> Option<SymbolId> {
        self.lookup.get(&c).copied()
    }

    pub fn label(&self, id: SymbolId) -> char {
        self.symbols[id as usize]
    }

    pub fn ids(&self) -> impl Iterator<Item = SymbolId> {
        0..self.symbols.len() as SymbolId
    }

    /// Maps text onto symbol ids, failing on the first unknown character.
    pub fn encode(&self, text: &str) -> std::result::Result<Sequence, char> {
        text.chars()
            .map(|c| self.id(c).ok_or(c))
            .collect::<std::result::Result<Vec<_>, _>>()
            .map(Sequence)
    }

    pub fn decode(&self, seq: &[SymbolId]) -> String {
        seq.iter().map(|&s| self.label(s)).collect()
    }
}

/// A sequence of symbol ids.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Sequence(pub Vec<SymbolId>);

impl Sequence {
    pub fn new(symbols: Vec<SymbolId>) -> Self {
        Sequence(symbols)
    }

    pub fn empty() -> Self {
        Sequence(Vec::new())
    }

    pub fn repeat(symbol: SymbolId, times: usize) -> Self {
        Sequence(vec![symbol; times])
    }

    pub fn into_inner(self) -> Vec<SymbolId> {
        self.0
    }
}

impl Deref for Sequence {
    type Target = [SymbolId];

    fn deref(&self) -> &[SymbolId] {
        &self.0
    }
}

impl From<Vec<SymbolId>> for Sequence {
    fn from(v: Vec<SymbolId>) -> Self {
        Sequence(v)
    }
}

impl FromIterator<SymbolId> for Sequence {
    fn from_iter<I: IntoIterator<Item = SymbolId>>(iter: I) -> Self {
        Sequence(iter.into_iter().collect())
    }
}

/// `k >= 1` sequences over one shared alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    alphabet: Alphabet,
    sequences: Vec<Sequence>,
    max_len: usize,
}

impl Dataset {
    pub fn new(alphabet: Alphabet, sequences: Vec<Sequence>) -> Result<Self> {
        if sequences.is_empty() {
            return Err(Error::NoSequences);
        }
        let sigma = alphabet.len() as SymbolId;
        for (i, s) in sequences.iter().enumerate() {
            if let Some(&bad) = s.iter().find(|&&c| c >= sigma) {
                return Err(Error::invalid(
                    "sequence",
                    format!("sequence {i} holds symbol id {bad} outside an alphabet of {sigma}"),
                ));
            }
        }
        let max_len = sequences.iter().map(|s| s.len()).max().unwrap_or(0);
        Ok(Dataset {
            alphabet,
            sequences,
            max_len,
        })
    }

    /// Builds a dataset from text, inferring the alphabet in first-appearance
    /// order.
    pub fn from_strs<S: AsRef<str>>(texts: &[S]) -> Result<Self> {
        let alphabet = Alphabet::infer(texts.iter().map(|t| t.as_ref()))?;
        Self::with_alphabet(alphabet, texts)
    }

    /// Builds a dataset from text over a declared alphabet.
    pub fn with_alphabet<S: AsRef<str>>(alphabet: Alphabet, texts: &[S]) -> Result<Self> {
        let sequences = texts
            .iter()
            .enumerate()
            .map(|(i, t)| {
                alphabet
                    .encode(t.as_ref())
                    .map_err(|symbol| Error::UnknownSymbol {
                        symbol,
                        sequence: i,
                    })
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, sequences)
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn sequences(&self) -> &[Sequence] {
        &self.sequences
    }

    pub fn k(&self) -> usize {
        self.sequences.len()
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn min_len(&self) -> usize {
        self.sequences.iter().map(|s| s.len()).min().unwrap_or(0)
    }

    pub fn total_len(&self) -> usize {
        self.sequences.iter().map(|s| s.len()).sum()
    }

    pub fn sigma(&self) -> usize {
        self.alphabet.len()
    }

    /// Renders a sequence over this dataset's alphabet.
    pub fn decode(&self, seq: &[SymbolId]) -> String {
        self.alphabet.decode(seq)
    }

    /// Encodes text over this dataset's alphabet; unknown characters yield `None`.
    pub fn encode(&self, text: &str) -> Option<Sequence> {
        self.alphabet.encode(text).ok()
    }

    /// Keeps a subset of sequences (by index, in the given order).
    pub fn subset(&self, indices: &[usize]) -> Result<Dataset> {
        let seqs = indices.iter().map(|&i| self.sequences[i].clone()).collect();
        Dataset::new(self.alphabet.clone(), seqs)
    }

    /// Truncates every sequence to at most `len` symbols (prefix).
    pub fn truncated(&self, len: usize) -> Dataset {
        let seqs = self
            .sequences
            .iter()
            .map(|s| Sequence(s.iter().copied().take(len).collect()))
            .collect();
        Dataset::new(self.alphabet.clone(), seqs).expect("truncation keeps dataset valid")
    }

    /// Occurrence count of each symbol in each sequence: `counts[i][sym]`.
    pub fn symbol_counts(&self) -> Vec<Vec<usize>> {
        self.sequences
            .iter()
            .map(|s| {
                let mut c = vec![0usize; self.sigma()];
                for &x in s.iter() {
                    c[x as usize] += 1;
                }
                c
            })
            .collect()
    }
}

impl fmt::Display for Dataset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.sequences {
            writeln!(f, "{}", self.decode(s))?;
        }
        Ok(())
    }
}

/// Fraction of all characters equal to each symbol, indexed by [`SymbolId`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AlphabetStats {
    pub content: Vec<f64>,
}

impl AlphabetStats {
    pub fn get(&self, symbol: SymbolId) -> f64 {
        self.content[symbol as usize]
    }
}

/// Greedy left-to-right match: `t` is a subsequence of `s`.
pub fn is_subsequence(t: &[SymbolId], s: &[SymbolId]) -> bool {
    let mut rest = s.iter();
    t.iter().all(|c| rest.any(|x| x == c))
}

pub fn is_common_subsequence(t: &[SymbolId], d: &Dataset) -> bool {
    d.sequences().iter().all(|s| is_subsequence(t, s))
}

pub fn alphabet_content(d: &Dataset) -> Result<AlphabetStats> {
    let total = d.total_len();
    if total == 0 {
        return Err(Error::EmptyDataset);
    }
    let mut counts = vec![0usize; d.sigma()];
    for s in d.sequences() {
        for &x in s.iter() {
            counts[x as usize] += 1;
        }
    }
    Ok(AlphabetStats {
        content: counts
            .into_iter()
            .map(|c| c as f64 / total as f64)
            .collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ds(texts: &[&str]) -> Dataset {
        Dataset::from_strs(texts).unwrap()
    }

    /// Exhaustive index-tuple enumeration, independent of the greedy scan.
    fn subsequence_by_enumeration(t: &[SymbolId], s: &[SymbolId]) -> bool {
        fn go(t: &[SymbolId], s: &[SymbolId], from: usize) -> bool {
            match t.split_first() {
                None => true,
                Some((head, tail)) => (from..s.len()).any(|i| s[i] == *head && go(tail, s, i + 1)),
            }
        }
        go(t, s, 0)
    }

    #[test]
    fn subsequence_examples() {
        let d = ds(&["ABCA", "AAC", "ACA"]);
        let enc = |t: &str| d.encode(t).unwrap();
        assert!(is_subsequence(&enc(""), &enc("ABCA")));
        assert!(is_subsequence(&enc("ABCA"), &enc("ABCA")));
        assert!(!is_subsequence(&enc("AAC"), &enc("ACA")));
        assert!(!subsequence_by_enumeration(&enc("AAC"), &enc("ACA")));
    }

    #[test]
    fn common_subsequence_examples() {
        let d = ds(&["AB", "BA"]);
        assert!(is_common_subsequence(&[], &d));
        assert!(is_common_subsequence(&d.encode("A").unwrap(), &d));
        assert!(!is_common_subsequence(&d.encode("AB").unwrap(), &d));
    }

    #[test]
    fn content_examples() {
        let c = alphabet_content(&ds(&["AABB", "AAAA"])).unwrap();
        assert_eq!(c.content, vec![0.75, 0.25]);
        let c = alphabet_content(&ds(&["A"])).unwrap();
        assert_eq!(c.content, vec![1.0]);
        let c = alphabet_content(&ds(&["ABC", "ABC"])).unwrap();
        for v in c.content {
            assert!((v - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn content_of_all_empty_dataset_is_an_error() {
        let a = Alphabet::new("AB".chars()).unwrap();
        let d = Dataset::with_alphabet(a, &["", ""]).unwrap();
        assert_eq!(alphabet_content(&d), Err(Error::EmptyDataset));
    }

    #[test]
    fn alphabet_rejects_duplicates_and_unknowns() {
        assert_eq!(
            Alphabet::new("ABA".chars()),
            Err(Error::DuplicateSymbol('A'))
        );
        let a = Alphabet::new("AB".chars()).unwrap();
        assert_eq!(
            Dataset::with_alphabet(a, &["AB", "AC"]),
            Err(Error::UnknownSymbol {
                symbol: 'C',
                sequence: 1
            })
        );
        assert_eq!(Dataset::from_strs::<&str>(&[]), Err(Error::EmptyAlphabet));
    }

    #[test]
    fn inferred_alphabet_is_first_appearance() {
        let d = ds(&["cab", "dx"]);
        assert_eq!(d.alphabet().symbols(), &['c', 'a', 'b', 'd', 'x']);
        assert_eq!(d.max_len(), 3);
    }

    fn seq(max_len: usize, sigma: u32) -> impl Strategy<Value = Vec<SymbolId>> {
        prop::collection::vec(0..sigma, 0..=max_len)
    }

    proptest! {
        #[test]
        fn greedy_matches_enumeration(t in seq(6, 3), s in seq(10, 3)) {
            prop_assert_eq!(is_subsequence(&t, &s), subsequence_by_enumeration(&t, &s));
        }

        #[test]
        fn reflexive_and_empty(s in seq(12, 4)) {
            prop_assert!(is_subsequence(&s, &s));
            prop_assert!(is_subsequence(&[], &s));
        }

        #[test]
        fn transitive(c in seq(12, 2), mask_b in any::<u16>(), mask_a in any::<u16>()) {
            // b and a are obtained by deletion so the premises hold.
            let b: Vec<_> = c.iter().enumerate().filter(|(i, _)| mask_b >> i & 1 == 1).map(|(_, &x)| x).collect();
            let a: Vec<_> = b.iter().enumerate().filter(|(i, _)| mask_a >> i & 1 == 1).map(|(_, &x)| x).collect();
            prop_assert!(is_subsequence(&a, &b) && is_subsequence(&b, &c));
            prop_assert!(is_subsequence(&a, &c));
        }

        #[test]
        fn content_sums_to_one(seqs in prop::collection::vec(seq(20, 5), 1..6)) {
            prop_assume!(seqs.iter().any(|s| !s.is_empty()));
            let d = Dataset::new(
                Alphabet::new("ABCDE".chars()).unwrap(),
                seqs.into_iter().map(Sequence).collect(),
            ).unwrap();
            let c = alphabet_content(&d).unwrap();
            prop_assert!((c.content.iter().sum::<f64>() - 1.0).abs() <= 1e-12);
            prop_assert!(c.content.iter().all(|&r| r >= 0.0));
        }
    }
}
