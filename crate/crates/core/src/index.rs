use crate::sequence::{Dataset, SymbolId};

/// Sorted occurrence positions of every symbol in every sequence.
pub(crate) struct OccurrenceIndex {
    // positions[seq][symbol] -> ascending offsets
    positions: Vec<Vec<Vec<u32>>>,
    lens: Vec<usize>,
}

impl OccurrenceIndex {
    pub fn new(d: &Dataset) -> Self {
        let sigma = d.sigma();
        let positions = d
            .sequences()
            .iter()
            .map(|s| {
                let mut per = vec![Vec::new(); sigma];
                for (p, &c) in s.iter().enumerate() {
                    per[c as usize].push(p as u32);
                }
                per
            })
            .collect();
        OccurrenceIndex {
            positions,
            lens: d.sequences().iter().map(|s| s.len()).collect(),
        }
    }

    pub fn len(&self, seq: usize) -> usize {
        self.lens[seq]
    }

    pub fn k(&self) -> usize {
        self.lens.len()
    }

    /// First occurrence of `sym` in sequence `seq` at offset `>= from`.
    #[inline]
    pub fn next_at_or_after(&self, seq: usize, sym: SymbolId, from: usize) -> Option<usize> {
        let occ = &self.positions[seq][sym as usize];
        let i = occ.partition_point(|&p| (p as usize) < from);
        occ.get(i).map(|&p| p as usize)
    }

    /// Last occurrence of `sym` in sequence `seq` at offset `< before`.
    #[inline]
    pub fn prev_before(&self, seq: usize, sym: SymbolId, before: usize) -> Option<usize> {
        let occ = &self.positions[seq][sym as usize];
        let i = occ.partition_point(|&p| (p as usize) < before);
        i.checked_sub(1).map(|j| occ[j] as usize)
    }
}
