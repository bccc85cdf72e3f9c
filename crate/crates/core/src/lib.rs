//! Heuristics and exact oracles for the longest common subsequence (LCS) of
//! many sequences.
//!
//! The centrepiece is the deposition-and-extension solver ([`dea_solve`]):
//! a template common subsequence is grown by advancing per-sequence fronts
//! ([`deposition`]), then every template in a small pool is extended at its
//! ends and from within ([`extension`]). The crate also ships the classic
//! baselines (Long Run, Greedy, Tournament), exact DP and brute-force oracles,
//! an upper-bound estimator, the search-range probability formulas and a
//! seeded dataset generator.
//!
//! ```
//! use dea_core::{dea_solve, is_common_subsequence, Dataset, SolveOptions};
//!
//! let d = Dataset::from_strs(&["ACAC", "CACA"]).unwrap();
//! let res = dea_solve(&d, &SolveOptions::default());
//! assert_eq!(res.length, 3);
//! assert!(is_common_subsequence(&res.cs, &d));
//! ```

pub mod analysis;
pub mod baselines;
pub mod datagen;
pub mod deposition;
pub mod error;
pub mod extension;
mod index;
pub mod sequence;

pub use analysis::{performance_ratio, Estimate, RatioReport};
pub use baselines::{
    brute_force_lcs, greedy, lcs2, lcs2_len, lcs_k, long_run, tournament, upper_bound,
    BoundsReport, LongRunResult, DEFAULT_CELL_BUDGET,
};
pub use datagen::{generate, Distribution, GenSpec};
pub use deposition::{deposit, DepositionConfig, DepositionMethod};
pub use error::{Error, Result};
pub use extension::{
    build_pool, dea_solve, expand_runs, extend, extend_ends, search_range_sweep, SolveOptions,
    SolveResult, Template, TemplateOrigin, TemplatePool,
};
pub use sequence::{
    alphabet_content, is_common_subsequence, is_subsequence, Alphabet, AlphabetStats, Dataset,
    Sequence, SymbolId,
};
