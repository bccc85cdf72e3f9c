use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("empty dataset")]
    EmptyDataset,

    #[error("dataset must contain at least one sequence")]
    NoSequences,

    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,

    #[error("duplicate symbol {0:?} in alphabet")]
    DuplicateSymbol(char),

    #[error("symbol {symbol:?} in sequence {sequence} is not in the alphabet")]
    UnknownSymbol { symbol: char, sequence: usize },

    #[error("instance too large for exact DP: {cells} cells exceed budget of {budget}")]
    BudgetExceeded { cells: u128, budget: u128 },

    #[error("invalid {field}: {reason}")]
    Invalid { field: &'static str, reason: String },

    #[error("empty CS has undefined ratio")]
    UndefinedRatio,
}

impl Error {
    pub(crate) fn invalid(field: &'static str, reason: impl Into<String>) -> Self {
        Error::Invalid {
            field,
            reason: reason.into(),
        }
    }
}
