use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),

    #[error("cannot parse word {word:?}: {reason}")]
    ParseWord { word: String, reason: String },

    #[error("alphabet mismatch between arguments")]
    AlphabetMismatch,

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("{0:?} is not a cut-vertex of the connected Whitehead graph")]
    NotACutVertex(String),

    #[error("node budget {0} exceeded while exploring")]
    NodeBudgetExceeded(usize),

    #[error("rank {rank} exceeds the safety guard {guard}; use --force to override")]
    RankGuarded { rank: usize, guard: usize },

    #[error("oracle guard violated: {0}")]
    OracleGuard(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),
}

pub type Result<T> = std::result::Result<T, Error>;
