use thiserror::Error;

/// Errors raised by the constructions and decision procedures.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("state budget of {limit} exceeded while {during}")]
    ResourceLimit { limit: usize, during: &'static str },
    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("component index {index} out of range for arity {arity}")]
    IndexOutOfRange { index: usize, arity: usize },
    #[error("arity mismatch: expected {expected}, found {found}")]
    Arity { expected: usize, found: usize },
    #[error("invalid alphabet: {0}")]
    InvalidAlphabet(String),
    #[error("invalid machine: {0}")]
    InvalidMachine(String),
    #[error("transition profiles belong to different automata")]
    ProfileMismatch,
    #[error("machine is not complete: {0}")]
    Incomplete(String),
    #[error("oracle discrepancy: {0}")]
    Discrepancy(String),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Upper bound on the number of states any potentially exponential
/// construction may create.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_states: usize,
}

/// Environment variable overriding the default state budget.
pub const BUDGET_ENV: &str = "WORDREL_STATE_BUDGET";

impl Default for Budget {
    fn default() -> Self {
        Budget { max_states: 1_000_000 }
    }
}

impl Budget {
    pub fn new(max_states: usize) -> Self {
        Budget { max_states }
    }

    /// Reads the budget from `WORDREL_STATE_BUDGET`, falling back to the default.
    pub fn from_env() -> Self {
        std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse().ok())
            .map(Budget::new)
            .unwrap_or_default()
    }

    pub fn check(&self, count: usize, during: &'static str) -> Result<()> {
        if count > self.max_states {
            Err(Error::ResourceLimit { limit: self.max_states, during })
        } else {
            Ok(())
        }
    }
}
