//! Synchronization of complete nondeterministic finite automata (CNFAs).
//!
//! A CNFA is directed by a word `w` if some state `q_s` lies in `qw` for
//! every state `q`; for DFAs this is the classical notion of a synchronizing
//! (reset) word. This crate computes exact shortest directing word lengths,
//! implements the determinizing split transformation that preserves them,
//! detects structural classes that come with sharper length bounds, and
//! reconstructs the census of critical automata on up to 6 states by
//! inverting the split.
//!
//! Entry points:
//! - [`automaton`]: the data model (state sets, symbols, automata, words).
//! - [`split`]: the split transformation and the deterministic-subsymbol view.
//! - [`directing`]: shortest directing word engines and word verification.
//! - [`classes`]: class detectors, certificates, and length bounds.
//! - [`critical`]: symbol graphs, inverse splits, critical search and census.
//! - [`io`]: the text format, the JSON result document, census persistence.

pub mod automaton;
pub mod classes;
pub mod critical;
pub mod directing;
pub mod io;
pub mod split;

#[doc(hidden)]
pub mod testing;

pub use automaton::{Automaton, CanonicalForm, State, StateSet, Symbol, Word, MAX_STATES};

/// Resource caps for operations whose output can blow up.
#[derive(Clone, Copy, Debug)]
pub struct Budget {
    /// Maximum number of symbols a split may produce.
    pub split_symbols: u64,
    /// Maximum number of choice functions expanded per (subset, symbol) node.
    pub choices_per_node: u64,
    /// Maximum number of elements materialized in a transition monoid closure.
    pub monoid_elements: u64,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            split_symbols: 1_000_000,
            choices_per_node: 1_000_000,
            monoid_elements: 1_000_000,
        }
    }
}

impl Budget {
    /// Default caps, each overridden by the `SPLITSYNC_BUDGET` environment
    /// variable when it is set to a positive integer.
    pub fn from_env() -> Budget {
        let mut budget = Budget::default();
        if let Ok(v) = std::env::var("SPLITSYNC_BUDGET") {
            if let Ok(cap) = v.trim().parse::<u64>() {
                if cap > 0 {
                    budget.split_symbols = cap;
                    budget.choices_per_node = cap;
                    budget.monoid_elements = cap;
                }
            }
        }
        budget
    }
}

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("state count {0} exceeds the supported maximum of {MAX_STATES}")]
    TooManyStates(usize),
    #[error("state {state} out of range 1..={n}")]
    StateOutOfRange { state: usize, n: usize },
    #[error("mismatched state counts: {0} vs {1}")]
    MismatchedStateCount(usize, usize),
    #[error("image of state {state} is empty; every symbol must be complete")]
    EmptyImage { state: usize },
    #[error("symbol index {index} out of range for alphabet of size {len}")]
    SymbolOutOfRange { index: usize, len: usize },
    #[error("operation requires a deterministic automaton")]
    NotDeterministic,
    #[error("operation requires a deterministic symbol")]
    SymbolNotDeterministic,
    #[error("symbol is not part of the automaton")]
    UnknownSymbol,
    #[error("edge set is not a subset of the symbol graph's edges")]
    NotASubgraph,
    #[error("{what} budget exceeded: needs {needed}, cap is {cap}")]
    BudgetExceeded {
        what: &'static str,
        needed: u64,
        cap: u64,
    },
    #[error("count overflow: {0}")]
    Overflow(&'static str),
    #[error("{0}")]
    Unsupported(String),
    #[error("parse error at line {line}, column {col}: {msg}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },
    #[error("unknown catalog entry `{0}`")]
    UnknownCatalog(String),
    #[error("catalog data missing: {0}")]
    MissingData(String),
    #[error("catalog entry `{name}` failed verification: expected length {expected}, got {actual}")]
    CatalogVerification {
        name: String,
        expected: String,
        actual: String,
    },
    #[error("census archive corrupted: {0}")]
    Corrupted(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
