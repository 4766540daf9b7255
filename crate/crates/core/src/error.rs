use thiserror::Error;

/// Malformed user input: alphabets, words, language spec strings, DFA files.
#[derive(Debug, Error)]
pub enum InputError {
    #[error("alphabet must contain at least one symbol")]
    EmptyAlphabet,
    #[error("alphabet has {0} symbols, at most 256 are supported")]
    AlphabetTooLarge(usize),
    #[error("duplicate alphabet symbol {0:?}")]
    DuplicateSymbol(char),
    #[error("token {0:?} is not a single character")]
    BadToken(String),
    #[error("symbol {0:?} is not in the alphabet")]
    UnknownSymbol(char),
    #[error("symbol rank {0} is out of range for the alphabet")]
    RankOutOfRange(u8),
    #[error("unknown mode {0:?}, expected `upto` or `exact`")]
    BadMode(String),
    #[error("invalid language spec {spec:?}: {reason}")]
    BadSpec { spec: String, reason: String },
    #[error("combinator operands use different alphabets ({left} vs {right})")]
    AlphabetMismatch { left: String, right: String },
    #[error(transparent)]
    Dfa(#[from] DfaError),
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

/// Problems with a DFA description. Line numbers are 1-based positions in the
/// source text.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum DfaError {
    #[error("line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("line {line}: state {state} has no transition on symbol {symbol:?}")]
    MissingTransition {
        line: usize,
        state: usize,
        symbol: String,
    },
    #[error("line {line}: unknown state {state} (automaton has {states} states)")]
    UnknownState {
        line: usize,
        state: usize,
        states: usize,
    },
    #[error("line {line}: state {state} has a transition for unknown symbol column {column}")]
    UnknownSymbol {
        line: usize,
        state: usize,
        column: usize,
    },
    #[error("line {line}: duplicate {what}")]
    Duplicate { line: usize, what: String },
    #[error("line {line}: {message}")]
    Invalid { line: usize, message: String },
}

/// Errors raised while computing congruence indices.
#[derive(Debug, Error)]
pub enum GammaError {
    /// The membership-query budget ran out. The carried record is a certified
    /// lower bound built from the levels that did complete.
    #[error("query budget exhausted after prefix length {}; gamma >= {}", .partial.prefix_bound, .partial.gamma)]
    Budget {
        partial: Box<crate::nerode::GammaRecord>,
    },
    #[error("certificate horizon {available} does not cover suffix length {needed}")]
    Horizon { needed: usize, available: usize },
    #[error("language {0} has no row certificate")]
    NoAbstraction(String),
    #[error("abstraction exceeded {0} states")]
    StateCap(usize),
    #[error("need at least {needed} usable records, got {got}")]
    TooFewRecords { needed: usize, got: usize },
    #[error("table mode {0} does not match the required mode")]
    ModeMismatch(crate::alphabet::EnumMode),
    #[error("{0}")]
    Domain(String),
}

/// Errors from the finitely generated group machinery.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GroupError {
    #[error("rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error("ball enumeration exceeded {0} elements")]
    Budget(usize),
    #[error("language {0} has no group homomorphism")]
    Unsupported(String),
}
