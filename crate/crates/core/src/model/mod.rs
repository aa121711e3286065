//! Visibly pushdown automata and their run semantics.

mod alphabet;
pub(crate) mod automaton;
pub mod fixtures;
mod ops;
mod semantics;

use std::fmt;

use thiserror::Error;

pub use alphabet::{Alphabet, Symbol, SymbolClass, Word};
pub use automaton::{
    CallRule, InternalRule, ReturnRule, StackSym, StateId, Vpa, VpaBuilder, VpaParts, BOTTOM_NAME,
};
pub use ops::{complement_deterministic, product, product_within};
pub use semantics::{
    accepts, enumerate_language, initial_configurations, step, ConfigSet, Configuration, Runner,
};

/// A transition slot `(state, symbol[, stack symbol])`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Slot {
    pub state: String,
    pub symbol: String,
    pub stack: Option<String>,
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.stack {
            Some(g) => write!(f, "({}, {}, {})", self.state, self.symbol, g),
            None => write!(f, "({}, {})", self.state, self.symbol),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ModelError {
    #[error("alphabet has no symbols")]
    EmptyAlphabet,
    #[error("symbol `{0}` is declared in more than one class")]
    OverlappingClasses(String),
    #[error("invalid name `{0}` (names must be non-empty without whitespace or '#')")]
    InvalidName(String),
    #[error("`{0}` is reserved for the bottom-of-stack marker")]
    ReservedName(String),
    #[error("state `{0}` declared twice")]
    DuplicateState(String),
    #[error("stack symbol `{0}` declared twice")]
    DuplicateStackSymbol(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol index {0} is not in the alphabet")]
    SymbolOutOfRange(u32),
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("state index {0} out of range")]
    StateOutOfRange(u32),
    #[error("unknown stack symbol `{0}`")]
    UnknownStackSymbol(String),
    #[error("stack symbol index {0} out of range")]
    StackSymbolOutOfRange(u32),
    #[error("symbol `{symbol}` used where a {expected} symbol is required")]
    WrongClass { symbol: String, expected: SymbolClass },
    #[error("call rule from `{state}` on `{symbol}` pushes the bottom marker")]
    BottomPushed { state: String, symbol: String },
    #[error("automata are over different partitioned alphabets")]
    AlphabetMismatch,
    #[error("expected exactly one initial state, found {0}")]
    InitialCount(usize),
    #[error("more than one rule for slot {0}")]
    NotDeterministic(Slot),
    #[error("no rule for slot {0}")]
    Incomplete(Slot),
}
