use std::collections::{BTreeSet, HashMap};
use std::fmt;

use super::ModelError;

/// Index of an input symbol inside an [`Alphabet`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Symbol(pub u32);

impl Symbol {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Which stack action an input symbol triggers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SymbolClass {
    Call,
    Return,
    Internal,
}

impl fmt::Display for SymbolClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymbolClass::Call => "call",
            SymbolClass::Return => "return",
            SymbolClass::Internal => "internal",
        })
    }
}

pub type Word = Vec<Symbol>;

/// A partitioned input alphabet.
///
/// Symbols are laid out calls first, then returns, then internals; each class
/// is kept in sorted order so that two alphabets over the same three sets
/// compare equal and assign identical indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    names: Vec<String>,
    n_calls: usize,
    n_returns: usize,
    index: HashMap<String, Symbol>,
}

pub(crate) fn check_name(name: &str) -> Result<(), ModelError> {
    if name.is_empty() || name.chars().any(|c| c.is_whitespace() || c == '#') {
        return Err(ModelError::InvalidName(name.to_string()));
    }
    Ok(())
}

impl Alphabet {
    pub fn new<C, R, I>(calls: C, returns: R, internals: I) -> Result<Self, ModelError>
    where
        C: IntoIterator,
        C::Item: Into<String>,
        R: IntoIterator,
        R::Item: Into<String>,
        I: IntoIterator,
        I::Item: Into<String>,
    {
        let calls: BTreeSet<String> = calls.into_iter().map(Into::into).collect();
        let returns: BTreeSet<String> = returns.into_iter().map(Into::into).collect();
        let internals: BTreeSet<String> = internals.into_iter().map(Into::into).collect();
        if calls.is_empty() && returns.is_empty() && internals.is_empty() {
            return Err(ModelError::EmptyAlphabet);
        }
        let n_calls = calls.len();
        let n_returns = returns.len();
        let mut names = Vec::with_capacity(n_calls + n_returns + internals.len());
        let mut index = HashMap::new();
        for name in calls.into_iter().chain(returns).chain(internals) {
            check_name(&name)?;
            let sym = Symbol(names.len() as u32);
            if index.insert(name.clone(), sym).is_some() {
                return Err(ModelError::OverlappingClasses(name));
            }
            names.push(name);
        }
        Ok(Alphabet {
            names,
            n_calls,
            n_returns,
            index,
        })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn contains(&self, sym: Symbol) -> bool {
        sym.index() < self.names.len()
    }

    pub fn class(&self, sym: Symbol) -> Option<SymbolClass> {
        let i = sym.index();
        if i < self.n_calls {
            Some(SymbolClass::Call)
        } else if i < self.n_calls + self.n_returns {
            Some(SymbolClass::Return)
        } else if i < self.names.len() {
            Some(SymbolClass::Internal)
        } else {
            None
        }
    }

    pub fn name(&self, sym: Symbol) -> &str {
        &self.names[sym.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<Symbol> {
        self.index.get(name).copied()
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> + Clone {
        (0..self.names.len() as u32).map(Symbol)
    }

    pub fn calls(&self) -> impl Iterator<Item = Symbol> + Clone {
        (0..self.n_calls as u32).map(Symbol)
    }

    pub fn returns(&self) -> impl Iterator<Item = Symbol> + Clone {
        (self.n_calls as u32..(self.n_calls + self.n_returns) as u32).map(Symbol)
    }

    pub fn internals(&self) -> impl Iterator<Item = Symbol> + Clone {
        ((self.n_calls + self.n_returns) as u32..self.names.len() as u32).map(Symbol)
    }

    pub fn names_of(&self, class: SymbolClass) -> impl Iterator<Item = &str> {
        let range = match class {
            SymbolClass::Call => 0..self.n_calls,
            SymbolClass::Return => self.n_calls..self.n_calls + self.n_returns,
            SymbolClass::Internal => self.n_calls + self.n_returns..self.names.len(),
        };
        self.names[range].iter().map(String::as_str)
    }

    /// True when every symbol name is a single character, so words can be
    /// written without separators.
    pub fn is_compact(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Parses a word. Whitespace-separated tokens are looked up as symbol
    /// names; a single token that is not a symbol is split into characters
    /// when the alphabet is compact. `ε` or the empty string is the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, ModelError> {
        let text = text.trim();
        if text.is_empty() || text == "ε" {
            return Ok(Vec::new());
        }
        let tokens: Vec<&str> = text.split_whitespace().collect();
        if tokens.len() == 1 && self.lookup(tokens[0]).is_none() && self.is_compact() {
            return text
                .chars()
                .map(|c| {
                    let s = c.to_string();
                    self.lookup(&s).ok_or(ModelError::UnknownSymbol(s))
                })
                .collect();
        }
        tokens
            .into_iter()
            .map(|t| {
                self.lookup(t)
                    .ok_or_else(|| ModelError::UnknownSymbol(t.to_string()))
            })
            .collect()
    }

    pub fn render_word(&self, word: &[Symbol]) -> String {
        if word.is_empty() {
            return "ε".to_string();
        }
        let sep = if self.is_compact() { "" } else { " " };
        word.iter()
            .map(|&s| self.names.get(s.index()).map_or("?", String::as_str))
            .collect::<Vec<_>>()
            .join(sep)
    }
}
