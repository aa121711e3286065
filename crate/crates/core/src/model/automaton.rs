use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};
use std::collections::BTreeSet;

use super::alphabet::{check_name, Alphabet, Symbol, SymbolClass};
use super::ModelError;

/// Index of a control state.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StateId(pub u32);

impl StateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// Index of a stack symbol. `StackSym::BOTTOM` is the reserved bottom marker;
/// the explicit symbols are numbered from 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct StackSym(pub u32);

impl StackSym {
    pub const BOTTOM: StackSym = StackSym(0);

    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }

    #[inline]
    pub fn is_bottom(self) -> bool {
        self.0 == 0
    }
}

/// Reserved textual name of the bottom-of-stack marker.
pub const BOTTOM_NAME: &str = "BOT";

/// `from --symbol/+push--> to`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CallRule {
    pub from: StateId,
    pub symbol: Symbol,
    pub to: StateId,
    pub push: StackSym,
}

/// `from --symbol/-pop--> to`; `pop` may be the bottom marker.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ReturnRule {
    pub from: StateId,
    pub symbol: Symbol,
    pub pop: StackSym,
    pub to: StateId,
}

/// `from --symbol--> to`
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InternalRule {
    pub from: StateId,
    pub symbol: Symbol,
    pub to: StateId,
}

/// A visibly pushdown automaton.
///
/// Values are immutable once built. Rules are stored sorted and deduplicated,
/// alongside lookup tables keyed by source state and symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vpa {
    alphabet: Alphabet,
    state_names: Vec<String>,
    stack_names: Vec<String>,
    initial: Vec<StateId>,
    finals: Vec<bool>,
    call_rules: Vec<CallRule>,
    return_rules: Vec<ReturnRule>,
    internal_rules: Vec<InternalRule>,
    // (state * |Σ| + symbol) -> successors
    call_out: Vec<Vec<(StateId, StackSym)>>,
    internal_out: Vec<Vec<StateId>>,
    // targets of `return_rules`, same order
    return_to: Vec<StateId>,
    // (target, call symbol, pushed) -> sources
    call_in: HashMap<(StateId, Symbol, StackSym), Vec<StateId>>,
}

/// Raw, index-based description of a VPA; validated by [`Vpa::from_parts`].
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VpaParts {
    pub state_names: Vec<String>,
    /// Explicit stack symbols only; index `i` here is `StackSym(i + 1)`.
    pub stack_names: Vec<String>,
    pub initial: Vec<StateId>,
    pub finals: Vec<StateId>,
    pub call_rules: Vec<CallRule>,
    pub return_rules: Vec<ReturnRule>,
    pub internal_rules: Vec<InternalRule>,
}

impl Vpa {
    pub fn from_parts(alphabet: Alphabet, parts: VpaParts) -> Result<Vpa, ModelError> {
        let VpaParts {
            state_names,
            stack_names,
            initial,
            finals,
            mut call_rules,
            mut return_rules,
            mut internal_rules,
        } = parts;

        let mut seen = HashSet::default();
        for name in &state_names {
            check_name(name)?;
            if !seen.insert(name.as_str()) {
                return Err(ModelError::DuplicateState(name.clone()));
            }
        }
        let mut seen = HashSet::default();
        for name in &stack_names {
            check_name(name)?;
            if name == BOTTOM_NAME {
                return Err(ModelError::ReservedName(name.clone()));
            }
            if !seen.insert(name.as_str()) {
                return Err(ModelError::DuplicateStackSymbol(name.clone()));
            }
        }

        let n = state_names.len();
        let n_stack = stack_names.len() + 1;
        let state_ok = |q: StateId| -> Result<(), ModelError> {
            if q.index() < n {
                Ok(())
            } else {
                Err(ModelError::StateOutOfRange(q.0))
            }
        };
        let stack_ok = |g: StackSym| -> Result<(), ModelError> {
            if g.index() < n_stack {
                Ok(())
            } else {
                Err(ModelError::StackSymbolOutOfRange(g.0))
            }
        };
        let class_ok = |sym: Symbol, expected: SymbolClass| -> Result<(), ModelError> {
            match alphabet.class(sym) {
                None => Err(ModelError::SymbolOutOfRange(sym.0)),
                Some(c) if c != expected => Err(ModelError::WrongClass {
                    symbol: alphabet.name(sym).to_string(),
                    expected,
                }),
                Some(_) => Ok(()),
            }
        };

        for &q in initial.iter().chain(&finals) {
            state_ok(q)?;
        }
        for r in &call_rules {
            state_ok(r.from)?;
            state_ok(r.to)?;
            class_ok(r.symbol, SymbolClass::Call)?;
            stack_ok(r.push)?;
            if r.push.is_bottom() {
                return Err(ModelError::BottomPushed {
                    state: state_names[r.from.index()].clone(),
                    symbol: alphabet.name(r.symbol).to_string(),
                });
            }
        }
        for r in &return_rules {
            state_ok(r.from)?;
            state_ok(r.to)?;
            class_ok(r.symbol, SymbolClass::Return)?;
            stack_ok(r.pop)?;
        }
        for r in &internal_rules {
            state_ok(r.from)?;
            state_ok(r.to)?;
            class_ok(r.symbol, SymbolClass::Internal)?;
        }

        let initial: Vec<StateId> = initial.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let mut final_flags = vec![false; n];
        for q in finals {
            final_flags[q.index()] = true;
        }
        call_rules.sort_unstable();
        call_rules.dedup();
        return_rules.sort_unstable();
        return_rules.dedup();
        internal_rules.sort_unstable();
        internal_rules.dedup();

        let n_sym = alphabet.len();
        let mut call_out = vec![Vec::new(); n * n_sym];
        let mut call_in: HashMap<_, Vec<StateId>> = HashMap::default();
        for r in &call_rules {
            call_out[r.from.index() * n_sym + r.symbol.index()].push((r.to, r.push));
            call_in.entry((r.to, r.symbol, r.push)).or_default().push(r.from);
        }
        let mut internal_out = vec![Vec::new(); n * n_sym];
        for r in &internal_rules {
            internal_out[r.from.index() * n_sym + r.symbol.index()].push(r.to);
        }
        let return_to = return_rules.iter().map(|r| r.to).collect();

        let mut all_stack = Vec::with_capacity(n_stack);
        all_stack.push(BOTTOM_NAME.to_string());
        all_stack.extend(stack_names);

        Ok(Vpa {
            alphabet,
            state_names,
            stack_names: all_stack,
            initial,
            finals: final_flags,
            call_rules,
            return_rules,
            internal_rules,
            call_out,
            internal_out,
            return_to,
            call_in,
        })
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.state_names.len()
    }

    pub fn states(&self) -> impl Iterator<Item = StateId> + Clone {
        (0..self.state_names.len() as u32).map(StateId)
    }

    pub fn state_name(&self, q: StateId) -> &str {
        &self.state_names[q.index()]
    }

    pub fn state_by_name(&self, name: &str) -> Option<StateId> {
        self.state_names
            .iter()
            .position(|n| n == name)
            .map(|i| StateId(i as u32))
    }

    /// Number of stack symbols including the bottom marker.
    pub fn num_stack_symbols(&self) -> usize {
        self.stack_names.len()
    }

    /// All stack symbols, bottom marker first.
    pub fn stack_symbols(&self) -> impl Iterator<Item = StackSym> + Clone {
        (0..self.stack_names.len() as u32).map(StackSym)
    }

    pub fn stack_name(&self, g: StackSym) -> &str {
        &self.stack_names[g.index()]
    }

    pub fn stack_by_name(&self, name: &str) -> Option<StackSym> {
        self.stack_names
            .iter()
            .position(|n| n == name)
            .map(|i| StackSym(i as u32))
    }

    pub fn initial(&self) -> &[StateId] {
        &self.initial
    }

    pub fn is_final(&self, q: StateId) -> bool {
        self.finals[q.index()]
    }

    pub fn finals(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states().filter(|&q| self.is_final(q))
    }

    pub fn call_rules(&self) -> &[CallRule] {
        &self.call_rules
    }

    pub fn return_rules(&self) -> &[ReturnRule] {
        &self.return_rules
    }

    pub fn internal_rules(&self) -> &[InternalRule] {
        &self.internal_rules
    }

    pub fn num_rules(&self) -> usize {
        self.call_rules.len() + self.return_rules.len() + self.internal_rules.len()
    }

    #[inline]
    pub fn call_targets(&self, q: StateId, a: Symbol) -> &[(StateId, StackSym)] {
        &self.call_out[q.index() * self.alphabet.len() + a.index()]
    }

    #[inline]
    pub fn internal_targets(&self, q: StateId, a: Symbol) -> &[StateId] {
        &self.internal_out[q.index() * self.alphabet.len() + a.index()]
    }

    #[inline]
    pub fn return_targets(&self, q: StateId, a: Symbol, top: StackSym) -> &[StateId] {
        let key = (q, a, top);
        let lo = self
            .return_rules
            .partition_point(|r| (r.from, r.symbol, r.pop) < key);
        let hi = lo + self.return_rules[lo..].partition_point(|r| (r.from, r.symbol, r.pop) == key);
        &self.return_to[lo..hi]
    }

    /// States `q` with a rule `q --a/+push--> target`.
    #[inline]
    pub fn call_sources(&self, target: StateId, a: Symbol, push: StackSym) -> &[StateId] {
        self.call_in.get(&(target, a, push)).map_or(&[], Vec::as_slice)
    }

    /// Decomposes back into index-based parts (explicit stack symbols only).
    pub fn to_parts(&self) -> VpaParts {
        VpaParts {
            state_names: self.state_names.clone(),
            stack_names: self.stack_names[1..].to_vec(),
            initial: self.initial.clone(),
            finals: self.finals().collect(),
            call_rules: self.call_rules.clone(),
            return_rules: self.return_rules.clone(),
            internal_rules: self.internal_rules.clone(),
        }
    }

    /// Same automaton with a different final set.
    pub fn with_finals(&self, finals: impl IntoIterator<Item = StateId>) -> Result<Vpa, ModelError> {
        let mut parts = self.to_parts();
        parts.finals = finals.into_iter().collect();
        Vpa::from_parts(self.alphabet.clone(), parts)
    }

    /// Checks `|initial| = 1` and at most one rule per (state, symbol) slot,
    /// with return slots further keyed by stack symbol.
    pub fn check_deterministic(&self) -> Result<(), ModelError> {
        if self.initial.len() != 1 {
            return Err(ModelError::InitialCount(self.initial.len()));
        }
        for q in self.states() {
            for a in self.alphabet.calls() {
                if self.call_targets(q, a).len() > 1 {
                    return Err(self.slot_error(q, a, None, true));
                }
            }
            for a in self.alphabet.internals() {
                if self.internal_targets(q, a).len() > 1 {
                    return Err(self.slot_error(q, a, None, true));
                }
            }
        }
        for w in self.return_rules.windows(2) {
            if (w[0].from, w[0].symbol, w[0].pop) == (w[1].from, w[1].symbol, w[1].pop) {
                return Err(self.slot_error(w[0].from, w[0].symbol, Some(w[0].pop), true));
            }
        }
        Ok(())
    }

    /// Checks that every (state, call), (state, internal) and
    /// (state, return, stack symbol including the bottom marker) slot has a rule.
    pub fn check_complete(&self) -> Result<(), ModelError> {
        for q in self.states() {
            for a in self.alphabet.calls() {
                if self.call_targets(q, a).is_empty() {
                    return Err(self.slot_error(q, a, None, false));
                }
            }
            for a in self.alphabet.internals() {
                if self.internal_targets(q, a).is_empty() {
                    return Err(self.slot_error(q, a, None, false));
                }
            }
            for a in self.alphabet.returns() {
                for g in self.stack_symbols() {
                    if self.return_targets(q, a, g).is_empty() {
                        return Err(self.slot_error(q, a, Some(g), false));
                    }
                }
            }
        }
        Ok(())
    }

    fn slot_error(&self, q: StateId, a: Symbol, g: Option<StackSym>, duplicate: bool) -> ModelError {
        let slot = super::Slot {
            state: self.state_name(q).to_string(),
            symbol: self.alphabet.name(a).to_string(),
            stack: g.map(|g| self.stack_name(g).to_string()),
        };
        if duplicate {
            ModelError::NotDeterministic(slot)
        } else {
            ModelError::Incomplete(slot)
        }
    }
}

/// Makes generated names unique by priming repeats (`x`, `x'`, `x''`, ...).
pub(crate) fn disambiguate(names: Vec<String>) -> Vec<String> {
    let mut seen = HashSet::default();
    names
        .into_iter()
        .map(|mut name| {
            while !seen.insert(name.clone()) {
                name.push('\'');
            }
            name
        })
        .collect()
}

/// Name-based construction of a [`Vpa`]. Every state and stack symbol must be
/// declared before [`build`](VpaBuilder::build); references to undeclared names
/// are reported there.
#[derive(Clone, Debug)]
pub struct VpaBuilder {
    alphabet: Alphabet,
    states: Vec<String>,
    stack: Vec<String>,
    initial: Vec<String>,
    finals: Vec<String>,
    calls: Vec<(String, String, String, String)>,
    returns: Vec<(String, String, String, String)>,
    internals: Vec<(String, String, String)>,
}

impl VpaBuilder {
    pub fn new(alphabet: Alphabet) -> Self {
        VpaBuilder {
            alphabet,
            states: Vec::new(),
            stack: Vec::new(),
            initial: Vec::new(),
            finals: Vec::new(),
            calls: Vec::new(),
            returns: Vec::new(),
            internals: Vec::new(),
        }
    }

    pub fn state(&mut self, name: &str) -> &mut Self {
        if !self.states.iter().any(|s| s == name) {
            self.states.push(name.to_string());
        }
        self
    }

    pub fn stack_symbol(&mut self, name: &str) -> &mut Self {
        if !self.stack.iter().any(|s| s == name) {
            self.stack.push(name.to_string());
        }
        self
    }

    pub fn initial(&mut self, name: &str) -> &mut Self {
        self.initial.push(name.to_string());
        self
    }

    pub fn final_state(&mut self, name: &str) -> &mut Self {
        self.finals.push(name.to_string());
        self
    }

    pub fn call(&mut self, from: &str, symbol: &str, to: &str, push: &str) -> &mut Self {
        self.calls
            .push((from.into(), symbol.into(), to.into(), push.into()));
        self
    }

    /// A return rule; `pop` may be `"BOT"`.
    pub fn ret(&mut self, from: &str, symbol: &str, pop: &str, to: &str) -> &mut Self {
        self.returns
            .push((from.into(), symbol.into(), pop.into(), to.into()));
        self
    }

    pub fn internal(&mut self, from: &str, symbol: &str, to: &str) -> &mut Self {
        self.internals.push((from.into(), symbol.into(), to.into()));
        self
    }

    pub fn build(&self) -> Result<Vpa, ModelError> {
        let state = |name: &str| -> Result<StateId, ModelError> {
            self.states
                .iter()
                .position(|s| s == name)
                .map(|i| StateId(i as u32))
                .ok_or_else(|| ModelError::UnknownState(name.to_string()))
        };
        let stack = |name: &str| -> Result<StackSym, ModelError> {
            if name == BOTTOM_NAME {
                return Ok(StackSym::BOTTOM);
            }
            self.stack
                .iter()
                .position(|s| s == name)
                .map(|i| StackSym(i as u32 + 1))
                .ok_or_else(|| ModelError::UnknownStackSymbol(name.to_string()))
        };
        let symbol = |name: &str| -> Result<Symbol, ModelError> {
            self.alphabet
                .lookup(name)
                .ok_or_else(|| ModelError::UnknownSymbol(name.to_string()))
        };

        let mut parts = VpaParts {
            state_names: self.states.clone(),
            stack_names: self.stack.clone(),
            ..VpaParts::default()
        };
        for q in &self.initial {
            parts.initial.push(state(q)?);
        }
        for q in &self.finals {
            parts.finals.push(state(q)?);
        }
        for (from, a, to, push) in &self.calls {
            parts.call_rules.push(CallRule {
                from: state(from)?,
                symbol: symbol(a)?,
                to: state(to)?,
                push: stack(push)?,
            });
        }
        for (from, a, pop, to) in &self.returns {
            parts.return_rules.push(ReturnRule {
                from: state(from)?,
                symbol: symbol(a)?,
                pop: stack(pop)?,
                to: state(to)?,
            });
        }
        for (from, a, to) in &self.internals {
            parts.internal_rules.push(InternalRule {
                from: state(from)?,
                symbol: symbol(a)?,
                to: state(to)?,
            });
        }
        Vpa::from_parts(self.alphabet.clone(), parts)
    }
}
