use rustc_hash::FxHashMap as HashMap;
use std::hash::Hash;

use super::construction::Construction;
use super::relation::Relation;
use super::successors::DStackSymbol;
use crate::model::{StackSym, StateId, Symbol};
use crate::preach::{LabeledRule, LazySystem, PdsRule};

/// Hash-consing table handing out dense indices.
#[derive(Clone, Debug)]
pub(crate) struct Interner<T> {
    items: Vec<T>,
    index: HashMap<T, u32>,
}

impl<T: Clone + Eq + Hash> Interner<T> {
    pub fn new() -> Self {
        Interner {
            items: Vec::new(),
            index: HashMap::default(),
        }
    }

    pub fn intern(&mut self, item: T) -> u32 {
        if let Some(&i) = self.index.get(&item) {
            return i;
        }
        let i = self.items.len() as u32;
        self.items.push(item.clone());
        self.index.insert(item, i);
        i
    }

    pub fn get(&self, i: u32) -> &T {
        &self.items[i as usize]
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn into_items(self) -> Vec<T> {
        self.items
    }
}

/// The determinized automaton explored on demand. D-states and d-stack
/// symbols are interned to `StateId`s and `StackSym`s (index 0 is the
/// bottom marker); transitions are memoized.
pub struct DetSpace<C: Construction> {
    pub(crate) c: C,
    pub(crate) states: Interner<C::State>,
    pub(crate) stack: Interner<DStackSymbol<StateId>>,
    finals: Vec<bool>,
    internal: HashMap<(StateId, Symbol), StateId>,
    push: HashMap<(StateId, Symbol), (StateId, StackSym)>,
    pop: HashMap<(StateId, StackSym, Symbol), StateId>,
    updates: HashMap<(StateId, Symbol, Symbol), Relation>,
    /// Memoize pop transitions; worthwhile only when the same
    /// (d-state, stack symbol) pair is queried repeatedly.
    pub(crate) memo_pops: bool,
    calls: Vec<Symbol>,
    returns: Vec<Symbol>,
    internals: Vec<Symbol>,
    /// Makes rejecting d-states targets of the exploration.
    pub stop_on_rejecting: bool,
}

impl<C: Construction> DetSpace<C> {
    pub fn new(c: C) -> Self {
        let alphabet = c.source().alphabet();
        let calls = alphabet.calls().collect();
        let returns = alphabet.returns().collect();
        let internals = alphabet.internals().collect();
        DetSpace {
            c,
            states: Interner::new(),
            stack: Interner::new(),
            finals: Vec::new(),
            internal: HashMap::default(),
            push: HashMap::default(),
            pop: HashMap::default(),
            updates: HashMap::default(),
            memo_pops: false,
            calls,
            returns,
            internals,
            stop_on_rejecting: false,
        }
    }

    pub fn construction(&self) -> &C {
        &self.c
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    /// Explicit stack symbols created so far.
    pub fn num_stack_symbols(&self) -> usize {
        self.stack.len()
    }

    pub fn state(&self, s: StateId) -> &C::State {
        self.states.get(s.0)
    }

    pub fn stack_symbol(&self, g: StackSym) -> &DStackSymbol<StateId> {
        debug_assert!(!g.is_bottom());
        self.stack.get(g.0 - 1)
    }

    pub fn is_final(&self, s: StateId) -> bool {
        self.finals[s.index()]
    }

    pub fn intern(&mut self, d: C::State) -> StateId {
        let id = self.states.intern(d);
        if id as usize == self.finals.len() {
            let f = self.c.is_final(self.states.get(id));
            self.finals.push(f);
        }
        StateId(id)
    }

    pub fn initial(&mut self) -> StateId {
        let d = self.c.initial();
        self.intern(d)
    }

    pub fn internal_succ(&mut self, s: StateId, a: Symbol) -> StateId {
        if let Some(&t) = self.internal.get(&(s, a)) {
            return t;
        }
        let d = self.c.internal(self.states.get(s.0), a);
        let t = self.intern(d);
        self.internal.insert((s, a), t);
        t
    }

    pub fn push_succ(&mut self, s: StateId, a: Symbol) -> (StateId, StackSym) {
        if let Some(&t) = self.push.get(&(s, a)) {
            return t;
        }
        let d = self.c.push(self.states.get(s.0), a);
        let t = self.intern(d);
        let g = StackSym(self.stack.intern(DStackSymbol { origin: s, call: a }) + 1);
        self.push.insert((s, a), (t, g));
        (t, g)
    }

    pub fn pop_succ(&mut self, s: StateId, top: StackSym, a: Symbol) -> StateId {
        if self.memo_pops {
            if let Some(&t) = self.pop.get(&(s, top, a)) {
                return t;
            }
        }
        let d = if top.is_bottom() {
            self.c.pop_empty(self.states.get(s.0), a)
        } else {
            let DStackSymbol { origin, call } = *self.stack.get(top.0 - 1);
            let (c, states) = (&self.c, &self.states);
            let upd = self
                .updates
                .entry((s, call, a))
                .or_insert_with(|| c.update(states.get(s.0), call, a));
            c.pop(states.get(origin.0), upd)
        };
        let t = self.intern(d);
        if self.memo_pops {
            self.pop.insert((s, top, a), t);
        }
        t
    }

    pub fn calls(&self) -> &[Symbol] {
        &self.calls
    }

    pub fn returns(&self) -> &[Symbol] {
        &self.returns
    }

    pub fn internals(&self) -> &[Symbol] {
        &self.internals
    }

    pub(crate) fn into_parts(self) -> (C, Vec<C::State>, Vec<DStackSymbol<StateId>>) {
        (self.c, self.states.into_items(), self.stack.into_items())
    }
}

impl<C: Construction> LazySystem for DetSpace<C> {
    fn initial_states(&mut self) -> Vec<StateId> {
        vec![self.initial()]
    }

    fn state_rules(&mut self, s: StateId, out: &mut Vec<LabeledRule>) {
        for i in 0..self.internals.len() {
            let a = self.internals[i];
            let to = self.internal_succ(s, a);
            out.push(LabeledRule {
                symbol: a,
                rule: PdsRule::Internal { from: s, to },
            });
        }
        for i in 0..self.calls.len() {
            let a = self.calls[i];
            let (to, push) = self.push_succ(s, a);
            out.push(LabeledRule {
                symbol: a,
                rule: PdsRule::Push { from: s, to, push },
            });
        }
    }

    fn pop_rules(&mut self, s: StateId, top: StackSym, out: &mut Vec<LabeledRule>) {
        for i in 0..self.returns.len() {
            let a = self.returns[i];
            let to = self.pop_succ(s, top, a);
            out.push(LabeledRule {
                symbol: a,
                rule: PdsRule::Pop { from: s, top, to },
            });
        }
    }

    fn is_target(&self, s: StateId) -> bool {
        self.stop_on_rejecting && !self.is_final(s)
    }
}
