use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};
use std::collections::{BTreeSet, VecDeque};
use std::fmt::Write as _;

use thiserror::Error;

use crate::model::{Configuration, StackSym, StateId, Vpa};

/// A state of a P-automaton.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PState {
    /// A control state of the pushdown system; these are the initial states.
    Control(StateId),
    /// `p_(q', γ')`, created for push rules entering `q'` with `γ'`.
    Aux(StateId, StackSym),
    /// The accepting sink `f`.
    Final,
    /// Any other state of a hand-built seed automaton.
    Extra(u32),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PLabel {
    Eps,
    Sym(StackSym),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PStateId(pub u32);

impl PStateId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PTransition {
    pub from: PStateId,
    pub label: PLabel,
    pub to: PStateId,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PreachError {
    #[error("state {0:?} is not a control state of the P-automaton")]
    NotControl(StateId),
    #[error("P-automaton state index {0} out of range")]
    UnknownState(u32),
}

/// Finite automaton over stack symbols whose accepted words, read from a
/// control state, encode a set of configurations.
#[derive(Clone, Debug, Default)]
pub struct PAutomaton {
    states: Vec<PState>,
    index: HashMap<PState, PStateId>,
    finals: Vec<bool>,
    edges: HashSet<PTransition>,
    order: Vec<PTransition>,
    out: Vec<Vec<(PLabel, PStateId)>>,
    inn: Vec<Vec<(PLabel, PStateId)>>,
    eps_out: Vec<Vec<PStateId>>,
    eps_in: Vec<Vec<PStateId>>,
}

impl PAutomaton {
    pub fn new() -> Self {
        PAutomaton::default()
    }

    /// Returns the id of `s`, adding it if absent.
    pub fn add_state(&mut self, s: PState) -> PStateId {
        if let Some(&id) = self.index.get(&s) {
            return id;
        }
        let id = PStateId(self.states.len() as u32);
        self.states.push(s);
        self.index.insert(s, id);
        self.finals.push(false);
        self.out.push(Vec::new());
        self.inn.push(Vec::new());
        self.eps_out.push(Vec::new());
        self.eps_in.push(Vec::new());
        id
    }

    pub fn set_final(&mut self, id: PStateId) {
        self.finals[id.index()] = true;
    }

    pub fn is_final(&self, id: PStateId) -> bool {
        self.finals[id.index()]
    }

    pub fn state_id(&self, s: PState) -> Option<PStateId> {
        self.index.get(&s).copied()
    }

    pub fn state(&self, id: PStateId) -> PState {
        self.states[id.index()]
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.order.len()
    }

    /// Adds a transition; returns false if it was already present.
    pub fn add_transition(&mut self, from: PStateId, label: PLabel, to: PStateId) -> bool {
        let t = PTransition { from, label, to };
        if !self.edges.insert(t) {
            return false;
        }
        self.order.push(t);
        self.out[from.index()].push((label, to));
        self.inn[to.index()].push((label, from));
        if label == PLabel::Eps {
            self.eps_out[from.index()].push(to);
            self.eps_in[to.index()].push(from);
        }
        true
    }

    pub fn contains(&self, t: &PTransition) -> bool {
        self.edges.contains(t)
    }

    /// Transitions in insertion order.
    pub fn transitions(&self) -> &[PTransition] {
        &self.order
    }

    /// Transitions keyed by state identity rather than index, for comparing
    /// automata built in different orders.
    pub fn edge_set(&self) -> BTreeSet<(PState, PLabel, PState)> {
        self.order
            .iter()
            .map(|t| (self.state(t.from), t.label, self.state(t.to)))
            .collect()
    }

    pub(crate) fn outgoing(&self, id: PStateId) -> &[(PLabel, PStateId)] {
        &self.out[id.index()]
    }

    pub(crate) fn incoming(&self, id: PStateId) -> &[(PLabel, PStateId)] {
        &self.inn[id.index()]
    }

    pub(crate) fn eps_outgoing(&self, id: PStateId) -> &[PStateId] {
        &self.eps_out[id.index()]
    }

    pub(crate) fn eps_incoming(&self, id: PStateId) -> &[PStateId] {
        &self.eps_in[id.index()]
    }

    /// Control states, i.e. the initial states.
    pub fn controls(&self) -> impl Iterator<Item = StateId> + '_ {
        self.states.iter().filter_map(|s| match s {
            PState::Control(q) => Some(*q),
            _ => None,
        })
    }

    fn eps_closure(&self, from: impl IntoIterator<Item = PStateId>) -> BTreeSet<PStateId> {
        let mut seen: BTreeSet<PStateId> = BTreeSet::new();
        let mut queue: VecDeque<PStateId> = VecDeque::new();
        for s in from {
            if seen.insert(s) {
                queue.push_back(s);
            }
        }
        while let Some(s) = queue.pop_front() {
            for &t in self.eps_outgoing(s) {
                if seen.insert(t) {
                    queue.push_back(t);
                }
            }
        }
        seen
    }

    /// All `p` with `q (-ε->)* -γ-> (-ε->)* p`.
    pub fn reaches_over(&self, q: PStateId, g: StackSym) -> Result<BTreeSet<PStateId>, PreachError> {
        if q.index() >= self.states.len() {
            return Err(PreachError::UnknownState(q.0));
        }
        Ok(self.read(self.eps_closure([q]), g))
    }

    fn read(&self, from: BTreeSet<PStateId>, g: StackSym) -> BTreeSet<PStateId> {
        let mut next = Vec::new();
        for s in from {
            for &(l, t) in self.outgoing(s) {
                if l == PLabel::Sym(g) {
                    next.push(t);
                }
            }
        }
        self.eps_closure(next)
    }

    /// Whether the configuration's stack word, topmost symbol first and then
    /// the bottom marker, leads from its control state to a final state.
    pub fn recognizes(&self, c: &Configuration) -> Result<bool, PreachError> {
        let start = self
            .state_id(PState::Control(c.state))
            .ok_or(PreachError::NotControl(c.state))?;
        let mut cur = self.eps_closure([start]);
        for &g in c.stack.iter().chain(std::iter::once(&StackSym::BOTTOM)) {
            cur = self.read(cur, g);
            if cur.is_empty() {
                return Ok(false);
            }
        }
        Ok(cur.iter().any(|&s| self.is_final(s)))
    }

    /// States from which some final state is reachable.
    pub fn coreachable(&self) -> Vec<bool> {
        let mut live = self.finals.clone();
        let mut queue: VecDeque<PStateId> = (0..self.states.len() as u32)
            .map(PStateId)
            .filter(|s| live[s.index()])
            .collect();
        while let Some(s) = queue.pop_front() {
            for &(_, p) in self.incoming(s) {
                if !live[p.index()] {
                    live[p.index()] = true;
                    queue.push_back(p);
                }
            }
        }
        live
    }

    /// Every `(q, γ)` such that some recognized configuration has control
    /// state `q` and top of stack `γ` (the bottom marker for an empty
    /// explicit stack).
    pub fn reachable_top_facts(&self) -> BTreeSet<(StateId, StackSym)> {
        let live = self.coreachable();
        let mut facts = BTreeSet::new();
        for (i, s) in self.states.iter().enumerate() {
            let PState::Control(q) = *s else { continue };
            for s in self.eps_closure([PStateId(i as u32)]) {
                for &(l, t) in self.outgoing(s) {
                    let PLabel::Sym(g) = l else { continue };
                    if self.eps_closure([t]).iter().any(|p| live[p.index()]) {
                        facts.insert((q, g));
                    }
                }
            }
        }
        facts
    }

    /// One line per transition, `from label to`, with ε written as `eps`.
    pub fn render_edges(
        &self,
        state_name: impl Fn(StateId) -> String,
        stack_name: impl Fn(StackSym) -> String,
    ) -> String {
        let pname = |s: PState| match s {
            PState::Control(q) => state_name(q),
            PState::Aux(q, g) => format!("p_({},{})", state_name(q), stack_name(g)),
            PState::Final => "f".to_string(),
            PState::Extra(i) => format!("x{i}"),
        };
        let mut out = String::new();
        for t in &self.order {
            let label = match t.label {
                PLabel::Eps => "eps".to_string(),
                PLabel::Sym(g) => stack_name(g),
            };
            let _ = writeln!(
                out,
                "{} {} {}",
                pname(self.state(t.from)),
                label,
                pname(self.state(t.to))
            );
        }
        out
    }
}

/// The P-automaton recognizing `{(q0, empty stack) : q0 initial}`: every
/// VPA state as a control state, a final sink `f`, and `q0 -⊥-> f`.
pub fn initial_automaton(m: &Vpa) -> PAutomaton {
    let mut pa = PAutomaton::new();
    for q in m.states() {
        pa.add_state(PState::Control(q));
    }
    let f = pa.add_state(PState::Final);
    pa.set_final(f);
    for &q in m.initial() {
        let c = pa.add_state(PState::Control(q));
        pa.add_transition(c, PLabel::Sym(StackSym::BOTTOM), f);
    }
    pa
}
