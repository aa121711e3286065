use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};
use std::collections::VecDeque;

use super::automaton::{PAutomaton, PLabel, PState, PStateId, PTransition};
use crate::limits::{Budget, Exhausted};
use crate::model::{StackSym, StateId, Vpa};

/// A pushdown rule with the input symbol erased.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PdsRule {
    Internal {
        from: StateId,
        to: StateId,
    },
    Push {
        from: StateId,
        to: StateId,
        push: StackSym,
    },
    /// Popping the bottom marker reads it without removing it.
    Pop {
        from: StateId,
        top: StackSym,
        to: StateId,
    },
}

impl PdsRule {
    pub fn from(&self) -> StateId {
        match *self {
            PdsRule::Internal { from, .. } | PdsRule::Push { from, .. } | PdsRule::Pop { from, .. } => from,
        }
    }

    pub fn to(&self) -> StateId {
        match *self {
            PdsRule::Internal { to, .. } | PdsRule::Push { to, .. } | PdsRule::Pop { to, .. } => to,
        }
    }
}

/// The stack-level rules of a VPA.
pub fn vpa_rules(m: &Vpa) -> impl Iterator<Item = PdsRule> + '_ {
    let calls = m.call_rules().iter().map(|r| PdsRule::Push {
        from: r.from,
        to: r.to,
        push: r.push,
    });
    let rets = m.return_rules().iter().map(|r| PdsRule::Pop {
        from: r.from,
        top: r.pop,
        to: r.to,
    });
    let ints = m.internal_rules().iter().map(|r| PdsRule::Internal {
        from: r.from,
        to: r.to,
    });
    calls.chain(rets).chain(ints)
}

/// Incremental post* saturation.
///
/// Transitions are kept closed under ε-shortcuts: whenever
/// `x -ε-> y -l-> z` or `x -γ-> y -ε-> z` is present, so is the direct
/// `x -l-> z` (resp. `x -γ-> z`). A direct `q -γ-> p` edge then stands for
/// `q ⟹γ p`, and the three saturation rules only ever need to look at
/// direct edges. Rules may be added at any time and the fixpoint resumes
/// from the current automaton.
#[derive(Clone, Debug)]
pub struct Saturator {
    pa: PAutomaton,
    internal: HashMap<StateId, Vec<StateId>>,
    push: HashMap<StateId, Vec<(StateId, StackSym)>>,
    pop: HashMap<(StateId, StackSym), Vec<StateId>>,
    rules: HashSet<PdsRule>,
    worklist: VecDeque<PTransition>,
    facts: HashSet<(StateId, StackSym)>,
    /// Targets of processed direct edges leaving control states, by label.
    below: HashMap<(StateId, StackSym), Vec<PStateId>>,
    new_facts: Vec<(StateId, StackSym)>,
    scratch: Vec<(PLabel, PStateId)>,
    ids: Vec<PStateId>,
}

impl Saturator {
    /// Starts from a seed automaton; all of its transitions are queued.
    pub fn new(pa: PAutomaton) -> Self {
        let worklist = pa.transitions().iter().copied().collect();
        Saturator {
            pa,
            internal: HashMap::default(),
            push: HashMap::default(),
            pop: HashMap::default(),
            rules: HashSet::default(),
            worklist,
            facts: HashSet::default(),
            below: HashMap::default(),
            new_facts: Vec::new(),
            scratch: Vec::new(),
            ids: Vec::new(),
        }
    }

    pub fn automaton(&self) -> &PAutomaton {
        &self.pa
    }

    pub fn into_automaton(self) -> PAutomaton {
        self.pa
    }

    pub fn num_rules(&self) -> usize {
        self.rules.len()
    }

    /// Ensures a control state exists.
    pub fn add_control(&mut self, q: StateId) -> PStateId {
        self.pa.add_state(PState::Control(q))
    }

    /// Registers a rule and fires it against the direct edges already
    /// leaving its source; pop rules only look at processed edges, the rest
    /// are still queued and will fire on their own. Call [`run`](Saturator::run) afterwards.
    pub fn add_rule(&mut self, rule: PdsRule) {
        if !self.rules.insert(rule) {
            return;
        }
        self.add_control(rule.from());
        self.add_control(rule.to());
        let edges: Vec<(StackSym, PStateId)> = match rule {
            PdsRule::Internal { from, to } => {
                self.internal.entry(from).or_default().push(to);
                self.edges_from(from)
            }
            PdsRule::Push { from, to, push } => {
                self.push.entry(from).or_default().push((to, push));
                self.edges_from(from)
            }
            PdsRule::Pop { from, top, to } => {
                self.pop.entry((from, top)).or_default().push(to);
                let ps = self.below.get(&(from, top)).map_or(&[][..], Vec::as_slice);
                ps.iter().map(|&p| (top, p)).collect()
            }
        };
        for (g, p) in edges {
            self.fire(rule, g, p);
        }
    }

    fn edges_from(&self, q: StateId) -> Vec<(StackSym, PStateId)> {
        let Some(src) = self.pa.state_id(PState::Control(q)) else {
            return Vec::new();
        };
        let mut edges = Vec::new();
        for &(l, t) in self.pa.outgoing(src) {
            if let PLabel::Sym(g) = l {
                edges.push((g, t));
            }
        }
        edges
    }

    /// Drains the worklist.
    pub fn run(&mut self, budget: &mut Budget) -> Result<(), Exhausted> {
        self.run_until(budget, |_| false).map(|_| ())
    }

    /// Drains the worklist, stopping early at the first new top fact whose
    /// control state satisfies `stop`.
    pub fn run_until(
        &mut self,
        budget: &mut Budget,
        mut stop: impl FnMut(StateId) -> bool,
    ) -> Result<Option<StateId>, Exhausted> {
        while !self.worklist.is_empty() {
            budget.tick()?;
            budget.charge(1)?;
            let t = self.worklist.pop_front().expect("non-empty");
            let before = self.new_facts.len();
            self.process(t);
            if let Some(&(q, _)) = self.new_facts[before..].iter().find(|(q, _)| stop(*q)) {
                return Ok(Some(q));
            }
        }
        Ok(None)
    }

    /// `(control state, top of stack)` pairs first seen since the last call.
    pub fn take_new_facts(&mut self) -> Vec<(StateId, StackSym)> {
        std::mem::take(&mut self.new_facts)
    }

    pub fn is_idle(&self) -> bool {
        self.worklist.is_empty()
    }

    fn add(&mut self, from: PStateId, label: PLabel, to: PStateId) {
        if self.pa.add_transition(from, label, to) {
            self.worklist.push_back(PTransition { from, label, to });
        }
    }

    fn process(&mut self, t: PTransition) {
        let PTransition {
            from: x,
            label,
            to: y,
        } = t;

        // w -ε-> x -l-> y  ⇒  w -l-> y
        self.ids.clear();
        self.ids.extend_from_slice(self.pa.eps_incoming(x));
        for i in 0..self.ids.len() {
            self.add(self.ids[i], label, y);
        }
        match label {
            PLabel::Eps => {
                // x -ε-> y -l-> z  ⇒  x -l-> z
                self.scratch.clear();
                self.scratch.extend_from_slice(self.pa.outgoing(y));
                for i in 0..self.scratch.len() {
                    let (l, z) = self.scratch[i];
                    self.add(x, l, z);
                }
                // v -γ-> x -ε-> y  ⇒  v -γ-> y
                self.scratch.clear();
                self.scratch
                    .extend(self.pa.incoming(x).iter().filter(|(l, _)| *l != PLabel::Eps));
                for i in 0..self.scratch.len() {
                    let (l, v) = self.scratch[i];
                    self.add(v, l, y);
                }
            }
            PLabel::Sym(g) => {
                // x -γ-> y -ε-> z  ⇒  x -γ-> z
                self.ids.clear();
                self.ids.extend_from_slice(self.pa.eps_outgoing(y));
                for i in 0..self.ids.len() {
                    self.add(x, label, self.ids[i]);
                }
                if let PState::Control(q) = self.pa.state(x) {
                    if self.facts.insert((q, g)) {
                        self.new_facts.push((q, g));
                    }
                    self.below.entry((q, g)).or_default().push(y);
                    self.fire_all(q, g, y);
                }
            }
        }
    }

    fn fire_all(&mut self, q: StateId, g: StackSym, p: PStateId) {
        if let Some(targets) = self.internal.get(&q) {
            for to in targets.clone() {
                self.fire(PdsRule::Internal { from: q, to }, g, p);
            }
        }
        if let Some(targets) = self.push.get(&q) {
            for (to, push) in targets.clone() {
                self.fire(PdsRule::Push { from: q, to, push }, g, p);
            }
        }
        if let Some(targets) = self.pop.get(&(q, g)) {
            for to in targets.clone() {
                self.fire(PdsRule::Pop { from: q, top: g, to }, g, p);
            }
        }
    }

    /// Applies `rule` given `from ⟹g p`.
    fn fire(&mut self, rule: PdsRule, g: StackSym, p: PStateId) {
        match rule {
            PdsRule::Internal { to, .. } => {
                let t = self.add_control(to);
                self.add(t, PLabel::Sym(g), p);
            }
            PdsRule::Push { to, push, .. } => {
                let t = self.add_control(to);
                let aux = self.pa.add_state(PState::Aux(to, push));
                self.add(t, PLabel::Sym(push), aux);
                self.add(aux, PLabel::Sym(g), p);
            }
            PdsRule::Pop { top, to, .. } => {
                if top != g {
                    return;
                }
                let t = self.add_control(to);
                if top.is_bottom() {
                    self.add(t, PLabel::Sym(StackSym::BOTTOM), p);
                } else {
                    self.add(t, PLabel::Eps, p);
                }
            }
        }
    }
}

/// Least fixpoint of the saturation rules for `m`, starting from `pa`.
pub fn saturate(m: &Vpa, pa: PAutomaton) -> PAutomaton {
    let mut sat = Saturator::new(pa);
    for r in vpa_rules(m) {
        sat.add_rule(r);
    }
    sat.run(&mut Budget::unlimited()).expect("unlimited budget");
    sat.into_automaton()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::fixtures::{abc_alphabet, v0, v1, vu};
    use crate::model::{Configuration, VpaBuilder};
    use crate::preach::initial_automaton;
    use std::collections::BTreeSet;

    #[test]
    fn v1_reaches_nested_pushes() {
        let m = v1();
        let pa = saturate(&m, initial_automaton(&m));
        let g = m.stack_by_name("g").unwrap();
        let q0 = StateId(0);
        assert!(pa.recognizes(&Configuration::new(q0, vec![g])).unwrap());
        assert!(pa.recognizes(&Configuration::new(q0, vec![g, g])).unwrap());
        assert_eq!(
            pa.reachable_top_facts(),
            BTreeSet::from([(q0, StackSym::BOTTOM), (q0, g)])
        );
    }

    #[test]
    fn v0_recognizes_every_push_height() {
        let m = v0();
        let pa = saturate(&m, initial_automaton(&m));
        let g = m.stack_by_name("g").unwrap();
        for k in 0..=4 {
            assert!(pa
                .recognizes(&Configuration::new(StateId(0), vec![g; k]))
                .unwrap());
        }
    }

    #[test]
    fn no_rules_leaves_seed_unchanged() {
        let m = VpaBuilder::new(abc_alphabet())
            .state("q0")
            .state("q1")
            .initial("q0")
            .build()
            .unwrap();
        let seed = initial_automaton(&m);
        let pa = saturate(&m, seed.clone());
        assert_eq!(pa.edge_set(), seed.edge_set());
    }

    #[test]
    fn bottom_return_keeps_marker() {
        let m = vu();
        let pa = saturate(&m, initial_automaton(&m));
        // no ε-edge may come from a bottom return; (q0, []) is still recognized
        assert!(pa.recognizes(&Configuration::new(StateId(0), vec![])).unwrap());
        let f = pa.state_id(PState::Final).unwrap();
        let q0 = pa.state_id(PState::Control(StateId(0))).unwrap();
        assert!(!pa.contains(&PTransition {
            from: q0,
            label: PLabel::Eps,
            to: f
        }));
    }

    #[test]
    fn idempotent() {
        let m = vu();
        let once = saturate(&m, initial_automaton(&m));
        let twice = saturate(&m, once.clone());
        assert_eq!(once.edge_set(), twice.edge_set());
    }

    #[test]
    fn incremental_rules_match_batch() {
        let m = v1();
        let batch = saturate(&m, initial_automaton(&m));
        let mut sat = Saturator::new(initial_automaton(&m));
        let mut budget = Budget::unlimited();
        for r in vpa_rules(&m) {
            sat.run(&mut budget).unwrap();
            sat.add_rule(r);
        }
        sat.run(&mut budget).unwrap();
        assert_eq!(sat.automaton().edge_set(), batch.edge_set());
    }
}
