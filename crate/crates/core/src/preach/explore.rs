use rustc_hash::FxHashSet as HashSet;

use thiserror::Error;

use super::automaton::{PAutomaton, PLabel, PState};
use super::saturate::{PdsRule, Saturator};
use crate::limits::Budget;
use crate::model::{StackSym, StateId, Symbol};

/// A pushdown rule together with the input symbol that triggers it.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledRule {
    pub symbol: Symbol,
    pub rule: PdsRule,
}

/// A VPA whose states and rules are produced on demand.
pub trait LazySystem {
    fn initial_states(&mut self) -> Vec<StateId>;

    /// Internal and push rules leaving `state`; these do not depend on the stack.
    fn state_rules(&mut self, state: StateId, out: &mut Vec<LabeledRule>);

    /// Return rules leaving `state` with `top` on top of the stack.
    fn pop_rules(&mut self, state: StateId, top: StackSym, out: &mut Vec<LabeledRule>);

    /// States whose discovery ends the exploration early.
    fn is_target(&self, _state: StateId) -> bool {
        false
    }
}

/// When a target state ends the exploration.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum StopPoint {
    /// As soon as a rule leading to it is generated, before the rule is fed
    /// to saturation. Rules are only generated for genuinely reachable
    /// (state, top) facts, so the target is genuinely reachable too.
    #[default]
    OnCreation,
    /// Once it shows up as the control state of a top-of-stack fact.
    OnTopFact,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExploreStats {
    pub states: usize,
    pub pa_transitions: usize,
    pub iterations: usize,
}

#[derive(Debug, Error, Clone, Copy, PartialEq, Eq)]
#[error("exploration interrupted after {} iterations", .0.iterations)]
pub struct Interrupted(pub ExploreStats);

#[derive(Clone, Debug)]
pub struct Exploration {
    /// Generated rules, deduplicated, in generation order.
    pub rules: Vec<LabeledRule>,
    /// Discovered states in discovery order.
    pub states: Vec<StateId>,
    pub stopped_at: Option<StateId>,
    pub automaton: PAutomaton,
    pub stats: ExploreStats,
}

/// Interleaves rule generation with post* saturation: rules are generated
/// only for (state, top) facts the P-automaton has proved reachable, and
/// each batch of new rules resumes the saturation. Stops at the fixpoint,
/// or at the first target state when `stop` is set.
pub fn explore<S: LazySystem>(
    sys: &mut S,
    stop: Option<StopPoint>,
    budget: &mut Budget,
) -> Result<Exploration, Interrupted> {
    let mut discovered: HashSet<StateId> = HashSet::default();
    let mut states = Vec::new();
    let mut rules = Vec::new();
    let mut rule_set: HashSet<LabeledRule> = HashSet::default();
    let mut stats = ExploreStats::default();
    let on_creation = stop == Some(StopPoint::OnCreation);
    let on_fact = stop == Some(StopPoint::OnTopFact);

    let mut pa = PAutomaton::new();
    let f = pa.add_state(PState::Final);
    pa.set_final(f);
    let mut stopped_at = None;
    for s in sys.initial_states() {
        if discovered.insert(s) {
            states.push(s);
            if on_creation && stopped_at.is_none() && sys.is_target(s) {
                stopped_at = Some(s);
            }
        }
        let c = pa.add_state(PState::Control(s));
        pa.add_transition(c, PLabel::Sym(StackSym::BOTTOM), f);
    }
    let mut sat = Saturator::new(pa);
    let finish = |sat: Saturator, rules, states: Vec<StateId>, stopped_at, mut stats: ExploreStats| {
        stats.states = states.len();
        stats.pa_transitions = sat.automaton().num_transitions();
        Exploration {
            rules,
            states,
            stopped_at,
            automaton: sat.into_automaton(),
            stats,
        }
    };
    if stopped_at.is_some() {
        return Ok(finish(sat, rules, states, stopped_at, stats));
    }

    let interrupted = |sat: &Saturator, states: &Vec<StateId>, mut stats: ExploreStats| {
        stats.states = states.len();
        stats.pa_transitions = sat.automaton().num_transitions();
        Interrupted(stats)
    };

    let mut expanded: HashSet<StateId> = HashSet::default();
    let mut checked: HashSet<StateId> = HashSet::default();
    let mut batch = Vec::new();
    loop {
        sat.run(budget).map_err(|_| interrupted(&sat, &states, stats))?;
        let facts = sat.take_new_facts();
        if on_fact {
            for &(s, _) in &facts {
                if checked.insert(s) && sys.is_target(s) {
                    return Ok(finish(sat, rules, states, Some(s), stats));
                }
            }
        }
        batch.clear();
        for (s, top) in facts {
            budget.tick().map_err(|_| interrupted(&sat, &states, stats))?;
            if expanded.insert(s) {
                sys.state_rules(s, &mut batch);
            }
            sys.pop_rules(s, top, &mut batch);
        }
        let mut fresh = false;
        for &r in &batch {
            budget.tick().map_err(|_| interrupted(&sat, &states, stats))?;
            if !rule_set.insert(r) {
                continue;
            }
            fresh = true;
            budget.charge(1).map_err(|_| interrupted(&sat, &states, stats))?;
            rules.push(r);
            let to = r.rule.to();
            if discovered.insert(to) {
                states.push(to);
                if on_creation && sys.is_target(to) {
                    return Ok(finish(sat, rules, states, Some(to), stats));
                }
            }
            sat.add_rule(r.rule);
        }
        if !fresh && sat.is_idle() {
            break;
        }
        stats.iterations += 1;
    }
    Ok(finish(sat, rules, states, None, stats))
}
